//! The `dimerkit` command line.
//!
//! Exit codes: 0 success or the property holds, 1 the property fails,
//! 2 invalid input, 3 inconclusive at the bounds, 64 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dimerkit::algebras::{
    check_r_equals_s, compare_corner_rings, cycle_algebra, homotopy_center, Bounds, CornerRings, RsVerdict,
};
use dimerkit::contraction::{
    self, find_cyclic_contractions, parse_contraction, reduce_two_cycles, Contraction, CyclicVerdict,
    DEFAULT_CANDIDATE_LIMIT,
};
use dimerkit::criteria::{self, theorem_report, CriteriaError, ReportOptions, DEFAULT_PAIR_MAX_LEN};
use dimerkit::model::validate;
use dimerkit::paths::{enumerate_paths, DEFAULT_PATH_CAP};
use dimerkit::{corpus, draw, DimerAlgebra, DimerQuiver, MatchingTable, VertexId, Weight, Winding};

pub mod report;

use report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "dimerkit", version, about = "Cancellativity and cycle algebras of dimer quivers on the torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// A `.dimer` or `.json` file, or `corpus:<name>`.
    model: String,
    /// Emit a JSON report.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the dimer-quiver invariants.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// List perfect and simple matchings.
    Matchings {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        simple_only: bool,
    },
    /// List paths between two vertices with their weights.
    Paths {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        max_len: usize,
        /// Keep only paths of this winding, as `u1,u2`.
        #[arg(long, value_parser = parse_winding, allow_hyphen_values = true)]
        winding: Option<Winding>,
    },
    /// Evaluate the ten equivalent conditions.
    Check {
        #[command(flatten)]
        common: Common,
        /// Contraction file (JSON).
        #[arg(long)]
        contraction: Option<PathBuf>,
        /// Longest path considered in the non-cancellative pair search.
        #[arg(long, default_value_t = DEFAULT_PAIR_MAX_LEN)]
        max_len: usize,
        #[arg(long)]
        degree_bound: Option<u64>,
    },
    /// Corner rings, the cycle algebra S and the homotopy center R.
    Algebras {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        contraction: Option<PathBuf>,
        #[arg(long)]
        degree_bound: Option<u64>,
    },
    /// Contract arrows, or search for a cyclic contraction.
    Contract {
        #[command(flatten)]
        common: Common,
        /// Comma-separated arrow names.
        #[arg(long, value_delimiter = ',', conflicts_with = "find", required_unless_present = "find")]
        arrows: Vec<String>,
        #[arg(long)]
        find: bool,
        /// Remove unit 2-cycles from the target before writing it.
        #[arg(long = "reduce-2cycles")]
        reduce_two_cycles: bool,
        /// Write the target quiver (`.dimer` or `.json`).
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Write the contraction file (JSON).
        #[arg(long)]
        save_contraction: Option<PathBuf>,
        #[arg(long)]
        degree_bound: Option<u64>,
    },
    /// List the built-in models, or print one.
    Corpus {
        name: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Draw the fundamental domain.
    Draw {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        /// Highlight the perfect matching with this id.
        #[arg(long)]
        matching: Option<usize>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Dot,
}

fn parse_winding(s: &str) -> Result<Winding, String> {
    let (a, b) = s.split_once(',').ok_or("expected `u1,u2`")?;
    let a = a.trim().parse().map_err(|_| format!("bad integer `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad integer `{b}`"))?;
    Ok(Winding::new(a, b))
}

/// A failed command: exit code and message for standard error.
struct Failure {
    code: i32,
    error: anyhow::Error,
}

impl Failure {
    fn invalid(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: EXIT_INVALID,
            error: error.into(),
        }
    }
}

type Outcome = Result<i32, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    json: bool,
    command: &'static str,
}

impl Io<'_> {
    fn emit<T: Serialize>(&mut self, code: i32, result: T, text: impl FnOnce() -> String) -> Outcome {
        let body = if self.json {
            Envelope::new(self.command, code, result).to_json() + "\n"
        } else {
            text()
        };
        self.out
            .write_all(body.as_bytes())
            .map_err(|e| Failure::invalid(anyhow!("writing output: {e}")))?;
        Ok(code)
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let (command, json) = describe(&cli.command);
    let mut io = Io { out, json, command };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {:#}", f.error);
            if json {
                let body = Envelope::new(command, f.code, ErrorResult {
                    error: format!("{:#}", f.error),
                });
                let _ = writeln!(io.out, "{}", body.to_json());
            }
            f.code
        }
    }
}

fn describe(c: &Command) -> (&'static str, bool) {
    match c {
        Command::Validate { common } => ("validate", common.json),
        Command::Matchings { common, .. } => ("matchings", common.json),
        Command::Paths { common, .. } => ("paths", common.json),
        Command::Check { common, .. } => ("check", common.json),
        Command::Algebras { common, .. } => ("algebras", common.json),
        Command::Contract { common, .. } => ("contract", common.json),
        Command::Corpus { json, .. } => ("corpus", *json),
        Command::Draw { common, .. } => ("draw", common.json),
    }
}

fn dispatch(command: Command, io: &mut Io) -> Outcome {
    match command {
        Command::Validate { common } => cmd_validate(&common.model, io),
        Command::Matchings { common, simple_only } => cmd_matchings(&common.model, simple_only, io),
        Command::Paths {
            common,
            from,
            to,
            max_len,
            winding,
        } => cmd_paths(&common.model, from, to, max_len, winding, io),
        Command::Check {
            common,
            contraction,
            max_len,
            degree_bound,
        } => cmd_check(&common.model, contraction.as_deref(), max_len, degree_bound, io),
        Command::Algebras {
            common,
            contraction,
            degree_bound,
        } => cmd_algebras(&common.model, contraction.as_deref(), degree_bound, io),
        Command::Contract {
            common,
            arrows,
            find,
            reduce_two_cycles,
            output,
            save_contraction,
            degree_bound,
        } => cmd_contract(
            &common.model,
            ContractOptions {
                arrows,
                find,
                reduce: reduce_two_cycles,
                output,
                save_contraction,
                degree_bound,
            },
            io,
        ),
        Command::Corpus { name, .. } => cmd_corpus(name.as_deref(), io),
        Command::Draw {
            common,
            format,
            matching,
            output,
        } => cmd_draw(&common.model, format, matching, output.as_deref(), io),
    }
}

/// Reads a model without validating it.
fn read_model(spec: &str) -> Result<DimerQuiver, Failure> {
    if let Some(name) = spec.strip_prefix("corpus:") {
        return corpus::get(name)
            .map(|e| e.quiver())
            .ok_or_else(|| Failure::invalid(anyhow!("unknown corpus model `{name}`; try `dimerkit corpus`")));
    }
    let text = std::fs::read_to_string(spec)
        .with_context(|| format!("reading {spec}"))
        .map_err(Failure::invalid)?;
    let parsed = if spec.ends_with(".json") {
        DimerQuiver::from_json(&text)
    } else {
        DimerQuiver::parse(&text)
    };
    parsed.with_context(|| format!("parsing {spec}")).map_err(Failure::invalid)
}

/// Reads a model and requires it to be a dimer quiver.
fn load_model(spec: &str) -> Result<DimerQuiver, Failure> {
    let q = read_model(spec)?;
    let report = validate(&q);
    if !report.valid {
        let failed: Vec<&str> = report.failed().map(|i| i.name()).collect();
        return Err(Failure::invalid(anyhow!("{spec} is not a dimer quiver: fails {}", failed.join(", "))));
    }
    Ok(q)
}

fn load_contraction(q: &DimerQuiver, path: &Path) -> Result<Contraction, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::invalid)?;
    let file = parse_contraction(&text).map_err(Failure::invalid)?;
    Contraction::from_file(q, &file).map_err(Failure::invalid)
}

fn write_file(path: &Path, contents: &str) -> Result<String, Failure> {
    std::fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::invalid)?;
    Ok(path.display().to_string())
}

fn bounds_with_degree(q: &DimerQuiver, dim: usize, degree: Option<u64>) -> Result<Bounds, Failure> {
    let mut b = Bounds::for_quiver(q, dim).map_err(Failure::invalid)?;
    if let Some(d) = degree {
        b.degree = d;
    }
    Ok(b)
}

fn names(q: &DimerQuiver, arrows: &[dimerkit::ArrowId]) -> Vec<String> {
    q.arrow_names(arrows)
}

fn cmd_validate(spec: &str, io: &mut Io) -> Outcome {
    let q = read_model(spec)?;
    let report = validate(&q);
    let code = if report.valid { EXIT_OK } else { EXIT_INVALID };
    let text = || {
        let mut s = format!(
            "{spec}: {} vertices, {} arrows, {} faces\n",
            q.vertex_count(),
            q.arrows().len(),
            q.faces().len()
        );
        for c in &report.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            s += &format!("  {mark} {}", c.invariant);
            if let Some(w) = &c.witness {
                s += &format!(": {w}");
            }
            s.push('\n');
        }
        for w in &report.warnings {
            s += &format!("  warning: {w}\n");
        }
        s += if report.valid { "valid\n" } else { "invalid\n" };
        s
    };
    let result = ValidateResult {
        model: spec.to_string(),
        vertices: q.vertex_count(),
        arrows: q.arrows().len(),
        faces: q.faces().len(),
        report: report.clone(),
    };
    io.emit(code, result, text)
}

fn cmd_matchings(spec: &str, simple_only: bool, io: &mut Io) -> Outcome {
    let q = load_model(spec)?;
    let table = MatchingTable::compute(&q).map_err(Failure::invalid)?;
    let matchings: Vec<MatchingEntry> = table
        .perfect
        .iter()
        .map(|d| MatchingEntry {
            id: d.id,
            arrows: d.names(&q),
            simple: table.simple.contains(&d.id),
        })
        .filter(|m| m.simple || !simple_only)
        .collect();
    let qs: Vec<_> = table.qs_arrows(&q).into_iter().collect();
    let result = MatchingsResult {
        model: spec.to_string(),
        perfect_count: table.perfect.len(),
        simple_count: table.simple.len(),
        matchings,
        qs_arrows: names(&q, &qs),
    };
    let text = || {
        let mut s = format!("{} perfect matchings, {} simple\n", result.perfect_count, result.simple_count);
        for m in &result.matchings {
            s += &format!(
                "  D{} {{{}}}{}\n",
                m.id,
                m.arrows.join(", "),
                if m.simple { " simple" } else { "" }
            );
        }
        if !result.qs_arrows.is_empty() {
            s += &format!("arrows in no simple matching: {}\n", result.qs_arrows.join(" "));
        }
        s
    };
    io.emit(EXIT_OK, result.clone(), text)
}

fn cmd_paths(spec: &str, from: usize, to: usize, max_len: usize, winding: Option<Winding>, io: &mut Io) -> Outcome {
    let q = load_model(spec)?;
    for v in [from, to] {
        if v >= q.vertex_count() {
            return Err(Failure::invalid(anyhow!("vertex {v} out of range (0..{})", q.vertex_count())));
        }
    }
    let alg = DimerAlgebra::new(&q).map_err(Failure::invalid)?;
    let paths = enumerate_paths(&q, Some(VertexId(from)), max_len, DEFAULT_PATH_CAP).map_err(Failure::invalid)?;
    let entries: Vec<PathEntry> = paths
        .iter()
        .filter(|p| p.head() == VertexId(to) && winding.is_none_or(|u| p.winding() == u))
        .map(|p| PathEntry {
            arrows: names(&q, p.arrows()),
            winding: p.winding(),
            tau: alg.tau_weight(p),
            eta: alg.eta_weight(p),
        })
        .collect();
    let result = PathsResult {
        model: spec.to_string(),
        from: VertexId(from),
        to: VertexId(to),
        max_len,
        winding,
        paths: entries,
    };
    let text = || {
        let mut s = format!("{} paths from {from} to {to} of length <= {max_len}\n", result.paths.len());
        for p in &result.paths {
            let word = if p.arrows.is_empty() {
                format!("e{from}")
            } else {
                p.arrows.join(" ")
            };
            s += &format!("  [{word}] winding {} tau {} eta {}\n", p.winding, p.tau, p.eta);
        }
        s
    };
    io.emit(EXIT_OK, result.clone(), text)
}

fn criteria_failure(e: CriteriaError) -> Failure {
    match e {
        CriteriaError::Inconsistent(_) => Failure {
            code: EXIT_INCONCLUSIVE,
            error: e.into(),
        },
        other => Failure::invalid(other),
    }
}

fn cmd_check(spec: &str, contraction: Option<&Path>, max_len: usize, degree: Option<u64>, io: &mut Io) -> Outcome {
    let q = load_model(spec)?;
    let psi = contraction.map(|p| load_contraction(&q, p)).transpose()?;
    let bounds = match degree {
        Some(_) => {
            let dim = match &psi {
                Some(c) => MatchingTable::compute(c.target()).map_err(Failure::invalid)?.simple.len(),
                None => 0,
            };
            Some(bounds_with_degree(&q, dim, degree)?)
        }
        None => None,
    };
    let opts = ReportOptions {
        bounds,
        pair_max_len: max_len,
    };
    let report = theorem_report(&q, psi.as_ref(), opts).map_err(criteria_failure)?;
    let code = if report.cancellative { EXIT_OK } else { EXIT_FAILS };
    let text = || check_text(&report);
    io.emit(
        code,
        CheckResult {
            model: spec.to_string(),
            report: report.clone(),
        },
        text,
    )
}

fn check_text(r: &criteria::CriteriaReport) -> String {
    let mut s = String::new();
    s += if r.cancellative { "cancellative\n" } else { "not cancellative\n" };
    if let Some(b) = &r.bounds {
        s += &format!("bounds: {b}\n");
    }
    for c in &r.conditions {
        let verdict = serde_json::to_value(c.verdict).expect("verdict serializes");
        s += &format!(
            "  ({:>2}) {:<14} {} [{}]\n",
            c.number,
            verdict.as_str().unwrap_or_default(),
            c.statement,
            c.method
        );
        if let Some(e) = &c.evidence {
            s += &format!("        {e}\n");
        }
    }
    if !r.uncovered_arrows.is_empty() {
        s += &format!("arrows in no simple matching: {}\n", r.uncovered_arrows.join(" "));
    }
    match &r.contraction {
        Some(c) if c.is_empty() => s += "cyclic contraction: identity\n",
        Some(c) => s += &format!("cyclic contraction: contract {{{}}}\n", c.join(", ")),
        None => {}
    }
    if let Some(w) = &r.noncancellative_pair {
        s += &format!(
            "non-cancellative pair: p = [{}], q = [{}] from {} to {}, winding {}, eta {}\n",
            w.p.join(" "),
            w.q.join(" "),
            w.tail.0,
            w.head.0,
            w.winding,
            w.eta
        );
        if let Some(m) = &w.multiplier {
            let side = match m.side {
                criteria::Side::Left => "r p = r q",
                criteria::Side::Right => "p r = q r",
            };
            s += &format!("  with r = [{}]: {side}\n", m.r.join(" "));
        }
    }
    if let Some(n) = &r.nonnoetherian {
        s += &format!(
            "nonnoetherian witness: cycle [{}] at {} has weight {} missing from the corner ring at {}\n",
            n.cycle.join(" "),
            n.vertex.0,
            n.weight,
            n.missing_at.0
        );
    }
    if let Some(pi) = &r.pi {
        s += &format!("PI: {}\n", pi.summary);
    }
    for note in &r.notes {
        s += &format!("note: {note}\n");
    }
    s
}

fn monomial(vars: &[String], w: &Weight) -> Monomial {
    vars.iter()
        .zip(w.entries())
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| (v.clone(), e))
        .collect()
}

fn fmt_monomial(m: &Monomial) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn cmd_algebras(spec: &str, contraction: Option<&Path>, degree: Option<u64>, io: &mut Io) -> Outcome {
    let q = load_model(spec)?;
    let mut psi = match contraction {
        Some(p) => load_contraction(&q, p)?,
        None => {
            let table = MatchingTable::compute(&q).map_err(Failure::invalid)?;
            if table.qs_arrows(&q).is_empty() {
                contraction::identity(&q)
            } else {
                match contraction::find_cyclic_contraction(&q, None).map_err(Failure::invalid)? {
                    Some(c) => c,
                    None => {
                        return Err(Failure {
                            code: EXIT_INCONCLUSIVE,
                            error: anyhow!("no cyclic contraction found within the search limits; pass --contraction"),
                        })
                    }
                }
            }
        }
    };
    let target_table = MatchingTable::compute(psi.target()).map_err(Failure::invalid)?;
    let weights = psi.tau_psi(&target_table);
    let bounds = bounds_with_degree(&q, weights.dim(), degree)?;
    let verdict = psi.verify_cyclic(Some(bounds)).map_err(Failure::invalid)?;
    let rings = CornerRings::compute(&q, &weights, bounds).map_err(Failure::invalid)?;

    let target = psi.target();
    let mut variables = BTreeMap::new();
    let vars: Vec<String> = target_table
        .simple_matchings()
        .map(|d| {
            let name = format!("D{}", d.id);
            variables.insert(name.clone(), d.names(target));
            name
        })
        .collect();
    let corners = rings
        .rings
        .iter()
        .map(|r| CornerEntry {
            vertex: r.vertex,
            generators: r.semigroup.generators().iter().map(|g| monomial(&vars, g)).collect(),
        })
        .collect();
    let comparison = compare_corner_rings(&rings);
    let rs = check_r_equals_s(&rings);
    let result = AlgebrasResult {
        model: spec.to_string(),
        contraction: psi.contracted_names(),
        contraction_verdict: Some(verdict),
        variables,
        bounds,
        corners,
        corners_equal: comparison.all_equal(),
        corner_comparison: comparison,
        cycle_algebra: cycle_algebra(&rings).generators().iter().map(|g| monomial(&vars, g)).collect(),
        homotopy_center: homotopy_center(&rings).generators().iter().map(|g| monomial(&vars, g)).collect(),
        r_equals_s: rs,
    };
    let code = match result.r_equals_s.verdict {
        RsVerdict::EqualAtBound => EXIT_OK,
        RsVerdict::Differ => EXIT_FAILS,
        RsVerdict::Inconclusive => EXIT_INCONCLUSIVE,
    };
    let text = || {
        let list = |ms: &[Monomial]| ms.iter().map(fmt_monomial).collect::<Vec<_>>().join(", ");
        let mut s = String::new();
        if !result.contraction.is_empty() {
            s += &format!("through contraction of {{{}}}\n", result.contraction.join(", "));
        }
        s += &format!("bounds: {}\n", result.bounds);
        for (name, arrows) in &result.variables {
            s += &format!("  {name} = {{{}}}\n", arrows.join(", "));
        }
        for c in &result.corners {
            s += &format!("corner ring at {}: {}\n", c.vertex.0, list(&c.generators));
        }
        s += &format!(
            "corner rings {}\n",
            if result.corners_equal { "all equal" } else { "differ" }
        );
        s += &format!("S: {}\n", list(&result.cycle_algebra));
        s += &format!("R: {}\n", list(&result.homotopy_center));
        s += match result.r_equals_s.verdict {
            RsVerdict::EqualAtBound => "R = S at bound\n",
            RsVerdict::Differ => "R != S\n",
            RsVerdict::Inconclusive => "R = S inconclusive at bound\n",
        };
        if let Some(w) = &result.r_equals_s.membership_witness {
            s += &format!(
                "  generator {} of S (winding {}) is not in the corner ring at {}\n",
                fmt_monomial(&monomial(&vars, &w.generator)),
                w.winding,
                w.vertex.0
            );
        }
        s
    };
    io.emit(code, result.clone(), text)
}

struct ContractOptions {
    arrows: Vec<String>,
    find: bool,
    reduce: bool,
    output: Option<PathBuf>,
    save_contraction: Option<PathBuf>,
    degree_bound: Option<u64>,
}

fn cmd_contract(spec: &str, opts: ContractOptions, io: &mut Io) -> Outcome {
    let q = load_model(spec)?;
    let bounds = match opts.degree_bound {
        Some(d) => {
            let dim = MatchingTable::compute(&q).map_err(Failure::invalid)?.simple.len();
            Some(bounds_with_degree(&q, dim, Some(d))?)
        }
        None => None,
    };
    let mut result = ContractResult {
        model: spec.to_string(),
        contraction: None,
        verdict: None,
        search: None,
        target_vertices: None,
        target_arrows: None,
        target_faces: None,
        reduced_arrows: Vec::new(),
        written: Vec::new(),
    };
    let (psi, code) = if opts.find {
        let outcome = find_cyclic_contractions(&q, bounds, DEFAULT_CANDIDATE_LIMIT).map_err(Failure::invalid)?;
        result.search = Some(SearchSummary {
            candidates_tried: outcome.candidates_tried,
            inconclusive: outcome.inconclusive,
            truncated: outcome.truncated,
        });
        match outcome.found.into_iter().next() {
            Some(mut c) => {
                result.verdict = Some(c.verify_cyclic(bounds).map_err(Failure::invalid)?);
                (Some(c), EXIT_OK)
            }
            None => (None, EXIT_INCONCLUSIVE),
        }
    } else {
        let mut c = contraction::contract_names(&q, &opts.arrows).map_err(Failure::invalid)?;
        let verdict = c.verify_cyclic(bounds).map_err(Failure::invalid)?;
        let code = match verdict {
            CyclicVerdict::CyclicAtBound { .. } => EXIT_OK,
            CyclicVerdict::NotCyclic { .. } => EXIT_FAILS,
            CyclicVerdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
        };
        result.verdict = Some(verdict);
        (Some(c), code)
    };
    if let Some(c) = &psi {
        let mut target = c.target().clone();
        if opts.reduce {
            let (reduced, removed) = reduce_two_cycles(&target).map_err(Failure::invalid)?;
            target = reduced;
            result.reduced_arrows = removed;
        }
        result.contraction = Some(c.to_file());
        result.target_vertices = Some(target.vertex_count());
        result.target_arrows = Some(target.arrows().len());
        result.target_faces = Some(target.faces().len());
        if let Some(path) = &opts.output {
            let body = if path.extension().is_some_and(|e| e == "json") {
                target.to_json()
            } else {
                target.to_dimer_text()
            };
            result.written.push(write_file(path, &body)?);
        }
        if let Some(path) = &opts.save_contraction {
            result.written.push(write_file(path, &(c.to_file().to_json() + "\n"))?);
        }
    } else if opts.output.is_some() || opts.save_contraction.is_some() {
        return Err(Failure {
            code: EXIT_INCONCLUSIVE,
            error: anyhow!("no cyclic contraction found; nothing written"),
        });
    }
    let text = || {
        let mut s = String::new();
        if let Some(sum) = &result.search {
            s += &format!(
                "searched {} candidates ({} inconclusive{})\n",
                sum.candidates_tried,
                sum.inconclusive,
                if sum.truncated { ", truncated" } else { "" }
            );
        }
        match &result.contraction {
            Some(f) => s += &format!("contract {{{}}}\n", f.contracted.join(", ")),
            None => s += "no cyclic contraction found within the search limits\n",
        }
        if let Some(v) = &result.verdict {
            s += &match v {
                CyclicVerdict::CyclicAtBound { bounds } => format!("cyclic at bound {bounds}\n"),
                CyclicVerdict::NotCyclic { reason } => format!(
                    "not cyclic: {}\n",
                    serde_json::to_string(reason).expect("reason serializes")
                ),
                CyclicVerdict::Inconclusive { generator, bounds } => {
                    format!("inconclusive: generator {generator} not realized at bound {bounds}\n")
                }
            };
        }
        if let (Some(v), Some(a), Some(f)) = (result.target_vertices, result.target_arrows, result.target_faces) {
            s += &format!("target: {v} vertices, {a} arrows, {f} faces\n");
        }
        if !result.reduced_arrows.is_empty() {
            s += &format!("removed 2-cycle arrows: {}\n", result.reduced_arrows.join(" "));
        }
        for w in &result.written {
            s += &format!("wrote {w}\n");
        }
        s
    };
    io.emit(code, result.clone(), text)
}

fn cmd_corpus(name: Option<&str>, io: &mut Io) -> Outcome {
    let entries = match name {
        Some(n) => vec![corpus::get(n).ok_or_else(|| Failure::invalid(anyhow!("unknown corpus model `{n}`")))?],
        None => corpus::entries(),
    };
    let items: Vec<CorpusItem> = entries
        .iter()
        .map(|e| {
            let q = e.quiver();
            CorpusItem {
                name: e.name.to_string(),
                vertices: q.vertex_count(),
                arrows: q.arrows().len(),
                faces: q.faces().len(),
                fixture: e.fixture(),
            }
        })
        .collect();
    let text = || match name {
        Some(_) => entries[0].source.to_string(),
        None => items
            .iter()
            .map(|i| {
                format!(
                    "corpus:{:<10} {} vertices, {} arrows, {} faces\n",
                    i.name, i.vertices, i.arrows, i.faces
                )
            })
            .collect(),
    };
    io.emit(EXIT_OK, CorpusResult { entries: items.clone() }, text)
}

fn cmd_draw(spec: &str, format: Format, matching: Option<usize>, output: Option<&Path>, io: &mut Io) -> Outcome {
    let q = load_model(spec)?;
    let table;
    let highlight = match matching {
        Some(id) => {
            table = MatchingTable::compute(&q).map_err(Failure::invalid)?;
            Some(table.perfect.get(id).ok_or_else(|| {
                Failure::invalid(anyhow!("no perfect matching {id}; there are {}", table.perfect.len()))
            })?)
        }
        None => None,
    };
    let doc = match format {
        Format::Dot => draw::to_dot(&q, highlight),
        Format::Svg => draw::to_svg(&q, highlight).map_err(Failure::invalid)?,
    };
    let written = output.map(|p| write_file(p, &doc)).transpose()?;
    let result = DrawResult {
        model: spec.to_string(),
        format: match format {
            Format::Svg => "svg",
            Format::Dot => "dot",
        }
        .into(),
        matching: highlight.map(|d| d.names(&q)),
        written: written.clone(),
        document: written.is_none().then(|| doc.clone()),
    };
    let text = || match &written {
        Some(w) => format!("wrote {w}\n"),
        None => doc.clone(),
    };
    io.emit(EXIT_OK, result.clone(), text)
}
