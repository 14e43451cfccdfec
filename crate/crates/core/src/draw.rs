//! DOT and SVG pictures of the fundamental domain.

use std::fmt::Write;

use thiserror::Error;

use crate::matchings::PerfectMatching;
use crate::model::DimerQuiver;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DrawError {
    #[error("SVG output needs a `pos` line for every vertex")]
    MissingPositions,
}

/// Graphviz source with one edge per arrow; matched arrows are bold.
pub fn to_dot(q: &DimerQuiver, highlight: Option<&PerfectMatching>) -> String {
    let mut out = String::from("digraph dimer {\n");
    for v in q.vertices() {
        let _ = writeln!(out, "  v{} [label=\"{}\"];", v.0, v.0);
    }
    for a in q.arrows() {
        let mut attrs = format!("label=\"{}", a.name);
        if !a.winding.is_zero() {
            let _ = write!(attrs, " {}", a.winding);
        }
        attrs.push('"');
        if highlight.is_some_and(|d| d.contains(a.id)) {
            attrs.push_str(", style=bold, color=red");
        }
        let _ = writeln!(out, "  v{} -> v{} [{}];", a.tail.0, a.head.0, attrs);
    }
    out.push_str("}\n");
    out
}

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// The unit square scaled up; an arrow is drawn from its tail to the lift
/// of its head, so arrows leaving the square are labelled by winding.
pub fn to_svg(q: &DimerQuiver, highlight: Option<&PerfectMatching>) -> Result<String, DrawError> {
    if !q.has_all_positions() {
        return Err(DrawError::MissingPositions);
    }
    let pos: Vec<[f64; 2]> = q
        .positions()
        .expect("checked")
        .iter()
        .map(|p| p.expect("checked"))
        .collect();
    // y grows upwards on the torus, downwards in SVG
    let px = |x: f64, y: f64| (MARGIN + x * SIZE, MARGIN + (1.0 - y) * SIZE);
    let total = SIZE + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
    out.push_str(
        "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n",
    );
    let _ = writeln!(
        out,
        r#"<rect class="domain" x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="gray" stroke-dasharray="4"/>"#
    );
    for a in q.arrows() {
        let [tx, ty] = pos[a.tail.0];
        let [hx, hy] = pos[a.head.0];
        let (x1, y1) = px(tx, ty);
        let (x2, y2) = px(hx + a.winding.u1 as f64, hy + a.winding.u2 as f64);
        let matched = highlight.is_some_and(|d| d.contains(a.id));
        let class = if matched { "arrow matched" } else { "arrow" };
        let stroke = if matched { "red" } else { "black" };
        let width = if matched { 3 } else { 1 };
        let d = if (x1, y1) == (x2, y2) {
            format!("M{x1:.1},{y1:.1} c-30,-40 30,-40 0,0")
        } else {
            format!("M{x1:.1},{y1:.1} L{x2:.1},{y2:.1}")
        };
        let _ = writeln!(
            out,
            r#"<path class="{class}" d="{d}" stroke="{stroke}" stroke-width="{width}" fill="none" marker-end="url(#head)"><title>{}</title></path>"#,
            xml_escape(&a.name)
        );
        if !a.winding.is_zero() {
            let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
            let _ = writeln!(
                out,
                r#"<text class="winding" x="{mx:.1}" y="{my:.1}" font-size="11">{} {}</text>"#,
                xml_escape(&a.name),
                a.winding
            );
        }
    }
    for v in q.vertices() {
        let [x, y] = pos[v.0];
        let (cx, cy) = px(x, y);
        let _ = writeln!(
            out,
            r#"<circle class="vertex" cx="{cx:.1}" cy="{cy:.1}" r="9" fill="white" stroke="black"/><text x="{cx:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
            cy + 3.5,
            v.0
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::matchings::MatchingTable;

    fn count(s: &str, needle: &str) -> usize {
        s.matches(needle).count()
    }

    #[test]
    fn hexagon_svg_structure() {
        let q = corpus::hexagon();
        let svg = to_svg(&q, None).unwrap();
        assert_eq!(count(&svg, r#"class="vertex""#), 1);
        assert_eq!(count(&svg, r#"class="arrow"#), 3);
        assert_eq!(count(&svg, r#"class="winding""#), 3);
        assert_eq!(count(&svg, "matched"), 0);
    }

    #[test]
    fn dot_has_one_edge_per_arrow() {
        for e in corpus::entries() {
            let q = e.quiver();
            assert_eq!(count(&to_dot(&q, None), " -> "), q.arrows().len(), "{}", e.name);
        }
    }

    #[test]
    fn matching_overlay() {
        let q = corpus::figure_one();
        let table = MatchingTable::compute(&q).unwrap();
        for d in &table.perfect {
            let svg = to_svg(&q, Some(d)).unwrap();
            assert_eq!(count(&svg, r#"class="arrow matched""#), d.arrows().len());
            assert_eq!(count(&to_dot(&q, Some(d)), "style=bold"), d.arrows().len());
        }
    }

    #[test]
    fn svg_needs_positions() {
        let q = DimerQuiver::parse("vertices: 1\narrow x 0 0 (1,0)\n").unwrap();
        assert_eq!(to_svg(&q, None), Err(DrawError::MissingPositions));
        assert!(to_dot(&q, None).contains("v0 -> v0"));
    }
}
