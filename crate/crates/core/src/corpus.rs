//! Built-in models, addressable from the command line as `corpus:<name>`.

use serde::{Deserialize, Serialize};

use crate::model::DimerQuiver;

/// Expected results for a built-in model under default bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub perfect_matchings: usize,
    pub simple_matchings: usize,
    pub nondegenerate: bool,
    /// `None` when the quiver is degenerate and the question is not posed.
    pub cancellative: Option<bool>,
    /// Arrow names lying in no simple matching.
    pub qs_arrows: Vec<String>,
    /// Arrows of a cyclic contraction, when the model is not cancellative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<Vec<String>>,
    /// Minimal corner-semigroup generators per vertex, as exponent vectors
    /// over the simple matchings of the (contracted) quiver.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub corner_generators: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
    fixture: &'static str,
}

impl CorpusEntry {
    pub fn quiver(&self) -> DimerQuiver {
        DimerQuiver::parse(self.source).expect("built-in model parses")
    }

    pub fn fixture(&self) -> Fixture {
        serde_json::from_str(self.fixture).expect("built-in fixture parses")
    }
}

const ENTRIES: [CorpusEntry; 4] = [
    CorpusEntry {
        name: "hex",
        source: include_str!("../corpus/hex.dimer"),
        fixture: include_str!("../corpus/hex.json"),
    },
    CorpusEntry {
        name: "conifold",
        source: include_str!("../corpus/conifold.dimer"),
        fixture: include_str!("../corpus/conifold.json"),
    },
    CorpusEntry {
        name: "fig1",
        source: include_str!("../corpus/fig1.dimer"),
        fixture: include_str!("../corpus/fig1.json"),
    },
    CorpusEntry {
        name: "unmatched",
        source: include_str!("../corpus/unmatched.dimer"),
        fixture: include_str!("../corpus/unmatched.json"),
    },
];

pub fn entries() -> Vec<CorpusEntry> {
    ENTRIES.to_vec()
}

pub fn get(name: &str) -> Option<CorpusEntry> {
    ENTRIES.iter().find(|e| e.name == name).copied()
}

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|e| e.name)
}

pub fn hexagon() -> DimerQuiver {
    ENTRIES[0].quiver()
}

pub fn conifold() -> DimerQuiver {
    ENTRIES[1].quiver()
}

/// Three vertices; the green arrow `c` lies in no simple matching.
pub fn figure_one() -> DimerQuiver {
    ENTRIES[2].quiver()
}

/// Valid as a torus embedding but without any perfect matching.
pub fn unmatched() -> DimerQuiver {
    ENTRIES[3].quiver()
}
