//! Built-in space files, embedded at compile time.

use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::spacefile::ParsedSpace;

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub source: &'static str,
}

const ENTRIES: [CatalogEntry; 7] = [
    CatalogEntry {
        name: "h3",
        source: include_str!("../catalog/h3.json"),
    },
    CatalogEntry {
        name: "h3-qpower",
        source: include_str!("../catalog/h3-qpower.json"),
    },
    CatalogEntry {
        name: "h3xh3-fproduct",
        source: include_str!("../catalog/h3xh3-fproduct.json"),
    },
    CatalogEntry {
        name: "h3xR",
        source: include_str!("../catalog/h3xR.json"),
    },
    CatalogEntry {
        name: "h3xR-beta",
        source: include_str!("../catalog/h3xR-beta.json"),
    },
    CatalogEntry {
        name: "h3xR-two-forms",
        source: include_str!("../catalog/h3xR-two-forms.json"),
    },
    CatalogEntry {
        name: "h3-alphabeta",
        source: include_str!("../catalog/h3-alphabeta.json"),
    },
];

pub fn entries() -> &'static [CatalogEntry] {
    &ENTRIES
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

pub fn source(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|e| e.name == name).map(|e| e.source)
}

pub fn load(name: &str, overrides: &[(String, Rat)]) -> Result<ParsedSpace> {
    let src = source(name).ok_or_else(|| {
        Error::parse(
            "--space",
            format!(
                "unknown catalog space \"{name}\" (available: {})",
                names().join(", ")
            ),
        )
    })?;
    ParsedSpace::parse_str(src, overrides)
}
