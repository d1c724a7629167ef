//! Finite pomonoids and S-posets.
//!
//! Elements of every structure are dense indices `0..size`. A [`Pomonoid`]
//! stores its multiplication table, identity index and order matrix; an
//! [`SPoset`] stores the action table of a pomonoid on its carrier together
//! with the carrier order. Construction always validates; the raw
//! `validate_*` entry points report every violated axiom with a witness.

mod ideals;
mod iso;
mod map;
mod pomonoid;
mod sposet;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use ideals::{right_ideals, RightIdeal};
pub use iso::isomorphic;
pub use map::{enumerate_pomorphisms, Map, MorphismKind};
pub use pomonoid::{validate_pomonoid, Pomonoid, RawPomonoid};
pub use sposet::{validate_sposet, RawSPoset, SPoset};

/// Which side the pomonoid acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// One failed axiom instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<usize>,
}

/// Outcome of an exhaustive axiom check. `ok` holds iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub(crate) fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { ok: violations.is_empty(), violations }
    }

    pub(crate) fn push(list: &mut Vec<Violation>, axiom: &str, witness: Option<Vec<usize>>) {
        if let Some(witness) = witness {
            list.push(Violation { axiom: axiom.to_string(), witness });
        }
    }

    pub fn violated(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return f.write_str("ok");
        }
        let parts: Vec<String> =
            self.violations.iter().map(|v| format!("{} {:?}", v.axiom, v.witness)).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Default element names: `1` for the identity, then `a`, `b`, ...
pub(crate) fn default_monoid_names(size: usize, one: usize) -> Vec<String> {
    let mut letters = (b'a'..=b'z').map(|c| (c as char).to_string());
    (0..size)
        .map(|i| if i == one { "1".to_string() } else { letters.next().unwrap_or_else(|| format!("m{i}")) })
        .collect()
}

pub(crate) fn default_carrier_names(size: usize) -> Vec<String> {
    (0..size).map(|i| format!("x{i}")).collect()
}
