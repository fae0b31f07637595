//! Flat per-system output records for JSON and CSV.

use k3sys::classifier::{mults_literal, Decomposition};
use serde::{Deserialize, Serialize};

/// One classified system. Field order is the output order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub n: i64,
    pub d: i64,
    pub mults: Vec<i64>,
    pub v: i64,
    pub e: i64,
    pub dim: i64,
    pub special: bool,
    pub h1: Option<i64>,
    pub h1_lower_bound: Option<i64>,
    pub member_kind: String,
    pub fixed_part: Vec<String>,
    pub free_part: Option<String>,
    pub conjectural: bool,
}

/// The CSV shape of [`OutputRecord`]: lists become literal fragments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRecord {
    pub n: i64,
    pub d: i64,
    pub mults: String,
    pub v: i64,
    pub e: i64,
    pub dim: i64,
    pub special: bool,
    pub h1: Option<i64>,
    pub h1_lower_bound: Option<i64>,
    pub member_kind: String,
    pub fixed_part: String,
    pub free_part: Option<String>,
    pub conjectural: bool,
}

pub const CSV_HEADER: [&str; 13] = [
    "n",
    "d",
    "mults",
    "v",
    "e",
    "dim",
    "special",
    "h1",
    "h1_lower_bound",
    "member_kind",
    "fixed_part",
    "free_part",
    "conjectural",
];

const FIXED_SEPARATOR: &str = " + ";

impl From<&Decomposition> for OutputRecord {
    fn from(dec: &Decomposition) -> Self {
        Self {
            n: dec.spec.n(),
            d: dec.spec.d,
            mults: dec.spec.mults.clone(),
            v: dec.virtual_dimension,
            e: dec.expected_dimension,
            dim: dec.dimension,
            special: dec.special,
            h1: dec.h1,
            h1_lower_bound: dec.h1_lower_bound,
            member_kind: dec.member_kind.to_string(),
            fixed_part: dec.fixed_part.iter().map(ToString::to_string).collect(),
            free_part: dec.free_part.as_ref().map(ToString::to_string),
            conjectural: dec.conjectural,
        }
    }
}

impl From<&OutputRecord> for CsvRecord {
    fn from(r: &OutputRecord) -> Self {
        Self {
            n: r.n,
            d: r.d,
            mults: mults_literal(&r.mults),
            v: r.v,
            e: r.e,
            dim: r.dim,
            special: r.special,
            h1: r.h1,
            h1_lower_bound: r.h1_lower_bound,
            member_kind: r.member_kind.clone(),
            fixed_part: r.fixed_part.join(FIXED_SEPARATOR),
            free_part: r.free_part.clone(),
            conjectural: r.conjectural,
        }
    }
}

impl CsvRecord {
    /// Splits the fragment columns back into lists.
    pub fn fixed_components(&self) -> Vec<String> {
        if self.fixed_part.is_empty() {
            Vec::new()
        } else {
            self.fixed_part
                .split(FIXED_SEPARATOR)
                .map(str::to_owned)
                .collect()
        }
    }

    pub fn expanded_mults(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for part in self.mults.split(',').filter(|p| !p.is_empty()) {
            let (m, reps) = part.split_once('^').unwrap_or((part, "1"));
            let m: i64 = m.parse().expect("fragment written by this crate");
            let reps: usize = reps.parse().expect("fragment written by this crate");
            out.extend(std::iter::repeat_n(m, reps));
        }
        out
    }
}
