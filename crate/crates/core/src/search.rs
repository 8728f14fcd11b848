//! Brute-force oracle: every solution of `sum_{j=1..d} (x+j)^2 = y^n` inside
//! a box, found by testing each sum for perfect powers.
//!
//! Deliberately knows nothing about the elimination lemmas.

use std::collections::BTreeSet;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{perfect_power_exponents, Integer};
use crate::equation::{consecutive_square_sum, Solution, D_MAX, D_MIN};
use crate::par;

/// Number of `x` values handed to one worker at a time.
pub const CHUNK_SIZE: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("need {D_MIN} <= d_min <= d_max <= {D_MAX}, got {0}..={1}")]
    BadDRange(u32, u32),
    #[error("x_bound must be positive")]
    BadXBound,
    #[error("n_max must be at least 2")]
    BadNMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub d_min: u32,
    pub d_max: u32,
    /// Search covers `-x_bound <= x <= x_bound`.
    pub x_bound: u64,
    pub n_max: u32,
}

impl SearchBox {
    pub fn new(d_min: u32, d_max: u32, x_bound: u64, n_max: u32) -> Result<Self, SearchError> {
        if d_min < D_MIN || d_max > D_MAX || d_min > d_max {
            return Err(SearchError::BadDRange(d_min, d_max));
        }
        if x_bound == 0 || x_bound > i64::MAX as u64 / 2 {
            return Err(SearchError::BadXBound);
        }
        if n_max < 2 {
            return Err(SearchError::BadNMax);
        }
        Ok(SearchBox { d_min, d_max, x_bound, n_max })
    }

    pub fn contains(&self, s: &Solution) -> bool {
        let bound = Integer::from(self.x_bound);
        (self.d_min..=self.d_max).contains(&s.d)
            && s.x <= bound
            && s.x >= -bound
            && (2..=self.n_max).contains(&s.n)
    }

    fn tasks(&self) -> Vec<(u32, i64, i64)> {
        let b = self.x_bound as i64;
        (self.d_min..=self.d_max)
            .flat_map(|d| {
                par::chunk_range(-b, b, CHUNK_SIZE)
                    .into_iter()
                    .map(move |(lo, hi)| (d, lo, hi))
            })
            .collect()
    }
}

fn scan_chunk(d: u32, lo: i64, hi: i64, n_max: u32) -> Vec<Solution> {
    let mut out = Vec::new();
    for x in lo..=hi {
        let x = Integer::from(x);
        let s = consecutive_square_sum(d, &x);
        for pp in perfect_power_exponents(&s, n_max) {
            let sol = Solution::new(d, x.clone(), pp.root, pp.n).expect("root was checked exactly");
            out.push(sol);
        }
    }
    out
}

fn finish(chunks: Vec<Vec<Solution>>) -> Vec<Solution> {
    let mut all: Vec<Solution> = chunks.into_iter().flatten().collect();
    all.sort();
    all
}

/// All solutions in the box, canonicalized and sorted by `(d, n, x)`.
/// Runs on the rayon pool when the `parallel` feature is on.
pub fn brute_force(b: &SearchBox) -> Vec<Solution> {
    let n_max = b.n_max;
    finish(par::map_ordered(&b.tasks(), |&(d, lo, hi)| scan_chunk(d, lo, hi, n_max)))
}

/// Single-threaded [`brute_force`]; same output.
pub fn brute_force_serial(b: &SearchBox) -> Vec<Solution> {
    finish(
        b.tasks()
            .iter()
            .map(|&(d, lo, hi)| scan_chunk(d, lo, hi, b.n_max))
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffKind {
    /// Expected but not found by the search.
    Missing,
    /// Found by the search but not expected.
    Unexpected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub status: DiffKind,
    pub solution: Solution,
}

/// Symmetric difference between search output and an expected list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OracleDiff {
    pub entries: Vec<DiffEntry>,
}

impl OracleDiff {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn missing(&self) -> impl Iterator<Item = &Solution> {
        self.entries
            .iter()
            .filter(|e| e.status == DiffKind::Missing)
            .map(|e| &e.solution)
    }

    pub fn unexpected(&self) -> impl Iterator<Item = &Solution> {
        self.entries
            .iter()
            .filter(|e| e.status == DiffKind::Unexpected)
            .map(|e| &e.solution)
    }
}

/// Compares `found` with `expected`; empty iff they agree as sets.
pub fn cross_check(found: &[Solution], expected: &[Solution]) -> OracleDiff {
    let found: BTreeSet<&Solution> = found.iter().collect();
    let expected: BTreeSet<&Solution> = expected.iter().collect();
    let mut entries: Vec<DiffEntry> = expected
        .difference(&found)
        .map(|s| DiffEntry { status: DiffKind::Missing, solution: (*s).clone() })
        .chain(
            found
                .difference(&expected)
                .map(|s| DiffEntry { status: DiffKind::Unexpected, solution: (*s).clone() }),
        )
        .collect();
    entries.sort_by(|a, b| (&a.solution, a.status).cmp(&(&b.solution, b.status)));
    OracleDiff { entries }
}

/// One JSON object per line.
pub fn write_json_lines<W: Write>(solutions: &[Solution], mut out: W) -> io::Result<()> {
    for s in solutions {
        serde_json::to_writer(&mut out, s)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
