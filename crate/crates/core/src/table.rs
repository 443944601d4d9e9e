//! Cohomology tables: map (n, weight) → dimension over Q, with optional
//! (i, j) provenance for decomposed routes, and the deterministic TSV
//! renderings the CLI emits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

/// The universal output format: (cohomological index n, weight w) → dim.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CohomologyTable {
    entries: BTreeMap<(i64, i64), u64>,
    /// (n, w) → list of ((i, j), dim) contributions, for decomposed routes
    provenance: BTreeMap<(i64, i64), Vec<((i64, i64), u64)>>,
}

impl CohomologyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, n: i64, weight: i64, dim: u64) {
        if dim == 0 {
            return;
        }
        *self.entries.entry((n, weight)).or_insert(0) += dim;
    }

    pub fn add_decomposed(&mut self, i: i64, j: i64, weight: i64, dim: u64) {
        if dim == 0 {
            return;
        }
        let n = i + j;
        self.add(n, weight, dim);
        self.provenance
            .entry((n, weight))
            .or_default()
            .push(((i, j), dim));
    }

    pub fn get(&self, n: i64, weight: i64) -> u64 {
        self.entries.get(&(n, weight)).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, u64)> + '_ {
        self.entries.iter().map(|(&(n, w), &d)| (n, w, d))
    }

    /// Merge another table in (dimension-additive).
    pub fn absorb(&mut self, other: &CohomologyTable) {
        for (&(n, w), &d) in &other.entries {
            *self.entries.entry((n, w)).or_insert(0) += d;
        }
        for (&k, v) in &other.provenance {
            self.provenance.entry(k).or_default().extend(v.iter().cloned());
        }
    }

    /// Rows `n<TAB>weight<TAB>dim`, sorted lexicographically by (n, weight);
    /// zero entries are omitted.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (&(n, w), &d) in &self.entries {
            writeln!(out, "{n}\t{w}\t{d}").unwrap();
        }
        out
    }

    /// Expanded rows `n<TAB>weight<TAB>i<TAB>j<TAB>dim` with the (i, j)
    /// provenance of each decomposition entry; plain entries print i = n,
    /// j = 0.
    pub fn to_tsv_expanded(&self) -> String {
        let mut out = String::new();
        for (&(n, w), &d) in &self.entries {
            match self.provenance.get(&(n, w)) {
                Some(parts) => {
                    let mut parts = parts.clone();
                    parts.sort();
                    for ((i, j), dim) in parts {
                        writeln!(out, "{n}\t{w}\t{i}\t{j}\t{dim}").unwrap();
                    }
                }
                None => writeln!(out, "{n}\t{w}\t{n}\t0\t{d}").unwrap(),
            }
        }
        out
    }
}
