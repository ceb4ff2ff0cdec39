//! Space accounting for a factorization run.

use std::fmt;

use crate::epsilon::Epsilon;
use crate::suffix::cell_width;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceCategory {
    /// `A_1` and `A_2`.
    Arena,
    /// Plain bit vectors and their rank/select directories.
    BitVectors,
    /// Tree search directories and the node-depth sequence.
    Navigation,
    /// LCP values and the RMQ directory.
    Lcp,
    /// LZ78 edge counters.
    Counters,
    /// The input text.
    Text,
}

impl SpaceCategory {
    pub fn name(self) -> &'static str {
        match self {
            SpaceCategory::Arena => "arena",
            SpaceCategory::BitVectors => "bitvectors",
            SpaceCategory::Navigation => "navigation",
            SpaceCategory::Lcp => "lcp",
            SpaceCategory::Counters => "counters",
            SpaceCategory::Text => "text",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceEntry {
    pub name: &'static str,
    pub category: SpaceCategory,
    pub bits: usize,
}

/// Bit counts of every structure allocated during a run.
#[derive(Clone, Debug, Default)]
pub struct SpaceReport {
    pub n: usize,
    pub epsilon: Epsilon,
    pub entries: Vec<SpaceEntry>,
}

impl SpaceReport {
    pub fn new(n: usize, epsilon: Epsilon) -> Self {
        SpaceReport {
            n,
            epsilon,
            entries: Vec::new(),
        }
    }

    pub fn add(&mut self, name: &'static str, category: SpaceCategory, bits: usize) {
        self.entries.push(SpaceEntry {
            name,
            category,
            bits,
        });
    }

    pub fn total(&self, category: SpaceCategory) -> usize {
        self.entries
            .iter()
            .filter(|e| e.category == category)
            .map(|e| e.bits)
            .sum()
    }

    pub fn arena_bits(&self) -> usize {
        self.total(SpaceCategory::Arena)
    }

    /// `(n + max(1, ⌊εn⌋))·⌈lg(n+1)⌉`.
    pub fn arena_budget(&self) -> usize {
        let helper = self.epsilon.floor_times(self.n).max(1);
        (self.n + helper) * cell_width(self.n) as usize
    }

    pub fn bitvector_bits(&self) -> usize {
        self.total(SpaceCategory::BitVectors)
    }

    /// Auxiliary bit-vector space per text symbol.
    pub fn bitvector_bits_per_symbol(&self) -> f64 {
        self.bitvector_bits() as f64 / self.n as f64
    }
}

impl fmt::Display for SpaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "space.{}.{}={}", e.category.name(), e.name.replace(' ', "_"), e.bits)?;
        }
        writeln!(f, "space.arena_total={}", self.arena_bits())?;
        writeln!(f, "space.arena_budget={}", self.arena_budget())?;
        write!(
            f,
            "space.bitvectors_per_symbol={:.3}",
            self.bitvector_bits_per_symbol()
        )
    }
}
