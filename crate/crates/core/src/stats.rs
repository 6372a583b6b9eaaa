//! Dictionary statistics and work counters.
//!
//! Counters only ever grow during an operation; they are reset explicitly
//! with [`Counters::reset`].

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

/// Size parameters of the live dictionary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DictionaryStats {
    /// Number of live patterns.
    pub d: usize,
    /// Total live cells, the sum of `m_i * m_bar`.
    pub ell: usize,
    /// Uniform pattern width, 0 while the dictionary is empty.
    pub m_bar: usize,
    /// Maximum live pattern height, 0 while the dictionary is empty.
    pub m_prime: usize,
    heights: BTreeMap<usize, usize>,
}

impl DictionaryStats {
    pub(crate) fn add(&mut self, height: usize, width: usize) {
        self.d += 1;
        self.ell += height * width;
        self.m_bar = width;
        *self.heights.entry(height).or_default() += 1;
        self.m_prime = self.m_prime.max(height);
    }

    pub(crate) fn remove(&mut self, height: usize) {
        self.d -= 1;
        self.ell -= height * self.m_bar;
        if let Some(n) = self.heights.get_mut(&height) {
            *n -= 1;
            if *n == 0 {
                self.heights.remove(&height);
            }
        }
        self.m_prime = self.heights.keys().next_back().copied().unwrap_or(0);
        if self.d == 0 {
            self.m_bar = 0;
        }
    }

    /// Smallest live pattern height, 0 while empty.
    pub fn min_height(&self) -> usize {
        self.heights.keys().next().copied().unwrap_or(0)
    }
}

/// Work and space instrumentation shared by the engines.
#[derive(Debug, Default)]
pub struct Counters {
    tau: AtomicU64,
    comparisons: AtomicU64,
    update_work: AtomicU64,
    candidates: AtomicU64,
    vertical_duels: AtomicU64,
    horizontal_duels: AtomicU64,
    peak_workspace: AtomicU64,
}

/// A point-in-time copy of [`Counters`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CounterSnapshot {
    /// Self-index query cost units.
    pub tau: u64,
    /// Character and symbol inspections made while searching.
    pub comparisons: u64,
    /// Symbol steps spent maintaining the indexes on insert and remove.
    pub update_work: u64,
    /// Candidates generated by the grouped engines.
    pub candidates: u64,
    pub vertical_duels: u64,
    pub horizontal_duels: u64,
    /// Largest per-block working set seen, in cells.
    pub peak_workspace: u64,
}

impl CounterSnapshot {
    /// Search work: comparisons plus index query cost.
    pub fn search_work(&self) -> u64 {
        self.comparisons + self.tau
    }
}

impl Counters {
    pub fn add_tau(&self, n: u64) {
        self.tau.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_comparisons(&self, n: u64) {
        self.comparisons.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_update_work(&self, n: u64) {
        self.update_work.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_candidates(&self, n: u64) {
        self.candidates.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_vertical_duels(&self, n: u64) {
        self.vertical_duels.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_horizontal_duels(&self, n: u64) {
        self.horizontal_duels.fetch_add(n, Ordering::Relaxed);
    }

    pub fn note_workspace(&self, cells: u64) {
        self.peak_workspace.fetch_max(cells, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> CounterSnapshot {
        CounterSnapshot {
            tau: self.tau.load(Ordering::Relaxed),
            comparisons: self.comparisons.load(Ordering::Relaxed),
            update_work: self.update_work.load(Ordering::Relaxed),
            candidates: self.candidates.load(Ordering::Relaxed),
            vertical_duels: self.vertical_duels.load(Ordering::Relaxed),
            horizontal_duels: self.horizontal_duels.load(Ordering::Relaxed),
            peak_workspace: self.peak_workspace.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        for c in [
            &self.tau,
            &self.comparisons,
            &self.update_work,
            &self.candidates,
            &self.vertical_duels,
            &self.horizontal_duels,
            &self.peak_workspace,
        ] {
            c.store(0, Ordering::Relaxed);
        }
    }
}
