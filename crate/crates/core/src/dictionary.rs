//! The public dictionary: keeps every engine up to date and dispatches
//! searches.
//!
//! Every live pattern is held by the Bird/Baker engine and by exactly one of
//! the two grouped engines. An automatic search uses the blocked Bird/Baker
//! scan when `d >= m̄` and the grouped engines otherwise; all four engine
//! choices report the same occurrences.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::bird_baker::{BirdBaker, BlockPlan};
use crate::error::{Error, Result};
use crate::group1::{Group1Engine, Group1Scratch};
use crate::group2::{Group2Engine, Group2Scratch};
use crate::matrix::{Matrix, Occurrence, PatternId, PatternMatrix};
use crate::periodicity::{classify_pattern, Group};
use crate::row_index::{RowIndex, RowName};
use crate::stats::{CounterSnapshot, Counters, DictionaryStats};

/// Search strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Blocked when `d >= m̄`, grouped otherwise.
    #[default]
    Auto,
    /// Whole-text Bird/Baker.
    Linear,
    /// Bird/Baker over overlapping blocks, naming through the row index.
    Blocked,
    /// The two periodicity-group engines over overlapping blocks.
    Grouped,
}

impl Engine {
    pub const ALL: [Engine; 4] = [
        Engine::Auto,
        Engine::Linear,
        Engine::Blocked,
        Engine::Grouped,
    ];
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Auto => "auto",
            Engine::Linear => "linear",
            Engine::Blocked => "blocked",
            Engine::Grouped => "grouped",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Engine::Auto),
            "linear" => Ok(Engine::Linear),
            "blocked" => Ok(Engine::Blocked),
            "grouped" => Ok(Engine::Grouped),
            _ => Err(Error::UnknownEngine(s.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    matrix: Matrix,
    names: Vec<RowName>,
    group: Group,
}

#[derive(Debug)]
pub struct Dictionary2D {
    stats: DictionaryStats,
    index: RowIndex,
    linear: BirdBaker,
    group1: Group1Engine,
    group2: Group2Engine,
    patterns: BTreeMap<PatternId, Entry>,
    next_id: u64,
    engine: Engine,
    counters: Counters,
}

impl Default for Dictionary2D {
    fn default() -> Self {
        Self::new()
    }
}

impl Dictionary2D {
    pub fn new() -> Self {
        Dictionary2D {
            stats: DictionaryStats::default(),
            index: RowIndex::new(),
            linear: BirdBaker::new(),
            group1: Group1Engine::new(),
            group2: Group2Engine::new(),
            patterns: BTreeMap::new(),
            next_id: 1,
            engine: Engine::Auto,
            counters: Counters::default(),
        }
    }

    pub fn with_engine(engine: Engine) -> Self {
        Dictionary2D {
            engine,
            ..Self::new()
        }
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn set_engine(&mut self, engine: Engine) {
        self.engine = engine;
    }

    /// See [`Group1Engine::set_pblock_threshold`].
    pub fn set_pblock_threshold(&mut self, rows: Option<usize>) {
        self.group1.set_pblock_threshold(rows);
    }

    pub fn stats(&self) -> &DictionaryStats {
        &self.stats
    }

    pub fn counters(&self) -> CounterSnapshot {
        self.counters.snapshot()
    }

    pub fn reset_counters(&self) {
        self.counters.reset();
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, id: PatternId) -> bool {
        self.patterns.contains_key(&id)
    }

    pub fn pattern(&self, id: PatternId) -> Option<&Matrix> {
        self.patterns.get(&id).map(|e| &e.matrix)
    }

    /// Which engine group holds `id`.
    pub fn group_of(&self, id: PatternId) -> Option<Group> {
        self.patterns.get(&id).map(|e| e.group)
    }

    /// Live patterns in id order.
    pub fn patterns(&self) -> impl Iterator<Item = PatternMatrix> + '_ {
        self.patterns
            .iter()
            .map(|(&id, e)| PatternMatrix::new(id, e.matrix.clone()))
    }

    pub fn row_index(&self) -> &RowIndex {
        &self.index
    }

    pub fn group1(&self) -> &Group1Engine {
        &self.group1
    }

    pub fn group2(&self) -> &Group2Engine {
        &self.group2
    }

    /// The block layout searches use for the current dictionary.
    pub fn block_plan(&self) -> BlockPlan {
        BlockPlan::new(self.stats.m_prime, self.stats.m_bar)
    }

    fn total_update_work(&self) -> u64 {
        self.index.update_work()
            + self.linear.update_work()
            + self.group1.update_work()
            + self.group2.update_work()
    }

    /// Adds a pattern and returns its id. The first pattern fixes `m̄`.
    pub fn insert_pattern(&mut self, p: Matrix) -> Result<PatternId> {
        if !self.patterns.is_empty() && p.width() != self.stats.m_bar {
            return Err(Error::WidthMismatch {
                expected: self.stats.m_bar,
                found: p.width(),
            });
        }
        let before = self.total_update_work();
        let id = PatternId(self.next_id);
        let names = p
            .rows()
            .map(|r| self.index.insert_row(r))
            .collect::<Result<Vec<_>>>()?;
        self.linear.add(id, &p, &names)?;
        let group = classify_pattern(&p);
        match group {
            Group::One => self.group1.insert(id, &p)?,
            Group::Two { .. } => self.group2.insert(id, &p, &names)?,
        }
        self.next_id += 1;
        self.stats.add(p.height(), p.width());
        self.patterns.insert(
            id,
            Entry {
                matrix: p,
                names,
                group,
            },
        );
        self.counters
            .add_update_work(self.total_update_work() - before);
        Ok(id)
    }

    /// Removes a live pattern. Removing the last one frees `m̄`.
    pub fn remove_pattern(&mut self, id: PatternId) -> Result<()> {
        let e = self
            .patterns
            .remove(&id)
            .ok_or(Error::UnknownPattern(id.0))?;
        let before = self.total_update_work();
        self.linear.remove(id)?;
        match e.group {
            Group::One => self.group1.remove(id)?,
            Group::Two { .. } => self.group2.remove(id)?,
        }
        for &n in &e.names {
            self.index.remove_row(n)?;
        }
        self.stats.remove(e.matrix.height());
        self.counters
            .add_update_work(self.total_update_work().saturating_sub(before));
        Ok(())
    }

    /// The engine an automatic search would use.
    pub fn resolve(&self, engine: Engine) -> Engine {
        match engine {
            Engine::Auto if self.stats.d >= self.stats.m_bar => Engine::Blocked,
            Engine::Auto => Engine::Grouped,
            e => e,
        }
    }

    /// All occurrences in `text`, sorted by row, column and pattern.
    pub fn search(&self, text: &Matrix) -> Vec<Occurrence> {
        self.search_with(text, self.engine)
    }

    pub fn search_with(&self, text: &Matrix, engine: Engine) -> Vec<Occurrence> {
        let st = &self.stats;
        if st.d == 0 || text.width() < st.m_bar || text.height() < st.min_height() {
            return Vec::new();
        }
        let tau_before = self.index.tau();
        let plan = self.block_plan();
        let out = match self.resolve(engine) {
            Engine::Linear => self.linear.search_linear(text, &self.counters),
            Engine::Blocked => self.linear.search_blocked(
                text,
                &self.index,
                &plan,
                st.min_height(),
                &self.counters,
            ),
            _ => self.search_grouped(text, &plan),
        };
        self.counters
            .add_tau(self.index.tau().saturating_sub(tau_before));
        out
    }

    fn search_grouped(&self, text: &Matrix, plan: &BlockPlan) -> Vec<Occurrence> {
        let mut out = Vec::new();
        let mut s1 = Group1Scratch::default();
        let mut s2 = Group2Scratch::default();
        s1.reserve(plan.block_h, plan.block_w, self.group1.len() * plan.step_h);
        s2.reserve(self.group2.len() * plan.step_h * plan.step_w);
        let st = &self.stats;
        for (top, left) in plan.blocks(text.height(), text.width(), st.min_height(), st.m_bar) {
            let view = text.view(top, left, plan.block_h, plan.block_w);
            let mut emit = |id, r, j| out.push(Occurrence::new(id, top + r, left + j));
            self.group1.search_block(
                &view,
                plan.step_h,
                plan.step_w,
                &mut s1,
                &self.counters,
                &mut emit,
            );
            self.group2.search_block(
                &view,
                plan.step_h,
                plan.step_w,
                &self.index,
                &mut s2,
                &self.counters,
                &mut emit,
            );
        }
        self.counters
            .note_workspace((s1.cells() + s2.cells()) as u64);
        out.sort_unstable();
        out
    }
}
