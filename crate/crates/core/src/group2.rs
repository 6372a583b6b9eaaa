//! Engine for patterns with at least one row of period above `floor(m̄/4)`.
//!
//! The first such row of each pattern (its filter row) occurs at most a few
//! times per block row, so its occurrences, found by a byte-level
//! [`DynMatcher`], give few candidates. Candidates in the same column that
//! overlap vertically are dueled: an LCP over the patterns' row-name
//! sequences finds the first row where they disagree, a witness-tree query
//! gives a column where those two rows differ, and one text byte decides.
//! The survivors are verified by a sweep down the block: in each row every
//! live candidate places a label for the pattern row it expects, labels that
//! overlap are dueled horizontally, and a single left-to-right pass compares
//! each covered text byte with one pattern byte.

use std::collections::HashMap;

use crate::dyn_dict::{bytes_as_symbols, DynMatcher, MatcherId};
use crate::error::{Error, Result};
use crate::matrix::{BlockView, Matrix, PatternId};
use crate::name_index::NameSuffixIndex;
use crate::periodicity::{classify_pattern, Group};
use crate::row_index::{RowIndex, RowName};
use crate::stats::Counters;
use crate::witness_tree::WitnessTree;

#[derive(Debug, Clone)]
pub struct Group2Pattern {
    pub id: PatternId,
    /// 1-based index of the filter row.
    pub filter_row: usize,
    /// Witness-tree name of every row.
    pub row_names: Vec<u32>,
    /// Row-index name of every row.
    pub row_index_names: Vec<RowName>,
    filter_id: MatcherId,
}

impl Group2Pattern {
    pub fn height(&self) -> usize {
        self.row_names.len()
    }
}

/// A candidate occurrence inside one block (1-based block coordinates).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateState {
    pub pattern: PatternId,
    pub x: usize,
    pub j: usize,
    pub height: usize,
    pub rows_verified: usize,
    pub alive: bool,
}

#[derive(Debug, Clone, Copy)]
struct Label {
    j: usize,
    cand: usize,
    /// Witness-tree name of the expected row.
    name: u32,
    row_name: RowName,
}

/// Per-block counts, also added to the shared counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BlockReport {
    pub candidates: u64,
    pub vertical_duels: u64,
    pub horizontal_duels: u64,
    /// Text bytes compared by the sweep, duels included.
    pub sweep_bytes: u64,
}

/// Reusable per-search buffers.
#[derive(Debug, Default)]
pub struct Group2Scratch {
    pub candidates: Vec<CandidateState>,
    order: Vec<usize>,
    stack: Vec<usize>,
    active: Vec<usize>,
    labels: Vec<Label>,
}

impl Group2Scratch {
    /// Preallocates every buffer for at most `candidates` candidates per
    /// block, so a search never grows them.
    pub fn reserve(&mut self, candidates: usize) {
        fn at_least<T>(v: &mut Vec<T>, n: usize) {
            v.reserve(n.saturating_sub(v.len()));
        }
        at_least(&mut self.candidates, candidates);
        at_least(&mut self.order, candidates);
        at_least(&mut self.stack, candidates);
        at_least(&mut self.active, candidates);
        at_least(&mut self.labels, candidates);
    }

    pub fn cells(&self) -> usize {
        6 * self.candidates.capacity()
            + self.order.capacity()
            + self.stack.capacity()
            + self.active.capacity()
            + 4 * self.labels.capacity()
    }
}

#[derive(Debug)]
pub struct Group2Engine {
    tree: WitnessTree,
    filter: DynMatcher,
    names: NameSuffixIndex,
    patterns: HashMap<PatternId, Group2Pattern>,
    by_filter: HashMap<MatcherId, PatternId>,
    width: usize,
    work: u64,
}

impl Default for Group2Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Group2Engine {
    pub fn new() -> Self {
        Group2Engine {
            tree: WitnessTree::new(),
            filter: DynMatcher::new(),
            names: NameSuffixIndex::new(),
            patterns: HashMap::new(),
            by_filter: HashMap::new(),
            width: 0,
            work: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn pattern(&self, id: PatternId) -> Option<&Group2Pattern> {
        self.patterns.get(&id)
    }

    pub fn tree(&self) -> &WitnessTree {
        &self.tree
    }

    pub fn update_work(&self) -> u64 {
        self.work + self.filter.update_work() + self.names.update_work()
    }

    /// Adds a pattern whose rows the row index named `row_index_names`.
    pub fn insert(&mut self, id: PatternId, p: &Matrix, row_index_names: &[RowName]) -> Result<()> {
        let Group::Two { filter_row } = classify_pattern(p) else {
            return Err(Error::WrongGroup("the long-period group"));
        };
        if self.patterns.is_empty() {
            self.width = p.width();
        } else if p.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: p.width(),
            });
        }
        assert_eq!(row_index_names.len(), p.height());
        let mut row_names = Vec::with_capacity(p.height());
        for row in p.rows() {
            let ins = self.tree.insert(row)?;
            self.work += (ins.inspections + row.len()) as u64;
            row_names.push(ins.name);
        }
        let filter_id = self.filter.insert(&bytes_as_symbols(p.row(filter_row - 1)));
        self.by_filter.insert(filter_id, id);
        self.names.insert(id, &row_names);
        self.patterns.insert(
            id,
            Group2Pattern {
                id,
                filter_row,
                row_names,
                row_index_names: row_index_names.to_vec(),
                filter_id,
            },
        );
        Ok(())
    }

    pub fn remove(&mut self, id: PatternId) -> Result<()> {
        let g = self
            .patterns
            .remove(&id)
            .ok_or(Error::UnknownPattern(id.0))?;
        for &n in &g.row_names {
            self.tree.remove(n)?;
        }
        self.filter.remove(g.filter_id)?;
        self.by_filter.remove(&g.filter_id);
        self.names.remove(id);
        self.work += g.height() as u64;
        Ok(())
    }

    /// Collects candidates from filter-row occurrences. Only candidates
    /// that fit in the block with `x <= max_top` and `j <= max_col` are
    /// kept. Returns the scan work.
    pub fn find_candidates(
        &self,
        block: &BlockView<'_>,
        max_top: usize,
        max_col: usize,
        s: &mut Group2Scratch,
    ) -> u64 {
        s.candidates.clear();
        let (h, m) = (block.height(), self.width);
        let mut cost = 0;
        for r in 1..=h {
            let cands = &mut s.candidates;
            cost += self
                .filter
                .scan(block.row(r - 1).iter().map(|&b| b as u32), |e, mid| {
                    let g = &self.patterns[&self.by_filter[&mid]];
                    if r < g.filter_row {
                        return;
                    }
                    let x = r + 1 - g.filter_row;
                    let j = e + 1 - m;
                    if x <= max_top && j <= max_col && x + g.height() - 1 <= h {
                        cands.push(CandidateState {
                            pattern: g.id,
                            x,
                            j,
                            height: g.height(),
                            rows_verified: 0,
                            alive: true,
                        });
                    }
                });
        }
        cost
    }

    /// Duels two vertically overlapping candidates in the same column
    /// (`a.x <= b.x`), killing every one that disagrees with the text at a
    /// witness cell. Returns `(a survives, b survives, work)`.
    pub fn vertical_duel(
        &self,
        a: &CandidateState,
        b: &CandidateState,
        block: &BlockView<'_>,
        index: &RowIndex,
    ) -> (bool, bool, u64) {
        debug_assert!(a.j == b.j && a.x <= b.x);
        let off = b.x - a.x;
        let overlap = (a.x + a.height).min(b.x + b.height) - b.x;
        let (k, cost) = self.names.lcp(a.pattern, off, b.pattern, 0);
        let k = k.min(overlap);
        if k == overlap {
            return (true, true, cost);
        }
        let (ga, gb) = (&self.patterns[&a.pattern], &self.patterns[&b.pattern]);
        let (na, nb) = (ga.row_names[off + k], gb.row_names[k]);
        let w = self.tree.witness(na, nb).expect("live names");
        let t = block.get(b.x + k - 1, b.j + w - 2);
        let pa = index
            .access_char(ga.row_index_names[off + k], w)
            .expect("live row");
        let pb = index
            .access_char(gb.row_index_names[k], w)
            .expect("live row");
        (pa == t, pb == t, cost + 1)
    }

    /// One duel per candidate against the nearest surviving candidate above
    /// it in the same column.
    pub fn duel_columns(
        &self,
        block: &BlockView<'_>,
        index: &RowIndex,
        s: &mut Group2Scratch,
        rep: &mut BlockReport,
    ) -> u64 {
        let mut cost = 0;
        let cands = &mut s.candidates;
        s.order.clear();
        s.order.extend(0..cands.len());
        s.order
            .sort_unstable_by_key(|&i| (cands[i].j, cands[i].x, cands[i].pattern));
        s.stack.clear();
        let mut column = usize::MAX;
        for &i in &s.order {
            if cands[i].j != column {
                column = cands[i].j;
                s.stack.clear();
            }
            if let Some(&t) = s.stack.last() {
                let (a, b) = (cands[t], cands[i]);
                if a.x + a.height > b.x {
                    rep.vertical_duels += 1;
                    let (sa, sb, c) = self.vertical_duel(&a, &b, block, index);
                    cost += c;
                    if !sa {
                        cands[t].alive = false;
                        s.stack.pop();
                    }
                    if !sb {
                        cands[i].alive = false;
                        continue;
                    }
                }
            }
            s.stack.push(i);
        }
        cost
    }

    /// Duels two labels of one row with `a.j <= b.j` over their overlap.
    /// Returns `(a survives, b survives)`.
    fn horizontal_duel(
        &self,
        a: &Label,
        b: &Label,
        row: &[u8],
        index: &RowIndex,
        rep: &mut BlockReport,
    ) -> (bool, bool) {
        rep.horizontal_duels += 1;
        if a.name == b.name && a.j == b.j {
            return (true, true);
        }
        let d = b.j - a.j;
        let overlap = self.width - d;
        let k = index
            .lcp_rows(a.row_name, d + 1, b.row_name, 1)
            .expect("live rows")
            .min(overlap);
        if k == overlap {
            return (true, true);
        }
        rep.sweep_bytes += 1;
        let t = row[b.j + k - 1];
        let pa = index.access_char(a.row_name, d + k + 1).expect("live row");
        let pb = index.access_char(b.row_name, k + 1).expect("live row");
        (pa == t, pb == t)
    }

    /// Verifies the surviving candidates row by row. Calls `emit` for every
    /// candidate that matches all its rows.
    pub fn verify_sweep(
        &self,
        block: &BlockView<'_>,
        index: &RowIndex,
        s: &mut Group2Scratch,
        rep: &mut BlockReport,
        mut emit: impl FnMut(PatternId, usize, usize),
    ) {
        let m = self.width;
        let cands = &mut s.candidates;
        s.order.clear();
        s.order.extend((0..cands.len()).filter(|&i| cands[i].alive));
        s.order.sort_unstable_by_key(|&i| cands[i].x);
        s.active.clear();
        let mut next = 0;
        for r in 1..=block.height() {
            while next < s.order.len() && cands[s.order[next]].x == r {
                s.active.push(s.order[next]);
                next += 1;
            }
            s.active.retain(|&i| cands[i].alive);
            if s.active.is_empty() {
                if next == s.order.len() {
                    break;
                }
                continue;
            }
            s.labels.clear();
            for &i in &s.active {
                let c = &cands[i];
                let g = &self.patterns[&c.pattern];
                let k = r - c.x;
                s.labels.push(Label {
                    j: c.j,
                    cand: i,
                    name: g.row_names[k],
                    row_name: g.row_index_names[k],
                });
            }
            s.labels.sort_unstable_by_key(|l| (l.j, l.name));
            let row = block.row(r - 1);

            // horizontal duels leave a chain of pairwise consistent labels
            s.stack.clear();
            for li in 0..s.labels.len() {
                let l = s.labels[li];
                let mut keep = true;
                while let Some(&ti) = s.stack.last() {
                    let t = s.labels[ti];
                    if t.j + m <= l.j {
                        break;
                    }
                    let (st, sl) = self.horizontal_duel(&t, &l, row, index, rep);
                    if !st {
                        cands[t.cand].alive = false;
                        s.stack.pop();
                    }
                    if !sl {
                        cands[l.cand].alive = false;
                        keep = false;
                        break;
                    }
                    if st {
                        break;
                    }
                }
                if keep {
                    s.stack.push(li);
                }
            }

            // one comparison per covered text byte
            let mut done = 0usize;
            for si in 0..s.stack.len() {
                let l = s.labels[s.stack[si]];
                if !cands[l.cand].alive {
                    continue;
                }
                let bytes = self.tree.representative(l.name).expect("live name");
                let from = l.j.max(done + 1);
                for col in from..l.j + m {
                    rep.sweep_bytes += 1;
                    if row[col - 1] != bytes[col - l.j] {
                        for &oi in &s.stack {
                            let o = s.labels[oi];
                            if o.j <= col && col < o.j + m {
                                cands[o.cand].alive = false;
                            }
                        }
                        done = col;
                        break;
                    }
                    done = col;
                }
            }

            for &i in &s.active {
                let c = &mut cands[i];
                if c.alive {
                    c.rows_verified += 1;
                    if c.rows_verified == c.height {
                        emit(c.pattern, c.x, c.j);
                        c.alive = false;
                    }
                }
            }
        }
    }

    /// Runs the whole pipeline on one block, reporting block-local 1-based
    /// `(pattern, row, col)` for occurrences with `row <= max_top` and
    /// `col <= max_col`.
    #[allow(clippy::too_many_arguments)]
    pub fn search_block(
        &self,
        block: &BlockView<'_>,
        max_top: usize,
        max_col: usize,
        index: &RowIndex,
        s: &mut Group2Scratch,
        counters: &Counters,
        emit: impl FnMut(PatternId, usize, usize),
    ) -> BlockReport {
        let mut rep = BlockReport::default();
        if self.patterns.is_empty() || block.width() < self.width {
            return rep;
        }
        let mut cost = self.find_candidates(block, max_top, max_col, s);
        rep.candidates = s.candidates.len() as u64;
        if !s.candidates.is_empty() {
            cost += self.duel_columns(block, index, s, &mut rep);
            self.verify_sweep(block, index, s, &mut rep, emit);
        }
        counters.add_candidates(rep.candidates);
        counters.add_vertical_duels(rep.vertical_duels);
        counters.add_horizontal_duels(rep.horizontal_duels);
        counters.add_comparisons(cost + rep.sweep_bytes);
        counters.note_workspace(s.cells() as u64);
        rep
    }
}
