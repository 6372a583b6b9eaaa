//! Dynamic Bird/Baker engine.
//!
//! Pattern rows are named, each pattern becomes the 1D sequence of its row
//! names, and a text is searched by naming the position where each pattern
//! row ends and then scanning every column of names for the 1D patterns.
//! Both 1D dictionaries are [`DynMatcher`]s, so a pattern is added or
//! removed in time proportional to its size.
//!
//! Two search modes share the same preprocessing: [`BirdBaker::search_linear`]
//! names the whole text at once, and [`BirdBaker::search_blocked`] works on
//! overlapping blocks (see [`BlockPlan`]) naming positions through the
//! [`RowIndex`], so its working space depends only on the dictionary.

use std::collections::HashMap;

use crate::dyn_dict::{bytes_as_symbols, DynMatcher, MatcherId, Symbol};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Occurrence, PatternId};
use crate::row_index::{RowIndex, RowName};
use crate::stats::Counters;

/// Overlapping block layout for the small-space searches.
///
/// Blocks are `ceil(3m'/2) x ceil(3m̄/2)` and start every
/// `ceil(m'/2)` rows and `ceil(m̄/2)` columns. A block owns the occurrences
/// whose top-left corner lies in its first `step_h x step_w` cells; any such
/// occurrence fits inside the block, and every text position is owned by
/// exactly one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockPlan {
    pub block_h: usize,
    pub block_w: usize,
    pub step_h: usize,
    pub step_w: usize,
}

impl BlockPlan {
    pub fn new(m_prime: usize, m_bar: usize) -> Self {
        BlockPlan {
            block_h: (3 * m_prime).div_ceil(2),
            block_w: (3 * m_bar).div_ceil(2),
            step_h: m_prime.div_ceil(2).max(1),
            step_w: m_bar.div_ceil(2).max(1),
        }
    }

    /// 0-based top-left corners of the blocks needed for an `n1 x n2` text
    /// when the shortest pattern has `min_h` rows.
    pub fn blocks(
        &self,
        n1: usize,
        n2: usize,
        min_h: usize,
        m_bar: usize,
    ) -> impl Iterator<Item = (usize, usize)> + '_ {
        let tops = (0..n1)
            .step_by(self.step_h)
            .take_while(move |&t| t + min_h.max(1) <= n1);
        let step_w = self.step_w;
        tops.flat_map(move |t| {
            (0..n2)
                .step_by(step_w)
                .take_while(move |&l| l + m_bar <= n2)
                .map(move |l| (t, l))
        })
    }

    /// Whether a block owns the occurrence at block-local 0-based
    /// `(top, left)`.
    pub fn owns(&self, top: usize, left: usize) -> bool {
        top < self.step_h && left < self.step_w
    }

    pub fn area(&self) -> usize {
        self.block_h * self.block_w
    }
}

#[derive(Debug, Clone)]
struct PatternEntry {
    column_id: MatcherId,
    names: Vec<RowName>,
}

/// Row names as column symbols; 0 is reserved for "no row ends here".
#[inline]
fn symbol(n: RowName) -> Symbol {
    n.0 + 1
}

#[derive(Debug, Default)]
pub struct BirdBaker {
    /// Distinct pattern rows over raw bytes.
    row_matcher: DynMatcher,
    rows: HashMap<RowName, (MatcherId, usize)>,
    row_of_matcher: HashMap<MatcherId, RowName>,
    /// The 1D patterns of row names.
    columns: DynMatcher,
    patterns: HashMap<PatternId, PatternEntry>,
    owner: HashMap<MatcherId, (PatternId, usize)>,
    width: usize,
}

impl BirdBaker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Number of distinct live rows.
    pub fn distinct_rows(&self) -> usize {
        self.rows.len()
    }

    /// Reference count of a row name.
    pub fn row_refs(&self, name: RowName) -> usize {
        self.rows.get(&name).map_or(0, |r| r.1)
    }

    /// The 1D pattern of row names for `id`.
    pub fn d_prime(&self, id: PatternId) -> Option<&[RowName]> {
        self.patterns.get(&id).map(|p| p.names.as_slice())
    }

    pub fn update_work(&self) -> u64 {
        self.row_matcher.update_work() + self.columns.update_work()
    }

    /// Adds a pattern whose rows were named `names` by the row index.
    pub fn add(&mut self, id: PatternId, p: &Matrix, names: &[RowName]) -> Result<()> {
        if self.patterns.is_empty() {
            self.width = p.width();
        } else if p.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: p.width(),
            });
        }
        assert_eq!(names.len(), p.height());
        for (row, &name) in p.rows().zip(names) {
            match self.rows.get_mut(&name) {
                Some(entry) => entry.1 += 1,
                None => {
                    let mid = self.row_matcher.insert(&bytes_as_symbols(row));
                    self.rows.insert(name, (mid, 1));
                    self.row_of_matcher.insert(mid, name);
                }
            }
        }
        let seq: Vec<Symbol> = names.iter().map(|&n| symbol(n)).collect();
        let column_id = self.columns.insert(&seq);
        self.owner.insert(column_id, (id, p.height()));
        self.patterns.insert(
            id,
            PatternEntry {
                column_id,
                names: names.to_vec(),
            },
        );
        Ok(())
    }

    pub fn remove(&mut self, id: PatternId) -> Result<()> {
        let entry = self
            .patterns
            .remove(&id)
            .ok_or(Error::UnknownPattern(id.0))?;
        self.columns.remove(entry.column_id)?;
        self.owner.remove(&entry.column_id);
        for name in entry.names {
            let slot = self.rows.get_mut(&name).expect("row of live pattern");
            slot.1 -= 1;
            if slot.1 == 0 {
                let (mid, _) = self.rows.remove(&name).unwrap();
                self.row_matcher.remove(mid)?;
                self.row_of_matcher.remove(&mid);
            }
        }
        Ok(())
    }

    /// Whole-text search: name every text position, then scan each column.
    pub fn search_linear(&self, text: &Matrix, counters: &Counters) -> Vec<Occurrence> {
        let mut out = Vec::new();
        let m = self.width;
        if self.patterns.is_empty() || text.width() < m {
            return out;
        }
        let (n1, n2) = (text.height(), text.width());
        let mut grid = vec![0 as Symbol; n1 * n2];
        counters.note_workspace((n1 * n2) as u64);
        let mut inspections = 0;
        for r in 0..n1 {
            let line = &mut grid[r * n2..(r + 1) * n2];
            inspections +=
                self.row_matcher
                    .scan(text.row(r).iter().map(|&b| b as Symbol), |e, mid| {
                        line[e - 1] = symbol(self.row_of_matcher[&mid]);
                    });
        }
        for c in m - 1..n2 {
            inspections += self
                .columns
                .scan((0..n1).map(|r| grid[r * n2 + c]), |end, mid| {
                    let (pid, h) = self.owner[&mid];
                    out.push(Occurrence::new(pid, end + 1 - h, c + 2 - m));
                });
        }
        counters.add_comparisons(inspections);
        out.sort_unstable();
        out
    }

    /// Block-by-block search; positions are named through `index`.
    pub fn search_blocked(
        &self,
        text: &Matrix,
        index: &RowIndex,
        plan: &BlockPlan,
        min_h: usize,
        counters: &Counters,
    ) -> Vec<Occurrence> {
        let mut out = Vec::new();
        let m = self.width;
        if self.patterns.is_empty() || text.width() < m {
            return out;
        }
        let mut names = vec![0 as Symbol; plan.area()];
        let mut line = Vec::with_capacity(plan.block_w);
        counters.note_workspace((2 * plan.area()) as u64);
        let mut inspections = 0;
        for (top, left) in plan.blocks(text.height(), text.width(), min_h, m) {
            let view = text.view(top, left, plan.block_h, plan.block_w);
            let (h, w) = (view.height(), view.width());
            for i in 0..h {
                index.name_text_positions_into(view.row(i), &mut line);
                for (k, n) in line.iter().enumerate() {
                    names[i * w + k] = n.map_or(0, symbol);
                }
            }
            // only columns whose occurrences this block owns
            for c in m - 1..w.min(m - 1 + plan.step_w) {
                inspections += self
                    .columns
                    .scan((0..h).map(|r| names[r * w + c]), |end, mid| {
                        let (pid, ph) = self.owner[&mid];
                        let t = end - ph;
                        if plan.owns(t, c + 1 - m) {
                            out.push(Occurrence::new(pid, top + t + 1, left + c + 2 - m));
                        }
                    });
            }
        }
        counters.add_comparisons(inspections);
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::PatternMatrix;
    use crate::oracle::naive_search;

    struct Fixture {
        index: RowIndex,
        bb: BirdBaker,
        pats: Vec<PatternMatrix>,
    }

    impl Fixture {
        fn new() -> Self {
            Fixture {
                index: RowIndex::new(),
                bb: BirdBaker::new(),
                pats: Vec::new(),
            }
        }

        fn add(&mut self, id: u64, rows: &[&str]) {
            let m = Matrix::from_rows(rows).unwrap();
            let names: Vec<_> = m
                .rows()
                .map(|r| self.index.insert_row(r).unwrap())
                .collect();
            self.bb.add(PatternId(id), &m, &names).unwrap();
            self.pats.push(PatternMatrix::new(PatternId(id), m));
        }

        fn remove(&mut self, id: u64) {
            let pos = self
                .pats
                .iter()
                .position(|p| p.id == PatternId(id))
                .unwrap();
            let p = self.pats.remove(pos);
            for name in self.bb.d_prime(p.id).unwrap().to_vec() {
                self.index.remove_row(name).unwrap();
            }
            self.bb.remove(p.id).unwrap();
        }

        fn plan(&self) -> BlockPlan {
            let mp = self
                .pats
                .iter()
                .map(|p| p.matrix.height())
                .max()
                .unwrap_or(1);
            BlockPlan::new(mp, self.bb.width)
        }

        fn check(&self, text: &Matrix) -> Vec<Occurrence> {
            let c = Counters::default();
            let expected = naive_search(&self.pats, text);
            assert_eq!(self.bb.search_linear(text, &c), expected);
            let min_h = self
                .pats
                .iter()
                .map(|p| p.matrix.height())
                .min()
                .unwrap_or(1);
            assert_eq!(
                self.bb
                    .search_blocked(text, &self.index, &self.plan(), min_h, &c),
                expected
            );
            expected
        }
    }

    #[test]
    fn plan_geometry() {
        let p = BlockPlan::new(3, 5);
        assert_eq!((p.block_h, p.block_w, p.step_h, p.step_w), (5, 8, 2, 3));
        let p = BlockPlan::new(1, 1);
        assert_eq!((p.block_h, p.block_w, p.step_h, p.step_w), (2, 2, 1, 1));
    }

    #[test]
    fn d_prime_and_row_sharing() {
        let mut f = Fixture::new();
        f.add(1, &["ab", "cd"]);
        let d = f.bb.d_prime(PatternId(1)).unwrap().to_vec();
        assert_eq!(d.len(), 2);
        assert_ne!(d[0], d[1]);
        f.add(2, &["ab", "xy"]);
        assert_eq!(f.bb.distinct_rows(), 3);
        assert_eq!(f.bb.row_refs(d[0]), 2);
    }

    #[test]
    fn search_examples() {
        let mut f = Fixture::new();
        f.add(1, &["ab", "cd"]);
        let text = Matrix::from_rows(&["abx", "cdx", "xxx"]).unwrap();
        assert_eq!(f.check(&text), vec![Occurrence::new(PatternId(1), 1, 1)]);

        let text = Matrix::from_rows(&["zzz", "zzz"]).unwrap();
        assert!(f.check(&text).is_empty());

        let mut f = Fixture::new();
        f.add(1, &["abc"]);
        let text = Matrix::from_rows(&["abcabcab", "xabcxxxx"]).unwrap();
        assert_eq!(f.check(&text).len(), 3);
    }

    #[test]
    fn add_then_remove_restores_results() {
        let mut f = Fixture::new();
        f.add(1, &["ab", "ba"]);
        let text = Matrix::from_rows(&["abab", "baba", "abab", "baba"]).unwrap();
        let before = f.check(&text);
        f.add(2, &["ba", "ab"]);
        f.check(&text);
        f.remove(2);
        assert_eq!(f.check(&text), before);
    }

    #[test]
    fn straddling_block_boundary_reported_once() {
        let mut f = Fixture::new();
        f.add(1, &["abcd", "efgh", "ijkl"]);
        let plan = f.plan();
        let mut text = Matrix::from_rows(&["zzzzzzzzzzzzzz"; 12]).unwrap();
        let p = f.pats[0].matrix.clone();
        text.paste(&p, plan.step_h, plan.step_w);
        assert_eq!(
            f.check(&text),
            vec![Occurrence::new(
                PatternId(1),
                plan.step_h + 1,
                plan.step_w + 1
            )]
        );
    }

    #[test]
    fn text_smaller_than_pattern() {
        let mut f = Fixture::new();
        f.add(1, &["abcd", "abcd"]);
        let text = Matrix::from_rows(&["abc"]).unwrap();
        assert!(f.check(&text).is_empty());
    }
}
