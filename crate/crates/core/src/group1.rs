//! Engine for patterns whose rows all have period at most `floor(m̄/4)`.
//!
//! Every pattern row is reduced to its Lyndon class (the least rotation of
//! its period, repeated to width `m̄`) named in a witness tree, so a pattern
//! becomes the 1D sequence `P'` of class names. Text rows of a block are
//! classified the same way from the central columns shared by every
//! occurrence, which yields candidate top rows by 1D matching of `P'` down
//! the block. A candidate at top row `r` matches at column `j` exactly when
//!
//! * `j ≡ lwpos_T(r+i-1) - lwpos_P(i) + 1 (mod p_i)` for every row `i`, and
//! * every covered text row stays periodic over `[j, j + m̄ - 1]`.
//!
//! The second condition is a range query over the rows' periodic extents.
//! The first is answered by comparing canonical signatures (one per
//! candidate), or for tall patterns with periodic `P'` by a KMP pass over
//! signature tokens of `π`-row chunks, which shares work between
//! overlapping candidates.

use std::collections::HashMap;

use crate::dyn_dict::{DynMatcher, MatcherId};
use crate::error::{Error, Result};
use crate::matrix::{BlockView, Matrix, PatternId};
use crate::periodicity::{
    build_lcm_table, canonical_signature, canonize_row, classify_pattern, compute_period,
    failure_function, fill_repeated, gcd, group_threshold, least_rotation, mod_inverse,
    period_with, tokenize_pblocks, BlockNaming, CanonicalSignature, Group, LcmTable, PBlockToken,
    RowMeta, SignatureBuilder,
};
use crate::rmq::SparseTable;
use crate::stats::Counters;
use crate::witness_tree::WitnessTree;

/// Precomputed data for one p_block-verified pattern.
#[derive(Debug, Clone)]
pub struct PBlockPattern {
    /// Pairs `(class of chunk s-1, class of chunk s, Δz of chunk s)`.
    pairs: Vec<(u32, u32, u128)>,
    fail: Vec<usize>,
    /// `z` of the first chunk.
    z0: u128,
    /// Common LCM of the chunks' row periods.
    modulus: u128,
    /// Number of whole chunks.
    chunks: usize,
}

/// How a pattern's candidates are verified.
#[derive(Debug, Clone)]
pub enum VerifyPath {
    /// One canonical signature per candidate; `None` falls back to the
    /// congruence rule (LCM beyond 128 bits).
    Signature(Option<CanonicalSignature>),
    /// Token KMP over chunks of `π` rows.
    PBlocks(PBlockPattern),
}

#[derive(Debug, Clone)]
pub struct Group1Pattern {
    pub id: PatternId,
    /// Class name, period and `lwpos` of every row.
    pub metas: Vec<RowMeta>,
    /// `P'`, the sequence of class names.
    pub d_prime: Vec<u32>,
    pub lcm: LcmTable,
    /// Period of `P'`.
    pub pi: usize,
    /// Chunk tokens when `P'` is periodic.
    pub tokens: Option<Vec<PBlockToken>>,
    pub path: VerifyPath,
    matcher_id: MatcherId,
}

impl Group1Pattern {
    pub fn height(&self) -> usize {
        self.metas.len()
    }
}

/// Periodicity data of one text block.
#[derive(Debug)]
pub struct LinearizedBlock {
    pub metas: Vec<RowMeta>,
    pub width: usize,
    left: SparseTable,
    right: SparseTable,
    vals: Vec<usize>,
}

impl Default for LinearizedBlock {
    fn default() -> Self {
        LinearizedBlock {
            metas: Vec::new(),
            width: 0,
            left: SparseTable::max(),
            right: SparseTable::min(),
            vals: Vec::new(),
        }
    }
}

impl LinearizedBlock {
    /// `(maxLeft, minRight)` over the 1-based rows `[r, r + h - 1]`.
    pub fn extent(&self, r: usize, h: usize) -> (usize, usize) {
        (
            self.left.query(r - 1, r + h - 2),
            self.right.query(r - 1, r + h - 2),
        )
    }

    fn index(&mut self) {
        self.vals.clear();
        self.vals.extend(self.metas.iter().map(|m| m.left));
        self.left.rebuild(&self.vals);
        self.vals.clear();
        self.vals.extend(self.metas.iter().map(|m| m.right));
        self.right.rebuild(&self.vals);
    }

    /// Preallocates room for blocks of up to `rows` rows.
    pub fn reserve(&mut self, rows: usize) {
        self.metas.reserve(rows.saturating_sub(self.metas.len()));
        self.vals.reserve(rows.saturating_sub(self.vals.len()));
        self.left.reserve(rows);
        self.right.reserve(rows);
    }

    pub fn cells(&self) -> usize {
        self.metas.capacity() + self.left.cells() + self.right.cells() + self.vals.capacity()
    }
}

/// Reusable per-search buffers.
#[derive(Debug, Default)]
pub struct Group1Scratch {
    pub block: LinearizedBlock,
    fail: Vec<usize>,
    lyndon: Vec<u8>,
    canonical: Vec<u8>,
    candidates: Vec<(PatternId, usize)>,
    builder: SignatureBuilder,
    chunks: Vec<(u32, u128, u128)>,
}

impl Group1Scratch {
    /// Candidates from the last [`Group1Engine::find_candidates`] call.
    pub fn candidates(&self) -> &[(PatternId, usize)] {
        &self.candidates
    }

    /// Preallocates every buffer for blocks of `rows x cols` and at most
    /// `candidates` candidates per block, so a search never grows them.
    pub fn reserve(&mut self, rows: usize, cols: usize, candidates: usize) {
        fn at_least<T>(v: &mut Vec<T>, n: usize) {
            v.reserve(n.saturating_sub(v.len()));
        }
        self.block.reserve(rows);
        at_least(&mut self.fail, cols + 1);
        at_least(&mut self.lyndon, cols);
        at_least(&mut self.canonical, cols);
        at_least(&mut self.candidates, candidates);
        at_least(&mut self.chunks, rows + 1);
        self.builder.reserve(rows);
    }

    pub fn cells(&self) -> usize {
        self.block.cells()
            + self.fail.capacity()
            + self.lyndon.capacity()
            + self.canonical.capacity()
            + 2 * self.candidates.capacity()
            + self.builder.residues().len()
            + 3 * self.chunks.capacity()
    }
}

/// Columns `j` still admissible after some rows' congruences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Columns {
    /// `j ≡ a (mod m)`.
    Progression {
        a: u64,
        m: u64,
    },
    /// The modulus passed the column bound; at most this column remains.
    Pinned(u64),
    Empty,
}

impl Columns {
    const ALL: Columns = Columns::Progression { a: 0, m: 1 };

    /// Adds `j ≡ b (mod p)`, keeping only columns up to `hi`.
    fn restrict(self, b: i64, p: u64, hi: u64) -> Columns {
        let b = b.rem_euclid(p as i64) as u64;
        match self {
            Columns::Empty => Columns::Empty,
            Columns::Pinned(j) if j % p == b => self,
            Columns::Pinned(_) => Columns::Empty,
            Columns::Progression { a, m } => {
                let g = gcd(m as u128, p as u128) as u64;
                let diff = (b + p - a % p) % p;
                if !diff.is_multiple_of(g) {
                    return Columns::Empty;
                }
                let (mg, pg) = (m / g, p / g);
                let t = if pg == 1 {
                    0
                } else {
                    let inv = mod_inverse((mg % pg) as u128, pg as u128) as u64;
                    (diff / g) % pg * inv % pg
                };
                let nm = mg * p;
                let na = (a + m * t) % nm;
                if nm > hi {
                    let j = if na == 0 { nm } else { na };
                    if j <= hi {
                        Columns::Pinned(j)
                    } else {
                        Columns::Empty
                    }
                } else {
                    Columns::Progression { a: na, m: nm }
                }
            }
        }
    }
}

/// Calls `f` for each `j` in `[lo, hi]` with `j ≡ a (mod m)`.
fn each_column(a: u128, m: u128, lo: usize, hi: usize, mut f: impl FnMut(usize)) {
    if lo > hi {
        return;
    }
    let first = lo as u128 + (a % m + m - lo as u128 % m) % m;
    let mut j = first;
    while j <= hi as u128 {
        f(j as usize);
        j += m;
    }
}

#[derive(Debug)]
pub struct Group1Engine {
    lyndon: WitnessTree,
    matcher: DynMatcher,
    naming: BlockNaming,
    patterns: HashMap<PatternId, Group1Pattern>,
    by_matcher: HashMap<MatcherId, PatternId>,
    width: usize,
    pblock_threshold: Option<usize>,
    work: u64,
}

impl Default for Group1Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Group1Engine {
    pub fn new() -> Self {
        Group1Engine {
            lyndon: WitnessTree::new(),
            matcher: DynMatcher::new(),
            naming: BlockNaming::default(),
            patterns: HashMap::new(),
            by_matcher: HashMap::new(),
            width: 0,
            pblock_threshold: None,
            work: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn pattern(&self, id: PatternId) -> Option<&Group1Pattern> {
        self.patterns.get(&id)
    }

    pub fn update_work(&self) -> u64 {
        self.work + self.matcher.update_work()
    }

    /// Patterns taller than this (with periodic `P'`) use the p_block path.
    /// Defaults to `2m̄`; affects patterns inserted afterwards.
    pub fn set_pblock_threshold(&mut self, rows: Option<usize>) {
        self.pblock_threshold = rows;
    }

    /// Number of distinct live Lyndon classes.
    pub fn class_count(&self) -> usize {
        self.lyndon.name_count()
    }

    pub fn insert(&mut self, id: PatternId, p: &Matrix) -> Result<()> {
        if classify_pattern(p) != Group::One {
            return Err(Error::WrongGroup("the short-period group"));
        }
        if self.patterns.is_empty() {
            self.width = p.width();
        } else if p.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: p.width(),
            });
        }
        let m = self.width;
        let mut metas = Vec::with_capacity(p.height());
        for row in p.rows() {
            let c = canonize_row(row);
            let ins = self.lyndon.insert(&c.canonical)?;
            self.work += (ins.inspections + 2 * m) as u64;
            metas.push(RowMeta {
                class_name: ins.name,
                ..c.meta
            });
        }
        let d_prime: Vec<u32> = metas.iter().map(|x| x.class_name).collect();
        let matcher_id = self.matcher.insert(&d_prime);
        let periods: Vec<usize> = metas.iter().map(|x| x.period).collect();
        let lcm = build_lcm_table(&periods, 2 * m as u64);
        let h = metas.len();
        let pi = compute_period(&d_prime);
        let tokens = if 2 * pi <= h {
            tokenize_pblocks(&metas, pi, &mut self.naming)
        } else {
            None
        };
        self.work += h as u64;
        let threshold = self.pblock_threshold.unwrap_or(2 * m);
        let path = match &tokens {
            Some(t) if h > threshold => {
                let pairs: Vec<(u32, u32, u128)> = t
                    .windows(2)
                    .map(|w| (w[0].block_class, w[1].block_class, w[1].delta_z.unwrap()))
                    .collect();
                let first = canonical_signature(&metas[..pi]).expect("chunk tokenized");
                VerifyPath::PBlocks(PBlockPattern {
                    fail: failure_function(&pairs),
                    pairs,
                    z0: first.z,
                    modulus: first.modulus,
                    chunks: t.len(),
                })
            }
            _ => VerifyPath::Signature(canonical_signature(&metas)),
        };
        self.by_matcher.insert(matcher_id, id);
        self.patterns.insert(
            id,
            Group1Pattern {
                id,
                metas,
                d_prime,
                lcm,
                pi,
                tokens,
                path,
                matcher_id,
            },
        );
        Ok(())
    }

    pub fn remove(&mut self, id: PatternId) -> Result<()> {
        let g = self
            .patterns
            .remove(&id)
            .ok_or(Error::UnknownPattern(id.0))?;
        for name in &g.d_prime {
            self.lyndon.remove(*name)?;
        }
        self.matcher.remove(g.matcher_id)?;
        self.by_matcher.remove(&g.matcher_id);
        self.work += g.d_prime.len() as u64;
        Ok(())
    }

    /// Periodicity record of one text row of a block of width `row.len()`.
    /// Returns the record and the number of byte inspections.
    fn row_meta(&self, row: &[u8], s: &mut Group1Scratch) -> (RowMeta, u64) {
        let (w, m) = (row.len(), self.width);
        let threshold = group_threshold(m);
        if w < m || threshold == 0 {
            return (RowMeta::NULL, 0);
        }
        // columns shared by every width-m̄ window of the row
        let start = w - m;
        let window = &row[start..m];
        let q = period_with(window, &mut s.fail);
        let mut cost = window.len() as u64;
        if q > threshold {
            return (RowMeta::NULL, cost);
        }
        let mut l = start;
        while l > 0 && row[l - 1] == row[l - 1 + q] {
            l -= 1;
        }
        let mut r = m - 1;
        while r + 1 < w && row[r + 1] == row[r + 1 - q] {
            r += 1;
        }
        cost += (w - window.len()) as u64;
        let base = &window[..q];
        let k = least_rotation(base);
        s.lyndon.clear();
        s.lyndon.extend_from_slice(&base[k..]);
        s.lyndon.extend_from_slice(&base[..k]);
        fill_repeated(&s.lyndon, m, &mut s.canonical);
        let (name, inspections) = self.lyndon.lookup(&s.canonical);
        cost += (2 * q + inspections) as u64;
        let Some(class_name) = name else {
            return (RowMeta::NULL, cost);
        };
        let lwpos = l + 1 + (start + k - l) % q;
        (
            RowMeta {
                class_name,
                period: q,
                lwpos,
                left: l + 1,
                right: r + 1,
            },
            cost,
        )
    }

    /// Classifies every row of `block` into `s.block`. Returns the work done.
    pub fn linearize_block(&self, block: &BlockView<'_>, s: &mut Group1Scratch) -> u64 {
        let mut metas = std::mem::take(&mut s.block.metas);
        metas.clear();
        let mut cost = 0;
        for i in 0..block.height() {
            let (meta, c) = self.row_meta(block.row(i), s);
            metas.push(meta);
            cost += c;
        }
        s.block.metas = metas;
        s.block.width = block.width();
        s.block.index();
        cost
    }

    /// Candidate top rows (1-based, at most `max_top`) from 1D matching of
    /// `P'` down the linearized block, sorted by pattern then row.
    pub fn find_candidates(&self, s: &mut Group1Scratch, max_top: usize) -> u64 {
        s.candidates.clear();
        let cands = &mut s.candidates;
        let cost = self
            .matcher
            .scan(s.block.metas.iter().map(|x| x.class_name), |end, mid| {
                let id = self.by_matcher[&mid];
                let h = self.patterns[&id].height();
                let top = end + 1 - h;
                if top <= max_top {
                    cands.push((id, top));
                }
            });
        cands.sort_unstable();
        cost
    }

    /// Runs the whole pipeline on one block, reporting block-local 1-based
    /// `(pattern, row, col)` for occurrences with `row <= max_top` and
    /// `col <= max_col`.
    pub fn search_block(
        &self,
        block: &BlockView<'_>,
        max_top: usize,
        max_col: usize,
        s: &mut Group1Scratch,
        counters: &Counters,
        mut emit: impl FnMut(PatternId, usize, usize),
    ) {
        if self.patterns.is_empty() || block.width() < self.width {
            return;
        }
        assert!(
            block.width() <= (3 * self.width).div_ceil(2),
            "block wider than 3m̄/2"
        );
        let mut cost = self.linearize_block(block, s);
        cost += self.find_candidates(s, max_top);
        counters.add_candidates(s.candidates.len() as u64);
        let cands = std::mem::take(&mut s.candidates);
        let mut i = 0;
        while i < cands.len() {
            let id = cands[i].0;
            let mut e = i;
            while e < cands.len() && cands[e].0 == id {
                e += 1;
            }
            let tops: Vec<usize> = cands[i..e].iter().map(|c| c.1).collect();
            cost += self.verify_candidates(id, &tops, max_col, s, |r, j| emit(id, r, j));
            i = e;
        }
        s.candidates = cands;
        counters.add_comparisons(cost);
        counters.note_workspace(s.cells() as u64);
    }

    /// Verifies sorted candidate tops of pattern `id` against `s.block`,
    /// reporting `(row, col)` with `col <= max_col`. Returns the work done.
    pub fn verify_candidates(
        &self,
        id: PatternId,
        tops: &[usize],
        max_col: usize,
        s: &mut Group1Scratch,
        mut emit: impl FnMut(usize, usize),
    ) -> u64 {
        let g = &self.patterns[&id];
        let mut cost = 0;
        match &g.path {
            VerifyPath::Signature(Some(sig)) => {
                for &r in tops {
                    cost += self.verify_signature(g, sig, r, max_col, s, &mut emit);
                }
            }
            VerifyPath::Signature(None) => {
                for &r in tops {
                    cost += self.verify_normative(g, r, max_col, &s.block, &mut emit);
                }
            }
            VerifyPath::PBlocks(pb) => {
                let mut i = 0;
                while i < tops.len() {
                    let mut e = i + 1;
                    while e < tops.len() && tops[e] == tops[e - 1] + g.pi {
                        e += 1;
                    }
                    match self.verify_chain(g, pb, &tops[i..e], max_col, s, &mut emit) {
                        Some(c) => cost += c,
                        None => {
                            for &r in &tops[i..e] {
                                cost += self.verify_normative(g, r, max_col, &s.block, &mut emit);
                            }
                        }
                    }
                    i = e;
                }
            }
        }
        cost
    }

    /// Admissible column range `[lo, hi]` for top row `r`.
    fn column_range(
        &self,
        g: &Group1Pattern,
        r: usize,
        max_col: usize,
        b: &LinearizedBlock,
    ) -> (usize, usize) {
        let (max_left, min_right) = b.extent(r, g.height());
        let hi = (min_right + 1).saturating_sub(self.width).min(max_col);
        (max_left.max(1), hi)
    }

    /// The congruence rule applied row by row.
    pub fn verify_normative(
        &self,
        g: &Group1Pattern,
        r: usize,
        max_col: usize,
        b: &LinearizedBlock,
        emit: &mut impl FnMut(usize, usize),
    ) -> u64 {
        let (lo, hi) = self.column_range(g, r, max_col, b);
        if lo > hi {
            return 1;
        }
        let mut cols = Columns::ALL;
        for (i, pm) in g.metas.iter().enumerate() {
            let tm = &b.metas[r - 1 + i];
            let target = tm.lwpos as i64 - pm.lwpos as i64 + 1;
            cols = cols.restrict(target, pm.period as u64, hi as u64);
            if cols == Columns::Empty {
                return i as u64 + 1;
            }
        }
        match cols {
            Columns::Progression { a, m } => {
                each_column(a as u128, m as u128, lo, hi, |j| emit(r, j))
            }
            Columns::Pinned(j) if j as usize >= lo => emit(r, j as usize),
            _ => {}
        }
        g.height() as u64
    }

    fn verify_signature(
        &self,
        g: &Group1Pattern,
        sig: &CanonicalSignature,
        r: usize,
        max_col: usize,
        s: &mut Group1Scratch,
        emit: &mut impl FnMut(usize, usize),
    ) -> u64 {
        let (lo, hi) = self.column_range(g, r, max_col, &s.block);
        if lo > hi {
            return 1;
        }
        let h = g.height();
        s.builder.reset();
        for tm in &s.block.metas[r - 1..r - 1 + h] {
            s.builder.push(tm.period, tm.lwpos);
        }
        let Some((zt, l)) = s.builder.z_and_modulus() else {
            return self.verify_normative(g, r, max_col, &s.block, emit);
        };
        if s.builder.residues() == sig.residues.as_slice() {
            let a = (zt + l - sig.z % l) % l + 1;
            each_column(a, l, lo, hi, |j| emit(r, j));
        }
        2 * h as u64
    }

    /// Verifies a chain of candidate tops spaced `π` apart. `None` when a
    /// chunk's LCM overflows.
    fn verify_chain(
        &self,
        g: &Group1Pattern,
        pb: &PBlockPattern,
        chain: &[usize],
        max_col: usize,
        s: &mut Group1Scratch,
        emit: &mut impl FnMut(usize, usize),
    ) -> Option<u64> {
        let pi = g.pi;
        let r0 = chain[0];
        let n = chain.len() - 1 + pb.chunks;
        s.chunks.clear();
        for c in 0..n {
            let rows = &s.block.metas[r0 - 1 + c * pi..r0 - 1 + (c + 1) * pi];
            s.builder.reset();
            for tm in rows {
                s.builder.push(tm.period, tm.lwpos);
            }
            let (z, l) = s.builder.z_and_modulus()?;
            let class = self.naming.lookup(rows, s.builder.residues());
            s.chunks.push((class, z, l));
        }
        let mut cost = (n * pi) as u64;
        let k = pb.pairs.len();
        let mut q = 0;
        for c in 1..n {
            let (pc, pz, _) = s.chunks[c - 1];
            let (cc, cz, cl) = s.chunks[c];
            let t = (pc, cc, (cz + cl - pz % cl) % cl);
            cost += 1;
            while q > 0 && pb.pairs[q] != t {
                q = pb.fail[q];
                cost += 1;
            }
            if pb.pairs[q] == t {
                q += 1;
            }
            if q == k {
                let a = c - k;
                if a < chain.len() {
                    cost += self.finish_chain_match(
                        g,
                        pb,
                        chain[a],
                        s.chunks[a].1,
                        max_col,
                        &s.block,
                        emit,
                    );
                }
                q = pb.fail[q];
            }
        }
        Some(cost)
    }

    /// Checks the rows after the last whole chunk and the width, then
    /// reports the columns of a chunk-verified candidate.
    #[allow(clippy::too_many_arguments)]
    fn finish_chain_match(
        &self,
        g: &Group1Pattern,
        pb: &PBlockPattern,
        r: usize,
        zt: u128,
        max_col: usize,
        b: &LinearizedBlock,
        emit: &mut impl FnMut(usize, usize),
    ) -> u64 {
        let l = pb.modulus;
        let a = (zt + l - pb.z0 % l) % l + 1;
        let mut cost = 1;
        for i in pb.chunks * g.pi..g.height() {
            let (pm, tm) = (&g.metas[i], &b.metas[r - 1 + i]);
            let p = pm.period as i128;
            let target = tm.lwpos as i128 - pm.lwpos as i128 + 1;
            cost += 1;
            if (a as i128 - target).rem_euclid(p) != 0 {
                return cost;
            }
        }
        let (lo, hi) = self.column_range(g, r, max_col, b);
        each_column(a, l, lo, hi, |j| emit(r, j));
        cost
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{Occurrence, PatternMatrix};
    use crate::oracle::naive_search;
    use crate::periodicity::CappedLcm;
    use proptest::prelude::*;

    fn mat(rows: &[&str]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn single_block(e: &Group1Engine, text: &Matrix) -> Vec<(PatternId, usize, usize)> {
        let mut s = Group1Scratch::default();
        let c = Counters::default();
        let mut out = Vec::new();
        let view = text.view(0, 0, text.height(), text.width());
        e.search_block(
            &view,
            text.height(),
            text.width(),
            &mut s,
            &c,
            |id, r, j| out.push((id, r, j)),
        );
        out.sort_unstable();
        out
    }

    #[test]
    fn preprocess_examples() {
        let mut e = Group1Engine::new();
        e.insert(PatternId(1), &mat(&["abababab", "abababab"]))
            .unwrap();
        let g = e.pattern(PatternId(1)).unwrap();
        assert_eq!(g.d_prime[0], g.d_prime[1]);
        assert_eq!(g.pi, 1);
        assert_eq!(g.lcm.values, vec![CappedLcm::Finite(2); 2]);
        let t = g.tokens.as_ref().unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].block_class, t[1].block_class);
        assert_eq!(t[1].delta_z, Some(0));

        // period 4 needs m̄ >= 16 to stay within the threshold
        let mut e = Group1Engine::new();
        e.insert(
            PatternId(2),
            &mat(&["abababababababab", "aabbaabbaabbaabb"]),
        )
        .unwrap();
        let g = e.pattern(PatternId(2)).unwrap();
        assert_ne!(g.d_prime[0], g.d_prime[1]);
        assert_eq!(
            g.lcm.values,
            vec![CappedLcm::Finite(2), CappedLcm::Finite(4)]
        );

        e.insert(PatternId(3), &mat(&["abababababababab"])).unwrap();
        let VerifyPath::Signature(Some(sig)) = &e.pattern(PatternId(3)).unwrap().path else {
            panic!("expected a signature");
        };
        assert_eq!((sig.residues.as_slice(), sig.z), (&[0][..], 1));
    }

    #[test]
    fn rejects_group_two_and_other_widths() {
        let mut e = Group1Engine::new();
        assert!(e.insert(PatternId(1), &mat(&["abcdefgh"])).is_err());
        e.insert(PatternId(2), &mat(&["aaaaaaaa"])).unwrap();
        assert!(e.insert(PatternId(3), &mat(&["aaaa"])).is_err());
    }

    fn meta_of(e: &Group1Engine, row: &str) -> RowMeta {
        let mut s = Group1Scratch::default();
        e.row_meta(row.as_bytes(), &mut s).0
    }

    #[test]
    fn linearize_examples() {
        let mut e = Group1Engine::new();
        e.insert(PatternId(1), &mat(&["abababab"])).unwrap();
        let m = meta_of(&e, "abababab");
        assert_eq!((m.period, m.lwpos, m.left, m.right), (2, 1, 1, 8));
        let m = meta_of(&e, "abababababab");
        assert_eq!((m.period, m.lwpos, m.left, m.right), (2, 1, 1, 12));
        let m = meta_of(&e, "xxababababxx");
        assert_eq!((m.period, m.left, m.right), (2, 3, 10));
        assert_eq!(m.lwpos, 3);
        assert!(!m.is_null());
        assert!(meta_of(&e, "xxabcdefghxx").is_null());
        // periodic but not a dictionary class
        assert!(meta_of(&e, "cdcdcdcdcdcd").is_null());
    }

    #[test]
    fn verify_examples() {
        let mut e = Group1Engine::new();
        e.insert(PatternId(1), &mat(&["abababab", "abababab"]))
            .unwrap();
        let text = mat(&["abababababab"; 2]);
        let got: Vec<usize> = single_block(&e, &text).iter().map(|o| o.2).collect();
        assert_eq!(got, vec![1, 3, 5]);
        let text = mat(&["babababababa"; 2]);
        let got: Vec<usize> = single_block(&e, &text).iter().map(|o| o.2).collect();
        assert_eq!(got, vec![2, 4]);
        // periodic over too few columns
        let text = mat(&["ababababxxxx", "xxxxabababab"]);
        assert!(single_block(&e, &text).is_empty());
    }

    #[test]
    fn candidates_split_by_null_rows() {
        let mut e = Group1Engine::new();
        e.insert(PatternId(1), &mat(&["aaaaaaaa", "aaaaaaaa"]))
            .unwrap();
        let text = mat(&[
            "aaaaaaaa", "aaaaaaaa", "abcdefgh", "aaaaaaaa", "aaaaaaaa", "aaaaaaaa",
        ]);
        let mut s = Group1Scratch::default();
        e.linearize_block(&text.view(0, 0, 6, 8), &mut s);
        e.find_candidates(&mut s, 6);
        let tops: Vec<usize> = s.candidates.iter().map(|c| c.1).collect();
        assert_eq!(tops, vec![1, 4, 5]);
    }

    /// A random row of width `m` with period at most `max_p` over `alpha`.
    fn periodic_row(m: usize, base: &[u8], shift: usize) -> Vec<u8> {
        (0..m).map(|k| base[(k + shift) % base.len()]).collect()
    }

    #[derive(Debug, Clone)]
    struct Case {
        m: usize,
        bases: Vec<Vec<u8>>,
        patterns: Vec<Vec<(usize, usize)>>,
        text_rows: Vec<(usize, usize)>,
        text_w: usize,
        plants: Vec<(usize, usize, usize)>,
    }

    fn case() -> impl Strategy<Value = Case> {
        (prop_oneof![Just(8usize), Just(12), Just(16)], 1usize..4).prop_flat_map(|(m, nb)| {
            let thr = m / 4;
            let base = (1..=thr).prop_flat_map(|p| proptest::collection::vec(b'a'..b'c', p));
            let bases = proptest::collection::vec(base, nb..=nb);
            let row = (0..nb, 0..m);
            let pattern = proptest::collection::vec(row.clone(), 1..13);
            (
                Just(m),
                bases,
                proptest::collection::vec(pattern, 1..4),
                proptest::collection::vec(row, 1..30),
                m..=(3 * m).div_ceil(2),
                proptest::collection::vec((0usize..4, 0usize..30, 0usize..30), 0..4),
            )
                .prop_map(|(m, bases, patterns, text_rows, text_w, plants)| Case {
                    m,
                    bases,
                    patterns,
                    text_rows,
                    text_w,
                    plants,
                })
        })
    }

    fn build(c: &Case) -> (Vec<PatternMatrix>, Matrix) {
        let pats: Vec<PatternMatrix> = c
            .patterns
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let rows: Vec<Vec<u8>> = rows
                    .iter()
                    .map(|&(b, sh)| periodic_row(c.m, &c.bases[b], sh))
                    .collect();
                PatternMatrix::new(PatternId(k as u64 + 1), Matrix::from_rows(&rows).unwrap())
            })
            .collect();
        let rows: Vec<Vec<u8>> = c
            .text_rows
            .iter()
            .map(|&(b, sh)| periodic_row(c.text_w, &c.bases[b], sh))
            .collect();
        let mut text = Matrix::from_rows(&rows).unwrap();
        for &(k, r, col) in &c.plants {
            let p = &pats[k % pats.len()].matrix;
            if p.height() <= text.height() {
                let r = r % (text.height() - p.height() + 1);
                let col = col % (text.width() - p.width() + 1);
                text.paste(p, r, col);
            }
        }
        (pats, text)
    }

    fn engine(pats: &[PatternMatrix], threshold: Option<usize>) -> Group1Engine {
        let mut e = Group1Engine::new();
        e.set_pblock_threshold(threshold);
        for p in pats {
            e.insert(p.id, &p.matrix).unwrap();
        }
        e
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn single_block_matches_oracle(c in case(), force in any::<bool>()) {
            let (pats, text) = build(&c);
            let e = engine(&pats, force.then_some(0));
            let mut got: Vec<Occurrence> = single_block(&e, &text)
                .into_iter()
                .map(|(id, r, j)| Occurrence::new(id, r, j))
                .collect();
            got.sort_unstable();
            prop_assert_eq!(got, naive_search(&pats, &text));
        }

        #[test]
        fn fast_paths_equal_congruence_rule(c in case(), force in any::<bool>()) {
            let (pats, text) = build(&c);
            let e = engine(&pats, force.then_some(0));
            let mut s = Group1Scratch::default();
            e.linearize_block(&text.view(0, 0, text.height(), text.width()), &mut s);
            e.find_candidates(&mut s, text.height());
            let cands = s.candidates.clone();
            for p in &pats {
                let tops: Vec<usize> = cands.iter().filter(|x| x.0 == p.id).map(|x| x.1).collect();
                let mut fast = Vec::new();
                e.verify_candidates(p.id, &tops, text.width(), &mut s, |r, j| fast.push((r, j)));
                let mut slow = Vec::new();
                let g = e.pattern(p.id).unwrap();
                for &r in &tops {
                    e.verify_normative(g, r, text.width(), &s.block, &mut |r, j| slow.push((r, j)));
                }
                fast.sort_unstable();
                slow.sort_unstable();
                prop_assert_eq!(fast, slow);
            }
        }

        #[test]
        fn same_row_spacing_is_lcm_multiple(c in case()) {
            let (pats, text) = build(&c);
            let occ = naive_search(&pats, &text);
            let e = engine(&pats, None);
            for w in occ.windows(2) {
                if w[0].pattern == w[1].pattern && w[0].row == w[1].row {
                    let g = e.pattern(w[0].pattern).unwrap();
                    if let CappedLcm::Finite(l) = g.lcm.last() {
                        prop_assert_eq!((w[1].col - w[0].col) as u64 % l, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn tall_periodic_pattern_uses_chunks() {
        let mut e = Group1Engine::new();
        let rows: Vec<&str> = [
            "abababababababab",
            "aabbaabbaabbaabb",
            "abababababababab",
            "aabbaabbaabbaabb",
            "abababababababab",
        ]
        .into_iter()
        .cycle()
        .take(40)
        .collect();
        e.insert(PatternId(1), &mat(&rows)).unwrap();
        let g = e.pattern(PatternId(1)).unwrap();
        assert!(matches!(g.path, VerifyPath::PBlocks(_)));
        assert_eq!(g.pi, 5);
        let p = mat(&rows);
        let mut text = Matrix::from_rows(&vec!["abababababababababababab"; 70]).unwrap();
        text.paste(&p, 3, 1);
        text.paste(&p, 18, 3);
        let pm = [PatternMatrix::new(PatternId(1), p)];
        let mut got: Vec<Occurrence> = single_block(&e, &text)
            .into_iter()
            .map(|(id, r, j)| Occurrence::new(id, r, j))
            .collect();
        got.sort_unstable();
        assert_eq!(got, naive_search(&pm, &text));
        assert!(!got.is_empty());
    }

    #[test]
    fn remove_releases_classes() {
        let mut e = Group1Engine::new();
        e.insert(PatternId(1), &mat(&["abababab"])).unwrap();
        e.insert(PatternId(2), &mat(&["babababa", "cccccccc"]))
            .unwrap();
        assert_eq!(e.class_count(), 2);
        e.remove(PatternId(2)).unwrap();
        assert_eq!(e.class_count(), 1);
        assert!(e.remove(PatternId(2)).is_err());
        let text = mat(&["babababab"]);
        assert_eq!(single_block(&e, &text).len(), 1);
    }
}
