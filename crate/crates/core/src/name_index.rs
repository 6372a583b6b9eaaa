//! LCP queries between suffixes of the 1D name sequences of Group II
//! patterns.
//!
//! The indexed snapshot is a suffix array with an LCP array and a sparse
//! table over it, built over the concatenated sequences with a unique
//! separator after each. Sequences inserted since the last build, and
//! queries touching them, fall back to direct comparison. The snapshot is
//! rebuilt once pending plus removed symbols exceed half of the indexed live
//! symbols.

use std::collections::HashMap;

use crate::matrix::PatternId;
use crate::rmq::SparseTable;

#[derive(Debug)]
struct Snapshot {
    /// Rank of each suffix of the concatenation.
    rank: Vec<u32>,
    /// `lcp[r]` is the LCP of the suffixes ranked `r - 1` and `r`.
    lcp: SparseTable,
}

#[derive(Debug, Default)]
pub struct NameSuffixIndex {
    seqs: HashMap<PatternId, Box<[u32]>>,
    /// Start offset in the snapshot of every indexed live sequence.
    offsets: HashMap<PatternId, usize>,
    snapshot: Option<Snapshot>,
    indexed_live: usize,
    pending: usize,
    removed: usize,
    rebuilds: u64,
    work: u64,
}

impl NameSuffixIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn rebuilds(&self) -> u64 {
        self.rebuilds
    }

    /// Cumulative construction work.
    pub fn update_work(&self) -> u64 {
        self.work
    }

    pub fn sequence(&self, id: PatternId) -> Option<&[u32]> {
        self.seqs.get(&id).map(|s| &**s)
    }

    pub fn is_indexed(&self, id: PatternId) -> bool {
        self.offsets.contains_key(&id)
    }

    pub fn insert(&mut self, id: PatternId, seq: &[u32]) {
        assert!(!seq.is_empty());
        self.work += seq.len() as u64;
        if let Some(old) = self.seqs.insert(id, seq.into()) {
            self.forget(id, old.len());
        }
        self.pending += seq.len();
        self.maybe_rebuild();
    }

    pub fn remove(&mut self, id: PatternId) -> bool {
        let Some(old) = self.seqs.remove(&id) else {
            return false;
        };
        self.work += 1;
        self.forget(id, old.len());
        self.maybe_rebuild();
        true
    }

    fn forget(&mut self, id: PatternId, len: usize) {
        if self.offsets.remove(&id).is_some() {
            self.indexed_live -= len;
            self.removed += len;
        } else {
            self.pending -= len;
        }
    }

    fn maybe_rebuild(&mut self) {
        if (self.pending + self.removed) * 2 > self.indexed_live {
            self.rebuild();
        }
    }

    /// Builds a fresh snapshot over all live sequences.
    pub fn rebuild(&mut self) {
        self.rebuilds += 1;
        self.offsets.clear();
        self.pending = 0;
        self.removed = 0;
        self.indexed_live = 0;
        if self.seqs.is_empty() {
            self.snapshot = None;
            return;
        }
        let mut ids: Vec<PatternId> = self.seqs.keys().copied().collect();
        ids.sort_unstable();
        let mut text: Vec<u64> = Vec::new();
        for (k, id) in ids.iter().enumerate() {
            let s = &self.seqs[id];
            self.offsets.insert(*id, text.len());
            self.indexed_live += s.len();
            text.extend(s.iter().map(|&x| x as u64));
            text.push((1u64 << 32) + k as u64);
        }
        let sa = suffix_array(&text);
        let mut rank = vec![0u32; text.len()];
        for (r, &p) in sa.iter().enumerate() {
            rank[p as usize] = r as u32;
        }
        let lcp_values = kasai(&text, &sa, &rank);
        let mut lcp = SparseTable::min();
        lcp.rebuild(&lcp_values);
        let n = text.len() as u64;
        self.work += n * (64 - n.leading_zeros() as u64).max(1);
        self.snapshot = Some(Snapshot { rank, lcp });
    }

    /// LCP of sequence `a` from 0-based offset `i` and sequence `b` from
    /// offset `j`. Returns the length and the query cost.
    pub fn lcp(&self, a: PatternId, i: usize, b: PatternId, j: usize) -> (usize, u64) {
        let sa = &self.seqs[&a];
        let sb = &self.seqs[&b];
        let cap = (sa.len() - i).min(sb.len() - j);
        if let (Some(snap), Some(&oa), Some(&ob)) =
            (&self.snapshot, self.offsets.get(&a), self.offsets.get(&b))
        {
            let (pa, pb) = (oa + i, ob + j);
            if pa == pb {
                return (cap, 1);
            }
            let (ra, rb) = (snap.rank[pa] as usize, snap.rank[pb] as usize);
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            return (snap.lcp.query(lo + 1, hi).min(cap), 1);
        }
        let k = sa[i..]
            .iter()
            .zip(&sb[j..])
            .take_while(|(x, y)| x == y)
            .count();
        (k, k as u64 + 1)
    }
}

/// Suffix array by prefix doubling.
fn suffix_array(text: &[u64]) -> Vec<u32> {
    let n = text.len();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut sorted = text.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut rank: Vec<u32> = text
        .iter()
        .map(|x| sorted.binary_search(x).unwrap() as u32)
        .collect();
    let mut tmp = vec![0u32; n];
    let mut k = 1;
    loop {
        let key = |p: u32| {
            let p = p as usize;
            let second = if p + k < n { rank[p + k] as i64 } else { -1 };
            (rank[p], second)
        };
        sa.sort_unstable_by_key(|&p| key(p));
        tmp[sa[0] as usize] = 0;
        for w in 1..n {
            let bump = (key(sa[w - 1]) < key(sa[w])) as u32;
            tmp[sa[w] as usize] = tmp[sa[w - 1] as usize] + bump;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1] as usize] as usize == n - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

/// LCP array: entry `r` is the LCP of suffixes ranked `r - 1` and `r`.
fn kasai(text: &[u64], sa: &[u32], rank: &[u32]) -> Vec<usize> {
    let n = text.len();
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for p in 0..n {
        let r = rank[p] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let q = sa[r - 1] as usize;
        while p + h < n && q + h < n && text[p + h] == text[q + h] {
            h += 1;
        }
        lcp[r] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn suffix_array_small() {
        let t: Vec<u64> = b"banana".iter().map(|&b| b as u64).collect();
        assert_eq!(suffix_array(&t), vec![5, 3, 1, 0, 4, 2]);
    }

    #[test]
    fn pending_sequences_use_direct_comparison() {
        let mut x = NameSuffixIndex::new();
        for k in 0..4 {
            x.insert(PatternId(k), &[1, 2, 3, 4, 5, 6, 7, 8]);
        }
        x.insert(PatternId(9), &[1, 2, 9]);
        assert!(!x.is_indexed(PatternId(9)) || x.rebuilds() > 0);
        assert_eq!(x.lcp(PatternId(9), 0, PatternId(0), 0).0, 2);
        assert_eq!(x.lcp(PatternId(1), 3, PatternId(2), 3).0, 5);
        assert_eq!(x.lcp(PatternId(1), 0, PatternId(2), 1).0, 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn lcp_matches_direct(
            ops in proptest::collection::vec((any::<bool>(), proptest::collection::vec(0u32..3, 1..10)), 1..30),
        ) {
            let mut x = NameSuffixIndex::new();
            let mut live: Vec<(PatternId, Vec<u32>)> = Vec::new();
            for (k, (ins, seq)) in ops.into_iter().enumerate() {
                if ins || live.is_empty() {
                    let id = PatternId(k as u64);
                    x.insert(id, &seq);
                    live.push((id, seq));
                } else {
                    let (id, _) = live.remove(seq.len() % live.len());
                    prop_assert!(x.remove(id));
                }
            }
            for (a, sa) in &live {
                for (b, sb) in &live {
                    for i in 0..sa.len() {
                        let j = 0;
                        let expected = sa[i..].iter().zip(&sb[j..]).take_while(|(p, q)| p == q).count();
                        prop_assert_eq!(x.lcp(*a, i, *b, j).0, expected);
                    }
                }
            }
        }
    }
}
