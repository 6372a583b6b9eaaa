//! Dynamic one-dimensional multi-pattern matching over `u32` symbols.
//!
//! Patterns live in a logarithmic sequence of immutable Aho-Corasick
//! automata: tier `k` holds at most `2^k` patterns. Inserting a pattern
//! merges equal-capacity tiers like a binary counter increment, so each
//! pattern is rebuilt `O(log n)` times over its life. Removal tombstones the
//! pattern; once tombstones outnumber live patterns everything is rebuilt
//! without them.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

pub type Symbol = u32;

/// Identifier of a pattern inside one [`DynMatcher`]. Never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatcherId(pub u32);

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Automaton {
    /// Sparse transitions, sorted by symbol.
    goto: Vec<Vec<(Symbol, u32)>>,
    fail: Vec<u32>,
    /// Patterns ending exactly at a state.
    out: Vec<Vec<MatcherId>>,
    /// Nearest proper suffix state with a non-empty `out`.
    out_link: Vec<u32>,
    patterns: Vec<(MatcherId, Box<[Symbol]>)>,
}

impl Automaton {
    /// Builds the trie plus failure and output links. Returns the automaton
    /// and the number of construction steps.
    fn build(patterns: Vec<(MatcherId, Box<[Symbol]>)>) -> (Self, u64) {
        let mut work = 0u64;
        let mut goto: Vec<Vec<(Symbol, u32)>> = vec![Vec::new()];
        let mut out: Vec<Vec<MatcherId>> = vec![Vec::new()];
        for (id, seq) in &patterns {
            let mut s = 0usize;
            for &c in seq.iter() {
                work += 1;
                s = match goto[s].binary_search_by_key(&c, |&(l, _)| l) {
                    Ok(i) => goto[s][i].1 as usize,
                    Err(i) => {
                        let n = goto.len();
                        goto[s].insert(i, (c, n as u32));
                        goto.push(Vec::new());
                        out.push(Vec::new());
                        n
                    }
                };
            }
            out[s].push(*id);
        }

        let n = goto.len();
        let mut fail = vec![0u32; n];
        let mut out_link = vec![NONE; n];
        let mut queue = VecDeque::new();
        for &(_, t) in &goto[0] {
            queue.push_back(t);
        }
        while let Some(s) = queue.pop_front() {
            let s = s as usize;
            for i in 0..goto[s].len() {
                let (c, t) = goto[s][i];
                let mut f = fail[s] as usize;
                let target = loop {
                    work += 1;
                    if let Ok(j) = goto[f].binary_search_by_key(&c, |&(l, _)| l) {
                        break goto[f][j].1;
                    }
                    if f == 0 {
                        break 0;
                    }
                    f = fail[f] as usize;
                };
                // the root's own children fail to the root
                let target = if target == t { 0 } else { target };
                fail[t as usize] = target;
                out_link[t as usize] = if out[target as usize].is_empty() {
                    out_link[target as usize]
                } else {
                    target
                };
                queue.push_back(t);
            }
        }
        (
            Automaton {
                goto,
                fail,
                out,
                out_link,
                patterns,
            },
            work,
        )
    }

    #[inline]
    fn step(&self, mut s: u32, c: Symbol, inspections: &mut u64) -> u32 {
        loop {
            *inspections += 1;
            let edges = &self.goto[s as usize];
            if let Ok(i) = edges.binary_search_by_key(&c, |&(l, _)| l) {
                return edges[i].1;
            }
            if s == 0 {
                return 0;
            }
            s = self.fail[s as usize];
        }
    }
}

/// A dynamic dictionary of symbol sequences.
#[derive(Debug, Clone, Default)]
pub struct DynMatcher {
    tiers: Vec<Option<Automaton>>,
    level_of: HashMap<MatcherId, usize>,
    dead: HashSet<MatcherId>,
    live: usize,
    next_id: u32,
    work: u64,
}

impl DynMatcher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn dead_count(&self) -> usize {
        self.dead.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Number of non-empty tiers.
    pub fn tier_count(&self) -> usize {
        self.tiers.iter().filter(|t| t.is_some()).count()
    }

    /// Cumulative construction work over the matcher's lifetime.
    pub fn update_work(&self) -> u64 {
        self.work
    }

    pub fn contains(&self, id: MatcherId) -> bool {
        self.level_of.contains_key(&id) && !self.dead.contains(&id)
    }

    /// Adds a non-empty pattern and returns its id.
    pub fn insert(&mut self, seq: &[Symbol]) -> MatcherId {
        assert!(!seq.is_empty(), "empty pattern");
        let id = MatcherId(self.next_id);
        self.next_id += 1;
        let mut carry: Vec<(MatcherId, Box<[Symbol]>)> = vec![(id, seq.into())];
        let mut level = 0;
        while let Some(slot) = self.tiers.get_mut(level) {
            let Some(tier) = slot.take() else { break };
            for (pid, pseq) in tier.patterns {
                if self.dead.remove(&pid) {
                    self.level_of.remove(&pid);
                } else {
                    carry.push((pid, pseq));
                }
            }
            level += 1;
        }
        self.place(level, carry);
        self.live += 1;
        id
    }

    fn place(&mut self, level: usize, patterns: Vec<(MatcherId, Box<[Symbol]>)>) {
        if self.tiers.len() <= level {
            self.tiers.resize_with(level + 1, || None);
        }
        for (pid, _) in &patterns {
            self.level_of.insert(*pid, level);
        }
        let (automaton, work) = Automaton::build(patterns);
        self.work += work;
        self.tiers[level] = Some(automaton);
    }

    /// Removes a live pattern.
    pub fn remove(&mut self, id: MatcherId) -> Result<()> {
        if !self.contains(id) {
            return Err(Error::UnknownPattern(id.0 as u64));
        }
        self.dead.insert(id);
        self.live -= 1;
        if self.dead.len() > self.live {
            self.rebuild();
        }
        Ok(())
    }

    /// Rebuilds every tier without tombstoned patterns.
    pub fn rebuild(&mut self) {
        let mut all = Vec::with_capacity(self.live);
        for tier in self.tiers.drain(..).flatten() {
            for (pid, pseq) in tier.patterns {
                if !self.dead.contains(&pid) {
                    all.push((pid, pseq));
                }
            }
        }
        self.dead.clear();
        self.level_of.clear();
        if all.is_empty() {
            return;
        }
        let level = all.len().next_power_of_two().trailing_zeros() as usize;
        self.place(level, all);
    }

    /// Reports every `(end, id)` with the live pattern `id` ending at
    /// 1-based position `end`, in nondecreasing `end`. Returns the number of
    /// transition inspections.
    pub fn scan<I, F>(&self, text: I, mut emit: F) -> u64
    where
        I: IntoIterator<Item = Symbol>,
        F: FnMut(usize, MatcherId),
    {
        let mut inspections = 0u64;
        // at most ~32 tiers
        let mut states = [0u32; 40];
        let tiers: Vec<&Automaton> = self.tiers.iter().flatten().collect();
        if tiers.is_empty() {
            return 0;
        }
        for (pos, c) in text.into_iter().enumerate() {
            for (k, a) in tiers.iter().enumerate() {
                let s = a.step(states[k], c, &mut inspections);
                states[k] = s;
                let mut o = if a.out[s as usize].is_empty() {
                    a.out_link[s as usize]
                } else {
                    s
                };
                while o != NONE {
                    for &pid in &a.out[o as usize] {
                        if !self.dead.contains(&pid) {
                            emit(pos + 1, pid);
                        }
                    }
                    o = a.out_link[o as usize];
                }
            }
        }
        inspections
    }
}

/// Widens bytes to symbols.
pub fn bytes_as_symbols(b: &[u8]) -> Vec<Symbol> {
    b.iter().map(|&x| x as Symbol).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scan_all(m: &DynMatcher, text: &[Symbol]) -> Vec<(usize, MatcherId)> {
        let mut v = Vec::new();
        m.scan(text.iter().copied(), |e, id| v.push((e, id)));
        v
    }

    fn naive(pats: &[(MatcherId, Vec<Symbol>)], text: &[Symbol]) -> Vec<(usize, MatcherId)> {
        let mut v = Vec::new();
        for (id, p) in pats {
            if p.len() > text.len() {
                continue;
            }
            for s in 0..=text.len() - p.len() {
                if &text[s..s + p.len()] == p.as_slice() {
                    v.push((s + p.len(), *id));
                }
            }
        }
        v.sort();
        v
    }

    fn sym(s: &str) -> Vec<Symbol> {
        bytes_as_symbols(s.as_bytes())
    }

    #[test]
    fn basic_examples() {
        let mut m = DynMatcher::new();
        let ab = m.insert(&sym("ab"));
        assert_eq!(scan_all(&m, &sym("ab")), vec![(2, ab)]);

        let bc = m.insert(&sym("bc"));
        assert_eq!(scan_all(&m, &sym("abc")), vec![(2, ab), (3, bc)]);
        m.remove(ab).unwrap();
        assert_eq!(scan_all(&m, &sym("abc")), vec![(3, bc)]);
        let ab2 = m.insert(&sym("ab"));
        assert_ne!(ab, ab2);
        assert_eq!(scan_all(&m, &sym("abc")), vec![(2, ab2), (3, bc)]);
        assert!(m.remove(ab).is_err());
    }

    #[test]
    fn single_symbol_and_overlaps() {
        let mut m = DynMatcher::new();
        let a = m.insert(&sym("a"));
        assert_eq!(scan_all(&m, &sym("aaa")), vec![(1, a), (2, a), (3, a)]);
        let mut m = DynMatcher::new();
        let aa = m.insert(&sym("aa"));
        assert_eq!(scan_all(&m, &sym("aaaa")), vec![(2, aa), (3, aa), (4, aa)]);
        assert!(scan_all(&DynMatcher::new(), &sym("abc")).is_empty());
    }

    #[test]
    fn suffix_patterns_reported() {
        let mut m = DynMatcher::new();
        let long = m.insert(&sym("abcd"));
        let mid = m.insert(&sym("bcd"));
        let short = m.insert(&sym("d"));
        let mut got = scan_all(&m, &sym("xabcd"));
        got.sort();
        assert_eq!(got, vec![(5, long), (5, mid), (5, short)]);
    }

    #[test]
    fn five_patterns_any_order() {
        let words = ["he", "she", "his", "hers", "e"];
        let text = sym("ushershishe");
        let mut outputs = Vec::new();
        for rot in 0..words.len() {
            let mut m = DynMatcher::new();
            let mut by_word = Vec::new();
            for k in 0..words.len() {
                let w = words[(k + rot) % words.len()];
                by_word.push((m.insert(&sym(w)), w));
            }
            let mut got: Vec<(usize, &str)> = scan_all(&m, &text)
                .into_iter()
                .map(|(e, id)| (e, by_word.iter().find(|(i, _)| *i == id).unwrap().1))
                .collect();
            got.sort();
            outputs.push(got);
        }
        assert!(outputs.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(outputs[0].len(), 8);
    }

    #[test]
    fn tiers_stay_logarithmic() {
        let mut m = DynMatcher::new();
        for i in 0..100u32 {
            m.insert(&[i, i + 1]);
        }
        assert!(m.tier_count() <= 7);
        assert_eq!(m.live_count(), 100);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_naive_under_updates(
            ops in proptest::collection::vec((0u8..3, proptest::collection::vec(0u32..2, 1..5)), 1..100),
            text in proptest::collection::vec(0u32..2, 0..60),
        ) {
            let mut m = DynMatcher::new();
            let mut live: Vec<(MatcherId, Vec<Symbol>)> = Vec::new();
            for (op, seq) in ops {
                if op == 0 && !live.is_empty() {
                    let (id, _) = live.remove(seq.len() % live.len());
                    m.remove(id).unwrap();
                } else {
                    live.push((m.insert(&seq), seq));
                }
                prop_assert!(m.dead_count() <= m.live_count());
            }
            let mut got = scan_all(&m, &text);
            let ends: Vec<usize> = got.iter().map(|x| x.0).collect();
            prop_assert!(ends.windows(2).all(|w| w[0] <= w[1]));
            got.sort();
            prop_assert_eq!(&got, &naive(&live, &text));
            m.rebuild();
            let mut again = scan_all(&m, &text);
            again.sort();
            prop_assert_eq!(got, again);
        }

        #[test]
        fn wide_alphabet(
            pats in proptest::collection::vec(proptest::collection::vec(0u32..65536, 1..4), 1..10),
            text_idx in proptest::collection::vec(0usize..10, 0..40),
        ) {
            let mut m = DynMatcher::new();
            let live: Vec<(MatcherId, Vec<Symbol>)> = pats.iter().map(|p| (m.insert(p), p.clone())).collect();
            // build text out of pattern pieces so matches occur
            let text: Vec<Symbol> = text_idx.iter().flat_map(|&i| pats[i % pats.len()].clone()).collect();
            let mut got = scan_all(&m, &text);
            got.sort();
            prop_assert_eq!(got, naive(&live, &text));
        }
    }
}
