//! Dynamic self-index over the multiset of pattern rows.
//!
//! Rows all have the dictionary width `m̄`. Equal rows share a
//! reference-counted [`RowName`]. Text lines are named position by position
//! in a single left-to-right pass over a generalized suffix automaton: the
//! matched length grows by one per character and shrinks along suffix links
//! on a mismatch (matching statistics). A window of `m̄` characters is a
//! row exactly when the matched length reaches `m̄`.
//!
//! Removed rows are tombstoned and purged by a full rebuild once dead rows
//! outnumber half the live rows. Every query adds its cost to the index's
//! `tau` counter.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Name of a distinct dictionary row. Never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowName(pub u32);

/// The suffix structure behind a [`RowIndex`].
pub trait RowBackend: Default {
    /// Indexes a full row and tags its leaf with `name`. Returns the number
    /// of construction steps.
    fn insert(&mut self, row: &[u8], name: RowName) -> u64;

    /// Drops everything.
    fn clear(&mut self);

    /// For each end position `k` of `line`, writes the tag of the indexed
    /// row equal to the `width` characters ending at `k`, if any. Returns
    /// the number of character inspections.
    fn name_positions(&self, line: &[u8], width: usize, out: &mut Vec<Option<RowName>>) -> u64;

    /// Tag of the row equal to `row`, if indexed.
    fn find(&self, row: &[u8]) -> (Option<RowName>, u64);
}

const NO_LINK: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct SamState {
    len: u32,
    link: u32,
    next: Vec<(u8, u32)>,
    row: Option<RowName>,
}

impl SamState {
    fn get(&self, c: u8) -> Option<u32> {
        self.next
            .binary_search_by_key(&c, |&(l, _)| l)
            .ok()
            .map(|i| self.next[i].1)
    }

    fn set(&mut self, c: u8, t: u32) {
        match self.next.binary_search_by_key(&c, |&(l, _)| l) {
            Ok(i) => self.next[i].1 = t,
            Err(i) => self.next.insert(i, (c, t)),
        }
    }
}

/// Generalized suffix automaton over the indexed rows.
#[derive(Debug, Clone)]
pub struct SuffixAutomaton {
    states: Vec<SamState>,
}

impl Default for SuffixAutomaton {
    fn default() -> Self {
        SuffixAutomaton {
            states: vec![Self::root()],
        }
    }
}

impl SuffixAutomaton {
    fn root() -> SamState {
        SamState {
            len: 0,
            link: NO_LINK,
            next: Vec::new(),
            row: None,
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    fn clone_state(&mut self, q: u32, len: u32) -> u32 {
        let src = &self.states[q as usize];
        let clone = SamState {
            len,
            link: src.link,
            next: src.next.clone(),
            row: None,
        };
        self.states.push(clone);
        (self.states.len() - 1) as u32
    }

    fn extend(&mut self, last: u32, c: u8, work: &mut u64) -> u32 {
        *work += 1;
        if let Some(q) = self.states[last as usize].get(c) {
            if self.states[last as usize].len + 1 == self.states[q as usize].len {
                return q;
            }
            let clone = self.clone_state(q, self.states[last as usize].len + 1);
            let mut p = last;
            while p != NO_LINK && self.states[p as usize].get(c) == Some(q) {
                *work += 1;
                self.states[p as usize].set(c, clone);
                p = self.states[p as usize].link;
            }
            self.states[q as usize].link = clone;
            return clone;
        }
        let cur = self.states.len() as u32;
        self.states.push(SamState {
            len: self.states[last as usize].len + 1,
            link: 0,
            next: Vec::new(),
            row: None,
        });
        let mut p = last;
        while p != NO_LINK && self.states[p as usize].get(c).is_none() {
            *work += 1;
            self.states[p as usize].set(c, cur);
            p = self.states[p as usize].link;
        }
        if p == NO_LINK {
            return cur;
        }
        let q = self.states[p as usize].get(c).unwrap();
        if self.states[p as usize].len + 1 == self.states[q as usize].len {
            self.states[cur as usize].link = q;
            return cur;
        }
        let clone = self.clone_state(q, self.states[p as usize].len + 1);
        while p != NO_LINK && self.states[p as usize].get(c) == Some(q) {
            *work += 1;
            self.states[p as usize].set(c, clone);
            p = self.states[p as usize].link;
        }
        self.states[q as usize].link = clone;
        self.states[cur as usize].link = clone;
        cur
    }
}

impl RowBackend for SuffixAutomaton {
    fn insert(&mut self, row: &[u8], name: RowName) -> u64 {
        let mut work = 0;
        let mut last = 0u32;
        for &c in row {
            last = self.extend(last, c, &mut work);
        }
        self.states[last as usize].row = Some(name);
        work
    }

    fn clear(&mut self) {
        self.states.clear();
        self.states.push(Self::root());
    }

    fn name_positions(&self, line: &[u8], width: usize, out: &mut Vec<Option<RowName>>) -> u64 {
        out.clear();
        let mut inspections = 0u64;
        let mut state = 0u32;
        let mut matched = 0usize;
        for &c in line {
            loop {
                inspections += 1;
                if let Some(t) = self.states[state as usize].get(c) {
                    state = t;
                    matched += 1;
                    break;
                }
                if state == 0 {
                    matched = 0;
                    break;
                }
                state = self.states[state as usize].link;
                matched = self.states[state as usize].len as usize;
            }
            out.push(if matched == width {
                self.states[state as usize].row
            } else {
                None
            });
        }
        inspections
    }

    fn find(&self, row: &[u8]) -> (Option<RowName>, u64) {
        let mut state = 0u32;
        let mut steps = 0;
        for &c in row {
            steps += 1;
            match self.states[state as usize].get(c) {
                Some(t) => state = t,
                None => return (None, steps),
            }
        }
        let s = &self.states[state as usize];
        (
            (s.len as usize == row.len()).then_some(s.row).flatten(),
            steps,
        )
    }
}

#[derive(Debug, Clone)]
struct RowEntry {
    bytes: Box<[u8]>,
    count: usize,
}

/// Reference-counted row dictionary with text naming, character access and
/// LCP queries.
#[derive(Debug, Default)]
pub struct RowIndex<B: RowBackend = SuffixAutomaton> {
    backend: B,
    width: usize,
    by_content: HashMap<Box<[u8]>, RowName>,
    /// Indexed by name; `None` once purged.
    rows: Vec<Option<RowEntry>>,
    live_rows: usize,
    dead_rows: usize,
    epoch: u64,
    update_work: u64,
    tau: AtomicU64,
}

impl<B: RowBackend> RowIndex<B> {
    pub fn new() -> Self {
        RowIndex {
            backend: B::default(),
            width: 0,
            by_content: HashMap::new(),
            rows: Vec::new(),
            live_rows: 0,
            dead_rows: 0,
            epoch: 0,
            update_work: 0,
            tau: AtomicU64::new(0),
        }
    }

    /// Row width, 0 while empty.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Distinct live rows.
    pub fn live_rows(&self) -> usize {
        self.live_rows
    }

    /// Tombstoned rows still held by the backend.
    pub fn dead_rows(&self) -> usize {
        self.dead_rows
    }

    /// Number of rebuilds so far.
    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn tau(&self) -> u64 {
        self.tau.load(Ordering::Relaxed)
    }

    pub fn reset_tau(&self) {
        self.tau.store(0, Ordering::Relaxed);
    }

    pub fn update_work(&self) -> u64 {
        self.update_work
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    fn charge(&self, n: u64) {
        self.tau.fetch_add(n, Ordering::Relaxed);
    }

    /// Names `row`, indexing it if it is new.
    pub fn insert_row(&mut self, row: &[u8]) -> Result<RowName> {
        if self.width == 0 {
            if row.is_empty() {
                return Err(Error::ZeroDimension);
            }
            self.width = row.len();
        }
        if row.len() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: row.len(),
            });
        }
        if let Some(&name) = self.by_content.get(row) {
            let entry = self.rows[name.0 as usize]
                .as_mut()
                .expect("mapped row purged");
            if entry.count == 0 {
                self.dead_rows -= 1;
                self.live_rows += 1;
            }
            entry.count += 1;
            self.update_work += row.len() as u64;
            return Ok(name);
        }
        let name = RowName(self.rows.len() as u32);
        self.update_work += self.backend.insert(row, name);
        self.rows.push(Some(RowEntry {
            bytes: row.into(),
            count: 1,
        }));
        self.by_content.insert(row.into(), name);
        self.live_rows += 1;
        Ok(name)
    }

    fn entry(&self, name: RowName) -> Result<&RowEntry> {
        self.rows
            .get(name.0 as usize)
            .and_then(Option::as_ref)
            .filter(|e| e.count > 0)
            .ok_or(Error::DeadName(name.0))
    }

    pub fn is_live(&self, name: RowName) -> bool {
        self.entry(name).is_ok()
    }

    pub fn count(&self, name: RowName) -> Result<usize> {
        Ok(self.entry(name)?.count)
    }

    /// Drops one reference to `name`.
    pub fn remove_row(&mut self, name: RowName) -> Result<()> {
        self.entry(name)?;
        let entry = self.rows[name.0 as usize].as_mut().unwrap();
        entry.count -= 1;
        self.update_work += 1;
        if entry.count > 0 {
            return Ok(());
        }
        self.live_rows -= 1;
        self.dead_rows += 1;
        if self.live_rows == 0 || self.dead_rows * 2 > self.live_rows {
            self.rebuild();
        }
        Ok(())
    }

    /// Rebuilds the backend from live rows only; dead names are retired.
    pub fn rebuild(&mut self) {
        self.epoch += 1;
        self.backend.clear();
        self.dead_rows = 0;
        for (i, slot) in self.rows.iter_mut().enumerate() {
            let Some(entry) = slot else { continue };
            if entry.count == 0 {
                self.by_content.remove(&entry.bytes);
                *slot = None;
            } else {
                self.update_work += self.backend.insert(&entry.bytes, RowName(i as u32));
            }
        }
        if self.live_rows == 0 {
            self.width = 0;
        }
    }

    /// Name of an identical live row, without modifying the index.
    pub fn lookup(&self, row: &[u8]) -> Option<RowName> {
        if row.len() != self.width {
            return None;
        }
        let (name, steps) = self.backend.find(row);
        self.charge(steps);
        name.filter(|&n| self.is_live(n))
    }

    /// The `i`-th byte (1-based) of a live row.
    pub fn access_char(&self, name: RowName, i: usize) -> Result<u8> {
        let entry = self.entry(name)?;
        if i == 0 || i > entry.bytes.len() {
            return Err(Error::OutOfRange {
                index: i,
                len: entry.bytes.len(),
            });
        }
        self.charge(1);
        Ok(entry.bytes[i - 1])
    }

    /// Longest common prefix of row `a` from offset `i` and row `b` from
    /// offset `j` (offsets 1-based).
    pub fn lcp_rows(&self, a: RowName, i: usize, b: RowName, j: usize) -> Result<usize> {
        let ra = &self.entry(a)?.bytes;
        let rb = &self.entry(b)?.bytes;
        for (off, len) in [(i, ra.len()), (j, rb.len())] {
            if off == 0 || off > len {
                return Err(Error::OutOfRange { index: off, len });
            }
        }
        let (sa, sb) = (&ra[i - 1..], &rb[j - 1..]);
        let n = sa.len().min(sb.len());
        let mut k = 0;
        let mut words = 1u64;
        while k + 8 <= n {
            let wa = u64::from_le_bytes(sa[k..k + 8].try_into().unwrap());
            let wb = u64::from_le_bytes(sb[k..k + 8].try_into().unwrap());
            words += 1;
            if wa != wb {
                k += ((wa ^ wb).trailing_zeros() / 8) as usize;
                self.charge(words);
                return Ok(k);
            }
            k += 8;
        }
        while k < n && sa[k] == sb[k] {
            k += 1;
        }
        self.charge(words + (n % 8) as u64);
        Ok(k)
    }

    /// Per-position row names for `line`: entry `k` (0-based) names the
    /// live row equal to the `m̄` bytes ending at `k`.
    pub fn name_text_positions(&self, line: &[u8]) -> Vec<Option<RowName>> {
        let mut out = Vec::with_capacity(line.len());
        self.name_text_positions_into(line, &mut out);
        out
    }

    /// As [`name_text_positions`](Self::name_text_positions), writing into a
    /// reusable buffer. Returns the character inspection count.
    pub fn name_text_positions_into(&self, line: &[u8], out: &mut Vec<Option<RowName>>) -> u64 {
        if self.width == 0 || line.len() < self.width {
            out.clear();
            out.resize(line.len(), None);
            return 0;
        }
        let inspections = self.backend.name_positions(line, self.width, out);
        if self.dead_rows > 0 {
            for slot in out.iter_mut() {
                if let Some(n) = *slot {
                    if !self.is_live(n) {
                        *slot = None;
                    }
                }
            }
        }
        self.charge(inspections);
        inspections
    }
}
