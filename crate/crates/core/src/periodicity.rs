//! Periods, Lyndon canonization of rows, pattern classification, LCM tables
//! and the canonical two-dimensional alignment signature.
//!
//! A row with period `p` is stored as the least rotation `u` of its first
//! `p` bytes plus `lwpos`, the 1-based column where `u` starts. Two rows with
//! conjugate periods canonize to the same byte string, so they share a class
//! name, and only their `lwpos` values differ.
//!
//! For a stack of such rows the signature records how the rows' periods
//! line up: over the columns `c` of one full horizontal period `L` (the LCM
//! of the row periods), the residue vector `((c - lwpos_i) mod p_i)_i` is
//! minimized lexicographically and the first minimizing column is `z`.
//! Shifting every row right by `δ` shifts `z` by `δ` modulo `L` and leaves
//! the residues unchanged, which is what the Group I verifier relies on.

use std::collections::HashMap;

use crate::matrix::Matrix;

/// Per-row periodicity record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RowMeta {
    /// Lyndon class name; 0 means unnamed.
    pub class_name: u32,
    pub period: usize,
    /// 1-based column where the least rotation of the period starts.
    pub lwpos: usize,
    /// 1-based first column of the maximal periodic extent.
    pub left: usize,
    /// 1-based last column of the maximal periodic extent.
    pub right: usize,
}

impl RowMeta {
    pub const NULL: RowMeta = RowMeta {
        class_name: 0,
        period: 0,
        lwpos: 0,
        left: 0,
        right: 0,
    };

    pub fn is_null(&self) -> bool {
        self.class_name == 0
    }
}

/// KMP failure function: `fail[i]` is the length of the longest proper
/// border of `s[..i]`.
pub fn failure_function<T: PartialEq>(s: &[T]) -> Vec<usize> {
    let mut fail = vec![0; s.len() + 1];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = fail[k];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i + 1] = k;
    }
    fail
}

/// [`compute_period`] reusing `buf` for the failure function.
pub(crate) fn period_with<T: PartialEq>(s: &[T], buf: &mut Vec<usize>) -> usize {
    buf.clear();
    buf.resize(s.len() + 1, 0);
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = buf[k];
        }
        if s[i] == s[k] {
            k += 1;
        }
        buf[i + 1] = k;
    }
    s.len() - buf[s.len()]
}

/// Smallest `p >= 1` with `s[k] == s[k + p]` wherever both exist.
pub fn compute_period<T: PartialEq>(s: &[T]) -> usize {
    assert!(!s.is_empty(), "period of an empty string");
    s.len() - failure_function(s)[s.len()]
}

/// 0-based start of the least rotation of `s` (the smallest such start when
/// several rotations tie). Linear time.
pub fn least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Period, Lyndon rotation and canonical form of one row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalRow {
    pub meta: RowMeta,
    /// Least rotation of the period.
    pub lyndon: Vec<u8>,
    /// `lyndon` repeated and truncated to the row width.
    pub canonical: Vec<u8>,
}

/// Computes a row's period, the least rotation of that period and its
/// canonical form.
pub fn canonize_row(s: &[u8]) -> CanonicalRow {
    let period = compute_period(s);
    let base = &s[..period];
    let k = least_rotation(base);
    let lyndon: Vec<u8> = base[k..].iter().chain(&base[..k]).copied().collect();
    let mut canonical = Vec::with_capacity(s.len());
    fill_repeated(&lyndon, s.len(), &mut canonical);
    CanonicalRow {
        meta: RowMeta {
            class_name: 0,
            period,
            lwpos: k + 1,
            left: 1,
            right: s.len(),
        },
        lyndon,
        canonical,
    }
}

pub(crate) fn fill_repeated(unit: &[u8], len: usize, out: &mut Vec<u8>) {
    out.clear();
    out.extend(unit.iter().copied().cycle().take(len));
}

/// The Group I threshold: rows with period at most `floor(m̄ / 4)` are
/// highly periodic.
pub fn group_threshold(width: usize) -> usize {
    width / 4
}

/// Which engine handles a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    /// Every row has period at most `floor(m̄ / 4)`.
    One,
    /// Some row has a larger period; `filter_row` is the 1-based index of
    /// the first such row.
    Two { filter_row: usize },
}

pub fn classify_pattern(p: &Matrix) -> Group {
    let threshold = group_threshold(p.width());
    for (i, row) in p.rows().enumerate() {
        if compute_period(row) > threshold {
            return Group::Two { filter_row: i + 1 };
        }
    }
    Group::One
}

/// An LCM value clamped at a cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CappedLcm {
    Finite(u64),
    Infinite,
}

impl CappedLcm {
    pub fn finite(self) -> Option<u64> {
        match self {
            CappedLcm::Finite(v) => Some(v),
            CappedLcm::Infinite => None,
        }
    }
}

/// Running LCM of row periods; `values[i]` covers rows `1..=i+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcmTable {
    pub values: Vec<CappedLcm>,
    pub cap: u64,
}

impl LcmTable {
    /// LCM over all rows.
    pub fn last(&self) -> CappedLcm {
        *self.values.last().expect("empty LCM table")
    }
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn build_lcm_table(periods: &[usize], cap: u64) -> LcmTable {
    let mut values = Vec::with_capacity(periods.len());
    let mut cur = CappedLcm::Finite(1);
    for &p in periods {
        assert!(p >= 1, "period must be positive");
        cur = match cur {
            CappedLcm::Finite(v) => {
                let l = v as u128 / gcd(v as u128, p as u128) * p as u128;
                if l > cap as u128 {
                    CappedLcm::Infinite
                } else {
                    CappedLcm::Finite(l as u64)
                }
            }
            CappedLcm::Infinite => CappedLcm::Infinite,
        };
        values.push(cur);
    }
    LcmTable { values, cap }
}

/// Canonical alignment of a stack of periodic rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalSignature {
    /// `(z - lwpos_i) mod p_i` per row.
    pub residues: Vec<u32>,
    /// Smallest 1-based column in `[1, L]` realizing `residues`.
    pub z: u128,
    /// `L`, the exact LCM of the row periods.
    pub modulus: u128,
}

impl CanonicalSignature {
    pub fn capped_l(&self, cap: u64) -> CappedLcm {
        if self.modulus > cap as u128 {
            CappedLcm::Infinite
        } else {
            CappedLcm::Finite(self.modulus as u64)
        }
    }
}

/// Incremental signature computation by progressive narrowing: the columns
/// still admissible form the progression `c ≡ a (mod M)`; each new row takes
/// the smallest residue compatible with it and the progression is refined
/// by CRT.
#[derive(Debug, Clone)]
pub struct SignatureBuilder {
    residues: Vec<u32>,
    a: u128,
    modulus: u128,
    overflow: bool,
}

impl SignatureBuilder {
    /// Preallocates room for `rows` residues.
    pub fn reserve(&mut self, rows: usize) {
        self.residues
            .reserve(rows.saturating_sub(self.residues.len()));
    }
}

impl Default for SignatureBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl SignatureBuilder {
    pub fn new() -> Self {
        SignatureBuilder {
            residues: Vec::new(),
            a: 0,
            modulus: 1,
            overflow: false,
        }
    }

    /// Clears the builder for reuse, keeping its allocation.
    pub fn reset(&mut self) {
        self.residues.clear();
        self.a = 0;
        self.modulus = 1;
        self.overflow = false;
    }

    pub fn push(&mut self, period: usize, lwpos: usize) {
        debug_assert!(period >= 1);
        if self.overflow {
            return;
        }
        let p = period as u128;
        let lw = lwpos as u128 % p;
        let g = gcd(self.modulus, p);
        // smallest residue r with lw + r ≡ a (mod g)
        let r = (self.a % g + g - lw % g) % g;
        self.residues.push(r as u32);
        let b = (lw + r) % p;
        let m_g = self.modulus / g;
        let p_g = p / g;
        let Some(new_mod) = self.modulus.checked_mul(p_g) else {
            self.overflow = true;
            return;
        };
        if p_g > 1 {
            // solve a + M t ≡ b (mod p): (M/g) t ≡ (b - a)/g (mod p/g)
            let diff = ((b + p - self.a % p) % p) / g;
            let inv = mod_inverse(m_g % p_g, p_g);
            let t = mul_mod(diff % p_g, inv, p_g);
            self.a = (self.a + self.modulus * t) % new_mod;
        }
        self.modulus = new_mod;
    }

    /// The finished signature, or `None` when the LCM overflowed 128 bits.
    pub fn finish(&self) -> Option<CanonicalSignature> {
        if self.overflow {
            return None;
        }
        let z = if self.a == 0 { self.modulus } else { self.a };
        Some(CanonicalSignature {
            residues: self.residues.clone(),
            z,
            modulus: self.modulus,
        })
    }

    /// `(z, L)` without cloning the residues.
    pub fn z_and_modulus(&self) -> Option<(u128, u128)> {
        if self.overflow {
            return None;
        }
        let z = if self.a == 0 { self.modulus } else { self.a };
        Some((z, self.modulus))
    }

    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    pub fn overflowed(&self) -> bool {
        self.overflow
    }
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if let Some(v) = a.checked_mul(b) {
        return v % m;
    }
    // double-and-add for very large moduli
    let (mut a, mut b, mut acc) = (a % m, b, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            acc = (acc + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    acc
}

pub(crate) fn mod_inverse(a: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "not invertible");
    old_s.rem_euclid(m as i128) as u128
}

/// Signature of the rows described by `metas` (`period` and `lwpos` used).
pub fn canonical_signature(metas: &[RowMeta]) -> Option<CanonicalSignature> {
    let mut b = SignatureBuilder::new();
    for m in metas {
        b.push(m.period, m.lwpos);
    }
    b.finish()
}

/// A named p_block: the class of its signature and the change in `z`
/// relative to the previous block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PBlockToken {
    pub block_class: u32,
    /// `None` on the first token.
    pub delta_z: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct BlockKey {
    rows: Vec<(u32, usize)>,
    residues: Vec<u32>,
}

/// Dictionary-wide names for p_block signatures. Names are never reused or
/// renumbered.
#[derive(Debug, Default)]
pub struct BlockNaming {
    names: HashMap<BlockKey, u32>,
}

impl BlockNaming {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn key(metas: &[RowMeta], residues: &[u32]) -> BlockKey {
        BlockKey {
            rows: metas.iter().map(|m| (m.class_name, m.period)).collect(),
            residues: residues.to_vec(),
        }
    }

    fn name_or_insert(&mut self, metas: &[RowMeta], residues: &[u32]) -> u32 {
        let next = self.names.len() as u32 + 1;
        *self.names.entry(Self::key(metas, residues)).or_insert(next)
    }

    /// Name of an existing class; 0 if unseen.
    pub fn lookup(&self, metas: &[RowMeta], residues: &[u32]) -> u32 {
        self.names
            .get(&Self::key(metas, residues))
            .copied()
            .unwrap_or(0)
    }
}

/// Splits `metas` into consecutive `pi`-row chunks (a trailing partial chunk
/// is left out) and names each chunk by its signature. New classes are
/// registered in `naming`.
///
/// Returns `None` if a chunk's LCM overflows.
pub fn tokenize_pblocks(
    metas: &[RowMeta],
    pi: usize,
    naming: &mut BlockNaming,
) -> Option<Vec<PBlockToken>> {
    assert!(pi >= 1 && metas.len() >= pi);
    let mut out = Vec::with_capacity(metas.len() / pi);
    let mut prev_z: Option<u128> = None;
    for chunk in metas.chunks_exact(pi) {
        let sig = canonical_signature(chunk)?;
        let block_class = naming.name_or_insert(chunk, &sig.residues);
        let delta_z = prev_z.map(|pz| (sig.z + sig.modulus - pz % sig.modulus) % sig.modulus);
        prev_z = Some(sig.z);
        out.push(PBlockToken {
            block_class,
            delta_z,
        });
    }
    Some(out)
}
