//! Brute-force reference implementations. Every engine is tested against
//! these.

use crate::matrix::{Matrix, Occurrence, PatternMatrix};

/// Every `(id, row, col)` where the pattern equals the text window at that
/// position, by direct cell comparison. Sorted by `(row, col, id)`.
pub fn naive_search<'a, I>(dict: I, text: &Matrix) -> Vec<Occurrence>
where
    I: IntoIterator<Item = &'a PatternMatrix>,
{
    let mut out = Vec::new();
    for p in dict {
        let pm = &p.matrix;
        if pm.height() > text.height() || pm.width() > text.width() {
            continue;
        }
        for r in 0..=text.height() - pm.height() {
            for c in 0..=text.width() - pm.width() {
                let hit =
                    (0..pm.height()).all(|i| &text.row(r + i)[c..c + pm.width()] == pm.row(i));
                if hit {
                    out.push(Occurrence::new(p.id, r + 1, c + 1));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// The lexicographically least rotation of `s` and the smallest 1-based
/// start index producing it, by enumerating all rotations.
pub fn naive_min_rotation(s: &[u8]) -> (Vec<u8>, usize) {
    assert!(!s.is_empty(), "rotation of an empty string");
    let rotation = |k: usize| -> Vec<u8> { s[k..].iter().chain(&s[..k]).copied().collect() };
    let mut best = rotation(0);
    let mut best_k = 0;
    for k in 1..s.len() {
        let r = rotation(k);
        if r < best {
            best = r;
            best_k = k;
        }
    }
    (best, best_k + 1)
}
