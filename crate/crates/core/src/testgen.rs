//! Seeded random patterns and texts for tests, benchmarks and the CLI.

use rand::Rng;

use crate::matrix::Matrix;
use crate::periodicity::group_threshold;

/// Letters `a..` of an alphabet of size `sigma` (at most 26).
fn letter<R: Rng + ?Sized>(rng: &mut R, sigma: u8) -> u8 {
    b'a' + rng.gen_range(0..sigma.clamp(1, 26))
}

pub fn random_row<R: Rng + ?Sized>(rng: &mut R, sigma: u8, width: usize) -> Vec<u8> {
    (0..width).map(|_| letter(rng, sigma)).collect()
}

/// A row of period at most `max_period` (at least 1), starting at a random
/// phase.
pub fn periodic_row<R: Rng + ?Sized>(
    rng: &mut R,
    sigma: u8,
    width: usize,
    max_period: usize,
) -> Vec<u8> {
    let p = rng.gen_range(1..=max_period.max(1));
    let base = random_row(rng, sigma, p);
    let shift = rng.gen_range(0..p);
    (0..width).map(|k| base[(k + shift) % p]).collect()
}

/// A random pattern. With probability `periodic` every row has period at
/// most `floor(width/4)` (when that is positive), otherwise rows are
/// uniformly random.
pub fn random_pattern<R: Rng + ?Sized>(
    rng: &mut R,
    sigma: u8,
    height: usize,
    width: usize,
    periodic: f64,
) -> Matrix {
    let threshold = group_threshold(width);
    let all_periodic = threshold > 0 && rng.gen_bool(periodic);
    let rows: Vec<Vec<u8>> = (0..height)
        .map(|_| {
            if all_periodic {
                periodic_row(rng, sigma, width, threshold)
            } else {
                random_row(rng, sigma, width)
            }
        })
        .collect();
    Matrix::from_rows(&rows).expect("non-empty pattern")
}

/// A random text whose rows are periodic with probability `periodic`.
pub fn random_text<R: Rng + ?Sized>(
    rng: &mut R,
    sigma: u8,
    height: usize,
    width: usize,
    periodic: f64,
    max_period: usize,
) -> Matrix {
    let rows: Vec<Vec<u8>> = (0..height)
        .map(|_| {
            if rng.gen_bool(periodic) {
                periodic_row(rng, sigma, width, max_period)
            } else {
                random_row(rng, sigma, width)
            }
        })
        .collect();
    Matrix::from_rows(&rows).expect("non-empty text")
}

/// Pastes `count` copies of patterns drawn from `patterns` at random
/// positions where they fit.
pub fn plant<R: Rng + ?Sized>(rng: &mut R, text: &mut Matrix, patterns: &[&Matrix], count: usize) {
    if patterns.is_empty() {
        return;
    }
    for _ in 0..count {
        let p = patterns[rng.gen_range(0..patterns.len())];
        if p.height() > text.height() || p.width() > text.width() {
            continue;
        }
        let r = rng.gen_range(0..=text.height() - p.height());
        let c = rng.gen_range(0..=text.width() - p.width());
        text.paste(p, r, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodicity::{classify_pattern, compute_period, Group};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn periodic_rows_respect_the_bound() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let r = periodic_row(&mut rng, 3, 16, 4);
            assert!(compute_period(&r) <= 4);
        }
    }

    #[test]
    fn periodic_patterns_are_group_one() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..100 {
            let p = random_pattern(&mut rng, 2, 5, 12, 1.0);
            assert_eq!(classify_pattern(&p), Group::One);
        }
    }

    #[test]
    fn same_seed_same_output() {
        let a = random_text(&mut StdRng::seed_from_u64(3), 4, 6, 9, 0.5, 2);
        let b = random_text(&mut StdRng::seed_from_u64(3), 4, 6, 9, 0.5, 2);
        assert_eq!(a, b);
    }
}
