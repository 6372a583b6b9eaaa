use dict2d::bird_baker::BlockPlan;
use dict2d::testgen::{plant, random_pattern, random_text};
use dict2d::{naive_search, Dictionary2D, Engine, Matrix, PatternId, PatternMatrix};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone)]
enum Op {
    Insert {
        h: usize,
        periodic: bool,
        seed: u64,
    },
    Remove(usize),
    Search {
        h: usize,
        w: usize,
        plants: usize,
        seed: u64,
    },
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        3 => (1usize..=7, any::<bool>(), any::<u64>())
            .prop_map(|(h, periodic, seed)| Op::Insert { h, periodic, seed }),
        1 => any::<usize>().prop_map(Op::Remove),
        3 => (1usize..=40, 1usize..=40, 0usize..6, any::<u64>())
            .prop_map(|(h, w, plants, seed)| Op::Search { h, w, plants, seed }),
    ]
}

fn matrix(max_h: usize, max_w: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_h, 1..=max_w).prop_flat_map(|(h, w)| {
        proptest::collection::vec(b'a'..=b'c', h * w)
            .prop_map(move |cells| Matrix::from_cells(h, w, cells).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engines_agree_under_updates(
        m in prop_oneof![Just(4usize), Just(8), Just(12), Just(16)],
        sigma in 2u8..=3,
        ops in proptest::collection::vec(op(), 1..25),
    ) {
        let mut d = Dictionary2D::new();
        let mut live: Vec<PatternId> = Vec::new();
        for op in ops {
            match op {
                Op::Insert { h, periodic, seed } => {
                    let mut rng = StdRng::seed_from_u64(seed);
                    let p = random_pattern(&mut rng, sigma, h, m, if periodic { 1.0 } else { 0.0 });
                    live.push(d.insert_pattern(p).unwrap());
                }
                Op::Remove(k) if !live.is_empty() => {
                    let id = live.remove(k % live.len());
                    d.remove_pattern(id).unwrap();
                }
                Op::Remove(_) => {}
                Op::Search { h, w, plants, seed } => {
                    let mut rng = StdRng::seed_from_u64(seed);
                    let mut text = random_text(&mut rng, sigma, h, w, 0.5, (m / 4).max(1));
                    let pats: Vec<PatternMatrix> = d.patterns().collect();
                    let refs: Vec<&Matrix> = pats.iter().map(|p| &p.matrix).collect();
                    plant(&mut rng, &mut text, &refs, plants);
                    let expected = naive_search(&pats, &text);
                    for e in Engine::ALL {
                        prop_assert_eq!(&d.search_with(&text, e), &expected, "engine {}", e);
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_ignores_insertion_order(
        pats in proptest::collection::vec(matrix(3, 3), 1..6),
        text in matrix(8, 8),
        seed in any::<u64>(),
    ) {
        let dict: Vec<PatternMatrix> = pats
            .into_iter()
            .enumerate()
            .map(|(k, m)| PatternMatrix::new(PatternId(k as u64 + 1), m))
            .collect();
        let mut shuffled = dict.clone();
        let mut rng = StdRng::seed_from_u64(seed);
        for k in (1..shuffled.len()).rev() {
            shuffled.swap(k, rng.gen_range(0..=k));
        }
        prop_assert_eq!(naive_search(&dict, &text), naive_search(&shuffled, &text));
    }

    #[test]
    fn file_round_trip(m in matrix(10, 10)) {
        let bytes = m.to_file_bytes();
        let back = Matrix::parse(&bytes).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_file_bytes(), bytes);
    }

    /// Every in-range occurrence fits in at least one block and is owned by
    /// exactly one.
    #[test]
    fn blocks_cover_and_own_once(
        m_prime in 1usize..12,
        m_bar in 1usize..12,
        n1 in 1usize..40,
        n2 in 1usize..40,
        h_frac in 0.0f64..1.0,
    ) {
        let h = 1 + ((m_prime - 1) as f64 * h_frac) as usize;
        prop_assume!(h <= n1 && m_bar <= n2);
        let plan = BlockPlan::new(m_prime, m_bar);
        let blocks: Vec<(usize, usize)> = plan.blocks(n1, n2, h, m_bar).collect();
        for r in 0..=n1 - h {
            for c in 0..=n2 - m_bar {
                let mut containing = 0;
                let mut owners = 0;
                for &(t, l) in &blocks {
                    let fits = r >= t && c >= l
                        && r + h <= (t + plan.block_h).min(n1)
                        && c + m_bar <= (l + plan.block_w).min(n2);
                    if fits {
                        containing += 1;
                        if plan.owns(r - t, c - l) {
                            owners += 1;
                        }
                    }
                }
                prop_assert!(containing >= 1);
                prop_assert_eq!(owners, 1, "({}, {})", r, c);
            }
        }
    }
}

#[test]
fn ids_are_monotone_and_duplicates_both_report() {
    let mut d = Dictionary2D::new();
    let p = Matrix::from_rows(&["ab", "ba"]).unwrap();
    let a = d.insert_pattern(p.clone()).unwrap();
    let b = d.insert_pattern(p.clone()).unwrap();
    d.remove_pattern(a).unwrap();
    let c = d.insert_pattern(p.clone()).unwrap();
    assert!(a < b && b < c);
    assert!(d.remove_pattern(a).is_err());
    let text = Matrix::from_rows(&["abab", "baba"]).unwrap();
    for e in Engine::ALL {
        let occ = d.search_with(&text, e);
        let ids: Vec<_> = occ.iter().map(|o| (o.col, o.pattern)).collect();
        assert_eq!(ids, [(1, b), (1, c), (3, b), (3, c)], "{e}");
    }
}

#[test]
fn counters_are_monotone_until_reset() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut d = Dictionary2D::new();
    for k in 0..3 {
        let periodic = if k == 0 { 1.0 } else { 0.0 };
        d.insert_pattern(random_pattern(&mut rng, 2, 3, 8, periodic))
            .unwrap();
    }
    let text = random_text(&mut rng, 2, 30, 30, 0.5, 2);
    let mut last = d.counters();
    for e in Engine::ALL {
        d.search_with(&text, e);
        let now = d.counters();
        assert!(
            now.tau >= last.tau && now.comparisons > last.comparisons,
            "{e}"
        );
        assert!(now.update_work >= last.update_work);
        last = now;
    }
    d.reset_counters();
    let z = d.counters();
    assert_eq!(
        (z.tau, z.comparisons, z.update_work, z.peak_workspace),
        (0, 0, 0, 0)
    );
}

#[test]
fn removing_last_pattern_frees_the_width() {
    let mut d = Dictionary2D::new();
    let id = d
        .insert_pattern(Matrix::from_rows(&["abc"]).unwrap())
        .unwrap();
    assert!(d
        .insert_pattern(Matrix::from_rows(&["ab"]).unwrap())
        .is_err());
    d.remove_pattern(id).unwrap();
    assert_eq!(d.stats().m_bar, 0);
    d.insert_pattern(Matrix::from_rows(&["ab"]).unwrap())
        .unwrap();
    let text = Matrix::from_rows(&["a"]).unwrap();
    for e in Engine::ALL {
        assert!(d.search_with(&text, e).is_empty());
    }
}
