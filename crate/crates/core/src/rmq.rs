//! Sparse-table range minimum / maximum queries.

/// Tabulates the extremum of every `[i, i + 2^k)` range; a query combines
/// two overlapping power-of-two ranges in O(1).
#[derive(Debug, Clone)]
pub struct SparseTable {
    max: bool,
    n: usize,
    levels: Vec<Vec<usize>>,
}

impl SparseTable {
    pub fn min() -> Self {
        SparseTable {
            max: false,
            n: 0,
            levels: Vec::new(),
        }
    }

    pub fn max() -> Self {
        SparseTable {
            max: true,
            ..Self::min()
        }
    }

    #[inline]
    fn pick(&self, a: usize, b: usize) -> usize {
        if self.max {
            a.max(b)
        } else {
            a.min(b)
        }
    }

    /// Preallocates room for tables over up to `n` values.
    pub fn reserve(&mut self, n: usize) {
        let depth = (usize::BITS - n.leading_zeros()).max(1) as usize;
        self.levels
            .resize_with(depth.max(self.levels.len()), Vec::new);
        for (k, level) in self.levels.iter_mut().enumerate().take(depth) {
            let len = (n + 1).saturating_sub(1 << k);
            level.reserve(len.saturating_sub(level.len()));
        }
    }

    /// Rebuilds the table over `values`, reusing existing allocations.
    pub fn rebuild(&mut self, values: &[usize]) {
        self.n = values.len();
        let depth = if self.n == 0 {
            0
        } else {
            usize::BITS as usize - self.n.leading_zeros() as usize
        };
        self.levels.resize_with(depth.max(1), Vec::new);
        self.levels[0].clear();
        self.levels[0].extend_from_slice(values);
        for k in 1..depth {
            let half = 1 << (k - 1);
            let len = self.n + 1 - (1 << k);
            let (lo, hi) = self.levels.split_at_mut(k);
            let prev = &lo[k - 1];
            let cur = &mut hi[0];
            cur.clear();
            for i in 0..len {
                let (a, b) = (prev[i], prev[i + half]);
                cur.push(if self.max { a.max(b) } else { a.min(b) });
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Extremum over the inclusive 0-based range `[lo, hi]`.
    pub fn query(&self, lo: usize, hi: usize) -> usize {
        assert!(
            lo <= hi && hi < self.n,
            "bad range {lo}..={hi} of {}",
            self.n
        );
        let len = hi - lo + 1;
        let k = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        let level = &self.levels[k];
        self.pick(level[lo], level[hi + 1 - (1 << k)])
    }

    /// Cells held by the table.
    pub fn cells(&self) -> usize {
        self.levels.iter().map(Vec::capacity).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn agrees_with_loop(values in proptest::collection::vec(0usize..100, 1..70)) {
            let mut mn = SparseTable::min();
            let mut mx = SparseTable::max();
            mn.rebuild(&values);
            mx.rebuild(&values);
            for lo in 0..values.len() {
                for hi in lo..values.len() {
                    let s = &values[lo..=hi];
                    prop_assert_eq!(mn.query(lo, hi), *s.iter().min().unwrap());
                    prop_assert_eq!(mx.query(lo, hi), *s.iter().max().unwrap());
                }
            }
        }
    }

    #[test]
    fn rebuild_shrinks() {
        let mut t = SparseTable::min();
        t.rebuild(&[5, 1, 4, 2, 8, 3, 9, 0]);
        assert_eq!(t.query(0, 7), 0);
        t.rebuild(&[7, 6]);
        assert_eq!(t.query(0, 1), 6);
        assert_eq!(t.query(0, 0), 7);
    }
}
