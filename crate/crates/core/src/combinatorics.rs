//! Lazy enumerators in lexicographic order.

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `k`-element subsets of `[1, n]` as increasing vectors, lexicographically.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: u64,
    cur: Option<Vec<u64>>,
}

impl Combinations {
    pub fn new(n: u64, k: usize) -> Self {
        let cur = if (k as u64) <= n {
            Some((1..=k as u64).collect())
        } else {
            None
        };
        Self { n, cur }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            // the largest value position i may take
            if next[i] < self.n - (k - 1 - i) as u64 {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// All vectors `v` of length `len` with `lo <= v[i] <= hi`, lexicographically.
#[derive(Clone, Debug)]
pub struct Odometer {
    lo: i64,
    hi: i64,
    cur: Option<Vec<i64>>,
}

impl Odometer {
    pub fn new(len: usize, lo: i64, hi: i64) -> Self {
        let cur = if lo <= hi || len == 0 {
            Some(vec![lo; len])
        } else {
            None
        };
        Self { lo, hi, cur }
    }
}

impl Iterator for Odometer {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.cur.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.hi {
                next[i] += 1;
                for v in next.iter_mut().skip(i + 1) {
                    *v = self.lo;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Index tuples into a list of ranges `[0, sizes[i])`, last index fastest.
#[derive(Clone, Debug)]
pub struct ProductIndices {
    sizes: Vec<usize>,
    cur: Option<Vec<usize>>,
}

impl ProductIndices {
    pub fn new(sizes: Vec<usize>) -> Self {
        let cur = if sizes.iter().all(|&s| s > 0) {
            Some(vec![0; sizes.len()])
        } else {
            None
        };
        Self { sizes, cur }
    }
}

impl Iterator for ProductIndices {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] + 1 < self.sizes[i] {
                next[i] += 1;
                for v in next.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_match_binomial() {
        for n in 0..8u64 {
            for k in 0..=9usize {
                let all: Vec<_> = Combinations::new(n, k).collect();
                assert_eq!(all.len() as u64, binomial(n, k as u64).unwrap());
                let mut sorted = all.clone();
                sorted.sort();
                assert_eq!(sorted, all);
            }
        }
    }

    #[test]
    fn empty_odometer_yields_one_vector() {
        assert_eq!(Odometer::new(0, 1, 0).count(), 1);
        assert_eq!(Odometer::new(3, -1, 1).count(), 27);
    }

    #[test]
    fn product_indices_count() {
        assert_eq!(ProductIndices::new(vec![2, 3, 4]).count(), 24);
        assert_eq!(ProductIndices::new(vec![]).count(), 1);
        assert_eq!(ProductIndices::new(vec![2, 0]).count(), 0);
    }

    #[test]
    fn binomial_overflow_is_reported() {
        assert_eq!(binomial(6, 2), Some(15));
        assert_eq!(binomial(200, 100), None);
    }
}
