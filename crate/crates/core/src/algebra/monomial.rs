use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

/// Largest supported number of degree-1 generators.
pub const MAX_GENERATORS: usize = 16;

/// A basis monomial `e^{i1 ... ik}` with strictly increasing indices,
/// stored as a bit set (bit `i - 1` stands for generator `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds a monomial from 1-based indices. Returns `None` on repeats,
    /// zero, or indices above `MAX_GENERATORS`.
    pub fn new(indices: &[usize]) -> Option<Self> {
        let mut mask = 0u32;
        for &i in indices {
            if i == 0 || i > MAX_GENERATORS || mask & (1 << (i - 1)) != 0 {
                return None;
            }
            mask |= 1 << (i - 1);
        }
        Some(MultiIndex(mask))
    }

    pub fn single(i: usize) -> Self {
        assert!(
            (1..=MAX_GENERATORS).contains(&i),
            "generator index out of range"
        );
        MultiIndex(1 << (i - 1))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_GENERATORS).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let i = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(i + 1)
            }
        })
    }

    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Product of two monomials with the reordering sign, or `None` if they
    /// share an index.
    pub fn wedge(self, other: MultiIndex) -> Option<(MultiIndex, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each index of `other` must move past every larger index of `self`.
        let mut swaps = 0u32;
        for j in other.indices() {
            swaps += (self.0 >> j).count_ones();
        }
        Some((MultiIndex(self.0 | other.0), swaps % 2 == 1))
    }

    /// Removes generator `i` with the derivation sign `(-1)^{#indices below i}`.
    pub fn remove(self, i: usize) -> Option<(MultiIndex, bool)> {
        if !self.contains(i) {
            return None;
        }
        let below = (self.0 & ((1u32 << (i - 1)) - 1)).count_ones();
        Some((MultiIndex(self.0 & !(1 << (i - 1))), below % 2 == 1))
    }

    /// Index of this monomial in the lexicographic basis of its degree.
    pub fn position(self, m: usize) -> usize {
        table(m).position[self.0 as usize]
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.max_index() > 9;
        let mut first = true;
        for i in self.indices() {
            if wide && !first {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

struct MonomialTable {
    by_degree: Vec<Vec<MultiIndex>>,
    position: Vec<usize>,
}

static TABLES: [OnceLock<MonomialTable>; MAX_GENERATORS + 1] =
    [const { OnceLock::new() }; MAX_GENERATORS + 1];

fn table(m: usize) -> &'static MonomialTable {
    assert!(
        m <= MAX_GENERATORS,
        "at most {MAX_GENERATORS} generators supported"
    );
    TABLES[m].get_or_init(|| {
        let mut by_degree = vec![Vec::new(); m + 1];
        for mask in 0u32..(1u32 << m) {
            let mi = MultiIndex(mask);
            by_degree[mi.degree()].push(mi);
        }
        let mut position = vec![0usize; 1 << m];
        for monomials in &mut by_degree {
            monomials.sort();
            for (pos, mi) in monomials.iter().enumerate() {
                position[mi.0 as usize] = pos;
            }
        }
        MonomialTable {
            by_degree,
            position,
        }
    })
}

/// Basis monomials of degree `k` on `m` generators, in lexicographic order.
/// Empty when `k > m`.
pub fn monomials(m: usize, k: usize) -> &'static [MultiIndex] {
    table(m).by_degree.get(k).map(Vec::as_slice).unwrap_or(&[])
}

/// `C(m, k)`, the dimension of the degree-`k` piece; zero outside `0..=m`.
pub fn graded_dim(m: usize, k: isize) -> usize {
    if k < 0 || k as usize > m {
        0
    } else {
        monomials(m, k as usize).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order_within_degree() {
        let names: Vec<String> = monomials(4, 2).iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["12", "13", "14", "23", "24", "34"]);
        for (i, mi) in monomials(4, 2).iter().enumerate() {
            assert_eq!(mi.position(4), i);
        }
    }

    #[test]
    fn wedge_signs() {
        let e1 = MultiIndex::single(1);
        let e2 = MultiIndex::single(2);
        assert_eq!(
            e1.wedge(e2),
            Some((MultiIndex::new(&[1, 2]).unwrap(), false))
        );
        assert_eq!(
            e2.wedge(e1),
            Some((MultiIndex::new(&[1, 2]).unwrap(), true))
        );
        assert_eq!(e1.wedge(e1), None);
        let e23 = MultiIndex::new(&[2, 3]).unwrap();
        // e^{23} ^ e^1 = e^{123} after two transpositions
        assert_eq!(
            e23.wedge(e1),
            Some((MultiIndex::new(&[1, 2, 3]).unwrap(), false))
        );
    }

    #[test]
    fn remove_sign_counts_lower_indices() {
        let e12 = MultiIndex::new(&[1, 2]).unwrap();
        assert_eq!(e12.remove(1), Some((MultiIndex::single(2), false)));
        assert_eq!(e12.remove(2), Some((MultiIndex::single(1), true)));
        assert_eq!(e12.remove(3), None);
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(MultiIndex::new(&[1, 1]).is_none());
        assert!(MultiIndex::new(&[0]).is_none());
        assert_eq!(MultiIndex::new(&[3, 1]), MultiIndex::new(&[1, 3]));
    }

    #[test]
    fn dims_are_binomials() {
        let dims: Vec<usize> = (0..=6).map(|k| graded_dim(6, k)).collect();
        assert_eq!(dims, [1, 6, 15, 20, 15, 6, 1]);
        assert_eq!(graded_dim(4, -1), 0);
        assert_eq!(graded_dim(4, 5), 0);
    }
}
