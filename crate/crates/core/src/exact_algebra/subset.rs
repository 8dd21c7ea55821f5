use std::cmp::Ordering;
use std::fmt;

/// A subset of `{1, ..., d}` (d <= 32), stored as a bitmask over 0-based indices.
///
/// Ordered by cardinality, then lexicographically on the increasing element
/// sequence. This is the basis order used for every exterior-algebra matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u32);

pub const MAX_DIMENSION: usize = 32;

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u32) -> Self {
        Subset(mask)
    }

    /// From 0-based element indices.
    pub fn from_indices(indices: &[usize]) -> Self {
        Subset(indices.iter().fold(0, |m, &i| m | (1u32 << i)))
    }

    /// The full subset `{0, ..., d-1}`.
    pub fn full(d: usize) -> Self {
        if d >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << d) - 1)
        }
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    /// Increasing list of 0-based elements.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    /// Increasing list of 1-based elements, as used in reports.
    pub fn one_based(self) -> Vec<usize> {
        self.indices().into_iter().map(|i| i + 1).collect()
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn complement(self, d: usize) -> Subset {
        Subset(!self.0 & Subset::full(d).0)
    }

    /// Sign of `e_self ∧ e_other` relative to `e_{self ∪ other}`, or `None`
    /// when the subsets overlap and the wedge vanishes. Counts inversions of the
    /// concatenated index sequence.
    pub fn wedge_sign(self, other: Subset) -> Option<i8> {
        if !self.is_disjoint(other) {
            return None;
        }
        let mut inversions = 0usize;
        for i in self.indices() {
            // elements of `other` smaller than i
            inversions += (other.0 & ((1u32 << i) - 1)).count_ones() as usize;
        }
        Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
    }
}

/// All k-subsets of {0..n-1} in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(Subset::from_indices(&current));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n - k + i {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All subsets of {0..n-1}, grouped by degree, each degree in lexicographic order.
pub fn all_subsets(n: usize) -> Vec<Subset> {
    (0..=n).flat_map(|k| k_subsets(n, k)).collect()
}

/// Subsets whose cardinality has the given parity (0 even, 1 odd).
pub fn subsets_of_parity(n: usize, parity: usize) -> Vec<Subset> {
    (0..=n)
        .filter(|k| k % 2 == parity % 2)
        .flat_map(|k| k_subsets(n, k))
        .collect()
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
