use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A finitely generated subgroup of Q, stored as its unique nonnegative
/// generator (every such subgroup is cyclic). Zero encodes the trivial group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubgroupOfQ {
    generator: BigRational,
}

impl SubgroupOfQ {
    pub fn trivial() -> Self {
        SubgroupOfQ {
            generator: BigRational::zero(),
        }
    }

    /// The integers Z.
    pub fn integers() -> Self {
        SubgroupOfQ {
            generator: BigRational::one(),
        }
    }

    /// The cyclic group g·Z.
    pub fn cyclic(g: BigRational) -> Self {
        SubgroupOfQ { generator: g.abs() }
    }

    /// Normal form of the subgroup generated by `gens`: gcd of numerators
    /// over lcm of denominators.
    pub fn generated_by<'a>(gens: impl IntoIterator<Item = &'a BigRational>) -> Self {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            num = num.gcd(g.numer());
            den = den.lcm(g.denom());
        }
        if num.is_zero() {
            return Self::trivial();
        }
        // gcd(n_i * (L / d_i)) / L with L = lcm(d_i); reduces to gcd(n_i)/L
        // because the n_i / d_i are already in lowest terms.
        SubgroupOfQ {
            generator: BigRational::new(num, den),
        }
    }

    pub fn generator(&self) -> &BigRational {
        &self.generator
    }

    pub fn is_trivial(&self) -> bool {
        self.generator.is_zero()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        if self.is_trivial() {
            return x.is_zero();
        }
        (x / &self.generator).is_integer()
    }

    /// Subgroup generated by both.
    pub fn join(&self, other: &SubgroupOfQ) -> SubgroupOfQ {
        SubgroupOfQ::generated_by([&self.generator, &other.generator])
    }

    /// Whether `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &SubgroupOfQ) -> bool {
        other.contains(&self.generator)
    }
}

/// Subgroup generated by a list of rationals.
pub fn subgroup_generator(gens: &[BigRational]) -> SubgroupOfQ {
    SubgroupOfQ::generated_by(gens)
}

impl fmt::Display for SubgroupOfQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            write!(f, "0")
        } else if self.generator.is_one() {
            write!(f, "Z")
        } else {
            write!(f, "({})Z", self.generator)
        }
    }
}

impl fmt::Debug for SubgroupOfQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Smallest positive value of a/2 + b/3 over a small box of integer pairs.
    #[test]
    fn half_and_third_generate_a_sixth() {
        let mut best: Option<BigRational> = None;
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let v = q(a, 2) + q(b, 3);
                if v > q(0, 1) && best.as_ref().map_or(true, |bst| v < *bst) {
                    best = Some(v);
                }
            }
        }
        assert_eq!(best.unwrap(), q(1, 6));
        assert_eq!(*subgroup_generator(&[q(1, 2), q(1, 3)]).generator(), q(1, 6));
    }

    #[test]
    fn named_examples() {
        assert_eq!(subgroup_generator(&[q(1, 1)]), SubgroupOfQ::integers());
        assert_eq!(*subgroup_generator(&[q(1, 2), q(1, 4), q(1, 8)]).generator(), q(1, 8));
        assert!(subgroup_generator(&[]).is_trivial());
        assert!(subgroup_generator(&[q(0, 1)]).is_trivial());
        assert_eq!(*subgroup_generator(&[q(-4, 3), q(2, 1)]).generator(), q(2, 3));
    }

    #[test]
    fn membership() {
        let g = SubgroupOfQ::cyclic(q(1, 6));
        assert!(g.contains(&q(5, 6)));
        assert!(g.contains(&q(-1, 3)));
        assert!(!g.contains(&q(1, 4)));
        assert!(SubgroupOfQ::integers().is_subgroup_of(&g));
        assert!(!g.is_subgroup_of(&SubgroupOfQ::integers()));
        assert_eq!(g.to_string(), "(1/6)Z");
    }

    fn rationals() -> impl Strategy<Value = Vec<BigRational>> {
        proptest::collection::vec((-30i64..=30, 1i64..=30), 0..6)
            .prop_map(|v| v.into_iter().map(|(a, b)| q(a, b)).collect())
    }

    proptest! {
        #[test]
        fn order_independent_and_idempotent(mut gens in rationals()) {
            let g = subgroup_generator(&gens);
            gens.reverse();
            prop_assert_eq!(&subgroup_generator(&gens), &g);
            prop_assert_eq!(&subgroup_generator(&[g.generator().clone()]), &g);
            for x in &gens {
                prop_assert!(g.contains(x));
            }
        }
    }
}
