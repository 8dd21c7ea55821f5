use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Exponent of a prime in a supernatural number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl Exponent {
    fn add(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }
}

/// A Steinitz (supernatural) number `∏ p^{e_p}` with `e_p ∈ N ∪ {∞}`.
///
/// Only primes with nonzero exponent are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<BigUint, Exponent>,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_integer(n: &BigUint) -> Self {
        let mut s = Self::one();
        for (p, e) in factorize(n) {
            s.multiply_prime(p, Exponent::Finite(e));
        }
        s
    }

    fn multiply_prime(&mut self, p: BigUint, e: Exponent) {
        if e == Exponent::Finite(0) {
            return;
        }
        let slot = self.exponents.entry(p).or_insert(Exponent::Finite(0));
        *slot = slot.add(e);
    }

    pub fn multiply(&self, other: &SupernaturalNumber) -> SupernaturalNumber {
        let mut out = self.clone();
        for (p, &e) in &other.exponents {
            out.multiply_prime(p.clone(), e);
        }
        out
    }

    pub fn exponent(&self, p: &BigUint) -> Exponent {
        self.exponents.get(p).copied().unwrap_or(Exponent::Finite(0))
    }

    pub fn exponents(&self) -> &BTreeMap<BigUint, Exponent> {
        &self.exponents
    }

    pub fn is_finite(&self) -> bool {
        self.exponents.values().all(|e| *e != Exponent::Infinite)
    }

    /// Primes carrying an infinite exponent.
    pub fn infinite_primes(&self) -> Vec<BigUint> {
        self.exponents
            .iter()
            .filter(|(_, e)| **e == Exponent::Infinite)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// The integer value, if every exponent is finite.
    pub fn to_integer(&self) -> Option<BigUint> {
        let mut v = BigUint::one();
        for (p, e) in &self.exponents {
            match e {
                Exponent::Finite(k) => v *= num_traits::pow(p.clone(), *k as usize),
                Exponent::Infinite => return None,
            }
        }
        Some(v)
    }

    /// Whether the integer `n` divides this supernatural number.
    pub fn is_divisible_by(&self, n: &BigUint) -> bool {
        factorize(n).into_iter().all(|(p, e)| match self.exponent(&p) {
            Exponent::Infinite => true,
            Exponent::Finite(k) => k >= e,
        })
    }

    /// Equality up to finitely many finite exponent changes: the two agree
    /// on which primes carry an infinite exponent and on which primes occur
    /// infinitely often. For finitely supported numbers this means the same
    /// set of infinite primes.
    pub fn equivalent_up_to_finite(&self, other: &SupernaturalNumber) -> bool {
        self.infinite_primes() == other.infinite_primes()
    }
}

/// Steinitz number of an index tower: the product of the finite prefix and,
/// for each prime dividing an entry of the periodic tail, an infinite exponent.
pub fn steinitz(indices: &[BigUint], periodic_tail: Option<&[BigUint]>) -> SupernaturalNumber {
    let mut s = SupernaturalNumber::one();
    for n in indices {
        s = s.multiply(&SupernaturalNumber::from_integer(n));
    }
    if let Some(tail) = periodic_tail {
        for n in tail {
            for (p, _) in factorize(n) {
                s.multiply_prime(p, Exponent::Infinite);
            }
        }
    }
    s
}

/// Prime factorisation by trial division. `0` and `1` factor as the empty product.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u64)> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut rest = n.clone();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u64;
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    if rest > BigUint::one() {
        match out.iter_mut().find(|(q, _)| *q == rest) {
            Some(slot) => slot.1 += 1,
            None => out.push((rest, 1)),
        }
    }
    out
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(p, e)| match e {
                Exponent::Finite(1) => p.to_string(),
                Exponent::Finite(k) => format!("{p}^{k}"),
                Exponent::Infinite => format!("{p}^inf"),
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
