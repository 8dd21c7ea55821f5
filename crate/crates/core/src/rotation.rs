//! Finite clock/shift models of rational rotation algebras, used as a
//! floating-point oracle for trace values.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GellError, Result};
use crate::exact_algebra::SubgroupOfQ;
use crate::pairing::GapLabelGroup;

pub type ComplexMatrix = DMatrix<Complex64>;

/// Tolerance for linear identities.
pub const LINEAR_TOL: f64 = 1e-12;
/// Tolerance for `P² = P`.
pub const PROJECTION_TOL: f64 = 1e-9;
/// Tolerance for the distance of the spectrum from {0, 1}.
pub const SPECTRUM_TOL: f64 = 1e-6;

/// `U = diag(ω^k)` and the cyclic shift `V e_k = e_{k-1}`, so `VU = ω UV`
/// with `ω = e^{2πi p/q}`.
#[derive(Clone, Debug)]
pub struct ClockShiftPair {
    pub p: u64,
    pub q: u64,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

impl ClockShiftPair {
    pub fn omega(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.p as f64 / self.q as f64)
    }

    /// `‖VU − ωUV‖_F`.
    pub fn commutation_residual(&self) -> f64 {
        (&self.v * &self.u - (&self.u * &self.v) * self.omega()).norm()
    }

    /// Largest of `‖U*U − 1‖_F` and `‖V*V − 1‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = ComplexMatrix::identity(self.u.nrows(), self.u.ncols());
        let ru = (self.u.adjoint() * &self.u - &id).norm();
        let rv = (self.v.adjoint() * &self.v - &id).norm();
        ru.max(rv)
    }
}

fn check_fraction(p: u64, q: u64) -> Result<()> {
    if p == 0 || p >= q {
        return Err(GellError::InvalidRotation(format!(
            "need 1 <= p < q, got p = {p}, q = {q}"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(GellError::InvalidRotation(format!("{p}/{q} is not reduced")));
    }
    Ok(())
}

pub fn clock_shift(p: u64, q: u64) -> Result<ClockShiftPair> {
    check_fraction(p, q)?;
    let n = q as usize;
    let u = ComplexMatrix::from_fn(n, n, |i, k| {
        if i == k {
            // reduce p·k mod q first so the phase stays accurate
            let m = (p * k as u64) % q;
            Complex64::from_polar(1.0, 2.0 * PI * m as f64 / q as f64)
        } else {
            Complex64::zero()
        }
    });
    let v = ComplexMatrix::from_fn(n, n, |i, k| {
        if (i + 1) % n == k {
            Complex64::one()
        } else {
            Complex64::zero()
        }
    });
    Ok(ClockShiftPair { p, q, u, v })
}

/// Placement of the shift in `P = g(U)·W + f(U) + W*·g(U)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftConvention {
    /// `W = V`
    Standard,
    /// `W = V*`
    Adjoint,
}

impl fmt::Display for ShiftConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShiftConvention::Standard => "g(U)V + f(U) + V*g(U)",
            ShiftConvention::Adjoint => "g(U)V* + f(U) + Vg(U)",
        })
    }
}

/// Piecewise-linear bump on the circle sampled at the grid `m/q`. Values
/// are indexed by the grid point `m`.
#[derive(Clone, Debug)]
pub struct BumpPair {
    pub p: u64,
    pub q: u64,
    pub eps: BigRational,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl BumpPair {
    pub fn new(p: u64, q: u64, eps: &BigRational) -> Result<BumpPair> {
        check_fraction(p, q)?;
        let scaled = eps * BigRational::from_integer(BigInt::from(q));
        if !scaled.is_integer() {
            return Err(GellError::InvalidRotation(format!(
                "eps = {eps} is not a multiple of 1/{q}"
            )));
        }
        let e = scaled.to_integer().to_u64().filter(|&e| e > 0).ok_or_else(|| {
            GellError::InvalidRotation(format!("eps = {eps} must be positive"))
        })?;
        if e > p.min(q - p) {
            return Err(GellError::InvalidRotation(format!(
                "eps = {eps} exceeds min(θ, 1 − θ) for θ = {p}/{q}"
            )));
        }
        let f: Vec<f64> = (0..q).map(|m| bump_value(m, p, e)).collect();
        // g lives on the ramp down [θ, θ + ε] only
        let g = (0..q)
            .map(|m| {
                let x = f[m as usize];
                if m > p && m < p + e {
                    (x - x * x).max(0.0).sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        Ok(BumpPair {
            p,
            q,
            eps: eps.clone(),
            f,
            g,
        })
    }

    /// `(1/q) Σ f(m/q)` computed exactly.
    pub fn exact_mean(&self) -> BigRational {
        let e = (self.eps.clone() * BigRational::from_integer(BigInt::from(self.q)))
            .to_integer()
            .to_u64()
            .expect("validated");
        let mut s = BigRational::zero();
        for m in 0..self.q {
            s += bump_exact(m, self.p, e);
        }
        s / BigRational::from_integer(BigInt::from(self.q))
    }
}

fn bump_exact(m: u64, a: u64, e: u64) -> BigRational {
    let r = |n: u64, d: u64| BigRational::new(BigInt::from(n), BigInt::from(d));
    if m <= e {
        r(m, e)
    } else if m <= a {
        BigRational::one()
    } else if m <= a + e {
        r(a + e - m, e)
    } else {
        BigRational::zero()
    }
}

fn bump_value(m: u64, a: u64, e: u64) -> f64 {
    let v = bump_exact(m, a, e);
    v.to_f64().expect("value in [0, 1]")
}

/// A Rieffel projection in the clock/shift model together with its checks.
#[derive(Clone, Debug)]
pub struct RieffelProjection {
    pub p: u64,
    pub q: u64,
    pub eps: BigRational,
    pub convention: ShiftConvention,
    pub matrix: ComplexMatrix,
    /// `(1/q) Tr P`.
    pub trace: f64,
    pub trace_error: f64,
    /// `‖P² − P‖_F`.
    pub projection_residual: f64,
    /// `‖P − P*‖_F`.
    pub selfadjoint_residual: f64,
    /// Largest distance from an eigenvalue to {0, 1}.
    pub spectrum_gap: f64,
    /// Residual of the rejected convention, when the first one failed.
    pub rejected_residual: Option<f64>,
}

fn assemble(pair: &ClockShiftPair, bump: &BumpPair, conv: ShiftConvention) -> ComplexMatrix {
    let n = pair.q as usize;
    // f(U) and g(U): U's k-th eigenvalue sits at grid point p·k mod q
    let diag = |vals: &[f64]| {
        ComplexMatrix::from_fn(n, n, |i, k| {
            if i == k {
                Complex64::new(vals[((pair.p * k as u64) % pair.q) as usize], 0.0)
            } else {
                Complex64::zero()
            }
        })
    };
    let fu = diag(&bump.f);
    let gu = diag(&bump.g);
    let w = match conv {
        ShiftConvention::Standard => pair.v.clone(),
        ShiftConvention::Adjoint => pair.v.adjoint(),
    };
    &gu * &w + fu + w.adjoint() * &gu
}

fn projection_residual(m: &ComplexMatrix) -> f64 {
    (m * m - m).norm()
}

pub fn rieffel_projection(p: u64, q: u64, eps: &BigRational) -> Result<RieffelProjection> {
    let bump = BumpPair::new(p, q, eps)?;
    let pair = clock_shift(p, q)?;
    let first = assemble(&pair, &bump, ShiftConvention::Standard);
    let r1 = projection_residual(&first);
    let (convention, matrix, residual, rejected) = if r1 <= PROJECTION_TOL {
        (ShiftConvention::Standard, first, r1, None)
    } else {
        let second = assemble(&pair, &bump, ShiftConvention::Adjoint);
        let r2 = projection_residual(&second);
        if r2 > PROJECTION_TOL {
            return Err(GellError::Numerical(format!(
                "P² ≠ P under both shift conventions (residuals {r1:.3e}, {r2:.3e})"
            )));
        }
        (ShiftConvention::Adjoint, second, r2, Some(r1))
    };

    let n = q as usize;
    let trace = matrix.trace().re / q as f64;
    let target = p as f64 / q as f64;
    let selfadjoint_residual = (&matrix - matrix.adjoint()).norm();
    let hermitian = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(hermitian);
    let spectrum_gap = (0..n)
        .map(|i| {
            let l = eig.eigenvalues[i];
            l.abs().min((l - 1.0).abs())
        })
        .fold(0.0, f64::max);

    Ok(RieffelProjection {
        p,
        q,
        eps: eps.clone(),
        convention,
        matrix,
        trace,
        trace_error: (trace - target).abs(),
        projection_residual: residual,
        selfadjoint_residual,
        spectrum_gap,
        rejected_residual: rejected,
    })
}

impl RieffelProjection {
    /// All four numeric tolerances hold.
    pub fn within_tolerances(&self) -> bool {
        self.projection_residual <= PROJECTION_TOL
            && self.selfadjoint_residual <= LINEAR_TOL
            && self.trace_error <= LINEAR_TOL
            && self.spectrum_gap <= SPECTRUM_TOL
    }
}

fn check_unit_interval(x: &BigRational) -> Result<()> {
    if x.is_negative() || x > &BigRational::one() {
        return Err(GellError::InvalidRotation(format!("{x} is outside [0, 1]")));
    }
    Ok(())
}

/// Whether the rotation algebras for θ and ζ in [0, 1] are isomorphic.
pub fn rotation_isomorphic(theta: &BigRational, zeta: &BigRational) -> Result<bool> {
    check_unit_interval(theta)?;
    check_unit_interval(zeta)?;
    Ok(theta == zeta || theta == &(BigRational::one() - zeta))
}

/// A rotation parameter: a rational number or the formal symbol θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RotationAngle {
    Symbolic,
    Rational(BigRational),
}

/// Range of the trace on K_0 of the rotation algebra.
pub fn trace_range_d2(theta: &RotationAngle) -> GapLabelGroup {
    match theta {
        RotationAngle::Symbolic => GapLabelGroup::Symbolic {
            constant: SubgroupOfQ::integers(),
            theta: SubgroupOfQ::integers(),
        },
        RotationAngle::Rational(t) => GapLabelGroup::Exact {
            group: SubgroupOfQ::generated_by(&[BigRational::one(), t.clone()]),
            completion: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::lattice::OdometerSpec;
    use crate::pairing::{gap_label_group, Twist};
    use crate::twist::SkewForm;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn clock_shift_relations() {
        let pair = clock_shift(1, 2).unwrap();
        assert!((&pair.v * &pair.u + &pair.u * &pair.v).norm() <= LINEAR_TOL);
        for (p, n) in [(1, 3), (2, 7), (5, 12), (100, 257)] {
            let pair = clock_shift(p, n).unwrap();
            assert!(pair.commutation_residual() <= LINEAR_TOL * n as f64, "{p}/{n}");
            assert!(pair.unitarity_residual() <= LINEAR_TOL, "{p}/{n}");
        }
        assert!(clock_shift(3, 6).is_err());
        assert!(clock_shift(0, 5).is_err());
        assert!(clock_shift(5, 5).is_err());
    }

    #[test]
    fn bump_mean_is_theta() {
        for (p, n, e) in [(1, 4, 1), (2, 7, 1), (3, 8, 1), (3, 8, 3), (5, 11, 4), (1, 2, 1)] {
            let b = BumpPair::new(p, n, &q(e, n as i64)).unwrap();
            assert_eq!(b.exact_mean(), q(p as i64, n as i64));
        }
        assert!(BumpPair::new(2, 7, &q(1, 5)).is_err());
        assert!(BumpPair::new(2, 7, &q(3, 7)).is_err());
        assert!(BumpPair::new(2, 7, &q(0, 7)).is_err());
    }

    #[test]
    fn rieffel_examples() {
        for (p, n) in [(1u64, 4u64), (2, 7), (3, 8)] {
            let r = rieffel_projection(p, n, &q(1, n as i64)).unwrap();
            assert!(r.within_tolerances(), "{p}/{n}: {r:?}");
        }
        assert!(rieffel_projection(0, 5, &q(1, 5)).is_err());
        assert!(rieffel_projection(3, 6, &q(1, 6)).is_err());
    }

    #[test]
    fn rieffel_with_wide_ramps() {
        for n in 2..=16u64 {
            for p in 1..n {
                if p.gcd(&n) != 1 {
                    continue;
                }
                for e in 1..=p.min(n - p) {
                    let r = rieffel_projection(p, n, &q(e as i64, n as i64)).unwrap();
                    assert!(r.within_tolerances(), "p={p} q={n} e={e}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn isomorphism_truth_table() {
        assert!(rotation_isomorphic(&q(1, 3), &q(2, 3)).unwrap());
        assert!(rotation_isomorphic(&q(1, 3), &q(1, 3)).unwrap());
        assert!(!rotation_isomorphic(&q(1, 3), &q(1, 4)).unwrap());
        assert!(rotation_isomorphic(&q(0, 1), &q(1, 1)).unwrap());
        assert!(rotation_isomorphic(&q(-1, 3), &q(1, 3)).is_err());
        assert!(rotation_isomorphic(&q(1, 3), &q(4, 3)).is_err());
        let grid: Vec<BigRational> = (0..=12).map(|k| q(k, 12)).collect();
        for a in &grid {
            for b in &grid {
                let ab = rotation_isomorphic(a, b).unwrap();
                assert_eq!(ab, rotation_isomorphic(b, a).unwrap());
                let flipped = BigRational::one() - a;
                assert_eq!(ab, rotation_isomorphic(&flipped, b).unwrap());
            }
            assert!(rotation_isomorphic(a, a).unwrap());
        }
    }

    #[test]
    fn trace_range_matches_pairing() {
        let plane = Arc::new(OdometerSpec::trivial(2));
        assert_eq!(
            trace_range_d2(&RotationAngle::Symbolic),
            gap_label_group(&plane, Some(&Twist::symbolic()), 0).unwrap()
        );
        for t in [q(0, 1), q(1, 5), q(2, 7), q(3, 4), q(1, 1)] {
            let twist = Twist::Exact(SkewForm::plane(t.clone()));
            assert_eq!(
                trace_range_d2(&RotationAngle::Rational(t.clone())),
                gap_label_group(&plane, Some(&twist), 0).unwrap(),
                "θ = {t}"
            );
        }
        assert_eq!(
            trace_range_d2(&RotationAngle::Rational(q(1, 5))).exact_group(),
            Some(&SubgroupOfQ::cyclic(q(1, 5)))
        );
        assert_eq!(
            trace_range_d2(&RotationAngle::Rational(q(0, 1))).exact_group(),
            Some(&SubgroupOfQ::integers())
        );
    }
}
