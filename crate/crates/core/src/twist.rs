//! The cocycle twist: a skew-symmetric form Θ with σ(m, n) = exp(-πi mᵀΘn).
//!
//! Phases are kept as exact exponents. Θ is rational, except for the
//! one-parameter plane mode where Θ = c·θ·J with θ a formal symbol.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{GellError, Result};
use crate::exact_algebra::{
    determinant, pfaffian_minor, subsets_of_parity, IntMatrix, RatMatrix, Subset,
};

/// Largest dimension for which Pfaffian profiles are computed by default.
pub const DEFAULT_PROFILE_BOUND: usize = 8;

/// Exact rational skew-symmetric d x d form.
#[derive(Clone, PartialEq, Eq)]
pub struct SkewForm {
    matrix: RatMatrix,
}

impl SkewForm {
    pub fn new(matrix: RatMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(GellError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        for i in 0..matrix.rows() {
            for j in i..matrix.cols() {
                if !(&matrix[(i, j)] + &matrix[(j, i)]).is_zero() {
                    return Err(GellError::NotSkewSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SkewForm { matrix })
    }

    /// From the strictly upper-triangular entries in row-major order
    /// `(1,2), (1,3), ..., (1,d), (2,3), ...`.
    pub fn from_upper(d: usize, upper: &[BigRational]) -> Result<Self> {
        let expected = d * d.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(GellError::DimensionMismatch(format!(
                "{} upper-triangular entries given, {expected} expected for d = {d}",
                upper.len()
            )));
        }
        let mut m = RatMatrix::zeros(d, d);
        let mut it = upper.iter();
        for i in 0..d {
            for j in i + 1..d {
                let v = it.next().expect("length checked").clone();
                m[(j, i)] = -v.clone();
                m[(i, j)] = v;
            }
        }
        Ok(SkewForm { matrix: m })
    }

    pub fn zero(d: usize) -> Self {
        SkewForm {
            matrix: RatMatrix::zeros(d, d),
        }
    }

    /// θ·J in dimension 2.
    pub fn plane(theta: BigRational) -> Self {
        Self::from_upper(2, &[theta]).expect("one entry for d = 2")
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    /// Strictly upper-triangular entries in row-major order.
    pub fn upper(&self) -> Vec<BigRational> {
        let d = self.dimension();
        (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .map(|(i, j)| self.matrix[(i, j)].clone())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.upper().iter().all(Zero::is_zero)
    }

    fn bilinear(&self, m: &[BigInt], n: &[BigInt]) -> Result<BigRational> {
        let d = self.dimension();
        if m.len() != d || n.len() != d {
            return Err(GellError::DimensionMismatch(format!(
                "vectors of length {} and {} for a {d}-dimensional form",
                m.len(),
                n.len()
            )));
        }
        let mut acc = BigRational::zero();
        for i in 0..d {
            if m[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if n[j].is_zero() || self.matrix[(i, j)].is_zero() {
                    continue;
                }
                acc += &self.matrix[(i, j)] * BigRational::from_integer(&m[i] * &n[j]);
            }
        }
        Ok(acc)
    }
}

impl fmt::Debug for SkewForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewForm({:?})", self.matrix)
    }
}

/// A phase `exp(-πi r)` stored by its exponent `r ∈ [0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseExponent(BigRational);

impl PhaseExponent {
    pub fn new(r: BigRational) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let k = (&r / &two).floor();
        PhaseExponent(r - k * two)
    }

    pub fn exponent(&self) -> &BigRational {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_zero()
    }
}

impl Add for PhaseExponent {
    type Output = PhaseExponent;

    fn add(self, rhs: PhaseExponent) -> PhaseExponent {
        PhaseExponent::new(self.0 + rhs.0)
    }
}

impl Neg for PhaseExponent {
    type Output = PhaseExponent;

    fn neg(self) -> PhaseExponent {
        PhaseExponent::new(-self.0)
    }
}

/// σ(m, n) as the exponent `mᵀΘn mod 2`.
pub fn cocycle(theta: &SkewForm, m: &[BigInt], n: &[BigInt]) -> Result<PhaseExponent> {
    Ok(PhaseExponent::new(theta.bilinear(m, n)?))
}

/// Checks σ(m,n)σ(m+n,k) = σ(m,n+k)σ(n,k) and the normalisation
/// σ(m,0) = σ(0,n) = 1 at the exponent level.
pub fn cocycle_identity_check(theta: &SkewForm, m: &[BigInt], n: &[BigInt], k: &[BigInt]) -> Result<bool> {
    let add = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let zero = vec![BigInt::zero(); theta.dimension()];
    let lhs = cocycle(theta, m, n)? + cocycle(theta, &add(m, n), k)?;
    let rhs = cocycle(theta, m, &add(n, k))? + cocycle(theta, n, k)?;
    let normalised = cocycle(theta, m, &zero)?.is_trivial() && cocycle(theta, &zero, n)?.is_trivial();
    Ok(lhs == rhs && normalised)
}

/// All Pfaffians `Pf(Θ_I)` over even subsets, including `∅ ↦ 1`.
pub fn pfaffian_profile(theta: &SkewForm) -> Result<BTreeMap<Subset, BigRational>> {
    pfaffian_profile_bounded(theta, DEFAULT_PROFILE_BOUND)
}

pub fn pfaffian_profile_bounded(theta: &SkewForm, bound: usize) -> Result<BTreeMap<Subset, BigRational>> {
    let d = theta.dimension();
    if d > bound {
        return Err(GellError::DimensionTooLarge { dim: d, bound });
    }
    subsets_of_parity(d, 0)
        .into_iter()
        .map(|s| Ok((s, pfaffian_minor(&theta.matrix, s)?)))
        .collect()
}

/// The form pulled back to a sublattice basis: `BᵀΘB`.
pub fn restricted_form(theta: &SkewForm, basis: &IntMatrix) -> Result<SkewForm> {
    if basis.rows() != theta.dimension() || basis.cols() != theta.dimension() {
        return Err(GellError::DimensionMismatch(format!(
            "basis is {}x{}, form has dimension {}",
            basis.rows(),
            basis.cols(),
            theta.dimension()
        )));
    }
    if determinant(basis)?.is_zero() {
        return Err(GellError::Singular);
    }
    let b = basis.to_rational();
    let m = b.transpose().mul(&theta.matrix)?.mul(&b)?;
    SkewForm::new(m)
}

/// A trace value: an exact rational, or `a + bθ` for the symbolic plane twist.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TraceValue {
    Exact(BigRational),
    Symbolic { constant: BigRational, theta: BigRational },
}

impl TraceValue {
    pub fn zero() -> Self {
        TraceValue::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        TraceValue::Exact(BigRational::one())
    }

    pub fn symbolic(constant: BigRational, theta: BigRational) -> Self {
        TraceValue::Symbolic { constant, theta }
    }

    pub fn constant(&self) -> &BigRational {
        match self {
            TraceValue::Exact(v) => v,
            TraceValue::Symbolic { constant, .. } => constant,
        }
    }

    /// Coefficient of θ (zero for exact values).
    pub fn theta_coefficient(&self) -> BigRational {
        match self {
            TraceValue::Exact(_) => BigRational::zero(),
            TraceValue::Symbolic { theta, .. } => theta.clone(),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, TraceValue::Symbolic { .. })
    }

    pub fn is_zero(&self) -> bool {
        self.constant().is_zero() && self.theta_coefficient().is_zero()
    }

    pub fn scale(&self, c: &BigRational) -> TraceValue {
        match self {
            TraceValue::Exact(v) => TraceValue::Exact(v * c),
            TraceValue::Symbolic { constant, theta } => TraceValue::Symbolic {
                constant: constant * c,
                theta: theta * c,
            },
        }
    }

    /// The exact value, if not symbolic.
    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            TraceValue::Exact(v) => Some(v),
            TraceValue::Symbolic { .. } => None,
        }
    }
}

impl Add for TraceValue {
    type Output = TraceValue;

    fn add(self, rhs: TraceValue) -> TraceValue {
        match (self, rhs) {
            (TraceValue::Exact(a), TraceValue::Exact(b)) => TraceValue::Exact(a + b),
            (a, b) => TraceValue::Symbolic {
                constant: a.constant() + b.constant(),
                theta: a.theta_coefficient() + b.theta_coefficient(),
            },
        }
    }
}

impl fmt::Display for TraceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceValue::Exact(v) => write!(f, "{v}"),
            TraceValue::Symbolic { constant, theta } => write!(f, "{constant} + ({theta})θ"),
        }
    }
}

impl fmt::Debug for TraceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The twist attached to a spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Twist {
    Exact(SkewForm),
    /// Θ = scale·θ·J in dimension 2 with θ a formal symbol.
    SymbolicPlane { scale: BigRational },
}

impl Twist {
    pub fn symbolic() -> Self {
        Twist::SymbolicPlane {
            scale: BigRational::one(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Twist::Exact(f) => f.dimension(),
            Twist::SymbolicPlane { .. } => 2,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Twist::SymbolicPlane { .. })
    }

    /// Pfaffian profile as trace values (θ-linear in symbolic mode).
    pub fn profile(&self) -> Result<BTreeMap<Subset, TraceValue>> {
        match self {
            Twist::Exact(form) => Ok(pfaffian_profile(form)?
                .into_iter()
                .map(|(s, v)| (s, TraceValue::Exact(v)))
                .collect()),
            Twist::SymbolicPlane { scale } => Ok(BTreeMap::from([
                (Subset::EMPTY, TraceValue::symbolic(BigRational::one(), BigRational::zero())),
                (Subset::full(2), TraceValue::symbolic(BigRational::zero(), scale.clone())),
            ])),
        }
    }

    /// The twist pulled back along a sublattice basis.
    pub fn restricted(&self, basis: &IntMatrix) -> Result<Twist> {
        match self {
            Twist::Exact(form) => Ok(Twist::Exact(restricted_form(form, basis)?)),
            Twist::SymbolicPlane { scale } => {
                if basis.rows() != 2 || basis.cols() != 2 {
                    return Err(GellError::DimensionMismatch(
                        "symbolic twist requires a 2x2 basis".into(),
                    ));
                }
                let det = determinant(basis)?;
                if det.is_zero() {
                    return Err(GellError::Singular);
                }
                // BᵀJB = det(B)·J
                Ok(Twist::SymbolicPlane {
                    scale: scale * BigRational::from_integer(det),
                })
            }
        }
    }
}
