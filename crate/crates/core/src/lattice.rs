//! Z^d-odometers as towers of nested finite-index sublattices.
//!
//! Stage `j` of a tower is the sublattice `Γ_j = B_j Z^d` with
//! `B_j = M_1 M_2 ... M_j` and `Γ_0 = Z^d`. The odometer is coset translation
//! on the inverse limit of the finite groups `Z^d / Γ_j`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{GellError, Result};
use crate::exact_algebra::{
    determinant, smith_normal_form, steinitz, IntMatrix, SubgroupOfQ, SupernaturalNumber,
};

/// A full-rank sublattice of Z^d, given by a basis whose columns generate it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    basis: IntMatrix,
}

impl Sublattice {
    pub fn new(basis: IntMatrix) -> Result<Self> {
        if determinant(&basis)?.is_zero() {
            return Err(GellError::Singular);
        }
        Ok(Sublattice { basis })
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// The index [Z^d : Γ] = |det B|.
    pub fn index(&self) -> BigInt {
        determinant(&self.basis).expect("square by construction").abs()
    }

    /// Whether `v ∈ Γ`, i.e. `B x = v` has an integer solution.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let inv = self.basis.to_rational().inverse().expect("nonsingular");
        let rv: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        inv.mul_vec(&rv)
            .map(|x| x.iter().all(|c| c.is_integer()))
            .unwrap_or(false)
    }
}

/// A tower of nested sublattices given by its step matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdometerSpec {
    rank: usize,
    steps: Vec<IntMatrix>,
    periodic_tail: Option<Vec<IntMatrix>>,
}

impl OdometerSpec {
    pub fn new(rank: usize, steps: Vec<IntMatrix>, periodic_tail: Option<Vec<IntMatrix>>) -> Result<Self> {
        let tail = periodic_tail.filter(|t| !t.is_empty());
        for m in steps.iter().chain(tail.iter().flatten()) {
            if m.rows() != rank || m.cols() != rank {
                return Err(GellError::DimensionMismatch(format!(
                    "step matrix is {}x{}, expected {rank}x{rank}",
                    m.rows(),
                    m.cols()
                )));
            }
            if determinant(m)?.is_zero() {
                return Err(GellError::Singular);
            }
        }
        Ok(OdometerSpec {
            rank,
            steps,
            periodic_tail: tail,
        })
    }

    /// The spec with no steps: only stage 0, Γ_0 = Z^d.
    pub fn trivial(rank: usize) -> Self {
        OdometerSpec {
            rank,
            steps: Vec::new(),
            periodic_tail: None,
        }
    }

    /// Constant step matrix repeated `count` times.
    pub fn constant(step: IntMatrix, count: usize) -> Result<Self> {
        let rank = step.rows();
        Self::new(rank, vec![step; count], None)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn steps(&self) -> &[IntMatrix] {
        &self.steps
    }

    pub fn periodic_tail(&self) -> Option<&[IntMatrix]> {
        self.periodic_tail.as_deref()
    }

    /// Number of explicit stages, or `None` when a periodic tail makes the tower infinite.
    pub fn depth(&self) -> Option<usize> {
        match self.periodic_tail {
            Some(_) => None,
            None => Some(self.steps.len()),
        }
    }

    pub fn check_stage(&self, j: usize) -> Result<()> {
        match self.depth() {
            Some(depth) if j > depth => Err(GellError::StageOutOfRange { stage: j, depth }),
            _ => Ok(()),
        }
    }

    /// The step matrix M_j, for `j >= 1`.
    pub fn step(&self, j: usize) -> Result<&IntMatrix> {
        if j == 0 {
            return Err(GellError::StageOutOfRange {
                stage: 0,
                depth: self.steps.len(),
            });
        }
        self.check_stage(j)?;
        if j <= self.steps.len() {
            return Ok(&self.steps[j - 1]);
        }
        let tail = self.periodic_tail.as_ref().expect("checked stage");
        Ok(&tail[(j - self.steps.len() - 1) % tail.len()])
    }

    /// |det M_j|.
    pub fn step_degree(&self, j: usize) -> Result<BigInt> {
        Ok(determinant(self.step(j)?)?.abs())
    }

    /// The basis B_j = M_1 ... M_j of Γ_j.
    pub fn basis(&self, j: usize) -> Result<IntMatrix> {
        self.check_stage(j)?;
        let mut b = IntMatrix::identity(self.rank);
        for i in 1..=j {
            b = b.mul(self.step(i)?)?;
        }
        Ok(b)
    }

    pub fn sublattice(&self, j: usize) -> Result<Sublattice> {
        Sublattice::new(self.basis(j)?)
    }

    /// True when no step has |det| >= 2; the action is then not free on a
    /// Cantor set, although every formula remains evaluable.
    pub fn is_degenerate(&self) -> bool {
        self.steps
            .iter()
            .chain(self.periodic_tail.iter().flatten())
            .all(|m| determinant(m).map(|d| d.abs().is_one()).unwrap_or(false))
    }

    /// Steinitz number of the index tower (infinite exponents from the tail).
    pub fn steinitz(&self) -> SupernaturalNumber {
        let dets = |ms: &[IntMatrix]| -> Vec<BigUint> {
            ms.iter()
                .map(|m| determinant(m).expect("square").abs().to_biguint().expect("nonneg"))
                .collect()
        };
        let tail = self.periodic_tail.as_deref().map(dets);
        steinitz(&dets(&self.steps), tail.as_deref())
    }

    /// The stage sublattices Γ_0, ..., Γ_depth.
    pub fn bases(&self, depth: usize) -> Result<Vec<Sublattice>> {
        (0..=depth).map(|j| self.sublattice(j)).collect()
    }
}

/// [Z^d : Γ_j] = ∏_{i<=j} |det M_i|.
pub fn index_at(spec: &OdometerSpec, j: usize) -> Result<BigInt> {
    spec.check_stage(j)?;
    let mut idx = BigInt::one();
    for i in 1..=j {
        idx *= spec.step_degree(i)?;
    }
    Ok(idx)
}

/// det B_j = ∏_{i<=j} det M_i, the index with the orientation sign.
pub fn oriented_index_at(spec: &OdometerSpec, j: usize) -> Result<BigInt> {
    spec.check_stage(j)?;
    let mut idx = BigInt::one();
    for i in 1..=j {
        idx *= determinant(spec.step(i)?)?;
    }
    Ok(idx)
}

/// Invariant factors of Z^d / Γ_j (length d, including trivial factors).
pub fn quotient_structure(spec: &OdometerSpec, j: usize) -> Result<Vec<BigInt>> {
    let b = spec.basis(j)?;
    Ok(smith_normal_form(&b).invariant_factors())
}

/// Builds a spec from explicit stage bases, checking Γ_{j+1} ⊆ Γ_j by solving
/// `B_j X = B_{j+1}` over the integers; the solutions become the step matrices.
///
/// The first basis is taken as the reference lattice Γ_0, so the returned
/// tower is expressed in its coordinates. Errors name the first stage whose
/// basis does not lie in its predecessor.
pub fn validate_tower(bases: &[Sublattice]) -> Result<OdometerSpec> {
    let Some(first) = bases.first() else {
        return Err(GellError::DimensionMismatch("empty tower".into()));
    };
    let rank = first.rank();
    let mut steps = Vec::with_capacity(bases.len() - 1);
    for (stage, pair) in bases.windows(2).enumerate() {
        let (prev, next) = (&pair[0], &pair[1]);
        if next.rank() != rank {
            return Err(GellError::DimensionMismatch(format!(
                "basis at stage {} has rank {}, expected {rank}",
                stage + 1,
                next.rank()
            )));
        }
        let x = prev
            .basis()
            .to_rational()
            .inverse()?
            .mul(&next.basis().to_rational())?
            .to_integer()
            .ok_or_else(|| GellError::NotNested {
                stage: stage + 1,
                reason: "basis columns do not lie in the previous sublattice".into(),
            })?;
        steps.push(x);
    }
    OdometerSpec::new(rank, steps, None)
}

/// A clopen cylinder: a coset of Γ_j in Z^d, stored in canonical Smith coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CylinderSet {
    stage: usize,
    coordinates: Vec<BigInt>,
}

impl CylinderSet {
    /// Canonicalises `representative + Γ_j`: with `U B_j V = D`, coordinate i is
    /// `(U v)_i mod d_i`.
    pub fn new(spec: &OdometerSpec, stage: usize, representative: &[BigInt]) -> Result<Self> {
        if representative.len() != spec.rank() {
            return Err(GellError::DimensionMismatch(format!(
                "representative has length {}, expected {}",
                representative.len(),
                spec.rank()
            )));
        }
        let snf = smith_normal_form(&spec.basis(stage)?);
        let factors = snf.invariant_factors();
        let uv = snf.left.mul_vec(representative)?;
        let coordinates = uv
            .iter()
            .zip(&factors)
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        Ok(CylinderSet { stage, coordinates })
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn coordinates(&self) -> &[BigInt] {
        &self.coordinates
    }
}

/// Every cylinder at stage `j`, in lexicographic order of Smith coordinates.
pub fn enumerate_cylinders(spec: &OdometerSpec, j: usize) -> Result<Vec<CylinderSet>> {
    let factors = quotient_structure(spec, j)?;
    let mut out = vec![Vec::<BigInt>::new()];
    for d in &factors {
        let mut next = Vec::new();
        for prefix in &out {
            let mut c = BigInt::zero();
            while &c < d {
                let mut v = prefix.clone();
                v.push(c.clone());
                next.push(v);
                c += 1;
            }
        }
        out = next;
    }
    Ok(out
        .into_iter()
        .map(|coordinates| CylinderSet { stage: j, coordinates })
        .collect())
}

/// Invariant measure of a cylinder: 1 / [Z^d : Γ_j].
pub fn cylinder_measure(spec: &OdometerSpec, c: &CylinderSet) -> Result<BigRational> {
    let idx = index_at(spec, c.stage())?;
    Ok(BigRational::new(BigInt::one(), idx))
}

/// Subgroup of Q generated by cylinder measures at stages `0..=depth`.
pub fn clopen_measure_group(spec: &OdometerSpec, depth: usize) -> Result<SubgroupOfQ> {
    let mut gens = Vec::with_capacity(depth + 1);
    for j in 0..=depth {
        // one representative cylinder per stage; all cosets share the measure
        let c = CylinderSet::new(spec, j, &vec![BigInt::zero(); spec.rank()])?;
        gens.push(cylinder_measure(spec, &c)?);
    }
    Ok(SubgroupOfQ::generated_by(&gens))
}
