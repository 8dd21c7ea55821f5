//! Trace pairings through the topological index formula, gap-label groups by
//! two independent routes, and assembly of the geometric Elliott invariant.
//!
//! The untwisted trace of a class at stage j reads its top-degree coefficient
//! and divides by the lattice index. The twisted trace weights the forms
//! `dx_I` (anchored on the base torus at stage 0 and pulled back) by the
//! Pfaffians `Pf(Θ_I)` before wedging with the class.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{GellError, Result};
use crate::exact_algebra::{
    smith_normal_form, subsets_of_parity, IntMatrix, SubgroupOfQ, Subset, SupernaturalNumber,
};
use crate::ktheory::{
    kgroup_report, order_unit, push_to_stage, transfer_class, ExteriorClass, KGroupPresentation,
    Parity,
};
use crate::lattice::{
    clopen_measure_group, cylinder_measure, index_at, oriented_index_at, CylinderSet, OdometerSpec,
};

pub use crate::twist::{TraceValue, Twist};

/// Image of K_0 under the trace.
#[derive(Clone, PartialEq, Eq)]
pub enum GapLabelGroup {
    Exact {
        group: SubgroupOfQ,
        /// Steinitz number of the full tower when it has a periodic tail.
        completion: Option<SupernaturalNumber>,
    },
    /// `constant + theta·θ` for the symbolic plane twist.
    Symbolic {
        constant: SubgroupOfQ,
        theta: SubgroupOfQ,
    },
}

impl GapLabelGroup {
    /// Group generated by trace values. Symbolic generators must each be
    /// a pure constant or a pure multiple of θ so the span splits.
    pub fn generated_by(
        values: &[TraceValue],
        completion: Option<SupernaturalNumber>,
    ) -> Result<GapLabelGroup> {
        if values.iter().all(|v| !v.is_symbolic()) {
            let gens: Vec<BigRational> = values.iter().map(|v| v.constant().clone()).collect();
            return Ok(GapLabelGroup::Exact {
                group: SubgroupOfQ::generated_by(&gens),
                completion,
            });
        }
        if let Some(v) = values
            .iter()
            .find(|v| !v.constant().is_zero() && !v.theta_coefficient().is_zero())
        {
            return Err(GellError::Unsupported(format!(
                "symbolic trace value {v} mixes 1 and θ; the label lattice does not split"
            )));
        }
        let constants: Vec<BigRational> = values.iter().map(|v| v.constant().clone()).collect();
        let thetas: Vec<BigRational> = values.iter().map(TraceValue::theta_coefficient).collect();
        Ok(GapLabelGroup::Symbolic {
            constant: SubgroupOfQ::generated_by(&constants),
            theta: SubgroupOfQ::generated_by(&thetas),
        })
    }

    pub fn exact_group(&self) -> Option<&SubgroupOfQ> {
        match self {
            GapLabelGroup::Exact { group, .. } => Some(group),
            GapLabelGroup::Symbolic { .. } => None,
        }
    }

    pub fn contains(&self, v: &TraceValue) -> bool {
        match self {
            GapLabelGroup::Exact { group, .. } => v.as_exact().is_some_and(|x| group.contains(x)),
            GapLabelGroup::Symbolic { constant, theta } => {
                constant.contains(v.constant()) && theta.contains(&v.theta_coefficient())
            }
        }
    }
}

impl fmt::Display for GapLabelGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapLabelGroup::Exact { group, completion } => {
                write!(f, "{group}")?;
                if let Some(c) = completion {
                    write!(f, " [Steinitz {c}]")?;
                }
                Ok(())
            }
            GapLabelGroup::Symbolic { constant, theta } => write!(f, "{constant} + {theta}·θ"),
        }
    }
}

impl fmt::Debug for GapLabelGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn inverse_index(spec: &OdometerSpec, j: usize) -> Result<BigRational> {
    Ok(BigRational::new(BigInt::one(), index_at(spec, j)?))
}

/// `1/det B_j`: the covering Γ_j-torus → base torus has signed degree det B_j.
fn inverse_oriented_index(spec: &OdometerSpec, j: usize) -> Result<BigRational> {
    Ok(BigRational::new(BigInt::one(), oriented_index_at(spec, j)?))
}

/// Top-degree coefficient over the oriented lattice index `det B_j`.
pub fn trace_untwisted(spec: &OdometerSpec, x: &ExteriorClass) -> Result<TraceValue> {
    if x.spec().rank() != spec.rank() {
        return Err(GellError::SpecMismatch);
    }
    let c = BigRational::from_integer(x.top_coefficient());
    Ok(TraceValue::Exact(c * inverse_oriented_index(spec, x.stage())?))
}

/// `Σ_I Pf(Θ_I) · top(pullback(e_I) ∧ x) / det B_j` over even I.
pub fn trace_twisted(spec: &Arc<OdometerSpec>, twist: &Twist, x: &ExteriorClass) -> Result<TraceValue> {
    let d = spec.rank();
    if twist.dimension() != d {
        return Err(GellError::DimensionMismatch(format!(
            "twist has dimension {}, spec has rank {d}",
            twist.dimension()
        )));
    }
    if x.spec().rank() != d {
        return Err(GellError::SpecMismatch);
    }
    let full = Subset::full(d);
    let mut total = if twist.is_symbolic() {
        TraceValue::symbolic(BigRational::zero(), BigRational::zero())
    } else {
        TraceValue::zero()
    };
    for (subset, pf) in twist.profile()? {
        if pf.is_zero() {
            continue;
        }
        let form = push_to_stage(&ExteriorClass::basis(spec.clone(), 0, subset)?, x.stage())?;
        let mut top = BigInt::zero();
        for (j_set, a) in form.coefficients() {
            let s_set = j_set.complement(d);
            let b = x.coefficient(s_set);
            if b.is_zero() {
                continue;
            }
            let sign = j_set.wedge_sign(s_set).expect("complements are disjoint");
            debug_assert_eq!(j_set.union(s_set), full);
            top += a * b * BigInt::from(sign);
        }
        if !top.is_zero() {
            total = total + pf.scale(&BigRational::from_integer(top));
        }
    }
    Ok(total.scale(&inverse_oriented_index(spec, x.stage())?))
}

fn completion(spec: &OdometerSpec) -> Option<SupernaturalNumber> {
    spec.periodic_tail().map(|_| spec.steinitz())
}

/// Generators of the label group: every basis class of the parity of d at
/// stages `0..=depth`.
fn label_generators(spec: &Arc<OdometerSpec>, depth: usize) -> Result<Vec<ExteriorClass>> {
    spec.check_stage(depth)?;
    let parity = spec.rank() % 2;
    let mut out = Vec::new();
    for j in 0..=depth {
        for s in subsets_of_parity(spec.rank(), parity) {
            out.push(ExteriorClass::basis(spec.clone(), j, s)?);
        }
    }
    Ok(out)
}

/// Trace image of K_0 up to `depth`, computed from K-theory classes.
pub fn gap_label_group(spec: &Arc<OdometerSpec>, twist: Option<&Twist>, depth: usize) -> Result<GapLabelGroup> {
    let mut values = vec![match twist {
        Some(t) => trace_twisted(spec, t, &order_unit(spec))?,
        None => trace_untwisted(spec, &order_unit(spec))?,
    }];
    for x in label_generators(spec, depth)? {
        values.push(match twist {
            Some(t) => trace_twisted(spec, t, &x)?,
            None => trace_untwisted(spec, &x)?,
        });
    }
    GapLabelGroup::generated_by(&values, completion(spec))
}

/// The same group, stage by stage, from the Pfaffian profile of the twist
/// restricted to each sublattice: `(1/[Z^d:Γ_j]) · ⟨Pf((B_jᵀΘB_j)_I)⟩`.
pub fn twisted_label_group_via_restriction(
    spec: &OdometerSpec,
    twist: &Twist,
    depth: usize,
) -> Result<GapLabelGroup> {
    if twist.dimension() != spec.rank() {
        return Err(GellError::DimensionMismatch(format!(
            "twist has dimension {}, spec has rank {}",
            twist.dimension(),
            spec.rank()
        )));
    }
    spec.check_stage(depth)?;
    let mut values = Vec::new();
    for j in 0..=depth {
        let scale = inverse_index(spec, j)?;
        let restricted = twist.restricted(&spec.basis(j)?)?;
        for v in restricted.profile()?.into_values() {
            values.push(v.scale(&scale));
        }
    }
    GapLabelGroup::generated_by(&values, completion(spec))
}

/// Both sides of the gap-labelling equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapLabellingReport {
    pub depth: usize,
    /// Trace image of K_0 (K-theory route).
    pub lhs: GapLabelGroup,
    /// Subgroup generated by clopen measures (cylinder route).
    pub rhs: SubgroupOfQ,
    pub equal: bool,
}

/// Computes the trace image of K_0 and the clopen measure group independently
/// and compares them.
pub fn verify_gap_labelling(spec: &Arc<OdometerSpec>, depth: usize) -> Result<GapLabellingReport> {
    let (lhs, rhs) = std::thread::scope(|scope| {
        let k_route = scope.spawn(|| gap_label_group(spec, None, depth));
        let rhs = clopen_measure_group(spec, depth);
        (k_route.join().expect("trace route panicked"), rhs)
    });
    let (lhs, rhs) = (lhs?, rhs?);
    let equal = lhs.exact_group() == Some(&rhs);
    Ok(GapLabellingReport {
        depth,
        lhs,
        rhs,
        equal,
    })
}

/// A finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitelyGeneratedAbelian {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FinitelyGeneratedAbelian {
    pub fn is_integers(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    /// Cokernel of an integer matrix, read off its Smith form.
    pub fn cokernel(m: &IntMatrix) -> Self {
        let factors = smith_normal_form(m).invariant_factors();
        let nonzero = factors.iter().filter(|f| !f.is_zero()).count();
        FinitelyGeneratedAbelian {
            free_rank: m.rows() - nonzero,
            torsion: factors.into_iter().filter(|f| !f.is_zero() && !f.is_one()).collect(),
        }
    }
}

impl fmt::Display for FinitelyGeneratedAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Coinvariants of the cyclic shift on `Z^q`, `q = [Z : Γ_j]`, for d = 1.
pub fn coinvariants_rank_d1(spec: &OdometerSpec, j: usize) -> Result<FinitelyGeneratedAbelian> {
    if spec.rank() != 1 {
        return Err(GellError::Unsupported(format!(
            "coinvariants are computed for d = 1 only, got d = {}",
            spec.rank()
        )));
    }
    let q = usize::try_from(index_at(spec, j)?)
        .map_err(|_| GellError::Unsupported("quotient too large".into()))?;
    Ok(coinvariants_of_cyclic_shift(q))
}

/// Cokernel of `id - shift` on `Z^q`.
pub fn coinvariants_of_cyclic_shift(q: usize) -> FinitelyGeneratedAbelian {
    let m = IntMatrix::from_fn(q, q, |i, k| {
        let shift = if k == (i + 1) % q { 1 } else { 0 };
        let id = if i == k { 1 } else { 0 };
        BigInt::from(id - shift)
    });
    FinitelyGeneratedAbelian::cokernel(&m)
}

/// One row of the pairing table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingEntry {
    pub stage: usize,
    pub subset: Subset,
    pub untwisted: TraceValue,
    pub twisted: Option<TraceValue>,
}

/// Transfer of the stage-j cylinders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferEntry {
    pub stage: usize,
    pub cylinders: BigInt,
    pub measure: BigRational,
    pub trace: TraceValue,
}

/// The assembled geometric Elliott invariant at a truncation depth.
#[derive(Clone, Debug)]
pub struct Gell {
    pub spec: Arc<OdometerSpec>,
    pub twist: Option<Twist>,
    pub depth: usize,
    pub degenerate: bool,
    pub steinitz: SupernaturalNumber,
    pub k_even: KGroupPresentation,
    pub k_odd: KGroupPresentation,
    pub order_unit: ExteriorClass,
    pub order_unit_trace: TraceValue,
    pub order_unit_twisted_trace: Option<TraceValue>,
    pub transfer: Vec<TransferEntry>,
    pub pairing: Vec<PairingEntry>,
    pub gap_labelling: GapLabellingReport,
    pub twisted_route_a: Option<GapLabelGroup>,
    pub twisted_route_b: Option<GapLabelGroup>,
}

impl Gell {
    /// Every internal cross-check holds: untwisted equality and, with a
    /// twist, agreement of the two routes.
    pub fn consistent(&self) -> bool {
        self.gap_labelling.equal && self.twisted_routes_agree().unwrap_or(true)
    }

    pub fn twisted_routes_agree(&self) -> Option<bool> {
        match (&self.twisted_route_a, &self.twisted_route_b) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        }
    }
}

/// The trace simplex of a uniquely ergodic odometer.
pub const TRACE_SIMPLEX: &str = "single point (uniquely ergodic)";

pub fn compute_gell(spec: &Arc<OdometerSpec>, twist: Option<&Twist>, depth: usize) -> Result<Gell> {
    spec.check_stage(depth)?;
    let d = spec.rank();
    if let Some(t) = twist {
        if t.dimension() != d {
            return Err(GellError::DimensionMismatch(format!(
                "twist has dimension {}, spec has rank {d}",
                t.dimension()
            )));
        }
    }
    let unit = order_unit(spec);
    let order_unit_trace = trace_untwisted(spec, &unit)?;
    let order_unit_twisted_trace = twist.map(|t| trace_twisted(spec, t, &unit)).transpose()?;

    let mut transfer = Vec::with_capacity(depth + 1);
    for j in 0..=depth {
        let c = CylinderSet::new(spec, j, &vec![BigInt::zero(); d])?;
        transfer.push(TransferEntry {
            stage: j,
            cylinders: index_at(spec, j)?,
            measure: cylinder_measure(spec, &c)?,
            trace: trace_untwisted(spec, &transfer_class(spec, &c)?)?,
        });
    }

    let mut pairing = Vec::new();
    for x in label_generators(spec, depth)? {
        pairing.push(PairingEntry {
            stage: x.stage(),
            subset: *x.coefficients().keys().next().expect("basis class"),
            untwisted: trace_untwisted(spec, &x)?,
            twisted: twist.map(|t| trace_twisted(spec, t, &x)).transpose()?,
        });
    }

    let (twisted_route_a, twisted_route_b) = match twist {
        Some(t) => (
            Some(gap_label_group(spec, Some(t), depth)?),
            Some(twisted_label_group_via_restriction(spec, t, depth)?),
        ),
        None => (None, None),
    };

    Ok(Gell {
        spec: spec.clone(),
        twist: twist.cloned(),
        depth,
        degenerate: spec.is_degenerate(),
        steinitz: spec.steinitz(),
        k_even: kgroup_report(spec, Parity::Even, depth)?,
        k_odd: kgroup_report(spec, Parity::Odd, depth)?,
        order_unit: unit,
        order_unit_trace,
        order_unit_twisted_trace,
        transfer,
        pairing,
        gap_labelling: verify_gap_labelling(spec, depth)?,
        twisted_route_a,
        twisted_route_b,
    })
}
