//! Exact integer and rational kernels: Smith normal form, determinants,
//! exterior powers, Pfaffians, subgroups of Q and Steinitz numbers.

mod determinant;
mod exterior;
mod matrix;
mod pfaffian;
mod snf;
mod steinitz;
mod subgroup;
mod subset;

pub use determinant::{determinant, rational_determinant};
pub use exterior::exterior_power;
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use pfaffian::{pfaffian, pfaffian_minor};
pub use snf::{smith_normal_form, SmithDecomposition};
pub use steinitz::{factorize, steinitz, Exponent, SupernaturalNumber};
pub use subgroup::{subgroup_generator, SubgroupOfQ};
pub use subset::{all_subsets, k_subsets, subsets_of_parity, Subset, MAX_DIMENSION};

pub type Rational = num_rational::BigRational;
