//! Desk-scale simulator and verification suite for generalized quantum
//! singular value transformation (GQSVT) and the hybrid quantum BiCG solver
//! built on it. Every quantum construction is cross-checked against
//! independent classical oracles.

pub mod error;
pub mod poly;
pub mod roots;
pub mod phases;

pub use error::{GqsvtError, Result};
pub use phases::{
    complementary_poly, peel_angles, reconstruct_matrix, reconstruct_poly, solve_phases,
    ComplementaryPair, PhaseFactorSet,
};
pub use poly::{
    eval_unit_circle, laurent_from_chebyshev, monomial_to_chebyshev, poly_max_on_interval,
    shift_to_unit_circle, ChebyshevPoly, LaurentPoly, MonomialPoly, UnitCirclePoly,
};
