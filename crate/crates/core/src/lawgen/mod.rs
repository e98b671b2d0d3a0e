//! Conservation-law generation: conserved vectors from symmetries, multiplier
//! determining systems, the mixed ψ/H pipeline and triviality filtering.

mod ansatz;
mod determining;
mod mixed;
mod noether;
mod trivial;

pub use ansatz::{jet_variables, monomials, multi_indices, Ansatz};
pub use determining::{
    expr_span_equal, multiplier_determining_system, multipliers, DeterminingSystem, MultiplierSet,
    Origin,
};
pub use mixed::{
    equivalence_ratio, mixed_method, trivial_directions, ConservedVector, MixedOptions,
    MixedResult, DEFAULT_THETA_DEGREE,
};
pub use noether::{
    characteristic, formal_lagrangian, ibragimov_vector, noether_identity_residual,
    MAX_LAGRANGIAN_ORDER,
};
pub use trivial::{curl, default_theta, graded_theta, is_trivial, strip_trivial, Triviality};

use crate::calculus::{divergence, euler, PdeSystem, Reducer};
use crate::error::Result;
use crate::expr::Expr;

/// `D_i T^i` reduced modulo the system with radical denominators cleared;
/// zero exactly when `T` is conserved.
pub fn verify(system: &PdeSystem, t: &[Expr]) -> Result<Expr> {
    let div = divergence(t, system.n_indep())?;
    Ok(Reducer::new(system).reduce(&div)?.numerator())
}

/// `δ(Σ ψ^a F_a)/δu^α` reduced modulo the system, per dependent variable.
pub fn self_adjointness_check(system: &PdeSystem, psi: &[Expr]) -> Result<Vec<Expr>> {
    let l = formal_lagrangian(system, psi)?;
    let mut red = Reducer::new(system);
    (0..system.n_dep())
        .map(|alpha| Ok(red.reduce(&euler(&l, alpha))?.numerator()))
        .collect()
}
