//! Transformation laws, covariant derivatives, field strengths and kinetic
//! Lagrangian densities for a generic SU(n)_U ⊗ SU(m)_V model.
//!
//! Conventions (all recorded in every report's sign ledger):
//! - `D_μΨ = ∂_μΨ + g_U W^U_μ Ψ + g_V Ψ W^V_μ` with `W_μ = −i T_a W_{aμ}`.
//! - `Ψ → U Ψ V`, `U = exp(i g_U α_a T_a)`, `V = exp(i g_V β_b T_b)`.
//! - The right-acting field strength carries `−g_V [W_μ, W_ν]`.
//! - Metric `diag(+, −, −, −)`, Dirac basis for the γ matrices.

mod dirac;
mod fields;
mod model;
mod ops;

pub use dirac::DiracAlgebra;
pub use fields::{
    ConfigConnection, Connection, ConnectionJet, FourierMatter, GaugeConfig, MatterField, TransformSpec,
    TransformedConnection, TransformedMatter,
};
pub use model::{Chirality, FieldDecl, FieldKind, ModelSpec, Rep, Sector, ADOPTED_V_COMMUTATOR_SIGN};
pub use ops::{
    covariant_derivative, covariant_derivative_at, field_strength, field_strength_at, field_strength_signed,
    lagrangian_fermion_at, lagrangian_gauge_at, lagrangian_gauge_plain_at, lagrangian_scalar_at,
    lagrangian_terms_at, lagrangian_total_at, unitary_at, w_matrix_at, LagrangianTerms,
};
pub(crate) use ops::fermion_density;

/// Fermion transformed pointwise by `U(x) Ψ(x) V(x)`.
pub fn transform_fermion<'a>(
    model: &'a ModelSpec,
    field: &'a dyn MatterField,
    transform: &'a TransformSpec,
) -> TransformedMatter<'a> {
    TransformedMatter::new(model, field, transform)
}

/// `W^U′_μ = (1/g_U) U ∂_μU† + U W^U_μ U†`; the V potentials pass through.
pub fn transform_gauge_u<'a>(
    model: &'a ModelSpec,
    conn: &'a dyn Connection,
    transform: &'a TransformSpec,
) -> TransformedConnection<'a> {
    TransformedConnection::new(model, conn, transform).only(Sector::U)
}

/// `W^V′_μ = (1/g_V) (∂_μV†) V + V† W^V_μ V`; the U potentials pass through.
pub fn transform_gauge_v<'a>(
    model: &'a ModelSpec,
    conn: &'a dyn Connection,
    transform: &'a TransformSpec,
) -> TransformedConnection<'a> {
    TransformedConnection::new(model, conn, transform).only(Sector::V)
}
