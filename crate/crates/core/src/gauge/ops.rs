use crate::error::{invalid, Result};
use crate::fieldcfg::{FourierScalar, Point4};
use crate::liealg::{group_element, AlgebraBasis};
use crate::linalg::{trace, CMat, Complex, MatJet, Order, I};

use super::dirac::DiracAlgebra;
use super::fields::{sector_potentials, Connection, ConnectionJet, GaugeConfig, MatterField};
use super::model::{FieldDecl, FieldKind, ModelSpec, Sector};

/// `exp(i g Σ_a α_a(x) T_a)` at one point.
pub fn unitary_at(basis: &AlgebraBasis, params: &[FourierScalar], x: &Point4) -> Result<CMat> {
    let values: Vec<f64> = params.iter().map(|p| p.eval(x).re).collect();
    group_element(basis, &values)
}

/// `W_μ = −i Σ_a T_a W_{aμ}(x)` for one sector of a configuration.
pub fn w_matrix_at(model: &ModelSpec, config: &GaugeConfig, sector: Sector, mu: usize, x: &Point4) -> Result<CMat> {
    check_mu(mu)?;
    let w = sector_potentials(model, sector, config.sector(sector), x, Order::Value);
    Ok(w[mu].value().clone())
}

fn check_mu(mu: usize) -> Result<()> {
    if mu > 3 {
        return Err(invalid(format!("Lorentz index {mu} out of range 0..=3")));
    }
    Ok(())
}

/// `D_μΨ = ∂_μΨ + g_U q_U W^U_μ Ψ + g_V q_V Ψ W^V_μ` on jets, where `q` is 1
/// for SU(n) factors and `Y/2` for U(1). Terms for sectors the field's rep
/// does not touch are dropped. The result is one order below `psi`.
pub fn covariant_derivative(
    model: &ModelSpec,
    decl: &FieldDecl,
    psi: &[MatJet],
    conn: &ConnectionJet,
    mu: usize,
) -> Result<Vec<MatJet>> {
    model.validate_field(decl)?;
    let left = if decl.rep.acts_on(Sector::U) {
        Some(model.coupling(Sector::U) * model.charge_factor(Sector::U, decl)?)
    } else {
        None
    };
    let right = if decl.rep.acts_on(Sector::V) {
        Some(model.coupling(Sector::V) * model.charge_factor(Sector::V, decl)?)
    } else {
        None
    };
    Ok(psi
        .iter()
        .map(|comp| {
            let mut out = comp.partial(mu);
            if let Some(gq) = left {
                out = &out + &(&conn.u[mu] * comp).scale_real(gq);
            }
            if let Some(gq) = right {
                out = &out + &(comp * &conn.v[mu]).scale_real(gq);
            }
            out
        })
        .collect())
}

/// Pointwise covariant derivative of a matter field, one matrix per spinor component.
pub fn covariant_derivative_at(
    model: &ModelSpec,
    field: &dyn MatterField,
    conn: &dyn Connection,
    mu: usize,
    x: &Point4,
) -> Result<Vec<CMat>> {
    check_mu(mu)?;
    let psi = field.jet(x, Order::First)?;
    let w = conn.jet(x, Order::Value)?;
    Ok(covariant_derivative(model, field.decl(), &psi, &w, mu)?
        .into_iter()
        .map(MatJet::into_value)
        .collect())
}

/// `F_μν = ∂_μW_ν − ∂_νW_μ + s g [W_μ, W_ν]` with an explicit commutator sign `s`.
pub fn field_strength_signed(
    model: &ModelSpec,
    conn: &ConnectionJet,
    sector: Sector,
    mu: usize,
    nu: usize,
    sign: f64,
) -> CMat {
    let w = conn.sector(sector);
    let curl = w[nu].d(mu) - w[mu].d(nu);
    if model.is_abelian(sector) {
        return curl;
    }
    let comm = w[mu].value() * w[nu].value() - w[nu].value() * w[mu].value();
    curl + comm * Complex::new(sign * model.coupling(sector), 0.0)
}

/// Field strength with the model's commutator sign for `sector`.
pub fn field_strength(model: &ModelSpec, conn: &ConnectionJet, sector: Sector, mu: usize, nu: usize) -> CMat {
    field_strength_signed(model, conn, sector, mu, nu, model.commutator_sign(sector))
}

pub fn field_strength_at(
    model: &ModelSpec,
    conn: &dyn Connection,
    sector: Sector,
    mu: usize,
    nu: usize,
    x: &Point4,
) -> Result<CMat> {
    check_mu(mu)?;
    check_mu(nu)?;
    Ok(field_strength(model, &conn.jet(x, Order::First)?, sector, mu, nu))
}

/// `i Σ_μ Σ_{s,s′} (γ⁰γ^μ)_{ss′} Tr[Ψ_s† (D_μΨ)_{s′}]`, with the bar side
/// supplied separately so negative controls can mismatch it.
pub(crate) fn fermion_density(dirac: &DiracAlgebra, bar: &[CMat], dpsi: &[Vec<MatJet>]) -> Complex {
    let mut acc = Complex::ZERO;
    for (mu, d_mu) in dpsi.iter().enumerate() {
        let m = dirac.bar_gamma(mu);
        for (s, b) in bar.iter().enumerate() {
            for (t, d) in d_mu.iter().enumerate() {
                let coef = m[(s, t)];
                if coef.norm() == 0.0 {
                    continue;
                }
                acc += coef * b.iter().zip(d.value().iter()).map(|(x, y)| x.conj() * y).sum::<Complex>();
            }
        }
    }
    acc * I
}

fn all_directions(
    model: &ModelSpec,
    decl: &FieldDecl,
    psi: &[MatJet],
    conn: &ConnectionJet,
) -> Result<Vec<Vec<MatJet>>> {
    (0..4).map(|mu| covariant_derivative(model, decl, psi, conn, mu)).collect()
}

/// `L₁ = i Tr[Ψ̄ γ^μ D_μ Ψ]`, complex in general.
pub fn lagrangian_fermion_at(
    model: &ModelSpec,
    field: &dyn MatterField,
    conn: &dyn Connection,
    x: &Point4,
    dirac: &DiracAlgebra,
) -> Result<Complex> {
    let decl = field.decl();
    if decl.kind != FieldKind::Fermion {
        return Err(invalid(format!("`{}` is not a fermion", decl.name)));
    }
    let psi = field.jet(x, Order::First)?;
    let w = conn.jet(x, Order::Value)?;
    let bar: Vec<CMat> = psi.iter().map(|p| p.value().clone()).collect();
    Ok(fermion_density(dirac, &bar, &all_directions(model, decl, &psi, &w)?))
}

fn raised(metric: &[f64; 4], mu: usize, nu: usize) -> f64 {
    metric[mu] * metric[nu]
}

/// `½ Σ_{μν} Tr[F†_μν F^μν]` from a first-order connection jet.
pub(crate) fn gauge_density(model: &ModelSpec, conn: &ConnectionJet, sector: Sector, metric: &[f64; 4]) -> f64 {
    let mut acc = Complex::ZERO;
    for mu in 0..4 {
        for nu in 0..4 {
            if mu == nu {
                continue;
            }
            let f = field_strength(model, conn, sector, mu, nu);
            acc += trace(&(f.adjoint() * &f)) * raised(metric, mu, nu);
        }
    }
    0.5 * acc.re
}

/// `½ Tr[F†_μν F^μν]` for one sector; real and non-negative termwise.
pub fn lagrangian_gauge_at(
    model: &ModelSpec,
    conn: &dyn Connection,
    sector: Sector,
    x: &Point4,
    metric: &[f64; 4],
) -> Result<f64> {
    Ok(gauge_density(model, &conn.jet(x, Order::First)?, sector, metric))
}

/// The unconjugated form `½ Tr[F_μν F^μν]`, equal to minus the `F†F` form
/// for anti-Hermitian `F`.
pub fn lagrangian_gauge_plain_at(
    model: &ModelSpec,
    conn: &dyn Connection,
    sector: Sector,
    x: &Point4,
    metric: &[f64; 4],
) -> Result<Complex> {
    let jet = conn.jet(x, Order::First)?;
    let mut acc = Complex::ZERO;
    for mu in 0..4 {
        for nu in 0..4 {
            if mu != nu {
                let f = field_strength(model, &jet, sector, mu, nu);
                acc += trace(&(&f * &f)) * raised(metric, mu, nu);
            }
        }
    }
    Ok(acc * 0.5)
}

fn scalar_density(
    model: &ModelSpec,
    decl: &FieldDecl,
    phi: &[MatJet],
    conn: &ConnectionJet,
    metric: &[f64; 4],
) -> Result<f64> {
    let mut acc = Complex::ZERO;
    for (mu, d) in all_directions(model, decl, phi, conn)?.iter().enumerate() {
        for comp in d {
            let v = comp.value();
            acc += trace(&(v.adjoint() * v)) * metric[mu];
        }
    }
    Ok(acc.re)
}

/// `Tr[(D_μφ)† D^μφ]`.
pub fn lagrangian_scalar_at(
    model: &ModelSpec,
    field: &dyn MatterField,
    conn: &dyn Connection,
    x: &Point4,
    metric: &[f64; 4],
) -> Result<f64> {
    let decl = field.decl();
    if decl.kind != FieldKind::Scalar {
        return Err(invalid(format!("`{}` is not a scalar", decl.name)));
    }
    let phi = field.jet(x, Order::First)?;
    scalar_density(model, decl, &phi, &conn.jet(x, Order::Value)?, metric)
}

/// Pointwise pieces of the total kinetic density.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LagrangianTerms {
    pub fermion: Complex,
    pub gauge_u: f64,
    pub gauge_v: f64,
    pub scalar: f64,
}

impl LagrangianTerms {
    /// `L₁ − ½Tr[F^V†F^V] − ½Tr[F^U†F^U] + Tr[(Dφ)†Dφ]`.
    pub fn total(&self) -> Complex {
        self.fermion - self.gauge_v - self.gauge_u + self.scalar
    }
}

pub fn lagrangian_terms_at(
    model: &ModelSpec,
    fields: &[&dyn MatterField],
    conn: &dyn Connection,
    x: &Point4,
    dirac: &DiracAlgebra,
) -> Result<LagrangianTerms> {
    let w = conn.jet(x, Order::First)?;
    let mut terms = LagrangianTerms {
        gauge_u: gauge_density(model, &w, Sector::U, &dirac.metric),
        gauge_v: gauge_density(model, &w, Sector::V, &dirac.metric),
        ..Default::default()
    };
    for field in fields {
        let decl = field.decl();
        let psi = field.jet(x, Order::First)?;
        match decl.kind {
            FieldKind::Fermion => {
                let bar: Vec<CMat> = psi.iter().map(|p| p.value().clone()).collect();
                terms.fermion += fermion_density(dirac, &bar, &all_directions(model, decl, &psi, &w)?);
            }
            FieldKind::Scalar => terms.scalar += scalar_density(model, decl, &psi, &w, &dirac.metric)?,
        }
    }
    Ok(terms)
}

/// Total kinetic density at `x`.
pub fn lagrangian_total_at(
    model: &ModelSpec,
    fields: &[&dyn MatterField],
    conn: &dyn Connection,
    x: &Point4,
    dirac: &DiracAlgebra,
) -> Result<Complex> {
    Ok(lagrangian_terms_at(model, fields, conn, x, dirac)?.total())
}
