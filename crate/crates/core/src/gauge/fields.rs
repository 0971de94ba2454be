//! Gauge potentials, gauge parameters and matter fields as pointwise jet
//! evaluators. Transformed objects are closures over the original Fourier
//! data rather than new Fourier series, since products of exponentials are
//! not band-limited.

use crate::error::{invalid, Result};
use crate::fieldcfg::{random_field, ComponentField, FourierScalar, Point4};
use crate::liealg::group_element_jet;
use crate::linalg::{c, CMat, MatJet, Order, I};

use super::dirac::DiracAlgebra;
use super::model::{Chirality, FieldDecl, FieldKind, ModelSpec, Sector};

/// Component potentials `W_{aμ}(x)` for both sectors, shape `[a, μ]`, real.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeConfig {
    pub wu: ComponentField,
    pub wv: ComponentField,
}

impl GaugeConfig {
    pub fn new(model: &ModelSpec, wu: ComponentField, wv: ComponentField) -> Result<Self> {
        for (s, w) in [(Sector::U, &wu), (Sector::V, &wv)] {
            let want = [model.potential_count(s), 4];
            if w.shape() != want {
                return Err(invalid(format!(
                    "sector {s} potential has shape {:?}, expected {want:?}",
                    w.shape()
                )));
            }
            if !w.is_real() {
                return Err(invalid(format!("sector {s} potential must be real")));
            }
        }
        Ok(Self { wu, wv })
    }

    pub fn zero(model: &ModelSpec) -> Self {
        Self {
            wu: ComponentField::zeros(vec![model.potential_count(Sector::U), 4], true),
            wv: ComponentField::zeros(vec![model.potential_count(Sector::V), 4], true),
        }
    }

    pub fn random(model: &ModelSpec, seed: u64, max_mode: u32, amplitude: f64) -> Result<Self> {
        let wu = random_field(seed, &[model.potential_count(Sector::U), 4], max_mode, amplitude, true)?;
        let wv = random_field(
            seed.wrapping_add(0x9e37_79b9),
            &[model.potential_count(Sector::V), 4],
            max_mode,
            amplitude,
            true,
        )?;
        Self::new(model, wu, wv)
    }

    pub fn sector(&self, sector: Sector) -> &ComponentField {
        match sector {
            Sector::U => &self.wu,
            Sector::V => &self.wv,
        }
    }

    pub fn map(&self, f: impl Fn(&FourierScalar) -> FourierScalar) -> Self {
        Self {
            wu: self.wu.map_entries(&f),
            wv: self.wv.map_entries(&f),
        }
    }
}

/// Spacetime-dependent gauge parameters: `α_a(x)` for U, `β_b(x)` for V.
/// Group elements are `exp(i g Σ_a α_a T_a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformSpec {
    pub alpha: Vec<FourierScalar>,
    pub beta: Vec<FourierScalar>,
}

impl TransformSpec {
    pub fn new(model: &ModelSpec, alpha: Vec<FourierScalar>, beta: Vec<FourierScalar>) -> Result<Self> {
        let t = Self { alpha, beta };
        t.check(model)?;
        Ok(t)
    }

    pub fn identity(model: &ModelSpec) -> Self {
        Self {
            alpha: vec![FourierScalar::zero(true); model.potential_count(Sector::U)],
            beta: vec![FourierScalar::zero(true); model.potential_count(Sector::V)],
        }
    }

    pub fn random(model: &ModelSpec, seed: u64, max_mode: u32, amplitude: f64) -> Result<Self> {
        let a = random_field(seed, &[model.potential_count(Sector::U)], max_mode, amplitude, true)?;
        let b = random_field(
            seed.wrapping_add(0x7f4a_7c15),
            &[model.potential_count(Sector::V)],
            max_mode,
            amplitude,
            true,
        )?;
        Self::new(model, a.entries().to_vec(), b.entries().to_vec())
    }

    pub fn check(&self, model: &ModelSpec) -> Result<()> {
        for s in Sector::BOTH {
            let p = self.params(s);
            if p.len() != model.potential_count(s) {
                return Err(invalid(format!(
                    "sector {s} needs {} gauge parameters, got {}",
                    model.potential_count(s),
                    p.len()
                )));
            }
            if !p.iter().all(FourierScalar::is_real) {
                return Err(invalid(format!("sector {s} gauge parameters must be real")));
            }
        }
        Ok(())
    }

    pub fn params(&self, sector: Sector) -> &[FourierScalar] {
        match sector {
            Sector::U => &self.alpha,
            Sector::V => &self.beta,
        }
    }

    /// Constant (global) part of the transformation.
    pub fn global_part(&self) -> Self {
        self.map(FourierScalar::zero_mode_only)
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map(|f| f.scaled(s))
    }

    pub fn map(&self, f: impl Fn(&FourierScalar) -> FourierScalar) -> Self {
        Self {
            alpha: self.alpha.iter().map(&f).collect(),
            beta: self.beta.iter().map(&f).collect(),
        }
    }

    /// Group element jet acting on `decl` (or on the potentials when `None`).
    pub fn group_jet(
        &self,
        model: &ModelSpec,
        sector: Sector,
        decl: Option<&FieldDecl>,
        x: &Point4,
        order: Order,
    ) -> Result<MatJet> {
        let basis = match decl {
            Some(d) => model.field_basis(sector, d)?,
            None => model.potential_basis(sector),
        };
        let params: Vec<_> = self.params(sector).iter().map(|p| p.eval_jet(x, order)).collect();
        group_element_jet(&basis, &params, order)
    }
}

/// Anti-Hermitian potential matrices `W_μ` of both sectors at one point,
/// indexed by μ. U(1) potentials use the unit generator, `W_μ = −i B_μ`.
#[derive(Clone, Debug)]
pub struct ConnectionJet {
    pub u: Vec<MatJet>,
    pub v: Vec<MatJet>,
}

impl ConnectionJet {
    pub fn sector(&self, sector: Sector) -> &[MatJet] {
        match sector {
            Sector::U => &self.u,
            Sector::V => &self.v,
        }
    }

    pub fn order(&self) -> Order {
        self.u.iter().chain(&self.v).map(MatJet::order).min().unwrap_or(Order::Second)
    }
}

/// Anything that yields gauge potentials at a point.
pub trait Connection: Send + Sync {
    fn jet(&self, x: &Point4, order: Order) -> Result<ConnectionJet>;
}

/// Potentials assembled directly from a [`GaugeConfig`].
pub struct ConfigConnection<'a> {
    pub model: &'a ModelSpec,
    pub config: &'a GaugeConfig,
}

impl<'a> ConfigConnection<'a> {
    pub fn new(model: &'a ModelSpec, config: &'a GaugeConfig) -> Self {
        Self { model, config }
    }
}

pub(crate) fn sector_potentials(
    model: &ModelSpec,
    sector: Sector,
    field: &ComponentField,
    x: &Point4,
    order: Order,
) -> Vec<MatJet> {
    let gens = model.potential_generators(sector);
    let jets = field.eval_jets(x, order);
    let count = gens.len();
    (0..4)
        .map(|mu| {
            // shape [a, mu], row-major
            let coeffs: Vec<_> = (0..count).map(|a| jets[a * 4 + mu]).collect();
            MatJet::lincomb(&coeffs, &gens, -I, order)
        })
        .collect()
}

impl Connection for ConfigConnection<'_> {
    fn jet(&self, x: &Point4, order: Order) -> Result<ConnectionJet> {
        Ok(ConnectionJet {
            u: sector_potentials(self.model, Sector::U, &self.config.wu, x, order),
            v: sector_potentials(self.model, Sector::V, &self.config.wv, x, order),
        })
    }
}

/// Gauge-transformed potentials:
/// `W^U′ = (1/g_U) U ∂U† + U W^U U†`, `W^V′ = (1/g_V) (∂V†) V + V† W^V V`.
pub struct TransformedConnection<'a> {
    model: &'a ModelSpec,
    inner: &'a dyn Connection,
    transform: &'a TransformSpec,
    sectors: [bool; 2],
}

impl<'a> TransformedConnection<'a> {
    pub fn new(model: &'a ModelSpec, inner: &'a dyn Connection, transform: &'a TransformSpec) -> Self {
        Self {
            model,
            inner,
            transform,
            sectors: [true, true],
        }
    }

    /// Transforms only `sector`, leaving the other untouched.
    pub fn only(mut self, sector: Sector) -> Self {
        self.sectors = [sector == Sector::U, sector == Sector::V];
        self
    }
}

impl Connection for TransformedConnection<'_> {
    fn jet(&self, x: &Point4, order: Order) -> Result<ConnectionJet> {
        let mut conn = self.inner.jet(x, order)?;
        let group_order = order
            .raise()
            .ok_or_else(|| invalid("transformed potentials are available up to first order"))?;
        for (k, sector) in Sector::BOTH.into_iter().enumerate() {
            if !self.sectors[k] {
                continue;
            }
            let g = self.transform.group_jet(self.model, sector, None, x, group_order)?;
            let gd = g.adjoint();
            let inv_coupling = 1.0 / self.model.coupling(sector);
            let w = match sector {
                Sector::U => &mut conn.u,
                Sector::V => &mut conn.v,
            };
            for (mu, wmu) in w.iter_mut().enumerate() {
                *wmu = match sector {
                    Sector::U => {
                        let inhom = (&g * &gd.partial(mu)).scale_real(inv_coupling);
                        &inhom + &(&(&g * wmu) * &gd)
                    }
                    Sector::V => {
                        let inhom = (&gd.partial(mu) * &g).scale_real(inv_coupling);
                        &inhom + &(&(&gd * wmu) * &g)
                    }
                };
            }
        }
        Ok(conn)
    }
}

/// A matter field: spinor components (4 for fermions, 1 for scalars), each
/// an internal `rows × cols` matrix.
pub trait MatterField: Send + Sync {
    fn decl(&self) -> &FieldDecl;
    fn jet(&self, x: &Point4, order: Order) -> Result<Vec<MatJet>>;
}

/// Matter field backed by Fourier data of shape `[spinor, rows, cols]`.
/// Chiral fermions are projected with `(1 ∓ γ⁵)/2` on evaluation.
#[derive(Clone, Debug)]
pub struct FourierMatter {
    decl: FieldDecl,
    data: ComponentField,
    projector: Option<CMat>,
}

impl FourierMatter {
    pub fn new(model: &ModelSpec, decl: FieldDecl, data: ComponentField) -> Result<Self> {
        let (rows, cols) = model.field_shape(&decl);
        let want = [decl.spinor_len(), rows, cols];
        if data.shape() != want {
            return Err(invalid(format!(
                "field `{}` data has shape {:?}, expected {want:?}",
                decl.name,
                data.shape()
            )));
        }
        let projector = match (decl.kind, decl.chirality) {
            (FieldKind::Fermion, Chirality::Left | Chirality::Right) => {
                Some(DiracAlgebra::standard().projector(decl.chirality))
            }
            _ => None,
        };
        Ok(Self { decl, data, projector })
    }

    /// Seeded random content. A scalar with a `vev` gets `vev/√2` added to
    /// the constant mode of its last internal entry.
    pub fn random(model: &ModelSpec, decl: FieldDecl, seed: u64, max_mode: u32, amplitude: f64) -> Result<Self> {
        let (rows, cols) = model.field_shape(&decl);
        let shape = [decl.spinor_len(), rows, cols];
        let mut data = random_field(seed, &shape, max_mode, amplitude, false)?;
        if let (FieldKind::Scalar, Some(v)) = (decl.kind, decl.vev) {
            let idx = [0, rows - 1, cols - 1];
            let mut terms = data.get(&idx).terms().to_vec();
            terms.push(([0; 4], c(v / 2f64.sqrt(), 0.0)));
            data.set(&idx, FourierScalar::new(terms, false)?);
        }
        Self::new(model, decl, data)
    }

    pub fn data(&self) -> &ComponentField {
        &self.data
    }
}

impl MatterField for FourierMatter {
    fn decl(&self) -> &FieldDecl {
        &self.decl
    }

    fn jet(&self, x: &Point4, order: Order) -> Result<Vec<MatJet>> {
        let spin = self.data.shape()[0];
        let (rows, cols) = (self.data.shape()[1], self.data.shape()[2]);
        let jets = self.data.eval_jets(x, order);
        let raw: Vec<MatJet> = jets
            .chunks(rows * cols)
            .map(|chunk| MatJet::from_entries(rows, cols, chunk, order))
            .collect();
        Ok(match &self.projector {
            None => raw,
            Some(p) => (0..spin)
                .map(|s| {
                    let mut acc = MatJet::zeros(rows, cols, order);
                    for (t, comp) in raw.iter().enumerate() {
                        if p[(s, t)].norm() != 0.0 {
                            acc = &acc + &comp.scale(p[(s, t)]);
                        }
                    }
                    acc
                })
                .collect(),
        })
    }
}

/// `Ψ′(x) = U(x) Ψ(x) V(x)` with the spinor index inert.
pub struct TransformedMatter<'a> {
    model: &'a ModelSpec,
    inner: &'a dyn MatterField,
    transform: &'a TransformSpec,
}

impl<'a> TransformedMatter<'a> {
    pub fn new(model: &'a ModelSpec, inner: &'a dyn MatterField, transform: &'a TransformSpec) -> Self {
        Self { model, inner, transform }
    }
}

impl MatterField for TransformedMatter<'_> {
    fn decl(&self) -> &FieldDecl {
        self.inner.decl()
    }

    fn jet(&self, x: &Point4, order: Order) -> Result<Vec<MatJet>> {
        let decl = self.inner.decl();
        let left = if decl.rep.acts_on(Sector::U) {
            Some(self.transform.group_jet(self.model, Sector::U, Some(decl), x, order)?)
        } else {
            None
        };
        let right = if decl.rep.acts_on(Sector::V) {
            Some(self.transform.group_jet(self.model, Sector::V, Some(decl), x, order)?)
        } else {
            None
        };
        let comps = self.inner.jet(x, order)?;
        Ok(comps
            .iter()
            .map(|psi| {
                let mut out = psi.clone();
                if let Some(u) = &left {
                    out = u * &out;
                }
                if let Some(v) = &right {
                    out = &out * v;
                }
                out
            })
            .collect())
    }
}
