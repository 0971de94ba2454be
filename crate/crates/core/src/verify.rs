//! The identity-check battery: every check evaluates both sides of one
//! transformation law over seeded random configurations and reports residual
//! statistics.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Result;
use crate::fieldcfg::{sample_points, Point4};
use crate::gauge::{ConnectionJet, 
    covariant_derivative, fermion_density, field_strength_signed, lagrangian_terms_at, ConfigConnection, Connection,
    DiracAlgebra, FieldDecl, FieldKind, FourierMatter, GaugeConfig, MatterField, ModelSpec, Rep, Sector,
    TransformSpec, TransformedConnection, TransformedMatter,
};
use crate::liealg::algebra_residuals;
use crate::linalg::{c, max_abs, max_abs_diff, CMat, Complex, MatJet, Order, I};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance of the algebra checks, independent of `tol`.
pub const ALGEBRA_TOL: f64 = 1e-11;
pub const FLATNESS_TOL: f64 = 1e-9;
pub const ABELIAN_LAW_TOL: f64 = 1e-12;
pub const FD_STEP: f64 = 1e-6;
pub const FD_TOL: f64 = 1e-7;
/// Step sizes of the infinitesimal-law ratio test.
pub const EPSILONS: [f64; 3] = [0.02, 0.01, 0.005];
/// Allowed deviation of the halving ratio from 4.
pub const RATIO_TOL: f64 = 1.0;

/// Deliberate pipeline faults, one per core check, used as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corruption {
    /// Transform Ψ but leave Ψ̄ alone.
    GlobalInvariance,
    /// Transform the gauge fields but not the matter.
    LocalInvariance,
    /// Use the untransformed connection on the transformed field.
    CovariantTransform,
    /// Same fault, applied to the second derivative.
    SecondDerivative,
    /// Swap the adopted and rejected V-sector signs.
    CommutatorIdentity,
    /// Drop the commutator term from the linearized law.
    InfinitesimalLaw,
}

impl Corruption {
    pub const ALL: [Corruption; 6] = [
        Corruption::GlobalInvariance,
        Corruption::LocalInvariance,
        Corruption::CovariantTransform,
        Corruption::SecondDerivative,
        Corruption::CommutatorIdentity,
        Corruption::InfinitesimalLaw,
    ];

    /// Name of the check this corruption targets.
    pub fn check_name(self) -> &'static str {
        match self {
            Corruption::GlobalInvariance => "global_invariance",
            Corruption::LocalInvariance => "local_invariance",
            Corruption::CovariantTransform => "covariant_transform",
            Corruption::SecondDerivative => "second_derivative",
            Corruption::CommutatorIdentity => "commutator_identity",
            Corruption::InfinitesimalLaw => "infinitesimal_gauge_law",
        }
    }

    pub fn from_check_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.check_name() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub points: usize,
    pub modes: u32,
    pub amplitude: f64,
    pub tol: f64,
    pub fd_crosscheck: bool,
    pub corruption: Option<Corruption>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            points: 128,
            modes: 2,
            amplitude: 0.5,
            tol: 1e-8,
            fd_crosscheck: false,
            corruption: None,
        }
    }
}

impl VerifyOptions {
    fn corrupt(&self, c: Corruption) -> bool {
        self.corruption == Some(c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub residual_max: f64,
    pub residual_mean: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub points: usize,
    pub notes: String,
}

impl CheckResult {
    /// Summarizes per-point residuals. NaN counts as an infinite residual.
    pub fn from_residuals(name: &str, residuals: &[f64], tolerance: f64, notes: String) -> Self {
        let clean: Vec<f64> = residuals.iter().map(|r| if r.is_nan() { f64::INFINITY } else { *r }).collect();
        let max = clean.iter().copied().fold(0.0, f64::max);
        let mean = if clean.is_empty() { 0.0 } else { clean.iter().sum::<f64>() / clean.len() as f64 };
        Self {
            name: name.to_string(),
            residual_max: max,
            residual_mean: mean.min(max),
            tolerance,
            pass: max <= tolerance,
            points: residuals.len(),
            notes,
        }
    }

    pub fn errored(name: &str, tolerance: f64, err: &crate::Error) -> Self {
        Self {
            name: name.to_string(),
            residual_max: f64::INFINITY,
            residual_mean: f64::INFINITY,
            tolerance,
            pass: false,
            points: 0,
            notes: format!("error: {err}"),
        }
    }

    fn from_outcome(name: &str, tolerance: f64, outcome: Result<(Vec<f64>, String)>) -> Self {
        match outcome {
            Ok((r, notes)) => Self::from_residuals(name, &r, tolerance, notes),
            Err(e) => Self::errored(name, tolerance, &e),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub model_name: String,
    pub seed: u64,
    pub points: usize,
    pub mode_cutoff: u32,
    pub amplitude: f64,
    pub engine_version: String,
    pub sign_ledger: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// splitmix64 of `seed ^ tag`, so every consumer gets an independent stream.
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    let mut z = (seed ^ tag.wrapping_mul(0xd1b5_4a32_d192_ed03)).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

mod tags {
    pub const CONFIG: u64 = 1;
    pub const POINTS: u64 = 2;
    pub const FIELDS: u64 = 100;
    pub const GLOBAL: u64 = 11;
    pub const LOCAL: u64 = 12;
    pub const COVARIANT: u64 = 13;
    pub const SECOND: u64 = 14;
    pub const PROBE: u64 = 15;
    pub const INFINITESIMAL: u64 = 16;
    pub const FLAT: u64 = 17;
    pub const ABELIAN: u64 = 18;
    pub const FD: u64 = 19;
}

/// Random gauge configuration, matter fields and sample points.
pub struct Ensemble {
    pub config: GaugeConfig,
    pub fields: Vec<Box<dyn MatterField>>,
    pub points: Vec<Point4>,
}

impl Ensemble {
    pub fn random(model: &ModelSpec, opts: &VerifyOptions) -> Result<Self> {
        let fields = model
            .fields()
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let seed = sub_seed(opts.seed, tags::FIELDS + k as u64);
                FourierMatter::random(model, d.clone(), seed, opts.modes, opts.amplitude)
                    .map(|f| Box::new(f) as Box<dyn MatterField>)
            })
            .collect::<Result<_>>()?;
        Self::with_fields(model, opts, fields)
    }

    /// Random configuration and points around caller-supplied matter.
    pub fn with_fields(model: &ModelSpec, opts: &VerifyOptions, fields: Vec<Box<dyn MatterField>>) -> Result<Self> {
        Ok(Self {
            config: GaugeConfig::random(model, sub_seed(opts.seed, tags::CONFIG), opts.modes, opts.amplitude)?,
            fields,
            points: sample_points(sub_seed(opts.seed, tags::POINTS), opts.points)?,
        })
    }

    fn field_refs(&self) -> Vec<&dyn MatterField> {
        self.fields.iter().map(|f| &**f).collect()
    }
}

fn per_point<F>(points: &[Point4], f: F) -> Result<Vec<f64>>
where
    F: Fn(&Point4) -> Result<f64> + Sync + Send,
{
    points.par_iter().map(f).collect()
}

fn rel_scalar(new: Complex, reference: Complex) -> f64 {
    (new - reference).norm() / (1.0 + reference.norm())
}

fn rel_mats(new: &[CMat], reference: &[CMat]) -> f64 {
    let diff = new.iter().zip(reference).map(|(a, b)| max_abs_diff(a, b)).fold(0.0, f64::max);
    let scale = reference.iter().map(max_abs).fold(0.0, f64::max);
    diff / (1.0 + scale)
}

fn values(jets: &[MatJet]) -> Vec<CMat> {
    jets.iter().map(|j| j.value().clone()).collect()
}

fn random_transform(model: &ModelSpec, opts: &VerifyOptions, tag: u64) -> Result<TransformSpec> {
    TransformSpec::random(model, sub_seed(opts.seed, tag), opts.modes, opts.amplitude)
}

/// `U(x) M V(x)` restricted to the sectors `decl` transforms under.
/// Potentials cut down to values: enough for an outermost derivative,
/// whose result is only ever read at the point itself.
fn values_only(w: &ConnectionJet) -> ConnectionJet {
    ConnectionJet {
        u: w.u.iter().map(|m| m.truncate(Order::Value)).collect(),
        v: w.v.iter().map(|m| m.truncate(Order::Value)).collect(),
    }
}

/// Group elements `(U, V)` acting on `decl` at `x`, where they act at all.
fn sandwich_ops(model: &ModelSpec, t: &TransformSpec, decl: &FieldDecl, x: &Point4) -> Result<[Option<CMat>; 2]> {
    let op = |s: Sector| -> Result<Option<CMat>> {
        match decl.rep.acts_on(s) {
            true => Ok(Some(t.group_jet(model, s, Some(decl), x, Order::Value)?.into_value())),
            false => Ok(None),
        }
    };
    Ok([op(Sector::U)?, op(Sector::V)?])
}

fn sandwich(ops: &[Option<CMat>; 2], comps: &[CMat]) -> Vec<CMat> {
    comps
        .iter()
        .map(|m| {
            let mut out = m.clone();
            if let Some(u) = &ops[0] {
                out = u * out;
            }
            if let Some(v) = &ops[1] {
                out *= v;
            }
            out
        })
        .collect()
}

fn fermions(ens: &Ensemble) -> Vec<&dyn MatterField> {
    ens.field_refs().into_iter().filter(|f| f.decl().kind == FieldKind::Fermion).collect()
}

pub fn check_algebra(model: &ModelSpec, sector: Sector) -> CheckResult {
    let r = algebra_residuals(model.basis(sector));
    let notes = format!(
        "{}: hermiticity {:.1e}, trace {:.1e}, orthonormality {:.1e}, antisymmetry {:.1e}, closure {:.1e}, jacobi {:.1e}",
        model.basis(sector).kind(),
        r.hermiticity,
        r.tracelessness,
        r.orthonormality,
        r.antisymmetry,
        r.closure,
        r.jacobi
    );
    let mut out = CheckResult::from_residuals(&format!("algebra_{sector}"), &[r.max()], ALGEBRA_TOL, notes);
    out.points = 0;
    out
}

/// `L₁ = i Tr[Ψ̄γ^μ∂_μΨ]` under a constant transformation, with no gauge field.
pub fn check_global_invariance(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions) -> CheckResult {
    let name = "global_invariance";
    let outcome = (|| {
        let t = random_transform(model, opts, tags::GLOBAL)?.global_part();
        let zero = GaugeConfig::zero(model);
        let conn = ConfigConnection::new(model, &zero);
        let fs = fermions(ens);
        let dirac = DiracAlgebra::standard();
        let corrupt = opts.corrupt(Corruption::GlobalInvariance);
        let r = per_point(&ens.points, |x| {
            let w = conn.jet(x, Order::Value)?;
            let mut worst: f64 = 0.0;
            for f in &fs {
                let decl = f.decl();
                let psi = f.jet(x, Order::First)?;
                let tf = TransformedMatter::new(model, *f, &t);
                let psi_t = tf.jet(x, Order::First)?;
                let d = all_d(model, decl, &psi, &w)?;
                let d_t = all_d(model, decl, &psi_t, &w)?;
                let before = fermion_density(&dirac, &values(&psi), &d);
                let bar = if corrupt { values(&psi) } else { values(&psi_t) };
                let after = fermion_density(&dirac, &bar, &d_t);
                worst = worst.max(rel_scalar(after, before));
            }
            Ok(worst)
        })?;
        let notes = if fs.is_empty() { "model has no fermions".to_string() } else { format!("{} fermion(s)", fs.len()) };
        Ok((r, notes))
    })();
    CheckResult::from_outcome(name, opts.tol, outcome)
}

fn all_d(
    model: &ModelSpec,
    decl: &FieldDecl,
    psi: &[MatJet],
    w: &crate::gauge::ConnectionJet,
) -> Result<Vec<Vec<MatJet>>> {
    (0..4).map(|mu| covariant_derivative(model, decl, psi, w, mu)).collect()
}

/// Total kinetic density under a simultaneous local transformation of
/// matter and both gauge sectors.
pub fn check_local_invariance(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions) -> CheckResult {
    let outcome = (|| {
        let t = random_transform(model, opts, tags::LOCAL)?;
        let conn = ConfigConnection::new(model, &ens.config);
        let tconn = TransformedConnection::new(model, &conn, &t);
        let fields = ens.field_refs();
        let transformed: Vec<TransformedMatter> = fields.iter().map(|f| TransformedMatter::new(model, *f, &t)).collect();
        let tfields: Vec<&dyn MatterField> = if opts.corrupt(Corruption::LocalInvariance) {
            fields.clone()
        } else {
            transformed.iter().map(|f| f as &dyn MatterField).collect()
        };
        let dirac = DiracAlgebra::standard();
        let r = per_point(&ens.points, |x| {
            let before = lagrangian_terms_at(model, &fields, &conn, x, &dirac)?.total();
            let after = lagrangian_terms_at(model, &tfields, &tconn, x, &dirac)?.total();
            Ok(rel_scalar(after, before))
        })?;
        Ok((r, format!("{} field(s), both sectors transformed", fields.len())))
    })();
    CheckResult::from_outcome("local_invariance", opts.tol, outcome)
}

/// `D′_μΨ′ = U (D_μΨ) V` for every field and direction.
pub fn check_covariant_transform(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions) -> CheckResult {
    let outcome = (|| {
        let t = random_transform(model, opts, tags::COVARIANT)?;
        let conn = ConfigConnection::new(model, &ens.config);
        let tconn = TransformedConnection::new(model, &conn, &t);
        let primed: &dyn Connection = if opts.corrupt(Corruption::CovariantTransform) { &conn } else { &tconn };
        let fields = ens.field_refs();
        let r = per_point(&ens.points, |x| {
            let w = conn.jet(x, Order::Value)?;
            let wt = primed.jet(x, Order::Value)?;
            let mut worst: f64 = 0.0;
            for f in &fields {
                let decl = f.decl();
                let psi = f.jet(x, Order::First)?;
                let psi_t = TransformedMatter::new(model, *f, &t).jet(x, Order::First)?;
                let ops = sandwich_ops(model, &t, decl, x)?;
                for mu in 0..4 {
                    let lhs = values(&covariant_derivative(model, decl, &psi_t, &wt, mu)?);
                    let rhs = sandwich(&ops, &values(&covariant_derivative(model, decl, &psi, &w, mu)?));
                    worst = worst.max(rel_mats(&lhs, &rhs));
                }
            }
            Ok(worst)
        })?;
        Ok((r, format!("{} field(s) x 4 directions", fields.len())))
    })();
    CheckResult::from_outcome("covariant_transform", opts.tol, outcome)
}

/// `D′_ν(D′_μΨ′) = U D_ν(D_μΨ) V`.
pub fn check_second_derivative(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions) -> CheckResult {
    let outcome = (|| {
        let t = random_transform(model, opts, tags::SECOND)?;
        let conn = ConfigConnection::new(model, &ens.config);
        let tconn = TransformedConnection::new(model, &conn, &t);
        let primed: &dyn Connection = if opts.corrupt(Corruption::SecondDerivative) { &conn } else { &tconn };
        let fields = ens.field_refs();
        let r = per_point(&ens.points, |x| {
            let w = conn.jet(x, Order::First)?;
            let wt = primed.jet(x, Order::First)?;
            let (w0, wt0) = (values_only(&w), values_only(&wt));
            let mut worst: f64 = 0.0;
            for f in &fields {
                let decl = f.decl();
                let psi = f.jet(x, Order::Second)?;
                let psi_t = TransformedMatter::new(model, *f, &t).jet(x, Order::Second)?;
                let ops = sandwich_ops(model, &t, decl, x)?;
                for mu in 0..4 {
                    let d1 = covariant_derivative(model, decl, &psi, &w, mu)?;
                    let d1t = covariant_derivative(model, decl, &psi_t, &wt, mu)?;
                    for nu in 0..4 {
                        let lhs = values(&covariant_derivative(model, decl, &d1t, &wt0, nu)?);
                        let d2 = values(&covariant_derivative(model, decl, &d1, &w0, nu)?);
                        worst = worst.max(rel_mats(&lhs, &sandwich(&ops, &d2)));
                    }
                }
            }
            Ok(worst)
        })?;
        Ok((r, format!("{} field(s) x 16 direction pairs", fields.len())))
    })();
    CheckResult::from_outcome("second_derivative", opts.tol, outcome)
}

/// A bifundamental scalar probe so the commutator identity always sees
/// both sectors, whatever matter the model declares.
fn probe(model: &ModelSpec, opts: &VerifyOptions) -> Result<FourierMatter> {
    let mut decl = FieldDecl::scalar("__probe", Rep::Bifundamental);
    if Sector::BOTH.iter().any(|s| model.is_abelian(*s) && model.basis(*s).charge().is_none()) {
        decl = decl.with_charge(1.0);
    }
    FourierMatter::random(model, decl, sub_seed(opts.seed, tags::PROBE), opts.modes, opts.amplitude)
}

/// Residuals of `[D_μ,D_ν]ψ = g_U F^U ψ + g_V ψ F^V` for both candidate
/// V-sector commutator signs, as (adopted, rejected) per point.
pub fn commutator_residuals(
    model: &ModelSpec,
    fields: &[&dyn MatterField],
    config: &GaugeConfig,
    points: &[Point4],
    adopted: f64,
) -> Result<Vec<(f64, f64)>> {
    let conn = ConfigConnection::new(model, config);
    points
        .par_iter()
        .map(|x| {
            let w = conn.jet(x, Order::First)?;
            let w0 = values_only(&w);
            let mut worst = (0.0f64, 0.0f64);
            for f in fields {
                let decl = f.decl();
                let psi = f.jet(x, Order::Second)?;
                let phi = values(&psi);
                let d1: Vec<Vec<MatJet>> = (0..4)
                    .map(|mu| covariant_derivative(model, decl, &psi, &w, mu))
                    .collect::<Result<_>>()?;
                let left = match decl.rep.acts_on(Sector::U) {
                    true => Some(model.coupling(Sector::U) * model.charge_factor(Sector::U, decl)?),
                    false => None,
                };
                let right = match decl.rep.acts_on(Sector::V) {
                    true => Some(model.coupling(Sector::V) * model.charge_factor(Sector::V, decl)?),
                    false => None,
                };
                for mu in 0..4 {
                    for nu in (mu + 1)..4 {
                        let a = values(&covariant_derivative(model, decl, &d1[nu], &w0, mu)?);
                        let b = values(&covariant_derivative(model, decl, &d1[mu], &w0, nu)?);
                        let lhs: Vec<CMat> = a.iter().zip(&b).map(|(p, q)| p - q).collect();
                        let fu = field_strength_signed(model, &w, Sector::U, mu, nu, model.commutator_sign(Sector::U));
                        let mut res = [0.0; 2];
                        for (k, sign) in [adopted, -adopted].into_iter().enumerate() {
                            let fv = field_strength_signed(model, &w, Sector::V, mu, nu, sign);
                            let rhs: Vec<CMat> = phi
                                .iter()
                                .map(|p| {
                                    let mut out = CMat::zeros(p.nrows(), p.ncols());
                                    if let Some(gq) = left {
                                        out += &fu * p * c(gq, 0.0);
                                    }
                                    if let Some(gq) = right {
                                        out += p * &fv * c(gq, 0.0);
                                    }
                                    out
                                })
                                .collect();
                            res[k] = rel_mats(&lhs, &rhs);
                        }
                        worst = (worst.0.max(res[0]), worst.1.max(res[1]));
                    }
                }
            }
            Ok(worst)
        })
        .collect()
}

fn sign_str(s: f64) -> &'static str {
    if s < 0.0 {
        "-1"
    } else {
        "+1"
    }
}

/// Adjudicates the V-sector commutator sign. Returns the check plus the
/// sign the oracle prefers (if the two candidates are distinguishable).
pub fn check_commutator_identity(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions) -> (CheckResult, Option<f64>) {
    let outcome = (|| {
        let probe = probe(model, opts)?;
        let mut fields = ens.field_refs();
        fields.push(&probe);
        let mut adopted = model.commutator_sign(Sector::V);
        if opts.corrupt(Corruption::CommutatorIdentity) {
            adopted = -adopted;
        }
        let pairs = commutator_residuals(model, &fields, &ens.config, &ens.points, adopted)?;
        let adopted_max = pairs.iter().map(|p| p.0).fold(0.0, f64::max);
        let rejected_max = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
        let preferred = if (adopted_max - rejected_max).abs() <= 1e-3 * (1.0 + adopted_max.min(rejected_max)) {
            None
        } else if adopted_max < rejected_max {
            Some(adopted)
        } else {
            Some(-adopted)
        };
        let notes = format!(
            "adopted V sign {}: max residual {:.3e}; rejected V sign {}: max residual {:.3e}",
            sign_str(adopted),
            adopted_max,
            sign_str(-adopted),
            rejected_max
        );
        Ok((pairs.iter().map(|p| p.0).collect::<Vec<_>>(), notes, preferred))
    })();
    match outcome {
        Ok((r, notes, pref)) => (CheckResult::from_residuals("commutator_identity", &r, opts.tol, notes), pref),
        Err(e) => (CheckResult::errored("commutator_identity", opts.tol, &e), None),
    }
}

/// Linearized potential transformation for `exp(−i A)` with `A = Σ α_c T_c`:
/// U sector `W + (i/g)∂A − i[A, W]`, V sector `W + (i/g)∂A + i[A, W]`.
pub fn linearized_potential(
    sector: Sector,
    coupling: f64,
    w: &CMat,
    a: &CMat,
    da: &CMat,
    with_commutator: bool,
) -> CMat {
    let mut out = w + da * (I / coupling);
    if with_commutator {
        let comm = a * w - w * a;
        let s = match sector {
            Sector::U => -I,
            Sector::V => I,
        };
        out += comm * s;
    }
    out
}

/// Max over points and μ of `|W′_finite − W′_linear|` for parameters `ε α̂`.
pub fn infinitesimal_residual(
    model: &ModelSpec,
    config: &GaugeConfig,
    direction: &TransformSpec,
    sector: Sector,
    eps: f64,
    points: &[Point4],
    with_commutator: bool,
) -> Result<f64> {
    let g = model.coupling(sector);
    // exp(i g p T) with p = −ε α̂ / g is exp(−i ε α̂·T).
    let t = direction.scaled(-eps / g);
    let conn = ConfigConnection::new(model, config);
    let tc = TransformedConnection::new(model, &conn, &t).only(sector);
    let gens = model.potential_generators(sector);
    let r = per_point(points, |x| {
        let finite = tc.jet(x, Order::Value)?;
        let w = conn.jet(x, Order::Value)?;
        let params: Vec<_> = direction.params(sector).iter().map(|p| p.eval_jet(x, Order::First)).collect();
        let a = MatJet::lincomb(&params, &gens, c(eps, 0.0), Order::First);
        let mut worst: f64 = 0.0;
        for mu in 0..4 {
            let lin = linearized_potential(sector, g, w.sector(sector)[mu].value(), a.value(), a.d(mu), with_commutator);
            worst = worst.max(max_abs_diff(finite.sector(sector)[mu].value(), &lin));
        }
        Ok(worst)
    })?;
    Ok(r.into_iter().fold(0.0, f64::max))
}

/// Ratio test on ε-halving: the finite law minus its linearization is O(ε²).
pub fn check_infinitesimal_gauge_law(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions) -> CheckResult {
    let name = "infinitesimal_gauge_law";
    let outcome = (|| {
        let direction = TransformSpec::random(model, sub_seed(opts.seed, tags::INFINITESIMAL), opts.modes, 1.0)?;
        let with_comm = !opts.corrupt(Corruption::InfinitesimalLaw);
        let mut ratios = Vec::new();
        let mut notes = Vec::new();
        for s in Sector::BOTH.into_iter().filter(|s| !model.is_abelian(*s)) {
            let res: Vec<f64> = EPSILONS
                .iter()
                .map(|&e| infinitesimal_residual(model, &ens.config, &direction, s, e, &ens.points, with_comm))
                .collect::<Result<_>>()?;
            let rs: Vec<f64> = res.windows(2).map(|w| w[0] / w[1]).collect();
            notes.push(format!(
                "{s}: residuals {} ratios {}",
                res.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>().join("/"),
                rs.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join("/")
            ));
            ratios.extend(rs.into_iter().map(|r| (r - 4.0).abs()));
        }
        if ratios.is_empty() {
            notes.push("no non-abelian sector".into());
        }
        Ok((ratios, notes.join("; ")))
    })();
    let mut out = CheckResult::from_outcome(name, RATIO_TOL, outcome);
    if out.points > 0 {
        out.points = ens.points.len();
    }
    out
}

/// Field strengths of a transformed zero configuration vanish.
pub fn check_pure_gauge_flatness(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions) -> CheckResult {
    let outcome = (|| {
        let t = random_transform(model, opts, tags::FLAT)?;
        let zero = GaugeConfig::zero(model);
        let conn = ConfigConnection::new(model, &zero);
        let tc = TransformedConnection::new(model, &conn, &t);
        let r = per_point(&ens.points, |x| {
            let w = tc.jet(x, Order::First)?;
            let mut worst: f64 = 0.0;
            for s in Sector::BOTH {
                for mu in 0..4 {
                    for nu in (mu + 1)..4 {
                        worst = worst.max(max_abs(&field_strength_signed(model, &w, s, mu, nu, model.commutator_sign(s))));
                    }
                }
            }
            Ok(worst)
        })?;
        Ok((r, "max |F| of a pure gauge, both sectors".to_string()))
    })();
    CheckResult::from_outcome("pure_gauge_flatness", FLATNESS_TOL, outcome)
}

/// U(1) sectors: the transformed potential is exactly `B + ∂β`.
pub fn check_abelian_shift_law(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions, sector: Sector) -> CheckResult {
    let name = format!("abelian_shift_law_{sector}");
    let outcome = (|| {
        let t = random_transform(model, opts, tags::ABELIAN)?;
        let conn = ConfigConnection::new(model, &ens.config);
        let tc = TransformedConnection::new(model, &conn, &t).only(sector);
        let beta = &t.params(sector)[0];
        let b = ens.config.sector(sector);
        let r = per_point(&ens.points, |x| {
            let w = tc.jet(x, Order::Value)?;
            let mut worst: f64 = 0.0;
            for mu in 0..4 {
                let want = -I * (b.get(&[0, mu]).eval(x) + beta.partial(mu)?.eval(x));
                worst = worst.max((w.sector(sector)[mu].value()[(0, 0)] - want).norm());
            }
            Ok(worst)
        })?;
        Ok((r, "B' = B + d(beta) for V = exp(i g beta)".to_string()))
    })();
    CheckResult::from_outcome(&name, ABELIAN_LAW_TOL, outcome)
}

/// Analytic first derivatives of the transformed potentials against
/// central differences.
pub fn check_fd_crosscheck(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions) -> CheckResult {
    let outcome = (|| {
        let t = random_transform(model, opts, tags::FD)?;
        let conn = ConfigConnection::new(model, &ens.config);
        let tc = TransformedConnection::new(model, &conn, &t);
        let r = per_point(&ens.points, |x| {
            let w = tc.jet(x, Order::First)?;
            let mut worst: f64 = 0.0;
            for nu in 0..4 {
                let plus = tc.jet(&x.shifted(nu, FD_STEP), Order::Value)?;
                let minus = tc.jet(&x.shifted(nu, -FD_STEP), Order::Value)?;
                for s in Sector::BOTH {
                    for mu in 0..4 {
                        let fd = (plus.sector(s)[mu].value() - minus.sector(s)[mu].value()) / c(2.0 * FD_STEP, 0.0);
                        let an = w.sector(s)[mu].d(nu);
                        worst = worst.max(max_abs_diff(&fd, an) / (1.0 + max_abs(an)));
                    }
                }
            }
            Ok(worst)
        })?;
        Ok((r, format!("central differences, h = {FD_STEP:e}")))
    })();
    CheckResult::from_outcome("fd_crosscheck", FD_TOL, outcome)
}

/// Conventions in force for `model`, embedded in every report.
pub fn base_sign_ledger(model: &ModelSpec) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: &str| {
        m.insert(k.to_string(), v.to_string());
    };
    put("v_sector_commutator_sign", sign_str(model.commutator_sign(Sector::V)));
    put("u_sector_commutator_sign", sign_str(model.commutator_sign(Sector::U)));
    put("gauge_trace_form", "1/2 Tr[F^dagger F] in the total density; 1/2 Tr[F F] secondary");
    put("metric_signature", "+---");
    put("gamma_basis", "dirac");
    put("covariant_derivative", "D = d + g_U q W^U psi + g_V q psi W^V, W = -i T_a W_a, q = Y/2 for U(1)");
    put("group_element", "U = exp(+i g alpha_a T_a), V = exp(+i g beta_b T_b)");
    put("generator_normalization", "Tr[T_a T_b] = delta_ab / 2");
    put("u1_potential", "W = -i B (unit generator)");
    m
}

/// All checks, in report order. Construction errors are confined to the
/// checks they affect.
pub fn run_checks(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions) -> (Vec<CheckResult>, BTreeMap<String, String>) {
    let mut ledger = base_sign_ledger(model);
    let mut checks = vec![check_algebra(model, Sector::U), check_algebra(model, Sector::V)];
    for e in model.validate() {
        checks.push(CheckResult::errored("model_validation", 0.0, &e));
    }
    checks.push(check_global_invariance(model, ens, opts));
    checks.push(check_local_invariance(model, ens, opts));
    checks.push(check_covariant_transform(model, ens, opts));
    checks.push(check_second_derivative(model, ens, opts));
    let (comm, preferred) = check_commutator_identity(model, ens, opts);
    ledger.insert(
        "v_sector_commutator_sign_oracle".into(),
        match preferred {
            Some(s) => sign_str(s).to_string(),
            None => "indistinguishable".to_string(),
        },
    );
    checks.push(comm);
    checks.push(check_infinitesimal_gauge_law(model, ens, opts));
    checks.push(check_pure_gauge_flatness(model, ens, opts));
    for s in Sector::BOTH.into_iter().filter(|s| model.is_abelian(*s)) {
        checks.push(check_abelian_shift_law(model, ens, opts, s));
    }
    if opts.fd_crosscheck {
        checks.push(check_fd_crosscheck(model, ens, opts));
    }
    (checks, ledger)
}

pub fn assemble_report(
    model: &ModelSpec,
    opts: &VerifyOptions,
    checks: Vec<CheckResult>,
    sign_ledger: BTreeMap<String, String>,
) -> VerificationReport {
    VerificationReport {
        model_name: model.name.clone(),
        seed: opts.seed,
        points: opts.points,
        mode_cutoff: opts.modes,
        amplitude: opts.amplitude,
        engine_version: ENGINE_VERSION.to_string(),
        sign_ledger,
        checks,
    }
}

/// Runs the battery on a random ensemble drawn from `opts`.
pub fn run_suite(model: &ModelSpec, opts: &VerifyOptions) -> VerificationReport {
    match Ensemble::random(model, opts) {
        Ok(ens) => run_suite_with(model, &ens, opts),
        Err(e) => assemble_report(
            model,
            opts,
            vec![CheckResult::errored("ensemble", opts.tol, &e)],
            base_sign_ledger(model),
        ),
    }
}

pub fn run_suite_with(model: &ModelSpec, ens: &Ensemble, opts: &VerifyOptions) -> VerificationReport {
    let (checks, ledger) = run_checks(model, ens, opts);
    assemble_report(model, opts, checks, ledger)
}
