//! The SU(2)_L ⊗ U(1)_Y electroweak model: chiral lepton content, the Higgs
//! doublet in its exponential parameterization, the VEV and its residual
//! symmetry.
//!
//! The electroweak laws are written with `exp[−i(α_i T_i + β Y/2)]`. In the
//! engine's `exp(+i g p T)` form that is `p = −α/g` (and `−β/g′`), under
//! which `B′ = B − (1/g′)∂β`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::fieldcfg::{random_field, FourierScalar, Point4};
use crate::gauge::{
    field_strength_at, Chirality, ConfigConnection, Connection, DiracAlgebra, FieldDecl, FieldKind, GaugeConfig,
    MatterField, ModelSpec, Rep, Sector, TransformSpec, TransformedConnection,
};
use crate::liealg::{exp_jet, group_element, mat_exp, su_basis, u1_basis_uncharged, GroupKind};
use crate::linalg::{c, CMat, Complex, MatJet, Order, ScalarJet, I};
use crate::verify::{
    self, sub_seed, CheckResult, Ensemble, VerificationReport, VerifyOptions, EPSILONS, RATIO_TOL,
};

pub const RESIDUAL_SYMMETRY_TOL: f64 = 1e-12;
pub const B_LAW_TOL: f64 = 1e-12;
pub const CHIRAL_TOL: f64 = 1e-12;
/// Minimum displacement of the VEV along a symmetry-breaking direction.
pub const BREAKING_MIN: f64 = 1e-3;
pub const SCAN_DIRECTIONS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hypercharges {
    pub lepton: f64,
    pub right: f64,
    pub higgs: f64,
}

impl Default for Hypercharges {
    /// The conventional lepton assignment; not fixed by the gauge structure.
    fn default() -> Self {
        Self {
            lepton: -1.0,
            right: -2.0,
            higgs: 1.0,
        }
    }
}

pub const LEPTON: &str = "lepton";
pub const RIGHT: &str = "e_r";
pub const HIGGS: &str = "higgs";

/// Electroweak model: a [`ModelSpec`] plus the parameters the Higgs sector needs.
#[derive(Clone, Debug, PartialEq)]
pub struct EwModel {
    pub spec: ModelSpec,
    pub g: f64,
    pub g_prime: f64,
    pub upsilon: f64,
    pub higgs: FieldDecl,
}

impl EwModel {
    pub fn y_higgs(&self) -> f64 {
        self.higgs.charge.unwrap_or(f64::NAN)
    }

    /// Recognizes SU(2) ⊗ U(1) models with a bifundamental scalar carrying a VEV.
    pub fn detect(spec: &ModelSpec) -> Option<Self> {
        if spec.basis(Sector::U).kind() != GroupKind::Su(2) || !spec.is_abelian(Sector::V) {
            return None;
        }
        let higgs = spec
            .fields()
            .iter()
            .find(|f| f.kind == FieldKind::Scalar && f.rep == Rep::Bifundamental && f.vev.is_some_and(|v| v > 0.0))?
            .clone();
        let charge = spec.field_charge(Sector::V, &higgs).ok()?;
        Some(Self {
            spec: spec.clone(),
            g: spec.coupling(Sector::U),
            g_prime: spec.coupling(Sector::V),
            upsilon: higgs.vev?,
            higgs: FieldDecl {
                charge: Some(charge),
                ..higgs
            },
        })
    }

    /// Transformation given in the `exp[−i(α·T + βY/2)]` convention.
    pub fn transform(&self, alpha: [FourierScalar; 3], beta: FourierScalar) -> Result<TransformSpec> {
        TransformSpec::new(
            &self.spec,
            alpha.iter().map(|a| a.scaled(-1.0 / self.g)).collect(),
            vec![beta.scaled(-1.0 / self.g_prime)],
        )
    }

    /// Constant transformation from `(α₁, α₂, α₃, β)`.
    pub fn constant_transform(&self, p: [f64; 4]) -> Result<TransformSpec> {
        let k = |v| FourierScalar::real_constant(v);
        self.transform([k(p[0]), k(p[1]), k(p[2])], k(p[3]))
    }
}

/// `g, g′, υ > 0`; lepton doublet (left), right-handed singlet, Higgs doublet.
pub fn build_ew_model(g: f64, g_prime: f64, upsilon: f64, y: Hypercharges) -> Result<EwModel> {
    for (name, v) in [("g", g), ("g'", g_prime), ("upsilon", upsilon)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(invalid(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let spec = ModelSpec::new(
        "gws",
        su_basis(2)?.with_coupling(g),
        u1_basis_uncharged().with_coupling(g_prime),
        vec![
            FieldDecl::fermion(LEPTON, Rep::Bifundamental)
                .with_chirality(Chirality::Left)
                .with_charge(y.lepton),
            FieldDecl::fermion(RIGHT, Rep::FundamentalV)
                .with_chirality(Chirality::Right)
                .with_charge(y.right),
            FieldDecl::scalar(HIGGS, Rep::Bifundamental).with_charge(y.higgs).with_vev(upsilon),
        ],
    )?;
    EwModel::detect(&spec).ok_or_else(|| invalid("electroweak model construction failed"))
}

/// Higgs fluctuations `ξ_i(x)`, `η(x)` around the scale `υ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HiggsParam {
    pub xi: [FourierScalar; 3],
    pub eta: FourierScalar,
    pub upsilon: f64,
}

impl HiggsParam {
    pub fn random(seed: u64, max_mode: u32, amplitude: f64, upsilon: f64) -> Result<Self> {
        let f = random_field(seed, &[4], max_mode, amplitude, true)?;
        let e = f.entries();
        Ok(Self {
            xi: [e[0].clone(), e[1].clone(), e[2].clone()],
            eta: e[3].clone(),
            upsilon,
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            xi: self.xi.clone().map(|x| x.scaled(s)),
            eta: self.eta.scaled(s),
            upsilon: self.upsilon,
        }
    }
}

fn pauli_half() -> Vec<CMat> {
    su_basis(2).expect("su(2)").generators().to_vec()
}

/// `(1/√2) exp[(2i/υ) ξ_i T_i] (0, υ + η)ᵀ` as a jet.
pub fn higgs_jet(p: &HiggsParam, x: &Point4, order: Order) -> MatJet {
    let xi: Vec<ScalarJet> = p.xi.iter().map(|f| f.eval_jet(x, order)).collect();
    let a = MatJet::lincomb(&xi, &pauli_half(), I * (2.0 / p.upsilon), order);
    let mut lower = p.eta.eval_jet(x, order);
    lower.val += p.upsilon;
    let column = MatJet::from_entries(
        2,
        1,
        &[ScalarJet::constant(Complex::ZERO, order), lower.scale(c(1.0 / 2f64.sqrt(), 0.0))],
        order,
    );
    &exp_jet(&a) * &column
}

/// The exponential parameterization at one point.
pub fn higgs_from_param(p: &HiggsParam, x: &Point4) -> [Complex; 2] {
    let v = higgs_jet(p, x, Order::Value).into_value();
    [v[(0, 0)], v[(1, 0)]]
}

/// First-order form `(1/√2)(ξ₂ + iξ₁, υ + η − iξ₃)ᵀ`.
pub fn higgs_linearized(p: &HiggsParam, x: &Point4) -> [Complex; 2] {
    let xi = p.xi.clone().map(|f| f.eval(x).re);
    let eta = p.eta.eval(x).re;
    let s = 1.0 / 2f64.sqrt();
    [c(xi[1], xi[0]) * s, c(p.upsilon + eta, -xi[2]) * s]
}

/// `φ₀ = (0, υ/√2)ᵀ`.
pub fn vev(upsilon: f64) -> [Complex; 2] {
    [Complex::ZERO, c(upsilon / 2f64.sqrt(), 0.0)]
}

/// `(1 − γ⁵)/2` or `(1 + γ⁵)/2`.
pub fn chiral_projector(side: Chirality, dirac: &DiracAlgebra) -> CMat {
    dirac.projector(side)
}

/// Higgs doublet as a matter field in its exponential parameterization.
pub struct HiggsField {
    decl: FieldDecl,
    param: HiggsParam,
}

impl HiggsField {
    pub fn new(decl: FieldDecl, param: HiggsParam) -> Self {
        Self { decl, param }
    }

    pub fn param(&self) -> &HiggsParam {
        &self.param
    }
}

impl MatterField for HiggsField {
    fn decl(&self) -> &FieldDecl {
        &self.decl
    }

    fn jet(&self, x: &Point4, order: Order) -> Result<Vec<MatJet>> {
        Ok(vec![higgs_jet(&self.param, x, order)])
    }
}

/// SU(2) and U(1) field strengths; the U(1) tensor is the bare curl `−i(∂B − ∂B)`.
pub fn ew_tensors_at(ew: &EwModel, config: &GaugeConfig, mu: usize, nu: usize, x: &Point4) -> Result<(CMat, CMat)> {
    let conn = ConfigConnection::new(&ew.spec, config);
    Ok((
        field_strength_at(&ew.spec, &conn, Sector::U, mu, nu, x)?,
        field_strength_at(&ew.spec, &conn, Sector::V, mu, nu, x)?,
    ))
}

fn higgs_values(ew: &EwModel, t: &TransformSpec, phi: &CMat, x: &Point4) -> Result<CMat> {
    let u = t.group_jet(&ew.spec, Sector::U, Some(&ew.higgs), x, Order::Value)?;
    let v = t.group_jet(&ew.spec, Sector::V, Some(&ew.higgs), x, Order::Value)?;
    Ok(u.value() * phi * v.value())
}

fn vev_matrix(upsilon: f64) -> CMat {
    CMat::from_column_slice(2, 1, &vev(upsilon))
}

/// Max displacement `|U φ₀ V − φ₀|` over `points`.
pub fn vev_displacement(ew: &EwModel, t: &TransformSpec, points: &[Point4]) -> Result<f64> {
    let phi0 = vev_matrix(ew.upsilon);
    let mut worst: f64 = 0.0;
    for x in points {
        worst = worst.max(crate::linalg::max_abs_diff(&higgs_values(ew, t, &phi0, x)?, &phi0));
    }
    Ok(worst)
}

/// `α₁ = α₂ = 0`, `α₃ = β` leaves the VEV fixed exactly when `Y_φ = 1`
/// (couplings absorbed into the parameters).
pub fn residual_symmetry_check(ew: &EwModel, opts: &VerifyOptions, points: &[Point4]) -> CheckResult {
    let name = "residual_symmetry";
    let outcome = (|| {
        let beta = random_field(sub_seed(opts.seed, 31), &[1], opts.modes, opts.amplitude, true)?.entries()[0].clone();
        let zero = FourierScalar::zero(true);
        let t = ew.transform([zero.clone(), zero, beta.clone()], beta)?;
        let r: Vec<f64> = points.iter().map(|x| vev_displacement(ew, &t, std::slice::from_ref(x))).collect::<Result<_>>()?;
        let control = vev_displacement(ew, &ew.constant_transform([0.3, 0.0, 0.0, 0.0])?, &points[..1])?;
        Ok((
            r,
            format!(
                "Y_phi = {}; alpha_1 = 0.3 control moves the VEV by {control:.3e}; coupling-explicit reading: g alpha_3 = g' Y_phi beta",
                ew.y_higgs()
            ),
        ))
    })();
    match outcome {
        Ok((r, notes)) => CheckResult::from_residuals(name, &r, RESIDUAL_SYMMETRY_TOL, notes),
        Err(e) => CheckResult::errored(name, RESIDUAL_SYMMETRY_TOL, &e),
    }
}

/// Random constant directions in `(α₁, α₂, α₃, β)` space; every one must
/// move the VEV. Residual is 1 per direction that fails to.
pub fn symmetry_direction_scan(ew: &EwModel, opts: &VerifyOptions) -> CheckResult {
    let name = "symmetry_breaking_scan";
    let amplitude = opts.amplitude.max(0.1);
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(opts.seed, 32));
    let x0 = [Point4::origin()];
    let outcome = (|| {
        let mut flags = Vec::with_capacity(SCAN_DIRECTIONS);
        let mut min_move = f64::INFINITY;
        for _ in 0..SCAN_DIRECTIONS {
            let mut d: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
            let n = d.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            d.iter_mut().for_each(|v| *v *= amplitude / n);
            let m = vev_displacement(ew, &ew.constant_transform(d)?, &x0)?;
            min_move = min_move.min(m);
            flags.push(if m > BREAKING_MIN { 0.0 } else { 1.0 });
        }
        let y = ew.y_higgs();
        let line = vev_displacement(ew, &ew.constant_transform([0.0, 0.0, amplitude * y, amplitude])?, &x0)?;
        Ok((flags, format!("min displacement {min_move:.3e} over {SCAN_DIRECTIONS} directions; alpha_3 = Y_phi beta line moves it by {line:.1e}")))
    })();
    match outcome {
        Ok((r, notes)) => CheckResult::from_residuals(name, &r, 0.0, notes),
        Err(e) => CheckResult::errored(name, 0.0, &e),
    }
}

/// `B′ = B − (1/g′)∂β` under `V = exp(−iβY/2)`.
pub fn b_law_check(ew: &EwModel, config: &GaugeConfig, opts: &VerifyOptions, points: &[Point4]) -> CheckResult {
    let name = "ew_b_law";
    let outcome = (|| {
        let beta = random_field(sub_seed(opts.seed, 33), &[1], opts.modes, opts.amplitude, true)?.entries()[0].clone();
        let zero = FourierScalar::zero(true);
        let t = ew.transform([zero.clone(), zero.clone(), zero], beta.clone())?;
        let conn = ConfigConnection::new(&ew.spec, config);
        let tc = TransformedConnection::new(&ew.spec, &conn, &t).only(Sector::V);
        let r = points
            .iter()
            .map(|x| {
                let w = tc.jet(x, Order::Value)?;
                let mut worst: f64 = 0.0;
                for mu in 0..4 {
                    let b = config.wv.get(&[0, mu]).eval(x).re;
                    let want = b - beta.partial(mu)?.eval(x).re / ew.g_prime;
                    // W = −i B
                    let got = (w.v[mu].value()[(0, 0)] * I).re;
                    worst = worst.max((got - want).abs());
                }
                Ok(worst)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok((r, "B' = B - (1/g') d(beta)".to_string()))
    })();
    match outcome {
        Ok((r, notes)) => CheckResult::from_residuals(name, &r, B_LAW_TOL, notes),
        Err(e) => CheckResult::errored(name, B_LAW_TOL, &e),
    }
}

/// Max over points of `|exponential − linearized|` for fluctuations scaled by `eps`.
pub fn higgs_linearization_residual(p: &HiggsParam, eps: f64, points: &[Point4]) -> f64 {
    let q = p.scaled(eps);
    points
        .iter()
        .map(|x| {
            let a = higgs_from_param(&q, x);
            let b = higgs_linearized(&q, x);
            (a[0] - b[0]).norm().max((a[1] - b[1]).norm())
        })
        .fold(0.0, f64::max)
}

/// The two Higgs forms agree to first order: halving ε quarters the gap.
pub fn higgs_linearization_check(ew: &EwModel, opts: &VerifyOptions, points: &[Point4]) -> CheckResult {
    let name = "higgs_linearization";
    match HiggsParam::random(sub_seed(opts.seed, 34), opts.modes, 1.0, ew.upsilon) {
        Ok(p) => {
            let res: Vec<f64> = EPSILONS.iter().map(|&e| higgs_linearization_residual(&p, e, points)).collect();
            let ratios: Vec<f64> = res.windows(2).map(|w| w[0] / w[1]).collect();
            let notes = format!(
                "residuals {} ratios {}",
                res.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>().join("/"),
                ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join("/")
            );
            let dev: Vec<f64> = ratios.iter().map(|r| (r - 4.0).abs()).collect();
            let mut out = CheckResult::from_residuals(name, &dev, RATIO_TOL, notes);
            out.points = points.len();
            out
        }
        Err(e) => CheckResult::errored(name, RATIO_TOL, &e),
    }
}

/// `exp[−i(α·T (1−γ⁵)/2 + βY/2)]` applied to an unprojected Dirac doublet
/// equals the doublet transformation on the left part plus the phase alone on
/// the right part.
pub fn chiral_transform_check(ew: &EwModel, opts: &VerifyOptions, points: &[Point4]) -> CheckResult {
    let name = "chiral_transform";
    let y = ew.spec.field(LEPTON).and_then(|f| f.charge).unwrap_or(-1.0);
    let outcome = (|| {
        let psi = random_field(sub_seed(opts.seed, 35), &[4, 2], opts.modes, opts.amplitude, false)?;
        let params = random_field(sub_seed(opts.seed, 36), &[4], opts.modes, opts.amplitude, true)?;
        let dirac = DiracAlgebra::standard();
        let pl = chiral_projector(Chirality::Left, &dirac);
        let pr = chiral_projector(Chirality::Right, &dirac);
        let t = pauli_half();
        let r = points
            .iter()
            .map(|x| {
                let p: Vec<f64> = params.eval(x).iter().map(|z| z.re).collect();
                let at = &t[0] * c(p[0], 0.0) + &t[1] * c(p[1], 0.0) + &t[2] * c(p[2], 0.0);
                let phase = c(p[3] * y / 2.0, 0.0);
                // index s * 2 + i: spinor s, doublet i
                let gen = pl.kronecker(&at) + CMat::identity(8, 8) * phase;
                let full = mat_exp(&(gen * (-I)))?;
                let v = CMat::from_column_slice(8, 1, &psi.eval(x));
                let lhs = full * &v;

                let u = group_element(&su_basis(2)?, &[-p[0], -p[1], -p[2]])?;
                let ph = (-I * phase).exp();
                let doublet = CMat::from_row_slice(4, 2, v.as_slice());
                let left = &pl * &doublet * u.transpose();
                let right = &pr * &doublet;
                let rhs_m = (left + right) * ph;
                let rhs = CMat::from_row_slice(8, 1, rhs_m.transpose().as_slice());
                Ok(crate::linalg::max_abs_diff(&lhs, &rhs))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok((r, format!("Y = {y}")))
    })();
    match outcome {
        Ok((r, notes)) => CheckResult::from_residuals(name, &r, CHIRAL_TOL, notes),
        Err(e) => CheckResult::errored(name, CHIRAL_TOL, &e),
    }
}

/// Random ensemble with the Higgs in its exponential parameterization.
pub fn ew_ensemble(ew: &EwModel, opts: &VerifyOptions) -> Result<Ensemble> {
    let generic = Ensemble::random(&ew.spec, opts)?;
    let fields = ew
        .spec
        .fields()
        .iter()
        .zip(generic.fields)
        .map(|(d, f)| -> Result<Box<dyn MatterField>> {
            if d.name == ew.higgs.name {
                let p = HiggsParam::random(sub_seed(opts.seed, 37), opts.modes, opts.amplitude, ew.upsilon)?;
                Ok(Box::new(HiggsField::new(d.clone(), p)))
            } else {
                Ok(f)
            }
        })
        .collect::<Result<_>>()?;
    Ok(Ensemble { fields, ..generic })
}

pub fn ew_ledger(ew: &EwModel) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert(
        "ew_exponent_convention".into(),
        "exp[-i(alpha T + beta Y/2)], engine parameters -alpha/g and -beta/g'".into(),
    );
    m.insert(
        "ew_residual_symmetry".into(),
        format!("alpha_3 = Y_phi beta with couplings absorbed (Y_phi = {})", ew.y_higgs()),
    );
    m.insert("higgs_form".into(), "exponential primary; component form is its first-order expansion".into());
    m.insert("u1_field_strength".into(), "F^B = -i (dB - dB), no commutator".into());
    m
}

/// Generic battery on the electroweak ensemble plus the electroweak checks.
pub fn run_ew_suite(ew: &EwModel, opts: &VerifyOptions) -> VerificationReport {
    let ens = match ew_ensemble(ew, opts) {
        Ok(e) => e,
        Err(_) => return verify::run_suite(&ew.spec, opts),
    };
    let (mut checks, mut ledger) = verify::run_checks(&ew.spec, &ens, opts);
    ledger.extend(ew_ledger(ew));
    checks.push(residual_symmetry_check(ew, opts, &ens.points));
    checks.push(symmetry_direction_scan(ew, opts));
    checks.push(b_law_check(ew, &ens.config, opts, &ens.points));
    checks.push(higgs_linearization_check(ew, opts, &ens.points));
    checks.push(chiral_transform_check(ew, opts, &ens.points));
    verify::assemble_report(&ew.spec, opts, checks, ledger)
}

/// Runs the electroweak suite when `spec` is recognized as electroweak,
/// the generic one otherwise.
pub fn run_any(spec: &ModelSpec, opts: &VerifyOptions) -> VerificationReport {
    match EwModel::detect(spec) {
        Some(ew) => run_ew_suite(&ew, opts),
        None => verify::run_suite(spec, opts),
    }
}
