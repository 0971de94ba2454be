//! Spacetime fields as truncated Fourier series on the periodic 4-torus
//! `[0, 2π)^4`.
//!
//! A term `c_k exp(i k·x)` differentiates to `i k_μ c_k exp(i k·x)`, so
//! every partial derivative is exact.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::linalg::{Complex, Order, ScalarJet};

pub type Mode = [i32; 4];

/// Number of nonzero random modes drawn per field entry (besides the constant).
pub const RANDOM_MODES: usize = 3;

/// Spacetime point with coordinates wrapped into `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point4([f64; 4]);

impl Point4 {
    pub fn new(x: [f64; 4]) -> Self {
        Self(x.map(|v| {
            let w = v.rem_euclid(TAU);
            // rem_euclid can round up to exactly TAU for tiny negative inputs.
            if w >= TAU {
                0.0
            } else {
                w
            }
        }))
    }

    pub fn origin() -> Self {
        Self([0.0; 4])
    }

    pub fn coords(&self) -> [f64; 4] {
        self.0
    }

    /// Same point shifted by `h` along axis `mu` (wrapped).
    pub fn shifted(&self, mu: usize, h: f64) -> Self {
        let mut x = self.0;
        x[mu] += h;
        Self::new(x)
    }
}

/// Scalar field `Σ_k c_k exp(i k·x)` with finitely many modes.
///
/// Real-flagged fields satisfy `c_{-k} = conj(c_k)` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierScalar {
    terms: Vec<(Mode, Complex)>,
    real: bool,
}

fn neg(k: Mode) -> Mode {
    k.map(|v| -v)
}

impl FourierScalar {
    /// Builds a field from `(mode, coefficient)` pairs. Repeated modes are
    /// summed. With `real` set the conjugate partner of every mode must be
    /// present and match to within `1e-14` relative; the stored partners
    /// are then made exactly conjugate.
    pub fn new(terms: impl IntoIterator<Item = (Mode, Complex)>, real: bool) -> Result<Self> {
        let mut map: BTreeMap<Mode, Complex> = BTreeMap::new();
        for (k, c) in terms {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite(format!("Fourier coefficient at mode {k:?}")));
            }
            *map.entry(k).or_default() += c;
        }
        if real {
            for (&k, &c) in &map {
                let partner = map.get(&neg(k)).copied().unwrap_or_default();
                let tol = 1e-14 * c.norm().max(1.0);
                if (partner - c.conj()).norm() > tol {
                    return Err(invalid(format!(
                        "real field violates conjugate symmetry at mode {k:?}"
                    )));
                }
            }
            let keys: Vec<Mode> = map.keys().copied().collect();
            for k in keys {
                let nk = neg(k);
                if k == nk {
                    if let Some(c) = map.get_mut(&k) {
                        c.im = 0.0;
                    }
                } else if k > nk {
                    let c = map[&nk].conj();
                    map.insert(k, c);
                }
            }
        }
        Ok(Self {
            terms: map.into_iter().collect(),
            real,
        })
    }

    pub fn zero(real: bool) -> Self {
        Self {
            terms: Vec::new(),
            real,
        }
    }

    pub fn constant(c: Complex) -> Self {
        Self {
            terms: vec![([0; 4], c)],
            real: c.im == 0.0,
        }
    }

    pub fn real_constant(v: f64) -> Self {
        Self {
            terms: vec![([0; 4], Complex::new(v, 0.0))],
            real: true,
        }
    }

    /// Real field `c e^{ik·x} + conj(c) e^{-ik·x}` (or `2 Re c` for `k = 0`).
    pub fn real_mode(k: Mode, c: Complex) -> Self {
        let terms = if k == [0; 4] {
            vec![(k, Complex::new(2.0 * c.re, 0.0))]
        } else {
            vec![(k, c), (neg(k), c.conj())]
        };
        Self::new(terms, true).expect("conjugate pair is real by construction")
    }

    pub fn terms(&self) -> &[(Mode, Complex)] {
        &self.terms
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// `true` when the field has no spacetime dependence.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(k, _)| *k == [0; 4])
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|&(k, c)| (k, c * s)).collect(),
            real: self.real,
        }
    }

    /// Keeps only the constant mode.
    pub fn zero_mode_only(&self) -> Self {
        Self {
            terms: self.terms.iter().filter(|(k, _)| *k == [0; 4]).copied().collect(),
            real: self.real,
        }
    }

    pub fn eval(&self, x: &Point4) -> Complex {
        let xs = x.coords();
        let mut s = Complex::ZERO;
        for &(k, c) in &self.terms {
            let phase: f64 = (0..4).map(|m| k[m] as f64 * xs[m]).sum();
            s += c * Complex::from_polar(1.0, phase);
        }
        if self.real {
            debug_assert!(s.im.abs() < 1e-13 * (1.0 + s.re.abs()), "real field evaluated complex");
            s.im = 0.0;
        }
        s
    }

    /// Value and exact derivatives up to `order` at `x`.
    pub fn eval_jet(&self, x: &Point4, order: Order) -> ScalarJet {
        let xs = x.coords();
        let mut jet = ScalarJet::constant(Complex::ZERO, order);
        for &(k, c) in &self.terms {
            let phase: f64 = (0..4).map(|m| k[m] as f64 * xs[m]).sum();
            let e = c * Complex::from_polar(1.0, phase);
            jet.val += e;
            if order >= Order::First {
                for (g, km) in jet.grad.iter_mut().zip(k) {
                    *g += e * Complex::new(0.0, km as f64);
                }
            }
            if order == Order::Second {
                for mu in 0..4 {
                    for nu in 0..4 {
                        jet.hess[mu][nu] -= e * (k[mu] as f64 * k[nu] as f64);
                    }
                }
            }
        }
        if self.real {
            jet.val.im = 0.0;
            for mu in 0..4 {
                jet.grad[mu].im = 0.0;
                for nu in 0..4 {
                    jet.hess[mu][nu].im = 0.0;
                }
            }
        }
        jet
    }

    /// `∂_mu` of the field: `c_k ↦ i k_mu c_k`; modes with `k_mu = 0` drop out.
    pub fn partial(&self, mu: usize) -> Result<Self> {
        check_index(mu)?;
        Ok(Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k[mu] != 0)
                .map(|&(k, c)| (k, c * Complex::new(0.0, k[mu] as f64)))
                .collect(),
            real: self.real,
        })
    }
}

fn check_index(mu: usize) -> Result<()> {
    if mu > 3 {
        return Err(invalid(format!("Lorentz index {mu} out of range 0..=3")));
    }
    Ok(())
}

/// Multi-indexed collection of Fourier scalars, stored row-major over `shape`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentField {
    shape: Vec<usize>,
    entries: Vec<FourierScalar>,
}

impl ComponentField {
    pub fn new(shape: Vec<usize>, entries: Vec<FourierScalar>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if entries.len() != len {
            return Err(invalid(format!(
                "shape {shape:?} needs {len} entries, got {}",
                entries.len()
            )));
        }
        Ok(Self { shape, entries })
    }

    pub fn zeros(shape: Vec<usize>, real: bool) -> Self {
        let len = shape.iter().product();
        Self {
            entries: vec![FourierScalar::zero(real); len],
            shape,
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn entries(&self) -> &[FourierScalar] {
        &self.entries
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(FourierScalar::is_real)
    }

    fn flat(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.shape.len(), "index rank mismatch");
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| {
            assert!(i < n, "index {i} out of range {n}");
            acc * n + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &FourierScalar {
        &self.entries[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: FourierScalar) {
        let k = self.flat(idx);
        self.entries[k] = value;
    }

    pub fn eval(&self, x: &Point4) -> Vec<Complex> {
        self.entries.iter().map(|e| e.eval(x)).collect()
    }

    pub fn eval_jets(&self, x: &Point4, order: Order) -> Vec<ScalarJet> {
        self.entries.iter().map(|e| e.eval_jet(x, order)).collect()
    }

    pub fn partial(&self, mu: usize) -> Result<Self> {
        Ok(Self {
            shape: self.shape.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| e.partial(mu))
                .collect::<Result<_>>()?,
        })
    }

    pub fn map_entries(&self, f: impl Fn(&FourierScalar) -> FourierScalar) -> Self {
        Self {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

/// Seeded random field. Each entry gets a constant term plus
/// [`RANDOM_MODES`] distinct nonzero modes with components in `[-K, K]`;
/// every coefficient has modulus at most `amplitude`. Real fields pair each
/// mode with its conjugate.
pub fn random_field(
    seed: u64,
    shape: &[usize],
    max_mode: u32,
    amplitude: f64,
    real: bool,
) -> Result<ComponentField> {
    if !amplitude.is_finite() || amplitude < 0.0 {
        return Err(invalid(format!("amplitude must be finite and >= 0, got {amplitude}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len: usize = shape.iter().product();
    let kmax = max_mode as i32;
    let mut entries = Vec::with_capacity(len);
    for _ in 0..len {
        let mut terms: Vec<(Mode, Complex)> = Vec::new();
        let draw = |rng: &mut ChaCha8Rng| {
            Complex::from_polar(amplitude * rng.random::<f64>(), TAU * rng.random::<f64>())
        };
        if real {
            terms.push(([0; 4], Complex::new(amplitude * rng.random_range(-1.0..=1.0), 0.0)));
        } else {
            let c0 = draw(&mut rng);
            terms.push(([0; 4], c0));
        }
        let available = ((2 * kmax + 1).pow(4) - 1) / 2;
        let wanted = RANDOM_MODES.min(available as usize);
        let mut used: Vec<Mode> = Vec::new();
        while used.len() < wanted {
            let k: Mode = std::array::from_fn(|_| rng.random_range(-kmax..=kmax));
            if k == [0; 4] || used.contains(&k) || used.contains(&neg(k)) {
                continue;
            }
            used.push(k);
            let cf = draw(&mut rng);
            terms.push((k, cf));
            if real {
                terms.push((neg(k), cf.conj()));
            }
        }
        entries.push(FourierScalar::new(terms, real)?);
    }
    ComponentField::new(shape.to_vec(), entries)
}

/// `count` seeded uniform points in `[0, 2π)^4`.
pub fn sample_points(seed: u64, count: usize) -> Result<Vec<Point4>> {
    if count == 0 {
        return Err(invalid("sample count must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| Point4::new(std::array::from_fn(|_| rng.random_range(0.0..TAU))))
        .collect())
}
