//! Dense complex matrices and second-order Taylor jets over them.
//!
//! A [`MatJet`] carries a matrix-valued function of the four spacetime
//! coordinates together with its first and (optionally) second partial
//! derivatives at one point. Products follow the Leibniz rule and the
//! matrix exponential of a jet is the exponential of the value together
//! with its exact Fréchet derivatives, so every transformed field can be
//! differentiated without finite differences.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type Complex = Complex64;
pub type CMat = DMatrix<Complex64>;

pub const I: Complex = Complex::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn trace(m: &CMat) -> Complex {
    m.diagonal().iter().sum()
}

/// Largest entry modulus; zero for an empty matrix.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Induced 1-norm (maximum absolute column sum).
pub fn norm_one(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `max |M + M†|`, zero exactly for anti-Hermitian matrices.
pub fn anti_hermitian_defect(m: &CMat) -> f64 {
    max_abs(&(m + m.adjoint()))
}

pub fn hermitian_defect(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `max |M†M − I|`.
pub fn unitarity_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    max_abs(&(m.adjoint() * m - identity(n)))
}

/// Number of jet derivatives carried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Value = 0,
    First = 1,
    Second = 2,
}

impl Order {
    pub fn lower(self) -> Option<Order> {
        match self {
            Order::Value => None,
            Order::First => Some(Order::Value),
            Order::Second => Some(Order::First),
        }
    }

    pub fn raise(self) -> Option<Order> {
        match self {
            Order::Value => Some(Order::First),
            Order::First => Some(Order::Second),
            Order::Second => None,
        }
    }
}

/// Complex scalar with partial derivatives in the four coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarJet {
    pub order: Order,
    pub val: Complex,
    pub grad: [Complex; 4],
    pub hess: [[Complex; 4]; 4],
}

impl ScalarJet {
    pub fn constant(val: Complex, order: Order) -> Self {
        Self {
            order,
            val,
            grad: [Complex::ZERO; 4],
            hess: [[Complex::ZERO; 4]; 4],
        }
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut out = *self;
        out.val *= s;
        for mu in 0..4 {
            out.grad[mu] *= s;
            for nu in 0..4 {
                out.hess[mu][nu] *= s;
            }
        }
        out
    }
}

/// Matrix-valued second-order Taylor jet at one spacetime point.
///
/// `grad` has four entries when `order >= First`; `hess` has sixteen
/// (row-major, symmetric) when `order == Second`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatJet {
    order: Order,
    val: CMat,
    grad: Vec<CMat>,
    hess: Vec<CMat>,
}

impl MatJet {
    pub fn constant(val: CMat, order: Order) -> Self {
        let (r, c) = val.shape();
        let ng = if order >= Order::First { 4 } else { 0 };
        let nh = if order == Order::Second { 16 } else { 0 };
        Self {
            order,
            grad: vec![CMat::zeros(r, c); ng],
            hess: vec![CMat::zeros(r, c); nh],
            val,
        }
    }

    pub fn zeros(rows: usize, cols: usize, order: Order) -> Self {
        Self::constant(CMat::zeros(rows, cols), order)
    }

    pub fn identity(n: usize, order: Order) -> Self {
        Self::constant(identity(n), order)
    }

    /// Assembles `factor · Σ_a coeffs[a] · mats[a]`.
    pub fn lincomb(coeffs: &[ScalarJet], mats: &[CMat], factor: Complex, order: Order) -> Self {
        assert_eq!(coeffs.len(), mats.len(), "lincomb length mismatch");
        assert!(!mats.is_empty(), "lincomb needs at least one matrix");
        let (r, cdim) = mats[0].shape();
        let mut out = Self::zeros(r, cdim, order);
        for (cf, m) in coeffs.iter().zip(mats) {
            assert!(cf.order >= order, "coefficient jet order too low");
            out.val += m * (cf.val * factor);
            for mu in 0..out.grad.len() {
                out.grad[mu] += m * (cf.grad[mu] * factor);
            }
            for (idx, h) in out.hess.iter_mut().enumerate() {
                *h += m * (cf.hess[idx / 4][idx % 4] * factor);
            }
        }
        out
    }

    /// Builds a `rows × cols` jet from row-major scalar entries.
    pub fn from_entries(rows: usize, cols: usize, entries: &[ScalarJet], order: Order) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        let mut out = Self::zeros(rows, cols, order);
        for (k, e) in entries.iter().enumerate() {
            assert!(e.order >= order, "entry jet order too low");
            let (i, j) = (k / cols, k % cols);
            out.val[(i, j)] = e.val;
            for mu in 0..out.grad.len() {
                out.grad[mu][(i, j)] = e.grad[mu];
            }
            for (idx, h) in out.hess.iter_mut().enumerate() {
                h[(i, j)] = e.hess[idx / 4][idx % 4];
            }
        }
        out
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn shape(&self) -> (usize, usize) {
        self.val.shape()
    }

    pub fn value(&self) -> &CMat {
        &self.val
    }

    pub fn into_value(self) -> CMat {
        self.val
    }

    pub fn d(&self, mu: usize) -> &CMat {
        assert!(self.order >= Order::First, "jet carries no first derivatives");
        &self.grad[mu]
    }

    pub fn dd(&self, mu: usize, nu: usize) -> &CMat {
        assert!(self.order == Order::Second, "jet carries no second derivatives");
        &self.hess[mu * 4 + nu]
    }

    pub fn truncate(&self, order: Order) -> Self {
        assert!(order <= self.order, "cannot raise jet order by truncation");
        Self {
            order,
            val: self.val.clone(),
            grad: if order >= Order::First { self.grad.clone() } else { Vec::new() },
            hess: if order == Order::Second { self.hess.clone() } else { Vec::new() },
        }
    }

    /// The jet of `∂_mu` of this function, one order lower.
    pub fn partial(&self, mu: usize) -> Self {
        let order = self
            .order
            .lower()
            .expect("partial of a value-only jet");
        Self {
            order,
            val: self.grad[mu].clone(),
            grad: if order >= Order::First {
                (0..4).map(|nu| self.hess[mu * 4 + nu].clone()).collect()
            } else {
                Vec::new()
            },
            hess: Vec::new(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            order: self.order,
            val: self.val.adjoint(),
            grad: self.grad.iter().map(|m| m.adjoint()).collect(),
            hess: self.hess.iter().map(|m| m.adjoint()).collect(),
        }
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self {
            order: self.order,
            val: &self.val * s,
            grad: self.grad.iter().map(|m| m * s).collect(),
            hess: self.hess.iter().map(|m| m * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex::new(s, 0.0))
    }

    /// In-place `self *= s`.
    pub fn scale_real_mut(&mut self, s: f64) {
        let z = Complex::new(s, 0.0);
        for m in std::iter::once(&mut self.val).chain(self.grad.iter_mut()).chain(self.hess.iter_mut()) {
            *m *= z;
        }
    }

    /// In-place `self += other`; `other` must carry at least this order.
    pub fn add_mut(&mut self, other: &Self) {
        assert!(other.order >= self.order, "jet order mismatch in add_mut");
        self.val += &other.val;
        for (a, b) in self.grad.iter_mut().zip(&other.grad) {
            *a += b;
        }
        for (a, b) in self.hess.iter_mut().zip(&other.hess) {
            *a += b;
        }
    }

    /// Largest `|re| + |im|` over all components. Cheap, and within a
    /// factor √2 of [`MatJet::max_abs`].
    pub fn max_l1(&self) -> f64 {
        self.components()
            .flat_map(|m| m.iter())
            .map(|z| z.re.abs() + z.im.abs())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus over value and all carried derivatives.
    pub fn max_abs(&self) -> f64 {
        self.components().map(max_abs).fold(0.0, f64::max)
    }

    fn components(&self) -> impl Iterator<Item = &CMat> {
        std::iter::once(&self.val).chain(self.grad.iter()).chain(self.hess.iter())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMat, &CMat) -> CMat) -> Self {
        let order = self.order.min(other.order);
        let ng = if order >= Order::First { 4 } else { 0 };
        let nh = if order == Order::Second { 16 } else { 0 };
        Self {
            order,
            val: f(&self.val, &other.val),
            grad: (0..ng).map(|k| f(&self.grad[k], &other.grad[k])).collect(),
            hess: (0..nh).map(|k| f(&self.hess[k], &other.hess[k])).collect(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }
}

impl Add for &MatJet {
    type Output = MatJet;
    fn add(self, rhs: &MatJet) -> MatJet {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &MatJet {
    type Output = MatJet;
    fn sub(self, rhs: &MatJet) -> MatJet {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &MatJet {
    type Output = MatJet;
    fn neg(self) -> MatJet {
        self.scale_real(-1.0)
    }
}

impl Mul for &MatJet {
    type Output = MatJet;
    fn mul(self, rhs: &MatJet) -> MatJet {
        let order = self.order.min(rhs.order);
        let val = &self.val * &rhs.val;
        let grad: Vec<CMat> = if order >= Order::First {
            (0..4)
                .map(|mu| &self.grad[mu] * &rhs.val + &self.val * &rhs.grad[mu])
                .collect()
        } else {
            Vec::new()
        };
        let hess = if order == Order::Second {
            let mut h = vec![CMat::zeros(val.nrows(), val.ncols()); 16];
            for mu in 0..4 {
                for nu in mu..4 {
                    let k = mu * 4 + nu;
                    let m = &self.hess[k] * &rhs.val
                        + &self.grad[mu] * &rhs.grad[nu]
                        + &self.grad[nu] * &rhs.grad[mu]
                        + &self.val * &rhs.hess[k];
                    h[nu * 4 + mu] = m.clone();
                    h[k] = m;
                }
            }
            h
        } else {
            Vec::new()
        };
        MatJet { order, val, grad, hess }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_jet(x: [f64; 4]) -> MatJet {
        // f(x) = [[x0 * x1, x2], [1, x3^2]] evaluated with exact derivatives.
        let mut val = CMat::zeros(2, 2);
        val[(0, 0)] = c(x[0] * x[1], 0.0);
        val[(0, 1)] = c(x[2], 0.0);
        val[(1, 0)] = c(1.0, 0.0);
        val[(1, 1)] = c(x[3] * x[3], 0.0);
        let mut j = MatJet::constant(val, Order::Second);
        j.grad[0][(0, 0)] = c(x[1], 0.0);
        j.grad[1][(0, 0)] = c(x[0], 0.0);
        j.grad[2][(0, 1)] = c(1.0, 0.0);
        j.grad[3][(1, 1)] = c(2.0 * x[3], 0.0);
        j.hess[1][(0, 0)] = c(1.0, 0.0);
        j.hess[4][(0, 0)] = c(1.0, 0.0);
        j.hess[15][(1, 1)] = c(2.0, 0.0);
        j
    }

    #[test]
    fn product_rule_matches_finite_differences() {
        let x = [0.3, -0.7, 1.1, 0.4];
        let p = |x: [f64; 4]| {
            let a = poly_jet(x);
            (&a * &a).into_value()
        };
        let jet = {
            let a = poly_jet(x);
            &a * &a
        };
        let h = 1e-5;
        for mu in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[mu] += h;
            xm[mu] -= h;
            let fd = (p(xp) - p(xm)) / c(2.0 * h, 0.0);
            assert!(max_abs_diff(&fd, jet.d(mu)) < 1e-8);
            for nu in 0..4 {
                let dp = {
                    let a = poly_jet(xp);
                    (&a * &a).d(nu).clone()
                };
                let dm = {
                    let a = poly_jet(xm);
                    (&a * &a).d(nu).clone()
                };
                let fd2 = (dp - dm) / c(2.0 * h, 0.0);
                assert!(max_abs_diff(&fd2, jet.dd(mu, nu)) < 1e-7);
            }
        }
    }

    #[test]
    fn partial_lowers_order() {
        let a = poly_jet([0.1, 0.2, 0.3, 0.4]);
        let d3 = a.partial(3);
        assert_eq!(d3.order(), Order::First);
        assert_eq!(d3.value(), a.d(3));
        assert_eq!(d3.d(3), a.dd(3, 3));
    }

    #[test]
    fn mixed_orders_truncate_to_lowest() {
        let a = poly_jet([0.1, 0.2, 0.3, 0.4]);
        let b = a.truncate(Order::Value);
        assert_eq!((&a * &b).order(), Order::Value);
        assert_eq!((&a + &b).order(), Order::Value);
    }
}
