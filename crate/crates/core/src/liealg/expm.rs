//! Matrix exponential by scaling and squaring with a truncated Taylor series.
//!
//! The same routine runs over [`MatJet`]s: the first-order part of the
//! series is `Σ_k 1/k! Σ_{j<k} A^j (∂A) A^{k-1-j}` and squaring propagates
//! it through the Leibniz rule, so derivatives of group elements come out
//! exact to rounding.

use crate::error::{Error, Result};
use crate::linalg::{norm_one, CMat, MatJet, Order};

/// Scaled exponent norm targeted before the series is summed.
const SCALED_NORM: f64 = 0.5;
const MAX_TERMS: usize = 40;

/// `exp(a)` for a square complex matrix.
pub fn mat_exp(a: &CMat) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::InvalidArgument(format!(
            "mat_exp needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("mat_exp input".into()));
    }
    Ok(exp_jet(&MatJet::constant(a.clone(), Order::Value)).into_value())
}

/// Number of squarings needed to bring `norm` under the series radius.
pub fn squarings_for(norm: f64) -> u32 {
    if norm <= SCALED_NORM {
        0
    } else {
        (norm / SCALED_NORM).log2().ceil() as u32
    }
}

/// Fixed-parameter variant: `squarings` halvings and a series truncated
/// after `terms` terms. Used to study convergence.
pub fn mat_exp_with(a: &CMat, squarings: u32, terms: usize) -> CMat {
    let jet = MatJet::constant(a.clone(), Order::Value);
    exp_fixed(&jet, squarings, Some(terms)).into_value()
}

/// Exponential of a matrix jet, including its exact derivatives.
pub fn exp_jet(a: &MatJet) -> MatJet {
    exp_fixed(a, squarings_for(norm_one(a.value())), None)
}

fn exp_fixed(a: &MatJet, squarings: u32, terms: Option<usize>) -> MatJet {
    let (n, m) = a.shape();
    assert_eq!(n, m, "exponent must be square");
    let x = a.scale_real(0.5_f64.powi(squarings as i32));
    let mut sum = MatJet::identity(n, a.order());
    let mut term = sum.clone();
    let limit = terms.unwrap_or(MAX_TERMS);
    for k in 1..limit {
        term = &term * &x;
        term.scale_real_mut(1.0 / k as f64);
        sum.add_mut(&term);
        if terms.is_none() && term.max_l1() <= 1e-18 * sum.max_l1().max(1.0) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
