//! Generator bases, structure constants, the matrix exponential and finite
//! group elements.

mod basis;
mod expm;
mod structure;

pub use basis::{su_basis, u1_basis, u1_basis_uncharged, AlgebraBasis, GroupKind};
pub use expm::{exp_jet, mat_exp, mat_exp_with, squarings_for};
pub use structure::{algebra_residuals, structure_constants, AlgebraResiduals, StructureConstants};

use crate::error::{invalid, Result};
use crate::linalg::{CMat, MatJet, Order, ScalarJet, I};

/// `exp(i g Σ_a params_a T_a)`.
pub fn group_element(basis: &AlgebraBasis, params: &[f64]) -> Result<CMat> {
    check_len(basis, params.len())?;
    let mut a = CMat::zeros(basis.dim(), basis.dim());
    for (p, t) in params.iter().zip(basis.generators()) {
        a += t * (I * (basis.coupling() * p));
    }
    mat_exp(&a)
}

/// Jet version of [`group_element`] for spacetime-dependent parameters.
pub fn group_element_jet(basis: &AlgebraBasis, params: &[ScalarJet], order: Order) -> Result<MatJet> {
    check_len(basis, params.len())?;
    let a = MatJet::lincomb(params, basis.generators(), I * basis.coupling(), order);
    Ok(exp_jet(&a))
}

fn check_len(basis: &AlgebraBasis, got: usize) -> Result<()> {
    if got != basis.len() {
        return Err(invalid(format!(
            "expected {} group parameters for {}, got {got}",
            basis.len(),
            basis.kind()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity, max_abs_diff, unitarity_defect};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn zero_params_identity() {
        let b = su_basis(3).unwrap();
        assert_eq!(group_element(&b, &[0.0; 8]).unwrap(), identity(3));
    }

    #[test]
    fn su2_full_turn_is_minus_identity() {
        let b = su_basis(2).unwrap();
        let u = group_element(&b, &[0.0, 0.0, 2.0 * PI]).unwrap();
        assert!(max_abs_diff(&u, &(identity(2) * c(-1.0, 0.0))) < 1e-14);
    }

    #[test]
    fn u1_phase() {
        let b = u1_basis(1.0);
        let beta = 0.83;
        let v = group_element(&b, &[beta]).unwrap();
        assert!((v[(0, 0)] - (I * (beta / 2.0)).exp()).norm() < 1e-15);
        let zero_charge = group_element(&u1_basis(0.0), &[5.0]).unwrap();
        assert_eq!(zero_charge[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn length_mismatch() {
        assert!(group_element(&su_basis(2).unwrap(), &[1.0]).is_err());
    }

    #[test]
    fn inverse_pairs_and_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in 2..=4 {
            let b = su_basis(n).unwrap().with_coupling(0.9);
            for _ in 0..25 {
                let mut p: Vec<f64> = (0..b.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                let target = rng.random_range(0.0..3.0);
                p.iter_mut().for_each(|v| *v *= target / norm);
                let neg: Vec<f64> = p.iter().map(|v| -v).collect();
                let u = group_element(&b, &p).unwrap();
                let uinv = group_element(&b, &neg).unwrap();
                assert!(max_abs_diff(&(&u * &uinv), &identity(n)) < 1e-12);
                assert!(unitarity_defect(&u) < 1e-12);
                assert!((u.determinant().norm() - 1.0).abs() < 1e-12);
            }
        }
    }
}
