use crate::linalg::{c, identity, CMat, I};

use super::model::Chirality;

/// Dirac matrices in the Dirac basis with metric `diag(+1, −1, −1, −1)`.
///
/// `γ⁰ = diag(I, −I)`, `γⁱ = [[0, σᵢ], [−σᵢ, 0]]`, `γ⁵ = iγ⁰γ¹γ²γ³`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracAlgebra {
    pub gamma: [CMat; 4],
    pub gamma5: CMat,
    pub metric: [f64; 4],
    // γ⁰γ^μ, the contraction used by Ψ̄γ^μ.
    bar_gamma: [CMat; 4],
}

fn pauli(k: usize) -> CMat {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match k {
        1 => CMat::from_row_slice(2, 2, &[z, one, one, z]),
        2 => CMat::from_row_slice(2, 2, &[z, -I, I, z]),
        3 => CMat::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => unreachable!("pauli index {k}"),
    }
}

fn blocks(a: &CMat, b: &CMat, cc: &CMat, d: &CMat) -> CMat {
    let mut m = CMat::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(a);
    m.view_mut((0, 2), (2, 2)).copy_from(b);
    m.view_mut((2, 0), (2, 2)).copy_from(cc);
    m.view_mut((2, 2), (2, 2)).copy_from(d);
    m
}

impl DiracAlgebra {
    pub fn standard() -> Self {
        let z = CMat::zeros(2, 2);
        let id = identity(2);
        let g0 = blocks(&id, &z, &z, &(-&id));
        let gi = |k| {
            let s = pauli(k);
            blocks(&z, &s, &(-&s), &z)
        };
        let gamma = [g0.clone(), gi(1), gi(2), gi(3)];
        let gamma5 = (&gamma[0] * &gamma[1] * &gamma[2] * &gamma[3]) * I;
        let bar_gamma = gamma.clone().map(|g| &g0 * g);
        Self {
            gamma,
            gamma5,
            metric: [1.0, -1.0, -1.0, -1.0],
            bar_gamma,
        }
    }

    /// `γ⁰γ^μ`.
    pub fn bar_gamma(&self, mu: usize) -> &CMat {
        &self.bar_gamma[mu]
    }

    /// `(1 − γ⁵)/2` for left, `(1 + γ⁵)/2` for right, identity otherwise.
    pub fn projector(&self, chirality: Chirality) -> CMat {
        let half = c(0.5, 0.0);
        match chirality {
            Chirality::Left => (identity(4) - &self.gamma5) * half,
            Chirality::Right => (identity(4) + &self.gamma5) * half,
            Chirality::None => identity(4),
        }
    }
}

impl Default for DiracAlgebra {
    fn default() -> Self {
        Self::standard()
    }
}
