use crate::error::{invalid, Result};
use crate::linalg::{c, CMat, I};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupKind {
    /// SU(n), n ≥ 2.
    Su(usize),
    /// U(1) realized as a single scalar generator.
    U1,
}

impl std::fmt::Display for GroupKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupKind::Su(n) => write!(f, "SU({n})"),
            GroupKind::U1 => write!(f, "U(1)"),
        }
    }
}

/// Hermitian generators of one factor group together with its coupling.
///
/// SU(n) generators are normalized to `Tr(T_a T_b) = δ_ab / 2`. A U(1)
/// basis holds the single 1×1 generator `charge / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraBasis {
    kind: GroupKind,
    generators: Vec<CMat>,
    coupling: f64,
    charge: Option<f64>,
}

impl AlgebraBasis {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// Matrix dimension of the fundamental representation (1 for U(1)).
    pub fn dim(&self) -> usize {
        self.generators[0].nrows()
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn charge(&self) -> Option<f64> {
        self.charge
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.kind, GroupKind::U1)
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    /// Multiplies every generator by `scale`. The result no longer obeys the
    /// δ_ab/2 trace convention; it exists to show that invariance does not
    /// depend on that convention.
    pub fn with_normalization(mut self, scale: f64) -> Self {
        for t in &mut self.generators {
            *t *= c(scale, 0.0);
        }
        self
    }
}

/// Generalized Gell-Mann basis of su(n).
///
/// Ordering: symmetric pairs `(j,k)`, `j<k`, lexicographically; then the
/// antisymmetric pairs in the same order; then the `n-1` diagonal
/// generators. For n = 2 this is `{σ₁, σ₂, σ₃}/2`.
pub fn su_basis(n: usize) -> Result<AlgebraBasis> {
    if n < 2 {
        return Err(invalid(format!("SU(n) needs n >= 2, got {n}")));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .collect();
    let mut generators = Vec::with_capacity(n * n - 1);
    for &(j, k) in &pairs {
        let mut t = CMat::zeros(n, n);
        t[(j, k)] = c(0.5, 0.0);
        t[(k, j)] = c(0.5, 0.0);
        generators.push(t);
    }
    for &(j, k) in &pairs {
        let mut t = CMat::zeros(n, n);
        t[(j, k)] = -I * 0.5;
        t[(k, j)] = I * 0.5;
        generators.push(t);
    }
    for l in 1..n {
        let norm = 1.0 / (2.0 * (l * (l + 1)) as f64).sqrt();
        let mut t = CMat::zeros(n, n);
        for i in 0..l {
            t[(i, i)] = c(norm, 0.0);
        }
        t[(l, l)] = c(-(l as f64) * norm, 0.0);
        generators.push(t);
    }
    Ok(AlgebraBasis {
        kind: GroupKind::Su(n),
        generators,
        coupling: 1.0,
        charge: None,
    })
}

/// U(1) basis whose single generator is `charge / 2`.
pub fn u1_basis(charge: f64) -> AlgebraBasis {
    AlgebraBasis {
        kind: GroupKind::U1,
        generators: vec![CMat::from_element(1, 1, c(charge / 2.0, 0.0))],
        coupling: 1.0,
        charge: Some(charge),
    }
}

/// U(1) basis with no group-wide charge; every field it acts on must carry
/// its own. The generator is the unit 1×1 matrix.
pub fn u1_basis_uncharged() -> AlgebraBasis {
    AlgebraBasis {
        charge: None,
        ..u1_basis(2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_defect, max_abs_diff, trace};

    fn pauli() -> [CMat; 3] {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        [
            CMat::from_row_slice(2, 2, &[z, one, one, z]),
            CMat::from_row_slice(2, 2, &[z, -I, I, z]),
            CMat::from_row_slice(2, 2, &[one, z, z, -one]),
        ]
    }

    #[test]
    fn su2_is_half_pauli() {
        let b = su_basis(2).unwrap();
        assert_eq!(b.len(), 3);
        for (t, s) in b.generators().iter().zip(pauli()) {
            assert!(max_abs_diff(t, &(s * c(0.5, 0.0))) < 1e-16);
        }
    }

    #[test]
    fn trace_orthonormality_all_pairs() {
        for n in 2..=5 {
            let b = su_basis(n).unwrap();
            assert_eq!(b.len(), n * n - 1);
            for (a, ta) in b.generators().iter().enumerate() {
                assert!(hermitian_defect(ta) < 1e-13);
                assert!(trace(ta).norm() < 1e-13);
                for (bb, tb) in b.generators().iter().enumerate() {
                    let want = if a == bb { 0.5 } else { 0.0 };
                    assert!((trace(&(ta * tb)) - c(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn su3_diagonal_generators() {
        let b = su_basis(3).unwrap();
        let d1 = &b.generators()[6];
        let d2 = &b.generators()[7];
        let s3 = 3.0_f64.sqrt();
        let want1 = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(0.5, 0.0),
            c(-0.5, 0.0),
            c(0.0, 0.0),
        ]));
        let want2 = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0 / (2.0 * s3), 0.0),
            c(1.0 / (2.0 * s3), 0.0),
            c(-2.0 / (2.0 * s3), 0.0),
        ]));
        assert!(max_abs_diff(d1, &want1) < 1e-15);
        assert!(max_abs_diff(d2, &want2) < 1e-15);
    }

    #[test]
    fn small_n_rejected() {
        assert!(su_basis(0).is_err());
        assert!(su_basis(1).is_err());
    }

    #[test]
    fn u1_generators() {
        assert_eq!(u1_basis(1.0).generators()[0][(0, 0)], c(0.5, 0.0));
        assert_eq!(u1_basis(0.0).generators()[0][(0, 0)], c(0.0, 0.0));
        assert_eq!(u1_basis(-2.0).generators()[0][(0, 0)], c(-1.0, 0.0));
        assert!(u1_basis(1.0).is_abelian());
    }
}
