use crate::linalg::{c, commutator, hermitian_defect, max_abs_diff, trace, CMat, I};

use super::basis::{AlgebraBasis, GroupKind};

/// Totally antisymmetric `f_abc` with `[T_a, T_b] = i f_abc T_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    len: usize,
    f: Vec<f64>,
}

impl StructureConstants {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.f[(a * self.len + b) * self.len + c]
    }

    pub fn is_zero(&self) -> bool {
        self.f.iter().all(|&v| v == 0.0)
    }
}

/// Extracts `f_abc = −2i Tr([T_a, T_b] T_c)`, valid under `Tr(T_a T_b) = δ_ab/2`.
/// Abelian bases yield all-zero constants.
pub fn structure_constants(basis: &AlgebraBasis) -> StructureConstants {
    let len = basis.len();
    let mut f = vec![0.0; len * len * len];
    if !basis.is_abelian() {
        let ts = basis.generators();
        for a in 0..len {
            for b in 0..len {
                let comm = commutator(&ts[a], &ts[b]);
                for (cc, tc) in ts.iter().enumerate() {
                    let v = trace(&(&comm * tc)) * (-2.0 * I);
                    f[(a * len + b) * len + cc] = v.re;
                }
            }
        }
    }
    StructureConstants { len, f }
}

/// Worst-case deviations from the algebra invariants of a basis.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AlgebraResiduals {
    pub hermiticity: f64,
    pub tracelessness: f64,
    pub orthonormality: f64,
    pub antisymmetry: f64,
    pub closure: f64,
    pub jacobi: f64,
}

impl AlgebraResiduals {
    pub fn max(&self) -> f64 {
        [
            self.hermiticity,
            self.tracelessness,
            self.orthonormality,
            self.antisymmetry,
            self.closure,
            self.jacobi,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn algebra_residuals(basis: &AlgebraBasis) -> AlgebraResiduals {
    let ts = basis.generators();
    let len = ts.len();
    let mut r = AlgebraResiduals {
        hermiticity: ts.iter().map(hermitian_defect).fold(0.0, f64::max),
        ..Default::default()
    };
    if let GroupKind::Su(_) = basis.kind() {
        r.tracelessness = ts.iter().map(|t| trace(t).norm()).fold(0.0, f64::max);
        for a in 0..len {
            for b in 0..len {
                let want = if a == b { 0.5 } else { 0.0 };
                let dev = (trace(&(&ts[a] * &ts[b])) - c(want, 0.0)).norm();
                r.orthonormality = r.orthonormality.max(dev);
            }
        }
    }
    let f = structure_constants(basis);
    for a in 0..len {
        for b in 0..len {
            let mut rebuilt = CMat::zeros(basis.dim(), basis.dim());
            for (cc, tc) in ts.iter().enumerate() {
                let v = f.get(a, b, cc);
                rebuilt += tc * (I * v);
                r.antisymmetry = r
                    .antisymmetry
                    .max((v + f.get(b, a, cc)).abs())
                    .max((v + f.get(a, cc, b)).abs());
                r.jacobi = r.jacobi.max(jacobi_term(&f, a, b, cc).abs());
            }
            r.closure = r.closure.max(max_abs_diff(&commutator(&ts[a], &ts[b]), &rebuilt));
        }
    }
    r
}

// f_ade f_bcd + f_bde f_cad + f_cde f_abd, maximized over the free index e.
fn jacobi_term(f: &StructureConstants, a: usize, b: usize, c: usize) -> f64 {
    let len = f.len();
    let mut worst: f64 = 0.0;
    for e in 0..len {
        let mut s = 0.0;
        for d in 0..len {
            s += f.get(a, d, e) * f.get(b, c, d)
                + f.get(b, d, e) * f.get(c, a, d)
                + f.get(c, d, e) * f.get(a, b, d);
        }
        if s.abs() > worst.abs() {
            worst = s;
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{su_basis, u1_basis};

    // Independent oracle: raw trace formula over explicit matrix products.
    fn oracle_f(basis: &AlgebraBasis, a: usize, b: usize, cc: usize) -> f64 {
        let t = basis.generators();
        let ab = &t[a] * &t[b];
        let ba = &t[b] * &t[a];
        let mut s = c(0.0, 0.0);
        let n = basis.dim();
        for i in 0..n {
            for j in 0..n {
                s += (ab[(i, j)] - ba[(i, j)]) * t[cc][(j, i)];
            }
        }
        (s * c(0.0, -2.0)).re
    }

    fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
        match (a, b, c) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    }

    #[test]
    fn su2_is_levi_civita() {
        let b = su_basis(2).unwrap();
        let f = structure_constants(&b);
        for a in 0..3 {
            for bb in 0..3 {
                for cc in 0..3 {
                    assert!((oracle_f(&b, a, bb, cc) - levi_civita(a, bb, cc)).abs() < 1e-12);
                    assert!((f.get(a, bb, cc) - levi_civita(a, bb, cc)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn su3_standard_gell_mann_values() {
        // Gell-Mann λ1..λ8 positions in this crate's ordering.
        let gm = [0, 3, 6, 1, 4, 2, 5, 7];
        let b = su_basis(3).unwrap();
        let f = structure_constants(&b);
        let fg = |x: usize, y: usize, z: usize| f.get(gm[x - 1], gm[y - 1], gm[z - 1]);
        let og = |x: usize, y: usize, z: usize| oracle_f(&b, gm[x - 1], gm[y - 1], gm[z - 1]);
        let s3 = 3.0_f64.sqrt();
        for (x, y, z, want) in [(1, 2, 3, 1.0), (1, 4, 7, 0.5), (4, 5, 8, s3 / 2.0)] {
            assert!((og(x, y, z) - want).abs() < 1e-12);
            assert!((fg(x, y, z) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_entries_vanish() {
        for n in 2..=4 {
            let f = structure_constants(&su_basis(n).unwrap());
            for a in 0..f.len() {
                for b in 0..f.len() {
                    assert_eq!(f.get(a, a, b), 0.0);
                }
            }
        }
    }

    #[test]
    fn invariants_hold_for_small_n() {
        for n in 2..=5 {
            let r = algebra_residuals(&su_basis(n).unwrap());
            assert!(r.hermiticity < 1e-13);
            assert!(r.tracelessness < 1e-13);
            assert!(r.orthonormality < 1e-12);
            assert!(r.antisymmetry < 1e-12);
            assert!(r.closure < 1e-12);
            assert!(r.jacobi < 1e-11);
        }
    }

    #[test]
    fn abelian_constants_are_zero() {
        let f = structure_constants(&u1_basis(1.0));
        assert_eq!(f.len(), 1);
        assert!(f.is_zero());
        assert_eq!(algebra_residuals(&u1_basis(3.0)).max(), 0.0);
    }
}
