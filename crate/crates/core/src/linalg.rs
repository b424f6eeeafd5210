//! Dense helpers used by the oracles and the entanglement measures.

use nalgebra::DMatrix;

use crate::C64;

/// `exp(sign * i * t * H)` for Hermitian `H`, through its eigendecomposition.
pub fn expm_hermitian(h: &DMatrix<C64>, t: f64, sign: f64) -> DMatrix<C64> {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = eig.eigenvalues.map(|e| C64::from_polar(1.0, sign * t * e));
    let mut scaled = v.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[k];
    }
    scaled * v.adjoint()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Max-abs deviation of `U U^†` from the identity.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let p = u * u.adjoint();
    let id = DMatrix::<C64>::identity(u.nrows(), u.ncols());
    (p - id).camax()
}
