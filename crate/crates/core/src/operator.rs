//! Banded single-mode operators.
//!
//! Every Jaynes-Cummings block moves the photon number by at most one, so a
//! single-mode operator is stored as three bands indexed by the *input*
//! photon number:
//!
//! ```text
//! (O x)[n]     += diag[n]  * x[n]
//! (O x)[n - 1] += lower[n] * x[n]     (n >= 1)
//! (O x)[n + 1] += raise[n] * x[n]
//! ```
//!
//! Application is O(dim) per mode vector and O(dim²) per joint state.
//! Whatever `raise` pushes past the last retained level is dropped and its
//! squared magnitude reported, so callers can enforce a truncation policy.

use nalgebra::DMatrix;

use crate::fock::ModeVector;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Which register mode an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Rows of the joint coefficient matrix.
    A,
    /// Columns of the joint coefficient matrix.
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeOperator {
    dim: usize,
    diag: Option<Vec<C64>>,
    lower: Option<Vec<C64>>,
    raise: Option<Vec<C64>>,
}

impl ModeOperator {
    pub fn zero(dim: usize) -> Self {
        Self { dim, diag: None, lower: None, raise: None }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(vec![C64::new(1.0, 0.0); dim])
    }

    pub fn diagonal(diag: Vec<C64>) -> Self {
        Self { dim: diag.len(), diag: Some(diag), lower: None, raise: None }
    }

    /// `coeffs[n]` maps `|n>` to `|n-1>`; `coeffs[0]` is ignored.
    pub fn lowering(mut coeffs: Vec<C64>) -> Self {
        if let Some(c) = coeffs.first_mut() {
            *c = ZERO;
        }
        Self { dim: coeffs.len(), diag: None, lower: Some(coeffs), raise: None }
    }

    /// `coeffs[n]` maps `|n>` to `|n+1>`.
    pub fn raising(coeffs: Vec<C64>) -> Self {
        Self { dim: coeffs.len(), diag: None, lower: None, raise: Some(coeffs) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diag(&self) -> Option<&[C64]> {
        self.diag.as_deref()
    }

    pub fn lower(&self) -> Option<&[C64]> {
        self.lower.as_deref()
    }

    pub fn raise(&self) -> Option<&[C64]> {
        self.raise.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        let empty = |b: &Option<Vec<C64>>| b.as_ref().is_none_or(|v| v.iter().all(|c| *c == ZERO));
        empty(&self.diag) && empty(&self.lower) && empty(&self.raise)
    }

    /// `sum_k w_k O_k`. All operators must share one dimension.
    pub fn combine(terms: &[(C64, &ModeOperator)]) -> Self {
        let dim = terms.first().map_or(0, |(_, op)| op.dim);
        assert!(terms.iter().all(|(_, op)| op.dim == dim), "mixed operator dimensions");
        let band = |pick: fn(&ModeOperator) -> &Option<Vec<C64>>| -> Option<Vec<C64>> {
            let mut acc: Option<Vec<C64>> = None;
            for (w, op) in terms {
                if *w == ZERO {
                    continue;
                }
                if let Some(v) = pick(op) {
                    let out = acc.get_or_insert_with(|| vec![ZERO; dim]);
                    for (o, x) in out.iter_mut().zip(v) {
                        *o += w * x;
                    }
                }
            }
            acc
        };
        Self {
            dim,
            diag: band(|op| &op.diag),
            lower: band(|op| &op.lower),
            raise: band(|op| &op.raise),
        }
    }

    pub fn scaled(&self, w: C64) -> Self {
        Self::combine(&[(w, self)])
    }

    /// Complex conjugate of every matrix element (not the adjoint).
    pub fn conj(&self) -> Self {
        let c = |b: &Option<Vec<C64>>| b.as_ref().map(|v| v.iter().map(|x| x.conj()).collect());
        Self { dim: self.dim, diag: c(&self.diag), lower: c(&self.lower), raise: c(&self.raise) }
    }

    /// Returns the image and the squared norm pushed past the top level.
    pub fn apply_vec(&self, x: &ModeVector) -> (ModeVector, f64) {
        let x = x.amplitudes();
        assert_eq!(x.len(), self.dim, "operator/vector dimension mismatch");
        let mut out = vec![ZERO; self.dim];
        let mut leaked = 0.0;
        if let Some(d) = &self.diag {
            for n in 0..self.dim {
                out[n] += d[n] * x[n];
            }
        }
        if let Some(l) = &self.lower {
            for n in 1..self.dim {
                out[n - 1] += l[n] * x[n];
            }
        }
        if let Some(r) = &self.raise {
            for n in 0..self.dim - 1 {
                out[n + 1] += r[n] * x[n];
            }
            leaked += (r[self.dim - 1] * x[self.dim - 1]).norm_sqr();
        }
        (ModeVector::new(out), leaked)
    }

    /// Apply to one mode of a joint coefficient matrix. Returns the image and
    /// the squared norm pushed past the top level of that mode.
    pub fn apply(&self, c: &DMatrix<C64>, axis: Axis) -> (DMatrix<C64>, f64) {
        let dim = self.dim;
        assert_eq!(c.nrows(), dim, "operator/state dimension mismatch");
        assert_eq!(c.ncols(), dim, "operator/state dimension mismatch");
        let mut out = DMatrix::from_element(dim, dim, ZERO);
        let mut leaked = 0.0;
        let src = c.as_slice();
        let dst = out.as_mut_slice();
        // Column-major: element (n, m) lives at m * dim + n.
        match axis {
            Axis::A => {
                for m in 0..dim {
                    let col = &src[m * dim..(m + 1) * dim];
                    let o = &mut dst[m * dim..(m + 1) * dim];
                    if let Some(d) = &self.diag {
                        for n in 0..dim {
                            o[n] += d[n] * col[n];
                        }
                    }
                    if let Some(l) = &self.lower {
                        for n in 1..dim {
                            o[n - 1] += l[n] * col[n];
                        }
                    }
                    if let Some(r) = &self.raise {
                        for n in 0..dim - 1 {
                            o[n + 1] += r[n] * col[n];
                        }
                        leaked += (r[dim - 1] * col[dim - 1]).norm_sqr();
                    }
                }
            }
            Axis::B => {
                for m in 0..dim {
                    let col = &src[m * dim..(m + 1) * dim];
                    if let Some(d) = &self.diag {
                        let w = d[m];
                        if w != ZERO {
                            axpy(w, col, &mut dst[m * dim..(m + 1) * dim]);
                        }
                    }
                    if let Some(l) = &self.lower {
                        let w = l[m];
                        if m >= 1 && w != ZERO {
                            axpy(w, col, &mut dst[(m - 1) * dim..m * dim]);
                        }
                    }
                    if let Some(r) = &self.raise {
                        let w = r[m];
                        if w != ZERO {
                            if m + 1 < dim {
                                axpy(w, col, &mut dst[(m + 1) * dim..(m + 2) * dim]);
                            } else {
                                leaked += w.norm_sqr() * col.iter().map(|x| x.norm_sqr()).sum::<f64>();
                            }
                        }
                    }
                }
            }
        }
        (out, leaked)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let dim = self.dim;
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for n in 0..dim {
            if let Some(d) = &self.diag {
                m[(n, n)] += d[n];
            }
            if let Some(l) = &self.lower {
                if n >= 1 {
                    m[(n - 1, n)] += l[n];
                }
            }
            if let Some(r) = &self.raise {
                if n + 1 < dim {
                    m[(n + 1, n)] += r[n];
                }
            }
        }
        m
    }
}

#[inline]
fn axpy(w: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += w * xi;
    }
}
