//! Dense complex LU with partial pivoting for the small N×N systems of the
//! N-soliton determinant engine. Matrices are row-major slices.

use num_complex::Complex64;

pub(crate) struct Lu {
    factors: Vec<Complex64>,
    pivots: Vec<usize>,
    n: usize,
    #[cfg_attr(not(test), allow(dead_code))]
    pub det: Complex64,
}

/// Factorize a row-major n×n matrix. Returns None when a pivot falls below
/// `tiny` times the largest row magnitude (singular to working precision).
pub(crate) fn lu_decompose(mat: &[Complex64], n: usize) -> Option<Lu> {
    debug_assert_eq!(mat.len(), n * n);
    let mut a = mat.to_vec();
    let mut pivots = vec![0usize; n];
    let mut det = Complex64::new(1.0, 0.0);
    let scale: f64 = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let tiny = 1e-14 * scale;

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = a[col * n + col].norm();
        for row in (col + 1)..n {
            let mag = a[row * n + col].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag < tiny {
            return None;
        }
        pivots[col] = pivot_row;
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            det = -det;
        }
        det *= a[col * n + col];
        let inv_pivot = a[col * n + col].inv();
        for row in (col + 1)..n {
            let factor = a[row * n + col] * inv_pivot;
            a[row * n + col] = factor;
            for k in (col + 1)..n {
                let sub = factor * a[col * n + k];
                a[row * n + k] -= sub;
            }
        }
    }

    Some(Lu { factors: a, pivots, n, det })
}

impl Lu {
    /// Solve A x = b in place. Row interchanges are applied to b first
    /// (factors are stored in post-swap layout, LAPACK style), then the
    /// unit-lower and upper triangular solves run on the permuted vector.
    pub(crate) fn solve(&self, b: &mut [Complex64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        for col in 0..n {
            b.swap(col, self.pivots[col]);
        }
        for col in 0..n {
            let bc = b[col];
            for row in (col + 1)..n {
                let sub = self.factors[row * n + col] * bc;
                b[row] -= sub;
            }
        }
        for col in (0..n).rev() {
            b[col] /= self.factors[col * n + col];
            let bc = b[col];
            for row in 0..col {
                let sub = self.factors[row * n + col] * bc;
                b[row] -= sub;
            }
        }
    }
}

/// Determinant of a row-major n×n matrix; None when singular to precision.
#[cfg(test)]
pub(crate) fn det(mat: &[Complex64], n: usize) -> Option<Complex64> {
    lu_decompose(mat, n).map(|lu| lu.det)
}

/// tr(M⁻¹ P) for row-major n×n matrices; None when M is singular.
pub(crate) fn trace_of_solve(m: &[Complex64], p: &[Complex64], n: usize) -> Option<Complex64> {
    let lu = lu_decompose(m, n)?;
    let mut trace = Complex64::new(0.0, 0.0);
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for (i, slot) in col.iter_mut().enumerate() {
            *slot = p[i * n + j];
        }
        lu.solve(&mut col);
        trace += col[j];
    }
    Some(trace)
}
