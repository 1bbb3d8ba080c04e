//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the real symmetric Jacobi rotation that annihilates it.

use num_complex::Complex64;

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Largest tolerated `|A − A†|` entry.
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;
/// Sweeps stop once the off-diagonal Frobenius norm falls below this
/// (scaled by `max(1, ‖A‖_F)`).
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V Λ V†`
    pub fn reconstruct(&self) -> DenseMatrix {
        let lambda = DenseMatrix::diagonal(&self.values);
        self.vectors.matmul(&lambda).matmul(&self.vectors.adjoint())
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn eigen_spectrum(m: &DenseMatrix) -> Result<EigenDecomposition> {
    let residue = m.hermitian_residue();
    if residue.is_nan() || residue > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(residue));
    }
    let n = m.dim();
    let mut a = m.clone();
    let mut v = DenseMatrix::identity(n);
    let threshold = OFF_DIAGONAL_THRESHOLD * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off < threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DenseMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition {
        values,
        vectors,
        sweeps,
    })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    Ok(eigen_spectrum(m)?.values)
}

fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let phase = (apq / r).conj();

    // U = diag(1, phase) · [[c, s], [−s, c]] restricted to (p, q)
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = phase * -s;
    let uqq = phase * c;

    let n = a.dim();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}
