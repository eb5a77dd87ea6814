//! Dense complex kernels: blocked LU with partial pivoting, Kronecker
//! accumulation, Hermitian eigendecomposition.
//!
//! Steady-state solves factor d²×d² Liouvillians (d² ≈ 10³ for the default
//! sweeps), which is far past the point where an unblocked elimination is
//! memory-bound. The factorization below is a right-looking blocked LU whose
//! trailing updates go through `matrixmultiply::zgemm`; everything operates
//! in place on column-major storage.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Panel width for the blocked factorization.
const LU_BLOCK: usize = 64;

/// LU factors of a square complex matrix, P·A = L·U with partial pivoting.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    /// Packed L (unit lower, below diagonal) and U (upper incl. diagonal).
    lu: CMatrix,
    /// `pivots[j]` is the row swapped into position j at elimination step j.
    pivots: Vec<usize>,
}

/// Factor `a` in place. Fails only on an exactly zero pivot; near-singularity
/// is reported through [`LuFactors::rcond_estimate`] so callers can apply
/// their own threshold.
pub fn lu_factor(mut a: CMatrix) -> Result<LuFactors> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "lu_factor requires a square matrix");
    let mut pivots = vec![0usize; n];
    let ld = n;
    let data = a.as_mut_slice();

    let mut k0 = 0;
    while k0 < n {
        let kb = LU_BLOCK.min(n - k0);

        // Panel factorization on columns k0..k0+kb, rows k0..n.
        for j in k0..k0 + kb {
            let mut p = j;
            let mut best = data[j + j * ld].norm_sqr();
            for i in j + 1..n {
                let v = data[i + j * ld].norm_sqr();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            pivots[j] = p;
            if best == 0.0 {
                return Err(Error::IllConditioned { rcond: 0.0 });
            }
            if p != j {
                for c in 0..n {
                    data.swap(j + c * ld, p + c * ld);
                }
            }
            let inv = C64::new(1.0, 0.0) / data[j + j * ld];
            for i in j + 1..n {
                data[i + j * ld] *= inv;
            }
            // Rank-1 update restricted to the remaining panel columns.
            for jj in j + 1..k0 + kb {
                let mult = data[j + jj * ld];
                if mult != C64::new(0.0, 0.0) {
                    for i in j + 1..n {
                        let lij = data[i + j * ld];
                        data[i + jj * ld] -= mult * lij;
                    }
                }
            }
        }

        let rest = k0 + kb;
        if rest < n {
            // U12 = L11^{-1} A12: unit-lower forward substitution per column.
            for c in rest..n {
                for r in k0 + 1..k0 + kb {
                    let mut acc = data[r + c * ld];
                    for rr in k0..r {
                        acc -= data[r + rr * ld] * data[rr + c * ld];
                    }
                    data[r + c * ld] = acc;
                }
            }
            // A22 -= L21 · U12 (the flops live here).
            let m2 = n - rest;
            unsafe {
                let base = data.as_mut_ptr();
                matrixmultiply::zgemm(
                    matrixmultiply::CGemmOption::Standard,
                    matrixmultiply::CGemmOption::Standard,
                    m2,
                    kb,
                    m2,
                    [-1.0, 0.0],
                    base.add(rest + k0 * ld) as *const [f64; 2],
                    1,
                    ld as isize,
                    base.add(k0 + rest * ld) as *const [f64; 2],
                    1,
                    ld as isize,
                    [1.0, 0.0],
                    base.add(rest + rest * ld) as *mut [f64; 2],
                    1,
                    ld as isize,
                );
            }
        }
        k0 += kb;
    }

    Ok(LuFactors { n, lu: a, pivots })
}

impl LuFactors {
    /// Crude reciprocal condition estimate: min|U_jj| / max|U_jj|.
    pub fn rcond_estimate(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for j in 0..self.n {
            let d = self.lu[(j, j)].norm();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if hi == 0.0 {
            0.0
        } else {
            lo / hi
        }
    }

    /// Solve A x = b in place.
    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.n;
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let ld = n;
        let lu = self.lu.as_slice();
        for j in 0..n {
            b.swap(j, self.pivots[j]);
        }
        // L y = P b, unit lower.
        for j in 0..n {
            let bj = b[j];
            if bj != C64::new(0.0, 0.0) {
                for i in j + 1..n {
                    b[i] -= lu[i + j * ld] * bj;
                }
            }
        }
        // U x = y.
        for j in (0..n).rev() {
            b[j] /= lu[j + j * ld];
            let bj = b[j];
            if bj != C64::new(0.0, 0.0) {
                for i in 0..j {
                    b[i] -= lu[i + j * ld] * bj;
                }
            }
        }
    }
}

/// `out += alpha · (a ⊗ b)`, standard Kronecker product with the first factor
/// as the most significant index block.
pub fn kron_acc(out: &mut CMatrix, alpha: C64, a: &CMatrix, b: &CMatrix) {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    assert_eq!(out.nrows(), ar * br, "kron_acc row mismatch");
    assert_eq!(out.ncols(), ac * bc, "kron_acc col mismatch");
    let ld = ar * br;
    let out_s = out.as_mut_slice();
    for j0 in 0..ac {
        for j1 in 0..bc {
            let col = (j0 * bc + j1) * ld;
            for i0 in 0..ar {
                let av = alpha * a[(i0, j0)];
                if av == C64::new(0.0, 0.0) {
                    continue;
                }
                let row0 = i0 * br;
                for i1 in 0..br {
                    out_s[col + row0 + i1] += av * b[(i1, j1)];
                }
            }
        }
    }
}

/// Largest entry modulus of a complex matrix (∞-norm over entries).
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Eigenvalues of a Hermitian matrix, ascending. The input is assumed
/// Hermitian; only its lower triangle is trusted by the underlying solver.
pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Full Hermitian eigendecomposition, eigenvalues ascending with matching
/// eigenvector columns.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}
