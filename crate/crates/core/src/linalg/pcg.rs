use super::csr::CsrMatrix;
use super::scalar::{axpy, dot, norm2, Scalar};

/// Preconditioner interface for the conjugate-gradient solver.
pub enum Preconditioner<S: Scalar> {
    None,
    /// Inverse-diagonal (Jacobi) scaling.
    Diagonal(Vec<f64>),
    Ic0(Ic0<S>),
}

impl<S: Scalar> Preconditioner<S> {
    pub fn apply(&self, r: &[S], z: &mut [S]) {
        match self {
            Preconditioner::None => z.copy_from_slice(r),
            Preconditioner::Diagonal(dinv) => {
                for i in 0..r.len() {
                    z[i] = r[i].scale(dinv[i]);
                }
            }
            Preconditioner::Ic0(ic) => ic.solve(r, z),
        }
    }

    /// Jacobi preconditioner from the matrix diagonal.
    pub fn diagonal_of(a: &CsrMatrix<S>) -> Self {
        let dinv = a
            .diagonal()
            .iter()
            .map(|d| {
                let v = d.re();
                if v.abs() > 0.0 {
                    1.0 / v
                } else {
                    1.0
                }
            })
            .collect();
        Preconditioner::Diagonal(dinv)
    }

    /// IC(0) when the factorization exists, diagonal scaling otherwise.
    pub fn ic0_or_diagonal(a: &CsrMatrix<S>) -> (Self, bool) {
        match Ic0::factor(a) {
            Some(ic) => (Preconditioner::Ic0(ic), false),
            None => (Self::diagonal_of(a), true),
        }
    }
}

/// Zero-fill incomplete Cholesky factorization of a Hermitian
/// positive-definite CSR matrix. Stores the lower triangle row-wise.
pub struct Ic0<S: Scalar> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<S>,
    diag_pos: Vec<usize>,
}

impl<S: Scalar> Ic0<S> {
    /// Attempt the factorization; `None` signals a non-positive pivot.
    pub fn factor(a: &CsrMatrix<S>) -> Option<Self> {
        let n = a.n_rows;
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx: Vec<u32> = Vec::new();
        let mut values: Vec<S> = Vec::new();
        let mut diag_pos = vec![0usize; n];
        for i in 0..n {
            let (cols, vals) = a.row(i);
            for (c, v) in cols.iter().zip(vals.iter()) {
                if (*c as usize) <= i {
                    if (*c as usize) == i {
                        diag_pos[i] = col_idx.len();
                    }
                    col_idx.push(*c);
                    values.push(*v);
                }
            }
            row_ptr[i + 1] = col_idx.len();
        }
        for i in 0..n {
            let (lo_i, hi_i) = (row_ptr[i], row_ptr[i + 1]);
            for kk in lo_i..hi_i {
                let j = col_idx[kk] as usize;
                let mut s = values[kk];
                // subtract sum_{k<j} L[i][k] * conj(L[j][k])
                let (mut pi, mut pj) = (lo_i, row_ptr[j]);
                let hi_j = row_ptr[j + 1];
                while pi < kk && pj < hi_j {
                    let ci = col_idx[pi];
                    let cj = col_idx[pj];
                    if cj as usize >= j {
                        break;
                    }
                    match ci.cmp(&cj) {
                        std::cmp::Ordering::Less => pi += 1,
                        std::cmp::Ordering::Greater => pj += 1,
                        std::cmp::Ordering::Equal => {
                            s -= values[pi] * values[pj].conj();
                            pi += 1;
                            pj += 1;
                        }
                    }
                }
                if j < i {
                    let djj = values[diag_pos[j]].re();
                    if djj <= 0.0 {
                        return None;
                    }
                    values[kk] = s.scale(1.0 / djj);
                } else {
                    let d = s.re();
                    if d <= 0.0 || !d.is_finite() {
                        return None;
                    }
                    values[kk] = S::from_re(d.sqrt());
                }
            }
        }
        Some(Ic0 {
            n,
            row_ptr,
            col_idx,
            values,
            diag_pos,
        })
    }

    /// Solve L L^H z = r.
    pub fn solve(&self, r: &[S], z: &mut [S]) {
        let n = self.n;
        // forward: L y = r
        for i in 0..n {
            let mut s = r[i];
            for k in self.row_ptr[i]..self.diag_pos[i] {
                s -= self.values[k] * z[self.col_idx[k] as usize];
            }
            z[i] = s.scale(1.0 / self.values[self.diag_pos[i]].re());
        }
        // backward: L^H z = y (column sweep)
        for i in (0..n).rev() {
            let zi = z[i].scale(1.0 / self.values[self.diag_pos[i]].re());
            z[i] = zi;
            for k in self.row_ptr[i]..self.diag_pos[i] {
                let j = self.col_idx[k] as usize;
                z[j] -= self.values[k].conj() * zi;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct PcgOutcome {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
    /// Smallest p^H A p observed; negative signals indefiniteness.
    pub min_curvature: f64,
}

/// Preconditioned conjugate gradients for Hermitian positive-definite A.
/// Solves A x = b starting from the provided x.
pub fn pcg_solve<S: Scalar>(
    a: &CsrMatrix<S>,
    b: &[S],
    x: &mut [S],
    prec: &Preconditioner<S>,
    rel_tol: f64,
    max_iter: usize,
) -> PcgOutcome {
    let n = b.len();
    let bnorm = norm2(b).max(1e-300);
    let mut r = vec![S::zero(); n];
    let ax = a.mul_vec_alloc(x);
    for i in 0..n {
        r[i] = b[i] - ax[i];
    }
    let mut z = vec![S::zero(); n];
    prec.apply(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z).re();
    let mut min_curv = f64::INFINITY;
    let mut res = norm2(&r) / bnorm;
    let mut it = 0;
    while res > rel_tol && it < max_iter {
        let ap = a.mul_vec_alloc(&p);
        let papp = dot(&p, &ap).re();
        if papp < min_curv {
            min_curv = papp;
        }
        if papp <= 0.0 {
            // indefinite or breakdown; report and stop
            return PcgOutcome {
                iterations: it,
                relative_residual: res,
                converged: false,
                min_curvature: min_curv,
            };
        }
        let alpha = rz / papp;
        axpy(S::from_re(alpha), &p, x);
        axpy(S::from_re(-alpha), &ap, &mut r);
        prec.apply(&r, &mut z);
        let rz_new = dot(&r, &z).re();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + p[i].scale(beta);
        }
        res = norm2(&r) / bnorm;
        it += 1;
    }
    PcgOutcome {
        iterations: it,
        relative_residual: res,
        converged: res <= rel_tol,
        min_curvature: if min_curv.is_finite() { min_curv } else { 0.0 },
    }
}
