use super::scalar::Scalar;

/// Small dense row-major matrix used for Rayleigh–Ritz blocks.
#[derive(Debug, Clone)]
pub struct DenseMatrix<S: Scalar> {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        DenseMatrix {
            n_rows,
            n_cols,
            data: vec![S::zero(); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn matmul(&self, other: &DenseMatrix<S>) -> DenseMatrix<S> {
        assert_eq!(self.n_cols, other.n_rows);
        let mut out = DenseMatrix::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self[(i, k)];
                if a == S::zero() {
                    continue;
                }
                for j in 0..other.n_cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// In-place lower Cholesky of a Hermitian positive-definite matrix.
    /// Returns false on a non-positive pivot.
    pub fn cholesky_in_place(&mut self) -> bool {
        assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        for j in 0..n {
            let mut d = self[(j, j)].re();
            for k in 0..j {
                d -= self[(j, k)].abs().powi(2);
            }
            if d <= 0.0 || !d.is_finite() {
                return false;
            }
            let ljj = d.sqrt();
            self[(j, j)] = S::from_re(ljj);
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= self[(i, k)] * self[(j, k)].conj();
                }
                self[(i, j)] = s.scale(1.0 / ljj);
            }
            for i in 0..j {
                self[(i, j)] = S::zero();
            }
        }
        true
    }

    /// Solve L X = B in place of B (L lower triangular, from `cholesky_in_place`).
    pub fn solve_lower(&self, b: &mut DenseMatrix<S>) {
        let n = self.n_rows;
        for col in 0..b.n_cols {
            for i in 0..n {
                let mut s = b[(i, col)];
                for k in 0..i {
                    s -= self[(i, k)] * b[(k, col)];
                }
                b[(i, col)] = s.scale(1.0 / self[(i, i)].re());
            }
        }
    }

    /// Solve L^H X = B in place of B.
    pub fn solve_lower_herm(&self, b: &mut DenseMatrix<S>) {
        let n = self.n_rows;
        for col in 0..b.n_cols {
            for i in (0..n).rev() {
                let mut s = b[(i, col)];
                for k in (i + 1)..n {
                    s -= self[(k, i)].conj() * b[(k, col)];
                }
                b[(i, col)] = s.scale(1.0 / self[(i, i)].re());
            }
        }
    }
}

impl<S: Scalar> std::ops::Index<(usize, usize)> for DenseMatrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.n_cols + j]
    }
}

impl<S: Scalar> std::ops::IndexMut<(usize, usize)> for DenseMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.n_cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns ascending eigenvalues and the matrix of column eigenvectors.
pub fn hermitian_eigen<S: Scalar>(a: &DenseMatrix<S>) -> (Vec<f64>, DenseMatrix<S>) {
    assert_eq!(a.n_rows, a.n_cols);
    let n = a.n_rows;
    let mut m = a.clone();
    let mut v = DenseMatrix::<S>::identity(n);
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[(i, j)].abs().powi(2);
            }
        }
        let scale: f64 = (0..n).map(|i| m[(i, i)].abs()).fold(1e-300, f64::max);
        if off.sqrt() <= 1e-15 * scale.max(1e-300) * n as f64 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re();
                let aqq = m[(q, q)].re();
                // phase so the rotated off-diagonal is real
                let phase = apq.scale(1.0 / apq.abs());
                let tau = (aqq - app) / (2.0 * apq.abs());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G has columns p,q: [c, -s*phase; s*conj(phase)... ] applied as
                // M <- G^H M G with G[p][p]=c, G[p][q]= s*phase, G[q][p]=-s*conj(phase)? use
                // explicit update with u = c, w = s*phase:
                let w = phase.scale(s);
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip.scale(c) - miq * w.conj();
                    m[(i, q)] = mip * w + miq.scale(c);
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj.scale(c) - mqj * w;
                    m[(q, j)] = mpj * w.conj() + mqj.scale(c);
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip.scale(c) - viq * w.conj();
                    v[(i, q)] = vip * w + viq.scale(c);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let eigs: Vec<f64> = (0..n).map(|i| m[(i, i)].re()).collect();
    order.sort_by(|&i, &j| eigs[i].partial_cmp(&eigs[j]).unwrap());
    let sorted_eigs: Vec<f64> = order.iter().map(|&i| eigs[i]).collect();
    let mut sorted_v = DenseMatrix::<S>::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            sorted_v[(i, new_col)] = v[(i, old_col)];
        }
    }
    (sorted_eigs, sorted_v)
}
