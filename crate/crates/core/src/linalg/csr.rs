use super::scalar::Scalar;
use num_complex::Complex64;
use rayon::prelude::*;

/// Triplet accumulator with a deterministic build order. Duplicate entries
/// are summed in insertion order, so the assembled matrix is bit-exact
/// regardless of thread count as long as the insertion sequence is fixed.
#[derive(Debug, Clone)]
pub struct Triplets<S: Scalar> {
    pub n_rows: usize,
    pub n_cols: usize,
    entries: Vec<(u32, u32, S)>,
}

impl<S: Scalar> Triplets<S> {
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        Triplets {
            n_rows,
            n_cols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: S) {
        debug_assert!(row < self.n_rows && col < self.n_cols);
        self.entries.push((row as u32, col as u32, value));
    }

    /// Compress to CSR. Entries within a row are kept sorted by column;
    /// duplicates are accumulated in their original insertion order.
    pub fn to_csr(&self) -> CsrMatrix<S> {
        let n = self.n_rows;
        let mut counts = vec![0usize; n + 1];
        for &(r, _, _) in &self.entries {
            counts[r as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        // bucket entries per row, preserving insertion order
        let mut order = vec![0usize; self.entries.len()];
        let mut next = counts.clone();
        for (idx, &(r, _, _)) in self.entries.iter().enumerate() {
            order[next[r as usize]] = idx;
            next[r as usize] += 1;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx: Vec<u32> = Vec::new();
        let mut values: Vec<S> = Vec::new();
        row_ptr.push(0usize);
        let mut scratch: Vec<(u32, usize, S)> = Vec::new();
        for row in 0..n {
            scratch.clear();
            for &e in &order[counts[row]..counts[row + 1]] {
                let (_, c, v) = self.entries[e];
                scratch.push((c, e, v));
            }
            // stable sort by column keeps insertion order among duplicates
            scratch.sort_by_key(|&(c, e, _)| (c, e));
            let mut i = 0;
            while i < scratch.len() {
                let c = scratch[i].0;
                let mut acc = S::zero();
                while i < scratch.len() && scratch[i].0 == c {
                    acc += scratch[i].2;
                    i += 1;
                }
                col_idx.push(c);
                values.push(acc);
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            row_ptr,
            col_idx,
            values,
        }
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone)]
pub struct CsrMatrix<S: Scalar> {
    pub n_rows: usize,
    pub n_cols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<u32>,
    pub values: Vec<S>,
}

impl<S: Scalar> CsrMatrix<S> {
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[u32], &[S]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&(j as u32)) {
            Ok(k) => vals[k],
            Err(_) => S::zero(),
        }
    }

    /// y = A x, rows in parallel (bit-exact for any thread count: each row is
    /// reduced sequentially by one task).
    pub fn mul_vec(&self, x: &[S], y: &mut [S]) {
        debug_assert_eq!(x.len(), self.n_cols);
        debug_assert_eq!(y.len(), self.n_rows);
        let row_ptr = &self.row_ptr;
        let col_idx = &self.col_idx;
        let values = &self.values;
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let mut acc = S::zero();
            for k in row_ptr[i]..row_ptr[i + 1] {
                acc += values[k] * x[col_idx[k] as usize];
            }
            *yi = acc;
        });
    }

    pub fn mul_vec_alloc(&self, x: &[S]) -> Vec<S> {
        let mut y = vec![S::zero(); self.n_rows];
        self.mul_vec(x, &mut y);
        y
    }

    /// x^H A y for Hermitian use; returns the full scalar.
    pub fn bilinear(&self, x: &[S], y: &[S]) -> S {
        let ay = self.mul_vec_alloc(y);
        super::scalar::dot(x, &ay)
    }

    /// Entrywise check `max |A - A^H|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals.iter()) {
                let j = *c as usize;
                let vt = self.get(j, i);
                let d = (*v - vt.conj()).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// A + alpha * B, requiring an identical sparsity pattern.
    pub fn add_scaled_same_pattern(&self, other: &CsrMatrix<S>, alpha: f64) -> CsrMatrix<S> {
        assert_eq!(self.row_ptr, other.row_ptr, "sparsity patterns differ");
        assert_eq!(self.col_idx, other.col_idx, "sparsity patterns differ");
        let mut out = self.clone();
        for (v, w) in out.values.iter_mut().zip(other.values.iter()) {
            *v += w.scale(alpha);
        }
        out
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.n_rows).map(|i| self.get(i, i)).collect()
    }
}

impl CsrMatrix<f64> {
    /// Promote a real matrix to complex storage (used when pairing the real
    /// mass matrix with a complex Bloch stiffness matrix).
    pub fn to_complex(&self) -> CsrMatrix<Complex64> {
        CsrMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }
}
