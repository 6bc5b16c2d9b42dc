//! Symmetric tridiagonal generalized pencil (A, M) with M diagonal positive:
//! Sturm-sequence bisection for the k-th eigenvalue and inverse iteration for
//! its eigenvector. Used by the finite-difference radial oracle and the 1D
//! decay surrogate.

/// Number of eigenvalues of (A, M) strictly below `lambda`, by counting
/// negative pivots of the LDL^T factorization of A - lambda M.
fn sturm_count(diag: &[f64], off: &[f64], mass: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    let mut count = 0;
    let mut d = diag[0] - lambda * mass[0];
    if d == 0.0 {
        d = -1e-300;
    }
    if d < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let mut di = (diag[i] - lambda * mass[i]) - off[i - 1] * off[i - 1] / d;
        if di == 0.0 {
            di = -1e-300;
        }
        if di < 0.0 {
            count += 1;
        }
        d = di;
    }
    count
}

/// k-th smallest eigenvalue (k >= 1) of the pencil (A, M).
pub fn tridiag_eigenvalue(diag: &[f64], off: &[f64], mass: &[f64], k: usize) -> f64 {
    assert!(k >= 1 && k <= diag.len());
    assert_eq!(off.len() + 1, diag.len());
    assert_eq!(mass.len(), diag.len());
    let n = diag.len();
    // generalized Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let radius = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min((diag[i] - radius) / mass[i]);
        hi = hi.max((diag[i] + radius) / mass[i]);
    }
    let span = (hi - lo).max(1e-12);
    lo -= 1e-8 * span;
    hi += 1e-8 * span;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(diag, off, mass, mid) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi.abs().max(lo.abs()).max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector for an eigenvalue estimate, by inverse iteration with a
/// partially pivoted tridiagonal LU. Returns the M-normalized vector.
pub fn tridiag_eigenvector(diag: &[f64], off: &[f64], mass: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let shifted = lambda * (1.0 + 1e-10) + 1e-300;
    let mut x = vec![1.0f64; n];
    for sweep in 0..4 {
        let y = solve_shifted(diag, off, mass, shifted, &x);
        let norm: f64 = y
            .iter()
            .zip(mass.iter())
            .map(|(v, m)| v * v * m)
            .sum::<f64>()
            .sqrt();
        x = y.iter().map(|v| v / norm).collect();
        if sweep >= 1 {
            break;
        }
    }
    // fix sign: make the largest-magnitude entry positive
    let mut imax = 0;
    for i in 0..n {
        if x[i].abs() > x[imax].abs() {
            imax = i;
        }
    }
    if x[imax] < 0.0 {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
    x
}

/// Solve (A - shift M) y = M x with partial pivoting. Row i of the working
/// band is (a[i], b[i], c[i]) at columns (i, i+1, i+2); c fills in only when
/// rows are swapped.
fn solve_shifted(diag: &[f64], off: &[f64], mass: &[f64], shift: f64, x: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut a: Vec<f64> = (0..n).map(|i| diag[i] - shift * mass[i]).collect();
    let mut b: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { off[i] } else { 0.0 })
        .collect();
    let mut c = vec![0.0f64; n];
    let mut rhs: Vec<f64> = (0..n).map(|i| mass[i] * x[i]).collect();
    for i in 0..n - 1 {
        // entering step i, row i+1 is (sub, a[i+1], b[i+1]) at cols (i, i+1, i+2)
        let mut sub = off[i];
        if sub.abs() > a[i].abs() {
            let (oa, ob, oc) = (a[i], b[i], c[i]);
            a[i] = sub;
            b[i] = a[i + 1];
            c[i] = b[i + 1];
            sub = oa;
            a[i + 1] = ob;
            b[i + 1] = oc; // oc is always 0 here
            rhs.swap(i, i + 1);
        }
        if a[i] == 0.0 {
            a[i] = 1e-300;
        }
        let m = sub / a[i];
        a[i + 1] -= m * b[i];
        b[i + 1] -= m * c[i];
        rhs[i + 1] -= m * rhs[i];
    }
    if a[n - 1] == 0.0 {
        a[n - 1] = 1e-300;
    }
    let mut y = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= b[i] * y[i + 1];
        }
        if i + 2 < n {
            s -= c[i] * y[i + 2];
        }
        y[i] = s / a[i];
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dirichlet_laplacian_eigenvalues() {
        // -u'' on (0,1), Dirichlet: eigenvalues (k pi)^2; FD with n interior
        // points and h = 1/(n+1) gives (2 - 2 cos(k pi h)) / h^2.
        let n = 200;
        let h = 1.0 / (n as f64 + 1.0);
        let diag = vec![2.0 / (h * h); n];
        let off = vec![-1.0 / (h * h); n - 1];
        let mass = vec![1.0; n];
        for k in 1..=3 {
            let exact = (2.0 - 2.0 * (k as f64 * PI * h).cos()) / (h * h);
            let got = tridiag_eigenvalue(&diag, &off, &mass, k);
            assert!(
                (got - exact).abs() < 1e-8 * exact,
                "k={} got {} want {}",
                k,
                got,
                exact
            );
        }
    }

    #[test]
    fn eigenvector_matches_sine() {
        let n = 100;
        let h = 1.0 / (n as f64 + 1.0);
        let diag = vec![2.0 / (h * h); n];
        let off = vec![-1.0 / (h * h); n - 1];
        let mass = vec![1.0; n];
        let lambda = tridiag_eigenvalue(&diag, &off, &mass, 1);
        let v = tridiag_eigenvector(&diag, &off, &mass, lambda);
        // residual
        for i in 0..n {
            let mut r = diag[i] * v[i] - lambda * v[i];
            if i > 0 {
                r += off[i - 1] * v[i - 1];
            }
            if i < n - 1 {
                r += off[i] * v[i + 1];
            }
            assert!(r.abs() < 1e-6 * lambda, "row {} residual {}", i, r);
        }
        // shape: proportional to sin(pi x)
        let scale = v[n / 2] / ((0.5 + 0.5 * h) * PI).sin().max(1e-300);
        for i in (0..n).step_by(13) {
            let x = (i as f64 + 1.0) * h;
            assert!((v[i] - scale * (PI * x).sin()).abs() < 1e-6 * scale.abs());
        }
    }

    #[test]
    fn generalized_mass_scaling() {
        // A = diag(1,2,3), M = diag(2,2,2): eigenvalues 0.5, 1.0, 1.5
        let diag = vec![1.0, 2.0, 3.0];
        let off = vec![0.0, 0.0];
        let mass = vec![2.0, 2.0, 2.0];
        for (k, want) in [(1usize, 0.5), (2, 1.0), (3, 1.5)] {
            let got = tridiag_eigenvalue(&diag, &off, &mass, k);
            assert!((got - want).abs() < 1e-12);
        }
    }
}
