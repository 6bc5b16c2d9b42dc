//! Quadrature on tetrahedra: collapsed Gauss–Legendre product rules with all
//! points strictly interior and positive weights, an apex-Duffy rule whose
//! Jacobian cancels 1/r² singularities at a tet vertex, and an adaptive
//! radial splitter for elements that span a wide range of distances to a
//! singular point.

pub type Point = [f64; 3];

/// Gauss–Legendre nodes/weights on [0, 1].
fn gl_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    match n {
        4 => {
            let a = 0.339_981_043_584_856_3;
            let b = 0.861_136_311_594_052_6;
            let wa = 0.652_145_154_862_546_1;
            let wb = 0.347_854_845_137_453_9;
            (
                vec![0.5 - 0.5 * b, 0.5 - 0.5 * a, 0.5 + 0.5 * a, 0.5 + 0.5 * b],
                vec![0.5 * wb, 0.5 * wa, 0.5 * wa, 0.5 * wb],
            )
        }
        5 => {
            let a = 0.538_469_310_105_683_1;
            let b = 0.906_179_845_938_664_0;
            let w0 = 0.568_888_888_888_888_9;
            let wa = 0.478_628_670_499_366_5;
            let wb = 0.236_926_885_056_189_1;
            (
                vec![
                    0.5 - 0.5 * b,
                    0.5 - 0.5 * a,
                    0.5,
                    0.5 + 0.5 * a,
                    0.5 + 0.5 * b,
                ],
                vec![0.5 * wb, 0.5 * wa, 0.5 * w0, 0.5 * wa, 0.5 * wb],
            )
        }
        _ => panic!("unsupported Gauss point count {n}"),
    }
}

/// Quadrature rule in reference barycentric coordinates; weights sum to 1 so
/// that `∫_T f = |T| Σ w_i f(x_i)`.
#[derive(Debug, Clone)]
pub struct QuadRule {
    /// (λ0, λ1, λ2, λ3, w)
    pub points: Vec<([f64; 4], f64)>,
    pub order: usize,
}

impl QuadRule {
    /// Collapsed product rule with `n` Gauss points per direction; exact for
    /// total degree `2n - 3` on the tet, all points interior.
    pub fn collapsed(n: usize) -> Self {
        let (xs, ws) = gl_unit(n);
        let mut points = Vec::with_capacity(n * n * n);
        for (i, &xi) in xs.iter().enumerate() {
            for (j, &eta) in xs.iter().enumerate() {
                for (k, &zeta) in xs.iter().enumerate() {
                    let x = xi;
                    let y = eta * (1.0 - xi);
                    let z = zeta * (1.0 - xi - y);
                    let w = ws[i] * ws[j] * ws[k] * (1.0 - xi) * (1.0 - xi - y);
                    // raw weights integrate to 1/6 (reference volume); normalize to 1
                    points.push(([1.0 - x - y - z, x, y, z], 6.0 * w));
                }
            }
        }
        QuadRule {
            points,
            order: 2 * n - 3,
        }
    }
}

/// Output of a quadrature loop: anything that can accumulate weighted samples.
pub trait QuadOutput: Copy {
    fn zero() -> Self;
    fn add_scaled(&mut self, other: &Self, w: f64);
}

impl QuadOutput for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self += other * w;
    }
}

impl<const N: usize> QuadOutput for [f64; N] {
    fn zero() -> Self {
        [0.0; N]
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        for i in 0..N {
            self[i] += other[i] * w;
        }
    }
}

#[inline]
pub fn tet_volume(v: &[Point; 4]) -> f64 {
    let a = sub(v[1], v[0]);
    let b = sub(v[2], v[0]);
    let c = sub(v[3], v[0]);
    det3(a, b, c) / 6.0
}

#[inline]
fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn det3(a: Point, b: Point, c: Point) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

#[inline]
fn bary_to_point(v: &[Point; 4], l: &[f64; 4]) -> Point {
    let mut p = [0.0; 3];
    for d in 0..3 {
        p[d] = l[0] * v[0][d] + l[1] * v[1][d] + l[2] * v[2][d] + l[3] * v[3][d];
    }
    p
}

/// Plain rule: `∫_T f` with f given physical point and barycentric coords.
pub fn integrate_plain<T, F>(v: &[Point; 4], rule: &QuadRule, f: &F) -> T
where
    T: QuadOutput,
    F: Fn(&Point, &[f64; 4]) -> T,
{
    let vol = tet_volume(v).abs();
    let mut acc = T::zero();
    for (l, w) in &rule.points {
        let x = bary_to_point(v, l);
        let val = f(&x, l);
        acc.add_scaled(&val, w * vol);
    }
    acc
}

/// Apex-Duffy rule: the first vertex is the apex; the parametrization
/// x = v0 + ξ(q - v0) contributes a Jacobian ∝ ξ² that cancels singularities
/// up to 1/r² at the apex. `n` Gauss points per direction.
pub fn integrate_apex_duffy<T, F>(v: &[Point; 4], n: usize, f: &F) -> T
where
    T: QuadOutput,
    F: Fn(&Point, &[f64; 4]) -> T,
{
    let (xs, ws) = gl_unit(n);
    let vol = tet_volume(v).abs();
    let mut acc = T::zero();
    for (i, &xi) in xs.iter().enumerate() {
        for (j, &eta) in xs.iter().enumerate() {
            for (k, &zeta) in xs.iter().enumerate() {
                // q on the opposite face (v1, v2, v3)
                let l1 = 1.0 - eta;
                let l2 = eta * (1.0 - zeta);
                let l3 = eta * zeta;
                // x = (1-ξ) v0 + ξ q: barycentric (1-ξ, ξ l1, ξ l2, ξ l3)
                let lam = [1.0 - xi, xi * l1, xi * l2, xi * l3];
                let x = bary_to_point(v, &lam);
                let w = ws[i] * ws[j] * ws[k] * xi * xi * eta * 6.0;
                let val = f(&x, &lam);
                acc.add_scaled(&val, w * vol);
            }
        }
    }
    acc
}

/// Adaptive integration near a singular center: split recursively along the
/// edge with the largest radial extent until every leaf satisfies
/// r_max <= ratio * r_min, then apply the plain rule. The closure always
/// receives barycentric coordinates with respect to the ORIGINAL tet, so P1
/// integrands stay valid. Tets touching the center must use the apex-Duffy
/// rule instead.
pub fn integrate_radial_adaptive<T, F>(
    v: &[Point; 4],
    center: &Point,
    rule: &QuadRule,
    ratio: f64,
    max_depth: usize,
    f: &F,
) -> T
where
    T: QuadOutput,
    F: Fn(&Point, &[f64; 4]) -> T,
{
    let parent = *v;
    let wrapped = |x: &Point, _l: &[f64; 4]| f(x, &barycentric(&parent, x));
    adaptive_inner(v, center, rule, ratio, max_depth, &wrapped)
}

fn adaptive_inner<T, F>(
    v: &[Point; 4],
    center: &Point,
    rule: &QuadRule,
    ratio: f64,
    max_depth: usize,
    f: &F,
) -> T
where
    T: QuadOutput,
    F: Fn(&Point, &[f64; 4]) -> T,
{
    let radii: [f64; 4] = std::array::from_fn(|i| {
        let d = sub(v[i], *center);
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    });
    let rmin = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let rmax = radii.iter().cloned().fold(0.0f64, f64::max);
    if max_depth == 0 || rmax <= ratio * rmin.max(1e-300) {
        return integrate_plain(v, rule, f);
    }
    // split the edge with the largest |r_a - r_b|
    let mut best = (0usize, 1usize);
    let mut best_gap = -1.0;
    for a in 0..4 {
        for b in (a + 1)..4 {
            let gap = (radii[a] - radii[b]).abs();
            if gap > best_gap {
                best_gap = gap;
                best = (a, b);
            }
        }
    }
    let (a, b) = best;
    let mid = [
        0.5 * (v[a][0] + v[b][0]),
        0.5 * (v[a][1] + v[b][1]),
        0.5 * (v[a][2] + v[b][2]),
    ];
    let mut child1 = *v;
    child1[b] = mid;
    let mut child2 = *v;
    child2[a] = mid;
    let mut acc: T = adaptive_inner(&child1, center, rule, ratio, max_depth - 1, f);
    let acc2: T = adaptive_inner(&child2, center, rule, ratio, max_depth - 1, f);
    acc.add_scaled(&acc2, 1.0);
    acc
}

/// Barycentric coordinates of x with respect to tet v (by solving the affine
/// system; used when sub-tets need the parent's P1 frame).
pub fn barycentric(v: &[Point; 4], x: &Point) -> [f64; 4] {
    let e1 = sub(v[1], v[0]);
    let e2 = sub(v[2], v[0]);
    let e3 = sub(v[3], v[0]);
    let rhs = sub(*x, v[0]);
    let d = det3(e1, e2, e3);
    let l1 = det3(rhs, e2, e3) / d;
    let l2 = det3(e1, rhs, e3) / d;
    let l3 = det3(e1, e2, rhs) / d;
    [1.0 - l1 - l2 - l3, l1, l2, l3]
}

#[cfg(test)]
mod tests {
    use super::*;

    const REF: [Point; 4] = [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
    ];

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    /// ∫_ref x^a y^b z^c = a! b! c! / (a+b+c+3)!
    fn exact_monomial(a: usize, b: usize, c: usize) -> f64 {
        factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3)
    }

    #[test]
    fn collapsed_rule_exactness() {
        for (n, degree) in [(4usize, 4usize), (5, 6)] {
            let rule = QuadRule::collapsed(n);
            for a in 0..=degree {
                for b in 0..=(degree - a) {
                    for c in 0..=(degree - a - b) {
                        let got: f64 = integrate_plain(&REF, &rule, &|x: &Point, _: &[f64; 4]| {
                            x[0].powi(a as i32) * x[1].powi(b as i32) * x[2].powi(c as i32)
                        });
                        let want = exact_monomial(a, b, c);
                        assert!(
                            (got - want).abs() < 1e-14 + 1e-12 * want.abs(),
                            "n={n} monomial ({a},{b},{c}): {got} vs {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rule_points_strictly_interior() {
        for n in [4usize, 5] {
            let rule = QuadRule::collapsed(n);
            for (l, w) in &rule.points {
                assert!(*w > 0.0);
                for li in l {
                    assert!(*li > 1e-6 && *li < 1.0, "barycentric {li}");
                }
            }
        }
    }

    #[test]
    fn apex_duffy_handles_inverse_square() {
        // ∫_T r^{-2} over the reference tet with apex at the origin;
        // oracle: adaptive splitting with a plain rule, many levels
        let f = |x: &Point, _: &[f64; 4]| {
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            1.0 / r2
        };
        let rule = QuadRule::collapsed(5);
        let duffy: f64 = integrate_apex_duffy(&REF, 5, &f);
        let oracle: f64 =
            integrate_radial_adaptive(&REF, &[0.0, 0.0, 0.0], &rule, 1.3, 40, &f);
        assert!(
            (duffy - oracle).abs() < 2e-4 * oracle.abs(),
            "duffy {duffy} vs adaptive {oracle}"
        );
    }

    #[test]
    fn apex_duffy_matches_plain_on_smooth() {
        let f = |x: &Point, _: &[f64; 4]| x[0] * x[0] + 0.3 * x[1] * x[2] + 1.0;
        let rule = QuadRule::collapsed(5);
        let a: f64 = integrate_apex_duffy(&REF, 5, &f);
        let b: f64 = integrate_plain(&REF, &rule, &f);
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn adaptive_split_preserves_smooth_integrals() {
        let f = |x: &Point, _: &[f64; 4]| 1.0 + x[0] + x[1] * x[1];
        let rule = QuadRule::collapsed(4);
        let plain: f64 = integrate_plain(&REF, &rule, &f);
        let split: f64 =
            integrate_radial_adaptive(&REF, &[5.0, 5.0, 5.0], &rule, 1.01, 6, &f);
        assert!((plain - split).abs() < 1e-12, "{plain} vs {split}");
    }

    #[test]
    fn barycentric_roundtrip() {
        let v = [
            [0.2, 0.1, 0.0],
            [1.3, 0.2, 0.1],
            [0.1, 1.1, 0.3],
            [0.4, 0.2, 1.5],
        ];
        let l = [0.1, 0.3, 0.4, 0.2];
        let x = bary_to_point(&v, &l);
        let back = barycentric(&v, &x);
        for i in 0..4 {
            assert!((back[i] - l[i]).abs() < 1e-12);
        }
    }
}
