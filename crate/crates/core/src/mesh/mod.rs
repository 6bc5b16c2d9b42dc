//! Tetrahedral meshes of the unit torus and of balls, radially graded toward
//! singular points, plus quadrature dispatch, nodal interpolation, point
//! location and discrete Kondratiev-norm evaluation.

mod build;
pub mod quad;

pub use build::{build_ball_mesh, build_torus_mesh, layer_radii};

use crate::error::Error;
use crate::model::{Domain, PotentialSpec};
use crate::Result;
use num_complex::Complex64;
use quad::{integrate_apex_duffy, integrate_plain, integrate_radial_adaptive, QuadOutput, QuadRule};

pub type Point = [f64; 3];

/// Radial layer structure around one center (singular point or ball center).
#[derive(Debug, Clone)]
pub struct GradingRegion {
    /// Geometric center in mesh (possibly unwrapped) coordinates.
    pub center: Point,
    pub mu: f64,
    /// Ascending layer radii; the innermost cone ends at radii[0].
    pub radii: Vec<f64>,
    /// Leading radii entries that follow the graded law (0 = no grading).
    pub n_graded: usize,
    /// Radius of the graded zone (0 when the region is not singular).
    pub cutoff: f64,
    pub is_singular: bool,
}

#[derive(Debug, Clone)]
pub struct GradedMesh {
    pub domain: Domain,
    pub vertices: Vec<Point>,
    pub tets: Vec<[usize; 4]>,
    /// Periodic identification: geometric vertex -> representative vertex.
    pub repr: Vec<usize>,
    /// Dirichlet boundary flags (ball only).
    pub boundary: Vec<bool>,
    pub dof_of_vertex: Vec<Option<usize>>,
    pub dof_to_vertex: Vec<usize>,
    pub n_dofs: usize,
    /// Subdivision parameter the mesh was built with.
    pub n: usize,
    pub h_max: f64,
    pub shape_regularity: f64,
    pub volume: f64,
    /// Geometric vertex of each singular point of the spec.
    pub singular_vertex: Vec<usize>,
    pub gradings: Vec<GradingRegion>,
    rule_plain: QuadRule,
    rule_fine: QuadRule,
    locator: Locator,
}

/// P1 nodal function: one complex coefficient per geometric vertex,
/// duplicates carrying their representative's value.
#[derive(Debug, Clone)]
pub struct DiscreteFunction {
    pub values: Vec<Complex64>,
}

impl DiscreteFunction {
    pub fn zeros(mesh: &GradedMesh) -> Self {
        DiscreteFunction {
            values: vec![Complex64::new(0.0, 0.0); mesh.vertices.len()],
        }
    }

    /// Expand a dof vector into vertex values (zero on Dirichlet boundary).
    pub fn from_dofs(mesh: &GradedMesh, x: &[Complex64]) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); mesh.vertices.len()];
        for v in 0..mesh.vertices.len() {
            if let Some(d) = mesh.dof_of_vertex[mesh.repr[v]] {
                values[v] = x[d];
            }
        }
        DiscreteFunction { values }
    }

    pub fn from_real_dofs(mesh: &GradedMesh, x: &[f64]) -> Self {
        let cx: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::from_dofs(mesh, &cx)
    }
}

#[derive(Debug, Clone)]
struct Locator {
    lo: Point,
    hi: Point,
    dims: [usize; 3],
    bins: Vec<Vec<u32>>,
}

impl Locator {
    fn build(vertices: &[Point], tets: &[[usize; 4]]) -> Locator {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in vertices {
            for d in 0..3 {
                lo[d] = lo[d].min(v[d]);
                hi[d] = hi[d].max(v[d]);
            }
        }
        for d in 0..3 {
            let pad = 1e-9 * (hi[d] - lo[d]).max(1.0);
            lo[d] -= pad;
            hi[d] += pad;
        }
        let target = ((tets.len() as f64 / 4.0).cbrt().ceil() as usize).clamp(4, 48);
        let dims = [target, target, target];
        let mut bins = vec![Vec::new(); dims[0] * dims[1] * dims[2]];
        let bin_of = |x: f64, d: usize| -> usize {
            let t = (x - lo[d]) / (hi[d] - lo[d]);
            ((t * dims[d] as f64) as isize).clamp(0, dims[d] as isize - 1) as usize
        };
        for (t_idx, t) in tets.iter().enumerate() {
            let mut tlo = [f64::INFINITY; 3];
            let mut thi = [f64::NEG_INFINITY; 3];
            for &v in t {
                for d in 0..3 {
                    tlo[d] = tlo[d].min(vertices[v][d]);
                    thi[d] = thi[d].max(vertices[v][d]);
                }
            }
            let b_lo: Vec<usize> = (0..3).map(|d| bin_of(tlo[d], d)).collect();
            let b_hi: Vec<usize> = (0..3).map(|d| bin_of(thi[d], d)).collect();
            for bx in b_lo[0]..=b_hi[0] {
                for by in b_lo[1]..=b_hi[1] {
                    for bz in b_lo[2]..=b_hi[2] {
                        bins[(bx * dims[1] + by) * dims[2] + bz].push(t_idx as u32);
                    }
                }
            }
        }
        Locator { lo, hi, dims, bins }
    }

    fn candidates(&self, x: &Point) -> Option<&[u32]> {
        for d in 0..3 {
            if x[d] < self.lo[d] || x[d] > self.hi[d] {
                return None;
            }
        }
        let mut idx = 0;
        for d in 0..3 {
            let t = (x[d] - self.lo[d]) / (self.hi[d] - self.lo[d]);
            let b = ((t * self.dims[d] as f64) as isize).clamp(0, self.dims[d] as isize - 1)
                as usize;
            idx = idx * self.dims[d] + b;
        }
        Some(&self.bins[idx])
    }
}

impl GradedMesh {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble_parts(
        domain: Domain,
        vertices: Vec<Point>,
        mut tets: Vec<[usize; 4]>,
        repr: Vec<usize>,
        boundary: Vec<bool>,
        n: usize,
        singular_vertex: Vec<usize>,
        gradings: Vec<GradingRegion>,
    ) -> Result<GradedMesh> {
        // orient, validate and measure
        let mut volume = 0.0;
        let mut h_max: f64 = 0.0;
        let mut shape: f64 = 0.0;
        for t in tets.iter_mut() {
            let v = [
                vertices[t[0]],
                vertices[t[1]],
                vertices[t[2]],
                vertices[t[3]],
            ];
            let mut vol = quad::tet_volume(&v);
            if vol < 0.0 {
                t.swap(2, 3);
                vol = -vol;
            }
            let diam = tet_diameter(&v);
            if vol <= 1e-16 * diam * diam * diam {
                return Err(Error::Mesh(format!(
                    "degenerate or inverted tet (volume {vol:.3e}, diameter {diam:.3e}): \
                     grading too strong for this n"
                )));
            }
            volume += vol;
            h_max = h_max.max(diam);
            shape = shape.max(shape_ratio(&v, vol));
        }
        let mut dof_of_vertex = vec![None; vertices.len()];
        let mut dof_to_vertex = Vec::new();
        let mut n_dofs = 0usize;
        for v in 0..vertices.len() {
            if repr[v] == v && !boundary[v] {
                dof_of_vertex[v] = Some(n_dofs);
                dof_to_vertex.push(v);
                n_dofs += 1;
            }
        }
        let locator = Locator::build(&vertices, &tets);
        let mesh = GradedMesh {
            domain,
            vertices,
            tets,
            repr,
            boundary,
            dof_of_vertex,
            dof_to_vertex,
            n_dofs,
            n,
            h_max,
            shape_regularity: shape,
            volume,
            singular_vertex,
            gradings,
            rule_plain: QuadRule::collapsed(4),
            rule_fine: QuadRule::collapsed(5),
            locator,
        };
        mesh.check_conformity()?;
        Ok(mesh)
    }

    /// Face-hash conformity: in representative space every interior face is
    /// shared by exactly two tets; torus meshes are closed, ball meshes have
    /// boundary faces with all vertices marked Dirichlet.
    fn check_conformity(&self) -> Result<()> {
        use std::collections::HashMap;
        let mut faces: HashMap<[usize; 3], u32> = HashMap::new();
        for t in &self.tets {
            for skip in 0..4 {
                let mut f: Vec<usize> = (0..4)
                    .filter(|&i| i != skip)
                    .map(|i| self.repr[t[i]])
                    .collect();
                f.sort_unstable();
                *faces.entry([f[0], f[1], f[2]]).or_insert(0) += 1;
            }
        }
        for (f, count) in &faces {
            match count {
                2 => {}
                1 => {
                    let on_boundary = f.iter().all(|&v| self.boundary[v]);
                    if !on_boundary {
                        return Err(Error::Mesh(format!(
                            "non-conforming interior face {f:?} (seen once)"
                        )));
                    }
                }
                c => {
                    return Err(Error::Mesh(format!(
                        "face {f:?} shared by {c} tets"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn tet_points(&self, t: usize) -> [Point; 4] {
        let idx = self.tets[t];
        [
            self.vertices[idx[0]],
            self.vertices[idx[1]],
            self.vertices[idx[2]],
            self.vertices[idx[3]],
        ]
    }

    /// Constant P1 gradients and volume. The first gradient is the negated
    /// sum of the others so the four sum to zero exactly.
    pub fn element_geometry(&self, t: usize) -> ElementGeometry {
        let v = self.tet_points(t);
        element_geometry_of(&v)
    }

    /// Dof index (column) for each tet vertex; `None` marks an eliminated
    /// Dirichlet vertex.
    pub fn tet_dofs(&self, t: usize) -> [Option<usize>; 4] {
        let idx = self.tets[t];
        std::array::from_fn(|i| self.dof_of_vertex[self.repr[idx[i]]])
    }

    /// Integration of a pointwise integrand over one tet, routed through the
    /// singularity-aware rules: apex-Duffy at singular vertices, adaptive
    /// radial splitting for elements spanning a wide radius range, plain
    /// collapsed Gauss otherwise.
    pub fn integrate_tet<T, F>(&self, t: usize, f: &F) -> T
    where
        T: QuadOutput,
        F: Fn(&Point, &[f64; 4]) -> T,
    {
        let idx = self.tets[t];
        let v = self.tet_points(t);
        for (gi, region) in self.gradings.iter().enumerate() {
            if !region.is_singular {
                continue;
            }
            let sv = self.singular_vertex[gi];
            if let Some(slot) = (0..4).find(|&i| self.repr[idx[i]] == self.repr[sv]) {
                // permute so the apex is first, remap barycentrics back
                let perm = apex_permutation(slot);
                let pv = [v[perm[0]], v[perm[1]], v[perm[2]], v[perm[3]]];
                let g = |x: &Point, l: &[f64; 4]| {
                    let mut lam = [0.0; 4];
                    for i in 0..4 {
                        lam[perm[i]] = l[i];
                    }
                    f(x, &lam)
                };
                return integrate_apex_duffy(&pv, 5, &g);
            }
            // near-region tets: vertex within the layered zone
            let reach = region.radii.last().copied().unwrap_or(0.0) * 1.5;
            let near = v.iter().any(|p| {
                let dx = [
                    p[0] - region.center[0],
                    p[1] - region.center[1],
                    p[2] - region.center[2],
                ];
                (dx[0] * dx[0] + dx[1] * dx[1] + dx[2] * dx[2]).sqrt() < reach
            });
            if near {
                return integrate_radial_adaptive(
                    &v,
                    &region.center,
                    &self.rule_fine,
                    2.0,
                    30,
                    f,
                );
            }
        }
        integrate_plain(&v, &self.rule_plain, f)
    }

    /// Discrete Kondratiev norm `K^m_a` of a P1 function:
    /// `(Σ_{|β|<=m} ∫ ρ^{2(|β|-a)} |∂^β u|²)^{1/2}` with per-tet quadrature;
    /// the gradient term uses the constant P1 gradient.
    pub fn weighted_norm(
        &self,
        u: &DiscreteFunction,
        m: usize,
        a: f64,
        spec: &PotentialSpec,
    ) -> f64 {
        assert!(m <= 1, "P1 functions carry one weak derivative");
        let mut total = 0.0f64;
        for t in 0..self.tets.len() {
            let idx = self.tets[t];
            let c: [Complex64; 4] = std::array::from_fn(|i| u.values[idx[i]]);
            // L² part with weight ρ^{-2a}
            let f0 = |x: &Point, l: &[f64; 4]| {
                let mut val = Complex64::new(0.0, 0.0);
                for i in 0..4 {
                    val += c[i] * l[i];
                }
                let rho = spec.rho(x);
                rho.powf(-2.0 * a) * val.norm_sqr()
            };
            total += self.integrate_tet::<f64, _>(t, &f0);
            if m >= 1 {
                let geo = self.element_geometry(t);
                let mut grad = [Complex64::new(0.0, 0.0); 3];
                for i in 0..4 {
                    for d in 0..3 {
                        grad[d] += c[i] * geo.grads[i][d];
                    }
                }
                let g2: f64 = grad.iter().map(|z| z.norm_sqr()).sum();
                if g2 > 0.0 {
                    let f1 = |x: &Point, _: &[f64; 4]| {
                        let rho = spec.rho(x);
                        rho.powf(2.0 - 2.0 * a) * g2
                    };
                    total += self.integrate_tet::<f64, _>(t, &f1);
                }
            }
        }
        total.sqrt()
    }

    /// Plain L²(M) inner product x^H M y is assembled elsewhere; this is the
    /// pointwise evaluation of a P1 function at an arbitrary point (torus
    /// points are matched modulo integer shifts).
    pub fn eval(&self, u: &DiscreteFunction, x: &Point) -> Option<Complex64> {
        let shifts: &[[f64; 3]] = match self.domain {
            Domain::Torus3 => &TORUS_SHIFTS,
            Domain::Ball { .. } => &[[0.0, 0.0, 0.0]],
        };
        for s in shifts {
            let q = [x[0] + s[0], x[1] + s[1], x[2] + s[2]];
            if let Some(cands) = self.locator.candidates(&q) {
                for &t in cands {
                    let v = self.tet_points(t as usize);
                    let l = quad::barycentric(&v, &q);
                    if l.iter().all(|&li| li >= -1e-9) {
                        let idx = self.tets[t as usize];
                        let mut val = Complex64::new(0.0, 0.0);
                        for i in 0..4 {
                            val += u.values[idx[i]] * l[i].max(0.0);
                        }
                        return Some(val);
                    }
                }
            }
        }
        None
    }

    /// Nodal interpolation of a scalar field. At singular vertices where the
    /// field is not finite, the value is the limit estimated along the first
    /// radial layer if stable, else 0 with the node recorded as truncated.
    pub fn interpolate<F>(&self, f: F) -> Result<Interpolant>
    where
        F: Fn(&Point) -> f64,
    {
        let mut values = vec![Complex64::new(0.0, 0.0); self.vertices.len()];
        let mut truncated = Vec::new();
        for v in 0..self.vertices.len() {
            let val = f(&self.vertices[v]);
            if val.is_finite() {
                values[v] = Complex64::new(val, 0.0);
                continue;
            }
            let gi = self
                .singular_vertex
                .iter()
                .position(|&sv| self.repr[sv] == self.repr[v]);
            let Some(gi) = gi else {
                return Err(Error::Domain(format!(
                    "interpolated field not finite at non-singular vertex {v}"
                )));
            };
            let region = &self.gradings[gi];
            let probe = |radius: f64| -> f64 {
                let dirs = [
                    [1.0, 0.0, 0.0],
                    [-1.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0],
                    [0.0, -1.0, 0.0],
                    [0.0, 0.0, 1.0],
                    [0.0, 0.0, -1.0],
                ];
                let mut acc = 0.0;
                for d in dirs {
                    let x = [
                        region.center[0] + radius * d[0],
                        region.center[1] + radius * d[1],
                        region.center[2] + radius * d[2],
                    ];
                    acc += f(&x).abs();
                }
                acc / 6.0
            };
            let a1 = probe(region.radii[0]);
            let a2 = probe(region.radii[1.min(region.radii.len() - 1)]);
            if a1.is_finite() && a1 <= 1.2 * a2 {
                values[v] = Complex64::new(a1, 0.0);
            } else {
                values[v] = Complex64::new(0.0, 0.0);
                truncated.push(v);
            }
        }
        Ok(Interpolant {
            values: DiscreteFunction { values },
            truncated_singular_nodes: truncated,
        })
    }

    /// Documented ASCII export: header with counts, vertex lines, tet lines,
    /// identification lines, boundary lines. Ordering is construction order,
    /// stable for reproducible hashing.
    pub fn export_ascii(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let ident: Vec<(usize, usize)> = (0..self.vertices.len())
            .filter(|&v| self.repr[v] != v)
            .map(|v| (v, self.repr[v]))
            .collect();
        let nb = self.boundary.iter().filter(|&&b| b).count();
        writeln!(s, "invsq-mesh 1").unwrap();
        match self.domain {
            Domain::Torus3 => writeln!(s, "domain torus").unwrap(),
            Domain::Ball { radius } => writeln!(s, "domain ball {radius}").unwrap(),
        }
        writeln!(
            s,
            "counts {} {} {} {}",
            self.vertices.len(),
            self.tets.len(),
            ident.len(),
            nb
        )
        .unwrap();
        for v in &self.vertices {
            writeln!(s, "v {} {} {}", v[0], v[1], v[2]).unwrap();
        }
        for t in &self.tets {
            writeln!(s, "t {} {} {} {}", t[0], t[1], t[2], t[3]).unwrap();
        }
        for (v, r) in ident {
            writeln!(s, "i {v} {r}").unwrap();
        }
        for (v, b) in self.boundary.iter().enumerate() {
            if *b {
                writeln!(s, "b {v}").unwrap();
            }
        }
        s
    }
}

pub struct Interpolant {
    pub values: DiscreteFunction,
    pub truncated_singular_nodes: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct ElementGeometry {
    pub verts: [Point; 4],
    pub grads: [[f64; 3]; 4],
    pub volume: f64,
}

pub(crate) fn element_geometry_of(v: &[Point; 4]) -> ElementGeometry {
    let e = [
        [v[1][0] - v[0][0], v[1][1] - v[0][1], v[1][2] - v[0][2]],
        [v[2][0] - v[0][0], v[2][1] - v[0][1], v[2][2] - v[0][2]],
        [v[3][0] - v[0][0], v[3][1] - v[0][1], v[3][2] - v[0][2]],
    ];
    let det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
        - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
        + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    // rows of inverse(E)^T are the barycentric gradients of λ1..λ3
    let inv = [
        [
            (e[1][1] * e[2][2] - e[1][2] * e[2][1]) / det,
            (e[0][2] * e[2][1] - e[0][1] * e[2][2]) / det,
            (e[0][1] * e[1][2] - e[0][2] * e[1][1]) / det,
        ],
        [
            (e[1][2] * e[2][0] - e[1][0] * e[2][2]) / det,
            (e[0][0] * e[2][2] - e[0][2] * e[2][0]) / det,
            (e[0][2] * e[1][0] - e[0][0] * e[1][2]) / det,
        ],
        [
            (e[1][0] * e[2][1] - e[1][1] * e[2][0]) / det,
            (e[0][1] * e[2][0] - e[0][0] * e[2][1]) / det,
            (e[0][0] * e[1][1] - e[0][1] * e[1][0]) / det,
        ],
    ];
    // gradient of λ_i (i = 1..3) is column i-1 of inv(E), i.e. row of inv^T
    let g1 = [inv[0][0], inv[1][0], inv[2][0]];
    let g2 = [inv[0][1], inv[1][1], inv[2][1]];
    let g3 = [inv[0][2], inv[1][2], inv[2][2]];
    let g0 = [
        -(g1[0] + g2[0] + g3[0]),
        -(g1[1] + g2[1] + g3[1]),
        -(g1[2] + g2[2] + g3[2]),
    ];
    ElementGeometry {
        verts: *v,
        grads: [g0, g1, g2, g3],
        volume: det.abs() / 6.0,
    }
}

fn apex_permutation(slot: usize) -> [usize; 4] {
    match slot {
        0 => [0, 1, 2, 3],
        1 => [1, 0, 2, 3],
        2 => [2, 0, 1, 3],
        _ => [3, 0, 1, 2],
    }
}

fn tet_diameter(v: &[Point; 4]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut s = 0.0;
            for k in 0..3 {
                s += (v[i][k] - v[j][k]) * (v[i][k] - v[j][k]);
            }
            d = d.max(s);
        }
    }
    d.sqrt()
}

/// Circumradius / inradius ratio.
fn shape_ratio(v: &[Point; 4], vol: f64) -> f64 {
    // circumcenter from 2 (v_i - v_0) · x = |v_i|² - |v_0|²
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for i in 0..3 {
        for d in 0..3 {
            m[i][d] = 2.0 * (v[i + 1][d] - v[0][d]);
        }
        let ni: f64 = v[i + 1].iter().map(|x| x * x).sum();
        let n0: f64 = v[0].iter().map(|x| x * x).sum();
        rhs[i] = ni - n0;
    }
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() < 1e-300 {
        return f64::INFINITY;
    }
    let solve_col = |col: usize| -> f64 {
        let mut mm = m;
        for r in 0..3 {
            mm[r][col] = rhs[r];
        }
        (mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1])
            - mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0])
            + mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0]))
            / det
    };
    let c = [solve_col(0), solve_col(1), solve_col(2)];
    let circum = ((c[0] - v[0][0]).powi(2) + (c[1] - v[0][1]).powi(2) + (c[2] - v[0][2]).powi(2))
        .sqrt();
    // inradius = 3V / total face area
    let mut area = 0.0;
    for skip in 0..4 {
        let f: Vec<Point> = (0..4).filter(|&i| i != skip).map(|i| v[i]).collect();
        let a = [f[1][0] - f[0][0], f[1][1] - f[0][1], f[1][2] - f[0][2]];
        let b = [f[2][0] - f[0][0], f[2][1] - f[0][1], f[2][2] - f[0][2]];
        let cr = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        area += 0.5 * (cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]).sqrt();
    }
    let inr = 3.0 * vol / area;
    circum / inr
}

const TORUS_SHIFTS: [[f64; 3]; 27] = {
    let mut s = [[0.0; 3]; 27];
    let mut i = 0;
    let vals = [-1.0, 0.0, 1.0];
    let mut a = 0;
    while a < 3 {
        let mut b = 0;
        while b < 3 {
            let mut c = 0;
            while c < 3 {
                s[i] = [vals[a], vals[b], vals[c]];
                i += 1;
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    s
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CutoffProfile, SingularPoint};

    fn free_torus_spec() -> PotentialSpec {
        PotentialSpec::new(Domain::Torus3, vec![], vec![]).unwrap()
    }

    fn ball_spec(radius: f64, z: f64, cutoff: f64) -> PotentialSpec {
        let c = cutoff.min(radius * (1.0 - 1e-9));
        let p = SingularPoint::new([0.0, 0.0, 0.0], z, c)
            .unwrap()
            .with_profile(CutoffProfile::new(c, c).unwrap())
            .unwrap();
        PotentialSpec::new(Domain::Ball { radius }, vec![p], vec![]).unwrap()
    }

    fn constant_one(mesh: &GradedMesh) -> DiscreteFunction {
        DiscreteFunction {
            values: vec![Complex64::new(1.0, 0.0); mesh.vertices.len()],
        }
    }

    #[test]
    fn weighted_norm_constant_no_singularities() {
        let spec = free_torus_spec();
        let mesh = build_torus_mesh(&spec, 4, None).unwrap();
        let one = constant_one(&mesh);
        let n0 = mesh.weighted_norm(&one, 0, 0.0, &spec);
        assert!((n0 - 1.0).abs() < 1e-12, "K0_0 norm {n0}");
        for a in [-1.0, 0.3, 1.0] {
            let n1 = mesh.weighted_norm(&one, 1, a, &spec);
            assert!((n1 - 1.0).abs() < 1e-12, "K1_{a} norm {n1}");
        }
    }

    #[test]
    fn weighted_norm_matches_plain_h1_when_rho_is_one() {
        let spec = free_torus_spec();
        let mesh = build_torus_mesh(&spec, 4, None).unwrap();
        // u = interpolant of cos(2 pi x): ||u||² + ||grad u||² discrete
        let interp = mesh
            .interpolate(|p: &Point| (2.0 * std::f64::consts::PI * p[0]).cos())
            .unwrap();
        let k1 = mesh.weighted_norm(&interp.values, 1, 0.0, &spec);
        // plain evaluation by the same quadrature but fixed weight 1
        let mut total = 0.0;
        for t in 0..mesh.tets.len() {
            let idx = mesh.tets[t];
            let c: [Complex64; 4] = std::array::from_fn(|i| interp.values.values[idx[i]]);
            let f0 = |_: &Point, l: &[f64; 4]| {
                let mut val = Complex64::new(0.0, 0.0);
                for i in 0..4 {
                    val += c[i] * l[i];
                }
                val.norm_sqr()
            };
            total += mesh.integrate_tet::<f64, _>(t, &f0);
            let geo = mesh.element_geometry(t);
            let mut grad = [Complex64::new(0.0, 0.0); 3];
            for i in 0..4 {
                for d in 0..3 {
                    grad[d] += c[i] * geo.grads[i][d];
                }
            }
            total += geo.volume * grad.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        assert!((k1 - total.sqrt()).abs() < 1e-12 * k1, "{k1} vs {}", total.sqrt());
    }

    #[test]
    fn interpolate_linear_exact_and_eval() {
        let spec = free_torus_spec();
        let mesh = build_torus_mesh(&spec, 4, None).unwrap();
        let interp = mesh.interpolate(|p: &Point| 0.25 + 0.5 * p[0]).unwrap();
        assert!(interp.truncated_singular_nodes.is_empty());
        let mut rng = crate::rng::Lcg::new(9);
        for _ in 0..50 {
            let x = [rng.next_f64() * 0.99, rng.next_f64() * 0.99, rng.next_f64() * 0.99];
            let v = mesh.eval(&interp.values, &x).expect("point must be found");
            let want = 0.25 + 0.5 * x[0];
            assert!((v.re - want).abs() < 1e-10, "at {x:?}: {v} vs {want}");
        }
    }

    #[test]
    fn interpolate_flags_divergent_singular_node() {
        let spec = ball_spec(std::f64::consts::PI, -3.0 / 16.0, 1.0);
        let mesh = build_ball_mesh(&spec, 6, None).unwrap();
        let interp = mesh
            .interpolate(|p: &Point| {
                let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                r.powf(-0.25)
            })
            .unwrap();
        assert_eq!(interp.truncated_singular_nodes.len(), 1);
        let sv = mesh.singular_vertex[0];
        assert_eq!(interp.values.values[sv], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn weighted_norm_trend_detects_divergence() {
        // interpolant of rho^{0.75}: K⁰_a stable for a = 1, divergent for a = 2.5
        let spec = ball_spec(1.0, 0.5, 0.999999);
        let norms = |a: f64| -> Vec<f64> {
            [6usize, 10, 14]
                .iter()
                .map(|&n| {
                    let mesh = build_ball_mesh(&spec, n, Some(0.3)).unwrap();
                    let interp = mesh
                        .interpolate(|p: &Point| {
                            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                            r.powf(0.75)
                        })
                        .unwrap();
                    mesh.weighted_norm(&interp.values, 0, a, &spec)
                })
                .collect()
        };
        let stable = norms(1.0);
        let ratio_stable = stable[2] / stable[0];
        assert!(
            (0.8..1.25).contains(&ratio_stable),
            "stable norms {stable:?}"
        );
        let divergent = norms(2.5);
        assert!(
            divergent[1] > divergent[0] * 1.3 && divergent[2] > divergent[1] * 1.3,
            "divergent norms {divergent:?}"
        );
    }

    #[test]
    fn export_roundtrip_stable() {
        let spec = free_torus_spec();
        let mesh = build_torus_mesh(&spec, 4, None).unwrap();
        let a = mesh.export_ascii();
        let b = mesh.export_ascii();
        assert_eq!(a, b);
        assert!(a.starts_with("invsq-mesh 1\ndomain torus\n"));
        let counts_line = a.lines().nth(2).unwrap();
        assert!(counts_line.starts_with("counts "));
    }
}
