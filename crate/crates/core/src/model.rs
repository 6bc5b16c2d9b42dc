//! Domain geometry (unit torus or ball), singular-point bookkeeping, the
//! distance weight ρ, the cutoffs χ_p and evaluation of the potential
//! `V = Σ_p Z(p) χ_p / |x-p|² + V_smooth`.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

pub type Point = [f64; 3];

/// Computational domain. The torus is the unit cube with opposite faces
/// identified (cubic lattice, reciprocal lattice 2π ℤ³); the ball carries a
/// Dirichlet boundary at r = R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    Torus3,
    Ball { radius: f64 },
}

impl Domain {
    pub fn volume(&self) -> f64 {
        match self {
            Domain::Torus3 => 1.0,
            Domain::Ball { radius } => 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3),
        }
    }

    /// Quotient metric on the torus, Euclidean metric on the ball.
    pub fn distance(&self, x: &Point, y: &Point) -> f64 {
        match self {
            Domain::Torus3 => torus_distance(x, y),
            Domain::Ball { .. } => euclid(x, y),
        }
    }
}

fn euclid(x: &Point, y: &Point) -> f64 {
    let mut s = 0.0;
    for d in 0..3 {
        s += (x[d] - y[d]) * (x[d] - y[d]);
    }
    s.sqrt()
}

/// Quotient distance on the unit torus: minimum over the 27 neighboring
/// integer shifts. Bounded by √3/2.
pub fn torus_distance(x: &Point, y: &Point) -> f64 {
    let mut best = f64::INFINITY;
    for sx in -1i32..=1 {
        for sy in -1i32..=1 {
            for sz in -1i32..=1 {
                let shift = [sx as f64, sy as f64, sz as f64];
                let mut s = 0.0;
                for d in 0..3 {
                    let t = x[d] - y[d] - shift[d];
                    s += t * t;
                }
                best = best.min(s);
            }
        }
    }
    best.sqrt()
}

/// C² monotone quintic transition: s(0) = 1, s(1) = 0 with vanishing first
/// and second derivatives at both ends.
pub fn quintic_down(t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

/// Cutoff profile for χ_p: identically 1 for ρ <= inner, 0 for ρ >= outer,
/// quintic C² transition between. `inner == outer` degenerates to a sharp
/// cutoff (used when χ must be exactly 1 on the whole mesh).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffProfile {
    pub inner: f64,
    pub outer: f64,
}

impl CutoffProfile {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0) || inner > outer {
            return Err(Error::Domain(format!(
                "cutoff profile requires 0 < inner <= outer, got [{inner}, {outer}]"
            )));
        }
        Ok(CutoffProfile { inner, outer })
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= self.inner {
            1.0
        } else if r >= self.outer {
            0.0
        } else {
            quintic_down((r - self.inner) / (self.outer - self.inner))
        }
    }
}

/// One inverse-square singularity: position, strength Z(p) and the support
/// radius of its cutoff χ_p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub position: Point,
    pub z: f64,
    pub cutoff_radius: f64,
    pub profile: CutoffProfile,
}

impl SingularPoint {
    pub fn new(position: Point, z: f64, cutoff_radius: f64) -> Result<Self> {
        let profile = CutoffProfile::new(0.5 * cutoff_radius, cutoff_radius)?;
        Ok(SingularPoint {
            position,
            z,
            cutoff_radius,
            profile,
        })
    }

    pub fn with_profile(mut self, profile: CutoffProfile) -> Result<Self> {
        if profile.outer > self.cutoff_radius + 1e-12 {
            return Err(Error::Domain(format!(
                "profile outer radius {} exceeds cutoff_radius {}",
                profile.outer, self.cutoff_radius
            )));
        }
        self.profile = profile;
        Ok(self)
    }
}

/// Smooth background terms. Torus terms are a finite trigonometric
/// polynomial; ball terms have declared radial limits so the essential
/// spectrum bound is computable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SmoothTerm {
    Constant(f64),
    /// c · cos(2π n·x) on the torus.
    TorusCos { n: [i32; 3], c: f64 },
    /// c · sin(2π n·x) on the torus.
    TorusSin { n: [i32; 3], c: f64 },
    /// Radial C² step from 0 to `height` across [center - width, center + width].
    RadialStep { height: f64, center: f64, width: f64 },
    /// q / (1 + r²): Coulomb-like tail with radial limit 0.
    InverseTail { q: f64 },
    /// Σ c_d (x_d / r)²: bounded, direction-dependent radial limit.
    Directional { c: [f64; 3] },
}

impl SmoothTerm {
    fn eval(&self, x: &Point) -> f64 {
        match self {
            SmoothTerm::Constant(c) => *c,
            SmoothTerm::TorusCos { n, c } => {
                let phase = 2.0
                    * std::f64::consts::PI
                    * (n[0] as f64 * x[0] + n[1] as f64 * x[1] + n[2] as f64 * x[2]);
                c * phase.cos()
            }
            SmoothTerm::TorusSin { n, c } => {
                let phase = 2.0
                    * std::f64::consts::PI
                    * (n[0] as f64 * x[0] + n[1] as f64 * x[1] + n[2] as f64 * x[2]);
                c * phase.sin()
            }
            SmoothTerm::RadialStep {
                height,
                center,
                width,
            } => {
                let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                let t = (r - (center - width)) / (2.0 * width);
                height * (1.0 - quintic_down(t))
            }
            SmoothTerm::InverseTail { q } => {
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                q / (1.0 + r2)
            }
            SmoothTerm::Directional { c } => {
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                if r2 == 0.0 {
                    // average over the sphere of the quadratic form
                    (c[0] + c[1] + c[2]) / 3.0
                } else {
                    (c[0] * x[0] * x[0] + c[1] * x[1] * x[1] + c[2] * x[2] * x[2]) / r2
                }
            }
        }
    }

    /// Radial limit in direction d, when one exists.
    fn radial_limit(&self, d: &Point) -> Option<f64> {
        match self {
            SmoothTerm::Constant(c) => Some(*c),
            SmoothTerm::RadialStep { height, .. } => Some(*height),
            SmoothTerm::InverseTail { .. } => Some(0.0),
            SmoothTerm::Directional { c } => {
                let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                Some((c[0] * d[0] * d[0] + c[1] * d[1] * d[1] + c[2] * d[2] * d[2]) / r2)
            }
            SmoothTerm::TorusCos { .. } | SmoothTerm::TorusSin { .. } => None,
        }
    }
}

/// The full potential specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub domain: Domain,
    pub singular: Vec<SingularPoint>,
    pub smooth: Vec<SmoothTerm>,
    pub assumption2_satisfied: bool,
}

impl PotentialSpec {
    pub fn new(domain: Domain, singular: Vec<SingularPoint>, smooth: Vec<SmoothTerm>) -> Result<Self> {
        // disjoint cutoff supports and boundary clearance
        for (i, p) in singular.iter().enumerate() {
            if let Domain::Ball { radius } = domain {
                let rp = (p.position[0].powi(2) + p.position[1].powi(2) + p.position[2].powi(2))
                    .sqrt();
                if p.cutoff_radius >= radius - rp {
                    return Err(Error::Domain(format!(
                        "cutoff radius {} of point {} reaches the Dirichlet boundary",
                        p.cutoff_radius, i
                    )));
                }
            }
            for (j, q) in singular.iter().enumerate().skip(i + 1) {
                let d = domain.distance(&p.position, &q.position);
                if p.cutoff_radius >= 0.5 * d || q.cutoff_radius >= 0.5 * d {
                    return Err(Error::Domain(format!(
                        "cutoff supports of points {i} and {j} are not disjoint (distance {d})"
                    )));
                }
            }
        }
        for term in &smooth {
            let ok = match term {
                SmoothTerm::Constant(_) => true,
                SmoothTerm::TorusCos { .. } | SmoothTerm::TorusSin { .. } => {
                    matches!(domain, Domain::Torus3)
                }
                SmoothTerm::RadialStep { .. }
                | SmoothTerm::InverseTail { .. }
                | SmoothTerm::Directional { .. } => matches!(domain, Domain::Ball { .. }),
            };
            if !ok {
                return Err(Error::Domain(
                    "smooth term kind does not match the domain".into(),
                ));
            }
        }
        let assumption2_satisfied = singular.iter().all(|p| p.z > -0.25);
        Ok(PotentialSpec {
            domain,
            singular,
            smooth,
            assumption2_satisfied,
        })
    }

    pub fn min_z(&self) -> Option<f64> {
        self.singular
            .iter()
            .map(|p| p.z)
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }

    /// Distance to the nearest singular point together with its index.
    pub fn nearest_singular(&self, x: &Point) -> Option<(usize, f64)> {
        self.singular
            .iter()
            .enumerate()
            .map(|(i, p)| (i, self.domain.distance(x, &p.position)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
    }

    /// Kondratiev weight ρ: equals the distance to the nearest singular point
    /// close to it, then climbs with slope <= 1 through a C² blend and caps at
    /// exactly 1 far away. With no singular points, ρ ≡ 1.
    pub fn rho(&self, x: &Point) -> f64 {
        match self.nearest_singular(x) {
            None => 1.0,
            Some((i, r)) => {
                let p = &self.singular[i];
                let start = p.cutoff_radius.min(0.5);
                if r <= start {
                    r
                } else {
                    // integral of 1 - smoothstep over the blend zone; reaches 1
                    // exactly at start + 2(1 - start) with slope <= 1 throughout
                    let len = 2.0 * (1.0 - start);
                    if len <= 0.0 {
                        return 1.0;
                    }
                    let t = ((r - start) / len).min(1.0);
                    // ∫₀ᵗ (1 - s2(u)) du with s2 the quintic smoothstep
                    // s2(u) = 10u³ - 15u⁴ + 6u⁵, ∫ = 2.5u⁴ - 3u⁵ + u⁶
                    let integral = t - (2.5 * t.powi(4) - 3.0 * t.powi(5) + t.powi(6));
                    (start + len * integral).min(1.0)
                }
            }
        }
    }

    /// χ_p at x for singular point index i.
    pub fn chi(&self, i: usize, x: &Point) -> f64 {
        let p = &self.singular[i];
        let r = self.domain.distance(x, &p.position);
        p.profile.eval(r)
    }

    /// Smooth background alone.
    pub fn eval_smooth(&self, x: &Point) -> f64 {
        self.smooth.iter().map(|t| t.eval(x)).sum()
    }

    /// Full potential `Σ_p Z(p) χ_p(x)/|x-p|² + V_smooth(x)`. Evaluation at a
    /// singular point is a domain error: quadrature must avoid those points.
    pub fn eval_potential(&self, x: &Point) -> Result<f64> {
        let mut v = self.eval_smooth(x);
        for (i, p) in self.singular.iter().enumerate() {
            let r = self.domain.distance(x, &p.position);
            if r == 0.0 {
                return Err(Error::Domain(format!(
                    "potential evaluated exactly at singular point {i}"
                )));
            }
            let chi = p.profile.eval(r);
            if chi > 0.0 {
                v += p.z * chi / (r * r);
            }
        }
        Ok(v)
    }

    /// Radial limit of the potential in direction d (non-compact surrogate).
    /// Errors when some term has no declared limit.
    pub fn radial_limit(&self, d: &Point) -> Result<f64> {
        let mut v = 0.0;
        for term in &self.smooth {
            match term.radial_limit(d) {
                Some(l) => v += l,
                None => {
                    return Err(Error::Analysis(
                        "smooth term has no declared radial limit".into(),
                    ))
                }
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_point_spec(z: f64, cutoff: f64) -> PotentialSpec {
        let p = SingularPoint::new([0.5, 0.5, 0.5], z, cutoff).unwrap();
        PotentialSpec::new(Domain::Torus3, vec![p], vec![]).unwrap()
    }

    #[test]
    fn torus_distance_wraparound() {
        assert!((torus_distance(&[0.1, 0.0, 0.0], &[0.9, 0.0, 0.0]) - 0.2).abs() < 1e-15);
        assert_eq!(torus_distance(&[0.3, 0.4, 0.5], &[0.3, 0.4, 0.5]), 0.0);
        let far = torus_distance(&[0.0, 0.0, 0.0], &[0.5, 0.5, 0.5]);
        assert!((far - 3.0f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rho_basic_values() {
        let spec = single_point_spec(0.0, 0.2);
        assert_eq!(spec.rho(&[0.5, 0.5, 0.5]), 0.0);
        let x = [0.5 + 0.1, 0.5, 0.5];
        assert!((spec.rho(&x) - 0.1).abs() < 1e-15);
        // far point: blend zone is [0.2, 1.8] on this spec, torus max distance
        // is ~0.866, so rho stays below 1 but must be monotone and <= 1
        let far = spec.rho(&[0.0, 0.0, 0.0]);
        assert!(far > 0.5 && far <= 1.0);
    }

    #[test]
    fn rho_reaches_one_on_ball() {
        let p = SingularPoint::new([0.0, 0.0, 0.0], 2.0, 0.3).unwrap();
        let spec =
            PotentialSpec::new(Domain::Ball { radius: 3.0 }, vec![p], vec![]).unwrap();
        // blend ends at 0.3 + 2*(1 - 0.3) = 1.7
        assert!((spec.rho(&[2.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((spec.rho(&[0.0, 2.9, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rho_is_one_lipschitz_radially() {
        let p = SingularPoint::new([0.0, 0.0, 0.0], 2.0, 0.3).unwrap();
        let spec =
            PotentialSpec::new(Domain::Ball { radius: 3.0 }, vec![p], vec![]).unwrap();
        let mut prev = 0.0;
        let mut prev_r = 0.0;
        for i in 1..3000 {
            let r = i as f64 * 1e-3;
            let v = spec.rho(&[r, 0.0, 0.0]);
            let slope = (v - prev) / (r - prev_r);
            assert!(slope >= -1e-12 && slope <= 1.0 + 1e-9, "slope {slope} at r {r}");
            prev = v;
            prev_r = r;
        }
    }

    #[test]
    fn potential_inside_inner_radius() {
        let p = SingularPoint::new([0.0, 0.0, 0.0], 2.0, 1.2)
            .unwrap()
            .with_profile(CutoffProfile::new(1.1, 1.2).unwrap())
            .unwrap();
        let spec =
            PotentialSpec::new(Domain::Ball { radius: 2.0 }, vec![p], vec![]).unwrap();
        let v = spec.eval_potential(&[0.5, 0.0, 0.0]).unwrap();
        assert!((v - 8.0).abs() < 1e-12, "v = {v}");
    }

    #[test]
    fn potential_constant_smooth_only() {
        let spec = PotentialSpec::new(
            Domain::Torus3,
            vec![],
            vec![SmoothTerm::Constant(3.25)],
        )
        .unwrap();
        assert_eq!(spec.eval_potential(&[0.2, 0.7, 0.1]).unwrap(), 3.25);
    }

    #[test]
    fn rho_squared_v_tends_to_z() {
        let spec = single_point_spec(-3.0 / 16.0, 0.2);
        for r in [1e-2, 1e-3, 1e-4] {
            let x = [0.5 + r, 0.5, 0.5];
            let v = spec.eval_potential(&x).unwrap();
            let rho = spec.rho(&x);
            assert!(
                (rho * rho * v - (-3.0 / 16.0)).abs() < 1e-12,
                "rho^2 V = {}",
                rho * rho * v
            );
        }
    }

    #[test]
    fn potential_at_singular_point_is_error() {
        let spec = single_point_spec(1.0, 0.2);
        assert!(spec.eval_potential(&[0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn assumption2_flag() {
        assert!(single_point_spec(-0.24, 0.2).assumption2_satisfied);
        assert!(!single_point_spec(-0.25, 0.2).assumption2_satisfied);
        assert!(!single_point_spec(-0.5, 0.2).assumption2_satisfied);
    }

    #[test]
    fn disjoint_cutoffs_enforced() {
        let a = SingularPoint::new([0.25, 0.5, 0.5], 0.0, 0.3).unwrap();
        let b = SingularPoint::new([0.75, 0.5, 0.5], 0.0, 0.3).unwrap();
        assert!(PotentialSpec::new(Domain::Torus3, vec![a, b], vec![]).is_err());
        let a = SingularPoint::new([0.25, 0.5, 0.5], 0.0, 0.2).unwrap();
        let b = SingularPoint::new([0.75, 0.5, 0.5], 0.0, 0.2).unwrap();
        assert!(PotentialSpec::new(Domain::Torus3, vec![a, b], vec![]).is_ok());
    }

    #[test]
    fn chi_supports_disjoint_by_sampling() {
        let a = SingularPoint::new([0.25, 0.5, 0.5], 0.0, 0.2).unwrap();
        let b = SingularPoint::new([0.75, 0.5, 0.5], 0.0, 0.2).unwrap();
        let spec = PotentialSpec::new(Domain::Torus3, vec![a, b], vec![]).unwrap();
        let mut rng = crate::rng::Lcg::new(3);
        for _ in 0..2000 {
            let x = [rng.next_f64(), rng.next_f64(), rng.next_f64()];
            let c0 = spec.chi(0, &x);
            let c1 = spec.chi(1, &x);
            assert!(c0 == 0.0 || c1 == 0.0, "overlapping supports at {x:?}");
        }
    }

    #[test]
    fn smooth_step_radial_limit() {
        let spec = PotentialSpec::new(
            Domain::Ball { radius: 8.0 },
            vec![],
            vec![SmoothTerm::RadialStep {
                height: 25.0,
                center: 3.0,
                width: 0.4,
            }],
        )
        .unwrap();
        assert_eq!(spec.radial_limit(&[1.0, 0.0, 0.0]).unwrap(), 25.0);
        assert!(spec.eval_potential(&[0.1, 0.0, 0.0]).unwrap().abs() < 1e-12);
        assert!((spec.eval_potential(&[5.0, 0.0, 0.0]).unwrap() - 25.0).abs() < 1e-12);
    }
}
