//! Exact closed-form boundary spectral data for the model operator at a
//! singular point: indicial roots, the boundary spectrum with pole orders,
//! regularity exponents (η, ν₀), self-adjoint-extension classification,
//! polyhomogeneous index sets and Fredholm index counts.
//!
//! Everything here is pure arithmetic on `Z = ρ²V(p)` and the spherical
//! harmonic degree `l`; the separated radial solver in [`crate::radial`] and
//! the finite-element pipeline are tested against these numbers.

use crate::error::Error;
use crate::model::PotentialSpec;
use crate::Result;
use num_complex::Complex64;
use serde::Serialize;

/// Default spherical-harmonic truncation for enumerations.
pub const DEFAULT_L_MAX: usize = 25;

/// Which branch of the indicial equation a root comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootKind {
    BetaPlus,
    AlphaMinus,
}

/// One indicial root of τ² + τ - l(l+1) - Z = 0, with the paper's convention
/// that the square root is the positive imaginary branch when the discriminant
/// is negative.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IndicialRoot {
    pub value: Complex64,
    pub l: usize,
    pub kind: RootKind,
    /// n in the (root, n) pairs of the boundary spectrum: the inverse of the
    /// indicial family has a pole of order n+1 there.
    pub pole_order_minus_one: usize,
    pub multiplicity: usize,
}

/// discriminant (1+2l)² + 4Z as a complex square root with the positive
/// imaginary branch.
fn sqrt_disc(z: f64, l: usize) -> Complex64 {
    let d = (1.0 + 2.0 * l as f64).powi(2) + 4.0 * z;
    if d >= 0.0 {
        Complex64::new(d.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-d).sqrt())
    }
}

/// The pair (β_l, α_l) for strength Z and degree l. β + α = -1 exactly and
/// βα = -(l(l+1) + Z) (Vieta).
pub fn indicial_roots(z: f64, l: usize) -> (Complex64, Complex64) {
    let s = sqrt_disc(z, l);
    let beta = (s - 1.0) / 2.0;
    let alpha = (-s - 1.0) / 2.0;
    (beta, alpha)
}

/// Shifted roots β̃_l = β_l + 1/2 = sqrt((l+1/2)² + Z), the indicial roots of
/// the ρ^(1/2)-conjugated operator. Real and positive iff Z > -(l+1/2)².
pub fn shifted_root(z: f64, l: usize) -> Complex64 {
    sqrt_disc(z, l) / 2.0
}

/// Whether Z = -(l+1/2)² for some l ≥ 0 (scanned up to `l_max`).
pub fn double_root_l(z: f64, l_max: usize) -> Option<usize> {
    (0..=l_max).find(|&l| {
        let crit = -(l as f64 + 0.5).powi(2);
        z == crit
    })
}

/// Boundary spectral data for a single strength Z, roots enumerated up to
/// `l_max` (roots with larger l are excluded; β̃_l >= l so any bounded strip
/// needs only finitely many).
#[derive(Debug, Clone, Serialize)]
pub struct BSpectrum {
    pub z: f64,
    pub l_max: usize,
    pub roots: Vec<IndicialRoot>,
    /// √(1/4 + Z) when Z > -1/4; `None` marks the complex regime.
    pub eta: Option<f64>,
    pub nu0: f64,
    pub has_double_root: bool,
    pub double_root_l: Option<usize>,
}

/// Full root enumeration with pole orders and multiplicities.
pub fn boundary_spectrum(z: f64, l_max: usize) -> BSpectrum {
    let mut roots = Vec::with_capacity(2 * (l_max + 1));
    let double_l = double_root_l(z, l_max);
    for l in 0..=l_max {
        let (beta, alpha) = indicial_roots(z, l);
        let pole = if double_l == Some(l) { 1 } else { 0 };
        roots.push(IndicialRoot {
            value: beta,
            l,
            kind: RootKind::BetaPlus,
            pole_order_minus_one: pole,
            multiplicity: 2 * l + 1,
        });
        roots.push(IndicialRoot {
            value: alpha,
            l,
            kind: RootKind::AlphaMinus,
            pole_order_minus_one: pole,
            multiplicity: 2 * l + 1,
        });
    }
    BSpectrum {
        z,
        l_max,
        roots,
        eta: if z > -0.25 { Some((0.25 + z).sqrt()) } else { None },
        nu0: nu0(z),
        has_double_root: double_l.is_some(),
        double_root_l: double_l,
    }
}

/// Regularity exponent ν₀(Z): 2 for Z ≥ 3/4, 1 + √(1/4+Z) in the middle
/// regime, 1 for Z ≤ -1/4. Always in [1, 2].
pub fn nu0(z: f64) -> f64 {
    if z >= 0.75 {
        2.0
    } else if z > -0.25 {
        1.0 + (0.25 + z).sqrt()
    } else {
        1.0
    }
}

/// η = √(1/4 + min_p Z(p)) for the whole potential; `None` when there are no
/// singular points (every weight is admissible then).
pub fn eta(spec: &PotentialSpec) -> Result<Option<f64>> {
    match spec.min_z() {
        None => Ok(None),
        Some(min_z) => {
            if min_z <= -0.25 {
                Err(Error::AssumptionViolated { min_z })
            } else {
                Ok(Some((0.25 + min_z).sqrt()))
            }
        }
    }
}

/// Self-adjointness regime of H_k at a point of strength Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtensionRegime {
    /// Z > 3/4: essentially self-adjoint with domain K²₂.
    EssentiallySelfAdjointStrict,
    /// Z = 3/4: essentially self-adjoint; the l = 0 root sits on the strip
    /// boundary.
    EssentiallySelfAdjointBoundary,
    /// -1/4 < Z < 3/4: Friedrichs extension, one singular function.
    FriedrichsWithOneSingularFunction,
    /// Z = -1/4: double shifted root at 0, logarithmic partner mode.
    DoubleRootLog,
    /// Z < -1/4: imaginary shifted roots, oscillatory local modes.
    ImaginaryRootRegime,
}

/// One local singular function near p, written multiplicatively as
/// `χ · ρ^exponent · [cos(a log ρ)] · ψ_l^m`. Each entry covers the whole
/// degree-l eigenspace (multiplicity 2l+1).
#[derive(Debug, Clone, Serialize)]
pub struct SingularFunction {
    pub l: usize,
    pub multiplicity: usize,
    pub rho_exponent: f64,
    /// frequency a of a cos(a log ρ) factor (imaginary-root case)
    pub log_cos_frequency: Option<f64>,
    pub description: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionClassification {
    pub z: f64,
    pub regime: ExtensionRegime,
    pub domain_description: String,
    pub extension_basis: Vec<SingularFunction>,
}

/// Classify the self-adjoint extension at strength Z and list the local
/// functions that extend the minimal domain. The basis entries follow the
/// three pairing cases (real root, zero root, imaginary root), multiplied by
/// ρ^{-1/2} to return from the conjugated operator to H_k.
pub fn classify_extension(z: f64) -> ExtensionClassification {
    let mut basis = Vec::new();
    let regime = if z > 0.75 {
        ExtensionRegime::EssentiallySelfAdjointStrict
    } else if z == 0.75 {
        ExtensionRegime::EssentiallySelfAdjointBoundary
    } else if z > -0.25 {
        ExtensionRegime::FriedrichsWithOneSingularFunction
    } else if z == -0.25 {
        ExtensionRegime::DoubleRootLog
    } else {
        ExtensionRegime::ImaginaryRootRegime
    };
    // every l whose shifted root lies inside the critical strip (-1, 1)
    // contributes a local function; β̃_l >= l, so l = 0 or 1 at most
    let l_limit = 2usize;
    for l in 0..=l_limit {
        let crit = (l as f64 + 0.5).powi(2);
        let disc = crit + z; // β̃_l²
        if disc > 0.0 {
            let bt = disc.sqrt();
            if bt < 1.0 {
                basis.push(SingularFunction {
                    l,
                    multiplicity: 2 * l + 1,
                    rho_exponent: bt - 0.5,
                    log_cos_frequency: None,
                    description: format!("chi * rho^{:.6} * psi_{}^m", bt - 0.5, l),
                });
            }
        } else if disc == 0.0 {
            basis.push(SingularFunction {
                l,
                multiplicity: 2 * l + 1,
                rho_exponent: -0.5,
                log_cos_frequency: None,
                description: format!("chi * rho^-0.5 * psi_{l}^m"),
            });
        } else {
            let a = (-disc).sqrt();
            basis.push(SingularFunction {
                l,
                multiplicity: 2 * l + 1,
                rho_exponent: -0.5,
                log_cos_frequency: Some(a),
                description: format!("chi * rho^-0.5 * cos({a:.6} log rho) * psi_{l}^m"),
            });
        }
    }
    // keep only strip roots: real ones with β̃ < 1, plus all imaginary/zero
    basis.retain(|f| {
        let disc = (f.l as f64 + 0.5).powi(2) + z;
        disc <= 0.0 || disc.sqrt() < 1.0
    });
    if matches!(
        regime,
        ExtensionRegime::EssentiallySelfAdjointStrict
            | ExtensionRegime::EssentiallySelfAdjointBoundary
    ) {
        basis.clear();
    }
    let domain_description = match regime {
        ExtensionRegime::EssentiallySelfAdjointStrict => "K^2_2".to_string(),
        ExtensionRegime::EssentiallySelfAdjointBoundary => {
            "closure of K^2_2 (root on strip boundary)".to_string()
        }
        ExtensionRegime::FriedrichsWithOneSingularFunction => {
            format!("K^2_2 + C chi rho^{:.6}", (0.25 + z).sqrt() - 0.5)
        }
        ExtensionRegime::DoubleRootLog => "K^2_2 + C chi rho^-0.5".to_string(),
        ExtensionRegime::ImaginaryRootRegime => {
            "K^2_2 + span{chi rho^-0.5 cos(a_l log rho) psi_l^m}".to_string()
        }
    };
    ExtensionClassification {
        z,
        regime,
        domain_description,
        extension_basis: basis,
    }
}

/// One exponent of the polyhomogeneous index set, tagged with its generator.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IndexExponent {
    pub gamma: Complex64,
    pub l: usize,
    pub n: usize,
    pub kind: RootKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexSet {
    pub z: f64,
    pub re_cut: f64,
    pub l_max: usize,
    pub n_max: usize,
    pub exponents: Vec<IndexExponent>,
}

/// Enumerate {β_l + n, α_l + n} with real part at most `re_cut`, sorted by
/// real part. `l_max`/`n_max` bound the generator grid (defaults grow with
/// the cut). Double-root strengths are rejected: the expansion acquires log
/// terms not covered by plain powers.
pub fn index_set(
    z: f64,
    re_cut: f64,
    l_max: Option<usize>,
    n_max: Option<usize>,
) -> Result<IndexSet> {
    if let Some(l) = double_root_l(z, DEFAULT_L_MAX) {
        let _ = l;
        return Err(Error::DoubleRoot { z });
    }
    let l_max = l_max.unwrap_or_else(|| (re_cut.abs().ceil() as usize) + 1);
    let n_max = n_max.unwrap_or_else(|| (2.0 * re_cut.abs()).ceil() as usize + 2);
    let mut exponents = Vec::new();
    for l in 0..=l_max {
        let (beta, alpha) = indicial_roots(z, l);
        for n in 0..=n_max {
            let shift = n as f64;
            if beta.re + shift <= re_cut {
                exponents.push(IndexExponent {
                    gamma: beta + shift,
                    l,
                    n,
                    kind: RootKind::BetaPlus,
                });
            }
            if alpha.re + shift <= re_cut {
                exponents.push(IndexExponent {
                    gamma: alpha + shift,
                    l,
                    n,
                    kind: RootKind::AlphaMinus,
                });
            }
        }
    }
    exponents.sort_by(|a, b| {
        (a.gamma.re, a.gamma.im, a.l, a.n)
            .partial_cmp(&(b.gamma.re, b.gamma.im, b.l, b.n))
            .unwrap()
    });
    Ok(IndexSet {
        z,
        re_cut,
        l_max,
        n_max,
        exponents,
    })
}

/// Fredholm index of H_k - λ on the weighted scale with weight a: -N for
/// a > 0 and +N for a < 0, where N counts shifted roots strictly between 0
/// and a with multiplicity 2l+1. Requires Z > -1/4 (real shifted roots).
pub fn fredholm_index(z: f64, a: f64, l_max: usize) -> Result<i64> {
    if z <= -0.25 {
        return Err(Error::ImaginaryRegime { z });
    }
    if a == 0.0 {
        return Ok(0);
    }
    let target = a.abs();
    let mut count: i64 = 0;
    for l in 0..=l_max {
        let bt = ((l as f64 + 0.5).powi(2) + z).sqrt();
        if (bt - target).abs() < 1e-14 {
            return Err(Error::WeightOnIndicialRoot { a, l });
        }
        if bt < target {
            count += (2 * l + 1) as i64;
        }
    }
    Ok(if a > 0.0 { -count } else { count })
}

/// Generators of the singular-function space W_s: one per singular point with
/// Z(p) in (-1/4, 3/4]; points with Z > 3/4 contribute nothing.
#[derive(Debug, Clone, Serialize)]
pub struct WsGenerator {
    pub point_index: usize,
    pub z: f64,
    pub rho_exponent: f64,
    pub description: String,
}

pub fn singular_space_ws(spec: &PotentialSpec) -> Result<Vec<WsGenerator>> {
    if !spec.assumption2_satisfied {
        return Err(Error::AssumptionViolated {
            min_z: spec.min_z().unwrap_or(f64::INFINITY),
        });
    }
    let mut out = Vec::new();
    for (i, p) in spec.singular.iter().enumerate() {
        if p.z > -0.25 && p.z <= 0.75 {
            let expo = (0.25 + p.z).sqrt() - 0.5;
            out.push(WsGenerator {
                point_index: i,
                z: p.z,
                rho_exponent: expo,
                description: format!("chi_{i} * rho^{expo:.6}"),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Domain, SingularPoint};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn roots_z0() {
        let (b, a) = indicial_roots(0.0, 0);
        assert!(close(b.re, 0.0, 1e-15) && close(a.re, -1.0, 1e-15));
        let (b, a) = indicial_roots(0.0, 1);
        assert!(close(b.re, 1.0, 1e-15) && close(a.re, -2.0, 1e-15));
    }

    #[test]
    fn roots_z_three_quarter() {
        let (b, a) = indicial_roots(0.75, 0);
        assert!(close(b.re, 0.5, 1e-15) && close(a.re, -1.5, 1e-15));
    }

    #[test]
    fn roots_double_at_minus_quarter() {
        let (b, a) = indicial_roots(-0.25, 0);
        assert!(close(b.re, -0.5, 1e-15) && close(a.re, -0.5, 1e-15));
        assert_eq!(b.im, 0.0);
        assert_eq!(double_root_l(-0.25, 5), Some(0));
    }

    #[test]
    fn vieta_identities_hold() {
        let mut rng = crate::rng::Lcg::new(11);
        for _ in 0..500 {
            let z = rng.range(-0.249, 4.0);
            let l = rng.below(12);
            let (b, a) = indicial_roots(z, l);
            let sum = b + a;
            let prod = b * a;
            let target = -((l * (l + 1)) as f64 + z);
            assert!((sum.re + 1.0).abs() < 1e-12 && sum.im.abs() < 1e-12);
            assert!((prod.re - target).abs() < 1e-12 && prod.im.abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_root_consistency() {
        for &z in &[-0.2, 0.0, 0.5, 2.0] {
            for l in 0..4 {
                let (b, _) = indicial_roots(z, l);
                let bt = shifted_root(z, l);
                assert!((bt - (b + 0.5)).norm() < 1e-14);
                let direct = ((l as f64 + 0.5).powi(2) + z).sqrt();
                assert!((bt.re - direct).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn beta_monotone_in_l_and_z() {
        for &z in &[-0.2, 0.0, 1.0, 3.0] {
            let mut prev = f64::NEG_INFINITY;
            for l in 0..8 {
                let (b, _) = indicial_roots(z, l);
                assert!(b.re > prev);
                prev = b.re;
            }
        }
        for l in 0..4 {
            let mut prev = f64::NEG_INFINITY;
            for &z in &[-0.2, 0.0, 0.5, 1.0, 2.0, 4.0] {
                let (b, _) = indicial_roots(z, l);
                assert!(b.re > prev);
                prev = b.re;
            }
        }
    }

    #[test]
    fn spectrum_z0() {
        let s = boundary_spectrum(0.0, 1);
        let values: Vec<f64> = s.roots.iter().map(|r| r.value.re).collect();
        assert_eq!(values, vec![0.0, -1.0, 1.0, -2.0]);
        assert!(!s.has_double_root);
        assert_eq!(s.eta, Some(0.5));
        assert!(s.roots.iter().all(|r| r.pole_order_minus_one == 0));
        assert_eq!(s.roots[2].multiplicity, 3);
    }

    #[test]
    fn spectrum_z_minus_nine_quarters() {
        // l = 1: double root at -1/2; l = 0: imaginary pair -1/2 +- i sqrt(2)
        let s = boundary_spectrum(-2.25, 1);
        assert!(s.has_double_root);
        assert_eq!(s.double_root_l, Some(1));
        assert_eq!(s.eta, None);
        let l1: Vec<&IndicialRoot> = s.roots.iter().filter(|r| r.l == 1).collect();
        for r in &l1 {
            assert!(close(r.value.re, -0.5, 1e-15) && r.value.im == 0.0);
            assert_eq!(r.pole_order_minus_one, 1);
        }
        let l0: Vec<&IndicialRoot> = s.roots.iter().filter(|r| r.l == 0).collect();
        let sqrt2 = 2.0f64.sqrt();
        assert!(close(l0[0].value.re, -0.5, 1e-15) && close(l0[0].value.im, sqrt2, 1e-15));
        assert!(close(l0[1].value.re, -0.5, 1e-15) && close(l0[1].value.im, -sqrt2, 1e-15));
    }

    #[test]
    fn nu0_piecewise() {
        assert_eq!(nu0(1.0), 2.0);
        assert_eq!(nu0(0.75), 2.0);
        assert!(close(nu0(0.0), 1.5, 1e-15));
        assert_eq!(nu0(-0.5), 1.0);
        assert_eq!(nu0(-0.25), 1.0);
        for &z in &[-0.24, 0.1, 0.5, 0.74, 0.76, 5.0] {
            let v = nu0(z);
            assert!((1.0..=2.0).contains(&v));
        }
    }

    #[test]
    fn eta_values() {
        let spec = |z: f64| {
            let p = SingularPoint::new([0.5, 0.5, 0.5], z, 0.2).unwrap();
            PotentialSpec::new(Domain::Torus3, vec![p], vec![]).unwrap()
        };
        assert!(close(eta(&spec(0.0)).unwrap().unwrap(), 0.5, 1e-15));
        assert!(close(eta(&spec(2.0)).unwrap().unwrap(), 1.5, 1e-15));
        assert!(close(eta(&spec(-3.0 / 16.0)).unwrap().unwrap(), 0.25, 1e-15));
        assert!(eta(&spec(-0.5)).is_err());
        let empty = PotentialSpec::new(Domain::Torus3, vec![], vec![]).unwrap();
        assert_eq!(eta(&empty).unwrap(), None);
    }

    #[test]
    fn classification_regimes() {
        assert_eq!(
            classify_extension(1.0).regime,
            ExtensionRegime::EssentiallySelfAdjointStrict
        );
        assert!(classify_extension(1.0).extension_basis.is_empty());
        assert_eq!(
            classify_extension(0.75).regime,
            ExtensionRegime::EssentiallySelfAdjointBoundary
        );
        let c = classify_extension(0.0);
        assert_eq!(c.regime, ExtensionRegime::FriedrichsWithOneSingularFunction);
        assert_eq!(c.extension_basis.len(), 1);
        // exponent sqrt(1/4) - 1/2 = 0: the cutoff itself
        assert!(close(c.extension_basis[0].rho_exponent, 0.0, 1e-15));
        assert_eq!(
            classify_extension(-0.25).regime,
            ExtensionRegime::DoubleRootLog
        );
        let c = classify_extension(-1.0);
        assert_eq!(c.regime, ExtensionRegime::ImaginaryRootRegime);
        let f = &c.extension_basis[0];
        assert_eq!(f.l, 0);
        assert!(close(f.log_cos_frequency.unwrap(), 3.0f64.sqrt() / 2.0, 1e-15));
    }

    #[test]
    fn classification_threshold_flips() {
        let eps = 1e-9;
        assert_eq!(
            classify_extension(0.75 + eps).regime,
            ExtensionRegime::EssentiallySelfAdjointStrict
        );
        assert_eq!(
            classify_extension(0.75 - eps).regime,
            ExtensionRegime::FriedrichsWithOneSingularFunction
        );
        assert_eq!(
            classify_extension(-0.25 + eps).regime,
            ExtensionRegime::FriedrichsWithOneSingularFunction
        );
        assert_eq!(
            classify_extension(-0.25 - eps).regime,
            ExtensionRegime::ImaginaryRootRegime
        );
    }

    #[test]
    fn index_set_examples() {
        // generator grid l <= 1, n <= 2 reproduces {-2, -1, 0, 1} for Z = 0
        let s = index_set(0.0, 1.2, Some(1), Some(2)).unwrap();
        let mut values: Vec<f64> = s.exponents.iter().map(|e| e.gamma.re).collect();
        values.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        assert_eq!(values, vec![-2.0, -1.0, 0.0, 1.0]);

        // Z = 2, cut 0: alpha_0 = -2 ladder, beta_0 = 1 excluded
        let s = index_set(2.0, 0.0, Some(1), Some(2)).unwrap();
        let values: Vec<f64> = s
            .exponents
            .iter()
            .filter(|e| e.l == 0)
            .map(|e| e.gamma.re)
            .collect();
        assert_eq!(values, vec![-2.0, -1.0, 0.0]);

        // cut below alpha_0: empty
        let s = index_set(0.5, -4.0, Some(2), Some(2)).unwrap();
        assert!(s.exponents.is_empty());

        // double root rejected
        assert!(index_set(-0.25, 1.0, None, None).is_err());
    }

    #[test]
    fn index_set_real_parts_discrete() {
        // gap between distinct real parts bounded below on a window
        let s = index_set(0.3, 3.0, Some(4), Some(5)).unwrap();
        let mut reals: Vec<f64> = s.exponents.iter().map(|e| e.gamma.re).collect();
        reals.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
        for w in reals.windows(2) {
            assert!(w[1] - w[0] > 1e-10);
        }
    }

    #[test]
    fn fredholm_examples() {
        assert_eq!(fredholm_index(0.0, 1.0, DEFAULT_L_MAX).unwrap(), -1);
        assert_eq!(fredholm_index(0.0, 2.0, DEFAULT_L_MAX).unwrap(), -4);
        assert_eq!(fredholm_index(0.0, -1.0, DEFAULT_L_MAX).unwrap(), 1);
        assert_eq!(fredholm_index(0.0, 0.0, DEFAULT_L_MAX).unwrap(), 0);
        // a exactly on beta~_0 = 1/2
        assert!(fredholm_index(0.0, 0.5, DEFAULT_L_MAX).is_err());
        assert!(fredholm_index(-0.3, 1.0, DEFAULT_L_MAX).is_err());
    }

    #[test]
    fn fredholm_antisymmetry() {
        let mut rng = crate::rng::Lcg::new(5);
        for _ in 0..200 {
            let z = rng.range(-0.24, 3.0);
            let a = rng.range(0.01, 2.5);
            if let (Ok(m), Ok(p)) = (
                fredholm_index(z, a, DEFAULT_L_MAX),
                fredholm_index(z, -a, DEFAULT_L_MAX),
            ) {
                assert_eq!(m, -p);
            }
        }
    }

    #[test]
    fn ws_generators() {
        let mk = |z: f64, pos: [f64; 3]| SingularPoint::new(pos, z, 0.15).unwrap();
        let spec = PotentialSpec::new(
            Domain::Torus3,
            vec![mk(0.5, [0.25, 0.25, 0.25])],
            vec![],
        )
        .unwrap();
        let ws = singular_space_ws(&spec).unwrap();
        assert_eq!(ws.len(), 1);
        assert!(close(ws[0].rho_exponent, 0.75f64.sqrt() - 0.5, 1e-15));

        let spec = PotentialSpec::new(
            Domain::Torus3,
            vec![mk(1.0, [0.25, 0.25, 0.25])],
            vec![],
        )
        .unwrap();
        assert!(singular_space_ws(&spec).unwrap().is_empty());

        let spec = PotentialSpec::new(
            Domain::Torus3,
            vec![mk(0.0, [0.25, 0.25, 0.25]), mk(2.0, [0.75, 0.75, 0.75])],
            vec![],
        )
        .unwrap();
        let ws = singular_space_ws(&spec).unwrap();
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].point_index, 0);
    }

    #[test]
    fn critical_strip_matches_regime_boundary() {
        // shifted l=0 root in (-1,1) iff Z < 3/4
        for &z in &[-0.2, 0.0, 0.5, 0.749] {
            assert!(shifted_root(z, 0).re < 1.0);
            assert!(!classify_extension(z).extension_basis.is_empty());
        }
        for &z in &[0.75, 0.76, 2.0] {
            assert!(classify_extension(z).extension_basis.is_empty());
        }
    }
}
