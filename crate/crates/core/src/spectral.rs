//! Reciprocal-space analysis of the walk.
//!
//! The shift is diagonal in the Fourier basis
//! `|s; k⟩ = √(2/N) Σ_n e^{−ik·r} |s; n⟩`, so `U` splits into `m²` blocks
//! `U_k` acting on the six internal states `|j; s⟩`, ordered
//! `(j=0,s=0), (j=0,s=1), (j=1,s=0), …, (j=2,s=1)`. Each block has
//! eigenvalues `+1, −1, ±e^{±iθ_k}` with
//!
//! ```text
//! cos 2θ_k = 4/9 (cos k̃1 + cos k̃2 + cos(k̃1 − k̃2)) − 1/3,   θ_k ∈ [0, π/2].
//! ```
//!
//! The target state projects onto each block as the uniform internal vector,
//! whose weight on the `±e^{±iθ_k}` pairs is carried by the real amplitudes
//! `a_k^±`. Those feed the two sums that govern the search: `A(N)` (the
//! iteration count scales as `√A`) and `B(N)` (the inverse squared final
//! overlap).

use std::f64::consts::PI;

use nalgebra::{Matrix6, Vector6};
use num_complex::Complex64;
use serde::Serialize;

use crate::dense::{self, CMatrix};
use crate::error::{Error, Result};
use crate::lattice::{KPoint, LatticeConfig};

/// Terms with `sin²θ_k` below this are treated as singular and left out of
/// the sums.
pub const SINGULAR_SIN2: f64 = 1e-14;

const DEGENERATE_COS: f64 = 1e-12;
const DEGENERATE_NUMERATOR: f64 = 1e-10;

/// The reduced evolution operator `U_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct KBlock {
    pub k: KPoint,
    pub matrix: Matrix6<Complex64>,
}

impl KBlock {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        dense::eigenvalues(&CMatrix::from_iterator(6, 6, self.matrix.iter().copied()))
    }

    pub fn unitarity_defect(&self) -> f64 {
        let d = self.matrix.adjoint() * self.matrix - Matrix6::identity();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `|⟨u|P₋₁|u⟩|` for the uniform internal vector `u`, with the `−1`
    /// eigenspace taken from the null space of `U_k + I`.
    pub fn minus_one_weight(&self) -> f64 {
        let shifted = self.matrix + Matrix6::identity();
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let u = uniform6();
        svd.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &sv)| sv < 1e-8)
            .map(|(i, _)| {
                let row = v_t.row(i);
                // row i of V† is the conjugate of the i-th right singular vector
                let overlap: Complex64 = row.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
                overlap.norm_sqr()
            })
            .sum()
    }
}

fn uniform6() -> Vector6<Complex64> {
    Vector6::repeat(Complex64::new(1.0 / 6f64.sqrt(), 0.0))
}

pub fn build_kblock(k: KPoint) -> KBlock {
    let third = 1.0 / 3.0;
    let two = 2.0 / 3.0;
    let w1 = k.omega_pow(k.k1() as i64);
    let w1c = k.omega_pow(-(k.k1() as i64));
    let w2 = k.omega_pow(k.k2() as i64);
    let w2c = k.omega_pow(-(k.k2() as i64));
    let z = Complex64::new(0.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    #[rustfmt::skip]
    let matrix = Matrix6::new(
        z,              r(-third),      z,              r(two),         z,              r(two),
        r(-third),      z,              r(two),         z,              r(two),         z,
        z,              w1 * two,       z,              w1 * -third,    z,              w1 * two,
        w1c * two,      z,              w1c * -third,   z,              w1c * two,      z,
        z,              w2 * two,       z,              w2 * two,       z,              w2 * -third,
        w2c * two,      z,              w2c * two,      z,              w2c * -third,   z,
    );
    KBlock { k, matrix }
}

fn cos_sum(k: KPoint) -> f64 {
    let (a, b) = (k.ktilde1(), k.ktilde2());
    a.cos() + b.cos() + (a - b).cos()
}

pub fn cos_two_theta(k: KPoint) -> f64 {
    4.0 / 9.0 * cos_sum(k) - 1.0 / 3.0
}

/// `sin²θ_k = 2/3 − (2/9)(cos k̃1 + cos k̃2 + cos(k̃1 − k̃2))`.
pub fn sin2_theta(k: KPoint) -> f64 {
    (2.0 / 3.0 - 2.0 / 9.0 * cos_sum(k)).max(0.0)
}

pub fn theta_of_k(k: KPoint) -> f64 {
    0.5 * cos_two_theta(k).clamp(-1.0, 1.0).acos()
}

/// `{+1, −1, e^{iθ}, e^{−iθ}, −e^{iθ}, −e^{−iθ}}`.
pub fn closed_form_eigenvalues(k: KPoint) -> [Complex64; 6] {
    let e = Complex64::from_polar(1.0, theta_of_k(k));
    let one = Complex64::new(1.0, 0.0);
    [one, -one, e, e.conj(), -e, -e.conj()]
}

/// The `±1` eigenvectors of `U_k` for `k ≠ 0`, before normalization.
pub fn nu_unnormalized(k: KPoint) -> Result<(Vector6<Complex64>, Vector6<Complex64>)> {
    if k.is_origin() {
        return Err(Error::DegenerateK);
    }
    let w1 = k.omega_pow(k.k1() as i64);
    let w2 = k.omega_pow(k.k2() as i64);
    let one = Complex64::new(1.0, 0.0);
    let build = |sign: f64| {
        Vector6::new(
            (w1 - w2) * sign,
            w2 - w1,
            w1 * (w2 - one) * sign,
            one - w2,
            w2 * (one - w1) * sign,
            w1 - one,
        )
    };
    Ok((build(1.0), build(-1.0)))
}

/// Normalized `(ν⁺, ν⁻)` with `U_k ν^± = ±ν^±`.
pub fn nu_eigenvectors(k: KPoint) -> Result<(Vector6<Complex64>, Vector6<Complex64>)> {
    let (p, m) = nu_unnormalized(k)?;
    Ok((p.normalize(), m.normalize()))
}

/// `(a_k^+, a_k^-)` with `a_k^± = ½ √(1 ± (1 + cos k̃1 + cos k̃2)/(3 cos θ_k))`.
///
/// Where `cos θ_k` vanishes (the Dirac points, `θ_k = π/2`) the numerator
/// vanishes as well and both amplitudes are `1/2`; a vanishing denominator
/// with a non-vanishing numerator is reported as an error.
pub fn amplitudes_of_k(k: KPoint) -> Result<(f64, f64)> {
    if k.is_origin() {
        return Err(Error::DegenerateK);
    }
    let numerator = 1.0 + k.ktilde1().cos() + k.ktilde2().cos();
    let cos_theta = theta_of_k(k).cos();
    if cos_theta.abs() < DEGENERATE_COS {
        if numerator.abs() < DEGENERATE_NUMERATOR {
            return Ok((0.5, 0.5));
        }
        return Err(Error::SingularAmplitude {
            k1: k.k1(),
            k2: k.k2(),
            cos_theta,
            numerator,
        });
    }
    let ratio = (numerator / (3.0 * cos_theta)).clamp(-1.0, 1.0);
    Ok((0.5 * (1.0 + ratio).sqrt(), 0.5 * (1.0 - ratio).sqrt()))
}

/// Everything known in closed form about one block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KSpectrum {
    pub k: KPoint,
    pub theta: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    #[serde(skip)]
    pub eigenvalues: [Complex64; 6],
}

pub fn spectrum_of_k(k: KPoint) -> Result<KSpectrum> {
    let (a_plus, a_minus) = amplitudes_of_k(k)?;
    Ok(KSpectrum {
        k,
        theta: theta_of_k(k),
        a_plus,
        a_minus,
        eigenvalues: closed_form_eigenvalues(k),
    })
}

/// Sum in a fixed pairwise order, independent of thread count.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// One spectral sum evaluated by two algebraically equivalent routes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralSum {
    /// Through the eigen-amplitudes `a_k^±`.
    pub spectral: f64,
    /// Through the reduced closed form.
    pub reduced: f64,
    /// Non-origin k-points dropped as singular.
    pub excluded: usize,
}

impl SpectralSum {
    pub fn relative_gap(&self) -> f64 {
        (self.spectral - self.reduced).abs() / self.spectral.abs().max(self.reduced.abs())
    }
}

struct Term {
    sin2: f64,
    theta: f64,
    cos_theta: f64,
    a_plus: f64,
    a_minus: f64,
    k: KPoint,
}

fn nonsingular_terms(cfg: LatticeConfig) -> Result<(Vec<Term>, usize)> {
    let mut terms = Vec::with_capacity(cfg.cells());
    let mut excluded = 0;
    for k in cfg.kpoints().filter(|k| !k.is_origin()) {
        let sin2 = sin2_theta(k);
        if sin2 < SINGULAR_SIN2 {
            excluded += 1;
            continue;
        }
        let (a_plus, a_minus) = amplitudes_of_k(k)?;
        let theta = theta_of_k(k);
        terms.push(Term {
            sin2,
            theta,
            cos_theta: theta.cos(),
            a_plus,
            a_minus,
            k,
        });
    }
    Ok((terms, excluded))
}

/// `A = Σ_{k≠0} (a⁺)²/(1 − cos θ) + (a⁻)²/(1 + cos θ)`, checked against
/// `(1/6) Σ_{k≠0} (4 + cos k̃1 + cos k̃2)/sin²θ`.
pub fn compute_a(cfg: LatticeConfig) -> Result<SpectralSum> {
    let (terms, excluded) = nonsingular_terms(cfg)?;
    let spectral: Vec<f64> = terms
        .iter()
        .map(|t| {
            t.a_plus * t.a_plus / (1.0 - t.cos_theta) + t.a_minus * t.a_minus / (1.0 + t.cos_theta)
        })
        .collect();
    let reduced: Vec<f64> = terms
        .iter()
        .map(|t| (4.0 + t.k.ktilde1().cos() + t.k.ktilde2().cos()) / (6.0 * t.sin2))
        .collect();
    Ok(SpectralSum {
        spectral: pairwise_sum(&spectral),
        reduced: pairwise_sum(&reduced),
        excluded,
    })
}

/// `B = (2/N) Σ_{k≠0} [(a⁺)² + (a⁻)²] cot²(θ/4)`, checked against
/// `(1/N) Σ_{k≠0} cot²(θ/4)`.
pub fn compute_b(cfg: LatticeConfig) -> Result<SpectralSum> {
    let (terms, excluded) = nonsingular_terms(cfg)?;
    let n = cfg.sites() as f64;
    let cot2 = |theta: f64| {
        let c = 1.0 / (theta / 4.0).tan();
        c * c
    };
    let spectral: Vec<f64> = terms
        .iter()
        .map(|t| (t.a_plus * t.a_plus + t.a_minus * t.a_minus) * cot2(t.theta))
        .collect();
    let reduced: Vec<f64> = terms.iter().map(|t| cot2(t.theta)).collect();
    Ok(SpectralSum {
        spectral: 2.0 / n * pairwise_sum(&spectral),
        reduced: pairwise_sum(&reduced) / n,
        excluded,
    })
}

/// `a₀² + Σ_{k≠0} (2/N)·2·[(a⁺)² + (a⁻)²]`: the squared norm of the target
/// expansion, which must equal one.
pub fn target_normalization(cfg: LatticeConfig) -> Result<f64> {
    let n = cfg.sites() as f64;
    let mut parts = Vec::with_capacity(cfg.cells());
    for k in cfg.kpoints().filter(|k| !k.is_origin()) {
        let (p, m) = amplitudes_of_k(k)?;
        parts.push(2.0 / n * 2.0 * (p * p + m * m));
    }
    Ok(2.0 / n + pairwise_sum(&parts))
}

/// Predicted iteration count and final overlap for one lattice size.
///
/// The asymptotic constants are set to one: `1/α = √A`, `T = round(π/2α)`
/// and `|⟨t|Φ_f⟩|² = 1/B`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub cfg: LatticeConfig,
    pub a: SpectralSum,
    pub b: SpectralSum,
    pub a0: f64,
    pub alpha: f64,
    pub predicted_steps: usize,
    pub predicted_overlap_sq: f64,
}

pub fn predict(cfg: LatticeConfig) -> Result<SpectralSummary> {
    let a = compute_a(cfg)?;
    let b = compute_b(cfg)?;
    let alpha = 1.0 / a.spectral.sqrt();
    let predicted_steps = ((PI / (2.0 * alpha)).round() as usize).max(1);
    Ok(SpectralSummary {
        cfg,
        a,
        b,
        a0: (2.0 / cfg.sites() as f64).sqrt(),
        alpha,
        predicted_steps,
        predicted_overlap_sq: 1.0 / b.spectral,
    })
}

/// One row of the per-k table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KRow {
    pub k1: usize,
    pub k2: usize,
    pub theta: f64,
    pub a_plus: Option<f64>,
    pub a_minus: Option<f64>,
    pub flag: KFlag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KFlag {
    Regular,
    /// `k = (0, 0)`: the block holds the uniform state itself.
    Degenerate,
    /// `cos θ_k = 0`, amplitudes taken as the limit value.
    Dirac,
    /// Dropped from the sums as singular.
    Excluded,
}

impl KFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            KFlag::Regular => "",
            KFlag::Degenerate => "degenerate",
            KFlag::Dirac => "dirac",
            KFlag::Excluded => "excluded",
        }
    }
}

pub fn k_table(cfg: LatticeConfig) -> Result<Vec<KRow>> {
    cfg.kpoints()
        .map(|k| {
            let theta = theta_of_k(k);
            if k.is_origin() {
                return Ok(KRow {
                    k1: 0,
                    k2: 0,
                    theta,
                    a_plus: None,
                    a_minus: None,
                    flag: KFlag::Degenerate,
                });
            }
            let (p, m) = amplitudes_of_k(k)?;
            let flag = if sin2_theta(k) < SINGULAR_SIN2 {
                KFlag::Excluded
            } else if theta.cos().abs() < DEGENERATE_COS {
                KFlag::Dirac
            } else {
                KFlag::Regular
            };
            Ok(KRow {
                k1: k.k1(),
                k2: k.k2(),
                theta,
                a_plus: Some(p),
                a_minus: Some(m),
                flag,
            })
        })
        .collect()
}
