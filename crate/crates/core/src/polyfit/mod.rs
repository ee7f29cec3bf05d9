//! Recovering the integer polynomial `P(α, β) = 0` satisfied by solution pairs.
//!
//! Solved pairs are fed into the monomial matrix `[α^j β^k]`, whose null
//! vector is found by QR plus Jacobi SVD at the working precision. A clear
//! gap between the two smallest singular values certifies a one-dimensional
//! nullspace; the null vector is then rounded to rationals with small
//! denominators and scaled to integers.

mod linalg;
mod polynomial;
mod rounding;

use rayon::prelude::*;
use rug::{Float, Integer, Rational};

use crate::degrees::degree_mu;
use crate::error::{ModeqError, Result};
use crate::params::SignatureParams;
use crate::real::{pow2, real, GUARD_BITS};
use crate::solver::{default_tolerance, solve_order_p, ModulusPair};

pub use linalg::{householder_r, jacobi_svd, svd_tall, Matrix, Svd};
pub use polynomial::BivariatePolynomial;
pub use rounding::best_rational;

/// Largest denominator accepted when rounding the normalized null vector.
pub const MAX_DENOMINATOR: u32 = 1_000_000;

/// Samples beyond the `(μ+1)²` unknowns that a fit insists on.
pub const EXTRA_SAMPLES: usize = 8;

/// Minimum number of samples accepted by [`fit_modular_polynomial`].
pub fn min_samples(mu: usize) -> usize {
    (mu + 1) * (mu + 1) + EXTRA_SAMPLES
}

/// Solves at `count` equally spaced `α` in `[lo, hi]` (endpoints included).
pub fn sample_pairs(
    params: &SignatureParams,
    p: u64,
    count: usize,
    range: (&Float, &Float),
) -> Result<Vec<ModulusPair>> {
    let (lo, hi) = range;
    if count < 2 {
        return Err(ModeqError::domain("sampling needs at least 2 points"));
    }
    if *lo <= 0 || *hi >= 1 || lo >= hi {
        return Err(ModeqError::domain(format!(
            "sampling range [{lo}, {hi}] must satisfy 0 < lo < hi < 1"
        )));
    }
    let prec = params.precision_bits();
    let step = Float::with_val(prec, hi - lo) / (count as u32 - 1);
    let alphas: Vec<Float> = (0..count)
        .map(|i| Float::with_val(prec, &step * i as u32) + lo)
        .collect();
    solve_at(params, p, &alphas)
}

/// Chebyshev nodes of the first kind mapped to `[lo, hi]`, in increasing order.
pub fn chebyshev_alphas(count: usize, lo: f64, hi: f64, prec: u32) -> Vec<Float> {
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let mid = real(prec, (lo + hi) / 2.0);
    let half = real(prec, (hi - lo) / 2.0);
    (0..count)
        .map(|i| {
            let angle = Float::with_val(prec, &pi * (2 * i + 1) as u32) / (2 * count) as u32;
            Float::with_val(prec, &mid - half.clone() * angle.cos())
        })
        .collect()
}

/// Solves the order-`p` equation at each `α` in parallel with the default tolerance.
pub fn solve_at(params: &SignatureParams, p: u64, alphas: &[Float]) -> Result<Vec<ModulusPair>> {
    let tol = default_tolerance(params.precision_bits());
    alphas
        .par_iter()
        .map(|alpha| solve_order_p(params, alpha, p, &tol))
        .collect()
}

/// The `(α, β)` coordinates of solved pairs.
pub fn points(pairs: &[ModulusPair]) -> Vec<(Float, Float)> {
    pairs
        .iter()
        .map(|s| (s.alpha.clone(), s.beta.clone()))
        .collect()
}

/// Diagnostics of a successful fit.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub polynomial: BivariatePolynomial,
    /// Smallest and second-smallest singular values of the column-scaled matrix.
    pub sigma_min: Float,
    pub sigma_next: Float,
    /// `log2(sigma_next / sigma_min)`; infinite for an exactly singular matrix.
    pub gap_bits: f64,
    /// `2^(−prec/2) · ‖P‖₁`: samples and held-out pairs must satisfy `|P| ≤` this.
    pub residual_bound: Float,
    /// Largest `|P(α, β)|` over the fitted samples.
    pub max_sample_residual: Float,
}

/// Fits the integer polynomial of bidegree `(μ, μ)` vanishing on `samples`.
pub fn fit_modular_polynomial(
    samples: &[(Float, Float)],
    mu: usize,
    precision_bits: u32,
) -> Result<BivariatePolynomial> {
    fit_with_report(samples, mu, precision_bits).map(|r| r.polynomial)
}

/// [`fit_modular_polynomial`] with singular-value and residual diagnostics.
pub fn fit_with_report(
    samples: &[(Float, Float)],
    mu: usize,
    precision_bits: u32,
) -> Result<FitReport> {
    if mu == 0 {
        return Err(ModeqError::domain("mu must be at least 1"));
    }
    if samples.len() < min_samples(mu) {
        return Err(ModeqError::domain(format!(
            "{} samples given, at least (mu+1)^2 + {EXTRA_SAMPLES} = {} required",
            samples.len(),
            min_samples(mu)
        )));
    }
    let mut alphas: Vec<&Float> = samples.iter().map(|s| &s.0).collect();
    alphas.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    if alphas.windows(2).any(|w| w[0] == w[1]) {
        return Err(ModeqError::domain(
            "sample alphas must be pairwise distinct",
        ));
    }
    let wp = precision_bits + GUARD_BITS;
    let n = mu + 1;
    let cols = n * n;

    let mut a = Matrix::zeros(samples.len(), cols, wp);
    for (r, (x, y)) in samples.iter().enumerate() {
        let xs = powers(x, mu, wp);
        let ys = powers(y, mu, wp);
        for (j, xj) in xs.iter().enumerate() {
            for (k, yk) in ys.iter().enumerate() {
                *a.get_mut(r, j * n + k) = Float::with_val(wp, xj * yk);
            }
        }
    }
    let scales: Vec<Float> = (0..cols)
        .map(|c| {
            let mut acc = Float::with_val(wp, 0);
            for r in 0..a.rows {
                acc += Float::with_val(wp, a.get(r, c).square_ref());
            }
            acc.sqrt()
        })
        .collect();
    if scales.iter().any(|s| s.is_zero()) {
        return Err(ModeqError::domain(
            "a monomial column vanishes on every sample",
        ));
    }
    for r in 0..a.rows {
        for (c, s) in scales.iter().enumerate() {
            *a.get_mut(r, c) /= s;
        }
    }

    let svd = svd_tall(&a, wp);
    let sigma_min = svd.singular_values[cols - 1].clone();
    let sigma_next = svd.singular_values[cols - 2].clone();
    let required_bits = precision_bits / 4;
    let gap_bits = if sigma_min.is_zero() {
        f64::INFINITY
    } else {
        Float::with_val(wp, &sigma_next / &sigma_min)
            .log2()
            .to_f64()
    };
    if gap_bits < required_bits as f64 {
        return Err(ModeqError::AmbiguousNullspace {
            gap_bits,
            required_bits,
        });
    }

    let null: Vec<Float> = (0..cols)
        .map(|c| Float::with_val(wp, svd.v.get(c, cols - 1) / &scales[c]))
        .collect();
    let largest = null
        .iter()
        .max_by(|x, y| x.cmp_abs(y).expect("finite"))
        .expect("nonempty")
        .clone();
    let tolerance = pow2(wp, -((precision_bits / 2) as i32));
    let bound = Integer::from(MAX_DENOMINATOR);
    let mut ratios = Vec::with_capacity(cols);
    for (idx, x) in null.iter().enumerate() {
        let r = Float::with_val(wp, x / &largest);
        let q = best_rational(&r, &bound);
        let err = Float::with_val(wp, &r - &q).abs();
        if err > tolerance {
            return Err(ModeqError::RoundingFailure(format!(
                "coefficient of x^{} y^{} is {} from the nearest fraction with denominator <= {MAX_DENOMINATOR}",
                idx / n,
                idx % n,
                err.to_string_radix(10, Some(6))
            )));
        }
        ratios.push(q);
    }
    let lcm = ratios
        .iter()
        .fold(Integer::from(1), |l, q| l.lcm(q.denom()));
    let grid: Vec<Vec<Integer>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let scaled = Rational::from(&ratios[j * n + k] * &lcm);
                    scaled.numer().clone()
                })
                .collect()
        })
        .collect();
    let polynomial = BivariatePolynomial::new(mu, grid)?;
    let (x_degree, y_degree) = polynomial.bidegree();
    if x_degree != mu || y_degree != mu {
        return Err(ModeqError::DegreeMismatch {
            mu,
            x_degree,
            y_degree,
        });
    }

    let residual_bound = Float::with_val(wp, &tolerance * &polynomial.l1_norm());
    let max_sample_residual = max_abs_value(&polynomial, samples);
    if max_sample_residual > residual_bound {
        return Err(ModeqError::RoundingFailure(format!(
            "rounded polynomial leaves residual {} on the samples",
            max_sample_residual.to_string_radix(10, Some(6))
        )));
    }
    Ok(FitReport {
        polynomial,
        sigma_min,
        sigma_next,
        gap_bits,
        residual_bound,
        max_sample_residual,
    })
}

fn powers(x: &Float, mu: usize, wp: u32) -> Vec<Float> {
    let mut out = Vec::with_capacity(mu + 1);
    out.push(Float::with_val(wp, 1));
    for i in 1..=mu {
        out.push(Float::with_val(wp, &out[i - 1] * x));
    }
    out
}

fn max_abs_value(poly: &BivariatePolynomial, pts: &[(Float, Float)]) -> Float {
    pts.iter()
        .map(|(x, y)| poly.eval(x, y).abs())
        .max_by(|a, b| a.partial_cmp(b).expect("finite"))
        .unwrap_or_else(|| Float::with_val(53, 0))
}

/// Outcome of checking `P(1 − β, 1 − α) = 0` on solved pairs.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    /// `|P(1 − β, 1 − α)|` for each pair.
    pub values: Vec<Float>,
    pub max_value: Float,
    pub bound: Float,
    /// `Some(±1)` when `P(1 − y, 1 − x) = ±P(x, y)` coefficient by coefficient.
    pub coefficient_sign: Option<i8>,
    pub passed: bool,
}

/// Checks that the Fricke image of each pair also lies on `P = 0`, and that
/// the polynomial is invariant up to sign under `(x, y) ↦ (1 − y, 1 − x)`.
pub fn verify_symmetry(
    poly: &BivariatePolynomial,
    pairs: &[(Float, Float)],
    bound: &Float,
) -> SymmetryReport {
    let values: Vec<Float> = pairs
        .iter()
        .map(|(a, b)| {
            poly.eval(
                &crate::real::exact_one_minus(b),
                &crate::real::exact_one_minus(a),
            )
            .abs()
        })
        .collect();
    let max_value = values
        .iter()
        .max_by(|a, b| a.partial_cmp(b).expect("finite"))
        .cloned()
        .unwrap_or_else(|| Float::with_val(bound.prec(), 0));
    let coefficient_sign = poly.fricke_sign();
    let passed = max_value <= *bound && coefficient_sign.is_some();
    SymmetryReport {
        values,
        max_value,
        bound: bound.clone(),
        coefficient_sign,
        passed,
    }
}

/// Sampling choices for [`recover_polynomial`].
#[derive(Debug, Clone)]
pub struct RecoverOptions {
    /// Degree `μ`; derived from the signature when `None`.
    pub mu: Option<usize>,
    /// Number of fitted samples; `None` selects `2(μ+1)² + 8`.
    pub samples: Option<usize>,
    /// Number of held-out pairs checked against the fitted polynomial.
    pub heldout: usize,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        RecoverOptions {
            mu: None,
            samples: None,
            heldout: 50,
        }
    }
}

/// A fitted polynomial together with its held-out and symmetry checks.
#[derive(Debug, Clone)]
pub struct Recovery {
    pub fit: FitReport,
    pub heldout: Vec<ModulusPair>,
    pub heldout_max_residual: Float,
    pub symmetry: SymmetryReport,
}

impl Recovery {
    pub fn polynomial(&self) -> &BivariatePolynomial {
        &self.fit.polynomial
    }

    /// All held-out pairs and their Fricke images lie on `P = 0`.
    pub fn passed(&self) -> bool {
        self.heldout_max_residual <= self.fit.residual_bound && self.symmetry.passed
    }
}

/// Samples at Chebyshev-spread `α ∈ [0.1, 0.9]`, fits, and validates on
/// equally spaced held-out `α ∈ [0.15, 0.85]`.
pub fn recover_polynomial(
    params: &SignatureParams,
    p: u64,
    opts: &RecoverOptions,
) -> Result<Recovery> {
    let mu = match opts.mu {
        Some(mu) => mu,
        None => {
            let sig = params.arithmetic_signature().ok_or_else(|| {
                ModeqError::domain(format!(
                    "t = {} is not arithmetic; pass mu explicitly",
                    params.t()
                ))
            })?;
            degree_mu(p, sig)? as usize
        }
    };
    let prec = params.precision_bits();
    let count = opts
        .samples
        .unwrap_or(2 * (mu + 1) * (mu + 1) + EXTRA_SAMPLES);
    let fitted = solve_at(params, p, &chebyshev_alphas(count, 0.1, 0.9, prec))?;
    let fit = fit_with_report(&points(&fitted), mu, prec)?;
    let heldout = if opts.heldout >= 2 {
        sample_pairs(
            params,
            p,
            opts.heldout,
            (&real(prec, 0.15), &real(prec, 0.85)),
        )?
    } else {
        Vec::new()
    };
    let heldout_points = points(&heldout);
    let heldout_max_residual = max_abs_value(&fit.polynomial, &heldout_points);
    let symmetry = verify_symmetry(&fit.polynomial, &heldout_points, &fit.residual_bound);
    Ok(Recovery {
        fit,
        heldout,
        heldout_max_residual,
        symmetry,
    })
}
