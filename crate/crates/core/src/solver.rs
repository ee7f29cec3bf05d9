//! Solving `R(β) = p·R(α)` for the modulus `β` of order `p` over `α`.

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{ModeqError, Result};
use crate::hypergeom::{Kernel, SeriesLimits};
use crate::params::SignatureParams;
use crate::real::{
    exact_one_minus, from_decimal_string, parse_rational, pow2, to_decimal_string, RealX,
};

/// A solution `(α, β)` of the generalized modular equation of order `p`,
/// together with its multiplier and the residual `|R(β) − p·R(α)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusPair {
    pub t: Rational,
    pub p: u64,
    pub alpha: RealX,
    pub beta: RealX,
    pub m: RealX,
    pub residual: RealX,
    pub precision_bits: u32,
}

/// Exponent range of MPFR ends near `2^(−2^30)`.
const MAX_BRACKET_DOUBLINGS: u32 = 29;

/// `2^(16 − precision_bits)`.
pub fn default_tolerance(precision_bits: u32) -> RealX {
    pow2(precision_bits, 16 - precision_bits as i32)
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Residual tolerance; `None` selects [`default_tolerance`].
    pub tol: Option<RealX>,
    /// Polish with safeguarded Newton steps once bisection has 10 correct bits.
    pub newton: bool,
    pub max_iterations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: None,
            newton: true,
            max_iterations: 10_000,
        }
    }
}

/// Solves for `β` with `|R(β) − p·R(α)| ≤ tol`.
pub fn solve_order_p(
    params: &SignatureParams,
    alpha: &RealX,
    p: u64,
    tol: &RealX,
) -> Result<ModulusPair> {
    let opts = SolveOptions {
        tol: Some(tol.clone()),
        ..SolveOptions::default()
    };
    solve_with(params, alpha, p, &opts)
}

pub fn solve_with(
    params: &SignatureParams,
    alpha: &RealX,
    p: u64,
    opts: &SolveOptions,
) -> Result<ModulusPair> {
    let prec = params.precision_bits();
    if alpha.is_nan() || *alpha <= 0 || *alpha >= 1 {
        return Err(ModeqError::domain(format!(
            "alpha = {} is outside (0, 1)",
            to_decimal_string(alpha)
        )));
    }
    if p == 0 {
        return Err(ModeqError::domain("order p must be at least 1"));
    }
    let tol = opts.tol.clone().unwrap_or_else(|| default_tolerance(prec));
    if tol <= 0 {
        return Err(ModeqError::domain("tolerance must be positive"));
    }
    let alpha = Float::with_val(prec, alpha);
    if p == 1 {
        return Ok(ModulusPair {
            t: params.t().clone(),
            p,
            m: Float::with_val(prec, 1),
            residual: Float::with_val(prec, 0),
            beta: alpha.clone(),
            alpha,
            precision_bits: prec,
        });
    }

    let kernel = Kernel::new(params, SeriesLimits::default());
    let wp = kernel.wp();
    let (r_alpha, f_alpha) = kernel.ratio_and_denominator(&alpha)?;
    let target = r_alpha * p;
    let g = |beta: &Float| -> Result<(Float, Float)> {
        let (r, f) = kernel.ratio_and_denominator(beta)?;
        Ok((r - &target, f))
    };

    // g(α) = (1 − p)·R(α) < 0. Walk the lower end down as α·2^(−2^k)
    // until g changes sign.
    let mut hi = Float::with_val(wp, &alpha);
    let mut k = 0u32;
    let lo = loop {
        let lo = Float::with_val(wp, &alpha) >> (1u32 << k);
        if lo.is_zero() {
            return Err(ModeqError::PrecisionExhausted(format!(
                "no sign change of R(beta) - {p} R(alpha) above beta = alpha * 2^-{}",
                1u64 << k
            )));
        }
        let (g_lo, _) = g(&lo)?;
        if g_lo.is_zero() {
            return finish(params, &kernel, &alpha, &f_alpha, p, lo, &tol);
        }
        if g_lo > 0 {
            break lo;
        }
        if k >= MAX_BRACKET_DOUBLINGS {
            return Err(ModeqError::PrecisionExhausted(format!(
                "no sign change of R(beta) - {p} R(alpha) above beta = alpha * 2^-{}",
                1u64 << k
            )));
        }
        hi = lo;
        k += 1;
    };
    let mut lo = lo;

    let ten_bits = pow2(wp, -10);
    let mut iterations = 0usize;
    let mut beta = Float::with_val(wp, &hi);
    loop {
        iterations += 1;
        if iterations > opts.max_iterations {
            return Err(ModeqError::PrecisionExhausted(format!(
                "no beta with residual <= {} after {} iterations",
                tol.to_f64(),
                opts.max_iterations
            )));
        }
        let width = Float::with_val(wp, &hi - &lo);
        let narrow = width <= Float::with_val(wp, &hi * &ten_bits);
        let mid = if narrow {
            Float::with_val(wp, &lo + &hi) / 2u32
        } else if Float::with_val(wp, &hi / &lo) > 2 {
            Float::with_val(wp, &lo * &hi).sqrt()
        } else {
            Float::with_val(wp, &lo + &hi) / 2u32
        };
        if mid <= lo || mid >= hi {
            return Err(ModeqError::PrecisionExhausted(format!(
                "bracket collapsed at beta = {} before reaching tolerance {}",
                beta.to_f64(),
                tol.to_f64()
            )));
        }
        let mut candidate = mid;
        let (mut gc, mut fc) = g(&candidate)?;
        if opts.newton && narrow {
            // Newton from the midpoint, kept only while it stays inside the bracket.
            for _ in 0..8 {
                if Float::with_val(wp, gc.abs_ref()) <= tol {
                    break;
                }
                let slope = kernel.derivative_from(&candidate, &fc);
                let next = Float::with_val(wp, &candidate - Float::with_val(wp, &gc / &slope));
                if next <= lo || next >= hi {
                    break;
                }
                if gc > 0 {
                    lo = candidate.clone();
                } else {
                    hi = candidate.clone();
                }
                candidate = next;
                (gc, fc) = g(&candidate)?;
            }
        }
        beta = candidate;
        if Float::with_val(wp, gc.abs_ref()) <= tol {
            if opts.newton {
                // One step past the tolerance leaves headroom for later
                // transformations of the pair.
                let slope = kernel.derivative_from(&beta, &fc);
                let next = Float::with_val(wp, &beta - Float::with_val(wp, &gc / &slope));
                if next > lo && next < hi {
                    let (g_next, _) = g(&next)?;
                    if g_next.cmp_abs(&gc) == Some(std::cmp::Ordering::Less) {
                        beta = next;
                    }
                }
            }
            return finish(params, &kernel, &alpha, &f_alpha, p, beta, &tol);
        }
        if gc > 0 {
            lo = beta.clone();
        } else {
            hi = beta.clone();
        }
    }
}

fn finish(
    params: &SignatureParams,
    kernel: &Kernel,
    alpha: &Float,
    f_alpha: &Float,
    p: u64,
    beta: Float,
    tol: &Float,
) -> Result<ModulusPair> {
    let prec = params.precision_bits();
    let beta = Float::with_val(prec, beta);
    let (r_beta, f_beta) = kernel.ratio_and_denominator(&beta)?;
    let (r_alpha, _) = kernel.ratio_and_denominator(alpha)?;
    let residual = Float::with_val(prec, (r_beta - r_alpha * p).abs());
    if residual > *tol {
        return Err(ModeqError::PrecisionExhausted(format!(
            "residual {} after rounding beta to {prec} bits exceeds tolerance {}",
            residual.to_f64(),
            tol.to_f64()
        )));
    }
    let m = Float::with_val(prec, Float::with_val(kernel.wp(), f_alpha / &f_beta));
    Ok(ModulusPair {
        t: params.t().clone(),
        p,
        alpha: alpha.clone(),
        beta,
        m,
        residual,
        precision_bits: prec,
    })
}

/// The Fricke image `(1 − β, 1 − α)` of a solution, with `m` and the
/// residual recomputed. `R(1−z) = 1/R(z)` makes it a solution of the same order.
///
/// Both complements are exact: `precision_bits` grows by the leading zero
/// bits of the smaller modulus, so swapping twice returns the original pair.
pub fn swap_solution(pair: &ModulusPair) -> Result<ModulusPair> {
    let params = SignatureParams::new(pair.t.clone(), pair.precision_bits)?;
    let alpha = exact_one_minus(&pair.beta);
    let beta = exact_one_minus(&pair.alpha);
    let prec = alpha.prec().max(beta.prec()).max(pair.precision_bits);
    let kernel = Kernel::new(&params, SeriesLimits::default());
    let (r_alpha, f_alpha) = kernel.ratio_and_denominator(&alpha)?;
    let (r_beta, f_beta) = kernel.ratio_and_denominator(&beta)?;
    let residual = Float::with_val(pair.precision_bits, (r_beta - r_alpha * pair.p).abs());
    let m = Float::with_val(pair.precision_bits, f_alpha / f_beta);
    Ok(ModulusPair {
        t: pair.t.clone(),
        p: pair.p,
        alpha: Float::with_val(prec, alpha),
        beta: Float::with_val(prec, beta),
        m: Float::with_val(prec, m),
        residual: Float::with_val(prec, residual),
        precision_bits: prec,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub residual: RealX,
    pub tol: RealX,
    pub passed: bool,
}

/// Recomputes `|R(β) − p·R(α)|` at the precision of `params`.
pub fn verify_solution(
    params: &SignatureParams,
    pair: &ModulusPair,
    tol: &RealX,
) -> Result<Verification> {
    let kernel = Kernel::new(params, SeriesLimits::default());
    let (r_alpha, _) = kernel.ratio_and_denominator(&pair.alpha)?;
    let (r_beta, _) = kernel.ratio_and_denominator(&pair.beta)?;
    let residual = Float::with_val(params.precision_bits(), (r_beta - r_alpha * pair.p).abs());
    let passed = residual <= *tol;
    Ok(Verification {
        residual,
        tol: tol.clone(),
        passed,
    })
}

#[derive(Serialize, Deserialize)]
struct PairWire {
    t: String,
    p: u64,
    alpha: String,
    beta: String,
    m: String,
    residual: String,
    precision_bits: u32,
}

impl ModulusPair {
    pub fn to_json_value(&self) -> serde_json::Value {
        let wire = PairWire {
            t: self.t.to_string(),
            p: self.p,
            alpha: to_decimal_string(&self.alpha),
            beta: to_decimal_string(&self.beta),
            m: to_decimal_string(&self.m),
            residual: to_decimal_string(&self.residual),
            precision_bits: self.precision_bits,
        };
        serde_json::to_value(wire).expect("plain struct serializes")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(text: &str) -> Result<ModulusPair> {
        let wire: PairWire =
            serde_json::from_str(text).map_err(|e| ModeqError::Parse(e.to_string()))?;
        let prec = wire.precision_bits;
        Ok(ModulusPair {
            t: parse_rational(&wire.t)?,
            p: wire.p,
            alpha: from_decimal_string(&wire.alpha, prec)?,
            beta: from_decimal_string(&wire.beta, prec)?,
            m: from_decimal_string(&wire.m, prec)?,
            residual: from_decimal_string(&wire.residual, prec)?,
            precision_bits: prec,
        })
    }
}
