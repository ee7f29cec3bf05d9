//! Evaluation of `F(z) = ₂F₁(t, 1−t; 1; z)` on `[0, 1)` and the quantities
//! built from it: the ratio `R(z) = F(1−z)/F(z)`, the Schwarz map
//! `f(z) = i·R(z)` and the multiplier `F(α)/F(β)`.
//!
//! For `z ≤ 1/2` the hypergeometric series is summed directly. Above the
//! crossover the `c = a + b` logarithmic connection formula is used:
//!
//! ```text
//! F(z) = sin(πt)/π · Σ (t)ₙ(1−t)ₙ/(n!)² · wⁿ · [2ψ(n+1) − ψ(t+n) − ψ(1−t+n) − ln w],   w = 1 − z
//! ```
//!
//! Every bracketed factor is positive on `(0, 1)`, so neither branch suffers
//! cancellation. Internally the sums run with extra guard bits and the result
//! is rounded once to the requested precision.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{ModeqError, Result};
use crate::params::SignatureParams;
use crate::real::{exact_one_minus, RealX, GUARD_BITS};

/// Which summation is used for a given argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Taylor series at the origin.
    Direct,
    /// Logarithmic expansion around `z = 1`.
    Connection,
}

impl Branch {
    pub fn for_argument(z: &Float) -> Branch {
        if *z <= 0.5 {
            Branch::Direct
        } else {
            Branch::Connection
        }
    }
}

/// Limits on a single series evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SeriesLimits {
    /// Maximum number of terms; `None` means `100 · precision_bits`.
    pub max_terms: Option<usize>,
}

impl SeriesLimits {
    fn cap(&self, precision_bits: u32) -> usize {
        self.max_terms.unwrap_or(100 * precision_bits as usize)
    }
}

/// `₂F₁(t, 1−t; 1; z)` for `0 ≤ z < 1`.
pub fn gauss_2f1_unit(params: &SignatureParams, z: &RealX) -> Result<RealX> {
    gauss_2f1_with(params, z, None, SeriesLimits::default())
}

/// As [`gauss_2f1_unit`], but forcing a branch and/or a term cap.
pub fn gauss_2f1_with(
    params: &SignatureParams,
    z: &RealX,
    branch: Option<Branch>,
    limits: SeriesLimits,
) -> Result<RealX> {
    check_unit_interval(z, true)?;
    let prec = params.precision_bits();
    let kernel = Kernel::new(params, limits);
    let value = kernel.eval(z, branch)?;
    Ok(Float::with_val(prec, value))
}

/// `R(z) = F(1−z) / F(z)` for `0 < z < 1`. Strictly decreasing, from `+∞`
/// at `0⁺` down to `0⁺` at `1⁻`.
pub fn ratio_r(params: &SignatureParams, z: &RealX) -> Result<RealX> {
    let (ratio, _) = Kernel::new(params, SeriesLimits::default()).ratio_and_denominator(z)?;
    Ok(Float::with_val(params.precision_bits(), ratio))
}

/// `dR/dz = −sin(πt) / (π z (1−z) F(z)²)`.
///
/// This is the generalized Legendre relation; it makes Newton steps on `R`
/// cost nothing beyond the `F(z)` already computed for `R` itself.
pub fn ratio_derivative(params: &SignatureParams, z: &RealX) -> Result<RealX> {
    check_unit_interval(z, false)?;
    let kernel = Kernel::new(params, SeriesLimits::default());
    let f = kernel.eval(z, None)?;
    Ok(Float::with_val(
        params.precision_bits(),
        kernel.derivative_from(z, &f),
    ))
}

/// Schwarz triangle map `f(z) = i·R(z)` on the real slice `(0, 1)`.
pub fn schwarz_map(params: &SignatureParams, z: &RealX) -> Result<Complex> {
    let r = ratio_r(params, z)?;
    let prec = params.precision_bits();
    Ok(Complex::with_val(prec, (Float::with_val(prec, 0), r)))
}

/// The multiplier `m = F(α) / F(β)`.
pub fn multiplier(params: &SignatureParams, alpha: &RealX, beta: &RealX) -> Result<RealX> {
    check_unit_interval(alpha, false)?;
    check_unit_interval(beta, false)?;
    let kernel = Kernel::new(params, SeriesLimits::default());
    let fa = kernel.eval(alpha, None)?;
    let fb = kernel.eval(beta, None)?;
    Ok(Float::with_val(params.precision_bits(), fa / fb))
}

fn check_unit_interval(z: &Float, allow_zero: bool) -> Result<()> {
    let low_ok = if allow_zero { *z >= 0 } else { *z > 0 };
    if z.is_nan() || !low_ok || *z >= 1 {
        let range = if allow_zero { "[0, 1)" } else { "(0, 1)" };
        return Err(ModeqError::domain(format!(
            "argument {z} is outside {range}"
        )));
    }
    Ok(())
}

/// Shared working state for evaluations at one `(t, precision)`.
pub(crate) struct Kernel {
    t: Float,
    one_minus_t: Float,
    /// Working precision, including guard bits.
    wp: u32,
    /// Relative term threshold exponent: stop when `term < 2^-stop_bits · sum`.
    stop_bits: u32,
    cap: usize,
}

impl Kernel {
    pub(crate) fn new(params: &SignatureParams, limits: SeriesLimits) -> Kernel {
        let prec = params.precision_bits();
        let wp = prec + GUARD_BITS;
        let t = params.t_real(wp);
        let one_minus_t = Float::with_val(wp, 1) - &t;
        Kernel {
            t,
            one_minus_t,
            wp,
            stop_bits: prec + 8,
            cap: limits.cap(prec),
        }
    }

    pub(crate) fn wp(&self) -> u32 {
        self.wp
    }

    /// `F(z)` at the working precision.
    pub(crate) fn eval(&self, z: &Float, branch: Option<Branch>) -> Result<Float> {
        match branch.unwrap_or_else(|| Branch::for_argument(z)) {
            Branch::Direct => self.direct(&Float::with_val(self.wp, z)),
            Branch::Connection => {
                if *z <= 0 {
                    return Err(ModeqError::domain("connection branch needs z > 0"));
                }
                let w = Float::with_val(self.wp, exact_one_minus(z));
                self.connection(&w)
            }
        }
    }

    /// `(R(z), F(z))` at the working precision.
    ///
    /// The complement `1 − z` is never rounded: below the crossover `F(1−z)`
    /// comes from the connection sum in `w = z` itself, and above it `1 − z`
    /// is exact (Sterbenz).
    pub(crate) fn ratio_and_denominator(&self, z: &Float) -> Result<(Float, Float)> {
        check_unit_interval(z, false)?;
        let (num, den) = if *z <= 0.5 {
            let zw = Float::with_val(self.wp, z);
            (self.connection(&zw)?, self.direct(&zw)?)
        } else {
            let w = Float::with_val(self.wp, exact_one_minus(z));
            (self.direct(&w)?, self.connection(&w)?)
        };
        Ok((num / &den, den))
    }

    pub(crate) fn derivative_from(&self, z: &Float, f_at_z: &Float) -> Float {
        let wp = self.wp;
        let pi = Float::with_val(wp, Constant::Pi);
        let sin = Float::with_val(wp, &self.t * &pi).sin();
        let w = Float::with_val(wp, exact_one_minus(z));
        let z = Float::with_val(wp, z);
        let denom = pi * z * w * Float::with_val(wp, f_at_z.square_ref());
        -(sin / denom)
    }

    fn pochhammer_step(&self, coeff: &mut Float, n: usize) {
        // (t+n)(1-t+n)/(n+1)^2
        let a = Float::with_val(self.wp, &self.t + n as u32);
        let b = Float::with_val(self.wp, &self.one_minus_t + n as u32);
        *coeff *= a * b;
        let n1 = (n as u64 + 1) * (n as u64 + 1);
        *coeff /= n1;
    }

    fn direct(&self, z: &Float) -> Result<Float> {
        let mut term = Float::with_val(self.wp, 1);
        let mut sum = Float::with_val(self.wp, 1);
        if z.is_zero() {
            return Ok(sum);
        }
        for n in 0..self.cap {
            self.pochhammer_step(&mut term, n);
            term *= z;
            sum += &term;
            if self.converged(&term, &sum) {
                return Ok(sum);
            }
        }
        Err(ModeqError::NonConvergence { terms: self.cap })
    }

    /// Connection-formula sum in `w = 1 − z`, valid for `0 < w < 1`.
    fn connection(&self, w: &Float) -> Result<Float> {
        let wp = self.wp;
        let log_w = Float::with_val(wp, w.ln_ref());
        // h_0 = 2ψ(1) − ψ(t) − ψ(1−t) = −2γ − ψ(t) − ψ(1−t)
        let euler = Float::with_val(wp, Constant::Euler);
        let mut h = -(euler * 2u32)
            - Float::with_val(wp, self.t.digamma_ref())
            - Float::with_val(wp, self.one_minus_t.digamma_ref());
        let mut coeff = Float::with_val(wp, 1);
        let mut w_pow = Float::with_val(wp, 1);
        let mut sum = Float::with_val(wp, &h - &log_w);
        let mut converged = false;
        for n in 0..self.cap {
            self.pochhammer_step(&mut coeff, n);
            // h_{n+1} = h_n + 2/(n+1) − 1/(t+n) − 1/(1−t+n)
            let two_over = Float::with_val(wp, 2) / (n as u32 + 1);
            let inv_a = Float::with_val(wp, &self.t + n as u32).recip();
            let inv_b = Float::with_val(wp, &self.one_minus_t + n as u32).recip();
            h += two_over - inv_a - inv_b;
            w_pow *= w;
            let term = Float::with_val(wp, &coeff * &w_pow) * Float::with_val(wp, &h - &log_w);
            sum += &term;
            if self.converged(&term, &sum) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(ModeqError::NonConvergence { terms: self.cap });
        }
        let pi = Float::with_val(wp, Constant::Pi);
        let scale = Float::with_val(wp, &self.t * &pi).sin() / pi;
        Ok(sum * scale)
    }

    fn converged(&self, term: &Float, sum: &Float) -> bool {
        if term.is_zero() {
            return true;
        }
        let bound = Float::with_val(self.wp, sum.abs_ref()) >> self.stop_bits;
        Float::with_val(self.wp, term.abs_ref()) < bound
    }
}
