//! Closed-form identities satisfied by solution pairs, evaluated as residuals.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{ModeqError, Result};
use crate::params::SignatureParams;
use crate::real::{exact_one_minus, pow2, GUARD_BITS};
use crate::solver::{default_tolerance, swap_solution, verify_solution, ModulusPair};

/// An identity checked on a solved pair `(α, β)` with multiplier `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `|R(β) − p·R(α)|`, recomputed from scratch.
    Equation,
    /// The residual of the swapped pair `(1 − β, 1 − α)`.
    Fricke,
    /// Signature 3, order 2: `(αβ)^⅓ + ((1−α)(1−β))^⅓ = 1`.
    CubeRoot,
    /// Signature 3, order 2: `((1−β)²/(1−α))^⅓ − (β²/α)^⅓ = m`.
    MultiplierDifference,
    /// Signature 3, order 2: `(α²/β)^⅓ + ((1−α)²/(1−β))^⅓ = 4/m⁴`.
    MultiplierSum,
    /// Signature 3, order 2: `(α²/β)^⅓ + ((1−α)²/(1−β))^⅓ = 4/m²`.
    MultiplierSumSquared,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::Equation,
        Identity::Fricke,
        Identity::CubeRoot,
        Identity::MultiplierDifference,
        Identity::MultiplierSum,
        Identity::MultiplierSumSquared,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Equation => "equation",
            Identity::Fricke => "fricke",
            Identity::CubeRoot => "cube-root",
            Identity::MultiplierDifference => "multiplier-difference",
            Identity::MultiplierSum => "multiplier-sum",
            Identity::MultiplierSumSquared => "multiplier-sum-squared",
        }
    }

    /// Whether the identity only holds for signature 3 and order 2.
    pub fn needs_signature3_order2(self) -> bool {
        !matches!(self, Identity::Equation | Identity::Fricke)
    }

    /// Residual threshold used when none is given: the solver tolerance for
    /// the defining equation, `2^(32 − prec)` for the algebraic identities.
    pub fn default_threshold(self, precision_bits: u32) -> Float {
        match self {
            Identity::Equation | Identity::Fricke => default_tolerance(precision_bits),
            _ => pow2(precision_bits, 32 - precision_bits as i32),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = ModeqError;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Identity::ALL.iter().map(|i| i.name()).collect();
                ModeqError::Parse(format!(
                    "unknown identity {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// The absolute residual of `which` on `pair`, at the precision of `params`.
pub fn identity_residual(
    params: &SignatureParams,
    pair: &ModulusPair,
    which: Identity,
) -> Result<Float> {
    if which.needs_signature3_order2() && (*params.t() != Rational::from((1, 3)) || pair.p != 2) {
        return Err(ModeqError::domain(format!(
            "identity {which} holds only for t = 1/3 and p = 2"
        )));
    }
    let prec = params.precision_bits();
    let tol = default_tolerance(prec);
    match which {
        Identity::Equation => Ok(verify_solution(params, pair, &tol)?.residual),
        Identity::Fricke => {
            let swapped = swap_solution(pair)?;
            Ok(verify_solution(params, &swapped, &tol)?.residual)
        }
        _ => {
            let wp = prec + GUARD_BITS;
            let a = Float::with_val(wp, &pair.alpha);
            let b = Float::with_val(wp, &pair.beta);
            let a1 = Float::with_val(wp, exact_one_minus(&pair.alpha));
            let b1 = Float::with_val(wp, exact_one_minus(&pair.beta));
            let m = Float::with_val(wp, &pair.m);
            let value = match which {
                Identity::CubeRoot => {
                    Float::with_val(wp, &a * &b).cbrt() + Float::with_val(wp, &a1 * &b1).cbrt()
                        - 1u32
                }
                Identity::MultiplierDifference => {
                    let lhs = (Float::with_val(wp, b1.square_ref()) / &a1).cbrt()
                        - (Float::with_val(wp, b.square_ref()) / &a).cbrt();
                    lhs - m
                }
                Identity::MultiplierSum | Identity::MultiplierSumSquared => {
                    let lhs = (Float::with_val(wp, a.square_ref()) / &b).cbrt()
                        + (Float::with_val(wp, a1.square_ref()) / &b1).cbrt();
                    let power: u32 = if which == Identity::MultiplierSum {
                        4
                    } else {
                        2
                    };
                    let rhs = Float::with_val(wp, 4u32) / Float::with_val(wp, (&m).pow(power));
                    lhs - rhs
                }
                Identity::Equation | Identity::Fricke => unreachable!("handled above"),
            };
            Ok(Float::with_val(prec, value.abs()))
        }
    }
}
