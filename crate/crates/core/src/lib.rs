//! Generalized modular equations in Ramanujan's signatures 2, 3 and 4.
//!
//! With `F(z) = ₂F₁(t, 1 − t; 1; z)` and `R(z) = F(1 − z)/F(z)`, a modulus
//! `β` has order `p` over `α` when `R(β) = p·R(α)`. The crate provides:
//!
//! - [`hypergeom`]: extended-precision `F`, `R`, its derivative, the Schwarz
//!   map and the multiplier.
//! - [`solver`]: bracketing bisection with Newton polishing for `β`, and the
//!   exact Fricke swap `(α, β) ↦ (1 − β, 1 − α)`.
//! - [`degrees`]: Dedekind's `Ψ`, the degree `μ(p, s)` of the modular
//!   polynomial, and Russell's degrees.
//! - [`hecke`]: exact arithmetic in the Hecke groups `H_e(λ)`, the
//!   isomorphism `Θ` into `Γ₀(λ²)`, and Fricke conjugation.
//! - [`polyfit`]: recovery of the integer polynomial `P(α, β)` from solved
//!   pairs.
//! - [`identities`]: closed-form identities checked as residuals.
//!
//! ```
//! use modeq::real::{exact_one_minus, real};
//! use modeq::solver::{default_tolerance, solve_order_p};
//! use modeq::SignatureParams;
//!
//! let params = SignatureParams::from_signature(3, 128)?;
//! let pair = solve_order_p(&params, &real(128, 0.5), 2, &default_tolerance(128))?;
//! // (αβ)^⅓ + ((1−α)(1−β))^⅓ = 1 in signature 3, order 2
//! let product = pair.alpha.clone() * &pair.beta;
//! let complement = exact_one_minus(&pair.alpha) * exact_one_minus(&pair.beta);
//! let lhs = product.cbrt() + complement.cbrt();
//! assert!((lhs - 1u32).abs() < 1e-30);
//! # Ok::<(), modeq::ModeqError>(())
//! ```

pub mod degrees;
pub mod error;
pub mod hecke;
pub mod hypergeom;
pub mod identities;
pub mod params;
pub mod polyfit;
pub mod real;
pub mod solver;

pub use error::{ModeqError, Result};
pub use hecke::{HeckeMatrix, IntMatrix};
pub use params::SignatureParams;
pub use polyfit::BivariatePolynomial;
pub use real::RealX;
pub use solver::ModulusPair;
