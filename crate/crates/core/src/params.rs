use std::fmt;

use rug::float::Constant;
use rug::{Complex, Float, Rational};

use crate::error::{ModeqError, Result};
use crate::real::{real_from_rational, RealX, MIN_PRECISION_BITS};

/// The theory parameter `t` of signature `1/t`, with the quantities derived
/// from it and the working precision.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureParams {
    t: Rational,
    lambda_sq: Option<u32>,
    theta: RealX,
    precision_bits: u32,
}

impl SignatureParams {
    /// `t` must lie in `(0, 1/2]`.
    pub fn new(t: Rational, precision_bits: u32) -> Result<Self> {
        if precision_bits < MIN_PRECISION_BITS {
            return Err(ModeqError::Range(format!(
                "precision_bits = {precision_bits} is below {MIN_PRECISION_BITS}"
            )));
        }
        if t <= 0 || t > Rational::from((1, 2)) {
            return Err(ModeqError::domain(format!("t = {t} is outside (0, 1/2]")));
        }
        let lambda_sq = if t == Rational::from((1, 2)) {
            Some(4)
        } else if t == Rational::from((1, 3)) {
            Some(3)
        } else if t == Rational::from((1, 4)) {
            Some(2)
        } else {
            None
        };
        // theta = (1 - 2t) pi
        let one_minus_2t = Rational::from(1) - Rational::from(2 * &t);
        let theta = real_from_rational(precision_bits, &one_minus_2t)
            * Float::with_val(precision_bits, Constant::Pi);
        Ok(SignatureParams {
            t,
            lambda_sq,
            theta,
            precision_bits,
        })
    }

    /// Signature 2, 3 or 4, i.e. `t = 1/2, 1/3, 1/4`.
    pub fn from_signature(signature: u32, precision_bits: u32) -> Result<Self> {
        match signature {
            2..=4 => Self::new(Rational::from((1, signature)), precision_bits),
            other => Err(ModeqError::Signature(other.to_string())),
        }
    }

    pub fn with_precision(&self, precision_bits: u32) -> Result<Self> {
        Self::new(self.t.clone(), precision_bits)
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    /// `1/t`.
    pub fn signature(&self) -> Rational {
        self.t.clone().recip()
    }

    /// The integer signature when it is one of the arithmetic cases 2, 3, 4.
    pub fn arithmetic_signature(&self) -> Option<u32> {
        self.lambda_sq.map(|l| match l {
            4 => 2,
            3 => 3,
            _ => 4,
        })
    }

    /// `λ_t²` for `t ∈ {1/2, 1/3, 1/4}`.
    pub fn lambda_sq(&self) -> Option<u32> {
        self.lambda_sq
    }

    pub fn theta(&self) -> &RealX {
        &self.theta
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// `λ_t = 2 cos(θ/2)`.
    pub fn lambda(&self) -> RealX {
        let half: Float = self.theta.clone() / 2u32;
        half.cos() * 2u32
    }

    pub fn t_real(&self, prec: u32) -> RealX {
        real_from_rational(prec, &self.t)
    }

    /// Vertex data of the image triangle of the Schwarz map `i·F(1−z)/F(z)`.
    /// Only `f(1) = 0` is finite on the real slice; the other two vertices are
    /// recorded here and never evaluated as limits.
    pub fn triangle(&self) -> TriangleVertices {
        let prec = self.precision_bits;
        let half: Float = self.theta.clone() / 2u32;
        let third = Complex::with_val(prec, (half.clone().cos(), half.sin()));
        TriangleVertices {
            at_zero: Vertex::InfinityOnImaginaryAxis,
            at_one: Complex::with_val(prec, (0, 0)),
            at_infinity: third,
            angles: [
                Float::with_val(prec, 0),
                Float::with_val(prec, 0),
                self.theta.clone(),
            ],
        }
    }
}

impl fmt::Display for SignatureParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t = {} (signature {}), {} bits",
            self.t,
            self.signature(),
            self.precision_bits
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Vertex {
    InfinityOnImaginaryAxis,
}

/// Vertices `f(0) = i∞`, `f(1) = 0`, `f(∞) = e^{iθ/2}` and the interior
/// angles `0, 0, θ` at them.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleVertices {
    pub at_zero: Vertex,
    pub at_one: Complex,
    pub at_infinity: Complex,
    pub angles: [Float; 3],
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_squares_are_exact_integers_for_arithmetic_cases() {
        for (sig, expect) in [(2, 4u32), (3, 3), (4, 2)] {
            let p = SignatureParams::from_signature(sig, 128).unwrap();
            assert_eq!(p.lambda_sq(), Some(expect));
            assert_eq!(p.arithmetic_signature(), Some(sig));
            let l = p.lambda();
            let err = (l.clone() * &l - expect).abs();
            assert!(err < 1e-35, "sig {sig}: {err}");
        }
    }

    #[test]
    fn general_t_has_no_lambda() {
        let p = SignatureParams::new(Rational::from((2, 5)), 64).unwrap();
        assert_eq!(p.lambda_sq(), None);
        assert_eq!(p.signature(), Rational::from((5, 2)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(SignatureParams::new(Rational::from((3, 5)), 64).is_err());
        assert!(SignatureParams::new(Rational::from(0), 64).is_err());
        assert!(SignatureParams::new(Rational::from((1, 3)), 52).is_err());
        assert!(matches!(
            SignatureParams::from_signature(6, 64),
            Err(ModeqError::Signature(_))
        ));
    }

    #[test]
    fn third_vertex_lies_on_unit_circle() {
        let p = SignatureParams::from_signature(3, 64).unwrap();
        let v = p.triangle();
        let norm = Float::with_val(64, v.at_infinity.norm_ref());
        assert!((norm - 1u32).abs() < 1e-15);
        assert_eq!(v.angles[2], *p.theta());
    }
}
