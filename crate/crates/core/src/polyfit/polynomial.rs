//! Integer bivariate polynomials of bidegree at most `(μ, μ)`.

use std::fmt;

use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{ModeqError, Result};
use crate::real::GUARD_BITS;

/// `P(x, y) = Σ coeffs[j][k] · x^j · y^k` with `0 ≤ j, k ≤ μ`, where `x`
/// stands for `α` and `y` for `β`.
///
/// Always normalized: the coefficients have content 1 and the leading
/// coefficient in graded-lex order (total degree first, then the power of
/// `x`) is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePolynomial {
    mu: usize,
    coeffs: Vec<Vec<Integer>>,
}

impl BivariatePolynomial {
    /// Builds and normalizes a polynomial from a `(μ+1) × (μ+1)` grid.
    pub fn new(mu: usize, coeffs: Vec<Vec<Integer>>) -> Result<Self> {
        if coeffs.len() != mu + 1 || coeffs.iter().any(|row| row.len() != mu + 1) {
            return Err(ModeqError::domain(format!(
                "coefficient grid must be {0} x {0}",
                mu + 1
            )));
        }
        let mut poly = BivariatePolynomial { mu, coeffs };
        let content = poly
            .coeffs
            .iter()
            .flatten()
            .fold(Integer::new(), |g, c| g.gcd(c));
        if content == 0 {
            return Err(ModeqError::domain("the zero polynomial has no normal form"));
        }
        let (j, k) = poly.leading_monomial().expect("nonzero polynomial");
        let negate = poly.coeffs[j][k] < 0;
        for c in poly.coeffs.iter_mut().flatten() {
            c.div_exact_mut(&content);
            if negate {
                *c = -std::mem::take(c);
            }
        }
        Ok(poly)
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(mu: usize, coeffs: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            mu,
            coeffs
                .iter()
                .map(|row| row.iter().map(|&c| Integer::from(c)).collect())
                .collect(),
        )
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    /// `coeffs()[j][k]` multiplies `x^j y^k`.
    pub fn coeffs(&self) -> &[Vec<Integer>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize, k: usize) -> &Integer {
        &self.coeffs[j][k]
    }

    /// Highest power of `x` and of `y` with a nonzero coefficient.
    pub fn bidegree(&self) -> (usize, usize) {
        let mut dx = 0;
        let mut dy = 0;
        for (j, row) in self.coeffs.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                if *c != 0 {
                    dx = dx.max(j);
                    dy = dy.max(k);
                }
            }
        }
        (dx, dy)
    }

    /// Nonzero monomials `(j, k)` in descending graded-lex order.
    pub fn monomials(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..=self.mu)
            .flat_map(|j| (0..=self.mu).map(move |k| (j, k)))
            .filter(|&(j, k)| self.coeffs[j][k] != 0)
            .collect();
        out.sort_by_key(|&(j, k)| std::cmp::Reverse((j + k, j)));
        out
    }

    pub fn leading_monomial(&self) -> Option<(usize, usize)> {
        self.monomials().into_iter().next()
    }

    /// Sum of absolute values of the coefficients; bounds `|P|` on the unit square.
    pub fn l1_norm(&self) -> Integer {
        self.coeffs.iter().flatten().map(|c| c.clone().abs()).sum()
    }

    /// Evaluates `P(x, y)` at the larger of the argument precisions.
    pub fn eval(&self, x: &Float, y: &Float) -> Float {
        let prec = x.prec().max(y.prec());
        let wp = prec + GUARD_BITS;
        let mut acc = Float::with_val(wp, 0);
        for row in self.coeffs.iter().rev() {
            let mut inner = Float::with_val(wp, 0);
            for c in row.iter().rev() {
                inner *= y;
                inner += c;
            }
            acc *= x;
            acc += inner;
        }
        Float::with_val(prec, acc)
    }

    /// The Fricke image `Q(x, y) = P(1 − y, 1 − x)`, expanded exactly and
    /// returned without normalization.
    pub fn fricke_image_grid(&self) -> Vec<Vec<Integer>> {
        let n = self.mu + 1;
        let binom: Vec<Vec<Integer>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|i| Integer::from(Integer::binomial_u(r as u32, i as u32)))
                    .collect()
            })
            .collect();
        let mut out = vec![vec![Integer::new(); n]; n];
        for (j, row) in self.coeffs.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                // (1 − y)^j (1 − x)^k = Σ_i Σ_l C(j,i) C(k,l) (−1)^(i+l) y^i x^l
                for i in 0..=j {
                    for l in 0..=k {
                        let mut term = Integer::from(c * &binom[j][i]) * &binom[k][l];
                        if (i + l) % 2 == 1 {
                            term = -term;
                        }
                        out[l][i] += term;
                    }
                }
            }
        }
        out
    }

    /// `Some(±1)` when `P(1 − y, 1 − x) = ±P(x, y)` identically.
    pub fn fricke_sign(&self) -> Option<i8> {
        let image = self.fricke_image_grid();
        if image == self.coeffs {
            return Some(1);
        }
        let negated_matches = image
            .iter()
            .flatten()
            .zip(self.coeffs.iter().flatten())
            .all(|(a, b)| Integer::from(a + b) == 0);
        negated_matches.then_some(-1)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let wire = PolyWire {
            mu: self.mu,
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| c.to_string()).collect())
                .collect(),
        };
        serde_json::to_value(wire).expect("plain struct serializes")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Parses `{"mu": μ, "coeffs": [[...], ...]}` with decimal-string entries.
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: PolyWire =
            serde_json::from_str(text).map_err(|e| ModeqError::Parse(e.to_string()))?;
        let coeffs = wire
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        s.parse::<Integer>()
                            .map_err(|e| ModeqError::Parse(format!("coefficient {s:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(wire.mu, coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyWire {
    mu: usize,
    coeffs: Vec<Vec<String>>,
}

/// Terms in descending graded-lex order, e.g. `8*x^3*y^3 - 12*x^2*y^3 + ...`.
impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (j, k)) in self.monomials().into_iter().enumerate() {
            let c = &self.coeffs[j][k];
            let negative = *c < 0;
            let magnitude = c.clone().abs();
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if magnitude != 1 || (j == 0 && k == 0) {
                factors.push(magnitude.to_string());
            }
            for (var, power) in [("x", j), ("y", k)] {
                match power {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{power}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn difference() -> BivariatePolynomial {
        // x − y
        BivariatePolynomial::from_i64(1, &[vec![0, -1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn normalization_divides_content_and_fixes_sign() {
        let p = BivariatePolynomial::from_i64(1, &[vec![0, 6], vec![-6, 0]]).unwrap();
        assert_eq!(p, difference());
        assert_eq!(p.leading_monomial(), Some((1, 0)));
        assert!(BivariatePolynomial::from_i64(1, &[vec![0, 0], vec![0, 0]]).is_err());
        assert!(BivariatePolynomial::from_i64(2, &[vec![0, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn display_in_graded_order() {
        let p = BivariatePolynomial::from_i64(1, &[vec![-3, 2], vec![1, 1]]).unwrap();
        assert_eq!(p.to_string(), "x*y + x + 2*y - 3");
        assert_eq!(difference().to_string(), "x - y");
    }

    #[test]
    fn fricke_image_of_difference() {
        // (1 − y) − (1 − x) = x − y
        assert_eq!(difference().fricke_sign(), Some(1));
        // x + y ↦ 2 − x − y: neither sign
        let sum = BivariatePolynomial::from_i64(1, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(sum.fricke_sign(), None);
        // x + y − 1 ↦ 1 − x − y
        let q = BivariatePolynomial::from_i64(1, &[vec![-1, 1], vec![1, 0]]).unwrap();
        assert_eq!(q.fricke_sign(), Some(-1));
    }

    #[test]
    fn eval_and_json_round_trip() {
        let p = BivariatePolynomial::from_i64(1, &[vec![-3, 2], vec![1, 1]]).unwrap();
        let x = Float::with_val(128, 0.5);
        let y = Float::with_val(128, 0.25);
        // 0.125 + 0.5 + 0.5 − 3
        assert_eq!(p.eval(&x, &y), -1.875);
        let back = BivariatePolynomial::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert!(
            BivariatePolynomial::from_json(r#"{"mu":1,"coeffs":[["1","x"],["0","0"]]}"#).is_err()
        );
    }
}
