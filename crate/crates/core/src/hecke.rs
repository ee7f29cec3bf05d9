//! Exact arithmetic in the even Hecke subgroups `H_e(λ)` for `λ² ∈ {2, 3, 4}`.
//!
//! A [`HeckeMatrix`] stores the integers `(a, b, c, d)` of
//! `(a, bλ; cλ, d)` with `ad − bcλ² = 1`. `λ` itself never appears, so all
//! arithmetic stays in `ℤ`. Matrices are projective: the sign is fixed so that
//! the first nonzero entry of the top row is positive.

use std::fmt;
use std::str::FromStr;

use num_integer::gcd;
use rug::Integer;

use crate::error::{ModeqError, Result};

pub const COSET_INDEX_MAX_N: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeckeMatrix {
    a: Integer,
    b: Integer,
    c: Integer,
    d: Integer,
    lambda_sq: u32,
}

/// An element of `PSL(2, ℤ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    a: Integer,
    b: Integer,
    c: Integer,
    d: Integer,
}

fn check_lambda_sq(lambda_sq: u32) -> Result<()> {
    if (2..=4).contains(&lambda_sq) {
        Ok(())
    } else {
        Err(ModeqError::Range(format!(
            "lambda^2 = {lambda_sq} is not one of 2, 3, 4"
        )))
    }
}

/// Negates all four entries unless the first nonzero of `(a, b)` is positive.
fn normalize_sign(a: &mut Integer, b: &mut Integer, c: &mut Integer, d: &mut Integer) {
    let negative = match a.cmp0() {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => b.cmp0() == std::cmp::Ordering::Less,
    };
    if negative {
        for x in [a, b, c, d] {
            *x = -std::mem::take(x);
        }
    }
}

impl HeckeMatrix {
    pub fn new(
        a: impl Into<Integer>,
        b: impl Into<Integer>,
        c: impl Into<Integer>,
        d: impl Into<Integer>,
        lambda_sq: u32,
    ) -> Result<Self> {
        check_lambda_sq(lambda_sq)?;
        let (mut a, mut b, mut c, mut d) = (a.into(), b.into(), c.into(), d.into());
        let det = Integer::from(&a * &d) - Integer::from(&b * &c) * lambda_sq;
        if det != 1 {
            return Err(ModeqError::domain(format!(
                "ad - bc*lambda^2 = {det} for [{a} {b}; {c} {d}] lambda2={lambda_sq}"
            )));
        }
        normalize_sign(&mut a, &mut b, &mut c, &mut d);
        Ok(HeckeMatrix {
            a,
            b,
            c,
            d,
            lambda_sq,
        })
    }

    fn from_parts_unchecked(
        mut a: Integer,
        mut b: Integer,
        mut c: Integer,
        mut d: Integer,
        lambda_sq: u32,
    ) -> Self {
        normalize_sign(&mut a, &mut b, &mut c, &mut d);
        HeckeMatrix {
            a,
            b,
            c,
            d,
            lambda_sq,
        }
    }

    pub fn identity(lambda_sq: u32) -> Result<Self> {
        Self::new(1, 0, 0, 1, lambda_sq)
    }

    /// `B = (1, λ; 0, 1)`, i.e. `z ↦ z + λ`.
    pub fn translation(lambda_sq: u32) -> Result<Self> {
        Self::new(1, 1, 0, 1, lambda_sq)
    }

    /// `A·B·A⁻¹ = (1, 0; −λ, 1)`.
    pub fn lower_translation(lambda_sq: u32) -> Result<Self> {
        Self::new(1, 0, -1, 1, lambda_sq)
    }

    /// `(A·B)² = (−1, −λ; λ, λ² − 1)`, elliptic for `λ² < 4`.
    pub fn elliptic(lambda_sq: u32) -> Result<Self> {
        Self::new(-1, -1, 1, lambda_sq as i64 - 1, lambda_sq)
    }

    /// The three matrices above together with their inverses.
    pub fn generators(lambda_sq: u32) -> Result<Vec<HeckeMatrix>> {
        let base = [
            Self::translation(lambda_sq)?,
            Self::lower_translation(lambda_sq)?,
            Self::elliptic(lambda_sq)?,
        ];
        let inverses: Vec<_> = base.iter().map(inverse).collect();
        Ok(base.into_iter().chain(inverses).collect())
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }
    pub fn b(&self) -> &Integer {
        &self.b
    }
    pub fn c(&self) -> &Integer {
        &self.c
    }
    pub fn d(&self) -> &Integer {
        &self.d
    }
    pub fn lambda_sq(&self) -> u32 {
        self.lambda_sq
    }

    pub fn determinant(&self) -> Integer {
        Integer::from(&self.a * &self.d) - Integer::from(&self.b * &self.c) * self.lambda_sq
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1 && self.b == 0 && self.c == 0 && self.d == 1
    }

    pub fn mul(&self, other: &HeckeMatrix) -> Result<HeckeMatrix> {
        multiply(self, other)
    }
}

/// `(a, bλ; cλ, d)·(a', b'λ; c'λ, d')` with `λ²` folded back into `ℤ`.
pub fn multiply(x: &HeckeMatrix, y: &HeckeMatrix) -> Result<HeckeMatrix> {
    if x.lambda_sq != y.lambda_sq {
        return Err(ModeqError::LambdaMismatch {
            left: x.lambda_sq,
            right: y.lambda_sq,
        });
    }
    let l = x.lambda_sq;
    let a = Integer::from(&x.a * &y.a) + Integer::from(&x.b * &y.c) * l;
    let b = Integer::from(&x.a * &y.b) + Integer::from(&x.b * &y.d);
    let c = Integer::from(&x.c * &y.a) + Integer::from(&x.d * &y.c);
    let d = Integer::from(&x.c * &y.b) * l + Integer::from(&x.d * &y.d);
    Ok(HeckeMatrix::from_parts_unchecked(a, b, c, d, l))
}

/// `(d, −bλ; −cλ, a)`.
pub fn inverse(x: &HeckeMatrix) -> HeckeMatrix {
    HeckeMatrix::from_parts_unchecked(
        x.d.clone(),
        Integer::from(-&x.b),
        Integer::from(-&x.c),
        x.a.clone(),
        x.lambda_sq,
    )
}

/// Membership in `H_{M_p}(λ)`: the `H_e` form with `p | c`.
pub fn in_hmp(x: &HeckeMatrix, p: u64) -> bool {
    p >= 1 && x.determinant() == 1 && x.c.is_divisible_u(p as u32)
}

/// `Θ(X) = M_λ⁻¹·X·M_λ = (a, b; cλ², d)`, an isomorphism `H_e(λ) → Γ₀(λ²)`.
pub fn theta_iso(x: &HeckeMatrix) -> IntMatrix {
    IntMatrix::from_parts_unchecked(
        x.a.clone(),
        x.b.clone(),
        Integer::from(&x.c * x.lambda_sq),
        x.d.clone(),
    )
}

/// Conjugation by the Fricke matrix `W_p = (0, −1; p, 0)`:
/// `W_p⁻¹·X·W_p = (d, −(c/p)λ; −p·bλ, a)`. Requires `p | c`.
pub fn fricke_conj(x: &HeckeMatrix, p: u64) -> Result<HeckeMatrix> {
    if p == 0 || !x.c.is_divisible_u(p as u32) {
        return Err(ModeqError::Divisibility {
            c: x.c.to_string(),
            p,
        });
    }
    let c_over_p = Integer::from(x.c.div_exact_u_ref(p as u32));
    Ok(HeckeMatrix::from_parts_unchecked(
        x.d.clone(),
        -c_over_p,
        Integer::from(-&x.b) * p,
        x.a.clone(),
        x.lambda_sq,
    ))
}

impl IntMatrix {
    pub fn new(
        a: impl Into<Integer>,
        b: impl Into<Integer>,
        c: impl Into<Integer>,
        d: impl Into<Integer>,
    ) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = Integer::from(&a * &d) - Integer::from(&b * &c);
        if det != 1 {
            return Err(ModeqError::domain(format!(
                "ad - bc = {det} for [{a} {b}; {c} {d}]"
            )));
        }
        Ok(Self::from_parts_unchecked(a, b, c, d))
    }

    fn from_parts_unchecked(
        mut a: Integer,
        mut b: Integer,
        mut c: Integer,
        mut d: Integer,
    ) -> Self {
        normalize_sign(&mut a, &mut b, &mut c, &mut d);
        IntMatrix { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::from_parts_unchecked(1.into(), 0.into(), 0.into(), 1.into())
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }
    pub fn b(&self) -> &Integer {
        &self.b
    }
    pub fn c(&self) -> &Integer {
        &self.c
    }
    pub fn d(&self) -> &Integer {
        &self.d
    }

    pub fn determinant(&self) -> Integer {
        Integer::from(&self.a * &self.d) - Integer::from(&self.b * &self.c)
    }

    pub fn mul(&self, y: &IntMatrix) -> IntMatrix {
        let x = self;
        IntMatrix::from_parts_unchecked(
            Integer::from(&x.a * &y.a) + Integer::from(&x.b * &y.c),
            Integer::from(&x.a * &y.b) + Integer::from(&x.b * &y.d),
            Integer::from(&x.c * &y.a) + Integer::from(&x.d * &y.c),
            Integer::from(&x.c * &y.b) + Integer::from(&x.d * &y.d),
        )
    }
}

/// Membership in `Γ₀(N)`: the lower-left entry is divisible by `N`.
pub fn gamma0_member(m: &IntMatrix, n: u64) -> bool {
    n >= 1 && m.c.is_divisible(&Integer::from(n))
}

/// `|Γ : Γ₀(N)|`, counted as the number of points of `ℙ¹(ℤ/Nℤ)`.
///
/// Walks all pairs `(c, d)` in lexicographic order; each primitive pair not
/// yet seen opens a new class and marks its whole orbit under the units, so
/// the counted representative is the lexicographically smallest member.
pub fn coset_index_bruteforce(n: u64) -> Result<u64> {
    if !(1..=COSET_INDEX_MAX_N).contains(&n) {
        return Err(ModeqError::Range(format!(
            "N = {n} is outside [1, {COSET_INDEX_MAX_N}]"
        )));
    }
    let n = n as usize;
    let units: Vec<usize> = (0..n).filter(|&u| gcd(u, n) == 1).collect();
    let mut seen = vec![0u64; (n * n).div_ceil(64)];
    let mut classes = 0u64;
    for c in 0..n {
        for d in 0..n {
            let idx = c * n + d;
            if seen[idx / 64] >> (idx % 64) & 1 == 1 || gcd(gcd(c, d), n) != 1 {
                continue;
            }
            classes += 1;
            for &u in &units {
                let j = (u * c % n) * n + u * d % n;
                seen[j / 64] |= 1 << (j % 64);
            }
        }
    }
    Ok(classes)
}

/// `|H_e(λ) : H_{M_p}(λ)|` through `Θ`, as `|Γ : Γ₀(λ²p)| / |Γ : Γ₀(λ²)|`
/// with both indices counted by [`coset_index_bruteforce`].
pub fn hmp_index_bruteforce(p: u64, lambda_sq: u32) -> Result<u64> {
    check_lambda_sq(lambda_sq)?;
    let big = coset_index_bruteforce(lambda_sq as u64 * p)?;
    let small = coset_index_bruteforce(lambda_sq as u64)?;
    if big % small != 0 {
        return Err(ModeqError::Internal(format!(
            "index {big} is not a multiple of {small}"
        )));
    }
    Ok(big / small)
}

impl fmt::Display for HeckeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} {}; {} {}] lambda2={}",
            self.a, self.b, self.c, self.d, self.lambda_sq
        )
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

/// Splits `"[a b; c d] rest"` into the four integers and the trailing text.
fn parse_bracket(text: &str) -> Result<([Integer; 4], &str)> {
    let bad = || ModeqError::Parse(format!("{text:?}: expected \"[a b; c d]\""));
    let s = text.trim();
    let inner_start = s.strip_prefix('[').ok_or_else(bad)?;
    let close = inner_start.find(']').ok_or_else(bad)?;
    let (inner, rest) = (&inner_start[..close], &inner_start[close + 1..]);
    let (top, bottom) = inner.split_once(';').ok_or_else(bad)?;
    let mut out = Vec::with_capacity(4);
    for row in [top, bottom] {
        let entries: Vec<&str> = row.split_whitespace().collect();
        if entries.len() != 2 {
            return Err(bad());
        }
        for e in entries {
            out.push(
                Integer::from_str(e)
                    .map_err(|_| ModeqError::Parse(format!("{e:?} is not an integer")))?,
            );
        }
    }
    let [a, b, c, d]: [Integer; 4] = out.try_into().map_err(|_| bad())?;
    Ok(([a, b, c, d], rest.trim()))
}

impl FromStr for HeckeMatrix {
    type Err = ModeqError;

    /// `"[a b; c d] lambda2=n"`, with `b` and `c` the integer coefficients of `λ`.
    fn from_str(s: &str) -> Result<Self> {
        let ([a, b, c, d], rest) = parse_bracket(s)?;
        let lambda_sq = rest
            .strip_prefix("lambda2=")
            .and_then(|n| n.trim().parse::<u32>().ok())
            .ok_or_else(|| ModeqError::Parse(format!("{s:?}: missing \"lambda2=n\"")))?;
        HeckeMatrix::new(a, b, c, d, lambda_sq)
    }
}

impl FromStr for IntMatrix {
    type Err = ModeqError;

    fn from_str(s: &str) -> Result<Self> {
        let ([a, b, c, d], rest) = parse_bracket(s)?;
        if !rest.is_empty() {
            return Err(ModeqError::Parse(format!("{s:?}: trailing text {rest:?}")));
        }
        IntMatrix::new(a, b, c, d)
    }
}
