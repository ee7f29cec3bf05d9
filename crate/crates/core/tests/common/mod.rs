//! Reference computations that share no code path with the library.
#![allow(dead_code)]

use rug::float::Constant;
use rug::{Float, Rational};

/// Arithmetic–geometric mean by the plain two-term iteration.
pub fn agm(a: &Float, b: &Float) -> Float {
    let prec = a.prec().max(b.prec());
    let mut a = Float::with_val(prec, a);
    let mut b = Float::with_val(prec, b);
    for _ in 0..200 {
        let next_a = Float::with_val(prec, &a + &b) / 2u32;
        let next_b = Float::with_val(prec, &a * &b).sqrt();
        let done = Float::with_val(prec, &next_a - &next_b).abs()
            <= Float::with_val(prec, next_a.abs_ref()) >> (prec - 4);
        a = next_a;
        b = next_b;
        if done {
            break;
        }
    }
    a
}

/// `K(k)` with `k² = z`, as `π / (2·AGM(1, √(1−z)))`.
pub fn elliptic_k_of_parameter(z: &Float) -> Float {
    let prec = z.prec();
    let one = Float::with_val(prec, 1);
    let kp = Float::with_val(prec, &one - z).sqrt();
    Float::with_val(prec, Constant::Pi) / (agm(&one, &kp) * 2u32)
}

/// `₂F₁(1/2, 1/2; 1; z) = (2/π)·K(√z)`.
pub fn f_half_by_agm(z: &Float) -> Float {
    let prec = z.prec();
    elliptic_k_of_parameter(z) * 2u32 / Float::with_val(prec, Constant::Pi)
}

/// `K'(k)/K(k)` with `k² = z`.
pub fn k_ratio_by_agm(z: &Float) -> Float {
    let prec = z.prec();
    let one = Float::with_val(prec, 1);
    let k = Float::with_val(prec, z.sqrt_ref());
    let kp = Float::with_val(prec, &one - z).sqrt();
    agm(&one, &kp) / agm(&one, &k)
}

/// First `terms` partial sum of `Σ (t)ₙ(1−t)ₙ/(n!)² zⁿ` with exact rational
/// coefficients, evaluated at `prec` bits.
pub fn partial_sum(t: &Rational, z: &Float, terms: usize, prec: u32) -> Float {
    let one_minus_t = Rational::from(1) - t;
    let mut coeff = Rational::from(1);
    let z = Float::with_val(prec, z);
    let mut z_pow = Float::with_val(prec, 1);
    let mut sum = Float::with_val(prec, 0);
    for n in 0..terms {
        sum += Float::with_val(prec, &coeff) * &z_pow;
        let a = Rational::from(t + n as u32);
        let b = Rational::from(&one_minus_t + n as u32);
        coeff *= a * b;
        coeff /= Rational::from((n as u64 + 1) * (n as u64 + 1));
        z_pow *= &z;
    }
    sum
}

/// β of order 2 over α = 1/2 in signature 3, from `β^{1/3} + (1−β)^{1/3} = 2^{1/3}`:
/// `u = β^{1/3}` solves `u² − s·u + 1/(3s) = 0` with `s = 2^{1/3}`.
pub fn sig3_order2_beta_at_half(prec: u32) -> Float {
    let s = Float::with_val(prec, 2).cbrt();
    let disc = Float::with_val(prec, s.square_ref())
        - Float::with_val(prec, 4) / (Float::with_val(prec, 3) * &s);
    let u = (s - disc.sqrt()) / 2u32;
    cube(&u)
}

pub fn cube(x: &Float) -> Float {
    Float::with_val(x.prec(), x * x) * x
}

/// `17 − 12√2`, the singular modulus squared with `K'/K = 2`.
pub fn singular_value_two(prec: u32) -> Float {
    Float::with_val(prec, 17) - Float::with_val(prec, 2).sqrt() * 12u32
}

/// Inverts `K'/K = target` by bisection on the AGM ratio.
pub fn invert_k_ratio(target: &Float, prec: u32) -> Float {
    let mut lo = Float::with_val(prec, 1) >> (prec / 2);
    let mut hi = Float::with_val(prec, 1) - (Float::with_val(prec, 1) >> (prec / 2));
    for _ in 0..(prec + 8) {
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        if k_ratio_by_agm(&mid) > *target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `|a − b|` in units of the last place of `b` at `prec` bits.
pub fn ulps(a: &Float, b: &Float, prec: u32) -> f64 {
    let diff = Float::with_val(4 * prec, a - b).abs();
    let exp = b.get_exp().unwrap_or(0);
    let ulp = Float::with_val(4 * prec, Float::i_exp(1, exp - prec as i32));
    (diff / ulp).to_f64()
}

use modeq::hecke::{multiply, HeckeMatrix};
use rand::Rng;

/// A product of `len` generators of `H_e(λ)` drawn uniformly.
pub fn random_word<R: Rng>(rng: &mut R, lambda_sq: u32, len: usize) -> HeckeMatrix {
    let gens = HeckeMatrix::generators(lambda_sq).unwrap();
    let mut x = HeckeMatrix::identity(lambda_sq).unwrap();
    for _ in 0..len {
        x = multiply(&x, &gens[rng.gen_range(0..gens.len())]).unwrap();
    }
    x
}

/// A random element of `H_{M_p}(λ)`, by rejection from random words.
pub fn random_hmp_element<R: Rng>(
    rng: &mut R,
    lambda_sq: u32,
    p: u64,
    max_len: usize,
) -> HeckeMatrix {
    loop {
        let len = rng.gen_range(0..=max_len);
        let x = random_word(rng, lambda_sq, len);
        if modeq::hecke::in_hmp(&x, p) {
            return x;
        }
    }
}

/// A random word of length uniform in `0..=max_len`.
pub fn random_word_upto<R: Rng>(rng: &mut R, lambda_sq: u32, max_len: usize) -> HeckeMatrix {
    let len = rng.gen_range(0..=max_len);
    random_word(rng, lambda_sq, len)
}
