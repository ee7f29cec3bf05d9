//! Continued-fraction rounding of reals to small-denominator rationals.

use rug::{Float, Integer, Rational};

/// Best rational approximation of `x` with denominator at most `max_denom`:
/// the last continued-fraction convergent within the bound.
pub fn best_rational(x: &Float, max_denom: &Integer) -> Rational {
    let exact = x.to_rational().expect("finite input");
    let (mut h_prev, mut h) = (Integer::from(0), Integer::from(1));
    let (mut k_prev, mut k) = (Integer::from(1), Integer::from(0));
    let mut rest = exact;
    loop {
        let a = rest.clone().floor().numer().clone();
        let h_next = Integer::from(&a * &h) + &h_prev;
        let k_next = Integer::from(&a * &k) + &k_prev;
        if k_next > *max_denom {
            break;
        }
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        let frac = rest - Rational::from(a);
        if frac == 0 {
            break;
        }
        rest = frac.recip();
    }
    if k == 0 {
        // max_denom < 1 cannot hold a convergent; fall back to the nearest integer
        return Rational::from(x.to_integer().expect("finite input"));
    }
    Rational::from((h, k))
}
