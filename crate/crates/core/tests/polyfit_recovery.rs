mod common;

use std::time::Instant;

use modeq::polyfit::{
    chebyshev_alphas, fit_modular_polynomial, fit_with_report, points, recover_polynomial,
    sample_pairs, solve_at, verify_symmetry, RecoverOptions,
};
use modeq::real::real;
use modeq::{BivariatePolynomial, ModeqError, SignatureParams};
use rug::ops::Pow;
use rug::Float;

/// The cubic for signature 3 and order 2, as a grid `c[j][k]` of `α^j β^k`.
fn signature3_order2_cubic() -> BivariatePolynomial {
    BivariatePolynomial::from_i64(
        3,
        &[
            vec![0, 0, 0, -1],
            vec![0, 27, -30, 6],
            vec![0, -30, 39, -12],
            vec![-1, 6, -12, 8],
        ],
    )
    .unwrap()
}

/// Landen: `√β = (1 − √(1−α)) / (1 + √(1−α))` rationalizes to
/// `α²(1+β)² − 4β(2−α)² = 0`.
fn landen_quadratic() -> BivariatePolynomial {
    BivariatePolynomial::from_i64(2, &[vec![0, -16, 0], vec![0, 16, 0], vec![1, -2, 1]]).unwrap()
}

#[test]
fn cubic_oracle_expands_the_factored_form() {
    // (2α−1)³β³ − 3α(4α²−13α+10)β² + 3α(2α²−10α+9)β − α³ at a few rationals
    let cubic = signature3_order2_cubic();
    for (a, b) in [(0.5, 0.5), (0.25, 0.75), (0.125, 0.375)] {
        let direct = (2.0 * a - 1.0_f64).powi(3) * b * b * b
            - 3.0 * a * (4.0 * a * a - 13.0 * a + 10.0) * b * b
            + 3.0 * a * (2.0 * a * a - 10.0 * a + 9.0) * b
            - a * a * a;
        let got = cubic.eval(&real(64, a), &real(64, b)).to_f64();
        assert!((got - direct).abs() < 1e-12, "{a} {b}: {got} vs {direct}");
    }
    assert_eq!(cubic.eval(&real(64, 0.5), &real(64, 0.5)), 25.0 / 16.0);
}

#[test]
fn recovers_the_signature3_order2_cubic_at_256_bits() {
    let params = SignatureParams::from_signature(3, 256).unwrap();
    let start = Instant::now();
    let recovery = recover_polynomial(&params, 2, &RecoverOptions::default()).unwrap();
    assert_eq!(*recovery.polynomial(), signature3_order2_cubic());
    assert!(
        recovery.passed(),
        "held-out {} bound {}",
        recovery.heldout_max_residual,
        recovery.fit.residual_bound
    );
    assert!(recovery.fit.gap_bits >= 64.0);
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn recovers_the_landen_quadratic() {
    let params = SignatureParams::from_signature(2, 192).unwrap();
    let recovery = recover_polynomial(&params, 2, &RecoverOptions::default()).unwrap();
    assert_eq!(recovery.polynomial().mu(), 2);
    assert_eq!(*recovery.polynomial(), landen_quadratic());
    assert!(recovery.passed());
}

#[test]
fn signature2_order3_quartic_matches_its_closed_form() {
    let params = SignatureParams::from_signature(2, 256).unwrap();
    let recovery = recover_polynomial(&params, 3, &RecoverOptions::default()).unwrap();
    let poly = recovery.polynomial();
    assert_eq!(poly.mu(), 4);
    assert_eq!(poly.bidegree(), (4, 4));
    assert!(recovery.passed());
    // independent check: every held-out pair satisfies (αβ)^¼ + ((1−α)(1−β))^¼ = 1
    for pair in &recovery.heldout {
        let a = &pair.alpha;
        let b = &pair.beta;
        let u = Float::with_val(256, a * b).root(4);
        let v = Float::with_val(
            256,
            (Float::with_val(256, 1 - a)) * (Float::with_val(256, 1 - b)),
        )
        .root(4);
        assert!((u + v - 1u32).abs() < 1e-60);
    }
    // and P vanishes on points built from the closed form, not from the solver:
    // for u ∈ (0,1), α + β = 4u − 6u² + 4u³ and αβ = u⁴
    for i in 1..8 {
        let u = Float::with_val(256, i) / 10u32;
        let s = Float::with_val(256, &u * 4u32) - Float::with_val(256, u.square_ref()) * 6u32
            + Float::with_val(256, (&u).pow(3u32)) * 4u32;
        let prod = Float::with_val(256, (&u).pow(4u32));
        let disc = Float::with_val(256, s.square_ref()) - Float::with_val(256, &prod * 4u32);
        if disc < 0 {
            continue;
        }
        let root = disc.sqrt();
        let alpha = Float::with_val(256, &s + &root) / 2u32;
        let beta = Float::with_val(256, &s - &root) / 2u32;
        assert!(poly.eval(&alpha, &beta).abs() < 1e-60, "u = {u}");
    }
}

#[test]
fn degree_one_below_fails_the_gap_test() {
    let params = SignatureParams::from_signature(3, 256).unwrap();
    let pairs = solve_at(&params, 2, &chebyshev_alphas(40, 0.1, 0.9, 256)).unwrap();
    let pts = points(&pairs);
    let err = fit_modular_polynomial(&pts, 2, 256).unwrap_err();
    assert!(
        matches!(
            err,
            ModeqError::AmbiguousNullspace { .. } | ModeqError::RoundingFailure(_)
        ),
        "{err:?}"
    );
    assert_eq!(
        fit_modular_polynomial(&pts, 3, 256).unwrap(),
        signature3_order2_cubic()
    );
}

#[test]
fn degree_one_above_has_a_two_dimensional_nullspace() {
    // multiples P·x and P·y both vanish, so no single null vector is singled out
    let params = SignatureParams::from_signature(3, 256).unwrap();
    let pairs = solve_at(&params, 2, &chebyshev_alphas(40, 0.1, 0.9, 256)).unwrap();
    let err = fit_modular_polynomial(&points(&pairs), 4, 256).unwrap_err();
    assert!(
        matches!(err, ModeqError::AmbiguousNullspace { .. }),
        "{err:?}"
    );
}

#[test]
fn planted_polynomial_is_recovered_from_its_two_components() {
    // (x − y)(xy − 1) = x²y − xy² − x + y, sampled on y = x and on y = 1/x
    let prec = 160;
    let planted =
        BivariatePolynomial::from_i64(2, &[vec![0, 1, 0], vec![-1, 0, -1], vec![0, 1, 0]]).unwrap();
    assert_eq!(expand_product(), planted);
    let mut pts = Vec::new();
    for i in 1..=20u32 {
        let x = Float::with_val(prec, i) / 23u32;
        pts.push((x.clone(), x));
        let x = Float::with_val(prec, i + 23) / 19u32;
        pts.push((x.clone(), x.recip()));
    }
    assert_eq!(fit_modular_polynomial(&pts, 2, prec).unwrap(), planted);
}

/// `(x − y)(xy − 1)` expanded by grid convolution.
fn expand_product() -> BivariatePolynomial {
    let f = [[0i64, -1], [1, 0]];
    let g = [[-1i64, 0], [0, 1]];
    let mut out = vec![vec![0i64; 3]; 3];
    for (j1, row1) in f.iter().enumerate() {
        for (k1, c1) in row1.iter().enumerate() {
            for (j2, row2) in g.iter().enumerate() {
                for (k2, c2) in row2.iter().enumerate() {
                    out[j1 + j2][k1 + k2] += c1 * c2;
                }
            }
        }
    }
    BivariatePolynomial::from_i64(2, &out).unwrap()
}

#[test]
fn fitted_polynomials_are_fricke_symmetric() {
    for (sig, p) in [(3, 2), (4, 2), (2, 2), (2, 3), (3, 3)] {
        let params = SignatureParams::from_signature(sig, 256).unwrap();
        let recovery = recover_polynomial(&params, p, &RecoverOptions::default()).unwrap();
        let poly = recovery.polynomial();
        assert!(poly.fricke_sign().is_some(), "sig {sig} p {p}");
        assert!(recovery.symmetry.passed);
    }
}

#[test]
fn symmetry_check_rejects_broken_inputs() {
    let params = SignatureParams::from_signature(3, 256).unwrap();
    let cubic = signature3_order2_cubic();
    let pairs = sample_pairs(&params, 2, 10, (&real(256, 0.2), &real(256, 0.8))).unwrap();
    let bound = Float::with_val(256, 1e-60);
    assert!(verify_symmetry(&cubic, &points(&pairs), &bound).passed);

    // a single perturbed β is caught by the per-sample check
    let mut bad = points(&pairs);
    bad[3].1 += 1e-30;
    let report = verify_symmetry(&cubic, &bad, &bound);
    assert!(!report.passed);
    assert!(report.values[3] > bound);

    // P + x maps to ±P + 1 − y under the swap, so the coefficient check fails
    let mut grid: Vec<Vec<rug::Integer>> = cubic.coeffs().to_vec();
    grid[1][0] += 1;
    let skewed = BivariatePolynomial::new(3, grid).unwrap();
    assert_eq!(skewed.fricke_sign(), None);
    assert!(!verify_symmetry(&skewed, &points(&pairs), &bound).passed);
}

#[test]
fn sample_pairs_satisfy_the_equation() {
    let params = SignatureParams::from_signature(2, 128).unwrap();
    let pairs = sample_pairs(&params, 3, 3, (&real(128, 0.2), &real(128, 0.8))).unwrap();
    assert_eq!(pairs.len(), 3);
    for pair in &pairs {
        let r_a = modeq::hypergeom::ratio_r(&params, &pair.alpha).unwrap();
        let r_b = modeq::hypergeom::ratio_r(&params, &pair.beta).unwrap();
        assert!((r_b - r_a * 3u32).abs() < 1e-20);
    }
}

#[test]
fn report_exposes_a_large_gap() {
    let params = SignatureParams::from_signature(3, 256).unwrap();
    let pairs = solve_at(&params, 2, &chebyshev_alphas(40, 0.1, 0.9, 256)).unwrap();
    let report = fit_with_report(&points(&pairs), 3, 256).unwrap();
    assert!(report.gap_bits > 100.0, "gap {}", report.gap_bits);
    assert!(report.max_sample_residual <= report.residual_bound);
}
