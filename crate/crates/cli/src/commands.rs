//! Thin wrappers that parse arguments, call the library and build reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use modeq::degrees::{
    dedekind_psi, degree_mu, degree_record, degree_table, lambda_sq_of_signature, russell_degree,
    TABLE_CSV_HEADER,
};
use modeq::hecke::{coset_index_bruteforce, fricke_conj, in_hmp, inverse, multiply, theta_iso};
use modeq::identities::{identity_residual, Identity};
use modeq::polyfit::{recover_polynomial, RecoverOptions};
use modeq::real::{parse_rational, parse_real, real, to_decimal_string};
use modeq::solver::{default_tolerance, solve_with, SolveOptions};
use modeq::{HeckeMatrix, ModeqError, ModulusPair, RealX, SignatureParams};

use crate::output::{Format, Report};
use crate::{Cli, Command, Failure, HeckeOp, SigArgs, EXIT_USAGE};

const DEFAULT_PRECISION_BITS: u32 = 128;
const POLYFIT_PRECISION_BITS: u32 = 256;

/// What a successful command prints, and whether its checks passed.
pub struct Outcome {
    pub stdout: String,
    pub notes: Vec<String>,
    pub passed: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let format = cli.global.format.unwrap_or_else(Format::detect);
    let prec = cli.global.precision_bits;
    let (report, notes, passed) = match &cli.command {
        Command::Solve {
            sig,
            alpha,
            p,
            tol,
            no_newton,
        } => {
            let params = params_of(sig, prec.unwrap_or(DEFAULT_PRECISION_BITS))?;
            let alpha = parse_real(alpha, params.precision_bits())?;
            let opts = SolveOptions {
                tol: tol
                    .as_deref()
                    .map(|t| parse_real(t, params.precision_bits()))
                    .transpose()?,
                newton: !no_newton,
                ..SolveOptions::default()
            };
            let pair = solve_with(&params, &alpha, *p, &opts)?;
            (pair_report(&pair), Vec::new(), true)
        }
        Command::Table { p_max } => {
            let rows = degree_table(*p_max)?;
            let json = serde_json::to_value(&rows).expect("plain rows serialize");
            let cells = rows.iter().map(|r| {
                vec![
                    r.p.to_string(),
                    r.mu_sig2_and_4.to_string(),
                    r.mu_sig3.to_string(),
                ]
            });
            let report = Report::table(json, &TABLE_CSV_HEADER, cells.collect());
            // the table is CSV unless a format is requested explicitly
            let format = cli.global.format.unwrap_or(Format::Csv);
            return Ok(Outcome {
                stdout: report.render(format),
                notes: Vec::new(),
                passed: true,
            });
        }
        Command::Psi { n } => {
            let psi = dedekind_psi(*n)?;
            let report = Report::table(
                json!({"n": n, "psi": psi}),
                &["n", "psi"],
                vec![vec![n.to_string(), psi.to_string()]],
            )
            .with_text(psi.to_string());
            (report, Vec::new(), true)
        }
        Command::Mu { p, sig } => {
            let mu = degree_mu(*p, *sig)?;
            let report = Report::table(
                json!({"p": p, "signature": sig, "mu": mu}),
                &["p", "signature", "mu"],
                vec![vec![p.to_string(), sig.to_string(), mu.to_string()]],
            )
            .with_text(mu.to_string());
            (report, Vec::new(), true)
        }
        Command::Russell { p, sig } => {
            let (m, l) = russell_degree(*p, *sig)?;
            let record = degree_record(*p, *sig)?;
            let relation = serde_json::to_value(record.relation).expect("enum serializes");
            let relation = relation.as_str().unwrap_or_default().to_string();
            let report = Report::table(
                serde_json::to_value(&record).expect("record serializes"),
                &["p", "signature", "mu", "m", "l", "relation"],
                vec![vec![
                    p.to_string(),
                    sig.to_string(),
                    record.mu.to_string(),
                    m.to_string(),
                    l.to_string(),
                    relation,
                ]],
            )
            .with_text(format!("m = {m}, l = {l}, mu = {}", record.mu));
            (report, Vec::new(), true)
        }
        Command::Verify {
            sig,
            p,
            identity,
            alpha,
            samples,
            random,
            seed,
            tol,
        } => {
            let params = params_of(sig, prec.unwrap_or(DEFAULT_PRECISION_BITS))?;
            let which: Identity = identity.parse()?;
            let bits = params.precision_bits();
            let threshold = match tol {
                Some(t) => parse_real(t, bits)?,
                None => which.default_threshold(bits),
            };
            let alphas = verify_alphas(alpha.as_deref(), *samples, *random, *seed, bits)?;
            verify_report(&params, *p, which, &alphas, &threshold)?
        }
        Command::Polyfit {
            sig,
            p,
            mu,
            samples,
            heldout,
        } => {
            let params = params_of(sig, prec.unwrap_or(POLYFIT_PRECISION_BITS))?;
            let opts = RecoverOptions {
                mu: *mu,
                samples: *samples,
                heldout: *heldout,
            };
            let recovery = recover_polynomial(&params, *p, &opts)?;
            let poly = recovery.polynomial();
            let fit = &recovery.fit;
            let sign = poly.fricke_sign();
            let mut json = poly.to_json_value();
            let extra = json!({
                "t": params.t().to_string(),
                "p": p,
                "precision_bits": params.precision_bits(),
                "gap_bits": if fit.gap_bits.is_finite() { json!(fit.gap_bits) } else { Value::Null },
                "residual_bound": to_decimal_string(&fit.residual_bound),
                "max_sample_residual": to_decimal_string(&fit.max_sample_residual),
                "heldout": recovery.heldout.len(),
                "heldout_max_residual": to_decimal_string(&recovery.heldout_max_residual),
                "fricke_max_residual": to_decimal_string(&recovery.symmetry.max_value),
                "fricke_sign": sign,
                "passed": recovery.passed(),
            });
            json.as_object_mut()
                .expect("object")
                .extend(extra.as_object().expect("object").clone());
            let rows = poly
                .monomials()
                .into_iter()
                .map(|(j, k)| vec![j.to_string(), k.to_string(), poly.coeff(j, k).to_string()])
                .collect();
            let report = Report::table(json, &["alpha_power", "beta_power", "coefficient"], rows)
                .with_text(poly.to_string());
            let notes = vec![format!(
                "mu = {}, singular gap 2^{:.1}, held-out |P| <= {}, Fricke |P(1-b,1-a)| <= {}, bound {}",
                poly.mu(),
                fit.gap_bits,
                short(&recovery.heldout_max_residual),
                short(&recovery.symmetry.max_value),
                short(&fit.residual_bound)
            )];
            (report, notes, recovery.passed())
        }
        Command::Hecke { op } => (hecke_report(op)?, Vec::new(), true),
    };
    Ok(Outcome {
        stdout: report.render(format),
        notes,
        passed,
    })
}

fn params_of(sig: &SigArgs, prec: u32) -> Result<SignatureParams, Failure> {
    let params = match (&sig.sig, &sig.t) {
        (Some(s), _) => SignatureParams::from_signature(*s, prec)?,
        (None, Some(t)) => SignatureParams::new(parse_rational(t)?, prec)?,
        (None, None) => {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "pass --sig or --t".into(),
            })
        }
    };
    Ok(params)
}

fn short(x: &RealX) -> String {
    x.to_string_radix(10, Some(4))
}

fn pair_report(pair: &ModulusPair) -> Report {
    let json = pair.to_json_value();
    let fields = ["t", "p", "alpha", "beta", "m", "residual", "precision_bits"];
    let row: Vec<String> = fields
        .iter()
        .map(|f| match &json[*f] {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect();
    let text = fields
        .iter()
        .zip(&row)
        .map(|(f, v)| format!("{f} = {v}"))
        .collect::<Vec<_>>()
        .join("\n");
    Report::table(json, &fields, vec![row]).with_text(text)
}

fn verify_alphas(
    alpha: Option<&str>,
    samples: usize,
    random: Option<usize>,
    seed: u64,
    prec: u32,
) -> Result<Vec<RealX>, Failure> {
    if let Some(a) = alpha {
        return Ok(vec![parse_real(a, prec)?]);
    }
    if let Some(n) = random {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..n)
            .map(|_| real(prec, rng.gen_range(0.05..=0.95)))
            .collect());
    }
    match samples {
        0 => Err(ModeqError::Domain("--samples must be positive".into()).into()),
        1 => Ok(vec![real(prec, 0.5)]),
        // α_i = 1/20 + (9/10)·i/(n−1) = (n − 1 + 18i) / (20(n − 1)), exactly
        n => (0..n)
            .map(|i| {
                Ok(parse_real(
                    &format!("{}/{}", n - 1 + 18 * i, 20 * (n - 1)),
                    prec,
                )?)
            })
            .collect(),
    }
}

fn verify_report(
    params: &SignatureParams,
    p: u64,
    which: Identity,
    alphas: &[RealX],
    threshold: &RealX,
) -> Result<(Report, Vec<String>, bool), Failure> {
    let tol = default_tolerance(params.precision_bits());
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut failures = 0usize;
    for alpha in alphas {
        let pair = modeq::solver::solve_order_p(params, alpha, p, &tol)?;
        let residual = identity_residual(params, &pair, which)?;
        let passed = residual <= *threshold;
        failures += usize::from(!passed);
        let (a, b, r) = (
            to_decimal_string(&pair.alpha),
            to_decimal_string(&pair.beta),
            to_decimal_string(&residual),
        );
        records.push(json!({"alpha": a, "beta": b, "residual": r, "passed": passed}));
        rows.push(vec![a, b, r, passed.to_string()]);
    }
    let json = json!({
        "identity": which.name(),
        "t": params.t().to_string(),
        "p": p,
        "precision_bits": params.precision_bits(),
        "threshold": to_decimal_string(threshold),
        "samples": records,
        "failures": failures,
    });
    let notes = vec![format!(
        "{which}: {} of {} samples within {}",
        alphas.len() - failures,
        alphas.len(),
        short(threshold)
    )];
    Ok((
        Report::table(json, &["alpha", "beta", "residual", "passed"], rows),
        notes,
        failures == 0,
    ))
}

fn parse_matrix(text: &str, sig: Option<u32>) -> Result<HeckeMatrix, Failure> {
    if text.contains("lambda2=") {
        let m: HeckeMatrix = text.parse()?;
        if let Some(s) = sig {
            let expected = lambda_sq_of_signature(s)? as u32;
            if expected != m.lambda_sq() {
                return Err(ModeqError::LambdaMismatch {
                    left: m.lambda_sq(),
                    right: expected,
                }
                .into());
            }
        }
        return Ok(m);
    }
    let Some(s) = sig else {
        return Err(Failure {
            code: EXIT_USAGE,
            message: format!("{text:?}: add \"lambda2=n\" or pass --sig"),
        });
    };
    let lambda_sq = lambda_sq_of_signature(s)?;
    Ok(format!("{text} lambda2={lambda_sq}").parse()?)
}

fn matrix_report(m: &HeckeMatrix) -> Report {
    let cells = [m.a(), m.b(), m.c(), m.d()].map(|x| x.to_string());
    let json = json!({
        "matrix": m.to_string(),
        "a": cells[0], "b": cells[1], "c": cells[2], "d": cells[3],
        "lambda2": m.lambda_sq(),
    });
    let mut row = cells.to_vec();
    row.push(m.lambda_sq().to_string());
    Report::table(json, &["a", "b", "c", "d", "lambda2"], vec![row]).with_text(m.to_string())
}

fn hecke_report(op: &HeckeOp) -> Result<Report, Failure> {
    Ok(match op {
        HeckeOp::Mul { x, y, sig } => {
            matrix_report(&multiply(&parse_matrix(x, *sig)?, &parse_matrix(y, *sig)?)?)
        }
        HeckeOp::Inv { x, sig } => matrix_report(&inverse(&parse_matrix(x, *sig)?)),
        HeckeOp::Member { x, p, sig } => {
            let m = parse_matrix(x, *sig)?;
            if *p == 0 {
                return Err(ModeqError::Domain("p must be positive".into()).into());
            }
            let member = in_hmp(&m, *p);
            Report::table(
                json!({"matrix": m.to_string(), "p": p, "member": member}),
                &["matrix", "p", "member"],
                vec![vec![m.to_string(), p.to_string(), member.to_string()]],
            )
            .with_text(member.to_string())
        }
        HeckeOp::Theta { x, sig } => {
            let image = theta_iso(&parse_matrix(x, *sig)?);
            let cells = [image.a(), image.b(), image.c(), image.d()].map(|v| v.to_string());
            Report::table(
                json!({"matrix": image.to_string(), "a": cells[0], "b": cells[1], "c": cells[2], "d": cells[3]}),
                &["a", "b", "c", "d"],
                vec![cells.to_vec()],
            )
            .with_text(image.to_string())
        }
        HeckeOp::Fricke { x, p, sig } => matrix_report(&fricke_conj(&parse_matrix(x, *sig)?, *p)?),
        HeckeOp::Cosets { n } => {
            let index = coset_index_bruteforce(*n)?;
            Report::table(
                json!({"n": n, "index": index}),
                &["n", "index"],
                vec![vec![n.to_string(), index.to_string()]],
            )
            .with_text(index.to_string())
        }
    })
}
