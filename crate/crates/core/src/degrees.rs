//! Degrees of the modular polynomials: the Dedekind psi function, the index
//! formula `μ(p, 1/t) = Ψ(λ²p)/Ψ(λ²)` and the Russell-form degrees `(m, l)`.

use num_integer::gcd;
use serde::{Deserialize, Serialize};

use crate::error::{ModeqError, Result};

pub const TABLE_P_MAX: u64 = 1_000_000;

/// `Ψ(N) = N·∏_{q | N} (1 + 1/q)` over the primes `q` dividing `N`.
pub fn dedekind_psi(n: u64) -> Result<u64> {
    if n < 1 {
        return Err(ModeqError::Range("dedekind_psi needs N >= 1".into()));
    }
    let mut value = n as u128;
    for q in prime_divisors(n) {
        value = value / q as u128 * (q as u128 + 1);
    }
    u64::try_from(value).map_err(|_| ModeqError::Range(format!("Psi({n}) overflows u64")))
}

/// Distinct prime divisors in increasing order, by trial division.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q.saturating_mul(q) <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_divisors(n) == [n]
}

/// `λ_t²` for the signature: 4, 3, 2 for signatures 2, 3, 4.
pub fn lambda_sq_of_signature(signature: u32) -> Result<u64> {
    match signature {
        2 => Ok(4),
        3 => Ok(3),
        4 => Ok(2),
        s => Err(ModeqError::Signature(s.to_string())),
    }
}

/// Degree in each variable of the modular polynomial of order `p`:
/// `Ψ(2p)/3` in signatures 2 and 4, `Ψ(3p)/4` in signature 3.
pub fn degree_mu(p: u64, signature: u32) -> Result<u64> {
    lambda_sq_of_signature(signature)?;
    if p < 2 {
        return Err(ModeqError::Range(format!(
            "order p = {p} must be at least 2"
        )));
    }
    let (numer, denom) = match signature {
        3 => (dedekind_psi(3 * p)?, 4),
        _ => {
            let psi_2p = dedekind_psi(2 * p)?;
            let psi_4p = dedekind_psi(4 * p)?;
            if psi_4p != 2 * psi_2p {
                return Err(ModeqError::Internal(format!(
                    "Psi(4p) = {psi_4p} != 2 Psi(2p) = {}",
                    2 * psi_2p
                )));
            }
            (psi_2p, 3)
        }
    };
    if numer % denom != 0 {
        return Err(ModeqError::Internal(format!(
            "{numer} is not divisible by {denom}"
        )));
    }
    Ok(numer / denom)
}

/// `(m, l)` with `(p+1)/8 = m/l` (signature 2) or `(p+1)/3 = m/l`
/// (signature 3) in lowest terms. Defined for primes `p > 2` and `p > 3`
/// respectively.
pub fn russell_degree(p: u64, signature: u32) -> Result<(u64, u64)> {
    let denom = match signature {
        2 if p > 2 => 8,
        3 if p > 3 => 3,
        2 | 3 => {
            return Err(ModeqError::Range(format!(
                "p = {p} is too small for signature {signature}"
            )));
        }
        s => return Err(ModeqError::Signature(s.to_string())),
    };
    if !is_prime(p) {
        return Err(ModeqError::Range(format!("p = {p} is not prime")));
    }
    let g = gcd(p + 1, denom);
    Ok(((p + 1) / g, denom / g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    MuEqM,
    #[serde(rename = "mu_eq_3m")]
    MuEq3M,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub p: u64,
    pub signature: u32,
    pub mu: u64,
    pub russell_m: Option<u64>,
    pub russell_l: Option<u64>,
    pub relation: Relation,
}

pub fn degree_record(p: u64, signature: u32) -> Result<DegreeRecord> {
    let mu = degree_mu(p, signature)?;
    let russell = match signature {
        2 if p > 2 && is_prime(p) => Some(russell_degree(p, 2)?),
        3 if p > 3 && is_prime(p) => Some(russell_degree(p, 3)?),
        _ => None,
    };
    let relation = match (signature, russell) {
        (3, Some((m, _))) => {
            let (relation, expected) = if p % 3 == 2 {
                (Relation::MuEq3M, 3 * m)
            } else {
                (Relation::MuEqM, m)
            };
            if mu != expected {
                return Err(ModeqError::Internal(format!(
                    "mu({p}, 3) = {mu} but the Russell degree predicts {expected}"
                )));
            }
            relation
        }
        _ => Relation::NotApplicable,
    };
    Ok(DegreeRecord {
        p,
        signature,
        mu,
        russell_m: russell.map(|r| r.0),
        russell_l: russell.map(|r| r.1),
        relation,
    })
}

/// One row of the degree table: `μ(p,2) = μ(p,4)` and `μ(p,3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: u64,
    pub mu_sig2_and_4: u64,
    pub mu_sig3: u64,
}

impl TableRow {
    pub fn records(&self) -> Result<Vec<DegreeRecord>> {
        [2, 3, 4]
            .into_iter()
            .map(|s| degree_record(self.p, s))
            .collect()
    }
}

pub fn degree_table(p_max: u64) -> Result<Vec<TableRow>> {
    if !(2..=TABLE_P_MAX).contains(&p_max) {
        return Err(ModeqError::Range(format!(
            "p_max = {p_max} is outside [2, {TABLE_P_MAX}]"
        )));
    }
    (2..=p_max)
        .map(|p| {
            let two = degree_mu(p, 2)?;
            let four = degree_mu(p, 4)?;
            if two != four {
                return Err(ModeqError::Internal(format!(
                    "mu({p}, 2) = {two} != mu({p}, 4) = {four}"
                )));
            }
            Ok(TableRow {
                p,
                mu_sig2_and_4: two,
                mu_sig3: degree_mu(p, 3)?,
            })
        })
        .collect()
}

pub const TABLE_CSV_HEADER: [&str; 3] = ["p", "mu_sig2_and_4", "mu_sig3"];

pub fn table_to_csv(rows: &[TableRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(TABLE_CSV_HEADER)
        .expect("in-memory write");
    for row in rows {
        writer
            .write_record([
                row.p.to_string(),
                row.mu_sig2_and_4.to_string(),
                row.mu_sig3.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
}
