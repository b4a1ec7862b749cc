//! Primorials, Landau's ratio and the bound chain relating the index
//! `δ(k) = 3^{144kφ(k)}` to systole counts.
//!
//! `δ(k)` has far too many digits to write down, so everything here works
//! with `ln δ(k) = 144·k·φ(k)·ln 3` and its iterated logarithms.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const DELTA_PLUS: f64 = 9.5;
/// Relative float error assumed for every log-space quantity.
pub const ERROR_BUDGET: f64 = 1e-9;
/// Comparisons closer than this (relative) are reported as indeterminate.
pub const MARGIN_FLOOR: f64 = 1e3 * ERROR_BUDGET;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("DOMAIN: g = {0} < 16")]
    Domain(f64),
    #[error("δ⁺ = {0} does not exceed δ")]
    DeltaPlusTooSmall(f64),
    #[error("{0} is not a listed primorial")]
    NotPrimorial(String),
}

pub fn e_minus_gamma() -> f64 {
    (-EULER_GAMMA).exp()
}

/// `δ = 12·√(e^{−γ}·ln 3)`.
pub fn delta() -> f64 {
    12.0 * (e_minus_gamma() * 3f64.ln()).sqrt()
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Primorial {
    pub q: BigUint,
    pub phi: BigUint,
    pub primes: Vec<u64>,
}

impl Primorial {
    /// `ln q` as a sum over the prime factors.
    pub fn ln_q(&self) -> f64 {
        self.primes.iter().map(|&p| (p as f64).ln()).sum()
    }

    /// `ln φ(q)`.
    pub fn ln_phi(&self) -> f64 {
        self.primes.iter().map(|&p| ((p - 1) as f64).ln()).sum()
    }
}

/// The first `n` primorials `q_i = 2·3·5···p_{i+1}` with their totients.
pub fn totient_primorials(n: usize) -> Vec<Primorial> {
    let primes = first_primes(n + 1);
    (1..=n)
        .map(|i| {
            let ps = primes[..=i].to_vec();
            let q = ps.iter().fold(BigUint::one(), |a, &p| a * p);
            let phi = ps.iter().fold(BigUint::one(), |a, &p| a * (p - 1));
            Primorial { q, phi, primes: ps }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LandauRow {
    pub q: String,
    pub phi: String,
    /// `φ(q)·lnln q / q`.
    pub ratio: f64,
    pub e_minus_gamma: f64,
}

pub fn landau_table(n: usize) -> Vec<LandauRow> {
    totient_primorials(n)
        .into_iter()
        .map(|p| {
            let ratio = (p.ln_phi() - p.ln_q()).exp() * p.ln_q().ln();
            LandauRow {
                q: p.q.to_string(),
                phi: p.phi.to_string(),
                ratio,
                e_minus_gamma: e_minus_gamma(),
            }
        })
        .collect()
}

/// `F(g) = 57g / (√(ln g)·√(lnlnln g))`.
pub fn fill_bound(g: f64) -> Result<f64, AsymptoticsError> {
    if !(g >= 16.0) {
        return Err(AsymptoticsError::Domain(g));
    }
    Ok(fill_bound_ln(g.ln()).exp())
}

/// `ln F(g)` from `L = ln g`, usable far beyond float range of `g`.
pub fn fill_bound_ln(ln_g: f64) -> f64 {
    57f64.ln() + ln_g - 0.5 * ln_g.ln() - 0.5 * ln_g.ln().ln().ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `|lhs − rhs| / max(|lhs|, |rhs|)`.
    pub margin: f64,
    pub indeterminate: bool,
}

impl Comparison {
    /// Records `lhs < rhs`.
    fn less(lhs: f64, rhs: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        let margin = (lhs - rhs).abs() / scale;
        Comparison {
            lhs,
            rhs,
            holds: lhs < rhs,
            margin,
            indeterminate: !lhs.is_finite() || !rhs.is_finite() || margin < MARGIN_FLOOR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundRow {
    pub k: String,
    pub phi: String,
    pub log3_delta: String,
    /// `ln δ(k)`, which bounds `ln g_k`.
    pub ln_delta: f64,
    pub landau_ratio: f64,
    /// `k > √(ln δ(k))`, compared as logarithms.
    pub root_bound: Comparison,
    /// `δ²·lnlnln δ(k) < (δ⁺)²·lnln k`.
    pub log_ratio: Comparison,
    /// `1/k < δ⁺ / (√(lnlnln δ(k))·√(ln δ(k)))`, compared as logarithms.
    pub inverse_bound: Comparison,
    /// `ln F(g) − ln(6g/k)` at `ln g = ln δ(k)`; positive when the count fits under `F`.
    pub fill_factor_ln: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainSummary {
    pub name: String,
    /// Position in the list of the first row where the inequality holds.
    pub first_holds: Option<usize>,
    /// Holds at every later row once first satisfied (vacuous if never).
    pub monotone: bool,
    pub any_indeterminate: bool,
    pub min_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainReport {
    pub delta: f64,
    pub delta_plus: f64,
    pub rows: Vec<BoundRow>,
    pub summaries: Vec<ChainSummary>,
    pub genus: Vec<GenusRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GenusRow {
    pub g: f64,
    pub bound: f64,
}

pub fn bound_row(p: &Primorial, delta_plus: f64) -> BoundRow {
    let d = delta();
    let ln_k = p.ln_q();
    // ln ln δ(k) directly, so rows stay finite past the float range of k·φ(k)
    let l2 = 144f64.ln() + ln_k + p.ln_phi() + 3f64.ln().ln();
    let ln_delta = l2.exp();
    let l3 = l2.ln();
    let root_bound = Comparison::less(0.5 * l2, ln_k);
    let log_ratio = Comparison::less(d * d * l3, delta_plus * delta_plus * ln_k.ln());
    let inverse_bound = Comparison::less(-ln_k, delta_plus.ln() - 0.5 * l3.ln() - 0.5 * l2);
    // ln F(g) − ln(6g/k) with ln g = ln δ(k); the ln g terms cancel
    let fill_factor_ln = 57f64.ln() - 0.5 * l2 - 0.5 * l3.ln() - 6f64.ln() + ln_k;
    BoundRow {
        k: p.q.to_string(),
        phi: p.phi.to_string(),
        log3_delta: (BigUint::from(144u32) * &p.q * &p.phi).to_string(),
        ln_delta,
        landau_ratio: (p.ln_phi() - ln_k).exp() * ln_k.ln(),
        root_bound,
        log_ratio,
        inverse_bound,
        fill_factor_ln,
    }
}

fn summarize(name: &str, cmps: &[Comparison]) -> ChainSummary {
    let first = cmps.iter().position(|c| c.holds);
    ChainSummary {
        name: name.into(),
        first_holds: first,
        monotone: first.map_or(true, |f| cmps[f..].iter().all(|c| c.holds)),
        any_indeterminate: cmps.iter().any(|c| c.indeterminate),
        min_margin: cmps.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min),
    }
}

/// Evaluates the chain at the first `n_primorials` primorials and `F` at each listed genus.
pub fn bound_chain(n_primorials: usize, delta_plus: f64, genera: &[f64]) -> Result<ChainReport, AsymptoticsError> {
    if !(delta_plus > delta()) {
        return Err(AsymptoticsError::DeltaPlusTooSmall(delta_plus));
    }
    let rows: Vec<BoundRow> = totient_primorials(n_primorials)
        .iter()
        .map(|p| bound_row(p, delta_plus))
        .collect();
    let pick = |f: fn(&BoundRow) -> Comparison| rows.iter().map(f).collect::<Vec<_>>();
    let summaries = vec![
        summarize("rootBound", &pick(|r| r.root_bound)),
        summarize("logRatio", &pick(|r| r.log_ratio)),
        summarize("inverseBound", &pick(|r| r.inverse_bound)),
    ];
    let genus = genera
        .iter()
        .map(|&g| fill_bound(g).map(|bound| GenusRow { g, bound }))
        .collect::<Result<_, _>>()?;
    Ok(ChainReport {
        delta: delta(),
        delta_plus,
        rows,
        summaries,
        genus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve_phi(n: usize) -> Vec<u64> {
        let mut phi: Vec<u64> = (0..=n as u64).collect();
        for p in 2..=n {
            if phi[p] == p as u64 {
                for m in (p..=n).step_by(p) {
                    phi[m] -= phi[m] / p as u64;
                }
            }
        }
        phi
    }

    #[test]
    fn primorials_against_sieve() {
        let rows = totient_primorials(5);
        use num_traits::ToPrimitive;
        let qs: Vec<u64> = rows.iter().map(|r| r.q.to_u64().unwrap()).collect();
        assert_eq!(qs, [6, 30, 210, 2310, 30030]);
        let phi = sieve_phi(60060);
        for r in &rows {
            let q = r.q.to_usize().unwrap();
            assert_eq!(r.phi.to_u64().unwrap(), phi[q]);
            assert_eq!(phi[2 * q], 2 * phi[q]);
        }
    }

    #[test]
    fn constants() {
        assert!((delta() - 9.4246).abs() < 1e-4);
        assert!((6.0 * delta() - 56.547).abs() < 1e-3);
        let d2 = 144.0 * e_minus_gamma() * 3f64.ln();
        assert!((delta() * delta() - d2).abs() <= 1e-12 * d2);
        assert!((e_minus_gamma() - 0.561_459_483_6).abs() < 1e-10);
    }

    #[test]
    fn landau_rows() {
        let t = landau_table(5);
        assert!((t[0].ratio - 0.1944).abs() < 1e-4);
        assert!((t[4].ratio - 0.4475).abs() < 1e-4);
    }

    #[test]
    fn genus_bound() {
        assert!(matches!(fill_bound(15.0), Err(AsymptoticsError::Domain(_))));
        let f = fill_bound(1e6).unwrap();
        assert!((f / 1.5605e7 - 1.0).abs() < 5e-4, "{f}");
    }

    #[test]
    fn log3_delta_at_six() {
        let r = bound_row(&totient_primorials(1)[0], DELTA_PLUS);
        assert_eq!(r.log3_delta, "1728");
        assert!((r.ln_delta / 10f64.ln() - 824.5).abs() < 0.1);
    }

    #[test]
    fn delta_plus_must_exceed_delta() {
        assert!(bound_chain(3, 9.0, &[]).is_err());
        let r = bound_chain(3, DELTA_PLUS, &[1e6]).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r.summaries.iter().all(|s| s.monotone));
    }
}
