//! Spurious-polynomial counts and attacker success probability, evaluated
//! in the log2 domain so that fields and vaults of size 10^4 stay finite.
//!
//! Every count has two evaluation paths: a log-gamma one that always works
//! and an exact rational one used as a cross-check while the numbers stay
//! below 2^1024.

mod census;
mod exact;

pub use census::{spurious_census, CensusReport, MAX_CENSUS_POLYNOMIALS};

use num_rational::BigRational;
use serde::Serialize;
use statrs::function::factorial::ln_binomial;
use thiserror::Error;

use crate::vault::VaultError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SecurityError {
    #[error("invalid scenario: {0}")]
    Params(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("census over q = {q}, k = {k} exceeds {max} polynomials")]
    CensusTooLarge { q: u64, k: usize, max: u64 },
    #[error(transparent)]
    Vault(#[from] VaultError),
}

/// Known preset names.
pub const PRESETS: [&str; 2] = ["movie-k16-t20", "movie-k18-t22"];

/// Inputs of the counting formulas.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioParams {
    pub q: u64,
    pub k: u64,
    pub r: u64,
    pub t: u64,
    pub t_mfj: u64,
    pub m_a: u64,
    pub m_f: u64,
    pub n: u64,
    pub mu: f64,
    /// Cardinality of the membership family collection.
    pub family_card: u64,
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<(), SecurityError> {
        let bad = |m: String| Err(SecurityError::Params(m));
        if self.q < 2 {
            return bad(format!("q = {} must be at least 2", self.q));
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if !(self.t_mfj <= self.t && self.t <= self.r && self.r <= self.q) {
            return bad(format!(
                "need t_MFj <= t <= r <= q, got {} <= {} <= {} <= {}",
                self.t_mfj, self.t, self.r, self.q
            ));
        }
        if !(1 <= self.m_a && self.m_a <= self.m_f) {
            return bad(format!(
                "need 1 <= m_A <= m_F, got m_A = {}, m_F = {}",
                self.m_a, self.m_f
            ));
        }
        if self.m_a > self.q {
            return bad(format!("m_A = {} exceeds q = {}", self.m_a, self.q));
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return bad(format!("mu = {} outside (0, 1]", self.mu));
        }
        if self.family_card == 0 {
            return bad("family cardinality must be positive".into());
        }
        Ok(())
    }
}

fn log2_binomial(n: u64, k: u64) -> f64 {
    ln_binomial(n, k) / std::f64::consts::LN_2
}

/// `x * log2(base)` with the empty-product convention `0 * log2 0 = 0`.
fn weighted_log2(x: f64, log2_base: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * log2_base
    }
}

/// log2 of the spurious-polynomial count
/// `q^k C(r, t) (m_A/q)^(k-t) (1 - m_A/q)^(r-t)` with `t = t_MFj`.
/// Returns negative infinity when the count is zero (`m_A = q`, `r > t`).
pub fn spurious_polynomials_log2(p: &ScenarioParams) -> Result<f64, SecurityError> {
    p.validate()?;
    let (q, k, r, t, m) = (p.q as f64, p.k as f64, p.r as f64, p.t_mfj as f64, p.m_a as f64);
    let ratio = m / q;
    let miss = if p.m_a == p.q {
        f64::NEG_INFINITY
    } else {
        (-ratio).ln_1p() / std::f64::consts::LN_2
    };
    Ok(k * q.log2()
        + log2_binomial(p.r, p.t_mfj)
        + (k - t) * ratio.log2()
        + weighted_log2(r - t, miss))
}

/// Probability that a random field element lands in a locking element set
/// of size `m_A`: exactly `m_A / q`.
pub fn conditional_membership_prob(q: u64, m_a: u64) -> Result<BigRational, SecurityError> {
    if q == 0 || m_a == 0 || m_a > q {
        return Err(SecurityError::Params(format!(
            "need 1 <= m_A <= q, got m_A = {m_a}, q = {q}"
        )));
    }
    Ok(BigRational::new(m_a.into(), q.into()))
}

/// log2 of the family-aware bound
/// `mu |E| q^k (C(r,t) / C(q,t)) (m_A/q)^(k-t) (1 - m_A/q)^(r-t)`.
pub fn family_spurious_log2(p: &ScenarioParams) -> Result<f64, SecurityError> {
    let base = spurious_polynomials_log2(p)?;
    Ok(p.mu.log2() + (p.family_card as f64).log2() + base - log2_binomial(p.q, p.t_mfj))
}

fn attacker_base(p: &ScenarioParams) -> f64 {
    (p.m_a as f64 / p.m_f as f64) * (p.t_mfj as f64 / p.r as f64)
}

/// `(m_A/m_F * t_MFj/r)^n`.
pub fn attacker_success_prob(p: &ScenarioParams) -> Result<f64, SecurityError> {
    p.validate()?;
    if p.r == 0 {
        return Ok(1.0);
    }
    Ok(attacker_base(p).powf(p.n as f64))
}

/// log2 of [`attacker_success_prob`]; stays finite where the probability
/// underflows.
pub fn attacker_success_log2(p: &ScenarioParams) -> Result<f64, SecurityError> {
    p.validate()?;
    if p.r == 0 {
        return Ok(0.0);
    }
    Ok(weighted_log2(p.n as f64, attacker_base(p).log2()))
}

/// The product form `prod_{i<n} base^i = base^(n(n-1)/2)`, kept for
/// comparison with [`attacker_success_prob`].
pub fn attacker_success_prob_product_form(p: &ScenarioParams) -> Result<f64, SecurityError> {
    p.validate()?;
    if p.r == 0 {
        return Ok(1.0);
    }
    let e = p.n as f64 * (p.n as f64 - 1.0) / 2.0;
    Ok(attacker_base(p).powf(e))
}

/// Published exponents a report is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReportedClaims {
    pub log2_n: f64,
    pub security_bits: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SecurityReport {
    pub label: String,
    pub params: ScenarioParams,
    pub log2_n: f64,
    /// Exact rational evaluation, when small enough.
    pub log2_n_exact: Option<f64>,
    pub log2_family_bound: f64,
    pub log2_family_bound_exact: Option<f64>,
    pub attacker_prob: f64,
    pub attacker_log2: f64,
    pub attacker_prob_product_form: f64,
    /// Half of `log2_n`.
    pub security_bits: f64,
    pub reported: Option<ReportedClaims>,
    pub discrepancy_flag: bool,
}

impl SecurityReport {
    pub fn compute(
        label: &str,
        params: ScenarioParams,
        reported: Option<ReportedClaims>,
    ) -> Result<Self, SecurityError> {
        let log2_n = spurious_polynomials_log2(&params)?;
        let security_bits = log2_n / 2.0;
        let discrepancy_flag = reported.is_some_and(|c| {
            !((log2_n - c.log2_n).abs() <= 1.0 && (security_bits - c.security_bits).abs() <= 1.0)
        });
        Ok(SecurityReport {
            label: label.to_string(),
            log2_n,
            log2_n_exact: exact::spurious_log2(&params),
            log2_family_bound: family_spurious_log2(&params)?,
            log2_family_bound_exact: exact::family_log2(&params),
            attacker_prob: attacker_success_prob(&params)?,
            attacker_log2: attacker_success_log2(&params)?,
            attacker_prob_product_form: attacker_success_prob_product_form(&params)?,
            security_bits,
            reported,
            discrepancy_flag,
            params,
        })
    }
}

/// One or more reports for a named scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub reports: Vec<SecurityReport>,
}

impl ScenarioReport {
    pub fn any_discrepancy(&self) -> bool {
        self.reports.iter().any(|r| r.discrepancy_flag)
    }
}

struct Preset {
    name: &'static str,
    k: u64,
    t: u64,
    classical: (f64, f64),
    fuzzy: (f64, f64),
}

const PRESET_TABLE: [Preset; 2] = [
    Preset {
        name: "movie-k16-t20",
        k: 16,
        t: 20,
        classical: (106.0, 53.0),
        fuzzy: (249.0, 125.0),
    },
    Preset {
        name: "movie-k18-t22",
        k: 18,
        t: 22,
        classical: (139.0, 70.0),
        fuzzy: (276.0, 138.0),
    },
];

/// Membership family count used by the fuzzy variant of each preset.
pub const PRESET_FUZZY_FAMILIES: u64 = 5;

/// Parameters of a preset: `q = r = 10^4`, `t = t_MFj`, `n = k - 1`,
/// `mu = 1/2`, `|E| = 1`, and `m_A = m_F` equal to 1 (classical) or
/// [`PRESET_FUZZY_FAMILIES`] (fuzzy).
pub fn preset_params(name: &str, fuzzy: bool) -> Result<ScenarioParams, SecurityError> {
    let p = PRESET_TABLE
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| SecurityError::UnknownPreset(name.to_string()))?;
    let m = if fuzzy { PRESET_FUZZY_FAMILIES } else { 1 };
    Ok(ScenarioParams {
        q: 10_000,
        k: p.k,
        r: 10_000,
        t: p.t,
        t_mfj: p.t,
        m_a: m,
        m_f: m,
        n: p.k - 1,
        mu: 0.5,
        family_card: 1,
    })
}

/// Classical and fuzzy reports for a preset, each carrying its published
/// claims.
pub fn scenario_report(name: &str) -> Result<ScenarioReport, SecurityError> {
    let p = PRESET_TABLE
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| SecurityError::UnknownPreset(name.to_string()))?;
    let claims = |(log2_n, security_bits)| ReportedClaims { log2_n, security_bits };
    Ok(ScenarioReport {
        scenario: name.to_string(),
        reports: vec![
            SecurityReport::compute("classical", preset_params(name, false)?, Some(claims(p.classical)))?,
            SecurityReport::compute("fuzzy", preset_params(name, true)?, Some(claims(p.fuzzy)))?,
        ],
    })
}

/// Report for explicit parameters, with no claims attached.
pub fn explicit_report(params: ScenarioParams) -> Result<ScenarioReport, SecurityError> {
    Ok(ScenarioReport {
        scenario: "explicit".to_string(),
        reports: vec![SecurityReport::compute("explicit", params, None)?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> ScenarioParams {
        ScenarioParams {
            q: 7,
            k: 1,
            r: 3,
            t: 1,
            t_mfj: 1,
            m_a: 1,
            m_f: 1,
            n: 0,
            mu: 1.0,
            family_card: 1,
        }
    }

    #[test]
    fn small_case_is_108_over_7() {
        let want = (108.0f64 / 7.0).log2();
        let got = spurious_polynomials_log2(&small()).unwrap();
        assert!((got - want).abs() <= 1e-12 * want);
        let exact = exact::spurious_log2(&small()).unwrap();
        assert!((exact - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn all_genuine_reduces_to_field_size() {
        let p = ScenarioParams { q: 101, k: 5, r: 5, t: 5, t_mfj: 5, m_a: 3, m_f: 4, ..small() };
        let got = spurious_polynomials_log2(&p).unwrap();
        assert!((got - 5.0 * 101f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn full_membership_gives_zero_count() {
        let p = ScenarioParams { q: 7, k: 2, r: 5, t: 3, t_mfj: 3, m_a: 7, m_f: 7, ..small() };
        assert_eq!(spurious_polynomials_log2(&p).unwrap(), f64::NEG_INFINITY);
        assert_eq!(exact::spurious_log2(&p), Some(f64::NEG_INFINITY));
        let p = ScenarioParams { r: 3, ..p };
        assert!(spurious_polynomials_log2(&p).unwrap().is_finite());
    }

    #[test]
    fn membership_probability() {
        assert_eq!(conditional_membership_prob(10, 5).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(conditional_membership_prob(10, 10).unwrap(), BigRational::from_integer(1.into()));
        assert_eq!(conditional_membership_prob(1, 1).unwrap(), BigRational::from_integer(1.into()));
        assert!(conditional_membership_prob(3, 4).is_err());
        assert!(conditional_membership_prob(3, 0).is_err());
    }

    #[test]
    fn family_bound_examples() {
        let p = ScenarioParams { q: 11, k: 3, r: 11, t: 3, t_mfj: 3, m_a: 2, m_f: 2, mu: 0.5, ..small() };
        let got = family_spurious_log2(&p).unwrap();
        // binomial ratio and the m_A/q power are both 1; the miss factor stays
        let want = 0.5f64.log2() + 3.0 * 11f64.log2() + 8.0 * (9.0f64 / 11.0).log2();
        assert!((got - want).abs() < 1e-9);
        let tight = ScenarioParams { r: 3, ..p.clone() };
        let got = family_spurious_log2(&tight).unwrap();
        let want = 0.5f64.log2() + 3.0 * 11f64.log2() - (165f64).log2();
        assert!((got - want).abs() < 1e-9);

        let p = ScenarioParams { r: 7, t: 1, ..small() };
        let got = family_spurious_log2(&p).unwrap();
        // C(7,1)/C(7,1) cancels, leaving 7 * (6/7)^6
        let want = 7f64.log2() + 6.0 * (6.0f64 / 7.0).log2();
        assert!((got - want).abs() < 1e-12);
        assert!((exact::family_log2(&p).unwrap() - want).abs() < 1e-12);

        let half = family_spurious_log2(&ScenarioParams { mu: 0.5, ..p.clone() }).unwrap();
        assert!((got - half - 1.0).abs() < 1e-12);
    }

    #[test]
    fn attacker_examples() {
        let base = ScenarioParams { q: 1000, k: 3, r: 100, t: 10, t_mfj: 10, m_a: 5, m_f: 10, n: 2, ..small() };
        assert!((attacker_success_prob(&base).unwrap() - 0.0025).abs() < 1e-15);
        assert_eq!(attacker_success_prob(&ScenarioParams { n: 0, ..base.clone() }).unwrap(), 1.0);
        let one = ScenarioParams { m_a: 10, t: 100, t_mfj: 100, ..base.clone() };
        assert_eq!(attacker_success_prob(&one).unwrap(), 1.0);
        let prod = attacker_success_prob_product_form(&ScenarioParams { n: 3, ..base }).unwrap();
        assert!((prod - 0.05f64.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn presets_carry_claims_and_flag() {
        let a = scenario_report("movie-k16-t20").unwrap();
        let claims: Vec<(f64, f64)> = a
            .reports
            .iter()
            .map(|r| r.reported.map(|c| (c.log2_n, c.security_bits)).unwrap())
            .collect();
        assert_eq!(claims, vec![(106.0, 53.0), (249.0, 125.0)]);
        assert!(a.reports.iter().all(|r| r.discrepancy_flag));
        let b = scenario_report("movie-k18-t22").unwrap();
        assert_eq!(b.reports[1].reported.unwrap().security_bits, 138.0);
        assert!(b.any_discrepancy());
        assert!(matches!(scenario_report("nope"), Err(SecurityError::UnknownPreset(_))));

        let explicit = explicit_report(preset_params("movie-k18-t22", false).unwrap()).unwrap();
        let r = &explicit.reports[0];
        assert_eq!(r.log2_n, b.reports[0].log2_n);
        assert_eq!(r.log2_family_bound, b.reports[0].log2_family_bound);
        assert!(!r.discrepancy_flag);
    }

    #[test]
    fn discrepancy_tolerance_is_one_bit() {
        let p = small();
        let n = spurious_polynomials_log2(&p).unwrap();
        let near = ReportedClaims { log2_n: n + 0.9, security_bits: n / 2.0 - 0.5 };
        assert!(!SecurityReport::compute("x", p.clone(), Some(near)).unwrap().discrepancy_flag);
        let far = ReportedClaims { log2_n: n + 1.1, ..near };
        assert!(SecurityReport::compute("x", p, Some(far)).unwrap().discrepancy_flag);
    }

    #[test]
    fn invalid_params_rejected() {
        for p in [
            ScenarioParams { t: 4, ..small() },
            ScenarioParams { t_mfj: 2, t: 1, ..small() },
            ScenarioParams { m_a: 2, m_f: 1, ..small() },
            ScenarioParams { mu: 0.0, ..small() },
            ScenarioParams { r: 8, t: 1, ..small() },
            ScenarioParams { k: 0, ..small() },
        ] {
            assert!(spurious_polynomials_log2(&p).is_err(), "{p:?}");
        }
    }

    fn tuples() -> impl Strategy<Value = ScenarioParams> {
        (2u64..60, 1u64..8, 0u64..1000, 0u64..1000, 0u64..1000, 1u64..4, 1u64..5, 1u32..=100)
            .prop_map(|(q, k, a, b, c, ma, fam, mu)| {
                let r = a % q + 1;
                let t = b % r + 1;
                let t_mfj = c % t + 1;
                let m_a = (ma).min(q);
                ScenarioParams {
                    q,
                    k,
                    r,
                    t,
                    t_mfj,
                    m_a,
                    m_f: m_a + 1,
                    n: k - 1,
                    mu: mu as f64 / 100.0,
                    family_card: fam,
                }
            })
    }

    proptest! {
        #[test]
        fn log_gamma_agrees_with_exact(p in tuples()) {
            let a = spurious_polynomials_log2(&p).unwrap();
            let b = exact::spurious_log2(&p).unwrap();
            if a.is_finite() || b.is_finite() {
                prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
            } else {
                prop_assert_eq!(a, b);
            }
            let fa = family_spurious_log2(&p).unwrap();
            let fb = exact::family_log2(&p).unwrap();
            if fa.is_finite() || fb.is_finite() {
                prop_assert!((fa - fb).abs() <= 1e-9, "{fa} vs {fb}");
            }
        }

        #[test]
        fn count_non_decreasing_in_k(p in tuples()) {
            let a = spurious_polynomials_log2(&p).unwrap();
            let b = spurious_polynomials_log2(&ScenarioParams { k: p.k + 1, ..p.clone() }).unwrap();
            if a.is_finite() {
                prop_assert!(b >= a - 1e-9);
                if p.m_a > 1 {
                    prop_assert!(b > a);
                }
            }
        }

        #[test]
        fn attacker_prob_in_unit_interval(p in tuples()) {
            let x = attacker_success_prob(&p).unwrap();
            prop_assert!((0.0..=1.0).contains(&x));
            let y = attacker_success_prob(&ScenarioParams { n: p.n + 1, ..p.clone() }).unwrap();
            if attacker_base(&p) < 1.0 && x > 0.0 {
                prop_assert!(y < x);
            }
        }
    }
}
