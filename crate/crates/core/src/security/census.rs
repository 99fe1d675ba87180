use serde::Serialize;
use statrs::function::factorial::ln_binomial;

use crate::field_poly::FieldParams;
use crate::vault::{LockTranscript, Vault, VaultError};

use super::{spurious_polynomials_log2, ScenarioParams, SecurityError};

/// Largest polynomial space the census will enumerate.
pub const MAX_CENSUS_POLYNOMIALS: u64 = 10_000_000;

/// Agreement counts of every polynomial with fewer than `k` coefficients
/// against the vault point cores.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub q: u64,
    pub k: usize,
    pub r: usize,
    pub t_mfj: usize,
    pub polynomials: u64,
    /// `blind_histogram[a]` polynomials agree with exactly `a` points.
    pub blind_histogram: Vec<u64>,
    /// Same, counting only points that carry the locking family.
    pub aware_histogram: Vec<u64>,
    /// Polynomials agreeing with exactly `t_mfj` points, family-blind.
    pub blind_exact: u64,
    pub aware_exact: u64,
    /// Polynomials agreeing with at least `t_mfj` points.
    pub blind_at_least: u64,
    pub aware_at_least: u64,
    /// The closed-form count for the same parameters, when they are valid.
    pub model_log2_n: Option<f64>,
    /// Expected number of polynomials agreeing with exactly `t_mfj` of `r`
    /// points if each agreement were an independent `1/q` event.
    pub binomial_expectation: f64,
}

/// Exhaustive census over all `q^k` polynomials.
///
/// For each choice of the upper coefficients the constant term that makes a
/// point agree is fixed, so one pass over the points tallies all `q`
/// constant terms at once.
pub fn spurious_census(
    vault: &Vault,
    transcript: &LockTranscript,
    k: usize,
) -> Result<CensusReport, SecurityError> {
    let q = vault.q();
    let field = FieldParams::new(q).map_err(VaultError::from)?;
    let total = q
        .checked_pow(k as u32)
        .filter(|&n| n <= MAX_CENSUS_POLYNOMIALS && k > 0)
        .ok_or(SecurityError::CensusTooLarge {
            q,
            k,
            max: MAX_CENSUS_POLYNOMIALS,
        })?;

    let points: Vec<(u64, u64, bool)> = vault
        .points()
        .iter()
        .map(|pt| {
            let aware = transcript.locking_template.matches(&pt.x);
            (pt.x_core(), pt.y_core(), aware)
        })
        .collect();
    let r = points.len();
    let aware_points = points.iter().filter(|p| p.2).count();
    // powers[i][j] = x_i^(j+1)
    let powers: Vec<Vec<u64>> = points
        .iter()
        .map(|&(x, _, _)| {
            (1..k as u64).map(|j| field.pow(x, j)).collect()
        })
        .collect();

    let mut upper = vec![0u64; k - 1];
    let mut sums = vec![0u64; r];
    let mut blind_tally = vec![0u32; q as usize];
    let mut aware_tally = vec![0u32; q as usize];
    let mut blind_histogram = vec![0u64; r + 1];
    let mut aware_histogram = vec![0u64; aware_points + 1];
    loop {
        for (i, &(_, y, aware)) in points.iter().enumerate() {
            let c0 = field.sub(y, sums[i]) as usize;
            blind_tally[c0] += 1;
            aware_tally[c0] += aware as u32;
        }
        for c0 in 0..q as usize {
            blind_histogram[blind_tally[c0] as usize] += 1;
            aware_histogram[aware_tally[c0] as usize] += 1;
            blind_tally[c0] = 0;
            aware_tally[c0] = 0;
        }
        // odometer step; wrapping q-1 -> 0 is also +1 mod q
        let mut j = 0;
        loop {
            if j == upper.len() {
                return Ok(finish(
                    vault,
                    transcript,
                    k,
                    total,
                    blind_histogram,
                    aware_histogram,
                ));
            }
            for (s, pw) in sums.iter_mut().zip(&powers) {
                *s = field.add(*s, pw[j]);
            }
            upper[j] += 1;
            if upper[j] < q {
                break;
            }
            upper[j] = 0;
            j += 1;
        }
    }
}

fn finish(
    vault: &Vault,
    transcript: &LockTranscript,
    k: usize,
    polynomials: u64,
    blind_histogram: Vec<u64>,
    aware_histogram: Vec<u64>,
) -> CensusReport {
    let (q, r, t) = (vault.q(), vault.r(), transcript.t_mfk);
    let at = |h: &[u64]| h.get(t).copied().unwrap_or(0);
    let at_least = |h: &[u64]| h.iter().skip(t).sum();
    let model = ScenarioParams {
        q,
        k: k as u64,
        r: r as u64,
        t: transcript.t as u64,
        t_mfj: t as u64,
        m_a: transcript.m_a as u64,
        m_f: transcript.m_f.max(transcript.m_a) as u64,
        n: k as u64 - 1,
        mu: 1.0,
        family_card: 1,
    };
    let qf = q as f64;
    let ln_expect = k as f64 * qf.ln() + ln_binomial(r as u64, t as u64) - t as f64 * qf.ln()
        + (r - t.min(r)) as f64 * (-1.0 / qf).ln_1p();
    CensusReport {
        q,
        k,
        r,
        t_mfj: t,
        polynomials,
        blind_exact: at(&blind_histogram),
        aware_exact: at(&aware_histogram),
        blind_at_least: at_least(&blind_histogram),
        aware_at_least: at_least(&aware_histogram),
        blind_histogram,
        aware_histogram,
        model_log2_n: spurious_polynomials_log2(&model).ok(),
        binomial_expectation: if t > r { 0.0 } else { ln_expect.exp() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::Polynomial;
    use crate::multi_fuzzy_set::{FamilyTemplate, MultiFuzzySet};
    use crate::vault::{lock_polynomial, LockParams};

    fn field_set(q: u64) -> MultiFuzzySet {
        let h = q / 2;
        MultiFuzzySet::partition_field(
            q,
            &[h, q - h],
            vec![
                FamilyTemplate::triangular(1.0, 1.0).unwrap(),
                FamilyTemplate::gaussian(0.5, 0.5).unwrap(),
            ],
        )
        .unwrap()
    }

    fn locked(q: u64, coeffs: Vec<u64>, genuine: Vec<u64>, r: usize, seed: u64) -> (Vault, LockTranscript) {
        let field = field_set(q);
        let lock = MultiFuzzySet::build_locking_set(
            &field,
            vec![(genuine, FamilyTemplate::triangular(1.0, 1.0).unwrap())],
        )
        .unwrap();
        let f = FieldParams::new(q).unwrap();
        let p = Polynomial::new(coeffs, &f).unwrap();
        let k = p.len();
        lock_polynomial(&p, &lock, &field, &LockParams::new(0, k, r).with_seed(seed)).unwrap()
    }

    fn brute(vault: &Vault, tr: &LockTranscript, k: usize) -> (Vec<u64>, Vec<u64>) {
        let f = FieldParams::new(vault.q()).unwrap();
        let aware_n = vault
            .points()
            .iter()
            .filter(|p| tr.locking_template.matches(&p.x))
            .count();
        let mut blind = vec![0u64; vault.r() + 1];
        let mut aware = vec![0u64; aware_n + 1];
        let total = vault.q().pow(k as u32);
        for idx in 0..total {
            let mut c = Vec::with_capacity(k);
            let mut v = idx;
            for _ in 0..k {
                c.push(v % vault.q());
                v /= vault.q();
            }
            let p = Polynomial::new(c, &f).unwrap();
            let mut b = 0;
            let mut a = 0;
            for pt in vault.points() {
                if p.eval(pt.x_core(), &f) == pt.y_core() {
                    b += 1;
                    if tr.locking_template.matches(&pt.x) {
                        a += 1;
                    }
                }
            }
            blind[b] += 1;
            aware[a] += 1;
        }
        (blind, aware)
    }

    #[test]
    fn matches_brute_force() {
        for (q, k, seed) in [(11, 2, 1), (13, 3, 2), (17, 3, 3)] {
            let coeffs: Vec<u64> = (0..k as u64).map(|i| (3 * i + 1) % q).collect();
            let (v, tr) = locked(q, coeffs, vec![1, 2, 3, 5], 9, seed);
            for kk in 1..=k + 1 {
                let got = spurious_census(&v, &tr, kk).unwrap();
                let (blind, aware) = brute(&v, &tr, kk);
                assert_eq!(got.blind_histogram, blind, "q={q} k={kk}");
                assert_eq!(got.aware_histogram, aware, "q={q} k={kk}");
                assert_eq!(got.polynomials, q.pow(kk as u32));
                assert_eq!(blind.iter().sum::<u64>(), got.polynomials);
            }
        }
    }

    #[test]
    fn genuine_only_vault_has_one_full_agreement() {
        let (v, tr) = locked(31, vec![4, 7, 2], vec![3, 9, 14, 20, 27], 5, 0);
        let c = spurious_census(&v, &tr, 3).unwrap();
        assert_eq!(c.blind_exact, 1);
        assert_eq!(c.aware_exact, 1);
    }

    #[test]
    fn under_determined_census_counts_affine_space() {
        // 2 genuine points, no chaff, 4 coefficients: q^2 polynomials fit
        let (v, tr) = locked(23, vec![5, 6], vec![4, 10], 2, 0);
        let c = spurious_census(&v, &tr, 4).unwrap();
        assert_eq!(c.blind_exact, 23 * 23);
    }

    #[test]
    fn reproducible_and_bounded() {
        let (v, tr) = locked(97, vec![1, 2, 3], (40..46).collect(), 30, 7);
        let a = spurious_census(&v, &tr, 3).unwrap();
        let b = spurious_census(&v, &tr, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.blind_at_least >= 1);
        assert!(a.model_log2_n.unwrap().is_finite());
        assert!(a.binomial_expectation > 0.0);
        assert!(matches!(
            spurious_census(&v, &tr, 4),
            Err(SecurityError::CensusTooLarge { .. })
        ));
        assert!(spurious_census(&v, &tr, 0).is_err());
    }
}
