//! A quick end-to-end self check, run by `ffvault selftest`.
//!
//! Faults can be injected to confirm that a broken component is caught.

use serde::Serialize;

use crate::field_poly::{crc16, lagrange_interpolate, FieldParams, Polynomial};
use crate::fuzzy_number::FuzzyNumber;
use crate::minutiae::{
    minutia_to_fuzzy, minutiae_vault_demo, synthetic_minutiae, DemoParams, Minutia, MinutiaKind,
};
use crate::multi_fuzzy_set::{FamilyTemplate, MultiFuzzySet};
use crate::rng::DetRng;
use crate::security::{scenario_report, spurious_census, spurious_polynomials_log2, ScenarioParams};
use crate::vault::{fuzzy_lock, fuzzy_unlock, lock_polynomial, LockParams, Vault, DEFAULT_DELTA};

/// Component to break on purpose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Checksum with the right polynomial but without bit reflection.
    Crc,
    /// Census histogram off by one.
    Census,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Bit-at-a-time CRC-16/ARC.
pub fn crc16_bitwise(data: &[u8]) -> u16 {
    let mut crc = 0u16;
    for &b in data {
        crc ^= b as u16;
        for _ in 0..8 {
            crc = if crc & 1 == 1 { (crc >> 1) ^ 0xA001 } else { crc >> 1 };
        }
    }
    crc
}

/// CRC-16/UMTS: polynomial 0x8005 without reflection.
pub fn crc16_unreflected(data: &[u8]) -> u16 {
    let mut crc = 0u16;
    for &b in data {
        crc ^= (b as u16) << 8;
        for _ in 0..8 {
            crc = if crc & 0x8000 != 0 { (crc << 1) ^ 0x8005 } else { crc << 1 };
        }
    }
    crc
}

fn check(name: &'static str, result: Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check { name, passed: true, detail },
        Err(detail) => Check { name, passed: false, detail },
    }
}

pub fn run_selftest(fault: Option<Fault>) -> SelftestReport {
    let crc: fn(&[u8]) -> u16 = if fault == Some(Fault::Crc) {
        crc16_unreflected
    } else {
        crc16
    };
    let census_offset = u64::from(fault == Some(Fault::Census));
    let checks = vec![
        check("crc-check-value", crc_check(crc)),
        check("interpolation", interpolation_check()),
        check("vault-round-trip", vault_check()),
        check("spurious-count-exact", spurious_count_check()),
        check("presets", preset_check()),
        check("census-subsample", census_check(census_offset)),
        check("fuzzy-arithmetic", arithmetic_check()),
        check("minutiae", minutiae_check()),
    ];
    SelftestReport { checks }
}

fn crc_check(crc: fn(&[u8]) -> u16) -> Result<String, String> {
    let v = crc(b"123456789");
    if v != 0xBB3D {
        return Err(format!("check value {v:#06X}, expected 0xBB3D"));
    }
    let mut rng = DetRng::from_seed(1);
    for _ in 0..1000 {
        let len = rng.below(64) as usize;
        let data: Vec<u8> = (0..len).map(|_| rng.below(256) as u8).collect();
        if crc(&data) != crc16_bitwise(&data) {
            return Err(format!("mismatch with bitwise reference on {data:02X?}"));
        }
    }
    Ok("0xBB3D and 1000 random strings".into())
}

fn interpolation_check() -> Result<String, String> {
    let mut rng = DetRng::from_seed(2);
    let f = FieldParams::new((1 << 17) + 29).map_err(|e| e.to_string())?;
    for _ in 0..100 {
        let k = 2 + rng.below(12) as usize;
        let coeffs: Vec<u64> = (0..k).map(|_| rng.below(f.q())).collect();
        let p = Polynomial::new(coeffs, &f).map_err(|e| e.to_string())?;
        let pts: Vec<(u64, u64)> = (0..k as u64).map(|x| (x * 7 + 1, p.eval(x * 7 + 1, &f))).collect();
        let back = lagrange_interpolate(&pts, &f).map_err(|e| e.to_string())?;
        if back != p {
            return Err(format!("recovered {:?}, expected {:?}", back.coeffs(), p.coeffs()));
        }
    }
    Ok("100 polynomials".into())
}

fn desk_sets() -> (MultiFuzzySet, MultiFuzzySet) {
    let q = 65537;
    let t = [
        FamilyTemplate::triangular(1.0, 1.0).expect("valid"),
        FamilyTemplate::gaussian(0.5, 0.5).expect("valid"),
        FamilyTemplate::trapezoidal(0.25, 1.0, 1.0).expect("valid"),
        FamilyTemplate::sigmoid(1.0, 1.0, 0.9, 3.0).expect("valid"),
    ];
    let field = MultiFuzzySet::partition_field(q, &[16384, 16384, 16384, 16385], t.to_vec())
        .expect("static partition");
    let lock = MultiFuzzySet::build_locking_set(
        &field,
        vec![
            ((1000..1012).collect(), t[0].clone()),
            ((2000..2006).collect(), t[1].clone()),
            ((3000..3006).collect(), t[2].clone()),
        ],
    )
    .expect("static locking set");
    (field, lock)
}

fn vault_check() -> Result<String, String> {
    let (field, lock) = desk_sets();
    let key = b"selftest key!!";
    let groups: Vec<_> = lock
        .subsets()
        .iter()
        .map(|s| (s.elements().collect(), s.template().clone()))
        .collect();
    let unlock = MultiFuzzySet::build_unlocking_set(65537, groups).map_err(|e| e.to_string())?;
    let wrong = MultiFuzzySet::build_unlocking_set(
        65537,
        vec![((1000..1012).collect(), FamilyTemplate::gaussian(0.5, 0.5).expect("valid"))],
    )
    .map_err(|e| e.to_string())?;
    for seed in 0..5 {
        let params = LockParams::new(0, 8, 300).with_seed(seed);
        let (vault, _) = fuzzy_lock(key, &lock, &field, &params).map_err(|e| e.to_string())?;
        let res = fuzzy_unlock(&vault, &unlock, 0, DEFAULT_DELTA, key.len(), 10_000)
            .map_err(|e| e.to_string())?;
        if res.key.as_deref() != Some(&key[..]) {
            return Err(format!("seed {seed}: key not recovered"));
        }
        let bad = fuzzy_unlock(&vault, &wrong, 0, DEFAULT_DELTA, key.len(), 10_000)
            .map_err(|e| e.to_string())?;
        if !bad.is_null() {
            return Err(format!("seed {seed}: wrong family unlocked"));
        }
        let text = vault.to_json();
        let back = Vault::from_json(&text).map_err(|e| e.to_string())?;
        if back != vault || back.to_json() != text {
            return Err(format!("seed {seed}: vault file does not round-trip"));
        }
    }
    Ok("5 seeds lock, unlock, reject and reparse".into())
}

fn spurious_count_check() -> Result<String, String> {
    let p = ScenarioParams {
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
    };
    let got = spurious_polynomials_log2(&p).map_err(|e| e.to_string())?;
    let want = (108.0f64 / 7.0).log2();
    if (got - want).abs() > 1e-12 * want {
        return Err(format!("log2 N = {got}, expected {want}"));
    }
    Ok(format!("log2 N = {got:.12}"))
}

fn preset_check() -> Result<String, String> {
    for name in crate::security::PRESETS {
        let r = scenario_report(name).map_err(|e| e.to_string())?;
        if !r.reports.iter().all(|x| x.reported.is_some() && x.log2_n.is_finite()) {
            return Err(format!("{name}: incomplete report"));
        }
    }
    Ok("both presets evaluate".into())
}

fn census_check(offset: u64) -> Result<String, String> {
    let q = 97;
    let f = FieldParams::new(q).map_err(|e| e.to_string())?;
    let tri = FamilyTemplate::triangular(1.0, 1.0).expect("valid");
    let field = MultiFuzzySet::partition_field(
        q,
        &[48, 49],
        vec![tri.clone(), FamilyTemplate::gaussian(0.5, 0.5).expect("valid")],
    )
    .map_err(|e| e.to_string())?;
    let lock = MultiFuzzySet::build_locking_set(&field, vec![((10..16).collect(), tri)])
        .map_err(|e| e.to_string())?;
    let p = Polynomial::new(vec![5, 17, 3], &f).map_err(|e| e.to_string())?;
    let (vault, tr) = lock_polynomial(&p, &lock, &field, &LockParams::new(0, 3, 30).with_seed(1))
        .map_err(|e| e.to_string())?;
    // brute force over the linear polynomials, compared with the census
    let mut census = spurious_census(&vault, &tr, 2).map_err(|e| e.to_string())?;
    census.blind_histogram[0] += offset;
    let mut brute = vec![0u64; vault.r() + 1];
    for c0 in 0..q {
        for c1 in 0..q {
            let hits = vault
                .points()
                .iter()
                .filter(|pt| f.add(c0, f.mul(c1, pt.x_core())) == pt.y_core())
                .count();
            brute[hits] += 1;
        }
    }
    if census.blind_histogram != brute {
        return Err("census histogram differs from brute force at q = 97, k = 2".into());
    }
    Ok(format!("{} polynomials agree", q * q))
}

fn arithmetic_check() -> Result<String, String> {
    let a = FuzzyNumber::triangular(1.0, 2.0, 4.0).map_err(|e| e.to_string())?;
    let b = FuzzyNumber::triangular(-1.0, 0.5, 3.0).map_err(|e| e.to_string())?;
    let sum = a.try_add(&b).map_err(|e| e.to_string())?;
    let diff = a.try_sub(&b).map_err(|e| e.to_string())?;
    let scaled = a.scale(-2.0).map_err(|e| e.to_string())?;
    let want = [
        (sum.support(), (0.0, 7.0)),
        (diff.support(), (-2.0, 5.0)),
        (scaled.support(), (-8.0, -2.0)),
    ];
    for (got, exp) in want {
        if got != exp {
            return Err(format!("support {got:?}, expected {exp:?}"));
        }
    }
    let sq = a.pow_n(2).map_err(|e| e.to_string())?;
    if (sq.membership(9.0) - 0.5).abs() > 1e-12 {
        return Err(format!("square membership at 9 is {}", sq.membership(9.0)));
    }
    Ok("supports and square membership".into())
}

fn minutiae_check() -> Result<String, String> {
    let bif = Minutia::from_listed_interval(MinutiaKind::Bifurcation, (0, 0), 292.5, 315.0, 0.0)
        .map_err(|e| e.to_string())?;
    let f = minutia_to_fuzzy(&bif);
    if f.params() != vec![292.5, 315.0, 337.5] {
        return Err(format!("bifurcation maps to {f}"));
    }
    let ms = synthetic_minutiae(12, 7);
    let out = minutiae_vault_demo(&ms, b"minutiae check", &DemoParams::default())
        .map_err(|e| e.to_string())?;
    if out.result.is_null() {
        return Err("demo key not recovered".into());
    }
    Ok("intervals and demo unlock".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes() {
        let r = run_selftest(None);
        let failed: Vec<_> = r.failures().map(|c| (c.name, c.detail.clone())).collect();
        assert!(r.passed(), "{failed:?}");
    }

    #[test]
    fn injected_faults_are_named() {
        let r = run_selftest(Some(Fault::Crc));
        let names: Vec<_> = r.failures().map(|c| c.name).collect();
        assert_eq!(names, vec!["crc-check-value"]);
        let r = run_selftest(Some(Fault::Census));
        let names: Vec<_> = r.failures().map(|c| c.name).collect();
        assert_eq!(names, vec!["census-subsample"]);
    }

    #[test]
    fn unreflected_check_value() {
        assert_eq!(crc16_unreflected(b"123456789"), 0xFEE8);
        assert_eq!(crc16_bitwise(b"123456789"), 0xBB3D);
    }
}
