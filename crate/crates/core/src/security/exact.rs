use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::ScenarioParams;

/// Magnitude limit for the rational path.
const MAX_BITS: f64 = 1024.0;

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn log2_uint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 960 {
        return n.to_f64().expect("below f64 range").log2();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().expect("64 bits").log2() + shift as f64
}

fn log2_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    log2_uint(num) - log2_uint(den)
}

fn ratio_pow(num: u64, den: u64, exp: i64) -> BigRational {
    let base = BigRational::new(BigInt::from(num), BigInt::from(den));
    if exp >= 0 {
        Pow::pow(base, exp as u64)
    } else {
        Pow::pow(base.recip(), exp.unsigned_abs())
    }
}

fn fits(p: &ScenarioParams) -> bool {
    let lq = (p.q as f64).log2();
    let span = p.k as f64 + (p.k as f64 - p.t_mfj as f64).abs() + (p.r - p.t_mfj) as f64;
    // binomials are bounded by n^t
    let binomials = p.t_mfj as f64 * ((p.r as f64).log2() + lq);
    span * lq + binomials < MAX_BITS
}

fn spurious(p: &ScenarioParams) -> BigRational {
    let qk = BigRational::from_integer(BigInt::from(p.q).pow(p.k as u32));
    let c = BigRational::from_integer(BigInt::from(binomial(p.r, p.t_mfj)));
    let hit = ratio_pow(p.m_a, p.q, p.k as i64 - p.t_mfj as i64);
    let miss = ratio_pow(p.q - p.m_a, p.q, (p.r - p.t_mfj) as i64);
    qk * c * hit * miss
}

/// Exact-rational log2 of the spurious count, `None` when too large.
pub(super) fn spurious_log2(p: &ScenarioParams) -> Option<f64> {
    if p.validate().is_err() || !fits(p) {
        return None;
    }
    if p.m_a == p.q && p.r > p.t_mfj {
        return Some(f64::NEG_INFINITY);
    }
    Some(log2_rational(&spurious(p)))
}

/// Exact-rational log2 of the family-aware bound, `None` when too large.
pub(super) fn family_log2(p: &ScenarioParams) -> Option<f64> {
    if p.validate().is_err() || !fits(p) {
        return None;
    }
    if p.m_a == p.q && p.r > p.t_mfj {
        return Some(f64::NEG_INFINITY);
    }
    let mu = BigRational::from_float(p.mu)?;
    let card = BigRational::from_integer(BigInt::from(p.family_card));
    let cq = BigRational::from_integer(BigInt::from(binomial(p.q, p.t_mfj)));
    Some(log2_rational(&(mu * card * spurious(p) / cq)))
}
