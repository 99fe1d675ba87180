use std::collections::HashSet;

use crate::field_poly::{FieldParams, Polynomial};
use crate::multi_fuzzy_set::{FamilyTemplate, MultiFuzzySet};
use crate::rng::DetRng;

use super::{VaultError, VaultPoint};

/// Chaff points; the first `on_poly` lie on the polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaffBatch {
    pub points: Vec<VaultPoint>,
    pub on_poly: usize,
}

/// Generates `count` chaff points at x values outside `used`.
///
/// `floor(rho * count)` of them sit on the polynomial but carry a field
/// family other than `locking_template`. The rest sit off the polynomial
/// under any field family or the locking one.
#[allow(clippy::too_many_arguments)]
pub fn generate_chaff(
    p: &Polynomial,
    field: &FieldParams,
    field_mfs: &MultiFuzzySet,
    used: &[u64],
    count: usize,
    rho: f64,
    locking_template: &FamilyTemplate,
    seed: u64,
) -> Result<ChaffBatch, VaultError> {
    let mut rng = DetRng::from_seed(seed);
    chaff_with_rng(p, field, field_mfs, used, count, rho, locking_template, &mut rng)
}

#[allow(clippy::too_many_arguments)]
pub(super) fn chaff_with_rng(
    p: &Polynomial,
    field: &FieldParams,
    field_mfs: &MultiFuzzySet,
    used: &[u64],
    count: usize,
    rho: f64,
    locking_template: &FamilyTemplate,
    rng: &mut DetRng,
) -> Result<ChaffBatch, VaultError> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(VaultError::Params(format!("rho = {rho} outside [0, 1]")));
    }
    let on_poly = (rho * count as f64).floor() as usize;
    let field_templates = field_mfs.templates();
    let foreign: Vec<&FamilyTemplate> = field_templates
        .iter()
        .filter(|t| *t != locking_template)
        .collect();
    if on_poly > 0 && foreign.is_empty() {
        return Err(VaultError::SingleFamily);
    }
    let mut any: Vec<&FamilyTemplate> = field_templates.iter().collect();
    if !any.contains(&locking_template) {
        any.push(locking_template);
    }

    let xs = fresh_elements(field.q(), used, count, rng)?;
    let points = xs
        .into_iter()
        .enumerate()
        .map(|(i, u)| {
            let on = p.eval(u, field);
            if i < on_poly {
                let t = foreign[rng.below(foreign.len() as u64) as usize];
                VaultPoint::with_template(t, u, on)
            } else {
                let t = any[rng.below(any.len() as u64) as usize];
                let mut v = rng.below(field.q() - 1);
                if v >= on {
                    v += 1;
                }
                VaultPoint::with_template(t, u, v)
            }
        })
        .collect();
    Ok(ChaffBatch { points, on_poly })
}

/// `count` distinct field elements, none of them in `used`.
fn fresh_elements(
    q: u64,
    used: &[u64],
    count: usize,
    rng: &mut DetRng,
) -> Result<Vec<u64>, VaultError> {
    let taken: HashSet<u64> = used.iter().copied().collect();
    let available = q - taken.len() as u64;
    if count as u64 > available {
        return Err(VaultError::NotEnoughFresh {
            available,
            requested: count,
        });
    }
    if (count as u64).saturating_mul(2) >= available {
        // dense: partial shuffle of the complement
        let mut pool: Vec<u64> = (0..q).filter(|x| !taken.contains(x)).collect();
        for i in 0..count {
            let j = i + rng.below((pool.len() - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(count);
        return Ok(pool);
    }
    let mut picked = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = rng.below(q);
        if !taken.contains(&x) && picked.insert(x) {
            out.push(x);
        }
    }
    Ok(out)
}
