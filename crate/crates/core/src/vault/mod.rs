//! Locking and unlocking.
//!
//! [`fuzzy_lock`] encodes a key into a polynomial, projects the locking
//! subset onto it, hides the genuine points among two kinds of chaff and
//! scrambles the result. [`fuzzy_unlock`] fuzzifies the unlocker's subset,
//! matches it against the vault and searches k-subsets of the matches for
//! a polynomial whose decoded key passes the checksum.

mod chaff;
mod file;
mod matching;

pub use chaff::{generate_chaff, ChaffBatch};
pub use file::{VaultFile, VaultHeader, FORMAT_VERSION};
pub use matching::match_points;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field_poly::{
    decode_key, encode_key, lagrange_interpolate, FieldError, FieldParams, Polynomial,
    CRC_VARIANT,
};
use crate::fuzzy_number::FuzzyNumber;
use crate::multi_fuzzy_set::{FamilyTemplate, MultiFuzzySet, SetError, SetKind};
use crate::rng::DetRng;

pub const DEFAULT_RHO: f64 = 0.2;
pub const DEFAULT_DELTA: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VaultError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("r exceeds field size ({r} > {q})")]
    RExceedsQ { r: usize, q: u64 },
    #[error("invalid lock parameters: {0}")]
    Params(String),
    #[error("only {available} fresh x values left, {requested} chaff points requested")]
    NotEnoughFresh { available: u64, requested: usize },
    #[error("on-polynomial chaff needs a field family other than the locking family")]
    SingleFamily,
    #[error("effort cap must be positive")]
    ZeroEffort,
    #[error("vault schema: {0}")]
    Schema(String),
}

/// One public vault entry. Both coordinates carry the same shape.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VaultPoint {
    pub x: FuzzyNumber,
    pub y: FuzzyNumber,
}

impl VaultPoint {
    fn with_template(template: &FamilyTemplate, x: u64, y: u64) -> Self {
        VaultPoint {
            x: template.instantiate(x as f64),
            y: template.instantiate(y as f64),
        }
    }

    /// Defuzzified x as a field element.
    pub fn x_core(&self) -> u64 {
        self.x.defuzzify().round() as u64
    }

    pub fn y_core(&self) -> u64 {
        self.y.defuzzify().round() as u64
    }
}

/// The public part of a locked vault.
#[derive(Clone, Debug, PartialEq)]
pub struct Vault {
    q: u64,
    n: usize,
    points: Vec<VaultPoint>,
}

impl Vault {
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Degree bound of the hidden polynomial.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient count, `n + 1`.
    pub fn k(&self) -> usize {
        self.n + 1
    }

    pub fn r(&self) -> usize {
        self.points.len()
    }

    pub fn crc_variant(&self) -> &'static str {
        CRC_VARIANT
    }

    pub fn points(&self) -> &[VaultPoint] {
        &self.points
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LockParams {
    /// Index of the locking subset within the locking set.
    pub subset_index: usize,
    /// Coefficient count; the polynomial has degree `k - 1`.
    pub k: usize,
    /// Total number of vault points.
    pub r: usize,
    /// Fraction of chaff placed on the polynomial under a foreign family.
    pub rho: f64,
    /// Matching tolerance the vault is intended for.
    pub delta: f64,
    /// Coefficient tolerance; carried for completeness, never applied.
    pub delta_tilde: f64,
    pub seed: u64,
}

impl LockParams {
    pub fn new(subset_index: usize, k: usize, r: usize) -> Self {
        LockParams {
            subset_index,
            k,
            r,
            rho: DEFAULT_RHO,
            delta: DEFAULT_DELTA,
            delta_tilde: 0.0,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }
}

/// Private record of how a vault was built. Never serialized.
#[derive(Clone, Debug, PartialEq)]
pub struct LockTranscript {
    pub polynomial: Polynomial,
    pub locking_template: FamilyTemplate,
    /// Vault positions of the genuine points.
    pub genuine: Vec<usize>,
    /// Positions of chaff on the polynomial under another family.
    pub on_poly_chaff: Vec<usize>,
    /// Positions of chaff off the polynomial.
    pub off_poly_chaff: Vec<usize>,
    /// Total locking elements.
    pub t: usize,
    /// Size of the locking subset.
    pub t_mfk: usize,
    /// Locking set subset count.
    pub m_a: usize,
    /// Field partition subset count.
    pub m_f: usize,
}

/// Diagnostics reported with every unlock attempt.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UnlockDiagnostics {
    pub matched: usize,
    pub subsets_tried: u64,
    pub effort_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnlockResult {
    pub key: Option<Vec<u8>>,
    pub diagnostics: UnlockDiagnostics,
}

impl UnlockResult {
    pub fn is_null(&self) -> bool {
        self.key.is_none()
    }
}

/// Locks `key` under subset `params.subset_index` of `locking_set`.
pub fn fuzzy_lock(
    key: &[u8],
    locking_set: &MultiFuzzySet,
    field_mfs: &MultiFuzzySet,
    params: &LockParams,
) -> Result<(Vault, LockTranscript), VaultError> {
    let field = FieldParams::new(locking_set.q())?;
    check_params(locking_set, field_mfs, params)?;
    let p = encode_key(key, &field, params.k)?;
    lock_polynomial(&p, locking_set, field_mfs, params)
}

fn check_params(
    locking_set: &MultiFuzzySet,
    field_mfs: &MultiFuzzySet,
    params: &LockParams,
) -> Result<(), VaultError> {
    let bad = |msg: String| Err(VaultError::Params(msg));
    if locking_set.kind() != SetKind::Locking {
        return bad("locking set must be of locking kind".into());
    }
    if field_mfs.kind() != SetKind::Field {
        return bad("field partition must be of field kind".into());
    }
    if field_mfs.q() != locking_set.q() {
        return bad(format!(
            "field partition has q = {}, locking set has q = {}",
            field_mfs.q(),
            locking_set.q()
        ));
    }
    let q = locking_set.q();
    if params.r as u64 > q {
        return Err(VaultError::RExceedsQ { r: params.r, q });
    }
    let t_mfk = locking_set.subset(params.subset_index)?.len();
    let t = locking_set.total_elements();
    if params.k == 0 {
        return bad("k must be at least 1".into());
    }
    if t_mfk < params.k {
        return bad(format!(
            "locking subset has {t_mfk} elements, fewer than k = {}",
            params.k
        ));
    }
    if t > params.r {
        return bad(format!("t = {t} exceeds r = {}", params.r));
    }
    if !(0.0..=1.0).contains(&params.rho) {
        return bad(format!("rho = {} outside [0, 1]", params.rho));
    }
    if !(params.delta.is_finite() && params.delta > 0.0) {
        return bad(format!("delta = {} must be positive", params.delta));
    }
    if !(params.delta_tilde.is_finite() && params.delta_tilde >= 0.0) {
        return bad(format!("delta_tilde = {} must be non-negative", params.delta_tilde));
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Origin {
    Genuine,
    OnPoly,
    OffPoly,
}

/// Locks an explicit polynomial. Works over any prime field, including
/// ones too small to carry a key.
pub fn lock_polynomial(
    p: &Polynomial,
    locking_set: &MultiFuzzySet,
    field_mfs: &MultiFuzzySet,
    params: &LockParams,
) -> Result<(Vault, LockTranscript), VaultError> {
    check_params(locking_set, field_mfs, params)?;
    let field = FieldParams::new(locking_set.q())?;
    if p.len() != params.k {
        return Err(VaultError::Params(format!(
            "polynomial has {} coefficients, k = {}",
            p.len(),
            params.k
        )));
    }
    for &c in p.coeffs() {
        field.check(c)?;
    }
    let subset = locking_set.subset(params.subset_index)?;
    let template = subset.template().clone();

    let mut tagged: Vec<(VaultPoint, Origin)> = subset
        .elements()
        .map(|a| {
            let pt = VaultPoint::with_template(&template, a, p.eval(a, &field));
            (pt, Origin::Genuine)
        })
        .collect();
    let used: Vec<u64> = subset.elements().collect();

    let mut rng = DetRng::from_seed(params.seed);
    let batch = chaff::chaff_with_rng(
        p,
        &field,
        field_mfs,
        &used,
        params.r - used.len(),
        params.rho,
        &template,
        &mut rng,
    )?;
    let split = batch.on_poly;
    tagged.extend(batch.points.into_iter().enumerate().map(|(i, pt)| {
        let origin = if i < split { Origin::OnPoly } else { Origin::OffPoly };
        (pt, origin)
    }));
    rng.shuffle(&mut tagged);

    let mut transcript = LockTranscript {
        polynomial: p.clone(),
        locking_template: template,
        genuine: Vec::new(),
        on_poly_chaff: Vec::new(),
        off_poly_chaff: Vec::new(),
        t: locking_set.total_elements(),
        t_mfk: used.len(),
        m_a: locking_set.subset_count(),
        m_f: field_mfs.subset_count(),
    };
    for (i, (_, origin)) in tagged.iter().enumerate() {
        match origin {
            Origin::Genuine => transcript.genuine.push(i),
            Origin::OnPoly => transcript.on_poly_chaff.push(i),
            Origin::OffPoly => transcript.off_poly_chaff.push(i),
        }
    }
    let vault = Vault {
        q: field.q(),
        n: params.k - 1,
        points: tagged.into_iter().map(|(pt, _)| pt).collect(),
    };
    Ok((vault, transcript))
}

/// Seeded Fisher-Yates permutation.
pub fn scramble<T>(mut items: Vec<T>, seed: u64) -> Vec<T> {
    DetRng::from_seed(seed).shuffle(&mut items);
    items
}

/// Unlocks with subset `subset_index` of the unlocker's own multi-fuzzy set.
pub fn fuzzy_unlock(
    vault: &Vault,
    unlocking_set: &MultiFuzzySet,
    subset_index: usize,
    delta: f64,
    key_len: usize,
    effort_cap: u64,
) -> Result<UnlockResult, VaultError> {
    if effort_cap == 0 {
        return Err(VaultError::ZeroEffort);
    }
    let probes = unlocking_set.select_subset(subset_index)?;
    unlock_with_probes(vault, &probes, delta, key_len, effort_cap)
}

/// Unlocks with explicit probe numbers instead of a multi-fuzzy set.
pub fn unlock_with_probes(
    vault: &Vault,
    probes: &[FuzzyNumber],
    delta: f64,
    key_len: usize,
    effort_cap: u64,
) -> Result<UnlockResult, VaultError> {
    if effort_cap == 0 {
        return Err(VaultError::ZeroEffort);
    }
    let field = FieldParams::new(vault.q)?;
    let mut candidates = match_points(vault, probes, delta);
    candidates.sort_unstable();
    let k = vault.k();
    let mut diagnostics = UnlockDiagnostics {
        matched: candidates.len(),
        ..Default::default()
    };
    if candidates.len() < k {
        return Ok(UnlockResult {
            key: None,
            diagnostics,
        });
    }

    let mut combo: Vec<usize> = (0..k).collect();
    let mut chosen = Vec::with_capacity(k);
    loop {
        if diagnostics.subsets_tried == effort_cap {
            diagnostics.effort_exhausted = true;
            break;
        }
        diagnostics.subsets_tried += 1;
        chosen.clear();
        chosen.extend(combo.iter().map(|&i| candidates[i]));
        let poly = lagrange_interpolate(&chosen, &field)?;
        if let Ok(km) = decode_key(&poly, &field, key_len) {
            return Ok(UnlockResult {
                key: Some(km.into_key()),
                diagnostics,
            });
        }
        if !next_combination(&mut combo, candidates.len()) {
            break;
        }
    }
    Ok(UnlockResult {
        key: None,
        diagnostics,
    })
}

/// Advances `combo` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
        return false;
    };
    combo[i] += 1;
    for j in i + 1..k {
        combo[j] = combo[j - 1] + 1;
    }
    true
}
