//! Fingerprint minutiae with interval orientations, as a small end-to-end
//! vault demonstration.
//!
//! Orientations live on a circle quantized in 22.5 degree steps. A minutia's
//! orientation interval becomes a triangular fuzzy number on the unwrapped
//! real line. For the vault each minutia is mapped to one field element that
//! combines its orientation step with a hash of its position.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuzzy_number::FuzzyNumber;
use crate::multi_fuzzy_set::{FamilyTemplate, MultiFuzzySet};
use crate::rng::DetRng;
use crate::vault::{
    fuzzy_lock, unlock_with_probes, LockParams, LockTranscript, UnlockResult, Vault, VaultError,
    DEFAULT_DELTA,
};

/// Width of one orientation step in degrees.
pub const STEP_DEGREES: f64 = 22.5;
/// Number of orientation steps around the circle.
pub const STEPS: u64 = 16;
/// Field used by the demo vault.
pub const DEMO_Q: u64 = 65537;
const POSITION_BUCKETS: u64 = 4096;

/// The 15 orientations some sources list; 337.5 is missing.
pub const LISTED_ORIENTATIONS: [f64; 15] = [
    0.0, 22.5, 45.0, 67.5, 90.0, 112.5, 135.0, 157.5, 180.0, 202.5, 225.0, 247.5, 270.0, 292.5,
    315.0,
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinutiaError {
    #[error("orientation {0} is not finite")]
    NotFinite(f64),
    #[error("interval ({lower}, {center}, {upper}): {reason}")]
    Interval {
        lower: f64,
        center: f64,
        upper: f64,
        reason: &'static str,
    },
    #[error("{0} is not on the listed orientation grid")]
    OffGrid(f64),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{have} minutiae, at least {need} needed")]
    TooFew { have: usize, need: usize },
    #[error(transparent)]
    Vault(#[from] VaultError),
}

/// An angle in degrees, normalized to `[0, 360)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Orientation(f64);

impl Orientation {
    pub fn new(degrees: f64) -> Result<Self, MinutiaError> {
        if !degrees.is_finite() {
            return Err(MinutiaError::NotFinite(degrees));
        }
        let d = degrees.rem_euclid(360.0);
        // rem_euclid can round up to exactly 360 for tiny negatives
        Ok(Orientation(if d >= 360.0 { 0.0 } else { d }))
    }

    pub fn degrees(self) -> f64 {
        self.0
    }

    /// Nearest grid step, `0..16`.
    pub fn step(self) -> u64 {
        ((self.0 / STEP_DEGREES).round() as u64) % STEPS
    }

    /// Counter-clockwise arc from `self` to `other`, in `[0, 360)`.
    pub fn arc_to(self, other: Orientation) -> f64 {
        (other.0 - self.0).rem_euclid(360.0)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The 16 grid orientations `0, 22.5, ..., 337.5`.
pub fn orientation_set() -> Vec<Orientation> {
    (0..STEPS)
        .map(|i| Orientation(i as f64 * STEP_DEGREES))
        .collect()
}

/// Shorter angular distance, in `[0, 180]`.
pub fn circular_distance(a: Orientation, b: Orientation) -> f64 {
    let d = (a.0 - b.0).abs();
    d.min(360.0 - d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinutiaKind {
    RidgeEnding,
    Bifurcation,
}

impl FromStr for MinutiaKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "ridge_ending" | "ending" => Ok(MinutiaKind::RidgeEnding),
            "bifurcation" => Ok(MinutiaKind::Bifurcation),
            other => Err(format!("unknown minutia kind {other:?}")),
        }
    }
}

impl fmt::Display for MinutiaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MinutiaKind::RidgeEnding => "ridge_ending",
            MinutiaKind::Bifurcation => "bifurcation",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minutia {
    kind: MinutiaKind,
    position: (i32, i32),
    interval: (Orientation, Orientation, Orientation),
}

impl Minutia {
    /// `center` must lie on the counter-clockwise arc from `lower` to
    /// `upper`, and that arc may span at most 90 degrees.
    pub fn new(
        kind: MinutiaKind,
        position: (i32, i32),
        lower: f64,
        center: f64,
        upper: f64,
    ) -> Result<Self, MinutiaError> {
        let (lo, c, hi) = (
            Orientation::new(lower)?,
            Orientation::new(center)?,
            Orientation::new(upper)?,
        );
        let err = |reason| MinutiaError::Interval {
            lower,
            center,
            upper,
            reason,
        };
        let width = lo.arc_to(hi);
        if width > 90.0 {
            return Err(err("arc wider than 90 degrees"));
        }
        if lo.arc_to(c) > width {
            return Err(err("center outside the arc"));
        }
        Ok(Minutia {
            kind,
            position,
            interval: (lo, c, hi),
        })
    }

    /// Builds a minutia from an interval written on the 15-value listed
    /// grid. The step offsets from the center are kept and re-read on the
    /// uniform 16-value grid, so `[292.5, 315, 0]` (one listed step either
    /// side of 315) becomes `[292.5, 315, 337.5]`.
    pub fn from_listed_interval(
        kind: MinutiaKind,
        position: (i32, i32),
        lower: f64,
        center: f64,
        upper: f64,
    ) -> Result<Self, MinutiaError> {
        let idx = |v: f64| {
            let o = Orientation::new(v)?.degrees();
            LISTED_ORIENTATIONS
                .iter()
                .position(|&g| g == o)
                .ok_or(MinutiaError::OffGrid(v))
        };
        let n = LISTED_ORIENTATIONS.len();
        let (l, c, u) = (idx(lower)?, idx(center)?, idx(upper)?);
        let below = (c + n - l) % n;
        let above = (u + n - c) % n;
        Minutia::new(
            kind,
            position,
            center - below as f64 * STEP_DEGREES,
            center,
            center + above as f64 * STEP_DEGREES,
        )
    }

    pub fn kind(&self) -> MinutiaKind {
        self.kind
    }

    pub fn position(&self) -> (i32, i32) {
        self.position
    }

    pub fn interval(&self) -> (Orientation, Orientation, Orientation) {
        self.interval
    }

    pub fn center(&self) -> Orientation {
        self.interval.1
    }
}

/// Triangular number over the unwrapped interval: the left end is `lower`
/// and the other two are lifted past 360 when the arc wraps.
pub fn minutia_to_fuzzy(m: &Minutia) -> FuzzyNumber {
    let (lo, c, hi) = m.interval;
    let l = lo.degrees();
    FuzzyNumber::triangular(l, l + lo.arc_to(c), l + lo.arc_to(hi))
        .expect("validated interval is ordered")
}

/// Parses the demo text format: one `kind x y lower center upper` per line,
/// blank lines and `#` comments ignored.
pub fn parse_minutiae(text: &str) -> Result<Vec<Minutia>, MinutiaError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: String| MinutiaError::Parse { line: i + 1, reason };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(bad(format!("expected 6 fields, found {}", f.len())));
        }
        let kind: MinutiaKind = f[0].parse().map_err(bad)?;
        let int = |s: &str| s.parse::<i32>().map_err(|e| bad(format!("{s:?}: {e}")));
        let real = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}")));
        let m = Minutia::new(
            kind,
            (int(f[1])?, int(f[2])?),
            real(f[3])?,
            real(f[4])?,
            real(f[5])?,
        )
        .map_err(|e| bad(e.to_string()))?;
        out.push(m);
    }
    Ok(out)
}

fn position_hash(x: i32, y: i32) -> u64 {
    // splitmix64 finalizer
    let mut z = ((x as u32 as u64) << 32) | y as u32 as u64;
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Field elements for a list of minutiae: `step + 16 * h` with `h` a
/// position hash in `0..4096`, bumped until the element is unused.
pub fn minutiae_elements(minutiae: &[Minutia]) -> Vec<u64> {
    let mut used = HashSet::with_capacity(minutiae.len());
    minutiae
        .iter()
        .map(|m| {
            let (x, y) = m.position;
            let mut h = position_hash(x, y) % POSITION_BUCKETS;
            loop {
                let e = m.center().step() + STEPS * h;
                if used.insert(e) {
                    return e;
                }
                h = (h + 1) % POSITION_BUCKETS;
            }
        })
        .collect()
}

/// Random minutiae with one-step intervals, for demos and tests.
pub fn synthetic_minutiae(count: usize, seed: u64) -> Vec<Minutia> {
    let mut rng = DetRng::from_seed(seed);
    (0..count)
        .map(|_| {
            let kind = if rng.below(2) == 0 {
                MinutiaKind::RidgeEnding
            } else {
                MinutiaKind::Bifurcation
            };
            let pos = (rng.below(512) as i32, rng.below(512) as i32);
            let c = rng.below(STEPS) as f64 * STEP_DEGREES;
            Minutia::new(kind, pos, c - STEP_DEGREES, c, c + STEP_DEGREES)
                .expect("one-step interval is valid")
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DemoParams {
    pub k: usize,
    pub r: usize,
    pub rho: f64,
    /// Matching tolerance in orientation steps.
    pub delta: f64,
    /// Probe displacement in degrees, applied in a random direction.
    pub jitter_degrees: f64,
    pub effort_cap: u64,
    pub seed: u64,
}

impl Default for DemoParams {
    fn default() -> Self {
        DemoParams {
            k: 8,
            r: 200,
            rho: 0.2,
            delta: DEFAULT_DELTA,
            jitter_degrees: 0.0,
            effort_cap: 100_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DemoOutcome {
    pub elements: Vec<u64>,
    pub vault: Vault,
    pub transcript: LockTranscript,
    pub result: UnlockResult,
}

fn demo_field() -> MultiFuzzySet {
    let quarter = DEMO_Q / 4;
    MultiFuzzySet::partition_field(
        DEMO_Q,
        &[quarter, quarter, quarter, DEMO_Q - 3 * quarter],
        vec![
            FamilyTemplate::triangular(1.0, 1.0).expect("valid"),
            FamilyTemplate::gaussian(0.5, 0.5).expect("valid"),
            FamilyTemplate::trapezoidal(0.25, 1.0, 1.0).expect("valid"),
            FamilyTemplate::sigmoid(1.0, 1.0, 0.9, 3.0).expect("valid"),
        ],
    )
    .expect("static partition")
}

/// Locks `key` under the minutiae and unlocks at once with jittered copies.
///
/// Vault x values are in orientation-step units, so one grid step is one
/// field unit and a jitter of `d` degrees moves a probe by `d / 22.5`.
pub fn minutiae_vault_demo(
    minutiae: &[Minutia],
    key: &[u8],
    params: &DemoParams,
) -> Result<DemoOutcome, MinutiaError> {
    if minutiae.len() < params.k {
        return Err(MinutiaError::TooFew {
            have: minutiae.len(),
            need: params.k,
        });
    }
    let elements = minutiae_elements(minutiae);
    let template = FamilyTemplate::triangular(1.0, 1.0).expect("valid");
    let field = demo_field();
    let lock = MultiFuzzySet::build_locking_set(&field, vec![(elements.clone(), template.clone())])
        .map_err(VaultError::from)?;
    let lock_params = LockParams {
        rho: params.rho,
        delta: params.delta,
        ..LockParams::new(0, params.k, params.r).with_seed(params.seed)
    };
    let (vault, transcript) = fuzzy_lock(key, &lock, &field, &lock_params)?;

    let mut rng = DetRng::from_seed(params.seed ^ 0x6A09_E667_F3BC_C908);
    let offset = params.jitter_degrees / STEP_DEGREES;
    let probes: Vec<FuzzyNumber> = elements
        .iter()
        .map(|&e| {
            let sign = if rng.below(2) == 0 { -1.0 } else { 1.0 };
            template.instantiate(e as f64 + sign * offset)
        })
        .collect();
    let result = unlock_with_probes(&vault, &probes, params.delta, key.len(), params.effort_cap)?;
    Ok(DemoOutcome {
        elements,
        vault,
        transcript,
        result,
    })
}
