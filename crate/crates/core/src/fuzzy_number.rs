//! Parametric fuzzy numbers.
//!
//! Five families are supported: triangular, trapezoidal, Gaussian, sigmoid and
//! a crisp embedding of plain reals. Each value is immutable and validated on
//! construction, so every query below is a total function.
//!
//! Triangular numbers are stored by their absolute endpoints `(left, core,
//! right)`. [`FuzzyNumber::triangular_spread`] accepts the spread form
//! `(left_spread, core, right_spread)` and converts on input.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `(left, core, right)` of a triangular envelope.
type Triple = (f64, f64, f64);

/// Membership family tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Triangular,
    Trapezoidal,
    Gaussian,
    Sigmoid,
    Crisp,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Triangular,
        Family::Trapezoidal,
        Family::Gaussian,
        Family::Sigmoid,
        Family::Crisp,
    ];

    /// Number of parameters in the family's serialized parameter vector.
    pub fn arity(self) -> usize {
        match self {
            Family::Triangular => 3,
            Family::Trapezoidal => 4,
            Family::Gaussian => 3,
            Family::Sigmoid => 5,
            Family::Crisp => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Triangular => "triangular",
            Family::Trapezoidal => "trapezoidal",
            Family::Gaussian => "gaussian",
            Family::Sigmoid => "sigmoid",
            Family::Crisp => "crisp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("invalid {family} parameters: {reason}")]
    InvalidParams { family: Family, reason: String },
    #[error("{family} expects {expected} parameters, got {got}")]
    Arity {
        family: Family,
        expected: usize,
        got: usize,
    },
    #[error("alpha {0} outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("alpha {alpha} exceeds sigmoid height {omega}")]
    AlphaAboveHeight { alpha: f64, omega: f64 },
    #[error("arithmetic between {0} and {1} is undefined")]
    MixedFamilies(Family, Family),
    #[error("{op} is not defined for {family} numbers")]
    Unsupported { op: &'static str, family: Family },
    #[error("power requires a triangular number with positive support")]
    NonPositiveSupport,
    #[error("power exponent must be at least 1")]
    ZeroExponent,
}

/// The standard logistic function.
fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Shape {
    Triangular {
        left: f64,
        core: f64,
        right: f64,
    },
    Trapezoidal {
        x0: f64,
        y0: f64,
        sigma: f64,
        beta: f64,
    },
    Gaussian {
        mean: f64,
        sigma_left: f64,
        sigma_right: f64,
    },
    Sigmoid {
        a1: f64,
        a2: f64,
        a3: f64,
        omega: f64,
        halfwidth: f64,
    },
    Crisp(f64),
}

/// A fuzzy number from one of the supported membership families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FuzzyRecord", into = "FuzzyRecord")]
pub struct FuzzyNumber {
    shape: Shape,
}

/// Serialized form: `{"family": "...", "params": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzyRecord {
    pub family: Family,
    pub params: Vec<f64>,
}

impl TryFrom<FuzzyRecord> for FuzzyNumber {
    type Error = FuzzyError;

    fn try_from(rec: FuzzyRecord) -> Result<Self, Self::Error> {
        FuzzyNumber::from_params(rec.family, &rec.params)
    }
}

impl From<FuzzyNumber> for FuzzyRecord {
    fn from(f: FuzzyNumber) -> Self {
        FuzzyRecord {
            family: f.family(),
            params: f.params(),
        }
    }
}

fn invalid(family: Family, reason: impl Into<String>) -> FuzzyError {
    FuzzyError::InvalidParams {
        family,
        reason: reason.into(),
    }
}

fn check_finite(family: Family, vals: &[f64]) -> Result<(), FuzzyError> {
    if vals.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(invalid(family, "parameters must be finite"))
    }
}

impl FuzzyNumber {
    /// Triangular number from absolute endpoints, `left <= core <= right`.
    pub fn triangular(left: f64, core: f64, right: f64) -> Result<Self, FuzzyError> {
        check_finite(Family::Triangular, &[left, core, right])?;
        if !(left <= core && core <= right) {
            return Err(invalid(Family::Triangular, "need left <= core <= right"));
        }
        Ok(FuzzyNumber {
            shape: Shape::Triangular { left, core, right },
        })
    }

    /// Triangular number from spreads around the core.
    pub fn triangular_spread(
        left_spread: f64,
        core: f64,
        right_spread: f64,
    ) -> Result<Self, FuzzyError> {
        if left_spread < 0.0 || right_spread < 0.0 {
            return Err(invalid(Family::Triangular, "spreads must be non-negative"));
        }
        Self::triangular(core - left_spread, core, core + right_spread)
    }

    /// Trapezoidal number with plateau `[x0, y0]`, left fuzziness `sigma`
    /// and right fuzziness `beta`.
    pub fn trapezoidal(x0: f64, y0: f64, sigma: f64, beta: f64) -> Result<Self, FuzzyError> {
        check_finite(Family::Trapezoidal, &[x0, y0, sigma, beta])?;
        if x0 > y0 {
            return Err(invalid(Family::Trapezoidal, "need x0 <= y0"));
        }
        if sigma <= 0.0 || beta <= 0.0 {
            return Err(invalid(Family::Trapezoidal, "fuzziness must be positive"));
        }
        Ok(FuzzyNumber {
            shape: Shape::Trapezoidal { x0, y0, sigma, beta },
        })
    }

    /// Two-sided Gaussian number truncated at three standard deviations.
    pub fn gaussian(mean: f64, sigma_left: f64, sigma_right: f64) -> Result<Self, FuzzyError> {
        check_finite(Family::Gaussian, &[mean, sigma_left, sigma_right])?;
        if sigma_left <= 0.0 || sigma_right <= 0.0 {
            return Err(invalid(Family::Gaussian, "standard deviations must be positive"));
        }
        Ok(FuzzyNumber {
            shape: Shape::Gaussian {
                mean,
                sigma_left,
                sigma_right,
            },
        })
    }

    /// Sigmoid number `(a1, a2, a3; omega)` on the logistic domain `[-a, a]`.
    pub fn sigmoid(a1: f64, a2: f64, a3: f64, omega: f64, halfwidth: f64) -> Result<Self, FuzzyError> {
        check_finite(Family::Sigmoid, &[a1, a2, a3, omega, halfwidth])?;
        if !(a1 <= a2 && a2 <= a3) {
            return Err(invalid(Family::Sigmoid, "need a1 <= a2 <= a3"));
        }
        if !(omega > 0.0 && omega <= 1.0) {
            return Err(invalid(Family::Sigmoid, "height must lie in (0, 1]"));
        }
        if halfwidth <= 0.0 {
            return Err(invalid(Family::Sigmoid, "domain half-width must be positive"));
        }
        Ok(FuzzyNumber {
            shape: Shape::Sigmoid {
                a1,
                a2,
                a3,
                omega,
                halfwidth,
            },
        })
    }

    pub fn crisp(value: f64) -> Result<Self, FuzzyError> {
        check_finite(Family::Crisp, &[value])?;
        Ok(FuzzyNumber {
            shape: Shape::Crisp(value),
        })
    }

    /// Builds a number from a family tag and its parameter vector, in the
    /// order returned by [`FuzzyNumber::params`].
    pub fn from_params(family: Family, params: &[f64]) -> Result<Self, FuzzyError> {
        if params.len() != family.arity() {
            return Err(FuzzyError::Arity {
                family,
                expected: family.arity(),
                got: params.len(),
            });
        }
        let p = params;
        match family {
            Family::Triangular => Self::triangular(p[0], p[1], p[2]),
            Family::Trapezoidal => Self::trapezoidal(p[0], p[1], p[2], p[3]),
            Family::Gaussian => Self::gaussian(p[0], p[1], p[2]),
            Family::Sigmoid => Self::sigmoid(p[0], p[1], p[2], p[3], p[4]),
            Family::Crisp => Self::crisp(p[0]),
        }
    }

    pub fn family(&self) -> Family {
        match self.shape {
            Shape::Triangular { .. } => Family::Triangular,
            Shape::Trapezoidal { .. } => Family::Trapezoidal,
            Shape::Gaussian { .. } => Family::Gaussian,
            Shape::Sigmoid { .. } => Family::Sigmoid,
            Shape::Crisp(_) => Family::Crisp,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match self.shape {
            Shape::Triangular { left, core, right } => vec![left, core, right],
            Shape::Trapezoidal { x0, y0, sigma, beta } => vec![x0, y0, sigma, beta],
            Shape::Gaussian {
                mean,
                sigma_left,
                sigma_right,
            } => vec![mean, sigma_left, sigma_right],
            Shape::Sigmoid {
                a1,
                a2,
                a3,
                omega,
                halfwidth,
            } => vec![a1, a2, a3, omega, halfwidth],
            Shape::Crisp(v) => vec![v],
        }
    }

    /// `(left, core, right)` for triangular numbers; a crisp value `v` is
    /// reported as `(v, v, v)`.
    pub fn as_triangle(&self) -> Option<(f64, f64, f64)> {
        match self.shape {
            Shape::Triangular { left, core, right } => Some((left, core, right)),
            Shape::Crisp(v) => Some((v, v, v)),
            _ => None,
        }
    }

    /// Highest membership grade attained: `omega` for sigmoids, 1 otherwise.
    pub fn height(&self) -> f64 {
        match self.shape {
            Shape::Sigmoid { omega, .. } => omega,
            _ => 1.0,
        }
    }

    /// Closed interval outside of which membership is zero.
    pub fn support(&self) -> (f64, f64) {
        match self.shape {
            Shape::Triangular { left, right, .. } => (left, right),
            Shape::Trapezoidal { x0, y0, sigma, beta } => (x0 - sigma, y0 + beta),
            Shape::Gaussian {
                mean,
                sigma_left,
                sigma_right,
            } => (mean - 3.0 * sigma_left, mean + 3.0 * sigma_right),
            Shape::Sigmoid { a1, a3, .. } => (a1, a3),
            Shape::Crisp(v) => (v, v),
        }
    }

    /// Membership grade of `x`.
    pub fn membership(&self, x: f64) -> f64 {
        match self.shape {
            Shape::Triangular { left, core, right } => {
                if x < left || x > right {
                    0.0
                } else if x == core {
                    1.0
                } else if x < core {
                    (x - left) / (core - left)
                } else {
                    (right - x) / (right - core)
                }
            }
            Shape::Trapezoidal { x0, y0, sigma, beta } => {
                if x < x0 - sigma || x > y0 + beta {
                    0.0
                } else if x < x0 {
                    (x - x0 + sigma) / sigma
                } else if x <= y0 {
                    1.0
                } else {
                    (y0 - x + beta) / beta
                }
            }
            Shape::Gaussian {
                mean,
                sigma_left,
                sigma_right,
            } => {
                if x <= mean - 3.0 * sigma_left || x >= mean + 3.0 * sigma_right {
                    0.0
                } else {
                    let s = if x < mean { sigma_left } else { sigma_right };
                    let d = x - mean;
                    (-(d * d) / (2.0 * s * s)).exp()
                }
            }
            Shape::Sigmoid {
                a1,
                a2,
                a3,
                omega,
                halfwidth: a,
            } => {
                if x < a1 || x > a3 {
                    return 0.0;
                }
                if x == a2 {
                    return omega;
                }
                let lo = logistic(-a);
                let span = logistic(a) - lo;
                let grade = if x < a2 {
                    let z = (x - (a1 + a2) / 2.0) * 2.0 * a / (a2 - a1);
                    (logistic(z) - lo) / span
                } else {
                    let z = (x - (a2 + a3) / 2.0) * 2.0 * a / (a3 - a2);
                    (logistic(a) - logistic(z)) / span
                };
                omega * grade.clamp(0.0, 1.0)
            }
            Shape::Crisp(v) => {
                if x == v {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// The α-cut `{x : membership(x) >= alpha}` as a closed interval.
    ///
    /// `alpha = 0` yields the support. Gaussian cuts below the truncation
    /// height are clipped to the ±3σ support; a sigmoid cut above its
    /// height is an error rather than an empty interval.
    pub fn alpha_cut(&self, alpha: f64) -> Result<AlphaCut, FuzzyError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(FuzzyError::AlphaOutOfRange(alpha));
        }
        let (lo, hi) = match self.shape {
            Shape::Triangular { left, core, right } => {
                ((core - left) * alpha + left, right - (right - core) * alpha)
            }
            Shape::Trapezoidal { x0, y0, sigma, beta } => {
                (x0 - sigma + sigma * alpha, y0 + beta - beta * alpha)
            }
            Shape::Gaussian {
                mean,
                sigma_left,
                sigma_right,
            } => {
                // exp(-9/2) is the grade at the truncation points
                if alpha <= (-4.5f64).exp() {
                    (mean - 3.0 * sigma_left, mean + 3.0 * sigma_right)
                } else {
                    let w = (-2.0 * alpha.ln()).sqrt();
                    (mean - sigma_left * w, mean + sigma_right * w)
                }
            }
            Shape::Sigmoid {
                a1,
                a2,
                a3,
                omega,
                halfwidth: a,
            } => {
                if alpha > omega {
                    return Err(FuzzyError::AlphaAboveHeight { alpha, omega });
                }
                let lo_l = logistic(-a);
                let span = logistic(a) - lo_l;
                let frac = alpha / omega;
                let lo = if alpha == 0.0 {
                    a1
                } else if frac >= 1.0 {
                    a2
                } else {
                    let z = logit(lo_l + frac * span);
                    ((a1 + a2) / 2.0 + z * (a2 - a1) / (2.0 * a)).clamp(a1, a2)
                };
                let hi = if alpha == 0.0 {
                    a3
                } else if frac >= 1.0 {
                    a2
                } else {
                    let z = logit(logistic(a) - frac * span);
                    ((a2 + a3) / 2.0 + z * (a3 - a2) / (2.0 * a)).clamp(a2, a3)
                };
                (lo, hi)
            }
            Shape::Crisp(v) => (v, v),
        };
        Ok(AlphaCut { alpha, lo, hi })
    }

    /// Crisp representative: the core, plateau midpoint, mean, peak or value.
    pub fn defuzzify(&self) -> f64 {
        match self.shape {
            Shape::Triangular { core, .. } => core,
            Shape::Trapezoidal { x0, y0, .. } => (x0 + y0) / 2.0,
            Shape::Gaussian { mean, .. } => mean,
            Shape::Sigmoid { a2, .. } => a2,
            Shape::Crisp(v) => v,
        }
    }

    /// Chebyshev distance between parameter vectors; `+inf` across families.
    pub fn distance(&self, other: &FuzzyNumber) -> f64 {
        if self.family() != other.family() {
            return f64::INFINITY;
        }
        self.params()
            .iter()
            .zip(other.params())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Same number with every location parameter moved by `delta`.
    pub fn shift(&self, delta: f64) -> FuzzyNumber {
        let shape = match self.shape {
            Shape::Triangular { left, core, right } => Shape::Triangular {
                left: left + delta,
                core: core + delta,
                right: right + delta,
            },
            Shape::Trapezoidal { x0, y0, sigma, beta } => Shape::Trapezoidal {
                x0: x0 + delta,
                y0: y0 + delta,
                sigma,
                beta,
            },
            Shape::Gaussian {
                mean,
                sigma_left,
                sigma_right,
            } => Shape::Gaussian {
                mean: mean + delta,
                sigma_left,
                sigma_right,
            },
            Shape::Sigmoid {
                a1,
                a2,
                a3,
                omega,
                halfwidth,
            } => Shape::Sigmoid {
                a1: a1 + delta,
                a2: a2 + delta,
                a3: a3 + delta,
                omega,
                halfwidth,
            },
            Shape::Crisp(v) => Shape::Crisp(v + delta),
        };
        FuzzyNumber { shape }
    }

    fn arith_operands(
        &self,
        other: &FuzzyNumber,
    ) -> Result<(Triple, Triple), FuzzyError> {
        match (self.as_triangle(), other.as_triangle()) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(FuzzyError::MixedFamilies(self.family(), other.family())),
        }
    }

    fn from_triangle(both_crisp: bool, (l, c, r): (f64, f64, f64)) -> FuzzyNumber {
        let shape = if both_crisp {
            Shape::Crisp(c)
        } else {
            Shape::Triangular {
                left: l,
                core: c,
                right: r,
            }
        };
        FuzzyNumber { shape }
    }

    /// Fuzzy addition; defined for triangular and crisp operands.
    pub fn try_add(&self, other: &FuzzyNumber) -> Result<FuzzyNumber, FuzzyError> {
        let ((al, ac, ar), (bl, bc, br)) = self.arith_operands(other)?;
        let crisp = self.family() == Family::Crisp && other.family() == Family::Crisp;
        Ok(Self::from_triangle(crisp, (al + bl, ac + bc, ar + br)))
    }

    /// Fuzzy subtraction. Not a group inverse: `a - a` has a nonzero spread.
    pub fn try_sub(&self, other: &FuzzyNumber) -> Result<FuzzyNumber, FuzzyError> {
        let ((al, ac, ar), (bl, bc, br)) = self.arith_operands(other)?;
        let crisp = self.family() == Family::Crisp && other.family() == Family::Crisp;
        Ok(Self::from_triangle(crisp, (al - br, ac - bc, ar - bl)))
    }

    /// Scalar multiple. Negative factors swap the endpoints; zero collapses
    /// to `Crisp(0)`.
    pub fn scale(&self, x: f64) -> Result<FuzzyNumber, FuzzyError> {
        let (l, c, r) = self
            .as_triangle()
            .ok_or(FuzzyError::Unsupported {
                op: "scalar multiplication",
                family: self.family(),
            })?;
        if x == 0.0 {
            return FuzzyNumber::crisp(0.0);
        }
        let tri = if x > 0.0 {
            (x * l, x * c, x * r)
        } else {
            (x * r, x * c, x * l)
        };
        Ok(Self::from_triangle(self.family() == Family::Crisp, tri))
    }

    /// `n`-th power of a positive triangular number via α-cuts.
    pub fn pow_n(&self, n: u32) -> Result<FuzzyPower, FuzzyError> {
        if n == 0 {
            return Err(FuzzyError::ZeroExponent);
        }
        match self.shape {
            Shape::Triangular { left, core, right } if left > 0.0 => Ok(FuzzyPower {
                left,
                core,
                right,
                n,
            }),
            _ => Err(FuzzyError::NonPositiveSupport),
        }
    }
}

impl fmt::Display for FuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family())?;
        for (i, p) in self.params().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// A closed interval `[lo, hi]` at membership level `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaCut {
    pub alpha: f64,
    pub lo: f64,
    pub hi: f64,
}

impl AlphaCut {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// The `n`-th power of a positive triangular number.
///
/// The result is not triangular; it is exposed through its membership
/// function and α-cuts. [`FuzzyPower::to_triangular_lossy`] gives a
/// triangular approximation with the same support and core.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FuzzyPower {
    left: f64,
    core: f64,
    right: f64,
    n: u32,
}

impl FuzzyPower {
    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn support(&self) -> (f64, f64) {
        (self.left.powi(self.n as i32), self.right.powi(self.n as i32))
    }

    pub fn core(&self) -> f64 {
        self.core.powi(self.n as i32)
    }

    pub fn alpha_cut(&self, alpha: f64) -> Result<AlphaCut, FuzzyError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(FuzzyError::AlphaOutOfRange(alpha));
        }
        let n = self.n as i32;
        let lo = ((self.core - self.left) * alpha + self.left).powi(n);
        let hi = (self.right - (self.right - self.core) * alpha).powi(n);
        Ok(AlphaCut { alpha, lo, hi })
    }

    pub fn membership(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        let peak = self.core();
        if x < lo || x > hi {
            return 0.0;
        }
        if x == peak {
            return 1.0;
        }
        let root = x.powf(1.0 / self.n as f64);
        let grade = if x < peak {
            (root - self.left) / (self.core - self.left)
        } else {
            (self.right - root) / (self.right - self.core)
        };
        grade.clamp(0.0, 1.0)
    }

    /// Lossy: replaces the curved flanks by straight lines.
    pub fn to_triangular_lossy(&self) -> FuzzyNumber {
        let (lo, hi) = self.support();
        FuzzyNumber {
            shape: Shape::Triangular {
                left: lo,
                core: self.core(),
                right: hi,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tri(l: f64, c: f64, r: f64) -> FuzzyNumber {
        FuzzyNumber::triangular(l, c, r).unwrap()
    }

    #[test]
    fn triangular_membership_examples() {
        let a = tri(1.0, 2.0, 3.0);
        assert_eq!(a.membership(2.0), 1.0);
        assert_eq!(a.membership(0.5), 0.0);
        assert_eq!(a.membership(1.5), 0.5);
    }

    #[test]
    fn spread_form_converts_to_endpoints() {
        let a = FuzzyNumber::triangular_spread(1.0, 2.0, 3.0).unwrap();
        assert_eq!(a.params(), vec![1.0, 2.0, 5.0]);
    }

    #[test]
    fn sigmoid_peaks_at_height() {
        let s = FuzzyNumber::sigmoid(0.0, 2.0, 5.0, 0.7, 4.0).unwrap();
        assert!((s.membership(2.0) - 0.7).abs() < 1e-15);
        assert_eq!(s.membership(0.0), 0.0);
        assert!(s.membership(5.0).abs() < 1e-15);
        assert!(matches!(
            s.alpha_cut(0.8),
            Err(FuzzyError::AlphaAboveHeight { .. })
        ));
    }

    #[test]
    fn gaussian_mean_and_truncation() {
        let g = FuzzyNumber::gaussian(0.0, 1.0, 1.0).unwrap();
        assert_eq!(g.membership(0.0), 1.0);
        assert_eq!(g.membership(3.0), 0.0);
        assert_eq!(g.membership(-3.0), 0.0);
        assert!(g.membership(2.99) > 0.0);
    }

    #[test]
    fn trapezoid_plateau() {
        let t = FuzzyNumber::trapezoidal(2.0, 4.0, 1.0, 2.0).unwrap();
        assert_eq!(t.membership(3.0), 1.0);
        assert_eq!(t.membership(1.5), 0.5);
        assert_eq!(t.membership(5.0), 0.5);
        assert_eq!(t.defuzzify(), 3.0);
    }

    #[test]
    fn triangular_alpha_cuts() {
        let a = tri(1.0, 2.0, 5.0);
        let c0 = a.alpha_cut(0.0).unwrap();
        assert_eq!((c0.lo, c0.hi), (1.0, 5.0));
        let c1 = a.alpha_cut(1.0).unwrap();
        assert_eq!((c1.lo, c1.hi), (2.0, 2.0));
        let half = a.alpha_cut(0.5).unwrap();
        assert_eq!((half.lo, half.hi), (1.5, 3.5));
        assert!(a.alpha_cut(1.5).is_err());
        assert!(a.alpha_cut(-0.1).is_err());
    }

    #[test]
    fn addition_examples() {
        let s = tri(1.0, 2.0, 3.0).try_add(&tri(2.0, 3.0, 4.0)).unwrap();
        assert_eq!(s.params(), vec![3.0, 5.0, 7.0]);
        let s = tri(0.0, 1.0, 2.0).try_add(&tri(0.0, 1.0, 2.0)).unwrap();
        assert_eq!(s.params(), vec![0.0, 2.0, 4.0]);
        let a = tri(1.0, 2.0, 3.0);
        assert_eq!(a.try_add(&FuzzyNumber::crisp(0.0).unwrap()).unwrap(), a);
    }

    #[test]
    fn subtraction_examples() {
        let a = tri(1.0, 2.0, 3.0);
        assert_eq!(a.try_sub(&a).unwrap().params(), vec![-2.0, 0.0, 2.0]);
        assert_eq!(a.try_sub(&FuzzyNumber::crisp(0.0).unwrap()).unwrap(), a);
        let d = tri(3.0, 5.0, 7.0).try_sub(&a).unwrap();
        assert_eq!(d.params(), vec![0.0, 3.0, 6.0]);
    }

    #[test]
    fn scalar_examples() {
        let a = tri(1.0, 2.0, 3.0);
        assert_eq!(a.scale(2.0).unwrap().params(), vec![2.0, 4.0, 6.0]);
        assert_eq!(a.scale(-1.0).unwrap().params(), vec![-3.0, -2.0, -1.0]);
        assert_eq!(a.scale(1.0).unwrap(), a);
        assert_eq!(a.scale(0.0).unwrap(), FuzzyNumber::crisp(0.0).unwrap());
    }

    #[test]
    fn mixed_family_arithmetic_rejected() {
        let a = tri(1.0, 2.0, 3.0);
        let g = FuzzyNumber::gaussian(0.0, 1.0, 1.0).unwrap();
        assert!(matches!(a.try_add(&g), Err(FuzzyError::MixedFamilies(..))));
        assert!(a.try_sub(&g).is_err());
        assert!(g.scale(2.0).is_err());
    }

    #[test]
    fn power_examples() {
        let p = tri(1.0, 2.0, 4.0).pow_n(2).unwrap();
        assert_eq!(p.membership(4.0), 1.0);
        assert_eq!(p.membership(1.0), 0.0);
        assert!((p.membership(2.25) - 0.5).abs() < 1e-15);
        assert_eq!(p.support(), (1.0, 16.0));
        assert!(tri(0.0, 1.0, 2.0).pow_n(2).is_err());
        assert!(matches!(
            tri(1.0, 2.0, 3.0).pow_n(0),
            Err(FuzzyError::ZeroExponent)
        ));
        let approx = p.to_triangular_lossy();
        assert_eq!(approx.params(), vec![1.0, 4.0, 16.0]);
    }

    #[test]
    fn distance_examples() {
        let a = tri(1.0, 2.0, 3.0);
        assert_eq!(a.distance(&a), 0.0);
        assert_eq!(a.distance(&tri(1.0, 2.5, 3.0)), 0.5);
        let g = FuzzyNumber::gaussian(2.0, 1.0, 1.0).unwrap();
        assert_eq!(a.distance(&g), f64::INFINITY);
    }

    #[test]
    fn defuzzify_examples() {
        assert_eq!(tri(1.0, 2.0, 3.0).defuzzify(), 2.0);
        assert_eq!(FuzzyNumber::crisp(7.0).unwrap().defuzzify(), 7.0);
        let s = FuzzyNumber::sigmoid(0.0, 2.0, 5.0, 1.0, 3.0).unwrap();
        assert_eq!(s.defuzzify(), 2.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(FuzzyNumber::triangular(3.0, 2.0, 4.0).is_err());
        assert!(FuzzyNumber::trapezoidal(4.0, 2.0, 1.0, 1.0).is_err());
        assert!(FuzzyNumber::trapezoidal(2.0, 4.0, 0.0, 1.0).is_err());
        assert!(FuzzyNumber::gaussian(0.0, -1.0, 1.0).is_err());
        assert!(FuzzyNumber::sigmoid(0.0, 1.0, 2.0, 1.5, 1.0).is_err());
        assert!(FuzzyNumber::sigmoid(0.0, 1.0, 2.0, 0.5, 0.0).is_err());
        assert!(FuzzyNumber::crisp(f64::NAN).is_err());
        assert!(matches!(
            FuzzyNumber::from_params(Family::Gaussian, &[1.0]),
            Err(FuzzyError::Arity { .. })
        ));
    }

    #[test]
    fn serde_shape() {
        let a = tri(1.0, 2.0, 3.5);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"family":"triangular","params":[1.0,2.0,3.5]}"#);
        let back: FuzzyNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let bad = r#"{"family":"triangular","params":[3.0,2.0,1.0]}"#;
        assert!(serde_json::from_str::<FuzzyNumber>(bad).is_err());
    }

    fn any_number() -> impl Strategy<Value = FuzzyNumber> {
        let loc = -50.0..50.0f64;
        let w = 0.01..10.0f64;
        prop_oneof![
            (loc.clone(), w.clone(), w.clone())
                .prop_map(|(c, l, r)| FuzzyNumber::triangular(c - l, c, c + r).unwrap()),
            (loc.clone(), 0.0..5.0f64, w.clone(), w.clone())
                .prop_map(|(x, p, s, b)| FuzzyNumber::trapezoidal(x, x + p, s, b).unwrap()),
            (loc.clone(), w.clone(), w.clone())
                .prop_map(|(m, l, r)| FuzzyNumber::gaussian(m, l, r).unwrap()),
            (loc, w.clone(), w, 0.05..=1.0f64, 0.5..8.0f64).prop_map(|(c, l, r, om, a)| {
                FuzzyNumber::sigmoid(c - l, c, c + r, om, a).unwrap()
            }),
        ]
    }

    proptest! {
        #[test]
        fn membership_in_unit_range(f in any_number(), t in -0.2..1.2f64) {
            let (lo, hi) = f.support();
            let x = lo + t * (hi - lo);
            let m = f.membership(x);
            prop_assert!((0.0..=1.0).contains(&m));
            prop_assert!(m <= f.height() + 1e-12);
        }

        #[test]
        fn alpha_cut_matches_membership(f in any_number(), a in 0.001..1.0f64, t in -0.1..1.1f64) {
            let alpha = a * f.height();
            let cut = f.alpha_cut(alpha).unwrap();
            let (lo, hi) = f.support();
            let x = lo + t * (hi - lo);
            // Gaussian cuts below the truncation height are closed over an open support
            prop_assume!(!(f.family() == Family::Gaussian && (x == lo || x == hi)));
            let inside = cut.contains(x);
            let m = f.membership(x);
            if inside {
                prop_assert!(m >= alpha - 1e-9, "x={x} in cut but m={m} < {alpha}");
            } else {
                prop_assert!(m < alpha + 1e-9, "x={x} outside cut but m={m} >= {alpha}");
            }
        }

        #[test]
        fn cuts_are_nested(f in any_number(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
            let (a1, a2) = if a <= b { (a, b) } else { (b, a) };
            let h = f.height();
            let c1 = f.alpha_cut(a1 * h).unwrap();
            let c2 = f.alpha_cut(a2 * h).unwrap();
            prop_assert!(c1.lo <= c2.lo + 1e-12 && c2.hi <= c1.hi + 1e-12);
            prop_assert!(c2.lo <= c2.hi + 1e-12);
        }

        #[test]
        fn addition_support_law(
            (al, ac, ar) in (-20.0..20.0f64, 0.0..5.0f64, 0.0..5.0f64),
            (bl, bc, br) in (-20.0..20.0f64, 0.0..5.0f64, 0.0..5.0f64),
        ) {
            let a = tri(al, al + ac, al + ac + ar);
            let b = tri(bl, bl + bc, bl + bc + br);
            let s = a.try_add(&b).unwrap();
            prop_assert_eq!(s.support(), (a.support().0 + b.support().0, a.support().1 + b.support().1));
        }

        #[test]
        fn scaling_distributes(
            x in -4i32..4,
            (al, ac, ar) in (-8i32..8, 0i32..4, 0i32..4),
            (bl, bc, br) in (-8i32..8, 0i32..4, 0i32..4),
        ) {
            // small integers keep every product exact in f64
            let a = tri(al as f64, (al + ac) as f64, (al + ac + ar) as f64);
            let b = tri(bl as f64, (bl + bc) as f64, (bl + bc + br) as f64);
            let x = x as f64;
            let lhs = a.try_add(&b).unwrap().scale(x).unwrap();
            let rhs = a.scale(x).unwrap().try_add(&b.scale(x).unwrap()).unwrap();
            prop_assert_eq!(lhs.as_triangle(), rhs.as_triangle());
        }

        #[test]
        fn distance_symmetric(f in any_number(), g in any_number()) {
            prop_assert_eq!(f.distance(&g), g.distance(&f));
            prop_assert_eq!(f.distance(&f), 0.0);
            if f.distance(&g) == 0.0 {
                prop_assert_eq!(f.params(), g.params());
            }
        }
    }
}
