use crate::fuzzy_number::{AlphaCut, FuzzyError, FuzzyNumber};

use super::FieldError;

pub const DEFAULT_ALPHA_LEVELS: usize = 33;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    fn add(self, o: Interval) -> Interval {
        Interval {
            lo: self.lo + o.lo,
            hi: self.hi + o.hi,
        }
    }

    fn sub(self, o: Interval) -> Interval {
        Interval {
            lo: self.lo - o.hi,
            hi: self.hi - o.lo,
        }
    }

    fn mul(self, o: Interval) -> Interval {
        let p = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        Interval {
            lo: p.iter().copied().fold(f64::INFINITY, f64::min),
            hi: p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn scale(self, s: f64) -> Interval {
        if s >= 0.0 {
            Interval {
                lo: self.lo * s,
                hi: self.hi * s,
            }
        } else {
            Interval {
                lo: self.hi * s,
                hi: self.lo * s,
            }
        }
    }
}

fn cut(f: &FuzzyNumber, alpha: f64) -> Interval {
    let (l, c, r) = f.as_triangle().expect("checked triangular or crisp");
    Interval {
        lo: (c - l) * alpha + l,
        hi: r - (r - c) * alpha,
    }
}

/// A fuzzy quantity known through its α-cuts on a fixed grid.
///
/// Membership and cuts between grid levels are interpolated linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyProfile {
    levels: Vec<AlphaCut>,
}

impl FuzzyProfile {
    /// Cuts at the grid levels, ascending in alpha from 0 to 1.
    pub fn levels(&self) -> &[AlphaCut] {
        &self.levels
    }

    /// Midpoint of the α = 1 cut.
    pub fn core(&self) -> f64 {
        let top = self.levels.last().expect("at least two levels");
        (top.lo + top.hi) / 2.0
    }

    pub fn support(&self) -> (f64, f64) {
        (self.levels[0].lo, self.levels[0].hi)
    }

    pub fn alpha_cut(&self, alpha: f64) -> Result<AlphaCut, FuzzyError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(FuzzyError::AlphaOutOfRange(alpha));
        }
        let i = self
            .levels
            .windows(2)
            .position(|w| alpha <= w[1].alpha)
            .unwrap_or(self.levels.len() - 2);
        let (a, b) = (self.levels[i], self.levels[i + 1]);
        let t = (alpha - a.alpha) / (b.alpha - a.alpha);
        Ok(AlphaCut {
            alpha,
            lo: a.lo + t * (b.lo - a.lo),
            hi: a.hi + t * (b.hi - a.hi),
        })
    }

    pub fn membership(&self, x: f64) -> f64 {
        let Some(i) = self.levels.iter().rposition(|c| c.contains(x)) else {
            return 0.0;
        };
        if i + 1 == self.levels.len() {
            return 1.0;
        }
        let (a, b) = (self.levels[i], self.levels[i + 1]);
        let frac = if x < b.lo {
            (x - a.lo) / (b.lo - a.lo)
        } else {
            (a.hi - x) / (a.hi - b.hi)
        };
        a.alpha + frac.clamp(0.0, 1.0) * (b.alpha - a.alpha)
    }
}

/// Real-valued Lagrange evaluation with fuzzy nodes, values and argument.
///
/// Each basis factor is `(x - x_k) / (c_j - c_k)`: the numerator is fuzzy
/// (interval subtraction per α level) while the denominator uses the
/// defuzzified cores `c_j`, `c_k`. Inputs must be triangular or crisp.
pub fn fuzzy_lagrange_real(
    points: &[(FuzzyNumber, FuzzyNumber)],
    x: &FuzzyNumber,
    alpha_levels: usize,
) -> Result<FuzzyProfile, FieldError> {
    if alpha_levels < 2 {
        return Err(FieldError::AlphaGrid(alpha_levels));
    }
    if points.is_empty() {
        return Err(FieldError::NoPoints);
    }
    for f in points.iter().flat_map(|(a, b)| [a, b]).chain([x]) {
        if f.as_triangle().is_none() {
            return Err(FieldError::Fuzzy(FuzzyError::Unsupported {
                op: "fuzzy Lagrange evaluation",
                family: f.family(),
            }));
        }
    }
    let cores: Vec<f64> = points.iter().map(|(px, _)| px.defuzzify()).collect();
    for (i, a) in cores.iter().enumerate() {
        if cores[..i].contains(a) {
            return Err(FieldError::CoincidentCores(*a));
        }
    }

    let levels = (0..alpha_levels)
        .map(|step| {
            let alpha = step as f64 / (alpha_levels - 1) as f64;
            let xa = cut(x, alpha);
            let total = points
                .iter()
                .enumerate()
                .fold(Interval::point(0.0), |acc, (j, (_, yj))| {
                    let basis = points
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .fold(Interval::point(1.0), |l, (k, (xk, _))| {
                            let num = xa.sub(cut(xk, alpha));
                            l.mul(num.scale(1.0 / (cores[j] - cores[k])))
                        });
                    acc.add(basis.mul(cut(yj, alpha)))
                });
            AlphaCut {
                alpha,
                lo: total.lo,
                hi: total.hi,
            }
        })
        .collect();
    Ok(FuzzyProfile { levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(l: f64, c: f64, r: f64) -> FuzzyNumber {
        FuzzyNumber::triangular(l, c, r).unwrap()
    }

    fn crisp(v: f64) -> FuzzyNumber {
        FuzzyNumber::crisp(v).unwrap()
    }

    fn real_lagrange(nodes: &[(f64, f64)], x: f64) -> f64 {
        nodes
            .iter()
            .enumerate()
            .map(|(j, &(xj, yj))| {
                yj * nodes
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &(xk, _))| (x - xk) / (xj - xk))
                    .product::<f64>()
            })
            .sum()
    }

    #[test]
    fn crisp_inputs_reduce_to_real_lagrange() {
        let nodes = [(1.0, 2.0), (2.0, -1.0), (4.0, 5.0)];
        let pts: Vec<_> = nodes.iter().map(|&(x, y)| (crisp(x), crisp(y))).collect();
        let prof = fuzzy_lagrange_real(&pts, &crisp(3.0), DEFAULT_ALPHA_LEVELS).unwrap();
        let want = real_lagrange(&nodes, 3.0);
        assert!((prof.core() - want).abs() < 1e-12);
        assert_eq!(prof.support(), (prof.core(), prof.core()));
    }

    #[test]
    fn single_point_returns_its_value() {
        let y = tri(4.0, 5.0, 7.0);
        let prof = fuzzy_lagrange_real(&[(tri(0.0, 1.0, 2.0), y)], &tri(8.0, 9.0, 9.5), 5).unwrap();
        for c in prof.levels() {
            let want = y.alpha_cut(c.alpha).unwrap();
            assert!((c.lo - want.lo).abs() < 1e-12 && (c.hi - want.hi).abs() < 1e-12);
        }
    }

    #[test]
    fn midpoint_core_is_mean_of_values() {
        let pts = [
            (tri(0.5, 1.0, 1.5), tri(9.0, 10.0, 11.0)),
            (tri(2.5, 3.0, 3.5), tri(19.0, 20.0, 21.0)),
        ];
        let prof = fuzzy_lagrange_real(&pts, &tri(1.5, 2.0, 2.5), DEFAULT_ALPHA_LEVELS).unwrap();
        assert!((prof.core() - 15.0).abs() < 1e-12);
        assert_eq!(prof.membership(15.0), 1.0);
        let (lo, hi) = prof.support();
        assert!(lo < 15.0 && hi > 15.0);
    }

    #[test]
    fn cores_match_real_lagrange() {
        let mut rng = crate::rng::DetRng::from_seed(5);
        for _ in 0..200 {
            let n = 1 + rng.below(6) as usize;
            let mut nodes = Vec::new();
            let mut pts = Vec::new();
            for i in 0..n {
                let xc = i as f64 * 1.5 + rng.unit_f64();
                let yc = rng.unit_f64() * 20.0 - 10.0;
                nodes.push((xc, yc));
                let s = rng.unit_f64();
                pts.push((tri(xc - s, xc, xc + s), tri(yc - 1.0, yc, yc + 2.0 * s)));
            }
            let xq = rng.unit_f64() * 8.0;
            let prof = fuzzy_lagrange_real(&pts, &tri(xq - 0.2, xq, xq + 0.1), 9).unwrap();
            let want = real_lagrange(&nodes, xq);
            assert!((prof.core() - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn profile_cuts_are_nested() {
        let pts = [
            (tri(0.0, 1.0, 1.5), tri(1.0, 2.0, 2.5)),
            (tri(2.0, 3.0, 4.0), tri(5.0, 6.0, 8.0)),
            (tri(4.5, 5.0, 5.5), tri(-1.0, 0.0, 1.0)),
        ];
        let prof = fuzzy_lagrange_real(&pts, &tri(3.5, 4.0, 4.5), 17).unwrap();
        for w in prof.levels().windows(2) {
            assert!(w[0].lo <= w[1].lo + 1e-12 && w[1].hi <= w[0].hi + 1e-12);
        }
        let mid = prof.alpha_cut(0.5).unwrap();
        assert!(prof.membership(mid.lo) >= 0.5 - 1e-9);
    }

    #[test]
    fn errors() {
        let p = (tri(0.0, 1.0, 2.0), tri(0.0, 1.0, 2.0));
        let q = (tri(0.5, 1.0, 3.0), tri(0.0, 1.0, 2.0));
        assert!(matches!(
            fuzzy_lagrange_real(&[p, q], &crisp(0.0), 5),
            Err(FieldError::CoincidentCores(_))
        ));
        assert!(matches!(
            fuzzy_lagrange_real(&[p], &crisp(0.0), 1),
            Err(FieldError::AlphaGrid(1))
        ));
        let g = FuzzyNumber::gaussian(1.0, 1.0, 1.0).unwrap();
        assert!(fuzzy_lagrange_real(&[(g, g)], &crisp(0.0), 5).is_err());
    }
}
