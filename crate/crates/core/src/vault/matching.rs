use crate::fuzzy_number::FuzzyNumber;

use super::{Vault, VaultPoint};

/// Pairs each probe with its nearest vault point and keeps the pairs within
/// `delta`. Probes are taken in ascending core order and a vault point can
/// be claimed only once. Returns `(x, y)` cores of the claimed points.
pub fn match_points(vault: &Vault, probes: &[FuzzyNumber], delta: f64) -> Vec<(u64, u64)> {
    let mut order: Vec<&FuzzyNumber> = probes.iter().collect();
    order.sort_by(|a, b| a.defuzzify().total_cmp(&b.defuzzify()));

    let points = vault.points();
    let mut claimed = vec![false; points.len()];
    let mut out = Vec::new();
    for probe in order {
        let best = points
            .iter()
            .enumerate()
            .map(|(i, pt)| (probe.distance(&pt.x), pt.x_core(), i))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let Some((d, _, i)) = best else { break };
        if d <= delta && !claimed[i] {
            claimed[i] = true;
            let pt: &VaultPoint = &points[i];
            out.push((pt.x_core(), pt.y_core()));
        }
    }
    out
}
