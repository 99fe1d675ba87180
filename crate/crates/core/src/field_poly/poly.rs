use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{FieldError, FieldParams};

/// Polynomial over `F_q`, coefficients stored lowest degree first
/// (`coeffs[j]` multiplies `x^j`). Leading zeros are kept, so the length
/// is the coefficient count `k` and the degree bound is `k - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<u64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<u64>, field: &FieldParams) -> Result<Self, FieldError> {
        if coeffs.is_empty() {
            return Err(FieldError::EmptyPolynomial);
        }
        for &c in &coeffs {
            field.check(c)?;
        }
        Ok(Polynomial { coeffs })
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Number of coefficients `k`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation mod `q`.
    pub fn eval(&self, x: u64, field: &FieldParams) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }
}

/// The unique polynomial with `points.len()` coefficients through `points`.
pub fn lagrange_interpolate(
    points: &[(u64, u64)],
    field: &FieldParams,
) -> Result<Polynomial, FieldError> {
    if points.is_empty() {
        return Err(FieldError::NoPoints);
    }
    let mut seen = HashSet::with_capacity(points.len());
    for &(x, y) in points {
        field.check(x)?;
        field.check(y)?;
        if !seen.insert(x) {
            return Err(FieldError::DuplicateX(x));
        }
    }
    let n = points.len();

    // master(x) = prod (x - x_i), degree n, lowest first
    let mut master = vec![0u64; n + 1];
    master[0] = 1;
    for (i, &(xi, _)) in points.iter().enumerate() {
        let neg = field.neg(xi);
        for j in (1..=i + 1).rev() {
            master[j] = field.add(master[j - 1], field.mul(master[j], neg));
        }
        master[0] = field.mul(master[0], neg);
    }

    let mut coeffs = vec![0u64; n];
    let mut basis = vec![0u64; n];
    for (j, &(xj, yj)) in points.iter().enumerate() {
        // synthetic division of master by (x - x_j)
        let mut carry = 0;
        for d in (0..n).rev() {
            carry = field.add(master[d + 1], field.mul(carry, xj));
            basis[d] = carry;
        }
        let denom = points
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .fold(1, |acc, (_, &(xi, _))| field.mul(acc, field.sub(xj, xi)));
        let scale = field.mul(yj, field.inv(denom));
        for (c, &b) in coeffs.iter_mut().zip(&basis) {
            *c = field.add(*c, field.mul(scale, b));
        }
    }
    Ok(Polynomial { coeffs })
}
