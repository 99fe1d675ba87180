use serde::{Deserialize, Serialize};

use super::FieldError;

/// A prime field `F_q`. Elements are `u64` values in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldParams {
    q: u64,
}

impl TryFrom<u64> for FieldParams {
    type Error = FieldError;

    fn try_from(q: u64) -> Result<Self, Self::Error> {
        FieldParams::new(q)
    }
}

impl From<FieldParams> for u64 {
    fn from(f: FieldParams) -> u64 {
        f.q
    }
}

impl FieldParams {
    /// Checks primality. `q` must stay below 2^63 so sums never overflow.
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if q >= 1 << 63 {
            return Err(FieldError::TooLarge(q));
        }
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        Ok(FieldParams { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `floor(log2 q)`: how many key bits one coefficient can carry.
    pub fn chunk_bits(&self) -> u32 {
        63 - self.q.leading_zeros()
    }

    pub fn check(&self, value: u64) -> Result<u64, FieldError> {
        if value < self.q {
            Ok(value)
        } else {
            Err(FieldError::NotElement { value, q: self.q })
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.q)
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod(base, exp, self.q)
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.q), "zero has no inverse");
        self.pow(a, self.q - 2)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases suffice for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(mut n: u64) -> u64 {
    while !is_prime(n) {
        n += 1;
    }
    n
}
