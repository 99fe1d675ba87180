//! Exact arithmetic over prime fields and the key/polynomial layer.
//!
//! Vault cores live in `F_q` and all cryptographic math (evaluation,
//! interpolation, checksum) is exact mod `q`. Fuzziness is carried as
//! family and spread metadata around the cores. [`fuzzy_lagrange_real`]
//! separately evaluates the Lagrange form over the reals with fuzzy
//! inputs, via α-cut interval arithmetic.

mod crc;
mod field;
mod fuzzy_lagrange;
mod key;
mod poly;

pub use crc::{crc16, CRC_VARIANT};
pub use field::{is_prime, next_prime, FieldParams};
pub use fuzzy_lagrange::{fuzzy_lagrange_real, FuzzyProfile, DEFAULT_ALPHA_LEVELS};
pub use key::{decode_key, encode_key, IntegrityFailure, KeyMaterial, MIN_CHUNK_BITS};
pub use poly::{lagrange_interpolate, Polynomial};

use thiserror::Error;

use crate::fuzzy_number::FuzzyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {0} exceeds 2^63")]
    TooLarge(u64),
    #[error("value {value} is not a field element mod {q}")]
    NotElement { value: u64, q: u64 },
    #[error("polynomial needs at least one coefficient")]
    EmptyPolynomial,
    #[error("duplicate x coordinate {0}")]
    DuplicateX(u64),
    #[error("no points to interpolate")]
    NoPoints,
    #[error("key must not be empty")]
    EmptyKey,
    #[error("capacity exceeded: {coeffs} coefficients of {bits} bits hold {have} bits, need {need}")]
    Capacity {
        coeffs: usize,
        bits: u32,
        have: u64,
        need: u64,
    },
    #[error("field size {q} gives {bits}-bit coefficient chunks; key-carrying vaults need at least {min}")]
    FieldTooSmall { q: u64, bits: u32, min: u32 },
    #[error("defuzzified x cores coincide at {0}")]
    CoincidentCores(f64),
    #[error("alpha grid needs at least 2 levels, got {0}")]
    AlphaGrid(usize),
    #[error("fuzzy Lagrange evaluation takes triangular or crisp inputs: {0}")]
    Fuzzy(#[from] FuzzyError),
}
