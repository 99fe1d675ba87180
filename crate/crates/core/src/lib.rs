//! Fuzzy-fuzzy vault: key binding over a prime field where every vault point
//! is a fuzzy number and some chaff lies on the secret polynomial under a
//! foreign membership family.
//!
//! ```
//! use ffvault::multi_fuzzy_set::{FamilyTemplate, MultiFuzzySet};
//! use ffvault::vault::{fuzzy_lock, fuzzy_unlock, LockParams};
//!
//! let q = 65537;
//! let field = MultiFuzzySet::partition_field(
//!     q,
//!     &[32768, 32769],
//!     vec![FamilyTemplate::triangular(1.0, 1.0)?, FamilyTemplate::gaussian(0.5, 0.5)?],
//! )?;
//! let groups = vec![((10..22).collect(), FamilyTemplate::triangular(1.0, 1.0)?)];
//! let locking = MultiFuzzySet::build_locking_set(&field, groups.clone())?;
//! let (vault, _) = fuzzy_lock(b"fourteen bytes", &locking, &field, &LockParams::new(0, 8, 120))?;
//!
//! let unlocking = MultiFuzzySet::build_unlocking_set(q, groups)?;
//! let out = fuzzy_unlock(&vault, &unlocking, 0, 0.25, 14, 1000)?;
//! assert_eq!(out.key.as_deref(), Some(&b"fourteen bytes"[..]));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! Modules, bottom up: [`fuzzy_number`], [`multi_fuzzy_set`],
//! [`field_poly`], [`vault`], [`security`], [`minutiae`]. [`selftest`] backs
//! the `ffvault selftest` command.

pub mod field_poly;
pub mod fuzzy_number;
pub mod multi_fuzzy_set;
pub mod rng;
pub mod vault;
pub mod security;
pub mod minutiae;
pub mod selftest;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fuzzy_numbers.md")]
    mod fuzzy_numbers {}
    #[doc = include_str!("../../../book/src/multi_fuzzy_sets.md")]
    mod multi_fuzzy_sets {}
    #[doc = include_str!("../../../book/src/field.md")]
    mod field {}
    #[doc = include_str!("../../../book/src/vault.md")]
    mod vault {}
    #[doc = include_str!("../../../book/src/security.md")]
    mod security {}
    #[doc = include_str!("../../../book/src/minutiae.md")]
    mod minutiae {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
