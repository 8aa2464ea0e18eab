//! Exact computations with vector bundles on `P^n` given by two-term
//! resolutions `0 -> L1 -> L0 -> E -> 0`: cohomology tables, Chern classes,
//! global generation and splitting checks, matrices of forms, the Serre
//! construction and liaison of codimension-2 schemes, and a catalog of the
//! globally generated bundles with `c_1 = 3` together with a verifier.
//!
//! Everything is exact: integers are arbitrary precision and linear algebra
//! is over the rationals.

pub mod binomial;
pub mod catalog;
pub mod chern;
pub mod cohomology;
pub mod error;
pub mod forms;
pub mod grammar;
pub mod liaison;
pub mod linalg;
pub mod presentation;

pub use chern::{chern_atom, chern_monad, chern_sum, ChernPoly};
pub use cohomology::{chi_sum, h_bott, h_line, h_sum, Ambient, BundleAtom, FreeSum};
pub use error::{Error, Result};
pub use presentation::TwoTermPresentation;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// JSON number when the value fits in an `i64`, decimal string otherwise.
pub fn json_int(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::String(v.to_string()),
    }
}

pub(crate) fn serialize_bigint<S: serde::Serializer>(
    v: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&json_int(v), s)
}
