//! Serde helpers: arbitrary-precision integers are serialized as decimal
//! strings so JSON consumers never face precision loss.

use num_bigint::{BigInt, BigUint};
use serde::Serializer;

pub fn biguint_as_string<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn bigint_as_string<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn opt_bigint_pair_as_strings<S: Serializer>(
    v: &Option<(BigInt, BigInt)>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some((a, b)) => s.serialize_some(&[a.to_string(), b.to_string()]),
    }
}
