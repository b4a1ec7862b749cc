//! JSON forms for big integers: numbers when they fit in `i64`, decimal strings otherwise.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::Serializer;

pub fn big_int<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

pub fn big_uint<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match x.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

pub fn big_ints<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    struct One<'a>(&'a BigInt);
    impl serde::Serialize for One<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            big_int(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&One(x))?;
    }
    seq.end()
}

/// An integer that serializes as a JSON number when it fits in `i64`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(untagged)]
pub enum Num {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for Num {
    fn from(x: &BigInt) -> Self {
        x.to_i64().map_or_else(|| Num::Big(x.to_string()), Num::Small)
    }
}
