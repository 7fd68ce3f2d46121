//! Arities and stage widths outgrow every machine integer after a handful of
//! stages. On the wire they are plain JSON numbers while they fit in a `u64`
//! and decimal strings afterwards.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
    match value.to_u64() {
        Some(small) => serializer.serialize_u64(small),
        None => serializer.serialize_str(&value.to_string()),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigUint, D::Error> {
    deserializer.deserialize_any(BigUintVisitor)
}

struct BigUintVisitor;

impl<'de> Visitor<'de> for BigUintVisitor {
    type Value = BigUint;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a non-negative integer or a decimal string")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigUint, E> {
        Ok(BigUint::from(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigUint, E> {
        u64::try_from(v)
            .map(BigUint::from)
            .map_err(|_| E::custom("negative integer"))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigUint, E> {
        if v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit()) {
            return Err(E::custom("expected a decimal string"));
        }
        // Reject forms that would not re-serialise to the same bytes.
        if v.len() > 1 && v.starts_with('0') {
            return Err(E::custom("leading zeros are not allowed"));
        }
        let value = BigUint::from_str(v).map_err(E::custom)?;
        if value.to_u64().is_some() {
            return Err(E::custom("values that fit in u64 must be written as numbers"));
        }
        Ok(value)
    }

    fn visit_string<E: de::Error>(self, v: String) -> Result<BigUint, E> {
        self.visit_str(&v)
    }
}
