//! Exact tools for the equation `(x+1)^2 + (x+2)^2 + ... + (x+d)^2 = y^n`
//! with `2 <= d <= 10`.
//!
//! The crate checks the complete solution list for this range in two
//! independent ways: elimination procedures that emit re-checkable
//! certificates ([`filters`], [`pell`], [`lehmer`]) and a brute-force
//! search ([`search`]). [`pipeline`] assembles both into a
//! [`pipeline::VerificationReport`].

pub mod arith;
pub mod cli;
pub mod equation;
pub mod filters;
pub mod lehmer;
pub mod par;
pub mod pell;
pub mod pipeline;
pub mod search;

pub use arith::{Effort, Integer};
pub use equation::{consecutive_square_sum, Solution};
pub use filters::EliminationCertificate;
pub use pipeline::{verify_theorem, VerificationReport};

/// Serde adapters writing big integers as decimal strings.
pub(crate) mod decimal {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::arith::Integer;

    pub fn serialize<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        use crate::arith::Integer;

        pub fn serialize<S: Serializer>(v: &Option<Integer>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => s.collect_str(x),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Integer>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| s.parse().map_err(serde::de::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use serde::{ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        use crate::arith::Integer;

        pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| s.parse().map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
