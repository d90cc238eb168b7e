//! Benchmark fixtures.

use std::collections::BTreeMap;

use ramsey_core::certificates::{construct, WitnessCertificate};

pub fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
    kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

/// The unverified certificate for a catalogued construction.
pub fn built(theorem: &str, kv: &[(&str, &str)]) -> WitnessCertificate {
    construct(theorem, &params(kv)).expect("fixture builds")
}
