//! Witness certificates: a JSON document recording how a witness was built,
//! which check it passed, and enough fingerprints to notice when either the
//! encodings or the trace have drifted.
//!
//! Objects and morphisms are stored as canonical encodings in lowercase hex
//! next to a human-readable rendering; only the hex is read back.

pub mod catalog;
pub mod registry;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::category::{Category, Functor, Word};
use crate::constructions::{Provenance, Stage};
use crate::engine::{check_degree_at, check_fp_witness, check_p_witness, FpInstance, SearchBudget, Verdict};
use crate::error::{Error, Result};

pub use catalog::{construct, THEOREMS};
pub use registry::{category_of, default_letter, dispatch, FunctorSpec, WordVisitor};

pub const SCHEMA_VERSION: u32 = 1;

/// Morphisms of `hom(a, c)` hashed into the fingerprint.
pub const FINGERPRINT_PREFIX: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Encoded {
    pub hex: String,
    pub text: String,
}

impl Encoded {
    pub fn obj<C: Category>(cat: &C, a: &C::Obj) -> Self {
        Self {
            hex: hex::encode(cat.encode_obj(a)),
            text: cat.show_obj(a),
        }
    }

    pub fn mor<C: Category>(cat: &C, f: &C::Mor) -> Self {
        Self {
            hex: hex::encode(cat.encode_mor(f)),
            text: cat.show_mor(f),
        }
    }

    fn bytes(&self) -> Result<Vec<u8>> {
        hex::decode(&self.hex).map_err(|e| Error::Decode {
            offset: 0,
            reason: format!("bad hex `{}`: {e}", self.hex),
        })
    }

    pub fn decode_obj<C: Category>(&self, cat: &C) -> Result<C::Obj> {
        cat.decode_obj(&self.bytes()?)
    }

    pub fn decode_mor<C: Category>(&self, cat: &C) -> Result<C::Mor> {
        cat.decode_mor(&self.bytes()?)
    }
}

/// The condition the witness is claimed to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CheckKind {
    /// (P) for the functor at `a, b` with witness `c`.
    P,
    /// (FP) with the given `s`, `f'` and `g'`.
    Fp {
        s: Vec<Encoded>,
        f_prime: Encoded,
        g_prime: Encoded,
    },
    /// At most `k` colours on some `g·hom(a, b)`.
    Degree { k: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub budget: SearchBudget,
    pub verdict: Verdict,
    /// sha256 over the encoding version and the first
    /// [`FINGERPRINT_PREFIX`] encodings of `hom(a, c)`.
    pub hom_fingerprint: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub schema_version: u32,
    pub theorem: String,
    pub params: BTreeMap<String, String>,
    pub category: String,
    pub encoding_version: String,
    pub functor: FunctorSpec,
    pub a: Encoded,
    pub b: Encoded,
    pub r: u64,
    pub witness: Encoded,
    pub provenance: Provenance,
    pub check: CheckKind,
    pub trace: Vec<Stage>,
    /// sha256 of the JSON rendering of `trace`.
    pub trace_digest: String,
    pub verification: Option<VerificationRecord>,
}

pub fn trace_digest(trace: &[Stage]) -> String {
    let bytes = serde_json::to_vec(trace).expect("stages serialise");
    hex::encode(Sha256::digest(bytes))
}

pub fn hom_fingerprint<C: Category>(cat: &C, a: &C::Obj, c: &C::Obj) -> String {
    let mut h = Sha256::new();
    h.update(cat.encoding_version().as_bytes());
    for f in cat.hom_iter(a, c).take(FINGERPRINT_PREFIX) {
        let bytes = cat.encode_mor(&f);
        h.update((bytes.len() as u32).to_be_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

impl WitnessCertificate {
    /// An unverified certificate for `word` at `a, b` with witness `c`.
    #[allow(clippy::too_many_arguments)]
    pub fn new<F>(
        theorem: &str,
        params: BTreeMap<String, String>,
        functor: FunctorSpec,
        word: &Word<F>,
        a: &<F::Dom as Category>::Obj,
        b: &<F::Dom as Category>::Obj,
        c: &<F::Dom as Category>::Obj,
        r: u64,
        provenance: Provenance,
        check: CheckKind,
        trace: Vec<Stage>,
    ) -> Self
    where
        F: Functor<Cod = <F as Functor>::Dom> + Clone,
        F::Dom: Clone,
    {
        let cat = word.dom();
        Self {
            schema_version: SCHEMA_VERSION,
            theorem: theorem.into(),
            params,
            category: cat.name(),
            encoding_version: cat.encoding_version(),
            functor,
            a: Encoded::obj(cat, a),
            b: Encoded::obj(cat, b),
            r,
            witness: Encoded::obj(cat, c),
            provenance,
            check,
            trace_digest: trace_digest(&trace),
            trace,
            verification: None,
        }
    }

    /// Runs the recorded check under `budget` and stores the outcome.
    pub fn certify(&mut self, budget: &SearchBudget) -> Result<&Verdict> {
        let (verdict, fingerprint) = run_check(self, budget)?;
        self.verification = Some(VerificationRecord {
            budget: budget.clone(),
            verdict,
            hom_fingerprint: fingerprint,
        });
        Ok(&self.verification.as_ref().unwrap().verdict)
    }

    pub fn colours(&self) -> Result<u32> {
        u32::try_from(self.r).map_err(|_| Error::BudgetRefused(format!("{} colours", self.r)))
    }
}

struct RunCheck<'c> {
    cert: &'c WitnessCertificate,
    budget: &'c SearchBudget,
}

impl WordVisitor for RunCheck<'_> {
    type Out = Result<(Verdict, String)>;

    fn visit<F>(self, word: Word<F>) -> Self::Out
    where
        F: Functor<Cod = <F as Functor>::Dom> + Clone + 'static,
        F::Dom: Clone,
    {
        let cert = self.cert;
        let cat = word.dom();
        if cat.name() != cert.category {
            return Err(Error::DomainMismatch(format!(
                "{} acts on {}, the certificate is about {}",
                cert.functor.show(),
                cat.name(),
                cert.category
            )));
        }
        if cat.encoding_version() != cert.encoding_version {
            return Err(Error::Stale(format!(
                "encoding {} is not the current {}",
                cert.encoding_version,
                cat.encoding_version()
            )));
        }
        let a = cert.a.decode_obj(cat)?;
        let b = cert.b.decode_obj(cat)?;
        let c = cert.witness.decode_obj(cat)?;
        let r = cert.colours()?;
        let fingerprint = hom_fingerprint(cat, &a, &c);
        let verdict = match &cert.check {
            CheckKind::P => check_p_witness(&word, &a, &b, &c, r, self.budget)?,
            CheckKind::Fp { s, f_prime, g_prime } => {
                let inst = FpInstance {
                    a,
                    b,
                    s: s.iter().map(|e| e.decode_mor(cat)).collect::<Result<_>>()?,
                    r,
                };
                let f1 = f_prime.decode_mor(cat)?;
                let g1 = g_prime.decode_mor(cat)?;
                check_fp_witness(&word, &inst, &c, &f1, &g1, self.budget)?
            }
            CheckKind::Degree { k } => check_degree_at(cat, &a, &b, &c, *k, r, self.budget)?,
        };
        Ok((verdict, fingerprint))
    }
}

fn run_check(cert: &WitnessCertificate, budget: &SearchBudget) -> Result<(Verdict, String)> {
    dispatch(&cert.functor, RunCheck { cert, budget })?
}

pub fn serialize(cert: &WitnessCertificate) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(cert).expect("certificates serialise");
    out.push(b'\n');
    out
}

fn byte_offset(bytes: &[u8], e: &serde_json::Error) -> usize {
    if e.line() == 0 {
        return 0;
    }
    let line_start = bytes
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == b'\n')
        .nth(e.line().saturating_sub(2))
        .map(|(i, _)| i + 1);
    let start = if e.line() == 1 {
        0
    } else {
        line_start.unwrap_or(bytes.len())
    };
    (start + e.column().saturating_sub(1)).min(bytes.len())
}

pub fn deserialize(bytes: &[u8]) -> Result<WitnessCertificate> {
    let value: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        offset: byte_offset(bytes, &e),
        reason: e.to_string(),
    })?;
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(v) if v == SCHEMA_VERSION as u64 => {}
        Some(v) => return Err(Error::Unsupported(format!("certificate schema version {v}"))),
        None => {
            return Err(Error::Parse {
                offset: 0,
                reason: "missing schema_version".into(),
            })
        }
    }
    serde_json::from_value(value).map_err(|e| Error::Parse {
        offset: 0,
        reason: e.to_string(),
    })
}

/// Re-checks a certificate. The trace digest, the rebuilt witness (for
/// theorems in the catalog) and the hom-set fingerprint must all match, or
/// the certificate is stale. Under the stored budget the verdict must equal
/// the stored one; an override, such as an exhaustive budget for a sampled
/// certificate, returns whatever the new check says.
pub fn replay_verify(cert: &WitnessCertificate, budget_override: Option<&SearchBudget>) -> Result<Verdict> {
    if cert.schema_version != SCHEMA_VERSION {
        return Err(Error::Unsupported(format!(
            "certificate schema version {}",
            cert.schema_version
        )));
    }
    if trace_digest(&cert.trace) != cert.trace_digest {
        return Err(Error::Stale("trace digest mismatch".into()));
    }
    if catalog::THEOREMS.contains(&cert.theorem.as_str()) {
        let rebuilt = construct(&cert.theorem, &cert.params)?;
        if rebuilt.witness.hex != cert.witness.hex || rebuilt.trace_digest != cert.trace_digest {
            return Err(Error::Stale(format!(
                "rebuilding {} gives {} instead of {}",
                cert.theorem, rebuilt.witness.text, cert.witness.text
            )));
        }
    }
    let record = cert.verification.as_ref();
    let budget = match (budget_override, record) {
        (Some(b), _) => b.clone(),
        (None, Some(rec)) => rec.budget.clone(),
        (None, None) => SearchBudget::default(),
    };
    let (verdict, fingerprint) = run_check(cert, &budget)?;
    if let Some(rec) = record {
        if rec.hom_fingerprint != fingerprint {
            return Err(Error::Stale("hom-set fingerprint mismatch".into()));
        }
        if budget_override.is_none() && rec.verdict != verdict {
            return Err(Error::Stale(format!(
                "stored verdict {:?} but replay gives {:?}",
                rec.verdict.outcome, verdict.outcome
            )));
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Mode, Outcome, Strategy};

    fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
        kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    fn fp2p_cert() -> WitnessCertificate {
        let mut cert = construct("fp2p", &params(&[("a", "1"), ("b", "2"), ("r", "2")])).unwrap();
        cert.certify(&SearchBudget::default()).unwrap();
        cert
    }

    #[test]
    fn round_trip_and_replay() {
        let cert = fp2p_cert();
        assert_eq!(cert.witness.text, "6");
        let bytes = serialize(&cert);
        let back = deserialize(&bytes).unwrap();
        assert_eq!(back, cert);
        assert_eq!(serialize(&back), bytes);
        let v = replay_verify(&back, None).unwrap();
        assert_eq!(&v, &cert.verification.as_ref().unwrap().verdict);
        assert!(v.passed());
    }

    #[test]
    fn truncated_document() {
        let bytes = serialize(&fp2p_cert());
        let cut = &bytes[..bytes.len() / 2];
        match deserialize(cut) {
            Err(Error::Parse { offset, .. }) => assert!(offset > 0 && offset <= cut.len()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_schema_version() {
        let mut cert = fp2p_cert();
        cert.schema_version = 7;
        assert!(matches!(deserialize(&serialize(&cert)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn tampered_trace_is_stale() {
        let mut cert = fp2p_cert();
        cert.trace[0].fields.insert("m".into(), "5".into());
        assert!(matches!(replay_verify(&cert, None), Err(Error::Stale(_))));
    }

    #[test]
    fn mutated_encoding_version_is_stale() {
        let mut cert = fp2p_cert();
        cert.encoding_version = "R/v0".into();
        assert!(matches!(replay_verify(&cert, None), Err(Error::Stale(_))));
    }

    #[test]
    fn sampled_upgraded_to_exhaustive() {
        let mut cert = fp2p_cert();
        cert.certify(&SearchBudget::sampled(500, 11)).unwrap();
        let stored = cert.verification.as_ref().unwrap().verdict.clone();
        assert!(stored.probabilistic);
        let v = replay_verify(&cert, Some(&SearchBudget::default().with_mode(Mode::Exhaustive))).unwrap();
        assert!(v.passed() && !v.probabilistic);
        assert_ne!(v.strategy, Strategy::Sampled);
    }

    #[test]
    fn exhaustive_pass_small_witness() {
        let d = crate::categories::r::r_partial();
        let w = Word::power(&d, 1);
        let mut cert = WitnessCertificate::new(
            "search",
            BTreeMap::new(),
            FunctorSpec::new("dR", 1),
            &w,
            &1,
            &2,
            &3,
            2,
            Provenance::FoundBySearch,
            CheckKind::P,
            Vec::new(),
        );
        assert!(cert.certify(&SearchBudget::default()).unwrap().passed());
        assert_eq!(replay_verify(&cert, None).unwrap().outcome, Outcome::Pass);
    }
}
