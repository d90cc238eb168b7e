//! Named constructions that can be rebuilt from string parameters; shared by
//! the command line and by replay.
//!
//! | theorem          | parameters                          | functor          |
//! |------------------|-------------------------------------|------------------|
//! | `p-pigeonhole`   | `k1`, `l`, `r`, `orientation`?      | `dP` or `dPm`    |
//! | `r-fp`           | `k`, `l`, `r`                       | `dR`, (FP) check |
//! | `fp2p`           | `category`? (`R`/`T`), `a`, `b`, `r`| `dR` or `d*`     |
//! | `compose`        | `a`, `b`, `r`, `times`? (2)         | `dR^times`       |
//! | `product`        | `a`, `b` (comma lists), `r`         | `prod(dR)`       |
//! | `product-ramsey` | `k`, `p` (comma lists), `r`         | `prod(dR)^max k` |
//! | `modeling`       | `k0`, `v`?, `l`, `r`                | `d<k0>`          |
//! | `hj`             | `k`, `l`, `r`                       | `d<k>^k`         |
//! | `fouche`         | `s`, `t` (trees), `r`               | `d*^(ht - 1)`    |

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{CheckKind, Encoded, FunctorSpec, WitnessCertificate};
use crate::categories::hj::{HjCategory, HjObj, HjPartial};
use crate::categories::p::{Orientation, PObj, PPartial};
use crate::categories::product::{ProductCategory, ProductFunctor};
use crate::categories::r::{RCategory, RPartial};
use crate::categories::tree::{OrderedTree, TreeCategory, TreePartial};
use crate::category::{Category, Functor, Word};
use crate::constructions::pigeonhole::{fp_provider, FpOracle};
use crate::constructions::{
    fouche_witness, fp_to_p_construct, hj_step_witness, hj_witness, p_pigeonhole_witness, power_witness,
    product_ramsey_numbers, product_witness, Provenance, RFpOracle, Trace, TreeFpOracle, BUILD_CAP,
};
use crate::error::{Error, Result};

pub const THEOREMS: &[&str] = &[
    "p-pigeonhole",
    "r-fp",
    "fp2p",
    "compose",
    "product",
    "product-ramsey",
    "modeling",
    "hj",
    "fouche",
];

struct Params<'a>(&'a BTreeMap<String, String>);

impl Params<'_> {
    fn text(&self, key: &str) -> Result<&str> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::Precondition(format!("missing parameter `{key}`")))
    }

    fn opt(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn num<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let t = self.text(key)?;
        t.trim().parse().map_err(|_| Error::Parse {
            offset: 0,
            reason: format!("parameter `{key}`: `{t}` is not a natural number"),
        })
    }

    fn list(&self, key: &str) -> Result<Vec<u64>> {
        let t = self.text(key)?;
        let mut out = Vec::new();
        let mut offset = 0;
        for part in t.split(',') {
            out.push(part.trim().parse().map_err(|_| Error::Parse {
                offset,
                reason: format!("parameter `{key}`: `{part}` is not a natural number"),
            })?);
            offset += part.len() + 1;
        }
        Ok(out)
    }
}

/// Builds the named construction. The certificate carries no verification
/// record yet; see [`WitnessCertificate::certify`].
pub fn construct(theorem: &str, params: &BTreeMap<String, String>) -> Result<WitnessCertificate> {
    let p = Params(params);
    let mut trace = Trace::new();
    let owned = params.clone();
    match theorem {
        "p-pigeonhole" => {
            let (k1, l, r) = (p.num::<u32>("k1")?, p.num::<u32>("l")?, p.num::<u64>("r")?);
            let (o, letter) = match p.opt("orientation").unwrap_or("definition") {
                "definition" => (Orientation::Definition, "dP"),
                "mirror" => (Orientation::Mirror, "dPm"),
                other => return Err(Error::UnknownId(format!("orientation {other}"))),
            };
            let (a, b) = (PObj::new(k1, 1)?, PObj::new(l, 2)?);
            let c = p_pigeonhole_witness(k1, l, r)?;
            trace.record(
                "pigeonhole",
                &[
                    ("k1", k1.to_string()),
                    ("l", l.to_string()),
                    ("r", r.to_string()),
                    ("m", c.k.to_string()),
                ],
            );
            let w = Word::power(&PPartial::new(o), 1);
            Ok(cert(
                theorem,
                owned,
                FunctorSpec::new(letter, 1),
                &w,
                &a,
                &b,
                &c,
                r,
                CheckKind::P,
                trace,
            ))
        }
        "r-fp" => {
            let (k, l, r) = (p.num::<u64>("k")?, p.num::<u64>("l")?, p.num::<u64>("r")?);
            let d = RPartial::new();
            let cat = RCategory;
            let s: Vec<_> = cat
                .hom(&k, &l, BUILD_CAP)?
                .iter()
                .map(|f| d.map_mor(f))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let (c, f1, g1) = RFpOracle.call(&d, &k, &l, &s, r, &mut trace)?;
            let check = CheckKind::Fp {
                s: s.iter().map(|e| Encoded::mor(&cat, e)).collect(),
                f_prime: Encoded::mor(&cat, &f1),
                g_prime: Encoded::mor(&cat, &g1),
            };
            let w = Word::power(&d, 1);
            Ok(cert(
                theorem,
                owned,
                FunctorSpec::new("dR", 1),
                &w,
                &k,
                &l,
                &c,
                r,
                check,
                trace,
            ))
        }
        "fp2p" => {
            let r = p.num::<u64>("r")?;
            match p.opt("category").unwrap_or("R") {
                "R" => {
                    let (a, b) = (p.num::<u64>("a")?, p.num::<u64>("b")?);
                    let d = RPartial::new();
                    let c = fp_to_p_construct(&d, &RFpOracle, &a, &b, r, &mut trace)?.c;
                    let w = Word::power(&d, 1);
                    Ok(cert(
                        theorem,
                        owned,
                        FunctorSpec::new("dR", 1),
                        &w,
                        &a,
                        &b,
                        &c,
                        r,
                        CheckKind::P,
                        trace,
                    ))
                }
                "T" => {
                    let (a, b) = (tree(&p, "a")?, tree(&p, "b")?);
                    let d = TreePartial::new();
                    let c = fp_to_p_construct(&d, &TreeFpOracle, &a, &b, r, &mut trace)?.c;
                    let w = Word::power(&d, 1);
                    Ok(cert(
                        theorem,
                        owned,
                        FunctorSpec::new("d*", 1),
                        &w,
                        &a,
                        &b,
                        &c,
                        r,
                        CheckKind::P,
                        trace,
                    ))
                }
                other => Err(Error::UnknownId(format!("category {other} for fp2p"))),
            }
        }
        "compose" => {
            let (a, b, r) = (p.num::<u64>("a")?, p.num::<u64>("b")?, p.num::<u64>("r")?);
            let times = match p.opt("times") {
                Some(_) => p.num::<u32>("times")?,
                None => 2,
            };
            let d = RPartial::new();
            let single = fp_provider(&d, &RFpOracle);
            let c = power_witness(&d, times as usize, &a, &b, r, &single, &mut trace)?;
            let w = Word::power(&d, times as usize);
            Ok(cert(
                theorem,
                owned,
                FunctorSpec::new("dR", times),
                &w,
                &a,
                &b,
                &c,
                r,
                CheckKind::P,
                trace,
            ))
        }
        "product" => {
            let (a, b, r) = (p.list("a")?, p.list("b")?, p.num::<u64>("r")?);
            if a.len() != b.len() {
                return Err(Error::Precondition(
                    "a and b need the same number of coordinates".into(),
                ));
            }
            let (a, b) = (
                ProductCategory::<RCategory>::tuple(a),
                ProductCategory::<RCategory>::tuple(b),
            );
            let d = RPartial::new();
            let coord = fp_provider(&d, &RFpOracle);
            let c = product_witness(&d, &a, &b, r, &coord, &mut trace)?;
            let w = Word::power(&ProductFunctor::new(d), 1);
            Ok(cert(
                theorem,
                owned,
                FunctorSpec::new("prod(dR)", 1),
                &w,
                &a,
                &b,
                &c,
                r,
                CheckKind::P,
                trace,
            ))
        }
        "product-ramsey" => {
            let (k, q0, r) = (p.list("k")?, p.list("p")?, p.num::<u64>("r")?);
            let q = product_ramsey_numbers(&k, &q0, r, &mut trace)?;
            let top = *k.iter().max().unwrap_or(&0) as u32;
            let a = ProductCategory::<RCategory>::tuple(k);
            let b = ProductCategory::<RCategory>::tuple(q0);
            let c = ProductCategory::<RCategory>::tuple(q);
            let w = Word::power(&ProductFunctor::new(RPartial::new()), top as usize);
            Ok(cert(
                theorem,
                owned,
                FunctorSpec::new("prod(dR)", top),
                &w,
                &a,
                &b,
                &c,
                r,
                CheckKind::P,
                trace,
            ))
        }
        "modeling" => {
            let (k0, l, r) = (p.num::<u32>("k0")?, p.num::<u32>("l")?, p.num::<u64>("r")?);
            let cat = HjCategory::new(k0);
            let v = match p.opt("v") {
                Some(text) => cat.parse_obj(&format!("v:{text}"))?,
                None => cat.id_object(),
            };
            let b = HjObj::Len(l);
            let c = hj_step_witness(k0, &v, &b, r, &mut trace)?;
            let w = Word::power(&HjPartial::new(k0), 1);
            Ok(cert(
                theorem,
                owned,
                FunctorSpec::new(format!("d{k0}"), 1),
                &w,
                &v,
                &b,
                &c,
                r,
                CheckKind::P,
                trace,
            ))
        }
        "hj" => {
            let (k, l, r) = (p.num::<u32>("k")?, p.num::<u32>("l")?, p.num::<u64>("r")?);
            let m = hj_witness(k, l, r, &mut trace)?;
            let cat = HjCategory::new(k);
            let w = Word::power(&HjPartial::new(k), k as usize);
            let (a, b, c) = (cat.id_object(), HjObj::Len(l), HjObj::Len(m));
            Ok(cert(
                theorem,
                owned,
                FunctorSpec::new(format!("d{k}"), k),
                &w,
                &a,
                &b,
                &c,
                r,
                CheckKind::P,
                trace,
            ))
        }
        "fouche" => {
            let (s, t, r) = (tree(&p, "s")?, tree(&p, "t")?, p.num::<u64>("r")?);
            let v = fouche_witness(&s, &t, r, &mut trace)?;
            let times = if s.height() == t.height() { s.height() - 1 } else { 0 };
            let w = Word::power(&TreePartial::new(), times as usize);
            Ok(cert(
                theorem,
                owned,
                FunctorSpec::new("d*", times),
                &w,
                &s,
                &t,
                &v,
                r,
                CheckKind::P,
                trace,
            ))
        }
        other => Err(Error::UnknownId(format!("theorem {other}"))),
    }
}

fn tree(p: &Params<'_>, key: &str) -> Result<Arc<OrderedTree>> {
    TreeCategory.parse_obj(p.text(key)?)
}

#[allow(clippy::too_many_arguments)]
fn cert<F>(
    theorem: &str,
    params: BTreeMap<String, String>,
    spec: FunctorSpec,
    word: &Word<F>,
    a: &<F::Dom as Category>::Obj,
    b: &<F::Dom as Category>::Obj,
    c: &<F::Dom as Category>::Obj,
    r: u64,
    check: CheckKind,
    trace: Trace,
) -> WitnessCertificate
where
    F: Functor<Cod = <F as Functor>::Dom> + Clone,
    F::Dom: Clone,
{
    WitnessCertificate::new(
        theorem,
        params,
        spec,
        word,
        a,
        b,
        c,
        r,
        Provenance::ConstructedByTheorem,
        check,
        trace.into_stages(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Mode, SearchBudget};

    fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
        kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn catalog_witnesses() {
        let cases: &[(&str, &[(&str, &str)], &str)] = &[
            ("p-pigeonhole", &[("k1", "2"), ("l", "2"), ("r", "2")], "(4,2)"),
            ("r-fp", &[("k", "1"), ("l", "2"), ("r", "2")], "6"),
            ("fp2p", &[("a", "2"), ("b", "3"), ("r", "2")], "27"),
            ("compose", &[("a", "2"), ("b", "3"), ("r", "2")], ""),
            ("product", &[("a", "1,1"), ("b", "2,2"), ("r", "2")], "130|6"),
            ("hj", &[("k", "1"), ("l", "1"), ("r", "2")], "6"),
            ("modeling", &[("k0", "1"), ("l", "1"), ("r", "2")], "6"),
            (
                "fouche",
                &[("s", "fan:1"), ("t", "fan:2"), ("r", "2")],
                "[6, 0, 0, 0, 0, 0, 0]",
            ),
        ];
        for (theorem, kv, expected) in cases {
            let c = construct(theorem, &params(kv)).unwrap();
            if !expected.is_empty() {
                assert_eq!(&c.witness.text, expected, "{theorem}");
            }
            assert_eq!(c.trace_digest, super::super::trace_digest(&c.trace));
        }
    }

    #[test]
    fn fp_certificate_for_r() {
        let mut c = construct("r-fp", &params(&[("k", "2"), ("l", "3"), ("r", "2")])).unwrap();
        match &c.check {
            CheckKind::Fp { f_prime, g_prime, s } => {
                assert_eq!(s.len(), 2);
                assert_eq!(f_prime.text, "({2},2)");
                assert_eq!(g_prime.text, "({1,2},8)");
            }
            other => panic!("{other:?}"),
        }
        assert!(c
            .certify(&SearchBudget::default().with_mode(Mode::Auto))
            .unwrap()
            .passed());
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(construct("nope", &params(&[])), Err(Error::UnknownId(_))));
        assert!(matches!(
            construct("hj", &params(&[("k", "1")])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            construct("product", &params(&[("a", "1,x"), ("b", "2,2"), ("r", "2")])),
            Err(Error::Parse { offset: 2, .. })
        ));
    }
}
