//! `∂_{k0}` at `v, l` modeled by `⊗ ∂_P`, and the Hales–Jewett pipeline.

use super::oracles::{avoiding_coloring, hj_boxes};
use super::pigeonhole::p_provider;
use super::product::product_witness;
use super::relation::{modeling_transfer, CrossRelation};
use super::{power_witness, Provider, Trace};
use crate::categories::hj::{HjCategory, HjMor, HjObj, HjPartial};
use crate::categories::p::{Orientation, PCategory, PMor, PObj, PPartial};
use crate::categories::product::{ProdObj, ProductCategory, ProductFunctor};
use crate::category::Category;
use crate::error::{Error, Result};

/// `l' = m_1 + ⋯ + m_l` and the relation between `v, l, l'` in `HJ_{k0}`
/// and `a, b, c` in `⊗P`, where `a_i = (k1, 1)`, `b_i = (3, 2)` and
/// `c_i = (m_i, 2)`.
pub struct HjModel {
    pub l_prime: u32,
    pub relation: CrossRelation<'static, HjCategory, ProductCategory<PCategory>>,
}

impl HjModel {
    /// Checks `v⌢(φ_1(f)∘p_1)⌢⋯⌢(φ_l(f)∘p_l) = (v⌢f)∘ψ(p)` on every pair.
    pub fn check_concatenation(&self, k0: u32, cap: u64) -> Result<super::RelationCheck> {
        self.relation.check(
            &HjCategory::new(k0),
            &ProductCategory::new(PCategory::new(Orientation::Definition)),
            cap,
        )
    }
}

fn top(v: &[u32]) -> u32 {
    v.iter().copied().max().unwrap_or(0)
}

fn step(k1: u32, y: u32) -> PMor {
    PMor::Step {
        from: PObj { k: k1, i: 1 },
        l: 3,
        x: vec![k1, y, (k1 - 1).max(1)],
    }
}

/// Builds the model of `∂_{k0}` at `v, l` for `c`. Requires `im(v) = [k1]`
/// with `k1 ≥ 2`, so that `(k1, 1)` is an object of `P`, and `m_i ≥ 3`.
pub fn hj_modeling(cat: HjCategory, v: &HjObj, l: u32, c: &ProdObj<PObj>) -> Result<HjModel> {
    let w = match v {
        HjObj::Sur(w) if cat.is_surjection(w) => w.clone(),
        _ => {
            return Err(Error::Precondition(format!(
                "{} is not a surjection object",
                cat.show_obj(v)
            )))
        }
    };
    let k1 = top(&w);
    if k1 < 2 {
        return Err(Error::Precondition("the alphabet needs at least two letters".into()));
    }
    if !c.keys().copied().eq(1..=l) {
        return Err(Error::Precondition(format!("c must have coordinates 1..={l}")));
    }
    let mut ms = Vec::with_capacity(l as usize);
    for (i, o) in c {
        if o.i != 2 || o.k < 3 {
            return Err(Error::Precondition(format!(
                "c_{i} = ({},{}) is not (m, 2) with m ≥ 3",
                o.k, o.i
            )));
        }
        ms.push(o.k);
    }
    let l_prime = ms
        .iter()
        .try_fold(0u32, |acc, &m| acc.checked_add(m))
        .ok_or_else(|| Error::Overflow("l' = m_1 + ⋯ + m_l".into()))?;
    let k0 = cat.k0 as i64;
    // positions in [-k0, 0] carrying k1 and max(1, k1 - 1)
    let pos = |val: u32| w.iter().position(|&x| x == val).map(|j| j as i64 - k0).unwrap();
    let (pos_hi, pos_lo) = (pos(k1), pos((k1 - 1).max(1)));

    let a = ProductCategory::<PCategory>::tuple((0..l).map(|_| PObj { k: k1, i: 1 }));
    let b = ProductCategory::<PCategory>::tuple((0..l).map(|_| PObj { k: 3, i: 2 }));
    let phi = move |f: &HjMor, _: &std::collections::BTreeMap<u32, PMor>| match f {
        HjMor::Word { f, .. } if f.len() == l as usize => {
            Ok((1..=l).map(|i| (i, step(k1, f[i as usize - 1]))).collect())
        }
        _ => Err(Error::DomainMismatch(format!("{f:?} is not in hom(v, {l})"))),
    };
    let psi = move |p: &std::collections::BTreeMap<u32, PMor>| {
        let mut g = Vec::with_capacity(l_prime as usize);
        for i in 1..=l {
            match p.get(&i) {
                Some(PMor::Surj { l: 3, p }) => g.extend(p.iter().map(|&y| match y {
                    1 => pos_hi,
                    2 => i as i64,
                    _ => pos_lo,
                })),
                other => return Err(Error::DomainMismatch(format!("{other:?} is not in hom(b_{i}, c_{i})"))),
            }
        }
        Ok(HjMor::Sel { l1: l, g })
    };
    let v_z = w.clone();
    let zeta = move |h: &std::collections::BTreeMap<u32, PMor>| {
        let mut f = Vec::with_capacity(l_prime as usize);
        for m in h.values() {
            match m {
                PMor::Step { x, .. } => f.extend_from_slice(x),
                other => return Err(Error::DomainMismatch(format!("{other:?} is not a step"))),
            }
        }
        Ok(HjMor::Word { v: v_z.clone(), f })
    };
    Ok(HjModel {
        l_prime,
        relation: CrossRelation {
            c: (v.clone(), HjObj::Len(l), HjObj::Len(l_prime)),
            d: (a, b, c.clone()),
            phi: Box::new(phi),
            psi: Box::new(psi),
            zeta: Some(Box::new(zeta)),
        },
    })
}

/// Length `m` such that every `r`-colouring of the words `[m] → [-k, 0]`
/// has a monochromatic `l`-dimensional combinatorial subspace: a (P)-witness
/// at `id_k, l` for `∂_k` iterated `k` times. Each step at `v, l'` with at
/// least two letters is modeled in `⊗P`; the remaining steps are injective
/// on the relevant hom-set and return `l'` itself.
pub fn hj_witness(k: u32, l: u32, r: u64, trace: &mut Trace) -> Result<u32> {
    if k < 1 || l < 1 || r < 1 {
        return Err(Error::Precondition("k, l and r must be at least 1".into()));
    }
    let cat = HjCategory::new(k);
    let partial = HjPartial::new(k);
    let single = Provider::constructed(format!("d{k}"), |a: &HjObj, b: &HjObj, r2, t| {
        hj_step_witness(k, a, b, r2, t)
    });
    let a = cat.id_object();
    let c = power_witness(&partial, k as usize, &a, &HjObj::Len(l), r, &single, trace)?;
    match c {
        HjObj::Len(m) => {
            trace.record(
                "hj",
                &[
                    ("k", k.to_string()),
                    ("l", l.to_string()),
                    ("r", r.to_string()),
                    ("m", m.to_string()),
                ],
            );
            Ok(m)
        }
        other => Err(Error::Precondition(format!(
            "pipeline returned {}",
            cat.show_obj(&other)
        ))),
    }
}

/// (P)-witness for a single `∂_{k0}` at `a, b`.
pub fn hj_step_witness(k0: u32, a: &HjObj, b: &HjObj, r: u64, trace: &mut Trace) -> Result<HjObj> {
    let cat = HjCategory::new(k0);
    match (a, b) {
        (HjObj::Sur(v), HjObj::Len(l)) if top(v) >= 2 && *l > 0 => {
            let k1 = top(v);
            let p_factor = PPartial::new(Orientation::Definition);
            let coord = p_provider();
            let d1 = ProductCategory::<PCategory>::tuple((0..*l).map(|_| PObj { k: k1, i: 1 }));
            let d2 = ProductCategory::<PCategory>::tuple((0..*l).map(|_| PObj { k: 3, i: 2 }));
            let witness = Provider::constructed("prod(dP)", |x, y, rr, tt| {
                product_witness(&p_factor, x, y, rr, &coord, tt)
            });
            modeling_transfer(
                &HjPartial::new(k0),
                &ProductFunctor::new(p_factor),
                a,
                b,
                (&d1, &d2),
                r,
                &witness,
                |d3| Ok(hj_modeling(cat, a, *l, d3)?.relation),
                trace,
            )
        }
        _ => {
            trace.record("injective", &[("a", cat.show_obj(a)), ("b", cat.show_obj(b))]);
            Ok(b.clone())
        }
    }
}

/// Smallest `m ≤ m_max` for which every `r`-colouring of words of length `m`
/// over `k + 1` letters has a monochromatic `l`-dimensional subspace, found
/// by exhaustive search.
pub fn hj_minimal_dimension(k: u32, l: u32, r: u32, m_max: u32) -> Option<u32> {
    (l..=m_max).find(|&m| {
        let (n, boxes) = hj_boxes(k + 1, l, m);
        avoiding_coloring(n, &boxes, r).is_none()
    })
}
