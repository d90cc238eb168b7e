//! Witness builders that follow the constructive arguments behind (P):
//! pigeonhole witnesses, the (FP) oracles for `R` and trees, the recursion
//! from (FP) to (P), and the transfers through composition, products and
//! modeling.
//!
//! Builders take colour counts as `u64` because the product transfer blows
//! `r` up to `r^M`. Every builder appends to a [`Trace`]; failures are
//! wrapped in [`Error::ConstructionAbort`] naming the stage path.

pub mod hj;
pub mod oracles;
pub mod pigeonhole;
pub mod product;
pub mod relation;
pub mod trees;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::category::{Category, Functor, ObjOf};
use crate::engine::{search_p_witness, SearchBudget};
use crate::error::{Error, Result};

pub use hj::{hj_minimal_dimension, hj_modeling, hj_step_witness, hj_witness, HjModel};
pub use oracles::{avoiding_coloring, grid_boxes, minimal_product_q};
pub use pigeonhole::{fp_to_p_construct, p_pigeonhole_witness, r_fp_witness, FpChain, FpOracle, RFpOracle};
pub use product::{product_ramsey_numbers, product_witness};
pub use relation::{modeling_transfer, r_modeling_transfer, CrossRelation, RelationCheck};
pub use trees::{fouche_witness, tree_fp_witness, TreeFpOracle};

/// Largest hom-set a builder enumerates while constructing.
pub const BUILD_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ConstructedByTheorem,
    FoundBySearch,
    /// Given by the user and only checked.
    Supplied,
}

/// One recorded step of a construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    /// `/`-separated labels of the enclosing stages.
    pub path: String,
    pub step: String,
    pub fields: BTreeMap<String, String>,
}

#[derive(Debug, Default)]
pub struct Trace {
    stages: Vec<Stage>,
    path: Vec<String>,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, step: &str, fields: &[(&str, String)]) {
        self.stages.push(Stage {
            path: self.path.join("/"),
            step: step.into(),
            fields: fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        });
    }

    /// Runs `f` one level deeper; errors leave annotated with `label`.
    pub fn within<T>(&mut self, label: impl Into<String>, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let label = label.into();
        self.path.push(label.clone());
        let out = f(self);
        self.path.pop();
        out.map_err(|e| Error::abort(label, e))
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn into_stages(self) -> Vec<Stage> {
        self.stages
    }
}

type ProvideFn<'a, O> = dyn Fn(&O, &O, u64, &mut Trace) -> Result<O> + Send + Sync + 'a;

/// A source of (P)-witnesses for one functor: given `a`, `b` and a colour
/// count, an object `c`.
pub struct Provider<'a, O> {
    pub name: String,
    pub provenance: Provenance,
    run: Box<ProvideFn<'a, O>>,
}

impl<'a, O> Provider<'a, O> {
    pub fn constructed(
        name: impl Into<String>,
        run: impl Fn(&O, &O, u64, &mut Trace) -> Result<O> + Send + Sync + 'a,
    ) -> Self {
        Self {
            name: name.into(),
            provenance: Provenance::ConstructedByTheorem,
            run: Box::new(run),
        }
    }

    pub fn searched(
        name: impl Into<String>,
        run: impl Fn(&O, &O, u64, &mut Trace) -> Result<O> + Send + Sync + 'a,
    ) -> Self {
        Self {
            name: name.into(),
            provenance: Provenance::FoundBySearch,
            run: Box::new(run),
        }
    }

    /// `c = b`, enough for a functor that is injective on every hom-set.
    pub fn trivial(name: impl Into<String>) -> Self
    where
        O: Clone,
    {
        Self::constructed(name, |_, b: &O, _, _| Ok(b.clone()))
    }

    pub fn provide(&self, a: &O, b: &O, r: u64, trace: &mut Trace) -> Result<O> {
        trace.within(self.name.clone(), |t| (self.run)(a, b, r, t))
    }
}

impl<'a, O: Clone + Send + Sync + 'a> Provider<'a, O> {
    /// First member of `pool` passing an exhaustive (P) check for `delta`.
    pub fn search<F>(delta: &'a F, pool: Vec<O>, budget: SearchBudget) -> Self
    where
        F: Functor + Send + Sync,
        F::Dom: Category<Obj = O>,
    {
        let name = format!("search({})", delta.name());
        Self::searched(name, move |a, b, r, t| {
            let r = u32::try_from(r).map_err(|_| Error::BudgetRefused(format!("{r} colours")))?;
            let cat = delta.dom();
            match search_p_witness(delta, a, b, r, &pool, &budget)? {
                Some((c, v)) => {
                    t.record(
                        "search",
                        &[
                            ("a", cat.show_obj(a)),
                            ("b", cat.show_obj(b)),
                            ("r", r.to_string()),
                            ("c", cat.show_obj(&c)),
                            ("examined", v.examined.to_string()),
                        ],
                    );
                    Ok(c)
                }
                None => Err(Error::Precondition(format!(
                    "no pool member witnesses (P) for {} at {}, {}",
                    delta.name(),
                    cat.show_obj(a),
                    cat.show_obj(b)
                ))),
            }
        })
    }
}

/// (P)-witness for `δ ∘ γ` at `a, b` from a witness provider for `δ` at
/// `γa, γb` and one for `γ` at `a` and arbitrary targets. `γ` must be frank.
pub fn composition_witness<G: Functor>(
    gamma: &G,
    a: &ObjOf<G>,
    b: &ObjOf<G>,
    r: u64,
    inner: &Provider<'_, <G::Cod as Category>::Obj>,
    outer: &Provider<'_, ObjOf<G>>,
    trace: &mut Trace,
) -> Result<ObjOf<G>> {
    let (ga, gb) = (gamma.map_obj(a), gamma.map_obj(b));
    let d = trace.within("inner", |t| inner.provide(&ga, &gb, r, t))?;
    let c1 = trace.within("lift", |_| gamma.frank_lift(b, &d))?;
    trace.record(
        "claim",
        &[("d", gamma.cod().show_obj(&d)), ("c'", gamma.dom().show_obj(&c1))],
    );
    let c = trace.within("outer", |t| outer.provide(a, &c1, r, t))?;
    trace.record("compose", &[("c", gamma.dom().show_obj(&c))]);
    Ok(c)
}

/// (P)-witness for the `times`-fold power of the frank endofunctor `gamma`,
/// built by repeated [`composition_witness`] from `single`, a provider for
/// `gamma` itself.
pub fn power_witness<F>(
    gamma: &F,
    times: usize,
    a: &ObjOf<F>,
    b: &ObjOf<F>,
    r: u64,
    single: &Provider<'_, ObjOf<F>>,
    trace: &mut Trace,
) -> Result<ObjOf<F>>
where
    F: Functor<Cod = <F as Functor>::Dom>,
{
    match times {
        0 => Ok(b.clone()),
        1 => single.provide(a, b, r, trace),
        _ => {
            let rest = Provider::constructed(format!("{}^{}", gamma.name(), times - 1), |a2, b2, r2, t| {
                power_witness(gamma, times - 1, a2, b2, r2, single, t)
            });
            trace.within(format!("{}^{}", gamma.name(), times), |t| {
                composition_witness(gamma, a, b, r, &rest, single, t)
            })
        }
    }
}

/// `|hom(a, b)|` through the closed form when the category has one.
pub(crate) fn hom_size<C: Category>(cat: &C, a: &C::Obj, b: &C::Obj) -> Result<u64> {
    cat.hom_count(a, b)
        .ok_or_else(|| Error::Overflow(format!("|hom({}, {})|", cat.show_obj(a), cat.show_obj(b))))
}

/// `r^m`, with `0^0 = 1`.
pub(crate) fn checked_colours(r: u64, m: u64, what: &str) -> Result<u64> {
    if r <= 1 || m == 0 {
        return Ok(if m == 0 { 1 } else { r });
    }
    let e = u32::try_from(m).map_err(|_| Error::Overflow(what.into()))?;
    r.checked_pow(e).ok_or_else(|| Error::Overflow(what.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::r::{r_category, r_partial};
    use crate::category::Identity;
    use crate::engine::check_p_witness;

    #[test]
    fn colour_blow_up() {
        assert_eq!(checked_colours(2, 6, "R").unwrap(), 64);
        assert_eq!(checked_colours(2, 0, "R").unwrap(), 1);
        assert_eq!(checked_colours(1, 1 << 40, "R").unwrap(), 1);
        assert!(matches!(checked_colours(2, 64, "R"), Err(Error::Overflow(_))));
    }

    #[test]
    fn trace_paths_nest() {
        let mut t = Trace::new();
        let err = t
            .within("outer", |t| {
                t.record("step", &[("x", "1".into())]);
                t.within("inner", |_| -> Result<()> { Err(Error::Precondition("boom".into())) })
            })
            .unwrap_err();
        assert_eq!(t.stages()[0].path, "outer");
        match err {
            Error::ConstructionAbort { stage, .. } => assert_eq!(stage, "outer/inner"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn identity_inside_composition() {
        let d = r_partial();
        let pool: Vec<u64> = (0..=6).collect();
        let search = Provider::search(&d, pool, SearchBudget::default());
        let id = Identity::new(r_category());
        let mut t = Trace::new();
        let c = composition_witness(&id, &1, &2, 2, &search, &Provider::trivial("id"), &mut t).unwrap();
        assert_eq!(c, 3);
    }

    #[test]
    fn identity_after_partial() {
        let d = r_partial();
        let pool: Vec<u64> = (0..=6).collect();
        let search = Provider::search(&d, pool, SearchBudget::default());
        let mut t = Trace::new();
        let c = composition_witness(&d, &1, &2, 2, &Provider::trivial("id"), &search, &mut t).unwrap();
        // the claim object is the lift 2 of γb = 1, and (P) for ∂_R at 1, 2 needs 3
        assert_eq!(c, 3);
        assert!(t.stages().iter().any(|s| s.step == "claim" && s.fields["c'"] == "2"));
    }

    #[test]
    fn square_of_partial_from_search() {
        let d = r_partial();
        let pool: Vec<u64> = (0..=8).collect();
        let search = Provider::search(&d, pool, SearchBudget::default());
        let mut t = Trace::new();
        let c = power_witness(&d, 2, &2, &3, 2, &search, &mut t).unwrap();
        let dd = crate::category::Word::power(&d, 2);
        assert!(check_p_witness(
            &dd,
            &2,
            &3,
            &c,
            2,
            &SearchBudget::default().with_mode(crate::engine::Mode::Auto)
        )
        .unwrap()
        .passed());
    }
}
