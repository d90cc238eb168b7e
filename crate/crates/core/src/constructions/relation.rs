//! Cross-related triples and the transfer of (P) and degree bounds through
//! modeling.

use std::collections::HashMap;

use sha2::{Digest, Sha256};

use super::{Provider, Trace, BUILD_CAP};
use crate::category::{Category, Functor};
use crate::error::{Error, Result};

type PhiFn<'a, C, D> =
    dyn Fn(&<C as Category>::Mor, &<D as Category>::Mor) -> Result<<D as Category>::Mor> + Send + Sync + 'a;
type PsiFn<'a, C, D> = dyn Fn(&<D as Category>::Mor) -> Result<<C as Category>::Mor> + Send + Sync + 'a;

/// `c1, c2, c3` in `C` and `d1, d2, d3` in `D` together with
/// `φ: hom(c1, c2) × hom(d2, d3) → hom(d1, d2)`,
/// `ψ: hom(d2, d3) → hom(c2, c3)` and optionally
/// `ζ: hom(d1, d3) → hom(c1, c3)`.
pub struct CrossRelation<'a, C: Category, D: Category> {
    pub c: (C::Obj, C::Obj, C::Obj),
    pub d: (D::Obj, D::Obj, D::Obj),
    pub phi: Box<PhiFn<'a, C, D>>,
    pub psi: Box<PsiFn<'a, C, D>>,
    pub zeta: Option<Box<PsiFn<'a, C, D>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    /// Pairs `(f, g)` examined.
    pub pairs: u64,
    /// `g·φ(f,g) = g'·φ(f',g')` implies `ψ(g)·f = ψ(g')·f'`.
    pub well_defined: bool,
    /// `ζ(g·φ(f,g)) = ψ(g)·f` everywhere, when `ζ` is given.
    pub zeta_ok: Option<bool>,
    pub violation: Option<String>,
    /// sha256 over the encodings of `(f, g, φ(f,g), ψ(g))` in enumeration
    /// order.
    pub fingerprint: String,
}

impl<'a, C: Category, D: Category> CrossRelation<'a, C, D> {
    fn homs(&self, cat_c: &C, cat_d: &D, cap: u64) -> Result<(Vec<C::Mor>, Vec<D::Mor>)> {
        let fs = cat_c.hom(&self.c.0, &self.c.1, cap)?;
        let gs = cat_d.hom(&self.d.1, &self.d.2, cap)?;
        let pairs = (fs.len() as u64).saturating_mul(gs.len() as u64);
        if pairs > cap {
            return Err(Error::CapExceeded {
                hom: "hom(c1, c2) × hom(d2, d3)".into(),
                cap,
            });
        }
        Ok((fs, gs))
    }

    /// Checks typing of `φ`, `ψ` and `ζ`, well-definedness and the `ζ`
    /// identity over every pair `(f, g)`. Comparing each `g·φ(f,g)` with the
    /// first pair that produced it covers all quadruples.
    pub fn check(&self, cat_c: &C, cat_d: &D, cap: u64) -> Result<RelationCheck> {
        let (fs, gs) = self.homs(cat_c, cat_d, cap)?;
        let mut seen: HashMap<D::Mor, (usize, usize, C::Mor)> = HashMap::new();
        let mut hasher = Sha256::new();
        let mut out = RelationCheck {
            pairs: 0,
            well_defined: true,
            zeta_ok: self.zeta.as_ref().map(|_| true),
            violation: None,
            fingerprint: String::new(),
        };
        let mut psis = Vec::with_capacity(gs.len());
        for g in &gs {
            let p = (self.psi)(g)?;
            if cat_c.source(&p) != self.c.1 || cat_c.target(&p) != self.c.2 {
                return Err(Error::Precondition(format!(
                    "ψ({}) = {} is not in hom(c2, c3)",
                    cat_d.show_mor(g),
                    cat_c.show_mor(&p)
                )));
            }
            psis.push(p);
        }
        for (i, f) in fs.iter().enumerate() {
            for (j, g) in gs.iter().enumerate() {
                out.pairs += 1;
                let h = (self.phi)(f, g)?;
                if cat_d.source(&h) != self.d.0 || cat_d.target(&h) != self.d.1 {
                    return Err(Error::Precondition(format!(
                        "φ({}, {}) = {} is not in hom(d1, d2)",
                        cat_c.show_mor(f),
                        cat_d.show_mor(g),
                        cat_d.show_mor(&h)
                    )));
                }
                for bytes in [
                    cat_c.encode_mor(f),
                    cat_d.encode_mor(g),
                    cat_d.encode_mor(&h),
                    cat_c.encode_mor(&psis[j]),
                ] {
                    hasher.update((bytes.len() as u32).to_le_bytes());
                    hasher.update(bytes);
                }
                let gh = cat_d.compose(g, &h)?;
                let pf = cat_c.compose(&psis[j], f)?;
                if let Some(z) = &self.zeta {
                    if out.zeta_ok == Some(true) && z(&gh)? != pf {
                        out.zeta_ok = Some(false);
                        out.violation.get_or_insert_with(|| {
                            format!("ζ fails at f = {}, g = {}", cat_c.show_mor(f), cat_d.show_mor(g))
                        });
                    }
                }
                match seen.get(&gh) {
                    Some((i2, j2, pf2)) if *pf2 != pf => {
                        if out.well_defined {
                            out.well_defined = false;
                            out.violation = Some(format!(
                                "g·φ(f,g) agrees but ψ(g)·f differs at f = {}, g = {} and f' = {}, g' = {}",
                                cat_c.show_mor(f),
                                cat_d.show_mor(g),
                                cat_c.show_mor(&fs[*i2]),
                                cat_d.show_mor(&gs[*j2])
                            ));
                        }
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(gh, (i, j, pf));
                    }
                }
            }
        }
        out.fingerprint = hex::encode(hasher.finalize());
        Ok(out)
    }

    /// First `(f, f', g)` with `γf = γf'` but `δφ(f,g) ≠ δφ(f',g)`.
    pub fn compatibility_violation<G, F>(
        &self,
        gamma: &G,
        delta: &F,
        cap: u64,
    ) -> Result<Option<(C::Mor, C::Mor, D::Mor)>>
    where
        G: Functor<Dom = C>,
        F: Functor<Dom = D>,
    {
        let (fs, gs) = self.homs(gamma.dom(), delta.dom(), cap)?;
        let images: Vec<_> = fs.iter().map(|f| gamma.map_mor(f)).collect();
        for g in &gs {
            let mut by_image: HashMap<&<G::Cod as Category>::Mor, (usize, <F::Cod as Category>::Mor)> = HashMap::new();
            for (i, f) in fs.iter().enumerate() {
                let d = delta.map_mor(&(self.phi)(f, g)?);
                match by_image.get(&images[i]) {
                    Some((i2, d2)) if *d2 != d => return Ok(Some((fs[*i2].clone(), f.clone(), g.clone()))),
                    Some(_) => {}
                    None => {
                        by_image.insert(&images[i], (i, d));
                    }
                }
            }
        }
        Ok(None)
    }
}

fn record_check<C: Category, D: Category>(
    rel: &CrossRelation<'_, C, D>,
    cat_c: &C,
    cat_d: &D,
    trace: &mut Trace,
) -> Result<()> {
    match rel.check(cat_c, cat_d, BUILD_CAP) {
        Ok(chk) => {
            if let Some(v) = chk.violation {
                return Err(Error::Precondition(format!("not cross-related: {v}")));
            }
            trace.record(
                "cross-relation",
                &[
                    ("pairs", chk.pairs.to_string()),
                    ("well-defined", chk.well_defined.to_string()),
                    ("fingerprint", chk.fingerprint),
                ],
            );
            Ok(())
        }
        Err(Error::CapExceeded { hom, cap }) => {
            trace.record("cross-relation", &[("unchecked", format!("{hom} exceeds {cap}"))]);
            Ok(())
        }
        Err(e) => Err(e),
    }
}

/// (P)-witness for `γ` at `a, b` from a model: `d3` is `witness`'s answer
/// for `δ` at `d1, d2`, and `relate(d3)` supplies `c` with `a, b, c` and
/// `d1, d2, d3` cross-related. The relation and the modeling condition are
/// checked exhaustively when the hom-sets fit in [`BUILD_CAP`].
#[allow(clippy::too_many_arguments)]
pub fn modeling_transfer<'r, G, F>(
    gamma: &G,
    delta: &F,
    a: &<G::Dom as Category>::Obj,
    b: &<G::Dom as Category>::Obj,
    d: (&<F::Dom as Category>::Obj, &<F::Dom as Category>::Obj),
    r: u64,
    witness: &Provider<'_, <F::Dom as Category>::Obj>,
    relate: impl Fn(&<F::Dom as Category>::Obj) -> Result<CrossRelation<'r, G::Dom, F::Dom>>,
    trace: &mut Trace,
) -> Result<<G::Dom as Category>::Obj>
where
    G: Functor,
    F: Functor,
{
    let rel = transfer_common(gamma.dom(), delta.dom(), a, b, d, r, witness, relate, trace)?;
    match rel.compatibility_violation(gamma, delta, BUILD_CAP) {
        Ok(Some((f, f2, g))) => {
            return Err(Error::Precondition(format!(
                "modeling condition fails at f = {}, f' = {}, g = {}",
                gamma.dom().show_mor(&f),
                gamma.dom().show_mor(&f2),
                delta.dom().show_mor(&g)
            )))
        }
        Ok(None) => trace.record("modeling-condition", &[("holds", "true".into())]),
        Err(Error::CapExceeded { hom, cap }) => {
            trace.record("modeling-condition", &[("unchecked", format!("{hom} exceeds {cap}"))])
        }
        Err(e) => return Err(e),
    }
    Ok(rel.c.2)
}

/// Degree transfer through R-modeling: returns `c` with `rd(a, b) ≤ k`
/// certified whenever `witness`'s `d3` certifies `rd(d1, d2) ≤ k`.
#[allow(clippy::too_many_arguments)]
pub fn r_modeling_transfer<'r, C, D>(
    cat_c: &C,
    cat_d: &D,
    a: &C::Obj,
    b: &C::Obj,
    d: (&D::Obj, &D::Obj),
    r: u64,
    witness: &Provider<'_, D::Obj>,
    relate: impl Fn(&D::Obj) -> Result<CrossRelation<'r, C, D>>,
    trace: &mut Trace,
) -> Result<C::Obj>
where
    C: Category,
    D: Category,
{
    Ok(transfer_common(cat_c, cat_d, a, b, d, r, witness, relate, trace)?.c.2)
}

#[allow(clippy::too_many_arguments)]
fn transfer_common<'r, C: Category, D: Category>(
    cat_c: &C,
    cat_d: &D,
    a: &C::Obj,
    b: &C::Obj,
    (d1, d2): (&D::Obj, &D::Obj),
    r: u64,
    witness: &Provider<'_, D::Obj>,
    relate: impl Fn(&D::Obj) -> Result<CrossRelation<'r, C, D>>,
    trace: &mut Trace,
) -> Result<CrossRelation<'r, C, D>> {
    let d3 = trace.within("model", |t| witness.provide(d1, d2, r, t))?;
    let rel = relate(&d3)?;
    if (&rel.c.0, &rel.c.1) != (a, b) || (&rel.d.0, &rel.d.1, &rel.d.2) != (d1, d2, &d3) {
        return Err(Error::Precondition(
            "the relation does not sit on a, b and d1, d2, d3".into(),
        ));
    }
    record_check(&rel, cat_c, cat_d, trace)?;
    trace.record(
        "modeling",
        &[
            ("d1", cat_d.show_obj(d1)),
            ("d2", cat_d.show_obj(d2)),
            ("d3", cat_d.show_obj(&d3)),
            ("c", cat_c.show_obj(&rel.c.2)),
        ],
    );
    Ok(rel)
}

/// `φ(f, g) = f`, `ψ(g) = ζ(g) = g` on `a, b, c`.
pub fn identity_relation<'a, C: Category>(a: C::Obj, b: C::Obj, c: C::Obj) -> CrossRelation<'a, C, C>
where
    C::Mor: 'a,
{
    CrossRelation {
        c: (a.clone(), b.clone(), c.clone()),
        d: (a, b, c),
        phi: Box::new(|f, _| Ok(f.clone())),
        psi: Box::new(|g| Ok(g.clone())),
        zeta: Some(Box::new(|h| Ok(h.clone()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::r::{r_category, r_partial, RCategory, RMor};
    use crate::engine::{check_degree_at, SearchBudget};

    #[test]
    fn identity_modeling_returns_the_model_witness() {
        let d = r_partial();
        let pool: Vec<u64> = (0..=6).collect();
        let search = Provider::search(&d, pool, SearchBudget::default());
        let mut t = Trace::new();
        let c = modeling_transfer(
            &d,
            &d,
            &1,
            &2,
            (&1, &2),
            2,
            &search,
            |d3| Ok(identity_relation(1, 2, *d3)),
            &mut t,
        )
        .unwrap();
        assert_eq!(c, 3);
        assert!(t
            .stages()
            .iter()
            .any(|s| s.step == "cross-relation" && s.fields["well-defined"] == "true"));
    }

    #[test]
    fn ill_defined_relation_is_caught() {
        let r = r_category();
        // ψ ignores g, so ψ(g)·f = f, while g·φ(f, g) = g collapses everything
        let rel: CrossRelation<'_, RCategory, RCategory> = CrossRelation {
            c: (1, 2, 2),
            d: (0, 2, 2),
            phi: Box::new(|_, _| Ok(RMor { x: vec![], n: 2 })),
            psi: Box::new(|_| Ok(RMor { x: vec![1, 2], n: 2 })),
            zeta: None,
        };
        let chk = rel.check(&r, &r, 1000).unwrap();
        assert!(!chk.well_defined);
        assert_eq!(chk.pairs, 2);
    }

    #[test]
    fn modeling_condition_violation_names_the_triple() {
        let d = r_partial();
        let id = crate::category::Identity::new(RCategory);
        let pool: Vec<u64> = (0..=6).collect();
        let search = Provider::search(&id, pool, SearchBudget::default());
        let mut t = Trace::new();
        // γ = ∂_R identifies both singletons of [2]; δ = id does not
        let err = modeling_transfer(
            &d,
            &id,
            &1,
            &2,
            (&1, &2),
            2,
            &search,
            |d3| Ok(identity_relation(1, 2, *d3)),
            &mut t,
        )
        .unwrap_err();
        assert!(err.to_string().contains("modeling condition"), "{err}");
    }

    #[test]
    fn degree_transfer_through_identity() {
        let r = r_category();
        let d = r_partial();
        let dd = crate::category::Word::power(&d, 2);
        let pool: Vec<u64> = (0..=6).collect();
        let search = Provider::search(&dd, pool, SearchBudget::default());
        let mut t = Trace::new();
        let c = r_modeling_transfer(
            &r,
            &r,
            &2,
            &3,
            (&2, &3),
            2,
            &search,
            |d3| Ok(identity_relation(2, 3, *d3)),
            &mut t,
        )
        .unwrap();
        assert!(check_degree_at(&r, &2, &3, &c, 1, 2, &SearchBudget::default())
            .unwrap()
            .passed());
    }
}
