//! (P)-witnesses for `⊗ δ` staged one coordinate at a time, and the product
//! Ramsey numbers built from them.

use super::pigeonhole::{fp_provider, RFpOracle};
use super::{checked_colours, composition_witness, hom_size, power_witness, Provider, Trace};
use crate::categories::product::{ProdObj, ProductCategory, ProductFunctor};
use crate::categories::r::r_partial;
use crate::category::{Category, Functor};
use crate::error::{Error, Result};

/// (P)-witness for `⊗ δ` at `a, b`.
///
/// `⊗ δ` is split as `δ̂_k ∘ ⋯ ∘ δ̂_1`, where `δ̂_p` applies `δ` on the `p`-th
/// coordinate in ascending order only, and the pieces are joined by
/// [`composition_witness`]. The witness for a single `δ̂_p` at `a', b'`
/// replaces coordinate `i_p` of `b'` by `coord`'s witness at `R = r^M`
/// colours, where `M` is the product of `|hom(a'_i, b'_i)|` over the other
/// coordinates.
pub fn product_witness<F>(
    factor: &F,
    a: &ProdObj<<F::Dom as Category>::Obj>,
    b: &ProdObj<<F::Dom as Category>::Obj>,
    r: u64,
    coord: &Provider<'_, <F::Dom as Category>::Obj>,
    trace: &mut Trace,
) -> Result<ProdObj<<F::Dom as Category>::Obj>>
where
    F: Functor<Cod = <F as Functor>::Dom> + Clone,
    F::Dom: Clone,
{
    if !a.keys().eq(b.keys()) {
        trace.record("product", &[("note", "supports differ, hom(a, b) is empty".into())]);
        return Ok(b.clone());
    }
    let keys: Vec<u32> = a.keys().copied().collect();
    if keys.is_empty() {
        return Ok(b.clone());
    }
    staged(factor, &keys, 0, a, b, r, coord, trace)
}

#[allow(clippy::too_many_arguments)]
fn staged<F>(
    factor: &F,
    keys: &[u32],
    p: usize,
    a: &ProdObj<<F::Dom as Category>::Obj>,
    b: &ProdObj<<F::Dom as Category>::Obj>,
    r: u64,
    coord: &Provider<'_, <F::Dom as Category>::Obj>,
    trace: &mut Trace,
) -> Result<ProdObj<<F::Dom as Category>::Obj>>
where
    F: Functor<Cod = <F as Functor>::Dom> + Clone,
    F::Dom: Clone,
{
    let single = Provider::constructed(format!("coordinate {}", keys[p]), |a2, b2, r2, t| {
        single_stage(factor, keys[p], a2, b2, r2, coord, t)
    });
    if p + 1 == keys.len() {
        return single.provide(a, b, r, trace);
    }
    let gamma = ProductFunctor::on(factor.clone(), [keys[p]]);
    let rest = Provider::constructed(format!("coordinates after {}", keys[p]), |a2, b2, r2, t| {
        staged(factor, keys, p + 1, a2, b2, r2, coord, t)
    });
    composition_witness(&gamma, a, b, r, &rest, &single, trace)
}

fn single_stage<F>(
    factor: &F,
    ip: u32,
    a: &ProdObj<<F::Dom as Category>::Obj>,
    b: &ProdObj<<F::Dom as Category>::Obj>,
    r: u64,
    coord: &Provider<'_, <F::Dom as Category>::Obj>,
    trace: &mut Trace,
) -> Result<ProdObj<<F::Dom as Category>::Obj>>
where
    F: Functor<Cod = <F as Functor>::Dom>,
{
    let cat = factor.dom();
    let mut m = 1u64;
    for (i, ai) in a {
        if *i != ip {
            let bi = b
                .get(i)
                .ok_or_else(|| Error::DomainMismatch("product objects with different supports".into()))?;
            m = m
                .checked_mul(hom_size(cat, ai, bi)?)
                .ok_or_else(|| Error::Overflow("M, the product of the other hom-set sizes".into()))?;
        }
    }
    let big_r = checked_colours(r, m, &format!("R = {r}^{m}"))?;
    let (ai, bi) = (&a[&ip], &b[&ip]);
    let c = coord.provide(ai, bi, big_r, trace)?;
    trace.record(
        "coordinate",
        &[
            ("i", ip.to_string()),
            ("M", m.to_string()),
            ("R", big_r.to_string()),
            ("a", cat.show_obj(ai)),
            ("b", cat.show_obj(bi)),
            ("c", cat.show_obj(&c)),
        ],
    );
    let mut out = b.clone();
    out.insert(ip, c);
    Ok(out)
}

/// Sizes `q_i` such that every `r`-colouring of the tuples of `k_i`-subsets
/// of `[q_i]` is constant on the tuples inside some `p_i`-subsets.
///
/// The witness is one for `(⊗ ∂_R)^K` with `K = max k_i`, whose image of
/// `hom(k, p)` is a single point; each factor is a [`product_witness`] over
/// the (FP) recursion for `∂_R`.
pub fn product_ramsey_numbers(k: &[u64], p: &[u64], r: u64, trace: &mut Trace) -> Result<Vec<u64>> {
    if k.is_empty() || k.len() != p.len() {
        return Err(Error::Precondition(
            "k and p must be non-empty and of equal length".into(),
        ));
    }
    if let Some(i) = (0..k.len()).find(|&i| k[i] > p[i]) {
        return Err(Error::Precondition(format!(
            "k_{} = {} exceeds p_{} = {}",
            i + 1,
            k[i],
            i + 1,
            p[i]
        )));
    }
    let top = *k.iter().max().unwrap() as usize;
    let a = ProductCategory::<crate::categories::r::RCategory>::tuple(k.iter().copied());
    let b = ProductCategory::<crate::categories::r::RCategory>::tuple(p.iter().copied());
    let d = r_partial();
    let oracle = RFpOracle;
    let coord = fp_provider(&d, &oracle);
    let single = Provider::constructed("prod(dR)", |a2, b2, r2, t| product_witness(&d, a2, b2, r2, &coord, t));
    let gamma = ProductFunctor::new(d);
    let c = trace.within("product-ramsey", |t| power_witness(&gamma, top, &a, &b, r, &single, t))?;
    let q: Vec<u64> = c.values().copied().collect();
    trace.record(
        "product-ramsey",
        &[
            ("k", format!("{k:?}")),
            ("p", format!("{p:?}")),
            ("r", r.to_string()),
            ("q", format!("{q:?}")),
        ],
    );
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::r::RCategory;
    use crate::engine::{check_p_witness, SearchBudget};

    fn tuple(xs: &[u64]) -> ProdObj<u64> {
        ProductCategory::<RCategory>::tuple(xs.iter().copied())
    }

    #[test]
    fn single_coordinate_is_the_factor_witness() {
        let d = r_partial();
        let oracle = RFpOracle;
        let coord = fp_provider(&d, &oracle);
        let mut t = Trace::new();
        let c = product_witness(&d, &tuple(&[1]), &tuple(&[2]), 2, &coord, &mut t).unwrap();
        assert_eq!(c, tuple(&[6]));
    }

    #[test]
    fn two_coordinates_stage_the_colours() {
        let d = r_partial();
        let oracle = RFpOracle;
        let coord = fp_provider(&d, &oracle);
        let mut t = Trace::new();
        let c = product_witness(&d, &tuple(&[1, 1]), &tuple(&[2, 2]), 2, &coord, &mut t).unwrap();
        // second coordinate first at R = 2, then the first at R = 2^|hom(1, 6)|
        assert_eq!(c, tuple(&[130, 6]));
        let rs: Vec<&str> = t
            .stages()
            .iter()
            .filter(|s| s.step == "coordinate")
            .map(|s| s.fields["R"].as_str())
            .collect();
        assert_eq!(rs, vec!["2", "64"]);
    }

    #[test]
    fn search_provider_in_a_product() {
        let d = r_partial();
        let pool: Vec<u64> = (0..=9).collect();
        let coord = Provider::search(&d, pool, SearchBudget::default());
        let mut t = Trace::new();
        let c = product_witness(&d, &tuple(&[1, 1]), &tuple(&[2, 2]), 2, &coord, &mut t).unwrap();
        // inner stage: 2 colours need 3; outer: 2^|hom(1, 3)| = 8 colours need 9
        assert_eq!(c, tuple(&[9, 3]));
        let pd = ProductFunctor::new(d);
        let v = check_p_witness(&pd, &tuple(&[1, 1]), &tuple(&[2, 2]), &c, 2, &SearchBudget::default()).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn product_ramsey_small() {
        let mut t = Trace::new();
        assert_eq!(product_ramsey_numbers(&[1], &[2], 2, &mut t).unwrap(), vec![6]);
        assert_eq!(
            product_ramsey_numbers(&[1, 1], &[2, 2], 2, &mut t).unwrap(),
            vec![130, 6]
        );
        assert_eq!(product_ramsey_numbers(&[0], &[3], 2, &mut t).unwrap(), vec![3]);
        assert!(product_ramsey_numbers(&[3], &[2], 2, &mut t).is_err());
    }
}
