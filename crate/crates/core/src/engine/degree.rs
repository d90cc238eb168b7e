//! Ramsey degrees over candidate pools and the image-size bound.

use std::collections::BTreeSet;

use super::checks::{by_mode, refuse, Indexed, LazySelectors};
use super::solve::{solve_exhaustive, solve_sampled, Problem, Requirement};
use super::{SearchBudget, Verdict};
use crate::category::{Category, Functor};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeResult<O> {
    pub a: O,
    pub b: O,
    pub r: u32,
    /// Smallest `k` certified by a pool member, `0` when `hom(a, b)` is empty.
    pub degree: Option<u64>,
    pub witness: Option<O>,
    /// Set when no pool member did better than `|hom(a, b)|` and the ceiling
    /// is certified by `c = b`, `g = id`.
    pub trivial_fallback: bool,
    pub hom_size: u64,
    pub pool: Vec<O>,
    /// Pool members skipped because their check exceeded the budget, with
    /// the `k` at which that happened.
    pub refused: Vec<(O, u64)>,
}

/// Every `r`-colouring of `hom(a, c)` admits `g ∈ hom(b, c)` with at most
/// `k` colours on `g·hom(a, b)`.
pub fn check_degree_at<C: Category>(
    cat: &C,
    a: &C::Obj,
    b: &C::Obj,
    c: &C::Obj,
    k: u64,
    r: u32,
    budget: &SearchBudget,
) -> Result<Verdict> {
    let req = Requirement::AtMost(k as usize);
    by_mode(
        budget,
        || {
            let hom_ab = cat.hom(a, b, budget.max_hom_size).map_err(refuse)?;
            let hom_ac = Indexed::new(cat.hom(a, c, budget.max_hom_size).map_err(refuse)?);
            let hom_bc = cat.hom(b, c, budget.max_hom_size).map_err(refuse)?;
            let selectors = hom_bc
                .iter()
                .map(|g| {
                    let group = hom_ab
                        .iter()
                        .map(|f| hom_ac.position(&cat.compose(g, f)?))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(vec![group])
                })
                .collect::<Result<Vec<_>>>()?;
            let p = Problem {
                n: hom_ac.items.len(),
                selectors,
                requirement: req,
            };
            solve_exhaustive(&p, r, budget)
        },
        || {
            let hom_ab = cat.hom(a, b, budget.max_hom_size).map_err(refuse)?;
            let stream = LazySelectors::new(
                cat,
                b.clone(),
                c.clone(),
                Box::new(move |g| {
                    let keys = hom_ab
                        .iter()
                        .map(|f| Ok(cat.mor_key(&cat.compose(g, f)?)))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Some(vec![keys]))
                }),
            )?;
            solve_sampled(&stream, req, r, budget)
        },
    )
}

/// Smallest `k ≤ |hom(a, b)|` certified by some member of `pool`, trying
/// `k` in increasing order and the pool in the given order. Checks are
/// exhaustive whatever the budget mode says.
pub fn ramsey_degree<C: Category>(
    cat: &C,
    a: &C::Obj,
    b: &C::Obj,
    r: u32,
    pool: &[C::Obj],
    budget: &SearchBudget,
) -> Result<DegreeResult<C::Obj>> {
    let hom_size = cat.hom(a, b, budget.max_hom_size).map_err(refuse)?.len() as u64;
    let mut out = DegreeResult {
        a: a.clone(),
        b: b.clone(),
        r,
        degree: None,
        witness: None,
        trivial_fallback: false,
        hom_size,
        pool: pool.to_vec(),
        refused: Vec::new(),
    };
    if hom_size == 0 {
        out.degree = Some(0);
        out.witness = Some(b.clone());
        return Ok(out);
    }
    let exhaustive = budget.clone().with_mode(super::Mode::Exhaustive);
    for k in 1..=hom_size {
        for c in pool {
            match check_degree_at(cat, a, b, c, k, r, &exhaustive) {
                Ok(v) if v.passed() => {
                    out.degree = Some(k);
                    out.witness = Some(c.clone());
                    return Ok(out);
                }
                Ok(_) => {}
                Err(Error::BudgetRefused(_)) => out.refused.push((c.clone(), k)),
                Err(e) => return Err(e),
            }
        }
    }
    out.degree = Some(hom_size);
    out.witness = Some(b.clone());
    out.trivial_fallback = true;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBoundReport<O> {
    /// `min |w(hom(a, b))|` over words `w` of length at most the cap.
    pub bound: u64,
    /// Functor names of a shortest word attaining the bound, applied first
    /// to last.
    pub bound_word: Vec<String>,
    pub trivial_bound: u64,
    pub degree: DegreeResult<O>,
    /// `degree ≤ bound`, when the pool search determined a degree.
    pub consistent: Option<bool>,
}

/// Image-size bound over the words in `deltas` up to `word_cap` letters,
/// next to the degree found in `pool`.
pub fn check_degree_bound<F>(
    deltas: &[F],
    a: &<F::Dom as Category>::Obj,
    b: &<F::Dom as Category>::Obj,
    r: u32,
    pool: &[<F::Dom as Category>::Obj],
    budget: &SearchBudget,
    word_cap: usize,
) -> Result<DegreeBoundReport<<F::Dom as Category>::Obj>>
where
    F: Functor<Cod = <F as Functor>::Dom>,
{
    let first = deltas
        .first()
        .ok_or_else(|| Error::Precondition("at least one functor is needed".into()))?;
    let cat = first.dom();
    if deltas.iter().any(|d| d.dom().name() != cat.name()) {
        return Err(Error::DomainMismatch("all functors must act on one category".into()));
    }
    let hom_ab = cat.hom(a, b, budget.max_hom_size).map_err(refuse)?;
    let trivial_bound = hom_ab.len() as u64;
    let mut bound = trivial_bound;
    let mut bound_word = Vec::new();
    // breadth-first over words, keeping the image set of each word
    let mut layer: Vec<(Vec<usize>, Vec<<F::Dom as Category>::Mor>)> = vec![(Vec::new(), hom_ab)];
    for _ in 0..word_cap {
        let mut next = Vec::new();
        for (word, image) in &layer {
            for (j, d) in deltas.iter().enumerate() {
                let img: BTreeSet<_> = image.iter().map(|f| d.map_mor(f)).collect();
                let mut w = word.clone();
                w.push(j);
                if (img.len() as u64) < bound {
                    bound = img.len() as u64;
                    bound_word = w.iter().map(|&i| deltas[i].name()).collect();
                }
                next.push((w, img.into_iter().collect()));
            }
        }
        layer = next;
    }
    let degree = ramsey_degree(cat, a, b, r, pool, budget)?;
    let consistent = degree.degree.map(|d| d <= bound);
    Ok(DegreeBoundReport {
        bound,
        bound_word,
        trivial_bound,
        degree,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::r::{r_category, r_partial, RCategory};
    use crate::category::Identity;

    #[test]
    fn degrees_in_r() {
        let r = r_category();
        let pool: Vec<u64> = (0..=6).collect();
        let b = SearchBudget::default();
        let d = ramsey_degree(&r, &1, &2, 2, &pool, &b).unwrap();
        assert_eq!((d.degree, d.witness), (Some(1), Some(3)));
        let d = ramsey_degree(&r, &2, &3, 2, &pool, &b).unwrap();
        assert_eq!((d.degree, d.witness), (Some(1), Some(6)));
        let d = ramsey_degree(&r, &2, &2, 2, &pool, &b).unwrap();
        assert_eq!(d.degree, Some(1));
    }

    #[test]
    fn empty_hom_has_degree_zero() {
        let d = ramsey_degree(&r_category(), &3, &2, 2, &[5], &SearchBudget::default()).unwrap();
        assert_eq!(d.degree, Some(0));
    }

    #[test]
    fn trivial_fallback_when_pool_is_useless() {
        // pool {2} cannot beat the ceiling for a = 1, b = 2
        let d = ramsey_degree(&r_category(), &1, &2, 2, &[0], &SearchBudget::default()).unwrap();
        assert_eq!((d.degree, d.trivial_fallback), (Some(2), true));
    }

    #[test]
    fn bound_from_iterated_partial() {
        let pool: Vec<u64> = (0..=5).collect();
        let rep = check_degree_bound(&[r_partial()], &1, &3, 2, &pool, &SearchBudget::default(), 3).unwrap();
        assert_eq!(rep.bound, 1);
        assert_eq!(rep.degree.degree, Some(1));
        assert_eq!(rep.consistent, Some(true));
        let rep = check_degree_bound(&[r_partial()], &2, &4, 2, &pool, &SearchBudget::default(), 3).unwrap();
        assert_eq!((rep.bound, rep.bound_word.len()), (1, 2));
    }

    #[test]
    fn identity_gives_trivial_bound() {
        let id = Identity::new(RCategory);
        let rep = check_degree_bound(&[id], &1, &3, 2, &[3], &SearchBudget::default(), 2).unwrap();
        assert_eq!(rep.bound, rep.trivial_bound);
        assert_eq!(rep.bound, 3);
    }
}
