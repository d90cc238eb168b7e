//! Checks of (P) and (FP) at concrete objects, and witness search in pools.

use std::collections::{BTreeMap, HashMap};

use super::solve::{solve_exhaustive, solve_sampled, Problem, Requirement, SelectorStream};
use super::{Mode, SearchBudget, Verdict};
use crate::category::{Category, CodMorOf, Functor, MorOf, ObjOf};
use crate::error::{Error, Result};

/// An (FP) instance: objects `a`, `b`, a non-empty `s ⊆ δ(hom(a, b))` and a
/// colour count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpInstance<O, M> {
    pub a: O,
    pub b: O,
    pub s: Vec<M>,
    pub r: u32,
}

pub(crate) fn refuse(e: Error) -> Error {
    match e {
        Error::CapExceeded { hom, cap } => Error::BudgetRefused(format!("{hom} has more than {cap} morphisms")),
        other => other,
    }
}

/// `hom(a, b)_h`: the morphisms `f` with `δ f = h`, in canonical order.
pub fn fiber<F: Functor>(delta: &F, a: &ObjOf<F>, b: &ObjOf<F>, h: &CodMorOf<F>, cap: u64) -> Result<Vec<MorOf<F>>> {
    Ok(delta
        .dom()
        .hom(a, b, cap)?
        .into_iter()
        .filter(|f| &delta.map_mor(f) == h)
        .collect())
}

/// Positions of `hom(a, b)` grouped by their image under `δ`.
pub(crate) fn fibers_of<F: Functor>(delta: &F, hom_ab: &[MorOf<F>]) -> Vec<Vec<usize>> {
    let mut by_image: BTreeMap<CodMorOf<F>, Vec<usize>> = BTreeMap::new();
    for (i, f) in hom_ab.iter().enumerate() {
        by_image.entry(delta.map_mor(f)).or_default().push(i);
    }
    by_image.into_values().collect()
}

/// Materialised `hom(a, c)` with a position lookup.
pub(crate) struct Indexed<M> {
    pub items: Vec<M>,
    pub index: HashMap<M, u32>,
}

impl<M: Clone + Eq + std::hash::Hash> Indexed<M> {
    pub fn new(items: Vec<M>) -> Self {
        let index = items.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        Self { items, index }
    }

    pub fn position(&self, m: &M) -> Result<u32> {
        self.index
            .get(m)
            .copied()
            .ok_or_else(|| Error::DomainMismatch("composite missing from its hom-set".into()))
    }
}

/// Selectors drawn lazily from `hom(b, c)`; `make` turns a morphism into key
/// groups, or `None` to skip it. The first stretch is cached across samples.
pub(crate) struct LazySelectors<'a, C: Category> {
    cat: &'a C,
    b: C::Obj,
    c: C::Obj,
    make: Box<dyn Fn(&C::Mor) -> Result<Option<Vec<Vec<u64>>>> + Send + Sync + 'a>,
    cache: Vec<Option<Vec<Vec<u64>>>>,
    cache_complete: bool,
}

const CACHE: usize = 4096;

impl<'a, C: Category> LazySelectors<'a, C> {
    pub fn new(
        cat: &'a C,
        b: C::Obj,
        c: C::Obj,
        make: Box<dyn Fn(&C::Mor) -> Result<Option<Vec<Vec<u64>>>> + Send + Sync + 'a>,
    ) -> Result<Self> {
        let mut cache = Vec::new();
        let mut it = cat.hom_iter(&b, &c);
        let mut cache_complete = true;
        for g in it.by_ref() {
            cache.push(make(&g)?);
            if cache.len() == CACHE {
                cache_complete = false;
                break;
            }
        }
        if !cache_complete && it.next().is_none() {
            cache_complete = true;
        }
        drop(it);
        Ok(Self {
            cat,
            b,
            c,
            make,
            cache,
            cache_complete,
        })
    }
}

impl<C: Category> SelectorStream for LazySelectors<'_, C> {
    fn scan(&self, limit: u64, visit: &mut dyn FnMut(&[Vec<u64>]) -> bool) -> Result<Option<u64>> {
        let over = || Error::BudgetRefused(format!("selector scan exceeded {limit} morphisms"));
        for (i, groups) in self.cache.iter().enumerate() {
            if i as u64 >= limit {
                return Err(over());
            }
            if let Some(g) = groups {
                if visit(g) {
                    return Ok(Some(i as u64));
                }
            }
        }
        if self.cache_complete {
            return Ok(None);
        }
        for (i, g) in self.cat.hom_iter(&self.b, &self.c).enumerate().skip(self.cache.len()) {
            if i as u64 >= limit {
                return Err(over());
            }
            if let Some(groups) = (self.make)(&g)? {
                if visit(&groups) {
                    return Ok(Some(i as u64));
                }
            }
        }
        Ok(None)
    }
}

/// Runs `exhaustive`, `sampled`, or the first and then the second on
/// refusal, as the budget mode asks.
pub(crate) fn by_mode(
    budget: &SearchBudget,
    exhaustive: impl FnOnce() -> Result<Verdict>,
    sampled: impl FnOnce() -> Result<Verdict>,
) -> Result<Verdict> {
    match budget.mode {
        Mode::Exhaustive => exhaustive(),
        Mode::Sampled => sampled(),
        Mode::Auto => match exhaustive() {
            Err(Error::BudgetRefused(_)) => sampled(),
            other => other,
        },
    }
}

/// The exhaustive (P) problem at `a, b, c`.
pub(crate) fn p_problem<F: Functor>(delta: &F, a: &ObjOf<F>, b: &ObjOf<F>, c: &ObjOf<F>, cap: u64) -> Result<Problem> {
    let cat = delta.dom();
    let hom_ab = cat.hom(a, b, cap).map_err(refuse)?;
    let hom_ac = Indexed::new(cat.hom(a, c, cap).map_err(refuse)?);
    let hom_bc = cat.hom(b, c, cap).map_err(refuse)?;
    let fibers = fibers_of(delta, &hom_ab);
    let mut selectors = Vec::with_capacity(hom_bc.len());
    for g in &hom_bc {
        let mut groups = Vec::with_capacity(fibers.len());
        for fib in &fibers {
            let mut group = Vec::with_capacity(fib.len());
            for &j in fib {
                group.push(hom_ac.position(&cat.compose(g, &hom_ab[j])?)?);
            }
            groups.push(group);
        }
        selectors.push(groups);
    }
    Ok(Problem {
        n: hom_ac.items.len(),
        selectors,
        requirement: Requirement::Constant,
    })
}

/// Does every `r`-colouring of `hom(a, c)` admit `g ∈ hom(b, c)` with
/// `χ(g·f)` depending only on `δ f`?
pub fn check_p_witness<F: Functor>(
    delta: &F,
    a: &ObjOf<F>,
    b: &ObjOf<F>,
    c: &ObjOf<F>,
    r: u32,
    budget: &SearchBudget,
) -> Result<Verdict> {
    by_mode(
        budget,
        || solve_exhaustive(&p_problem(delta, a, b, c, budget.max_hom_size)?, r, budget),
        || {
            let cat = delta.dom();
            let hom_ab = cat.hom(a, b, budget.max_hom_size).map_err(refuse)?;
            let fibers: Vec<Vec<MorOf<F>>> = fibers_of(delta, &hom_ab)
                .into_iter()
                .map(|fib| fib.into_iter().map(|j| hom_ab[j].clone()).collect())
                .collect();
            let stream = LazySelectors::new(
                cat,
                b.clone(),
                c.clone(),
                Box::new(move |g| {
                    let mut groups = Vec::with_capacity(fibers.len());
                    for fib in &fibers {
                        let mut keys = Vec::with_capacity(fib.len());
                        for f in fib {
                            keys.push(cat.mor_key(&cat.compose(g, f)?));
                        }
                        groups.push(keys);
                    }
                    Ok(Some(groups))
                }),
            )?;
            solve_sampled(&stream, Requirement::Constant, r, budget)
        },
    )
}

/// The first `g ∈ hom(b, c)` whose fibres are monochromatic under `colors`,
/// a colouring of `hom(a, c)` in canonical order.
pub fn find_selector<F: Functor>(
    delta: &F,
    a: &ObjOf<F>,
    b: &ObjOf<F>,
    c: &ObjOf<F>,
    colors: &[u32],
    cap: u64,
) -> Result<Option<MorOf<F>>> {
    let p = p_problem(delta, a, b, c, cap)?;
    if colors.len() != p.n {
        return Err(Error::Precondition(format!(
            "colouring has {} entries but hom(a, c) has {}",
            colors.len(),
            p.n
        )));
    }
    let hom_bc = delta.dom().hom(b, c, cap)?;
    Ok(p.first_good(colors).map(|s| hom_bc[s].clone()))
}

/// First object of `pool` passing [`check_p_witness`].
pub fn search_p_witness<F: Functor>(
    delta: &F,
    a: &ObjOf<F>,
    b: &ObjOf<F>,
    r: u32,
    pool: &[ObjOf<F>],
    budget: &SearchBudget,
) -> Result<Option<(ObjOf<F>, Verdict)>> {
    for c in pool {
        let v = check_p_witness(delta, a, b, c, r, budget)?;
        if v.passed() {
            return Ok(Some((c.clone(), v)));
        }
    }
    Ok(None)
}

/// Checks (FP) for the candidate `(c, f', g')`: every colouring of
/// `hom(a, c)` admits `g ∈ hom(b, c)` with `g·hom(a, b)_{f'}` monochromatic
/// and `(δ g)·e = g'·e` for all `e ∈ s`.
pub fn check_fp_witness<F: Functor>(
    delta: &F,
    inst: &FpInstance<ObjOf<F>, CodMorOf<F>>,
    c: &ObjOf<F>,
    f_prime: &CodMorOf<F>,
    g_prime: &CodMorOf<F>,
    budget: &SearchBudget,
) -> Result<Verdict> {
    let cat = delta.dom();
    let cod = delta.cod();
    if inst.s.is_empty() {
        return Err(Error::Precondition("s must be non-empty".into()));
    }
    if !inst.s.contains(f_prime) {
        return Err(Error::Precondition(format!(
            "f' = {} is not in s",
            cod.show_mor(f_prime)
        )));
    }
    let hom_ab = cat.hom(&inst.a, &inst.b, budget.max_hom_size).map_err(refuse)?;
    let image: Vec<CodMorOf<F>> = hom_ab.iter().map(|f| delta.map_mor(f)).collect();
    if let Some(e) = inst.s.iter().find(|e| !image.contains(e)) {
        return Err(Error::Precondition(format!(
            "{} is not in δ(hom(a, b))",
            cod.show_mor(e)
        )));
    }
    let fib: Vec<MorOf<F>> = hom_ab
        .iter()
        .zip(&image)
        .filter(|(_, h)| *h == f_prime)
        .map(|(f, _)| f.clone())
        .collect();
    let targets: Vec<CodMorOf<F>> = inst.s.iter().map(|e| cod.compose(g_prime, e)).collect::<Result<_>>()?;
    let admissible = |g: &MorOf<F>| -> Result<bool> {
        let dg = delta.map_mor(g);
        for (e, t) in inst.s.iter().zip(&targets) {
            if &cod.compose(&dg, e)? != t {
                return Ok(false);
            }
        }
        Ok(true)
    };
    // g' must lie in δ(hom(b, c))
    let mut seen = false;
    for (i, g) in cat.hom_iter(&inst.b, c).enumerate() {
        if i as u64 >= budget.max_selector_scan {
            return Err(Error::BudgetRefused(
                "could not locate g' in δ(hom(b, c)) within the scan limit".into(),
            ));
        }
        if &delta.map_mor(&g) == g_prime {
            seen = true;
            break;
        }
    }
    if !seen {
        return Err(Error::Precondition(format!(
            "g' = {} is not in δ(hom(b, c))",
            cod.show_mor(g_prime)
        )));
    }
    by_mode(
        budget,
        || {
            let hom_ac = Indexed::new(cat.hom(&inst.a, c, budget.max_hom_size).map_err(refuse)?);
            let hom_bc = cat.hom(&inst.b, c, budget.max_hom_size).map_err(refuse)?;
            let mut selectors = Vec::new();
            for g in &hom_bc {
                if !admissible(g)? {
                    continue;
                }
                let group = fib
                    .iter()
                    .map(|f| hom_ac.position(&cat.compose(g, f)?))
                    .collect::<Result<Vec<_>>>()?;
                selectors.push(vec![group]);
            }
            let p = Problem {
                n: hom_ac.items.len(),
                selectors,
                requirement: Requirement::Constant,
            };
            solve_exhaustive(&p, inst.r, budget)
        },
        || {
            let stream = LazySelectors::new(
                cat,
                inst.b.clone(),
                c.clone(),
                Box::new(|g| {
                    if !admissible(g)? {
                        return Ok(None);
                    }
                    let keys = fib
                        .iter()
                        .map(|f| Ok(cat.mor_key(&cat.compose(g, f)?)))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Some(vec![keys]))
                }),
            )?;
            solve_sampled(&stream, Requirement::Constant, inst.r, budget)
        },
    )
}
