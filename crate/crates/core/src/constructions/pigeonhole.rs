//! Pigeonhole witnesses in `P`, the (FP) oracle for `∂_R`, and the recursion
//! turning an (FP) oracle into (P)-witnesses.

use std::collections::BTreeSet;

use super::{Provider, Trace, BUILD_CAP};
use crate::categories::p::PObj;
use crate::categories::r::{RMor, RPartial};
use crate::category::{Category, CodMorOf, Functor, ObjOf};
use crate::error::{Error, Result};

/// `(m, 2)` with `m = (l - 1) r + 2`, a (P)-witness for `∂_P` at
/// `(k1, 1), (l, 2)`.
pub fn p_pigeonhole_witness(k1: u32, l: u32, r: u64) -> Result<PObj> {
    if k1 < 2 || l < 1 || r < 1 {
        return Err(Error::Precondition(format!(
            "pigeonhole witness needs k1 >= 2, l >= 1, r >= 1 (got {k1}, {l}, {r})"
        )));
    }
    let m = u64::from(l - 1)
        .checked_mul(r)
        .and_then(|x| x.checked_add(2))
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::Overflow(format!("(l - 1) r + 2 for l = {l}, r = {r}")))?;
    PObj::new(m, 2)
}

/// Provider for `∂_P` using [`p_pigeonhole_witness`] on `(k, 1) → (l, 2)`
/// and `c = b` on the pairs where `∂_P` is injective.
pub fn p_provider<'a>() -> Provider<'a, PObj> {
    Provider::constructed("p-pigeonhole", |a: &PObj, b: &PObj, r, t| {
        if a.i != 1 || b.i != 2 {
            return Ok(*b);
        }
        let c = p_pigeonhole_witness(a.k, b.k, r)?;
        t.record(
            "pigeonhole",
            &[
                ("k1", a.k.to_string()),
                ("l", b.k.to_string()),
                ("r", r.to_string()),
                ("m", c.k.to_string()),
            ],
        );
        Ok(c)
    })
}

/// An (FP) oracle: given `a`, `b`, a non-empty `s ⊆ δ(hom(a, b))` and a
/// colour count, the triple `(c, f', g')`.
pub trait FpOracle<F: Functor> {
    fn name(&self) -> String;

    fn call(
        &self,
        delta: &F,
        a: &ObjOf<F>,
        b: &ObjOf<F>,
        s: &[CodMorOf<F>],
        r: u64,
        trace: &mut Trace,
    ) -> Result<(ObjOf<F>, CodMorOf<F>, CodMorOf<F>)>;
}

/// The (FP) oracle for `∂_R`: `m = (r + 1) l`, `f'` the element of `s` with
/// the largest maximum (first such in canonical order) and
/// `g' = ([l - 1], m - 1)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RFpOracle;

impl FpOracle<RPartial> for RFpOracle {
    fn name(&self) -> String {
        "r-fp".into()
    }

    fn call(
        &self,
        _delta: &RPartial,
        a: &u64,
        b: &u64,
        s: &[RMor],
        r: u64,
        trace: &mut Trace,
    ) -> Result<(u64, RMor, RMor)> {
        let (c, f, g) = r_fp_witness(*a, *b, s, r)?;
        trace.record(
            "oracle",
            &[
                ("k", a.to_string()),
                ("l", b.to_string()),
                ("|s|", s.len().to_string()),
                ("m", c.to_string()),
                ("f'", show_r(&f)),
                ("g'", show_r(&g)),
                ("rule", "max".into()),
            ],
        );
        Ok((c, f, g))
    }
}

fn show_r(f: &RMor) -> String {
    let xs: Vec<String> = f.x.iter().map(u64::to_string).collect();
    format!("({{{}}},{})", xs.join(","), f.n)
}

/// [`RFpOracle`] as a plain function. When `hom(k, l)` has fewer than two
/// elements or `k = 0`, the answer is `c = l` with `g' = ∂_R(id_l)`.
pub fn r_fp_witness(k: u64, l: u64, s: &[RMor], r: u64) -> Result<(u64, RMor, RMor)> {
    if s.is_empty() {
        return Err(Error::Precondition("s must be non-empty".into()));
    }
    if let Some(e) = s
        .iter()
        .find(|e| e.x.len() as u64 + 1 != k.max(1) || e.n != l.saturating_sub(1))
    {
        return Err(Error::Precondition(format!(
            "{} is not in ∂_R(hom({k}, {l}))",
            show_r(e)
        )));
    }
    // first element attaining the largest maximum, empty sets counting as 0
    let mut sorted: Vec<&RMor> = s.iter().collect();
    sorted.sort();
    let top = sorted.iter().map(|e| e.x.last().copied().unwrap_or(0)).max().unwrap();
    let f_prime = sorted
        .into_iter()
        .find(|e| e.x.last().copied().unwrap_or(0) == top)
        .unwrap()
        .clone();
    if k == 0 || k >= l {
        let g = RMor {
            x: (1..l).collect(),
            n: l.saturating_sub(1),
        };
        return Ok((l, f_prime, g));
    }
    let m = r
        .checked_add(1)
        .and_then(|x| x.checked_mul(l))
        .ok_or_else(|| Error::Overflow(format!("(r + 1) l for r = {r}, l = {l}")))?;
    let g = RMor {
        x: (1..l).collect(),
        n: m - 1,
    };
    Ok((m, f_prime, g))
}

/// Result of [`fp_to_p_construct`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpChain<O, M> {
    pub c: O,
    /// `c_0 = b, c_1, …, c_n`.
    pub objects: Vec<O>,
    /// `f'_1, …, f'_n` as elements of `δ(hom(a, b))`.
    pub f_primes: Vec<M>,
    pub g_primes: Vec<M>,
}

/// Builds `c_0 = b, …, c_n` with `n = |δ(hom(a, b))|` by calling the oracle
/// on the images `g'_{k-1}⋯g'_1·f'` of the elements not yet chosen; `c_n`
/// witnesses (P) for `δ` at `a, b`.
pub fn fp_to_p_construct<F, O>(
    delta: &F,
    oracle: &O,
    a: &ObjOf<F>,
    b: &ObjOf<F>,
    r: u64,
    trace: &mut Trace,
) -> Result<FpChain<ObjOf<F>, CodMorOf<F>>>
where
    F: Functor,
    O: FpOracle<F> + ?Sized,
{
    let cat = delta.dom();
    let cod = delta.cod();
    let hom_ab = cat.hom(a, b, BUILD_CAP)?;
    let image: Vec<CodMorOf<F>> = hom_ab
        .iter()
        .map(|f| delta.map_mor(f))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = image.len();
    trace.record(
        "fp2p",
        &[
            ("a", cat.show_obj(a)),
            ("b", cat.show_obj(b)),
            ("r", r.to_string()),
            ("n", n.to_string()),
            ("oracle", oracle.name()),
        ],
    );
    let mut out = FpChain {
        c: b.clone(),
        objects: vec![b.clone()],
        f_primes: Vec::with_capacity(n),
        g_primes: Vec::with_capacity(n),
    };
    let mut chain = image.clone();
    let mut used = vec![false; n];
    for k in 1..=n {
        let remaining: Vec<usize> = (0..n).filter(|&i| !used[i]).collect();
        let s: Vec<CodMorOf<F>> = remaining.iter().map(|&i| chain[i].clone()).collect();
        let c_prev = out.c.clone();
        let (ck, fk, gk) = trace.within(format!("stage {k}"), |t| oracle.call(delta, a, &c_prev, &s, r, t))?;
        let pos = s
            .iter()
            .position(|e| *e == fk)
            .ok_or_else(|| Error::ConstructionAbort {
                stage: format!("stage {k}"),
                reason: format!("oracle returned f' = {} outside s", cod.show_mor(&fk)),
            })?;
        let idx = remaining[pos];
        used[idx] = true;
        for (i, e) in chain.iter_mut().enumerate() {
            if !used[i] {
                *e = cod
                    .compose(&gk, e)
                    .map_err(|err| Error::abort(format!("stage {k}"), err))?;
            }
        }
        trace.record(
            "step",
            &[
                ("k", k.to_string()),
                ("c", cat.show_obj(&ck)),
                ("f'", cod.show_mor(&image[idx])),
                ("g'", cod.show_mor(&gk)),
            ],
        );
        out.f_primes.push(image[idx].clone());
        out.g_primes.push(gk);
        out.objects.push(ck.clone());
        out.c = ck;
    }
    Ok(out)
}

/// Provider running [`fp_to_p_construct`] with `oracle`.
pub fn fp_provider<'a, F, O>(delta: &'a F, oracle: &'a O) -> Provider<'a, ObjOf<F>>
where
    F: Functor + Send + Sync,
    O: FpOracle<F> + Send + Sync,
{
    Provider::constructed(format!("fp2p({})", oracle.name()), move |a, b, r, t| {
        Ok(fp_to_p_construct(delta, oracle, a, b, r, t)?.c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::p::p_partial;
    use crate::categories::r::r_partial;
    use crate::engine::{check_fp_witness, check_p_witness, FpInstance, SearchBudget};

    fn m(x: &[u64], n: u64) -> RMor {
        RMor::new(x.to_vec(), n).unwrap()
    }

    #[test]
    fn pigeonhole_formula() {
        assert_eq!(p_pigeonhole_witness(2, 2, 2).unwrap(), PObj::new(4, 2).unwrap());
        assert_eq!(p_pigeonhole_witness(2, 2, 1).unwrap(), PObj::new(3, 2).unwrap());
        assert_eq!(p_pigeonhole_witness(2, 3, 3).unwrap(), PObj::new(8, 2).unwrap());
        assert!(p_pigeonhole_witness(1, 2, 2).is_err());
    }

    #[test]
    fn pigeonhole_witness_passes_small_cases() {
        let d = p_partial();
        let b = SearchBudget::default();
        for (k1, l, r) in [(2, 2, 1), (2, 2, 2), (2, 3, 2)] {
            let c = p_pigeonhole_witness(k1, l, r).unwrap();
            let v = check_p_witness(
                &d,
                &PObj::new(k1, 1).unwrap(),
                &PObj::new(l, 2).unwrap(),
                &c,
                r as u32,
                &b,
            )
            .unwrap();
            assert!(v.passed(), "{k1} {l} {r}");
        }
    }

    #[test]
    fn r_oracle_examples() {
        assert_eq!(r_fp_witness(1, 2, &[m(&[], 1)], 2).unwrap(), (6, m(&[], 1), m(&[1], 5)));
        assert_eq!(
            r_fp_witness(2, 3, &[m(&[1], 2), m(&[2], 2)], 2).unwrap(),
            (9, m(&[2], 2), m(&[1, 2], 8))
        );
        assert_eq!(r_fp_witness(1, 2, &[m(&[], 1)], 1).unwrap(), (4, m(&[], 1), m(&[1], 3)));
        assert!(r_fp_witness(1, 2, &[], 2).is_err());
    }

    #[test]
    fn r_oracle_output_passes_fp_check() {
        let d = r_partial();
        let b = SearchBudget::default();
        for (k, l, r) in [(1u64, 2u64, 2u64), (1, 3, 2), (2, 3, 1)] {
            let hom: Vec<RMor> = crate::categories::r::r_category()
                .hom(&k, &l, 100)
                .unwrap()
                .iter()
                .map(|f| d.map_mor(f))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let (c, f, g) = r_fp_witness(k, l, &hom, r).unwrap();
            let inst = FpInstance {
                a: k,
                b: l,
                s: hom.clone(),
                r: r as u32,
            };
            assert!(
                check_fp_witness(&d, &inst, &c, &f, &g, &b).unwrap().passed(),
                "{k} {l} {r}"
            );
        }
    }

    #[test]
    fn chain_for_singletons() {
        let d = r_partial();
        let mut t = Trace::new();
        let ch = fp_to_p_construct(&d, &RFpOracle, &1, &2, 2, &mut t).unwrap();
        assert_eq!(ch.c, 6);
        assert_eq!(ch.f_primes, vec![m(&[], 1)]);
    }

    #[test]
    fn chain_for_pairs() {
        let d = r_partial();
        let mut t = Trace::new();
        let ch = fp_to_p_construct(&d, &RFpOracle, &2, &3, 2, &mut t).unwrap();
        assert_eq!(ch.objects, vec![3, 9, 27]);
        assert_eq!(ch.f_primes, vec![m(&[2], 2), m(&[1], 2)]);
    }

    #[test]
    fn empty_hom_gives_b() {
        let mut t = Trace::new();
        let ch = fp_to_p_construct(&r_partial(), &RFpOracle, &3, &2, 2, &mut t).unwrap();
        assert_eq!((ch.c, ch.f_primes.len()), (2, 0));
    }
}
