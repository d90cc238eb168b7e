//! The (FP) oracle for `∂*` and the resulting witnesses for ordered trees.

use std::sync::Arc;

use super::pigeonhole::{fp_provider, FpOracle};
use super::product::product_ramsey_numbers;
use super::{power_witness, Trace};
use crate::categories::tree::{OrderedTree, TreeCategory, TreeMor, TreePartial};
use crate::category::Category;
use crate::error::{Error, Result};

/// `f'` is the first element of `s` in canonical order and `g' = id_{T*}`.
/// `V` has `V* = T*`; below each `f'(v_i)`, for `v_i` a height-`(h-1)` node
/// of `S`, it has `q_i` children, where `(q_i)` are product Ramsey numbers
/// for the child counts `k_i` in `S` and `p_i` in `T`. Every other
/// height-`(h-1)` node keeps its child count from `T`, so that `id_{T*}`
/// extends to an embedding of `T`.
#[derive(Clone, Copy, Debug, Default)]
pub struct TreeFpOracle;

impl FpOracle<TreePartial> for TreeFpOracle {
    fn name(&self) -> String {
        "tree-fp".into()
    }

    fn call(
        &self,
        _delta: &TreePartial,
        a: &Arc<OrderedTree>,
        b: &Arc<OrderedTree>,
        s: &[TreeMor],
        r: u64,
        trace: &mut Trace,
    ) -> Result<(Arc<OrderedTree>, TreeMor, TreeMor)> {
        tree_fp_witness(a, b, s, r, trace)
    }
}

pub fn tree_fp_witness(
    a: &Arc<OrderedTree>,
    b: &Arc<OrderedTree>,
    s: &[TreeMor],
    r: u64,
    trace: &mut Trace,
) -> Result<(Arc<OrderedTree>, TreeMor, TreeMor)> {
    let f1 = s
        .iter()
        .min()
        .cloned()
        .ok_or_else(|| Error::Precondition("s must be non-empty".into()))?;
    let cat = TreeCategory;
    let h = a.height();
    if h != b.height() {
        return Err(Error::Precondition(
            "s ⊆ hom(S*, T*) is empty when heights differ".into(),
        ));
    }
    let (s_star, s_index) = a.star();
    let (t_star, t_index) = b.star();
    if *f1.src != s_star || *f1.dst != t_star {
        return Err(Error::Precondition(format!(
            "{} is not in hom(S*, T*)",
            cat.show_mor(&f1)
        )));
    }
    let g1 = cat.identity(&f1.dst);
    if h == 1 {
        trace.record("oracle", &[("V", cat.show_obj(b)), ("note", "height one".into())]);
        return Ok((b.clone(), f1, g1));
    }
    // T* node -> T node
    let mut t_back = vec![0usize; t_star.len()];
    for (v, i) in t_index.iter().enumerate() {
        if let Some(i) = i {
            t_back[*i as usize] = v;
        }
    }
    let mut ks = Vec::new();
    let mut ps = Vec::new();
    let mut targets = Vec::new();
    for (v, i) in s_index.iter().enumerate() {
        if let Some(i) = i {
            if a.level(v) == h - 1 {
                let w = f1.map[*i as usize] as usize;
                ks.push(a.children(v).len() as u64);
                ps.push(b.children(t_back[w]).len() as u64);
                targets.push(w);
            }
        }
    }
    let qs = trace.within("product-ramsey", |t| product_ramsey_numbers(&ks, &ps, r, t))?;
    let fans: Vec<u32> = qs
        .iter()
        .map(|&q| u32::try_from(q).map_err(|_| Error::Overflow(format!("fan of {q} nodes"))))
        .collect::<Result<_>>()?;
    let v = t_star.grow(h - 1, |w| match targets.iter().position(|&x| x == w) {
        Some(j) => fans[j],
        None => b.children(t_back[w]).len() as u32,
    });
    trace.record(
        "oracle",
        &[
            ("k", format!("{ks:?}")),
            ("p", format!("{ps:?}")),
            ("q", format!("{qs:?}")),
            ("f'", cat.show_mor(&f1)),
            ("V", cat.show_obj(&Arc::new(v.clone()))),
            ("rule", "first".into()),
        ],
    );
    Ok((Arc::new(v), f1, g1))
}

/// `V` with `ht(V) = ht(T)` such that every `r`-colouring of `hom(S, V)` is
/// constant on `g·hom(S, T)` for some `g`: a (P)-witness for `∂*` iterated
/// `ht(S) - 1` times, each step built from [`TreeFpOracle`].
pub fn fouche_witness(
    s: &Arc<OrderedTree>,
    t: &Arc<OrderedTree>,
    r: u64,
    trace: &mut Trace,
) -> Result<Arc<OrderedTree>> {
    let cat = TreeCategory;
    if s.height() != t.height() || s.height() == 1 {
        trace.record(
            "fouche",
            &[
                ("V", cat.show_obj(t)),
                ("note", "hom(S, T) has at most one point".into()),
            ],
        );
        return Ok(t.clone());
    }
    let d = TreePartial::new();
    let oracle = TreeFpOracle;
    let single = fp_provider(&d, &oracle);
    let v = power_witness(&d, (s.height() - 1) as usize, s, t, r, &single, trace)?;
    trace.record(
        "fouche",
        &[("S", cat.show_obj(s)), ("T", cat.show_obj(t)), ("V", cat.show_obj(&v))],
    );
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{Functor, Word};
    use crate::engine::{check_fp_witness, check_p_witness, FpInstance, Mode, SearchBudget};

    fn fan(k: u32) -> Arc<OrderedTree> {
        Arc::new(OrderedTree::fan(k))
    }

    #[test]
    fn one_level_is_the_pigeonhole() {
        let mut t = Trace::new();
        let v = fouche_witness(&fan(1), &fan(2), 2, &mut t).unwrap();
        assert_eq!(v, fan(6));
        let d = TreePartial::new();
        assert!(check_p_witness(&d, &fan(1), &fan(2), &v, 2, &SearchBudget::default())
            .unwrap()
            .passed());
    }

    #[test]
    fn single_nodes_and_mismatched_heights() {
        let one = Arc::new(OrderedTree::single());
        let mut t = Trace::new();
        assert_eq!(fouche_witness(&one, &one, 3, &mut t).unwrap(), one);
        assert_eq!(fouche_witness(&fan(1), &one, 3, &mut t).unwrap(), one);
    }

    #[test]
    fn oracle_output_satisfies_fp() {
        let d = TreePartial::new();
        let cat = TreeCategory;
        // S is a path of three nodes; T has a two-child and a one-child branch
        let s = Arc::new(OrderedTree::from_counts(vec![1, 1, 0]).unwrap());
        let tt = Arc::new(OrderedTree::from_counts(vec![2, 2, 0, 0, 1, 0]).unwrap());
        let img: std::collections::BTreeSet<_> = cat.hom_iter(&s, &tt).map(|f| d.map_mor(&f)).collect();
        let s_set: Vec<_> = img.into_iter().collect();
        assert_eq!(s_set.len(), 2);
        let mut t = Trace::new();
        let (v, f1, g1) = tree_fp_witness(&s, &tt, &s_set, 2, &mut t).unwrap();
        assert_eq!(f1, s_set[0]);
        // f' hits the first branch, which grows to q = 6; the other keeps its child
        assert_eq!(v.counts(), &[2, 6, 0, 0, 0, 0, 0, 0, 1, 0]);
        let inst = FpInstance {
            a: s.clone(),
            b: tt.clone(),
            s: s_set,
            r: 2,
        };
        assert!(check_fp_witness(&d, &inst, &v, &f1, &g1, &SearchBudget::default())
            .unwrap()
            .passed());
    }

    #[test]
    fn two_levels_pass_sampled() {
        let s = Arc::new(OrderedTree::from_counts(vec![1, 1, 0]).unwrap());
        let mut t = Trace::new();
        let v = fouche_witness(&s, &s, 2, &mut t).unwrap();
        assert_eq!(v.height(), 3);
        let d = TreePartial::new();
        let dd = Word::power(&d, 2);
        let budget = SearchBudget::default().with_mode(Mode::Auto);
        assert!(check_p_witness(&dd, &s, &s, &v, 2, &budget).unwrap().passed());
    }
}
