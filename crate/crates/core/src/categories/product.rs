//! Finitely supported products `⊗_ℕ C` of a category with itself.
//!
//! An object is a finite map from coordinate indices to objects of `C`;
//! there are morphisms only between objects with the same support, and they
//! are coordinate-wise. Hom-sets are ordered lexicographically with the
//! lowest index most significant.
//!
//! Canonical encoding (`Prod<C>/v1`): the number of coordinates as `u32`,
//! then per coordinate its index, the byte length of the factor encoding and
//! the factor encoding itself.

use std::collections::{BTreeMap, BTreeSet};

use crate::category::{Category, Functor, HomIter};
use crate::combinatorics::ProductIndices;
use crate::encoding::{combine, Reader, Writer};
use crate::error::{Error, Result};

pub type ProdObj<O> = BTreeMap<u32, O>;
pub type ProdMor<M> = BTreeMap<u32, M>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProductCategory<C> {
    pub factor: C,
}

impl<C: Category> ProductCategory<C> {
    pub fn new(factor: C) -> Self {
        Self { factor }
    }

    /// The object with coordinates `1..=n` taken from `objs`.
    pub fn tuple(objs: impl IntoIterator<Item = C::Obj>) -> ProdObj<C::Obj> {
        objs.into_iter().enumerate().map(|(i, o)| (i as u32 + 1, o)).collect()
    }
}

fn same_support<A, B>(a: &BTreeMap<u32, A>, b: &BTreeMap<u32, B>) -> bool {
    a.len() == b.len() && a.keys().zip(b.keys()).all(|(x, y)| x == y)
}

impl<C: Category> Category for ProductCategory<C> {
    type Obj = ProdObj<C::Obj>;
    type Mor = ProdMor<C::Mor>;

    fn name(&self) -> String {
        format!("Prod<{}>", self.factor.name())
    }

    fn encoding_version(&self) -> String {
        format!("Prod<{}>/v1", self.factor.encoding_version())
    }

    fn source(&self, f: &Self::Mor) -> Self::Obj {
        f.iter().map(|(&i, m)| (i, self.factor.source(m))).collect()
    }

    fn target(&self, f: &Self::Mor) -> Self::Obj {
        f.iter().map(|(&i, m)| (i, self.factor.target(m))).collect()
    }

    fn hom_iter<'a>(&'a self, a: &Self::Obj, b: &Self::Obj) -> HomIter<'a, Self::Mor> {
        if !same_support(a, b) {
            return Box::new(std::iter::empty());
        }
        let keys: Vec<u32> = a.keys().copied().collect();
        let homs: Vec<Vec<C::Mor>> = a
            .iter()
            .map(|(i, ai)| self.factor.hom_iter(ai, &b[i]).collect())
            .collect();
        let sizes = homs.iter().map(Vec::len).collect();
        Box::new(ProductIndices::new(sizes).map(move |idx| {
            keys.iter()
                .zip(idx.iter().zip(homs.iter()))
                .map(|(&k, (&j, h))| (k, h[j].clone()))
                .collect()
        }))
    }

    fn hom_count(&self, a: &Self::Obj, b: &Self::Obj) -> Option<u64> {
        if !same_support(a, b) {
            return Some(0);
        }
        a.iter()
            .try_fold(1u64, |acc, (i, ai)| acc.checked_mul(self.factor.hom_count(ai, &b[i])?))
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if !same_support(g, f) {
            return Err(Error::DomainMismatch(
                "product morphisms with different supports".into(),
            ));
        }
        f.iter()
            .map(|(i, fi)| Ok((*i, self.factor.compose(&g[i], fi)?)))
            .collect()
    }

    fn identity(&self, a: &Self::Obj) -> Self::Mor {
        a.iter().map(|(&i, ai)| (i, self.factor.identity(ai))).collect()
    }

    /// Pairs `(x, y)` on the support `{1, 2}` of factor objects within the
    /// budget.
    fn objects(&self, budget: usize) -> Vec<Self::Obj> {
        let base = self.factor.objects(budget);
        let mut out = Vec::new();
        for x in &base {
            for y in &base {
                out.push(Self::tuple([x.clone(), y.clone()]));
            }
        }
        out.sort_by_key(|o| self.encode_obj(o));
        out
    }

    fn encode_obj(&self, a: &Self::Obj) -> Vec<u8> {
        let mut w = Writer::new();
        w.u32(a.len() as u32);
        for (&i, ai) in a {
            let e = self.factor.encode_obj(ai);
            w.u32(i).u32(e.len() as u32).bytes(&e);
        }
        w.finish()
    }

    fn decode_obj(&self, bytes: &[u8]) -> Result<Self::Obj> {
        let mut r = Reader::new(bytes);
        let out = read_coords(&mut r, |b| self.factor.decode_obj(b))?;
        r.finish()?;
        Ok(out)
    }

    fn encode_mor(&self, f: &Self::Mor) -> Vec<u8> {
        let mut w = Writer::new();
        w.u32(f.len() as u32);
        for (&i, fi) in f {
            let e = self.factor.encode_mor(fi);
            w.u32(i).u32(e.len() as u32).bytes(&e);
        }
        w.finish()
    }

    fn decode_mor(&self, bytes: &[u8]) -> Result<Self::Mor> {
        let mut r = Reader::new(bytes);
        let out = read_coords(&mut r, |b| self.factor.decode_mor(b))?;
        r.finish()?;
        Ok(out)
    }

    fn show_obj(&self, a: &Self::Obj) -> String {
        show_coords(a, |o| self.factor.show_obj(o))
    }

    fn show_mor(&self, f: &Self::Mor) -> String {
        show_coords(f, |m| self.factor.show_mor(m))
    }

    /// Factor objects separated by `|`, placed at coordinates `1, 2, …`.
    fn parse_obj(&self, text: &str) -> Result<Self::Obj> {
        let t = text.trim();
        if t.starts_with("hex:") {
            return crate::category::parse_hex_fallback(t, |b| self.decode_obj(b));
        }
        let parts = t
            .split('|')
            .map(|p| self.factor.parse_obj(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::tuple(parts))
    }

    fn mor_key(&self, f: &Self::Mor) -> u64 {
        f.iter().fold(0x5052_4f44, |h, (&i, fi)| {
            combine(combine(h, i as u64), self.factor.mor_key(fi))
        })
    }
}

fn read_coords<T>(r: &mut Reader<'_>, decode: impl Fn(&[u8]) -> Result<T>) -> Result<BTreeMap<u32, T>> {
    let n = r.len(8)?;
    let mut out = BTreeMap::new();
    let mut last = None;
    for _ in 0..n {
        let i = r.u32()?;
        if last.is_some_and(|l| l >= i) {
            return Err(r.err("coordinate indices must increase"));
        }
        last = Some(i);
        let len = r.len(1)?;
        let bytes = r.bytes(len)?;
        out.insert(i, decode(bytes)?);
    }
    Ok(out)
}

fn show_coords<T>(m: &BTreeMap<u32, T>, show: impl Fn(&T) -> String) -> String {
    let positional = m.keys().copied().eq(1..=m.len() as u32);
    let parts: Vec<String> = m
        .iter()
        .map(|(i, x)| {
            if positional {
                show(x)
            } else {
                format!("{i}@{}", show(x))
            }
        })
        .collect();
    parts.join("|")
}

/// `⊗ δ`: applies the factor functor on the active coordinates and the
/// identity elsewhere. With no active set every coordinate is active.
#[derive(Clone, Debug)]
pub struct ProductFunctor<F: Functor> {
    cat: ProductCategory<F::Dom>,
    pub factor: F,
    pub active: Option<BTreeSet<u32>>,
}

impl<F> ProductFunctor<F>
where
    F: Functor<Cod = <F as Functor>::Dom>,
    F::Dom: Clone,
{
    pub fn new(factor: F) -> Self {
        Self {
            cat: ProductCategory::new(factor.dom().clone()),
            factor,
            active: None,
        }
    }

    pub fn on(factor: F, active: impl IntoIterator<Item = u32>) -> Self {
        let mut out = Self::new(factor);
        out.active = Some(active.into_iter().collect());
        out
    }

    fn is_active(&self, i: u32) -> bool {
        self.active.as_ref().is_none_or(|s| s.contains(&i))
    }
}

impl<F> Functor for ProductFunctor<F>
where
    F: Functor<Cod = <F as Functor>::Dom>,
    F::Dom: Clone,
{
    type Dom = ProductCategory<F::Dom>;
    type Cod = ProductCategory<F::Dom>;

    fn dom(&self) -> &Self::Dom {
        &self.cat
    }
    fn cod(&self) -> &Self::Cod {
        &self.cat
    }
    fn name(&self) -> String {
        match &self.active {
            None => format!("prod({})", self.factor.name()),
            Some(s) => {
                let idx: Vec<String> = s.iter().map(u32::to_string).collect();
                format!("prod({})@{}", self.factor.name(), idx.join(","))
            }
        }
    }
    fn map_obj(&self, a: &ProdObj<<F::Dom as Category>::Obj>) -> ProdObj<<F::Dom as Category>::Obj> {
        a.iter()
            .map(|(&i, x)| {
                (
                    i,
                    if self.is_active(i) {
                        self.factor.map_obj(x)
                    } else {
                        x.clone()
                    },
                )
            })
            .collect()
    }
    fn map_mor(&self, f: &ProdMor<<F::Dom as Category>::Mor>) -> ProdMor<<F::Dom as Category>::Mor> {
        f.iter()
            .map(|(&i, x)| {
                (
                    i,
                    if self.is_active(i) {
                        self.factor.map_mor(x)
                    } else {
                        x.clone()
                    },
                )
            })
            .collect()
    }
    fn frank_lift(
        &self,
        a: &ProdObj<<F::Dom as Category>::Obj>,
        b_prime: &ProdObj<<F::Dom as Category>::Obj>,
    ) -> Result<ProdObj<<F::Dom as Category>::Obj>> {
        if !same_support(a, b_prime) {
            return self.preimage(b_prime);
        }
        b_prime
            .iter()
            .map(|(&i, y)| {
                let lifted = if self.is_active(i) {
                    self.factor.frank_lift(&a[&i], y)?
                } else {
                    y.clone()
                };
                Ok((i, lifted))
            })
            .collect()
    }
    fn preimage(&self, b_prime: &ProdObj<<F::Dom as Category>::Obj>) -> Result<ProdObj<<F::Dom as Category>::Obj>> {
        b_prime
            .iter()
            .map(|(&i, y)| {
                Ok((
                    i,
                    if self.is_active(i) {
                        self.factor.preimage(y)?
                    } else {
                        y.clone()
                    },
                ))
            })
            .collect()
    }
}

pub fn product_category<C: Category>(factor: C) -> ProductCategory<C> {
    ProductCategory::new(factor)
}

pub fn product_functor<F>(factor: F) -> ProductFunctor<F>
where
    F: Functor<Cod = <F as Functor>::Dom>,
    F::Dom: Clone,
{
    ProductFunctor::new(factor)
}
