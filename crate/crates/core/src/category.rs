//! Finitely-presented categories and functors, plus exhaustive law checkers
//! over bounded fragments.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use crate::encoding::fnv1a;
use crate::error::{Error, Result};

/// Common bounds for objects and morphisms: canonical values with a total
/// order that agrees with the byte order of their encodings inside a hom-set.
pub trait Code: Clone + Eq + Ord + Hash + Debug + Send + Sync {}
impl<T: Clone + Eq + Ord + Hash + Debug + Send + Sync> Code for T {}

pub type HomIter<'a, M> = Box<dyn Iterator<Item = M> + 'a>;

/// A category whose hom-sets are finite and enumerable in a fixed order.
pub trait Category: Send + Sync {
    type Obj: Code;
    type Mor: Code;

    /// Stable identifier, embedded in certificates.
    fn name(&self) -> String;

    /// Version tag of the canonical byte encoding.
    fn encoding_version(&self) -> String {
        format!("{}/v1", self.name())
    }

    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;

    /// Lazily enumerates `hom(a, b)` in canonical order, each morphism once.
    fn hom_iter<'a>(&'a self, a: &Self::Obj, b: &Self::Obj) -> HomIter<'a, Self::Mor>;

    /// `|hom(a, b)|`, `None` on overflow. The default walks the iterator.
    fn hom_count(&self, a: &Self::Obj, b: &Self::Obj) -> Option<u64> {
        Some(self.hom_iter(a, b).count() as u64)
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;

    /// Objects admitted by a size budget, ascending by canonical encoding.
    fn objects(&self, budget: usize) -> Vec<Self::Obj>;

    fn encode_obj(&self, a: &Self::Obj) -> Vec<u8>;
    fn decode_obj(&self, bytes: &[u8]) -> Result<Self::Obj>;
    fn encode_mor(&self, f: &Self::Mor) -> Vec<u8>;
    fn decode_mor(&self, bytes: &[u8]) -> Result<Self::Mor>;

    /// Human-readable rendering used in reports and the CLI.
    fn show_obj(&self, a: &Self::Obj) -> String {
        format!("{a:?}")
    }

    fn show_mor(&self, f: &Self::Mor) -> String {
        format!("{f:?}")
    }

    /// Parses the CLI text form of an object. `hex:` prefixed input is
    /// always accepted as a raw canonical encoding.
    fn parse_obj(&self, text: &str) -> Result<Self::Obj> {
        parse_hex_fallback(text, |b| self.decode_obj(b))
    }

    fn parse_mor(&self, text: &str) -> Result<Self::Mor> {
        parse_hex_fallback(text, |b| self.decode_mor(b))
    }

    /// 64-bit key of a morphism used to derive sampled colours. Must depend
    /// only on the morphism's canonical value.
    fn mor_key(&self, f: &Self::Mor) -> u64 {
        fnv1a(&self.encode_mor(f))
    }

    /// Materialises `hom(a, b)`, refusing sets larger than `cap`.
    fn hom(&self, a: &Self::Obj, b: &Self::Obj, cap: u64) -> Result<Vec<Self::Mor>> {
        let mut out = Vec::new();
        for f in self.hom_iter(a, b) {
            if out.len() as u64 >= cap {
                return Err(Error::CapExceeded {
                    hom: format!("hom({}, {})", self.show_obj(a), self.show_obj(b)),
                    cap,
                });
            }
            out.push(f);
        }
        Ok(out)
    }
}

pub(crate) fn parse_hex_fallback<T>(text: &str, decode: impl Fn(&[u8]) -> Result<T>) -> Result<T> {
    let t = text.trim();
    match t.strip_prefix("hex:") {
        Some(h) => {
            let bytes = hex::decode(h).map_err(|e| Error::Parse {
                offset: 4,
                reason: e.to_string(),
            })?;
            decode(&bytes)
        }
        None => Err(Error::Parse {
            offset: 0,
            reason: format!("unrecognised text `{t}`"),
        }),
    }
}

pub type ObjOf<F> = <<F as Functor>::Dom as Category>::Obj;
pub type MorOf<F> = <<F as Functor>::Dom as Category>::Mor;
pub type CodObjOf<F> = <<F as Functor>::Cod as Category>::Obj;
pub type CodMorOf<F> = <<F as Functor>::Cod as Category>::Mor;

/// A functor between two enumerable categories.
pub trait Functor: Send + Sync {
    type Dom: Category;
    type Cod: Category;

    fn dom(&self) -> &Self::Dom;
    fn cod(&self) -> &Self::Cod;
    fn name(&self) -> String;

    fn map_obj(&self, a: &ObjOf<Self>) -> CodObjOf<Self>;
    fn map_mor(&self, f: &MorOf<Self>) -> CodMorOf<Self>;

    /// Returns `b` with `F b = b'` and `F(hom(a, b)) = hom(F a, b')`.
    fn frank_lift(&self, _a: &ObjOf<Self>, _b_prime: &CodObjOf<Self>) -> Result<ObjOf<Self>> {
        Err(Error::Unsupported(format!("{} has no frank lift", self.name())))
    }

    /// Some object mapped onto `b'`, when one exists.
    fn preimage(&self, _b_prime: &CodObjOf<Self>) -> Result<ObjOf<Self>> {
        Err(Error::Unsupported(format!("{} has no preimage oracle", self.name())))
    }
}

/// The identity functor on a category.
#[derive(Clone, Debug)]
pub struct Identity<C> {
    cat: C,
}

impl<C: Category> Identity<C> {
    pub fn new(cat: C) -> Self {
        Self { cat }
    }
}

impl<C: Category> Functor for Identity<C> {
    type Dom = C;
    type Cod = C;

    fn dom(&self) -> &C {
        &self.cat
    }
    fn cod(&self) -> &C {
        &self.cat
    }
    fn name(&self) -> String {
        format!("id({})", self.cat.name())
    }
    fn map_obj(&self, a: &C::Obj) -> C::Obj {
        a.clone()
    }
    fn map_mor(&self, f: &C::Mor) -> C::Mor {
        f.clone()
    }
    fn frank_lift(&self, _a: &C::Obj, b_prime: &C::Obj) -> Result<C::Obj> {
        Ok(b_prime.clone())
    }
    fn preimage(&self, b_prime: &C::Obj) -> Result<C::Obj> {
        Ok(b_prime.clone())
    }
}

/// `outer ∘ inner`.
#[derive(Clone, Debug)]
pub struct Composite<F, G> {
    pub inner: F,
    pub outer: G,
}

impl<F, G> Functor for Composite<F, G>
where
    F: Functor,
    G: Functor<Dom = F::Cod>,
{
    type Dom = F::Dom;
    type Cod = G::Cod;

    fn dom(&self) -> &F::Dom {
        self.inner.dom()
    }
    fn cod(&self) -> &G::Cod {
        self.outer.cod()
    }
    fn name(&self) -> String {
        format!("({})∘({})", self.outer.name(), self.inner.name())
    }
    fn map_obj(&self, a: &ObjOf<F>) -> CodObjOf<G> {
        self.outer.map_obj(&self.inner.map_obj(a))
    }
    fn map_mor(&self, f: &MorOf<F>) -> CodMorOf<G> {
        self.outer.map_mor(&self.inner.map_mor(f))
    }
    fn frank_lift(&self, a: &ObjOf<F>, b2: &CodObjOf<G>) -> Result<ObjOf<F>> {
        let b1 = self.outer.frank_lift(&self.inner.map_obj(a), b2)?;
        self.inner.frank_lift(a, &b1)
    }
    fn preimage(&self, b2: &CodObjOf<G>) -> Result<ObjOf<F>> {
        let b1 = self.outer.preimage(b2)?;
        self.inner.preimage(&b1)
    }
}

pub fn compose_functors<F, G>(inner: F, outer: G) -> Result<Composite<F, G>>
where
    F: Functor,
    G: Functor<Dom = F::Cod>,
{
    if inner.cod().name() != outer.dom().name() {
        return Err(Error::DomainMismatch(format!(
            "codomain {} of {} is not the domain {} of {}",
            inner.cod().name(),
            inner.name(),
            outer.dom().name(),
            outer.name()
        )));
    }
    Ok(Composite { inner, outer })
}

/// A composition word `letters[n-1] ∘ … ∘ letters[0]` of endofunctors.
/// The empty word is the identity.
pub struct Word<F: Functor> {
    cat: F::Dom,
    letters: Vec<F>,
}

impl<F> Clone for Word<F>
where
    F: Functor + Clone,
    F::Dom: Clone,
{
    fn clone(&self) -> Self {
        Self {
            cat: self.cat.clone(),
            letters: self.letters.clone(),
        }
    }
}

impl<F> Word<F>
where
    F: Functor + Clone,
    F::Dom: Clone,
    F: Functor<Cod = <F as Functor>::Dom>,
{
    pub fn new(cat: F::Dom, letters: Vec<F>) -> Self {
        Self { cat, letters }
    }

    pub fn power(f: &F, times: usize) -> Self {
        Self {
            cat: f.dom().clone(),
            letters: vec![f.clone(); times],
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[F] {
        &self.letters
    }
}

impl<F> Functor for Word<F>
where
    F: Functor<Cod = <F as Functor>::Dom> + Clone,
    F::Dom: Clone,
{
    type Dom = F::Dom;
    type Cod = F::Dom;

    fn dom(&self) -> &F::Dom {
        &self.cat
    }
    fn cod(&self) -> &F::Dom {
        &self.cat
    }
    fn name(&self) -> String {
        match self.letters.len() {
            0 => format!("id({})", self.cat.name()),
            _ => {
                let names: Vec<String> = self.letters.iter().rev().map(|f| f.name()).collect();
                if names.iter().all(|n| *n == names[0]) {
                    format!("{}^{}", names[0], names.len())
                } else {
                    names.join("∘")
                }
            }
        }
    }
    fn map_obj(&self, a: &ObjOf<F>) -> ObjOf<F> {
        self.letters.iter().fold(a.clone(), |x, f| f.map_obj(&x))
    }
    fn map_mor(&self, m: &MorOf<F>) -> MorOf<F> {
        self.letters.iter().fold(m.clone(), |x, f| f.map_mor(&x))
    }
    fn frank_lift(&self, a: &ObjOf<F>, b_prime: &ObjOf<F>) -> Result<ObjOf<F>> {
        // images a_0 = a, a_j = f_j(a_{j-1})
        let mut images = vec![a.clone()];
        for f in &self.letters[..self.letters.len().saturating_sub(1)] {
            let next = f.map_obj(images.last().unwrap());
            images.push(next);
        }
        let mut b = b_prime.clone();
        for (f, aj) in self.letters.iter().zip(images.iter()).rev() {
            b = f.frank_lift(aj, &b)?;
        }
        Ok(b)
    }
    fn preimage(&self, b_prime: &ObjOf<F>) -> Result<ObjOf<F>> {
        let mut b = b_prime.clone();
        for f in self.letters.iter().rev() {
            b = f.preimage(&b)?;
        }
        Ok(b)
    }
}

/// Outcome of an exhaustive law check on a fragment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub identity_checks: u64,
    pub composition_checks: u64,
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn violate(&mut self, msg: String) {
        // keep reports readable on badly broken fixtures
        if self.violations.len() < 64 {
            self.violations.push(msg);
        }
    }
}

fn hom_table<C: Category>(cat: &C, objects: &[C::Obj], cap: u64) -> Result<Vec<Vec<Vec<C::Mor>>>> {
    objects
        .iter()
        .map(|a| objects.iter().map(|b| cat.hom(a, b, cap)).collect())
        .collect()
}

/// Checks identity laws, source/target bookkeeping and associativity on every
/// composable triple among `objects`.
#[allow(clippy::needless_range_loop)]
pub fn check_category_laws<C: Category>(cat: &C, objects: &[C::Obj], cap: u64) -> Result<LawReport> {
    let homs = hom_table(cat, objects, cap)?;
    let mut report = LawReport::default();
    let n = objects.len();
    for i in 0..n {
        for j in 0..n {
            let a = &objects[i];
            let b = &objects[j];
            let mut seen = HashSet::new();
            for f in &homs[i][j] {
                report.identity_checks += 1;
                if !seen.insert(f) {
                    report.violate(format!("{} listed twice in its hom-set", cat.show_mor(f)));
                }
                if &cat.source(f) != a || &cat.target(f) != b {
                    report.violate(format!(
                        "{} enumerated in hom({}, {}) but has wrong endpoints",
                        cat.show_mor(f),
                        cat.show_obj(a),
                        cat.show_obj(b)
                    ));
                }
                let left = cat.compose(&cat.identity(b), f)?;
                let right = cat.compose(f, &cat.identity(a))?;
                if &left != f || &right != f {
                    report.violate(format!("identity law fails at {}", cat.show_mor(f)));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if homs[i][j].is_empty() {
                continue;
            }
            for k in 0..n {
                if homs[j][k].is_empty() {
                    continue;
                }
                for f in &homs[i][j] {
                    for g in &homs[j][k] {
                        let gf = cat.compose(g, f)?;
                        if cat.source(&gf) != objects[i] || cat.target(&gf) != objects[k] {
                            report.violate(format!("{}·{} has wrong endpoints", cat.show_mor(g), cat.show_mor(f)));
                        }
                        for l in 0..n {
                            for h in &homs[k][l] {
                                report.composition_checks += 1;
                                let lhs = cat.compose(h, &gf)?;
                                let rhs = cat.compose(&cat.compose(h, g)?, f)?;
                                if lhs != rhs {
                                    report.violate(format!(
                                        "associativity fails at ({}, {}, {})",
                                        cat.show_mor(h),
                                        cat.show_mor(g),
                                        cat.show_mor(f)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Checks `F(id) = id`, endpoint preservation and `F(g·f) = F g · F f` on
/// every composable pair among `objects`.
#[allow(clippy::needless_range_loop)]
pub fn check_functor_laws<F: Functor>(functor: &F, objects: &[ObjOf<F>], cap: u64) -> Result<LawReport> {
    let dom = functor.dom();
    let cod = functor.cod();
    let homs = hom_table(dom, objects, cap)?;
    let mut report = LawReport::default();
    let n = objects.len();
    for (i, a) in objects.iter().enumerate() {
        report.identity_checks += 1;
        if functor.map_mor(&dom.identity(a)) != cod.identity(&functor.map_obj(a)) {
            report.violate(format!("F(id_{}) is not an identity", dom.show_obj(a)));
        }
        for j in 0..n {
            for f in &homs[i][j] {
                let ff = functor.map_mor(f);
                if cod.source(&ff) != functor.map_obj(a) || cod.target(&ff) != functor.map_obj(&objects[j]) {
                    report.violate(format!("F{} has wrong endpoints", dom.show_mor(f)));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for f in &homs[i][j] {
                    let ff = functor.map_mor(f);
                    for g in &homs[j][k] {
                        report.composition_checks += 1;
                        let lhs = functor.map_mor(&dom.compose(g, f)?);
                        let rhs = cod.compose(&functor.map_mor(g), &ff)?;
                        if lhs != rhs {
                            report.violate(format!(
                                "F({}·{}) differs from F g·F f",
                                dom.show_mor(g),
                                dom.show_mor(f)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Result of lifting `b'` over `a` and comparing `F(hom(a, b))` with
/// `hom(F a, b')`.
#[derive(Clone, Debug)]
pub struct FrankReport<O> {
    pub lifted: O,
    pub hom_size: usize,
    pub image_size: usize,
    pub target_size: usize,
    pub passed: bool,
}

pub fn check_frank_at<F: Functor>(
    functor: &F,
    a: &ObjOf<F>,
    b_prime: &CodObjOf<F>,
    cap: u64,
) -> Result<FrankReport<ObjOf<F>>> {
    let b = functor.frank_lift(a, b_prime)?;
    let hom = functor.dom().hom(a, &b, cap)?;
    let image: BTreeSet<CodMorOf<F>> = hom.iter().map(|f| functor.map_mor(f)).collect();
    let target: BTreeSet<CodMorOf<F>> = functor
        .cod()
        .hom(&functor.map_obj(a), b_prime, cap)?
        .into_iter()
        .collect();
    let passed = &functor.map_obj(&b) == b_prime && image == target;
    Ok(FrankReport {
        lifted: b,
        hom_size: hom.len(),
        image_size: image.len(),
        target_size: target.len(),
        passed,
    })
}
