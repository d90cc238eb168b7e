//! The pigeonhole category `P` and its endofunctor `∂_P`.
//!
//! Objects are pairs `(k, i)` with `i ∈ {0, 1, 2}`. Morphisms are functions
//! composed in reverse order:
//!
//! * `(l,2) → (m,2)`: surjections `p: [m] → [l]` with unit steps,
//! * `(k,i) → (l,2)` for `i ∈ {0,1}`: maps `[l] → [k]` constant on three
//!   consecutive non-empty intervals, with fixed end values,
//! * identities.
//!
//! For `i = 1` the end values depend on [`Orientation`]: the default takes
//! `x(1) = k` and `x(l) = k - 1`; the mirrored variant swaps them.
//!
//! Canonical encoding (`P/v1`, `Pm/v1`): objects are `k: u32, i: u8`;
//! morphisms carry a shape tag, the endpoints and the value vector as `u32`.

use std::collections::BTreeSet;

use crate::category::{Category, Functor, HomIter};
use crate::combinatorics::binomial;
use crate::encoding::{Reader, Writer};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PObj {
    pub k: u32,
    pub i: u8,
}

impl PObj {
    pub fn new(k: u32, i: u8) -> Result<Self> {
        let ok = match i {
            0 | 2 => k >= 1,
            1 => k >= 2,
            _ => false,
        };
        if !ok {
            return Err(Error::Precondition(format!("({k},{i}) is not an object of P")));
        }
        Ok(Self { k, i })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PMor {
    /// Identity at `(k, 0)` or `(k, 1)`.
    Id(PObj),
    /// `(k, i) → (l, 2)` with `i ∈ {0, 1}`; `x: [l] → [k]`.
    Step { from: PObj, l: u32, x: Vec<u32> },
    /// `(l, 2) → (m, 2)`; `p: [m] → [l]`.
    Surj { l: u32, p: Vec<u32> },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `x(1) = k` and `x(l) = k - 1`.
    #[default]
    Definition,
    /// `x(1) = k - 1` and `x(l) = k`.
    Mirror,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PCategory {
    pub orientation: Orientation,
}

impl PCategory {
    pub fn new(orientation: Orientation) -> Self {
        Self { orientation }
    }

    fn end_values(&self, from: PObj) -> (u32, u32) {
        match (from.i, self.orientation) {
            (1, Orientation::Definition) => (from.k, from.k - 1),
            (1, Orientation::Mirror) => (from.k - 1, from.k),
            _ => (from.k, from.k),
        }
    }

    /// Is `x` constant on three consecutive non-empty intervals with the
    /// required end values?
    pub fn is_step(&self, from: PObj, x: &[u32]) -> bool {
        let l = x.len();
        if l < 3 || x.iter().any(|&v| v == 0 || v > from.k) {
            return false;
        }
        let (first, last) = self.end_values(from);
        if x[0] != first || x[l - 1] != last {
            return false;
        }
        let runs = 1 + x.windows(2).filter(|w| w[0] != w[1]).count();
        runs <= 3
    }

    fn steps(&self, from: PObj, l: u32) -> Vec<Vec<u32>> {
        let l = l as usize;
        if l < 3 {
            return Vec::new();
        }
        let (first, last) = self.end_values(from);
        let mut out = BTreeSet::new();
        for a in 1..l {
            for b in a + 2..=l {
                for mid in 1..=from.k {
                    let mut x = vec![first; a];
                    x.extend(std::iter::repeat_n(mid, b - 1 - a));
                    x.extend(std::iter::repeat_n(last, l - b + 1));
                    out.insert(x);
                }
            }
        }
        out.into_iter().collect()
    }

    fn surjections(l: u32, m: u32) -> Vec<Vec<u32>> {
        // choose the l-1 positions j in [m-1] with p(j+1) = p(j) + 1
        if l == 0 || m < l {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut p = Vec::with_capacity(m as usize);
        fn rec(p: &mut Vec<u32>, l: u32, m: u32, out: &mut Vec<Vec<u32>>) {
            if p.len() == m as usize {
                if *p.last().unwrap() == l {
                    out.push(p.clone());
                }
                return;
            }
            let cur = *p.last().unwrap();
            let remaining = m as usize - p.len();
            // stay
            if ((l - cur) as usize) < remaining {
                p.push(cur);
                rec(p, l, m, out);
                p.pop();
            }
            if cur < l {
                p.push(cur + 1);
                rec(p, l, m, out);
                p.pop();
            }
        }
        p.push(1);
        rec(&mut p, l, m, &mut out);
        out
    }

    pub fn is_surjection(l: u32, p: &[u32]) -> bool {
        !p.is_empty() && p[0] == 1 && *p.last().unwrap() == l && p.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
    }

    fn check_mor(&self, f: &PMor) -> Result<()> {
        let ok = match f {
            PMor::Id(o) => PObj::new(o.k, o.i).is_ok() && o.i != 2,
            PMor::Step { from, l, x } => {
                from.i != 2 && PObj::new(from.k, from.i).is_ok() && x.len() == *l as usize && self.is_step(*from, x)
            }
            PMor::Surj { l, p } => *l >= 1 && Self::is_surjection(*l, p),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Decode {
                offset: 0,
                reason: format!("{f:?} is not a morphism of P"),
            })
        }
    }
}

impl Category for PCategory {
    type Obj = PObj;
    type Mor = PMor;

    fn name(&self) -> String {
        match self.orientation {
            Orientation::Definition => "P".into(),
            Orientation::Mirror => "Pm".into(),
        }
    }

    fn source(&self, f: &PMor) -> PObj {
        match f {
            PMor::Id(o) => *o,
            PMor::Step { from, .. } => *from,
            PMor::Surj { l, .. } => PObj { k: *l, i: 2 },
        }
    }

    fn target(&self, f: &PMor) -> PObj {
        match f {
            PMor::Id(o) => *o,
            PMor::Step { l, .. } => PObj { k: *l, i: 2 },
            PMor::Surj { p, .. } => PObj {
                k: p.len() as u32,
                i: 2,
            },
        }
    }

    fn hom_iter<'a>(&'a self, a: &PObj, b: &PObj) -> HomIter<'a, PMor> {
        let out: Vec<PMor> = match (a.i, b.i) {
            (2, 2) => Self::surjections(a.k, b.k)
                .into_iter()
                .map(|p| PMor::Surj { l: a.k, p })
                .collect(),
            (_, 2) => self
                .steps(*a, b.k)
                .into_iter()
                .map(|x| PMor::Step { from: *a, l: b.k, x })
                .collect(),
            _ if a == b => vec![PMor::Id(*a)],
            _ => Vec::new(),
        };
        Box::new(out.into_iter())
    }

    fn hom_count(&self, a: &PObj, b: &PObj) -> Option<u64> {
        match (a.i, b.i) {
            (2, 2) if a.k >= 1 && b.k >= a.k => binomial(b.k as u64 - 1, a.k as u64 - 1),
            (2, 2) => Some(0),
            _ => Some(self.hom_iter(a, b).count() as u64),
        }
    }

    fn compose(&self, g: &PMor, f: &PMor) -> Result<PMor> {
        if self.target(f) != self.source(g) {
            return Err(Error::DomainMismatch(format!("cannot compose {g:?} after {f:?}")));
        }
        Ok(match (g, f) {
            (PMor::Id(_), f) => f.clone(),
            (g, PMor::Id(_)) => g.clone(),
            (PMor::Surj { p, .. }, PMor::Step { from, x, .. }) => PMor::Step {
                from: *from,
                l: p.len() as u32,
                x: p.iter().map(|&j| x[(j - 1) as usize]).collect(),
            },
            (PMor::Surj { p: q, .. }, PMor::Surj { l, p }) => PMor::Surj {
                l: *l,
                p: q.iter().map(|&j| p[(j - 1) as usize]).collect(),
            },
            _ => return Err(Error::DomainMismatch(format!("cannot compose {g:?} after {f:?}"))),
        })
    }

    fn identity(&self, a: &PObj) -> PMor {
        match a.i {
            2 => PMor::Surj {
                l: a.k,
                p: (1..=a.k).collect(),
            },
            _ => PMor::Id(*a),
        }
    }

    /// Objects with `k <= budget`.
    fn objects(&self, budget: usize) -> Vec<PObj> {
        let mut out = Vec::new();
        for k in 1..=budget as u32 {
            for i in 0..3u8 {
                if let Ok(o) = PObj::new(k, i) {
                    out.push(o);
                }
            }
        }
        out.sort();
        out
    }

    fn encode_obj(&self, a: &PObj) -> Vec<u8> {
        Writer::new().u32(a.k).u8(a.i).finish()
    }

    fn decode_obj(&self, bytes: &[u8]) -> Result<PObj> {
        let mut r = Reader::new(bytes);
        let k = r.u32()?;
        let i = r.u8()?;
        r.finish()?;
        PObj::new(k, i).map_err(|e| Error::Decode {
            offset: 0,
            reason: e.to_string(),
        })
    }

    fn encode_mor(&self, f: &PMor) -> Vec<u8> {
        let mut w = Writer::new();
        match f {
            PMor::Id(o) => w.u8(0).u32(o.k).u8(o.i),
            PMor::Step { from, l, x } => w.u8(1).u32(from.k).u8(from.i).u32(*l).u32s(x),
            PMor::Surj { l, p } => w.u8(2).u32(*l).u32(p.len() as u32).u32s(p),
        };
        w.finish()
    }

    fn decode_mor(&self, bytes: &[u8]) -> Result<PMor> {
        let mut r = Reader::new(bytes);
        let f = match r.u8()? {
            0 => {
                let k = r.u32()?;
                let i = r.u8()?;
                PMor::Id(PObj { k, i })
            }
            1 => {
                let k = r.u32()?;
                let i = r.u8()?;
                let l = r.len(4)?;
                let x = r.u32s(l)?;
                PMor::Step {
                    from: PObj { k, i },
                    l: l as u32,
                    x,
                }
            }
            2 => {
                let l = r.u32()?;
                let m = r.len(4)?;
                PMor::Surj { l, p: r.u32s(m)? }
            }
            t => return Err(r.err(format!("unknown morphism tag {t}"))),
        };
        r.finish()?;
        self.check_mor(&f)?;
        Ok(f)
    }

    fn show_obj(&self, a: &PObj) -> String {
        format!("({},{})", a.k, a.i)
    }

    fn show_mor(&self, f: &PMor) -> String {
        match f {
            PMor::Id(o) => format!("id{}", self.show_obj(o)),
            PMor::Step { from, x, .. } => format!("{}→{:?}", self.show_obj(from), x),
            PMor::Surj { p, .. } => format!("{p:?}"),
        }
    }

    /// `k,i` or `(k,i)`.
    fn parse_obj(&self, text: &str) -> Result<PObj> {
        let t = text.trim();
        if t.starts_with("hex:") {
            return crate::category::parse_hex_fallback(t, |b| self.decode_obj(b));
        }
        let inner = t.trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let bad = || Error::Parse {
            offset: 0,
            reason: format!("`{t}` is not a P-object"),
        };
        if parts.len() != 2 {
            return Err(bad());
        }
        let k = parts[0].parse().map_err(|_| bad())?;
        let i = parts[1].parse().map_err(|_| bad())?;
        PObj::new(k, i).map_err(|_| bad())
    }
}

/// `∂_P`: `(k,1) ↦ (k-1,0)` and lowers the top value of `(k,1) → (l,2)`
/// arrows; everything else is fixed.
#[derive(Clone, Copy, Debug, Default)]
pub struct PPartial {
    cat: PCategory,
}

impl PPartial {
    pub fn new(orientation: Orientation) -> Self {
        Self {
            cat: PCategory::new(orientation),
        }
    }
}

impl Functor for PPartial {
    type Dom = PCategory;
    type Cod = PCategory;

    fn dom(&self) -> &PCategory {
        &self.cat
    }
    fn cod(&self) -> &PCategory {
        &self.cat
    }
    fn name(&self) -> String {
        match self.cat.orientation {
            Orientation::Definition => "dP".into(),
            Orientation::Mirror => "dPm".into(),
        }
    }
    fn map_obj(&self, a: &PObj) -> PObj {
        match a.i {
            1 => PObj { k: a.k - 1, i: 0 },
            _ => *a,
        }
    }
    fn map_mor(&self, f: &PMor) -> PMor {
        match f {
            PMor::Id(o) => PMor::Id(self.map_obj(o)),
            PMor::Step { from, l, x } if from.i == 1 => {
                let cap = from.k - 1;
                PMor::Step {
                    from: self.map_obj(from),
                    l: *l,
                    x: x.iter().map(|&v| v.min(cap)).collect(),
                }
            }
            other => other.clone(),
        }
    }
    fn frank_lift(&self, a: &PObj, b_prime: &PObj) -> Result<PObj> {
        if b_prime.i == 0 && a.i == 1 && self.map_obj(a) == *b_prime {
            return Ok(*a);
        }
        self.preimage(b_prime)
    }
    fn preimage(&self, b_prime: &PObj) -> Result<PObj> {
        match b_prime.i {
            1 => Err(Error::NoPreimage(self.cat.show_obj(b_prime))),
            _ => Ok(*b_prime),
        }
    }
}

pub fn p_category() -> PCategory {
    PCategory::default()
}

pub fn p_partial() -> PPartial {
    PPartial::default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(k: u32, i: u8) -> PObj {
        PObj::new(k, i).unwrap()
    }

    #[test]
    fn step_hom_counts() {
        // brute force over all maps [4] -> [2] with at most three runs
        let p = p_category();
        let homs: Vec<_> = p.hom_iter(&o(2, 1), &o(4, 2)).collect();
        assert_eq!(homs.len(), 3);
        let pm = PCategory::new(Orientation::Mirror);
        assert_eq!(pm.hom_iter(&o(2, 1), &o(4, 2)).count(), 3);
        assert_eq!(p.hom_iter(&o(2, 1), &o(2, 2)).count(), 0);
    }

    #[test]
    fn surjection_counts_are_binomial() {
        let p = p_category();
        for l in 1..6 {
            for m in 1..7 {
                assert_eq!(
                    p.hom_iter(&o(l, 2), &o(m, 2)).count() as u64,
                    p.hom_count(&o(l, 2), &o(m, 2)).unwrap()
                );
            }
        }
    }

    #[test]
    fn partial_on_objects() {
        let d = p_partial();
        assert_eq!(d.map_obj(&o(3, 1)), o(2, 0));
        assert_eq!(d.map_obj(&o(3, 0)), o(3, 0));
        assert_eq!(d.map_obj(&o(3, 2)), o(3, 2));
    }

    #[test]
    fn partial_fixes_surjections() {
        let d = p_partial();
        let p = p_category();
        for f in p.hom_iter(&o(2, 2), &o(4, 2)) {
            assert_eq!(d.map_mor(&f), f);
        }
    }

    #[test]
    fn no_preimage_for_tag_one_objects() {
        assert!(matches!(p_partial().preimage(&o(3, 1)), Err(Error::NoPreimage(_))));
    }

    #[test]
    fn reverse_order_composition() {
        let p = p_category();
        let x = PMor::Step {
            from: o(2, 1),
            l: 3,
            x: vec![2, 2, 1],
        };
        let s = PMor::Surj {
            l: 3,
            p: vec![1, 2, 2, 3],
        };
        assert_eq!(
            p.compose(&s, &x).unwrap(),
            PMor::Step {
                from: o(2, 1),
                l: 4,
                x: vec![2, 2, 2, 1]
            }
        );
    }
}
