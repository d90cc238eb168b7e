//! The category `R` of finite subsets: objects are naturals, `hom(m, n)` is
//! the set of pairs `(x, n)` with `x ⊆ [n]`, `|x| = m`.
//!
//! Canonical encoding (`R/v1`): an object is one big-endian `u64`; a
//! morphism is `n: u64`, `|x|: u32`, then the sorted elements of `x` as
//! `u64`. Hom-sets are ordered lexicographically by `x`.

use crate::category::{Category, Functor, HomIter};
use crate::combinatorics::{binomial, Combinations};
use crate::encoding::{Reader, Writer};
use crate::error::{Error, Result};

pub type RObj = u64;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RMor {
    /// Sorted elements of the subset.
    pub x: Vec<u64>,
    pub n: u64,
}

impl RMor {
    pub fn new(mut x: Vec<u64>, n: u64) -> Result<Self> {
        x.sort_unstable();
        x.dedup();
        if x.last().is_some_and(|&m| m > n) || x.first() == Some(&0) {
            return Err(Error::Precondition(format!("{x:?} is not a subset of [{n}]")));
        }
        Ok(Self { x, n })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RCategory;

impl Category for RCategory {
    type Obj = RObj;
    type Mor = RMor;

    fn name(&self) -> String {
        "R".into()
    }

    fn source(&self, f: &RMor) -> u64 {
        f.x.len() as u64
    }

    fn target(&self, f: &RMor) -> u64 {
        f.n
    }

    fn hom_iter<'a>(&'a self, a: &u64, b: &u64) -> HomIter<'a, RMor> {
        let n = *b;
        if *a > n {
            return Box::new(std::iter::empty());
        }
        Box::new(Combinations::new(n, *a as usize).map(move |x| RMor { x, n }))
    }

    fn hom_count(&self, a: &u64, b: &u64) -> Option<u64> {
        binomial(*b, *a)
    }

    fn compose(&self, g: &RMor, f: &RMor) -> Result<RMor> {
        if f.n != g.x.len() as u64 {
            return Err(Error::DomainMismatch(format!(
                "cannot compose {} after {}",
                self.show_mor(g),
                self.show_mor(f)
            )));
        }
        // f_y: [m] -> y is the increasing bijection
        let x = f.x.iter().map(|&i| g.x[(i - 1) as usize]).collect();
        Ok(RMor { x, n: g.n })
    }

    fn identity(&self, a: &u64) -> RMor {
        RMor {
            x: (1..=*a).collect(),
            n: *a,
        }
    }

    fn objects(&self, budget: usize) -> Vec<u64> {
        (0..=budget as u64).collect()
    }

    fn encode_obj(&self, a: &u64) -> Vec<u8> {
        Writer::new().u64(*a).finish()
    }

    fn decode_obj(&self, bytes: &[u8]) -> Result<u64> {
        let mut r = Reader::new(bytes);
        let n = r.u64()?;
        r.finish()?;
        Ok(n)
    }

    fn encode_mor(&self, f: &RMor) -> Vec<u8> {
        Writer::new().u64(f.n).u32(f.x.len() as u32).u64s(&f.x).finish()
    }

    fn decode_mor(&self, bytes: &[u8]) -> Result<RMor> {
        let mut r = Reader::new(bytes);
        let n = r.u64()?;
        let len = r.len(8)?;
        let x = r.u64s(len)?;
        r.finish()?;
        if x.windows(2).any(|w| w[0] >= w[1]) || x.first() == Some(&0) || x.last().is_some_and(|&m| m > n) {
            return Err(Error::Decode {
                offset: 12,
                reason: "subset is not a sorted subset of [n]".into(),
            });
        }
        Ok(RMor { x, n })
    }

    fn show_obj(&self, a: &u64) -> String {
        a.to_string()
    }

    fn show_mor(&self, f: &RMor) -> String {
        let xs: Vec<String> = f.x.iter().map(|v| v.to_string()).collect();
        format!("({{{}}},{})", xs.join(","), f.n)
    }

    fn parse_obj(&self, text: &str) -> Result<u64> {
        let t = text.trim();
        if t.starts_with("hex:") {
            return crate::category::parse_hex_fallback(t, |b| self.decode_obj(b));
        }
        t.parse().map_err(|_| Error::Parse {
            offset: 0,
            reason: format!("`{t}` is not an R-object"),
        })
    }

    /// Accepts `{2,5}:5`, `({2,5},5)` or `hex:…`.
    fn parse_mor(&self, text: &str) -> Result<RMor> {
        let t = text.trim();
        if t.starts_with("hex:") {
            return crate::category::parse_hex_fallback(t, |b| self.decode_mor(b));
        }
        let t = t.trim_start_matches('(').trim_end_matches(')');
        let close = t.find('}').ok_or(Error::Parse {
            offset: 0,
            reason: "expected `{…}`".into(),
        })?;
        let inner = t[..close].trim_start_matches('{');
        let rest = t[close + 1..].trim_start_matches([',', ':']).trim();
        let n: u64 = rest.parse().map_err(|_| Error::Parse {
            offset: close + 1,
            reason: format!("bad ambient size `{rest}`"),
        })?;
        let mut x = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            x.push(part.parse().map_err(|_| Error::Parse {
                offset: 1,
                reason: format!("bad element `{part}`"),
            })?);
        }
        RMor::new(x, n)
    }
}

/// `∂_R`: drops the maximum of the subset and lowers the ambient size by one
/// (floored at zero).
#[derive(Clone, Copy, Debug, Default)]
pub struct RPartial {
    cat: RCategory,
}

impl RPartial {
    pub fn new() -> Self {
        Self::default()
    }
}

pub fn monus(n: u64) -> u64 {
    n.saturating_sub(1)
}

impl Functor for RPartial {
    type Dom = RCategory;
    type Cod = RCategory;

    fn dom(&self) -> &RCategory {
        &self.cat
    }
    fn cod(&self) -> &RCategory {
        &self.cat
    }
    fn name(&self) -> String {
        "dR".into()
    }
    fn map_obj(&self, a: &u64) -> u64 {
        monus(*a)
    }
    fn map_mor(&self, f: &RMor) -> RMor {
        let mut x = f.x.clone();
        x.pop();
        RMor { x, n: monus(f.n) }
    }
    fn frank_lift(&self, _a: &u64, b_prime: &u64) -> Result<u64> {
        self.preimage(b_prime)
    }
    fn preimage(&self, b_prime: &u64) -> Result<u64> {
        b_prime
            .checked_add(1)
            .ok_or_else(|| Error::Overflow("lift of an R-object".into()))
    }
}

pub fn r_category() -> RCategory {
    RCategory
}

pub fn r_partial() -> RPartial {
    RPartial::new()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: &[u64], n: u64) -> RMor {
        RMor::new(x.to_vec(), n).unwrap()
    }

    #[test]
    fn composition_uses_increasing_bijection() {
        let r = RCategory;
        assert_eq!(r.compose(&m(&[2, 4, 5], 5), &m(&[1, 3], 3)).unwrap(), m(&[2, 5], 5));
    }

    #[test]
    fn mismatched_composition_is_rejected() {
        let r = RCategory;
        assert!(matches!(
            r.compose(&m(&[2, 4], 5), &m(&[1, 3], 3)),
            Err(Error::DomainMismatch(_))
        ));
    }

    #[test]
    fn partial_drops_max_and_floors_at_zero() {
        let d = RPartial::new();
        assert_eq!(d.map_mor(&m(&[2, 5], 5)), m(&[2], 4));
        assert_eq!(d.map_mor(&m(&[], 3)), m(&[], 2));
        assert_eq!(d.map_mor(&m(&[], 0)), m(&[], 0));
        assert_eq!(d.map_obj(&0), 0);
    }

    #[test]
    fn identity_is_full_set() {
        let r = RCategory;
        assert_eq!(r.identity(&3), m(&[1, 2, 3], 3));
        let f = m(&[1, 3], 4);
        assert_eq!(r.compose(&r.identity(&4), &f).unwrap(), f);
        assert_eq!(r.compose(&f, &r.identity(&2)).unwrap(), f);
    }

    #[test]
    fn hom_sizes_are_binomials() {
        let r = RCategory;
        for n in 0..7u64 {
            for k in 0..8u64 {
                assert_eq!(r.hom_iter(&k, &n).count() as u64, binomial(n, k).unwrap());
            }
        }
    }

    #[test]
    fn hom_order_matches_encoding_order() {
        let r = RCategory;
        let hom: Vec<_> = r.hom_iter(&2, &5).collect();
        let enc: Vec<_> = hom.iter().map(|f| r.encode_mor(f)).collect();
        let mut sorted = enc.clone();
        sorted.sort();
        assert_eq!(enc, sorted);
    }

    #[test]
    fn text_forms_parse() {
        let r = RCategory;
        assert_eq!(r.parse_mor("{2,5}:5").unwrap(), m(&[2, 5], 5));
        assert_eq!(r.parse_mor("({},3)").unwrap(), m(&[], 3));
        assert!(r.parse_mor("{7}:5").is_err());
    }
}
