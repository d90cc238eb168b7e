//! The Hales–Jewett category `HJ_{k0}` and its endofunctor `∂_{k0}`.
//!
//! Objects are lengths `l` and surjections `v: [-k0, 0] → [k]`, stored as the
//! value vector `v(-k0), …, v(0)`. Morphisms are
//!
//! * words `f: [l] → im(v)` in `hom(v, l)`,
//! * selectors `g: [l2] → [-k0, l1]` hitting all of `[l1]` in `hom(l1, l2)`,
//! * identities on surjection objects.
//!
//! Canonical encoding (`HJ<k0>/v1`): objects are a tag byte followed by `l`
//! or the values of `v` as `u32`; selector values are shifted by `k0` so that
//! all payloads are unsigned.

use crate::category::{Category, Functor, HomIter};
use crate::combinatorics::Odometer;
use crate::encoding::{Reader, Writer};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HjObj {
    Len(u32),
    Sur(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HjMor {
    Word { v: Vec<u32>, f: Vec<u32> },
    Sel { l1: u32, g: Vec<i64> },
    IdSur(Vec<u32>),
}

fn top(v: &[u32]) -> u32 {
    v.iter().copied().max().unwrap_or(0)
}

/// `n ⊽ 1 = max(n - 1, 1)`.
pub fn dotminus_one(n: u32) -> u32 {
    n.saturating_sub(1).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HjCategory {
    pub k0: u32,
}

impl HjCategory {
    pub fn new(k0: u32) -> Self {
        Self { k0 }
    }

    pub fn is_surjection(&self, v: &[u32]) -> bool {
        if v.len() != self.k0 as usize + 1 || v.contains(&0) {
            return false;
        }
        let k = top(v);
        (1..=k).all(|x| v.contains(&x))
    }

    /// The object `id_k`: `j ↦ j + k0 + 1`, onto `[k0 + 1]`.
    pub fn id_object(&self) -> HjObj {
        HjObj::Sur((1..=self.k0 + 1).collect())
    }

    /// All surjections `[-k0, 0] → [k]` for some `k`, lexicographically.
    pub fn surjections(&self) -> Vec<Vec<u32>> {
        let n = self.k0 as usize + 1;
        Odometer::new(n, 1, n as i64)
            .map(|v| v.into_iter().map(|x| x as u32).collect::<Vec<_>>())
            .filter(|v| self.is_surjection(v))
            .collect()
    }

    fn check_obj(&self, a: &HjObj) -> bool {
        match a {
            HjObj::Len(_) => true,
            HjObj::Sur(v) => self.is_surjection(v),
        }
    }

    fn check_mor(&self, f: &HjMor) -> bool {
        match f {
            HjMor::Word { v, f } => self.is_surjection(v) && f.iter().all(|&x| x >= 1 && x <= top(v)),
            HjMor::Sel { l1, g } => {
                g.iter().all(|&x| x >= -(self.k0 as i64) && x <= *l1 as i64) && (1..=*l1 as i64).all(|x| g.contains(&x))
            }
            HjMor::IdSur(v) => self.is_surjection(v),
        }
    }

    /// `(v⌢f)(j)` for `j ∈ [-k0, l]`.
    fn concat_at(&self, v: &[u32], f: &[u32], j: i64) -> u32 {
        if j <= 0 {
            v[(j + self.k0 as i64) as usize]
        } else {
            f[(j - 1) as usize]
        }
    }
}

impl Category for HjCategory {
    type Obj = HjObj;
    type Mor = HjMor;

    fn name(&self) -> String {
        format!("HJ{}", self.k0)
    }

    fn source(&self, f: &HjMor) -> HjObj {
        match f {
            HjMor::Word { v, .. } | HjMor::IdSur(v) => HjObj::Sur(v.clone()),
            HjMor::Sel { l1, .. } => HjObj::Len(*l1),
        }
    }

    fn target(&self, f: &HjMor) -> HjObj {
        match f {
            HjMor::Word { f, .. } => HjObj::Len(f.len() as u32),
            HjMor::Sel { g, .. } => HjObj::Len(g.len() as u32),
            HjMor::IdSur(v) => HjObj::Sur(v.clone()),
        }
    }

    fn hom_iter<'a>(&'a self, a: &HjObj, b: &HjObj) -> HomIter<'a, HjMor> {
        match (a, b) {
            (HjObj::Sur(v), HjObj::Len(l)) => {
                let v = v.clone();
                Box::new(Odometer::new(*l as usize, 1, top(&v) as i64).map(move |f| HjMor::Word {
                    v: v.clone(),
                    f: f.into_iter().map(|x| x as u32).collect(),
                }))
            }
            (HjObj::Len(l1), HjObj::Len(l2)) => {
                let l1 = *l1;
                Box::new(
                    Odometer::new(*l2 as usize, -(self.k0 as i64), l1 as i64)
                        .filter(move |g| (1..=l1 as i64).all(|x| g.contains(&x)))
                        .map(move |g| HjMor::Sel { l1, g }),
                )
            }
            (HjObj::Sur(v), HjObj::Sur(w)) if v == w => Box::new(std::iter::once(HjMor::IdSur(v.clone()))),
            _ => Box::new(std::iter::empty()),
        }
    }

    fn hom_count(&self, a: &HjObj, b: &HjObj) -> Option<u64> {
        match (a, b) {
            (HjObj::Sur(v), HjObj::Len(l)) => (top(v) as u64).checked_pow(*l),
            _ => Some(self.hom_iter(a, b).count() as u64),
        }
    }

    fn compose(&self, g: &HjMor, f: &HjMor) -> Result<HjMor> {
        if self.target(f) != self.source(g) {
            return Err(Error::DomainMismatch(format!("cannot compose {g:?} after {f:?}")));
        }
        Ok(match (g, f) {
            (HjMor::IdSur(_), f) => f.clone(),
            (g, HjMor::IdSur(_)) => g.clone(),
            (HjMor::Sel { g, .. }, HjMor::Word { v, f }) => HjMor::Word {
                v: v.clone(),
                f: g.iter().map(|&j| self.concat_at(v, f, j)).collect(),
            },
            (HjMor::Sel { g: g2, .. }, HjMor::Sel { l1, g: g1 }) => HjMor::Sel {
                l1: *l1,
                g: g2
                    .iter()
                    .map(|&j| if j <= 0 { j } else { g1[(j - 1) as usize] })
                    .collect(),
            },
            _ => return Err(Error::DomainMismatch(format!("cannot compose {g:?} after {f:?}"))),
        })
    }

    fn identity(&self, a: &HjObj) -> HjMor {
        match a {
            HjObj::Len(l) => HjMor::Sel {
                l1: *l,
                g: (1..=*l as i64).collect(),
            },
            HjObj::Sur(v) => HjMor::IdSur(v.clone()),
        }
    }

    /// Lengths up to `budget` followed by every surjection.
    fn objects(&self, budget: usize) -> Vec<HjObj> {
        let mut out: Vec<HjObj> = (0..=budget as u32).map(HjObj::Len).collect();
        out.extend(self.surjections().into_iter().map(HjObj::Sur));
        out
    }

    fn encode_obj(&self, a: &HjObj) -> Vec<u8> {
        let mut w = Writer::new();
        match a {
            HjObj::Len(l) => w.u8(0).u32(*l),
            HjObj::Sur(v) => w.u8(1).u32s(v),
        };
        w.finish()
    }

    fn decode_obj(&self, bytes: &[u8]) -> Result<HjObj> {
        let mut r = Reader::new(bytes);
        let a = match r.u8()? {
            0 => HjObj::Len(r.u32()?),
            1 => HjObj::Sur(r.u32s(self.k0 as usize + 1)?),
            t => return Err(r.err(format!("unknown object tag {t}"))),
        };
        r.finish()?;
        if !self.check_obj(&a) {
            return Err(Error::Decode {
                offset: 1,
                reason: "not a surjection onto an initial segment".into(),
            });
        }
        Ok(a)
    }

    fn encode_mor(&self, f: &HjMor) -> Vec<u8> {
        let mut w = Writer::new();
        match f {
            HjMor::Word { v, f } => w.u8(0).u32s(v).u32(f.len() as u32).u32s(f),
            HjMor::Sel { l1, g } => {
                w.u8(1).u32(*l1).u32(g.len() as u32);
                for &x in g {
                    w.u32((x + self.k0 as i64) as u32);
                }
                &mut w
            }
            HjMor::IdSur(v) => w.u8(2).u32s(v),
        };
        w.finish()
    }

    fn decode_mor(&self, bytes: &[u8]) -> Result<HjMor> {
        let mut r = Reader::new(bytes);
        let n = self.k0 as usize + 1;
        let f = match r.u8()? {
            0 => {
                let v = r.u32s(n)?;
                let l = r.len(4)?;
                HjMor::Word { v, f: r.u32s(l)? }
            }
            1 => {
                let l1 = r.u32()?;
                let l2 = r.len(4)?;
                let g = r.u32s(l2)?.into_iter().map(|x| x as i64 - self.k0 as i64).collect();
                HjMor::Sel { l1, g }
            }
            2 => HjMor::IdSur(r.u32s(n)?),
            t => return Err(r.err(format!("unknown morphism tag {t}"))),
        };
        r.finish()?;
        if !self.check_mor(&f) {
            return Err(Error::Decode {
                offset: 1,
                reason: format!("{f:?} is not a morphism of HJ{}", self.k0),
            });
        }
        Ok(f)
    }

    fn show_obj(&self, a: &HjObj) -> String {
        match a {
            HjObj::Len(l) => l.to_string(),
            HjObj::Sur(v) => format!("v{v:?}"),
        }
    }

    /// `l` for a length, `v:1,2` for a surjection.
    fn parse_obj(&self, text: &str) -> Result<HjObj> {
        let t = text.trim();
        if t.starts_with("hex:") {
            return crate::category::parse_hex_fallback(t, |b| self.decode_obj(b));
        }
        let bad = || Error::Parse {
            offset: 0,
            reason: format!("`{t}` is not an HJ{} object", self.k0),
        };
        if t == "id" {
            return Ok(self.id_object());
        }
        let word = t
            .strip_prefix("v:")
            .or_else(|| t.strip_prefix("v[").and_then(|r| r.strip_suffix(']')));
        let a = match word {
            Some(rest) => HjObj::Sur(
                rest.split(',')
                    .map(|x| x.trim().parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad())?,
            ),
            None => HjObj::Len(t.parse().map_err(|_| bad())?),
        };
        if self.check_obj(&a) {
            Ok(a)
        } else {
            Err(bad())
        }
    }
}

/// `∂_{k0}`: caps values at `max(im v) ⊽ 1`; fixes lengths and selectors.
#[derive(Clone, Copy, Debug)]
pub struct HjPartial {
    cat: HjCategory,
}

impl HjPartial {
    pub fn new(k0: u32) -> Self {
        Self {
            cat: HjCategory::new(k0),
        }
    }

    fn cap(v: &[u32]) -> Vec<u32> {
        let c = dotminus_one(top(v));
        v.iter().map(|&x| x.min(c)).collect()
    }
}

impl Functor for HjPartial {
    type Dom = HjCategory;
    type Cod = HjCategory;

    fn dom(&self) -> &HjCategory {
        &self.cat
    }
    fn cod(&self) -> &HjCategory {
        &self.cat
    }
    fn name(&self) -> String {
        format!("d{}", self.cat.k0)
    }
    fn map_obj(&self, a: &HjObj) -> HjObj {
        match a {
            HjObj::Len(l) => HjObj::Len(*l),
            HjObj::Sur(v) => HjObj::Sur(Self::cap(v)),
        }
    }
    fn map_mor(&self, f: &HjMor) -> HjMor {
        match f {
            HjMor::Word { v, f } => {
                let c = dotminus_one(top(v));
                HjMor::Word {
                    v: Self::cap(v),
                    f: f.iter().map(|&x| x.min(c)).collect(),
                }
            }
            HjMor::Sel { .. } => f.clone(),
            HjMor::IdSur(v) => HjMor::IdSur(Self::cap(v)),
        }
    }
    fn frank_lift(&self, a: &HjObj, b_prime: &HjObj) -> Result<HjObj> {
        if let HjObj::Sur(_) = b_prime {
            if &self.map_obj(a) == b_prime {
                return Ok(a.clone());
            }
        }
        self.preimage(b_prime)
    }
    fn preimage(&self, b_prime: &HjObj) -> Result<HjObj> {
        match b_prime {
            HjObj::Len(_) => Ok(b_prime.clone()),
            HjObj::Sur(w) => {
                let k = top(w);
                let found = if self.map_obj(b_prime) == *b_prime {
                    Some(w.clone())
                } else {
                    Odometer::new(w.len(), 1, k as i64 + 1)
                        .map(|v| v.into_iter().map(|x| x as u32).collect::<Vec<_>>())
                        .find(|v| top(v) == k + 1 && self.cat.is_surjection(v) && Self::cap(v) == *w)
                };
                found
                    .map(HjObj::Sur)
                    .ok_or_else(|| Error::NoPreimage(self.cat.show_obj(b_prime)))
            }
        }
    }
}

pub fn hj_category(k0: u32) -> HjCategory {
    HjCategory::new(k0)
}

pub fn hj_partial(k0: u32) -> HjPartial {
    HjPartial::new(k0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_selector_composition_is_pointwise() {
        let hj = hj_category(1);
        let v = vec![1, 2];
        let f = HjMor::Word {
            v: v.clone(),
            f: vec![2, 1],
        };
        let g = HjMor::Sel {
            l1: 2,
            g: vec![-1, 2, 1],
        };
        // (v⌢f)(-1) = 1, (v⌢f)(2) = 1, (v⌢f)(1) = 2
        assert_eq!(hj.compose(&g, &f).unwrap(), HjMor::Word { v, f: vec![1, 1, 2] });
    }

    #[test]
    fn selector_composition_keeps_constants() {
        let hj = hj_category(1);
        let g1 = HjMor::Sel { l1: 1, g: vec![1, 0] };
        let g2 = HjMor::Sel {
            l1: 2,
            g: vec![2, -1, 1],
        };
        assert_eq!(
            hj.compose(&g2, &g1).unwrap(),
            HjMor::Sel {
                l1: 1,
                g: vec![0, -1, 1]
            }
        );
    }

    #[test]
    fn partial_fixes_selectors_and_lengths() {
        let d = hj_partial(1);
        let hj = hj_category(1);
        for g in hj.hom_iter(&HjObj::Len(1), &HjObj::Len(2)) {
            assert_eq!(d.map_mor(&g), g);
        }
        assert_eq!(d.map_obj(&HjObj::Len(3)), HjObj::Len(3));
    }

    #[test]
    fn one_letter_alphabet_is_fixed() {
        let d = hj_partial(1);
        let f = HjMor::Word {
            v: vec![1, 1],
            f: vec![1, 1, 1],
        };
        assert_eq!(d.map_mor(&f), f);
        assert_eq!(dotminus_one(1), 1);
        assert_eq!(dotminus_one(3), 2);
    }

    #[test]
    fn shown_objects_parse_back() {
        let cat = HjCategory::new(1);
        for a in cat.objects(2) {
            assert_eq!(cat.parse_obj(&cat.show_obj(&a)).unwrap(), a);
        }
        assert_eq!(cat.parse_obj("v:1,2").unwrap(), cat.id_object());
    }

    #[test]
    fn surjections_of_two_points() {
        assert_eq!(hj_category(1).surjections(), vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn selector_hom_counts() {
        // maps [2] -> {-1, 0, 1} hitting 1: 9 - 4
        let hj = hj_category(1);
        assert_eq!(hj.hom_iter(&HjObj::Len(1), &HjObj::Len(2)).count(), 5);
        assert_eq!(hj.hom_count(&HjObj::Sur(vec![1, 2]), &HjObj::Len(3)), Some(8));
    }

    #[test]
    fn preimage_needs_a_repeated_top_value() {
        let d = hj_partial(1);
        assert!(d.preimage(&HjObj::Sur(vec![1, 2])).is_err());
        assert_eq!(d.preimage(&HjObj::Sur(vec![1, 1])).unwrap(), HjObj::Sur(vec![1, 1]));
        let d2 = hj_partial(2);
        assert_eq!(
            d2.preimage(&HjObj::Sur(vec![1, 2, 2])).unwrap(),
            HjObj::Sur(vec![1, 2, 3])
        );
    }
}
