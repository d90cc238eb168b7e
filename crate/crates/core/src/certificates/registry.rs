//! Functor identifiers used in certificates and on the command line, and
//! dispatch from an identifier to the concrete composition word.
//!
//! A letter is one of `dR`, `dP`, `dPm`, `d*`, `d<k0>` (the endofunctor of
//! `HJ<k0>`), or `prod(<letter>)` for the product functor over one of those.

use serde::{Deserialize, Serialize};

use crate::categories::hj::HjPartial;
use crate::categories::p::{Orientation, PPartial};
use crate::categories::product::ProductFunctor;
use crate::categories::r::RPartial;
use crate::categories::tree::TreePartial;
use crate::category::{Category, Functor, Word};
use crate::error::{Error, Result};

/// `letter^power`; power `0` is the identity on the letter's category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorSpec {
    pub letter: String,
    pub power: u32,
}

impl FunctorSpec {
    pub fn new(letter: impl Into<String>, power: u32) -> Self {
        Self {
            letter: letter.into(),
            power,
        }
    }

    /// Parses `letter` or `letter^n`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let (letter, power) = match t.rsplit_once('^') {
            Some((l, p)) => (
                l,
                p.parse().map_err(|_| Error::Parse {
                    offset: l.len() + 1,
                    reason: format!("bad exponent `{p}`"),
                })?,
            ),
            None => (t, 1),
        };
        let spec = Self::new(letter, power);
        dispatch(&spec, CategoryName)?;
        Ok(spec)
    }

    pub fn show(&self) -> String {
        format!("{}^{}", self.letter, self.power)
    }
}

/// Something to do with a concrete word; the generic parameter is the
/// letter's type.
pub trait WordVisitor {
    type Out;
    fn visit<F>(self, word: Word<F>) -> Self::Out
    where
        F: Functor<Cod = <F as Functor>::Dom> + Clone + 'static,
        F::Dom: Clone;
}

struct CategoryName;

impl WordVisitor for CategoryName {
    type Out = String;
    fn visit<F>(self, word: Word<F>) -> String
    where
        F: Functor<Cod = <F as Functor>::Dom> + Clone + 'static,
        F::Dom: Clone,
    {
        word.dom().name()
    }
}

/// Name of the category a letter acts on.
pub fn category_of(spec: &FunctorSpec) -> Result<String> {
    dispatch(spec, CategoryName)
}

fn hj_k0(letter: &str) -> Option<u32> {
    letter.strip_prefix('d').and_then(|k| k.parse().ok())
}

pub fn dispatch<V: WordVisitor>(spec: &FunctorSpec, v: V) -> Result<V::Out> {
    let n = spec.power as usize;
    let letter = spec.letter.as_str();
    if let Some(inner) = letter.strip_prefix("prod(").and_then(|s| s.strip_suffix(')')) {
        return Ok(match inner {
            "dR" => v.visit(Word::power(&ProductFunctor::new(RPartial::new()), n)),
            "dP" => v.visit(Word::power(
                &ProductFunctor::new(PPartial::new(Orientation::Definition)),
                n,
            )),
            "dPm" => v.visit(Word::power(&ProductFunctor::new(PPartial::new(Orientation::Mirror)), n)),
            "d*" => v.visit(Word::power(&ProductFunctor::new(TreePartial::new()), n)),
            other => match hj_k0(other) {
                Some(k0) => v.visit(Word::power(&ProductFunctor::new(HjPartial::new(k0)), n)),
                None => return Err(Error::UnknownId(spec.letter.clone())),
            },
        });
    }
    Ok(match letter {
        "dR" => v.visit(Word::power(&RPartial::new(), n)),
        "dP" => v.visit(Word::power(&PPartial::new(Orientation::Definition), n)),
        "dPm" => v.visit(Word::power(&PPartial::new(Orientation::Mirror), n)),
        "d*" => v.visit(Word::power(&TreePartial::new(), n)),
        other => match hj_k0(other) {
            Some(k0) => v.visit(Word::power(&HjPartial::new(k0), n)),
            None => return Err(Error::UnknownId(spec.letter.clone())),
        },
    })
}

/// The letter for a category name: its endofunctor `∂`.
pub fn default_letter(category: &str) -> Result<String> {
    let c = category.trim();
    if let Some(inner) = c.strip_prefix("Prod<").and_then(|s| s.strip_suffix('>')) {
        return Ok(format!("prod({})", default_letter(inner)?));
    }
    Ok(match c {
        "R" => "dR".into(),
        "P" => "dP".into(),
        "Pm" => "dPm".into(),
        "T" => "d*".into(),
        other => match other.strip_prefix("HJ").and_then(|k| k.parse::<u32>().ok()) {
            Some(k0) => format!("d{k0}"),
            None => return Err(Error::UnknownId(category.into())),
        },
    })
}
