//! Finitely-presented categories, the pigeonhole conditions (P) and (FP),
//! constructive Ramsey witnesses and their certificates.

#![allow(clippy::type_complexity)]

pub mod categories;
pub mod category;
pub mod certificates;
pub mod combinatorics;
pub mod constructions;
pub mod encoding;
pub mod error;

pub use category::{
    check_category_laws, check_frank_at, check_functor_laws, compose_functors, Category, Composite, FrankReport,
    Functor, Identity, LawReport, Word,
};
pub use error::{Error, Result};
pub mod engine;
