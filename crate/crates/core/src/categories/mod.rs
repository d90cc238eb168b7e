//! Concrete categories and their endofunctors.

pub mod hj;
pub mod p;
pub mod product;
pub mod r;
pub mod tree;

pub use hj::{hj_category, hj_partial, HjCategory, HjMor, HjObj, HjPartial};
pub use p::{p_category, p_partial, Orientation, PCategory, PMor, PObj, PPartial};
pub use product::{product_category, product_functor, ProdMor, ProdObj, ProductCategory, ProductFunctor};
pub use r::{r_category, r_partial, RCategory, RMor, RObj, RPartial};
pub use tree::{tree_category, tree_partial, OrderedTree, TreeCategory, TreeMor, TreePartial};
