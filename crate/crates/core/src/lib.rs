//! Tools for dissipative second-order ODEs `u'' + g(u)u' + h(u) = 0` whose
//! coefficients satisfy `(h/g)' = k·g`: classification, construction of
//! integrable pairs, the associated Abel equations, and recovery of `u(ζ)`.

#![allow(
    clippy::excessive_precision,
    clippy::redundant_guards,
    clippy::should_implement_trait,
    clippy::neg_cmp_op_on_partial_ord
)]

pub mod abel;
pub mod catalog;
pub mod cli;
pub mod expr;
pub mod numeric;
pub mod quadinvert;
pub mod special;
