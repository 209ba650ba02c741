//! Exact invariants, special-fiber classification and minimisation for
//! genus one equations of degree up to 4.

pub mod fiber;
pub mod fp;
pub mod invariants;
pub mod jacobian;
pub mod mat;
pub mod minimise;
pub mod modelfile;
pub mod models;
pub mod poly;
pub mod report;
pub mod rat;
pub mod testgen;
