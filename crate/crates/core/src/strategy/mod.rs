//! Search strategies over restricted question families.

pub mod at;
pub mod vector;
pub mod cone;
pub mod prolixity;
