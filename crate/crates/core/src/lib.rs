//! Free products of finite groups: normal forms, equations with
//! coefficients, necessary conditions for verbal closedness of subgroups, and
//! the action on the associated tree.

pub mod bass_serre;
pub mod cli;
pub mod closure;
pub mod error;
pub mod finite_group;
pub mod free_product;
#[cfg(test)]
mod properties;
pub mod trials;
pub mod words;

pub use error::{Error, Result};
pub use finite_group::{ElementId, FiniteGroup};
pub use free_product::{FpElement, FreeProduct, Order, SubgroupPart};
