#![no_std]

extern crate alloc;

pub mod bundle;
pub mod error;
pub mod group;
pub mod gset;
pub mod magnus;
pub mod oracle;
pub mod realization;
pub mod relation;
pub mod search;
pub mod standard;
pub mod tables;

pub use error::{Error, Result};
pub use group::{GroupCtx, GroupElement, Letter};
