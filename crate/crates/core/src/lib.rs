//! Reachability deciders for chemical reaction networks with inhibition.

pub mod bmatching;
pub mod certificate;
pub mod dispatch;
pub mod error;
pub mod format;
pub mod fpt;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod reductions;
pub mod states;

pub use error::{Error, Result};
