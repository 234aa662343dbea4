//! Exact arithmetic for binary n-ic forms, their rings `R_f`, and the
//! correspondence between `2 x n x n` integer tensors and balanced pairs of
//! `R_f`-modules.

pub mod error;
pub mod exactlat;
pub mod formring;
pub mod groups;
pub mod tensorlink;
pub mod balance;
pub mod univcheck;
pub mod sampling;
pub mod codec;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
