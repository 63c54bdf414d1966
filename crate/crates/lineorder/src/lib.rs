//! Job and certificate formats, plot export and the runner behind the
//! `lineorder` command.
//!
//! A job names a group, a task and its parameters; running it yields a JSON
//! certificate that [`verify::verify`] re-checks from scratch.

pub mod cert;
pub mod doc;
pub mod error;
pub mod job;
pub mod par;
pub mod plot;
pub mod verify;

pub use cert::{Certificate, Outcome, Task};
pub use error::{Error, Result};
pub use job::{execute, run, JobSpec, Overrides};
pub use lineorder_core as core;
