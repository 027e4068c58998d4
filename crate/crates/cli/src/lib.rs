//! Front end for the `fanic` library: fan documents, the embedded corpus,
//! reports and the subcommands of the `fanic` binary.

pub mod commands;
pub mod corpus;
pub mod criteria;
pub mod document;
pub mod report;
pub mod suite;

pub use commands::{Input, Options};
pub use document::{Expected, FanDocument, LoadedFan};
pub use report::{Check, Report};
