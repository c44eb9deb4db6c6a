//! File formats, report rendering and the command-line pipeline around
//! [`collabkit_core`].

pub mod config;
pub mod fetch;
pub mod io;
pub mod lexicons;
pub mod pipeline;
pub mod report;
pub mod run;
pub mod sim;

pub use config::{OutputFormat, RunConfig};
pub use pipeline::Stage;
pub use run::{run, RunOutcome};
