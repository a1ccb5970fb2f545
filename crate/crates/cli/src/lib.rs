//! Declarative front end: input documents, job execution and reports.

pub mod input;
pub mod job;
pub mod report;

pub use input::{parse_input, InputError, JobSpec, Settings};
pub use job::{run_job, Command, OracleTask};
pub use report::{Item, Report};
