//! File formats, storage, the HTTP service and CLI plumbing around
//! [`odesys_core`].

pub mod bundled;
pub mod document;
pub mod runner;
pub mod service;
pub mod store;
pub mod tables;

pub use document::{load_problem, DocumentError, ProblemDocument};
pub use runner::{execute, Method, ResultDocument};
pub use store::{RunRecord, RunStatus, Store};
