//! Library face of the `cicy` command-line tool.
//!
//! Everything the binary does is callable in-process: build a certificate
//! with [`runs::run_certify`], [`runs::run_splitting`] or
//! [`runs::run_profile`], fuzz a structured-matrix validator with
//! [`lemmas::run_lemmas`], extend a certificate numerically with
//! [`deform::run_deform`], and read or write documents through [`output`].
//! The binary adds only argument parsing, the `--jobs` fan-out, and the
//! exit-code mapping in [`error`].

pub mod deform;
pub mod error;
pub mod lemmas;
pub mod numbers;
pub mod output;
pub mod runs;
pub mod schema;

pub use error::CliError;
pub use schema::Certificate;
