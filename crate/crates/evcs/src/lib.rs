//! File formats, image IO, scheme configs and audit reports for the `evcs`
//! command-line tool. All construction and verification lives in
//! `evcs_core`.

pub mod config;
pub mod error;
pub mod palette;
pub mod pnm;
pub mod report;
pub mod text;
