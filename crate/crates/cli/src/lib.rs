//! Front end for the `dstab` binary: matrix documents, reports, sweeps and
//! the command dispatcher.

pub mod app;
pub mod doc;
pub mod exit;
pub mod expr;
pub mod report;
pub mod sweep;
