//! Command-line tools and file formats around `dressed-core`.

pub mod commands;
pub mod config;
pub mod io;
pub mod parallel;
pub mod reference;
pub mod tables;
pub mod verify;
