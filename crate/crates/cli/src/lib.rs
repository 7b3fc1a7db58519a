//! Configuration files for the `nondense` command.

pub mod config;
