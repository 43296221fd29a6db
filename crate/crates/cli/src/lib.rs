//! Command-line front end for the `beew` crate: data files, report
//! documents and the `beew` subcommands.
//!
//! `simulate` draws from ChaCha20 (`rand_chacha` 0.9) seeded through
//! `SeedableRng::seed_from_u64`, so a seed and a parameter set give the same
//! file on every platform.

pub mod cli;
pub mod commands;
pub mod data;
pub mod report;

pub use cli::run;
