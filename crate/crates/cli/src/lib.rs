//! Command layer for the `sumset` binary: argument handling, deterministic
//! trial seeding, subset-drawing strategies, exhaustive subset scans with
//! checkpointing, and the report/serialization plumbing shared by the
//! subcommands.

pub mod commands;
pub mod report;
pub mod rng;
pub mod scan;
pub mod strategies;
