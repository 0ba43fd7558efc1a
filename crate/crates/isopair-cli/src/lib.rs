//! Harness behind the `isopair` command-line tool: deterministic seeded
//! trial inputs and the property suites the `verify` subcommand runs.

pub mod sampling;
pub mod suites;
