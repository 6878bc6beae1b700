//! Std companion to `fermilab-core`: file formats, a verification harness,
//! and the `fermilab` command-line tool.
//!
//! The core crate holds all the numerics and stays `no_std`; everything here
//! is plumbing. [`formats`] reads and writes the JSON/CSV interchange files,
//! [`verify`] runs residual and decay checks over configurable case lists,
//! and [`cli`] wires both into subcommands.

pub mod cli;
pub mod formats;
pub mod verify;
