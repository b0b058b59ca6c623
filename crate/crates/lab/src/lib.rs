//! Configuration files, artifact emission and the `wavelab` command line
//! on top of [`wavelab_core`].
//!
//! Every run writes its outputs plus a [`manifest::RunManifest`] holding the
//! fully resolved configuration and the SHA-256 of each file, so
//! `wavelab replay <manifest>` can repeat it and compare digests.

pub mod cli;
pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;
