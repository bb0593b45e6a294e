//! File formats, configuration, charts and the command-line tool built on
//! [`polarnet_core`].

pub mod cli;
pub mod config;
pub mod io;
pub mod output;
pub mod parallel;
pub mod svg;

pub use polarnet_core as core;
