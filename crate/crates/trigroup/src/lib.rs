pub mod cli;
pub mod format;
pub mod manifest;
pub mod runner;
