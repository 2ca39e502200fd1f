pub mod classifier;
pub mod expr;
pub mod grammar;
pub mod group;
pub mod modules;
pub mod oracle;
pub mod partition;
pub mod tables;
pub mod sweep;
pub mod cli;
