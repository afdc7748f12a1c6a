//! Configuration files, the plain-text code archive and logging.

pub mod codefile;
pub mod config;
pub mod logger;
