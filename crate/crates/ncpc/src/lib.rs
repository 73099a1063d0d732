//! File formats, tables and the command pipeline for the ncpc replication.

pub mod config;
pub mod golden;
pub mod ingest;
pub mod pipeline;
pub mod registry;
pub mod table;
