//! Command-line tools and HTTP service for the quiztree engine.

pub mod bench;
pub mod server;
pub mod session;
pub mod spec;
pub mod verify;
