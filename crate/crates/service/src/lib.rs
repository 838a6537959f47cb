//! Authoring sessions, the HTTP API and the command line around the
//! `nl2domain` compiler.

pub mod api;
pub mod cli;
pub mod session;
pub mod spellcheck;
