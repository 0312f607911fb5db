//! Compiler core for `.flp` memory-layout specifications.

pub mod diag;
pub mod syntax;
pub mod arith;
pub mod expand;
pub mod calculus;
pub mod model;
pub mod codegen;
pub mod pipeline;
