#![no_std]

extern crate alloc;

pub mod arith;
pub mod constraints;
pub mod simplex;
pub mod projection;
pub mod ms;
pub mod pr;
pub mod equivalence;
pub mod text;

#[cfg(test)]
mod fixtures;
