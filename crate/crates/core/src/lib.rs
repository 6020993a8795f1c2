//! Core algorithms for the [[30,6,5]] symplectic double code.
//!
//! Everything in this crate is pure computation over `alloc`: dense GF(2)
//! linear algebra, code construction and distance search, a gate-level
//! circuit IR, a stabilizer tableau simulator with Pauli-frame fault
//! propagation, lookup-table decoding, and encoder synthesis with
//! exhaustive fault audits. File formats, parallel Monte Carlo and the
//! command line live in the `sdc` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod code;
pub mod decoder;
mod error;
pub mod gf2;
pub mod sim;
pub mod synth;

pub use error::{Error, Result};

/// Pauli basis selector shared by codes, decoders and audits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    X,
    Z,
}

impl Basis {
    pub fn other(self) -> Basis {
        match self {
            Basis::X => Basis::Z,
            Basis::Z => Basis::X,
        }
    }
}

impl core::fmt::Display for Basis {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Basis::X => f.write_str("X"),
            Basis::Z => f.write_str("Z"),
        }
    }
}
