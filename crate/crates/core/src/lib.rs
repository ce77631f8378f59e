//! Deterministic simulator for controlled bidirectional quantum secure direct
//! communication (CBQSDC) built on entanglement swapping.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! - [`qcore`]: exact state-vector engine for the handful of qubits a single
//!   protocol group needs, including Bell/GHZ basis measurement and an exact
//!   Born-rule oracle.
//! - [`swapcalc`]: the symbolic index algebra (Pauli encoding, swap groups,
//!   peer decoding, GHZ swap tables) that the protocol relies on, checked
//!   against [`qcore`].
//! - [`protocol`]: the five-step controlled protocol for the Bell, GHZ and
//!   three-user network scenarios, with a typed classical transcript.
//! - [`adversary`]: eavesdropper taps applied while qubits are routed.
//! - [`metrics`]: efficiency accounting and exact leakage analysis.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversary;
pub mod metrics;
pub mod party;
pub mod protocol;
pub mod qcore;
pub mod stats;
pub mod swapcalc;

pub use party::PartyRole;
