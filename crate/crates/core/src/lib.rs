//! Exact simulation of entanglement teleportation through GHZ, GHZ-class
//! and cat-like channels, with every measurement branch enumerated.
//!
//! [`qstate`] is the dense state-vector core, [`protocol_math`] builds bases,
//! frames and correction tables, [`locc`] runs multi-party scripts and
//! checks their locality, [`protocols`] assembles the teleportation scripts
//! and [`analysis`] computes channel negativities and the teleportable
//! entanglement range.

pub mod analysis;
pub mod locc;
pub mod protocol_math;
pub mod protocols;
pub mod qstate;
pub mod sampling;
