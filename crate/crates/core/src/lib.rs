//! Quantum evolution measured against an oscillating harmonic clock.
//!
//! Each energy eigenstate E_k sees the clock swing between ±φ_t = ±|E_k|/λ.
//! Global time τ is unwound onto that bounded clock ([`clock`]), the
//! eigenphase is accumulated in closed form over half-cycles ([`phase`]),
//! and superpositions are evolved component by component ([`evolution`]).
//! Small λ reproduces standard evolution, large λ a frequency rescaled by
//! π/4, and in between the system dephases; [`periods`] measures the
//! resulting spread of system periods.
//!
//! [`config`] and [`runner`] drive the `oscillock` command-line tool.

// `!(x > 0.0)` checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clock;
pub mod config;
pub mod error;
pub mod evolution;
pub mod periods;
pub mod phase;
pub mod runner;
pub mod systems;
