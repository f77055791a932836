//! Outage probability and secrecy unicast throughput for a downlink NOMA
//! cell that carries one multicast stream and one unicast stream.
//!
//! The crate has three layers:
//!
//! * [`channel`] and [`noma_core`] describe a single channel draw and the
//!   per-draw power split and rates,
//! * [`analytic`] evaluates the closed-form approximations,
//! * [`montecarlo`] estimates the same metrics by simulation.
//!
//! [`cli`] wires them into parameter sweeps and a self-check report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod error;
pub mod montecarlo;
pub mod noma_core;
pub mod specfun;

pub use channel::{ChannelRealization, CsiMode, QuadOrders, RandomStream, SystemConfig};
pub use error::{Error, Result};
pub use montecarlo::{MetricEstimate, MetricKind, Scheme};
