//! Sensor activation for discrete-event systems observed and commanded over
//! FIFO channels with bounded delays.
//!
//! The pipeline: a [`fsa::Plant`] with minimum occurring times is turned
//! into a communication automaton ([`comm::build_comm`]) that tracks both
//! channel queues, then refined with the command in force
//! ([`comm::build_w`]). Policies are checked for delay feasibility and
//! minimized against a specification of state pairs ([`synthesis`]), applied
//! to fault diagnosis ([`diagnosis`]), and extended to several agents
//! ([`decentral`]).
//!
//! ```
//! use netsap::{channel::DelayBounds, comm::build_w, fixtures, synthesis::check_delay_feasible};
//!
//! let toy = fixtures::toy();
//! let w = build_w(&toy, DelayBounds::new(1, 2)).unwrap();
//! assert!(check_delay_feasible(&toy, &w, &fixtures::toy_dstar()).feasible());
//! ```

pub mod channel;
pub mod cli;
pub mod comm;
pub mod decentral;
pub mod diagnosis;
pub mod fixtures;
pub mod fsa;
pub mod io;
pub mod observe;
pub mod synthesis;
pub mod validation;

pub use channel::DelayBounds;
pub use fsa::{EventId, PairSet, Plant, StateId};
pub use observe::SensorPolicy;
