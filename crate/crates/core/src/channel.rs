//! FIFO channel configurations between the plant and the agent.
//!
//! A configuration is the queue of `(event, age)` pairs still in transit.
//! The observation channel carries event occurrences towards the agent; the
//! control channel carries the activation commands the agent issued after
//! each delivery. Ages are in time units and only grow when the plant fires
//! a transition, by that transition's minimum occurring time.

use std::fmt::Write as _;

use crate::fsa::{EventId, Plant, StateId};

/// Upper bounds on observation and control delays, in time units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DelayBounds {
    pub no: u32,
    pub nc: u32,
}

impl DelayBounds {
    pub fn new(no: u32, nc: u32) -> Self {
        DelayBounds { no, nc }
    }
}

/// Queue contents, front (oldest) first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Channel(Vec<(EventId, u32)>);

impl Channel {
    pub fn empty() -> Self {
        Channel(Vec::new())
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (EventId, u32)>) -> Self {
        Channel(entries.into_iter().collect())
    }

    pub fn entries(&self) -> &[(EventId, u32)] {
        &self.0
    }

    pub fn front(&self) -> Option<(EventId, u32)> {
        self.0.first().copied()
    }

    /// Age of the oldest entry, 0 when empty.
    pub fn max_age(&self) -> u32 {
        self.front().map_or(0, |(_, n)| n)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(b,1)(f,0)`, or `ε` for the empty queue.
    pub fn render(&self, plant: &Plant) -> String {
        if self.0.is_empty() {
            return "ε".to_string();
        }
        let mut s = String::new();
        for &(e, n) in &self.0 {
            let _ = write!(s, "({},{})", plant.event_name(e), n);
        }
        s
    }

    fn aged(&self, by: u32, bound: u32) -> Option<Channel> {
        if matches!(self.front(), Some((_, n)) if n + by > bound) {
            return None;
        }
        Some(Channel(self.0.iter().map(|&(e, n)| (e, n + by)).collect()))
    }

    fn pop_if(&self, sigma: EventId) -> Option<Channel> {
        match self.front() {
            Some((e, _)) if e == sigma => Some(Channel(self.0[1..].to_vec())),
            _ => None,
        }
    }

    fn pushed(mut self, sigma: EventId) -> Channel {
        self.0.push((sigma, 0));
        self
    }
}

fn t_min_of(plant: &Plant, q: StateId, sigma: EventId) -> u32 {
    plant
        .t_min(q, sigma)
        .expect("channel update requires a defined plant transition")
}

/// Occurrence of σ at `q`: everything in transit ages by `t_min(q,σ)`, then
/// `(σ,0)` joins the back. Undefined when the oldest entry would exceed `no`.
pub fn in_obs(
    theta: &Channel,
    plant: &Plant,
    q: StateId,
    sigma: EventId,
    no: u32,
) -> Option<Channel> {
    theta
        .aged(t_min_of(plant, q, sigma), no)
        .map(|c| c.pushed(sigma))
}

/// Delivery of the front occurrence, which must be σ.
pub fn out_obs(theta: &Channel, sigma: EventId) -> Option<Channel> {
    theta.pop_if(sigma)
}

/// Ages pending commands while the plant fires σ at `q`.
pub fn plus(
    theta: &Channel,
    plant: &Plant,
    q: StateId,
    sigma: EventId,
    nc: u32,
) -> Option<Channel> {
    theta.aged(t_min_of(plant, q, sigma), nc)
}

/// Issues the command tagged with σ.
pub fn in_ctr(theta: &Channel, sigma: EventId) -> Channel {
    theta.clone().pushed(sigma)
}

/// Executes the front command, which must be tagged with σ.
pub fn out_ctr(theta: &Channel, sigma: EventId) -> Option<Channel> {
    theta.pop_if(sigma)
}
