#![allow(dead_code)]

use netsap::fsa::{EventId, PairSet, Plant, StateId};
use netsap::observe::SensorPolicy;

pub fn ev(plant: &Plant, name: &str) -> EventId {
    plant
        .event_by_name(name)
        .unwrap_or_else(|| panic!("no event {name}"))
}

pub fn st(plant: &Plant, name: &str) -> StateId {
    plant
        .state_by_name(name)
        .unwrap_or_else(|| panic!("no state {name}"))
}

pub fn word(plant: &Plant, s: &str) -> Vec<EventId> {
    s.chars().map(|c| ev(plant, &c.to_string())).collect()
}

pub fn policy(plant: &Plant, entries: &[(&str, &str)]) -> SensorPolicy {
    entries
        .iter()
        .map(|&(q, e)| (st(plant, q), ev(plant, e)))
        .collect()
}

pub fn pairs(plant: &Plant, entries: &[(&str, &str)]) -> PairSet {
    entries
        .iter()
        .map(|&(a, b)| (st(plant, a), st(plant, b)))
        .collect()
}

/// Every subset of `base`, as policies. Only for small bases.
pub fn subsets(base: &SensorPolicy) -> Vec<SensorPolicy> {
    let items: Vec<_> = base.iter().collect();
    assert!(items.len() <= 16, "too many subsets");
    (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}
