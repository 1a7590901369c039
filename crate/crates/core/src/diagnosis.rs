//! Delay K-diagnosability through a counter refinement of the plant.
//!
//! Each fault class gets a counter: `-1` until a fault of that class occurs,
//! then the number of events since, saturating at `K`. A policy makes the
//! plant delay K-diagnosable iff no refined state with some counter at `K` is
//! delayed-confusable with a refined state whose counter for that class is
//! still `-1`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::channel::DelayBounds;
use crate::comm::{build_w_capped, BuildError, DEFAULT_STATE_CAP};
use crate::fsa::{EventId, ModelError, PairSet, Plant, StateId};
use crate::observe::SensorPolicy;
use crate::synthesis::{check_delay_feasible, spec_violations, FeasibilityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagError {
    #[error("fault classes overlap on event `{0}`")]
    OverlappingFaultClasses(String),
    #[error("K must be at least 1")]
    ZeroHorizon,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultClass {
    pub name: String,
    pub events: Vec<EventId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultSpec {
    classes: Vec<FaultClass>,
    k: u32,
}

impl FaultSpec {
    pub fn new(plant: &Plant, classes: Vec<FaultClass>, k: u32) -> Result<Self, DiagError> {
        if k == 0 {
            return Err(DiagError::ZeroHorizon);
        }
        let mut owner: HashMap<EventId, usize> = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            for &e in &c.events {
                if owner.insert(e, i).is_some_and(|j| j != i) {
                    return Err(DiagError::OverlappingFaultClasses(
                        plant.event_name(e).to_string(),
                    ));
                }
            }
        }
        Ok(FaultSpec { classes, k })
    }

    /// One class named after the given events.
    pub fn single(plant: &Plant, events: &[&str], k: u32) -> Result<Self, DiagError> {
        let events = events
            .iter()
            .map(|n| {
                plant
                    .event_by_name(n)
                    .ok_or_else(|| ModelError::UnknownStateOrEvent(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let name = events
            .iter()
            .map(|&e| plant.event_name(e))
            .collect::<Vec<_>>()
            .join(",");
        Self::new(plant, vec![FaultClass { name, events }], k)
    }

    pub fn classes(&self) -> &[FaultClass] {
        &self.classes
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn step(&self, counters: &[i32], e: EventId) -> Vec<i32> {
        let k = self.k as i32;
        counters
            .iter()
            .zip(&self.classes)
            .map(|(&n, class)| {
                if n == k || (n == -1 && !class.events.contains(&e)) {
                    n
                } else {
                    n + 1
                }
            })
            .collect()
    }
}

/// The refined plant together with the meaning of each refined state.
#[derive(Debug, Clone)]
pub struct Refined {
    pub plant: Plant,
    base: Vec<StateId>,
    counters: Vec<Vec<i32>>,
}

impl Refined {
    pub fn base(&self, r: StateId) -> StateId {
        self.base[r.index()]
    }

    pub fn counters(&self, r: StateId) -> &[i32] {
        &self.counters[r.index()]
    }

    pub fn find(&self, base: StateId, counters: &[i32]) -> Option<StateId> {
        (0..self.base.len())
            .map(StateId::from)
            .find(|&r| self.base(r) == base && self.counters(r) == counters)
    }

    /// `(x̄, σ)` becomes `((x̄, n), σ)` for every counter vector `n`.
    pub fn lift_policy(&self, policy: &SensorPolicy) -> SensorPolicy {
        self.plant
            .states()
            .flat_map(|r| {
                let b = self.base(r);
                self.plant
                    .observable_events()
                    .filter(move |&e| policy.contains(b, e))
                    .map(move |e| (r, e))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// The unrefined policy, if every counter copy of each state agrees.
    pub fn project_policy(&self, policy: &SensorPolicy) -> Option<SensorPolicy> {
        let mut by_base: BTreeMap<(StateId, EventId), bool> = BTreeMap::new();
        for r in self.plant.states() {
            for e in self.plant.observable_events() {
                let on = policy.contains(r, e);
                if *by_base.entry((self.base(r), e)).or_insert(on) != on {
                    return None;
                }
            }
        }
        Some(
            by_base
                .into_iter()
                .filter(|&(_, on)| on)
                .map(|(k, _)| k)
                .collect(),
        )
    }
}

fn refined_name(plant: &Plant, q: StateId, counters: &[i32]) -> String {
    let mut s = format!("({}", plant.state_name(q));
    for n in counters {
        s.push_str(&format!(",{n}"));
    }
    s.push(')');
    s
}

/// Reachable product of the plant with the counter dynamics.
pub fn refine_k_diag(plant: &Plant, faults: &FaultSpec) -> Result<Refined, DiagError> {
    let init = (plant.initial(), vec![-1; faults.classes.len()]);
    let mut index = HashMap::from([(init.clone(), 0usize)]);
    let mut states = vec![init];
    let mut transitions = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (q, counters) = states[i].clone();
        for (e, edge) in plant.out(q) {
            let target = (edge.target, faults.step(&counters, e));
            let j = *index.entry(target.clone()).or_insert_with(|| {
                states.push(target);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            transitions.push((i, e, j, edge.t_min));
        }
    }

    let names: Vec<String> = states
        .iter()
        .map(|(q, n)| refined_name(plant, *q, n))
        .collect();
    let mut b = Plant::builder()
        .states(names.clone())
        .initial(names[0].clone());
    for e in plant.events() {
        b = b.event(plant.event_name(e), plant.is_observable(e));
    }
    for (i, e, j, t) in transitions {
        b = b.transition(names[i].clone(), plant.event_name(e), names[j].clone(), t);
    }
    Ok(Refined {
        plant: b.build()?,
        base: states.iter().map(|(q, _)| *q).collect(),
        counters: states.into_iter().map(|(_, n)| n).collect(),
    })
}

/// Refined-state pairs that must be told apart: some class has counter `K`
/// on one side and `-1` on the other.
pub fn diag_spec(refined: &Refined, faults: &FaultSpec) -> PairSet {
    let k = faults.k as i32;
    let states: Vec<StateId> = refined.plant.states().collect();
    let mut spec = PairSet::new();
    for &r in &states {
        for &r2 in &states {
            let hit = refined
                .counters(r)
                .iter()
                .zip(refined.counters(r2))
                .any(|(&n, &n2)| n == k && n2 == -1);
            if hit {
                spec.insert(r, r2);
            }
        }
    }
    spec
}

/// Adds a self-loop on a fresh unobservable event at every state without
/// outgoing transitions, so every word can be extended.
pub fn make_live(plant: &Plant, dummy: &str) -> Result<Plant, ModelError> {
    let mut b = Plant::builder()
        .states(plant.states().map(|q| plant.state_name(q).to_string()))
        .initial(plant.state_name(plant.initial()));
    for e in plant.events() {
        b = b.event(plant.event_name(e), plant.is_observable(e));
    }
    b = b.event(dummy, false);
    for (q, e, edge) in plant.transitions() {
        b = b.transition(
            plant.state_name(q),
            plant.event_name(e),
            plant.state_name(edge.target),
            edge.t_min,
        );
    }
    for q in plant.states() {
        if plant.out(q).next().is_none() {
            b = b.transition(plant.state_name(q), dummy, plant.state_name(q), 1);
        }
    }
    b.build()
}

#[derive(Debug, Clone)]
pub struct DiagReport {
    pub feasibility: FeasibilityReport,
    /// Spec pairs that remain delayed-confusable; empty iff diagnosable.
    pub witnesses: PairSet,
}

impl DiagReport {
    pub fn diagnosable(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Checks a policy over refined states. Feasibility is reported alongside;
/// the diagnosability verdict presumes a feasible policy.
pub fn check_delay_k_diag(
    refined: &Refined,
    faults: &FaultSpec,
    bounds: DelayBounds,
    policy: &SensorPolicy,
) -> Result<DiagReport, DiagError> {
    check_delay_k_diag_capped(refined, faults, bounds, policy, DEFAULT_STATE_CAP)
}

pub fn check_delay_k_diag_capped(
    refined: &Refined,
    faults: &FaultSpec,
    bounds: DelayBounds,
    policy: &SensorPolicy,
    cap: usize,
) -> Result<DiagReport, DiagError> {
    let w = build_w_capped(&refined.plant, bounds, cap)?;
    let spec = diag_spec(refined, faults);
    Ok(DiagReport {
        feasibility: check_delay_feasible(&refined.plant, &w, policy),
        witnesses: spec_violations(&refined.plant, &w, policy, &spec),
    })
}
