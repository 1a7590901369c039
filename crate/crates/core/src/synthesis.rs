//! Delay feasibility, the maximal feasible subpolicy, and greedy synthesis of
//! a minimal policy.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::channel::DelayBounds;
use crate::comm::{build_w, BuildError, WAutomaton};
use crate::fsa::{EventId, PairSet, Plant, StateId};
use crate::observe::{conf_pairs, delayed_conf_pairs, SensorPolicy};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// σ fires at plant state `q` while the decision in force was made at
    /// `x`, and the two decisions differ.
    Cond1 {
        w_state: StateId,
        q: StateId,
        x: StateId,
        event: EventId,
    },
    /// Confusable states with different decisions for σ.
    Cond2 {
        pair: (StateId, StateId),
        event: EventId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self, plant: &Plant, w: &WAutomaton) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| match *v {
                Violation::Cond1 {
                    w_state,
                    q,
                    x,
                    event,
                } => format!(
                    "condition 1: {} fires at {} under the decision made at {}, state {}",
                    plant.event_name(event),
                    plant.state_name(q),
                    plant.state_name(x),
                    w.render_state(plant, w_state)
                ),
                Violation::Cond2 {
                    pair: (a, b),
                    event,
                } => format!(
                    "condition 2: {} and {} are confusable but disagree on {}",
                    plant.state_name(a),
                    plant.state_name(b),
                    plant.event_name(event)
                ),
            })
            .collect()
    }
}

/// A policy is delay feasible iff the decision in force always agrees with
/// the decision at the true plant state, and confusable states agree.
///
/// A decision `(x,σ)` only takes part in the comparison between confusable
/// states when σ can fire while the command issued at `x` is in force;
/// other decisions never affect an observation.
pub fn check_delay_feasible(
    plant: &Plant,
    w: &WAutomaton,
    policy: &SensorPolicy,
) -> FeasibilityReport {
    let index = FiringIndex::new(plant, w);
    let mut violations = Vec::new();
    for (ws, e, _) in w.plant_moves() {
        let (q, x) = (w.plant_state(ws), w.tracker(ws));
        if policy.contains(q, e) != policy.contains(x, e) {
            violations.push(Violation::Cond1 {
                w_state: ws,
                q,
                x,
                event: e,
            });
        }
    }
    let tconf = conf_pairs(w, policy);
    for (a, b) in tconf.off_diagonal() {
        for e in plant.observable_events() {
            if index.relevant(a, e)
                && index.relevant(b, e)
                && policy.contains(a, e) != policy.contains(b, e)
            {
                violations.push(Violation::Cond2 {
                    pair: (a, b),
                    event: e,
                });
            }
        }
    }
    FeasibilityReport { violations }
}

/// `(q, x, σ)` for every plant move of the refined automaton: σ can fire at
/// `q` while the decision made at `x` is in force.
struct FiringIndex {
    at_plant: HashMap<(StateId, EventId), Vec<StateId>>,
    at_tracker: HashMap<(StateId, EventId), Vec<StateId>>,
}

impl FiringIndex {
    fn new(plant: &Plant, w: &WAutomaton) -> Self {
        let mut triples = HashSet::new();
        for (ws, e, _) in w.plant_moves() {
            if plant.is_observable(e) {
                triples.insert((w.plant_state(ws), w.tracker(ws), e));
            }
        }
        let mut at_plant: HashMap<_, Vec<_>> = HashMap::new();
        let mut at_tracker: HashMap<_, Vec<_>> = HashMap::new();
        for (q, x, e) in triples {
            at_plant.entry((q, e)).or_default().push(x);
            at_tracker.entry((x, e)).or_default().push(q);
        }
        FiringIndex {
            at_plant,
            at_tracker,
        }
    }

    fn relevant(&self, x: StateId, e: EventId) -> bool {
        self.at_tracker.contains_key(&(x, e))
    }
}

/// Decisions `(x,σ)` such that σ can fire while the command issued at `x`
/// is in force. Only these can change what the agent sees.
pub fn relevant_decisions(plant: &Plant, w: &WAutomaton) -> SensorPolicy {
    FiringIndex::new(plant, w).at_tracker.into_keys().collect()
}

/// Largest delay-feasible subpolicy of `policy`, with its confusable pairs.
///
/// Each pass recomputes the confusable pairs and deletes every `(q,σ)` that
/// fires against a tracker state lacking σ, serves as tracker for a firing
/// state lacking σ, or is confusable with a state lacking σ. The last rule
/// only compares decisions listed by [`relevant_decisions`].
pub fn max_feasible_subpolicy(
    plant: &Plant,
    w: &WAutomaton,
    policy: &SensorPolicy,
) -> (SensorPolicy, PairSet) {
    let index = FiringIndex::new(plant, w);
    let mut current = policy.clone();
    loop {
        let tconf = conf_pairs(w, &current);
        let mut partners: HashMap<StateId, Vec<StateId>> = HashMap::new();
        for (a, b) in tconf.off_diagonal() {
            partners.entry(a).or_default().push(b);
            partners.entry(b).or_default().push(a);
        }
        let lacks = |states: Option<&Vec<StateId>>, e: EventId| {
            states.is_some_and(|v| {
                v.iter()
                    .any(|&p| index.relevant(p, e) && !current.contains(p, e))
            })
        };
        let doomed: Vec<(StateId, EventId)> = current
            .iter()
            .filter(|&(q, e)| {
                lacks(index.at_plant.get(&(q, e)), e)
                    || lacks(index.at_tracker.get(&(q, e)), e)
                    || (index.relevant(q, e) && lacks(partners.get(&q), e))
            })
            .collect();
        if doomed.is_empty() {
            return (current, tconf);
        }
        for (q, e) in doomed {
            current.remove(q, e);
        }
    }
}

/// Which remaining transition the greedy loop tries to delete next.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum PickOrder {
    /// Highest state index first, ties by highest event index.
    #[default]
    Descending,
    Ascending,
    /// The listed transitions first, in order; then descending.
    Explicit(Vec<(StateId, EventId)>),
}

impl PickOrder {
    fn pick(&self, candidates: &SensorPolicy) -> Option<(StateId, EventId)> {
        match self {
            PickOrder::Descending => candidates.iter().next_back(),
            PickOrder::Ascending => candidates.iter().next(),
            PickOrder::Explicit(list) => list
                .iter()
                .copied()
                .find(|&(q, e)| candidates.contains(q, e))
                .or_else(|| candidates.iter().next_back()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub state: String,
    pub event: String,
    pub subpolicy_size: usize,
    pub accepted: bool,
    pub policy_size: usize,
}

pub type SynthesisTrace = Vec<TraceStep>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("specification violated even with every sensor always on ({} pairs)", .0.len())]
    SpecUnsatisfiableEvenFullyActivated(PairSet),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Spec pairs hit by the delayed confusable pairs of a feasible policy.
pub fn spec_violations(
    plant: &Plant,
    w: &WAutomaton,
    policy: &SensorPolicy,
    spec: &PairSet,
) -> PairSet {
    let no = w.comm().bounds().no;
    delayed_conf_pairs(plant, &conf_pairs(w, policy), no).intersection(spec)
}

/// Greedy deletion from the full policy `Q × Σo`.
///
/// A candidate deletion is followed by [`max_feasible_subpolicy`]; the result
/// replaces the policy iff its delayed confusable pairs avoid `spec`.
pub fn minimize_sap(
    plant: &Plant,
    w: &WAutomaton,
    spec: &PairSet,
    order: &PickOrder,
) -> Result<(SensorPolicy, SynthesisTrace), SynthError> {
    let no = w.comm().bounds().no;
    let full = SensorPolicy::full(plant);
    minimize_from(plant, w, full.clone(), order, |_, tconf| {
        delayed_conf_pairs(plant, tconf, no).is_disjoint(spec)
    })
    .ok_or_else(|| {
        SynthError::SpecUnsatisfiableEvenFullyActivated(spec_violations(plant, w, &full, spec))
    })
}

/// The greedy loop shared by the centralized and per-agent synthesis.
/// `accept(policy, tconf)` judges a feasible candidate. Returns `None` when
/// the starting policy itself is rejected.
pub(crate) fn minimize_from(
    plant: &Plant,
    w: &WAutomaton,
    start: SensorPolicy,
    order: &PickOrder,
    mut accept: impl FnMut(&SensorPolicy, &PairSet) -> bool,
) -> Option<(SensorPolicy, SynthesisTrace)> {
    let (mut current, tconf) = max_feasible_subpolicy(plant, w, &start);
    if !accept(&current, &tconf) {
        return None;
    }
    let mut rejected = SensorPolicy::empty();
    let mut trace = Vec::new();
    loop {
        let candidates: SensorPolicy = current
            .iter()
            .filter(|&(q, e)| !rejected.contains(q, e))
            .collect();
        let Some((q, e)) = order.pick(&candidates) else {
            break;
        };
        let (sub, tconf) = max_feasible_subpolicy(plant, w, &current.without(q, e));
        let subpolicy_size = sub.len();
        let accepted = accept(&sub, &tconf);
        if accepted {
            current = sub;
        } else {
            rejected.insert(q, e);
        }
        trace.push(TraceStep {
            state: plant.state_name(q).to_string(),
            event: plant.event_name(e).to_string(),
            subpolicy_size,
            accepted,
            policy_size: current.len(),
        });
    }
    Some((current, trace))
}

/// Builds the refined automaton and runs [`minimize_sap`].
pub fn synthesize(
    plant: &Plant,
    bounds: DelayBounds,
    spec: &PairSet,
    order: &PickOrder,
) -> Result<(SensorPolicy, SynthesisTrace), SynthError> {
    let w = build_w(plant, bounds)?;
    minimize_sap(plant, &w, spec, order)
}
