//! Transition-based sensor activation policies, the observation mappings they
//! induce, and confusable state pairs.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::comm::{CommAutomaton, WAutomaton};
use crate::fsa::{Automaton, EventId, ExtendedEvent, PairSet, Plant, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObsError {
    #[error("word is not in the language of the automaton")]
    WordNotInLanguage,
    #[error("policy activates unobservable event `{0}`")]
    UnobservableEvent(String),
    #[error("policy mentions unknown state or event index")]
    OutOfRange,
}

/// Set of `(state, event)` pairs at which the sensor for the event is on.
/// Pairs need not correspond to enabled transitions.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SensorPolicy(BTreeSet<(StateId, EventId)>);

impl SensorPolicy {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `Q × Σo`.
    pub fn full(plant: &Plant) -> Self {
        Self::full_over(plant, plant.observable_events().collect::<Vec<_>>())
    }

    /// `Q × events`.
    pub fn full_over(plant: &Plant, events: impl IntoIterator<Item = EventId> + Clone) -> Self {
        plant
            .states()
            .flat_map(|q| events.clone().into_iter().map(move |e| (q, e)))
            .collect()
    }

    pub fn contains(&self, q: StateId, e: EventId) -> bool {
        self.0.contains(&(q, e))
    }

    pub fn insert(&mut self, q: StateId, e: EventId) -> bool {
        self.0.insert((q, e))
    }

    pub fn remove(&mut self, q: StateId, e: EventId) -> bool {
        self.0.remove(&(q, e))
    }

    pub fn without(&self, q: StateId, e: EventId) -> Self {
        let mut p = self.clone();
        p.remove(q, e);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (StateId, EventId)> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &SensorPolicy) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &SensorPolicy) -> SensorPolicy {
        SensorPolicy(self.0.union(&other.0).copied().collect())
    }

    pub fn validate(&self, plant: &Plant) -> Result<(), ObsError> {
        for (q, e) in self.iter() {
            if q.index() >= plant.num_states() || e.index() >= plant.num_events() {
                return Err(ObsError::OutOfRange);
            }
            if !plant.is_observable(e) {
                return Err(ObsError::UnobservableEvent(plant.event_name(e).to_string()));
            }
        }
        Ok(())
    }

    /// `{(0,a), (2,b)}` with display names.
    pub fn render(&self, plant: &Plant) -> String {
        let items: Vec<String> = self
            .iter()
            .map(|(q, e)| format!("({},{})", plant.state_name(q), plant.event_name(e)))
            .collect();
        format!("{{{}}}", items.join(", "))
    }
}

impl FromIterator<(StateId, EventId)> for SensorPolicy {
    fn from_iter<I: IntoIterator<Item = (StateId, EventId)>>(iter: I) -> Self {
        SensorPolicy(iter.into_iter().collect())
    }
}

/// What a static observer sees along `s` when decisions are made at the
/// current plant state.
pub fn info_map(
    plant: &Plant,
    policy: &SensorPolicy,
    s: &[EventId],
) -> Result<Vec<EventId>, ObsError> {
    let mut q = plant.initial();
    let mut out = Vec::new();
    for &e in s {
        if policy.contains(q, e) {
            out.push(e);
        }
        q = plant.next(q, e).ok_or(ObsError::WordNotInLanguage)?;
    }
    Ok(out)
}

/// What the agent sees along μ when each plant event is judged by the
/// command in force, i.e. the decision made at the end state of the executed
/// command string.
pub fn p_map(
    comm: &CommAutomaton,
    plant: &Plant,
    policy: &SensorPolicy,
    mu: &[ExtendedEvent],
) -> Result<Vec<EventId>, ObsError> {
    comm.step(mu).ok_or(ObsError::WordNotInLanguage)?;
    let mut x = plant.initial();
    let mut out = Vec::new();
    for &l in mu {
        match l {
            ExtendedEvent::Plant(e) => {
                if policy.contains(x, e) {
                    out.push(e);
                }
            }
            ExtendedEvent::Exec(e) => {
                x = plant.next(x, e).ok_or(ObsError::WordNotInLanguage)?;
            }
            ExtendedEvent::Comm(_) => {}
        }
    }
    Ok(out)
}

/// Pairs of states reachable by two words with the same observation.
///
/// `observed(state, label)` says whether that transition is seen. Built as
/// the reachable part of the pair product: unseen moves advance one side,
/// seen moves advance both sides on the same label.
pub fn confusable_pairs<L: Copy + Ord>(
    a: &Automaton<L>,
    observed: impl Fn(StateId, L) -> bool,
) -> PairSet {
    let init = (a.initial(), a.initial());
    let mut seen: HashSet<(StateId, StateId)> = HashSet::from([init]);
    let mut queue = VecDeque::from([init]);
    let mut push = |p: StateId, q: StateId, queue: &mut VecDeque<_>| {
        let key = if p <= q { (p, q) } else { (q, p) };
        if seen.insert(key) {
            queue.push_back(key);
        }
    };
    while let Some((u, v)) = queue.pop_front() {
        for &(l, u2) in a.edges(u) {
            if observed(u, l) {
                if let Some(v2) = a.next(v, l) {
                    if observed(v, l) {
                        push(u2, v2, &mut queue);
                    }
                }
            } else {
                push(u2, v, &mut queue);
            }
        }
        for &(l, v2) in a.edges(v) {
            if !observed(v, l) {
                push(u, v2, &mut queue);
            }
        }
    }
    seen.into_iter().collect()
}

/// Confusable pairs of the refined automaton: a plant move is seen iff the
/// decision in force (made at the tracker state) activates its sensor.
/// Delivery and execution moves are never seen.
pub fn w_conf_pairs(w: &WAutomaton, policy: &SensorPolicy) -> PairSet {
    confusable_pairs(w.automaton(), |s, l| match l {
        ExtendedEvent::Plant(e) => policy.contains(w.tracker(s), e),
        _ => false,
    })
}

/// Drops everything but the plant states of each refined pair.
pub fn project_conf_pairs(w: &WAutomaton, pairs: &PairSet) -> PairSet {
    pairs
        .iter()
        .map(|(a, b)| (w.plant_state(a), w.plant_state(b)))
        .collect()
}

/// Plant-state pairs confusable under the delayed observation mapping.
pub fn conf_pairs(w: &WAutomaton, policy: &SensorPolicy) -> PairSet {
    project_conf_pairs(w, &w_conf_pairs(w, policy))
}

/// Confusable pairs of the plant itself under the undelayed mapping.
pub fn static_conf_pairs(plant: &Plant, policy: &SensorPolicy) -> PairSet {
    confusable_pairs(&plant.automaton(), |q, e| policy.contains(q, e))
}

/// States reachable from `q` by at most `n` events.
pub fn reach_within(plant: &Plant, q: StateId, n: u32) -> BTreeSet<StateId> {
    let mut out = BTreeSet::from([q]);
    let mut frontier = vec![q];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in frontier {
            for (_, edge) in plant.out(p) {
                if out.insert(edge.target) {
                    next.push(edge.target);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out
}

/// Widens each confusable pair by what can happen while up to `no` events
/// are still in transit.
pub fn delayed_conf_pairs(plant: &Plant, tconf: &PairSet, no: u32) -> PairSet {
    let reach: Vec<BTreeSet<StateId>> =
        plant.states().map(|q| reach_within(plant, q, no)).collect();
    let mut out = PairSet::new();
    for (q, q2) in tconf.iter() {
        for &x in &reach[q.index()] {
            for &x2 in &reach[q2.index()] {
                out.insert(x, x2);
            }
        }
    }
    out
}
