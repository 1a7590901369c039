//! Deterministic finite automata, timed plant models, and the small string
//! utilities shared by every other module.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Dense state identifier. Valid for the automaton that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

/// Dense event identifier of a [`Plant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EventId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for StateId {
    fn from(i: usize) -> Self {
        StateId(i as u32)
    }
}

impl From<usize> for EventId {
    fn from(i: usize) -> Self {
        EventId(i as u32)
    }
}

/// Label of the communication automaton.
///
/// `Plant(σ)` is the occurrence of σ, `Comm(σ)` the delivery of that
/// occurrence to the agent, and `Exec(σ)` the execution of the activation
/// command issued right after the delivery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedEvent {
    Plant(EventId),
    Comm(EventId),
    Exec(EventId),
}

impl ExtendedEvent {
    pub fn base(self) -> EventId {
        match self {
            ExtendedEvent::Plant(e) | ExtendedEvent::Comm(e) | ExtendedEvent::Exec(e) => e,
        }
    }

    pub fn is_plant(self) -> bool {
        matches!(self, ExtendedEvent::Plant(_))
    }

    pub fn kind(self) -> &'static str {
        match self {
            ExtendedEvent::Plant(_) => "plant",
            ExtendedEvent::Comm(_) => "comm",
            ExtendedEvent::Exec(_) => "exec",
        }
    }

    /// `a`, `h(a)` or `g(a)`.
    pub fn render(self, plant: &Plant) -> String {
        let name = plant.event_name(self.base());
        match self {
            ExtendedEvent::Plant(_) => name.to_string(),
            ExtendedEvent::Comm(_) => format!("h({name})"),
            ExtendedEvent::Exec(_) => format!("g({name})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FsaError {
    #[error("state {0} already has a transition labelled with this event")]
    DuplicateTransition(u32),
    #[error("state index {0} out of range")]
    StateOutOfRange(u32),
    #[error("automaton already carries non-plant labels; cannot relabel")]
    NotPlantLabel,
}

/// Deterministic automaton over an arbitrary label type.
///
/// Outgoing edges of every state are kept sorted by label, which makes the
/// transition function a binary search and keeps iteration order stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton<L> {
    alphabet: BTreeSet<L>,
    initial: StateId,
    edges: Vec<Vec<(L, StateId)>>,
}

impl<L: Copy + Ord> Automaton<L> {
    pub fn new(num_states: usize, initial: StateId) -> Self {
        Automaton {
            alphabet: BTreeSet::new(),
            initial,
            edges: vec![Vec::new(); num_states.max(initial.index() + 1)],
        }
    }

    /// Declares labels that belong to the alphabet even when no edge uses
    /// them. Matters for parallel composition.
    pub fn with_alphabet(mut self, labels: impl IntoIterator<Item = L>) -> Self {
        self.alphabet.extend(labels);
        self
    }

    pub fn add_state(&mut self) -> StateId {
        self.edges.push(Vec::new());
        StateId::from(self.edges.len() - 1)
    }

    pub fn add_edge(&mut self, from: StateId, label: L, to: StateId) -> Result<(), FsaError> {
        let n = self.edges.len();
        if from.index() >= n {
            return Err(FsaError::StateOutOfRange(from.0));
        }
        if to.index() >= n {
            return Err(FsaError::StateOutOfRange(to.0));
        }
        let out = &mut self.edges[from.index()];
        match out.binary_search_by(|(l, _)| l.cmp(&label)) {
            Ok(_) => Err(FsaError::DuplicateTransition(from.0)),
            Err(pos) => {
                out.insert(pos, (label, to));
                self.alphabet.insert(label);
                Ok(())
            }
        }
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn alphabet(&self) -> &BTreeSet<L> {
        &self.alphabet
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.edges.len()).map(StateId::from)
    }

    pub fn edges(&self, from: StateId) -> &[(L, StateId)] {
        &self.edges[from.index()]
    }

    pub fn next(&self, from: StateId, label: L) -> Option<StateId> {
        let out = &self.edges[from.index()];
        out.binary_search_by(|(l, _)| l.cmp(&label))
            .ok()
            .map(|i| out[i].1)
    }

    /// Extended transition function; `None` as soon as a step is undefined.
    pub fn step(&self, from: StateId, word: &[L]) -> Option<StateId> {
        word.iter().try_fold(from, |q, &l| self.next(q, l))
    }

    pub fn accepts(&self, word: &[L]) -> bool {
        self.step(self.initial, word).is_some()
    }

    /// At most one successor per (state, label). Holds by construction; kept
    /// as an explicit check for tests.
    pub fn is_deterministic(&self) -> bool {
        self.edges
            .iter()
            .all(|out| out.windows(2).all(|w| w[0].0 < w[1].0))
    }

    /// All words of length at most `k` generated from the initial state.
    pub fn bounded_language(&self, k: usize) -> BTreeSet<Vec<L>> {
        let mut out = BTreeSet::new();
        let mut frontier = vec![(Vec::new(), self.initial)];
        out.insert(Vec::new());
        for _ in 0..k {
            let mut next = Vec::new();
            for (word, q) in &frontier {
                for &(l, t) in self.edges(*q) {
                    let mut w = word.clone();
                    w.push(l);
                    out.insert(w.clone());
                    next.push((w, t));
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.edges.len()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial.index()] = true;
        while let Some(q) = queue.pop_front() {
            for &(_, t) in self.edges(q) {
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }
}

/// Result of [`parallel_compose`]: the product plus the component states of
/// every product state.
#[derive(Debug, Clone)]
pub struct Composition<L> {
    pub automaton: Automaton<L>,
    pub components: Vec<(StateId, StateId)>,
}

/// Synchronous product. Labels in both alphabets synchronize, the rest
/// interleave. Only the reachable part is built, in BFS order.
pub fn parallel_compose<L: Copy + Ord>(a: &Automaton<L>, b: &Automaton<L>) -> Composition<L> {
    let shared: BTreeSet<L> = a.alphabet.intersection(&b.alphabet).copied().collect();
    let start = (a.initial, b.initial);
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::from([(start, StateId(0))]);
    let mut components = vec![start];
    let mut edges: Vec<Vec<(L, StateId)>> = vec![Vec::new()];
    let mut queue = VecDeque::from([start]);

    while let Some((p, q)) = queue.pop_front() {
        let src = index[&(p, q)];
        let mut moves = Vec::new();
        for &(l, p2) in a.edges(p) {
            if shared.contains(&l) {
                if let Some(q2) = b.next(q, l) {
                    moves.push((l, (p2, q2)));
                }
            } else {
                moves.push((l, (p2, q)));
            }
        }
        for &(l, q2) in b.edges(q) {
            if !shared.contains(&l) {
                moves.push((l, (p, q2)));
            }
        }
        moves.sort_by_key(|m| m.0);
        for (l, target) in moves {
            let id = *index.entry(target).or_insert_with(|| {
                components.push(target);
                edges.push(Vec::new());
                queue.push_back(target);
                StateId::from(components.len() - 1)
            });
            edges[src.index()].push((l, id));
        }
    }

    let automaton = Automaton {
        alphabet: a.alphabet.union(&b.alphabet).copied().collect(),
        initial: StateId(0),
        edges,
    };
    Composition {
        automaton,
        components,
    }
}

/// `s₋ᵢ`: drops the last `min(i, |s|)` symbols.
pub fn suffix_truncate<T>(word: &[T], i: usize) -> &[T] {
    &word[..word.len().saturating_sub(i)]
}

/// Symmetric set of state pairs, stored as `(min, max)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSet(BTreeSet<(StateId, StateId)>);

fn normalize(a: StateId, b: StateId) -> (StateId, StateId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl PairSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: StateId, b: StateId) -> bool {
        self.0.insert(normalize(a, b))
    }

    pub fn contains(&self, a: StateId, b: StateId) -> bool {
        self.0.contains(&normalize(a, b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.0.iter().copied()
    }

    /// Pairs with distinct components; what reports print.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.iter().filter(|(a, b)| a != b)
    }

    pub fn without_diagonal(&self) -> PairSet {
        self.off_diagonal().collect()
    }

    pub fn intersection(&self, other: &PairSet) -> PairSet {
        PairSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &PairSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &PairSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn extend_from(&mut self, other: &PairSet) {
        self.0.extend(other.iter());
    }
}

impl FromIterator<(StateId, StateId)> for PairSet {
    fn from_iter<I: IntoIterator<Item = (StateId, StateId)>>(iter: I) -> Self {
        let mut set = PairSet::new();
        for (a, b) in iter {
            set.insert(a, b);
        }
        set
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate transition from state `{state}` on event `{event}`")]
    DuplicateTransition { state: String, event: String },
    #[error("transition from state `{state}` on event `{event}` has minimum occurring time 0")]
    ZeroOccurringTime { state: String, event: String },
    #[error("unknown state or event `{0}`")]
    UnknownStateOrEvent(String),
    #[error("model has no initial state")]
    NoInitialState,
    #[error("name `{0}` declared twice")]
    DuplicateName(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub target: StateId,
    pub t_min: u32,
}

/// Deterministic plant with a minimum occurring time on every transition and
/// an observable/unobservable event partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plant {
    state_names: Vec<String>,
    event_names: Vec<String>,
    observable: Vec<bool>,
    initial: StateId,
    table: Vec<Vec<Option<Edge>>>,
}

/// Collects names and transitions; [`PlantBuilder::build`] validates them.
#[derive(Debug, Clone, Default)]
pub struct PlantBuilder {
    states: Vec<String>,
    events: Vec<(String, bool)>,
    initial: Option<String>,
    transitions: Vec<(String, String, String, u32)>,
}

impl PlantBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(mut self, name: impl Into<String>) -> Self {
        self.states.push(name.into());
        self
    }

    pub fn states<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.states.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn event(mut self, name: impl Into<String>, observable: bool) -> Self {
        self.events.push((name.into(), observable));
        self
    }

    pub fn initial(mut self, name: impl Into<String>) -> Self {
        self.initial = Some(name.into());
        self
    }

    pub fn transition(
        mut self,
        from: impl Into<String>,
        event: impl Into<String>,
        to: impl Into<String>,
        t_min: u32,
    ) -> Self {
        self.transitions
            .push((from.into(), event.into(), to.into(), t_min));
        self
    }

    pub fn build(self) -> Result<Plant, ModelError> {
        let mut state_ix = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if state_ix.insert(s.clone(), StateId::from(i)).is_some() {
                return Err(ModelError::DuplicateName(s.clone()));
            }
        }
        let mut event_ix = HashMap::new();
        for (i, (e, _)) in self.events.iter().enumerate() {
            if event_ix.insert(e.clone(), EventId::from(i)).is_some() {
                return Err(ModelError::DuplicateName(e.clone()));
            }
        }
        let initial_name = self.initial.ok_or(ModelError::NoInitialState)?;
        let initial = *state_ix
            .get(&initial_name)
            .ok_or(ModelError::UnknownStateOrEvent(initial_name))?;

        let mut table = vec![vec![None; self.events.len()]; self.states.len()];
        for (from, event, to, t_min) in self.transitions {
            let lookup_state = |n: &String| {
                state_ix
                    .get(n)
                    .copied()
                    .ok_or_else(|| ModelError::UnknownStateOrEvent(n.clone()))
            };
            let q = lookup_state(&from)?;
            let t = lookup_state(&to)?;
            let e = *event_ix
                .get(&event)
                .ok_or_else(|| ModelError::UnknownStateOrEvent(event.clone()))?;
            if t_min == 0 {
                return Err(ModelError::ZeroOccurringTime { state: from, event });
            }
            let slot = &mut table[q.index()][e.index()];
            if slot.is_some() {
                return Err(ModelError::DuplicateTransition { state: from, event });
            }
            *slot = Some(Edge { target: t, t_min });
        }

        Ok(Plant {
            state_names: self.states,
            observable: self.events.iter().map(|(_, o)| *o).collect(),
            event_names: self.events.into_iter().map(|(e, _)| e).collect(),
            initial,
            table,
        })
    }
}

impl Plant {
    pub fn builder() -> PlantBuilder {
        PlantBuilder::new()
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_events(&self) -> usize {
        self.event_names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.num_states()).map(StateId::from)
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> {
        (0..self.num_events()).map(EventId::from)
    }

    pub fn observable_events(&self) -> impl Iterator<Item = EventId> + '_ {
        self.events().filter(|&e| self.is_observable(e))
    }

    pub fn is_observable(&self, e: EventId) -> bool {
        self.observable[e.index()]
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q.index()]
    }

    pub fn event_name(&self, e: EventId) -> &str {
        &self.event_names[e.index()]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names
            .iter()
            .position(|s| s == name)
            .map(StateId::from)
    }

    pub fn event_by_name(&self, name: &str) -> Option<EventId> {
        self.event_names
            .iter()
            .position(|s| s == name)
            .map(EventId::from)
    }

    pub fn edge(&self, q: StateId, e: EventId) -> Option<Edge> {
        self.table[q.index()][e.index()]
    }

    pub fn next(&self, q: StateId, e: EventId) -> Option<StateId> {
        self.edge(q, e).map(|edge| edge.target)
    }

    pub fn t_min(&self, q: StateId, e: EventId) -> Option<u32> {
        self.edge(q, e).map(|edge| edge.t_min)
    }

    /// Outgoing transitions of `q` in event order.
    pub fn out(&self, q: StateId) -> impl Iterator<Item = (EventId, Edge)> + '_ {
        self.table[q.index()]
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.map(|edge| (EventId::from(i), edge)))
    }

    /// Every transition `(q, σ, edge)`.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, Edge)> + '_ {
        self.states()
            .flat_map(move |q| self.out(q).map(move |(e, edge)| (q, e, edge)))
    }

    pub fn step(&self, q: StateId, word: &[EventId]) -> Option<StateId> {
        word.iter().try_fold(q, |q, &e| self.next(q, e))
    }

    pub fn automaton(&self) -> Automaton<EventId> {
        let mut a = Automaton::new(self.num_states(), self.initial).with_alphabet(self.events());
        for (q, e, edge) in self.transitions() {
            a.add_edge(q, e, edge.target)
                .expect("plant is deterministic");
        }
        a
    }

    /// The plant with every label wrapped as `Plant(σ)`.
    pub fn extended(&self) -> Automaton<ExtendedEvent> {
        let mut a = Automaton::new(self.num_states(), self.initial)
            .with_alphabet(self.events().map(ExtendedEvent::Plant));
        for (q, e, edge) in self.transitions() {
            a.add_edge(q, ExtendedEvent::Plant(e), edge.target)
                .expect("plant is deterministic");
        }
        a
    }

    pub fn bounded_language(&self, k: usize) -> BTreeSet<Vec<EventId>> {
        self.automaton().bounded_language(k)
    }

    pub fn render_word(&self, word: &[EventId]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        word.iter()
            .map(|&e| self.event_name(e))
            .collect::<Vec<_>>()
            .join("")
    }

    pub fn render_pairs(&self, pairs: &PairSet) -> Vec<[String; 2]> {
        pairs
            .off_diagonal()
            .map(|(a, b)| {
                [
                    self.state_name(a).to_string(),
                    self.state_name(b).to_string(),
                ]
            })
            .collect()
    }
}

/// `Gᵍ`: the plant shape with every event σ replaced by `Exec(σ)`.
pub fn relabel_exec(plant: &Plant) -> Automaton<ExtendedEvent> {
    relabel_to_exec(&plant.extended()).expect("freshly lifted plant has plant labels only")
}

/// Relabels an automaton whose labels are all `Plant(σ)`. Anything else was
/// already relabelled (or is a communication automaton) and is rejected.
pub fn relabel_to_exec(a: &Automaton<ExtendedEvent>) -> Result<Automaton<ExtendedEvent>, FsaError> {
    if !a.alphabet().iter().all(|l| l.is_plant()) {
        return Err(FsaError::NotPlantLabel);
    }
    let mut out = Automaton::new(a.num_states(), a.initial())
        .with_alphabet(a.alphabet().iter().map(|l| ExtendedEvent::Exec(l.base())));
    for q in a.states() {
        for &(l, t) in a.edges(q) {
            out.add_edge(q, ExtendedEvent::Exec(l.base()), t)?;
        }
    }
    Ok(out)
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn word(plant: &Plant, s: &str) -> Vec<EventId> {
        s.chars()
            .map(|c| plant.event_by_name(&c.to_string()).unwrap())
            .collect()
    }

    fn toy_builder(t_2f: u32) -> PlantBuilder {
        Plant::builder()
            .states(["0", "1", "2", "3", "4", "5"])
            .event("a", true)
            .event("b", true)
            .event("f", false)
            .initial("0")
            .transition("0", "a", "1", 2)
            .transition("0", "b", "2", 2)
            .transition("2", "f", "3", t_2f)
            .transition("3", "a", "4", 2)
            .transition("4", "b", "5", 2)
    }

    #[test]
    fn toy_is_valid_and_matches_fixture() {
        let built = toy_builder(1).build().unwrap();
        assert_eq!(built, fixtures::toy());
        let f = built.event_by_name("f").unwrap();
        assert_eq!(built.t_min(StateId(2), f), Some(1));
        assert!(!built.is_observable(f));
    }

    #[test]
    fn zero_occurring_time_rejected() {
        let err = toy_builder(0).build().unwrap_err();
        assert!(matches!(err, ModelError::ZeroOccurringTime { .. }));
    }

    #[test]
    fn duplicate_transition_rejected() {
        let err = Plant::builder()
            .states(["0", "1", "2"])
            .event("a", true)
            .initial("0")
            .transition("0", "a", "1", 1)
            .transition("0", "a", "2", 1)
            .build()
            .unwrap_err();
        assert!(matches!(err, ModelError::DuplicateTransition { .. }));
    }

    #[test]
    fn unknown_names_and_missing_initial() {
        let err = Plant::builder()
            .state("0")
            .event("a", true)
            .initial("0")
            .transition("0", "z", "0", 1)
            .build()
            .unwrap_err();
        assert_eq!(err, ModelError::UnknownStateOrEvent("z".into()));
        let err = Plant::builder().state("0").build().unwrap_err();
        assert_eq!(err, ModelError::NoInitialState);
    }

    #[test]
    fn extended_step() {
        let toy = fixtures::toy();
        assert_eq!(toy.step(StateId(0), &word(&toy, "bfa")), Some(StateId(4)));
        assert_eq!(toy.step(StateId(0), &[]), Some(StateId(0)));
        assert_eq!(toy.step(StateId(0), &word(&toy, "ab")), None);
    }

    #[test]
    fn toy_language() {
        let toy = fixtures::toy();
        let lang: BTreeSet<String> = toy
            .bounded_language(6)
            .iter()
            .map(|w| toy.render_word(w))
            .collect();
        let expected: BTreeSet<String> = ["ε", "a", "b", "bf", "bfa", "bfab"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(lang, expected);
        assert_eq!(toy.bounded_language(0).len(), 1);
    }

    #[test]
    fn prodline_language_depth_three() {
        let p = fixtures::prodline();
        let lang: BTreeSet<String> = p
            .bounded_language(3)
            .iter()
            .map(|w| p.render_word(w))
            .collect();
        let expected: BTreeSet<String> = ["ε", "a", "ab", "af", "abc", "afa"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(lang, expected);
    }

    #[test]
    fn relabel_shapes_and_rejects_twice() {
        let toy = fixtures::toy();
        let g = relabel_exec(&toy);
        assert_eq!(g.num_transitions(), 5);
        let (a, b) = (EventId(0), EventId(1));
        assert_eq!(g.next(StateId(0), ExtendedEvent::Exec(a)), Some(StateId(1)));
        assert_eq!(g.next(StateId(4), ExtendedEvent::Exec(b)), Some(StateId(5)));
        assert_eq!(g.next(StateId(0), ExtendedEvent::Plant(a)), None);
        assert_eq!(relabel_to_exec(&g), Err(FsaError::NotPlantLabel));

        let empty: Automaton<ExtendedEvent> = Automaton::new(1, StateId(0));
        assert_eq!(relabel_to_exec(&empty).unwrap().num_transitions(), 0);
    }

    #[test]
    fn compose_identical_is_isomorphic() {
        let a = fixtures::toy().automaton();
        let c = parallel_compose(&a, &a);
        assert_eq!(c.automaton.num_states(), 6);
        assert!(c.components.iter().all(|(p, q)| p == q));
        assert_eq!(c.automaton.bounded_language(6), a.bounded_language(6));
    }

    #[test]
    fn compose_disjoint_alphabets_shuffles() {
        let mut a: Automaton<u8> = Automaton::new(2, StateId(0));
        a.add_edge(StateId(0), 1, StateId(1)).unwrap();
        let mut b: Automaton<u8> = Automaton::new(2, StateId(0));
        b.add_edge(StateId(0), 2, StateId(1)).unwrap();
        let c = parallel_compose(&a, &b);
        assert_eq!(c.automaton.num_states(), 4);
        let lang = c.automaton.bounded_language(3);
        let expected: BTreeSet<Vec<u8>> = [vec![], vec![1], vec![2], vec![1, 2], vec![2, 1]]
            .into_iter()
            .collect();
        assert_eq!(lang, expected);
    }

    #[test]
    fn suffix_truncation() {
        let w = ['b', 'f', 'a', 'b'];
        assert_eq!(suffix_truncate(&w, 1), &['b', 'f', 'a']);
        assert!(suffix_truncate(&w, 9).is_empty());
        assert!(suffix_truncate::<char>(&[], 2).is_empty());
    }

    #[test]
    fn pair_set_is_symmetric() {
        let mut s = PairSet::new();
        s.insert(StateId(4), StateId(2));
        assert!(s.contains(StateId(2), StateId(4)));
        assert!(s.contains(StateId(4), StateId(2)));
        s.insert(StateId(1), StateId(1));
        assert_eq!(s.off_diagonal().count(), 1);
    }
}
