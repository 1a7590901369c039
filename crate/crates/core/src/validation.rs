//! Word-enumerating oracles, a seeded random walk over the communication
//! automaton, and random model generation. These restate the definitions
//! directly so the constructive engines can be checked against them.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comm::CommAutomaton;
use crate::diagnosis::FaultSpec;
use crate::fsa::{suffix_truncate, EventId, ExtendedEvent, PairSet, Plant, PlantBuilder, StateId};
use crate::observe::{info_map, SensorPolicy};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimTrace {
    pub seed: u64,
    pub mu: Vec<ExtendedEvent>,
    pub observation: Vec<EventId>,
    /// Whether each step was seen by the agent.
    pub observed: Vec<bool>,
    /// Plant state whose decision is in force after each step.
    pub commands: Vec<StateId>,
}

impl SimTrace {
    /// One line per step: index, event, channel contents, command state in
    /// force, observation so far.
    pub fn log_lines(&self, plant: &Plant, comm: &CommAutomaton) -> Vec<String> {
        let a = comm.automaton();
        let mut q = a.initial();
        let mut seen = Vec::new();
        let mut lines = Vec::new();
        for (i, &l) in self.mu.iter().enumerate() {
            if self.observed[i] {
                seen.push(l.base());
            }
            q = a.next(q, l).expect("trace stays in the language");
            let s = comm.state(q);
            lines.push(format!(
                "{}\t{}\tobs={}\tctrl={}\tcmd={}\tseen={}",
                i + 1,
                l.render(plant),
                s.obs.render(plant),
                s.ctrl.render(plant),
                plant.state_name(self.commands[i]),
                plant.render_word(&seen)
            ));
        }
        lines
    }
}

/// Uniform random walk over the enabled moves of the communication
/// automaton, after replaying `prefix`. Stops at `max_len` moves or when
/// nothing is enabled.
pub fn simulate_run(
    comm: &CommAutomaton,
    plant: &Plant,
    policy: &SensorPolicy,
    seed: u64,
    max_len: usize,
    prefix: &[ExtendedEvent],
) -> SimTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = comm.automaton();
    let mut state = a.initial();
    let mut x = plant.initial();
    let mut trace = SimTrace {
        seed,
        mu: Vec::new(),
        observation: Vec::new(),
        observed: Vec::new(),
        commands: Vec::new(),
    };
    let mut forced = prefix.iter();
    while trace.mu.len() < max_len {
        let label = match forced.next() {
            Some(&l) => l,
            None => {
                let out = a.edges(state);
                if out.is_empty() {
                    break;
                }
                out[rng.random_range(0..out.len())].0
            }
        };
        state = a
            .next(state, label)
            .expect("forced prefix must be in the language");
        let mut observed = false;
        match label {
            ExtendedEvent::Plant(e) if policy.contains(x, e) => {
                trace.observation.push(e);
                observed = true;
            }
            ExtendedEvent::Exec(e) => {
                x = plant.next(x, e).expect("executed command is a plant word")
            }
            _ => {}
        }
        trace.mu.push(label);
        trace.observed.push(observed);
        trace.commands.push(x);
    }
    trace
}

/// `{(q, q')}` reached by words of the communication automaton of length at
/// most `bound` with equal observation. Observation of a plant event is
/// decided by the command in force.
pub fn brute_force_conf_pairs(
    comm: &CommAutomaton,
    plant: &Plant,
    policy: &SensorPolicy,
    bound: usize,
) -> PairSet {
    let a = comm.automaton();
    // (comm state, command state, observation); breadth-first so the first
    // visit of a configuration has the most budget left.
    let start = (a.initial(), plant.initial(), Vec::new());
    let mut seen = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    for _ in 0..bound {
        let mut next = Vec::new();
        for (q, x, obs) in &frontier {
            for &(l, t) in a.edges(*q) {
                let mut obs2 = obs.clone();
                let mut x2 = *x;
                match l {
                    ExtendedEvent::Plant(e) if policy.contains(*x, e) => obs2.push(e),
                    ExtendedEvent::Exec(e) => x2 = plant.next(*x, e).expect("command word"),
                    _ => {}
                }
                let key = (t, x2, obs2);
                if seen.insert(key.clone()) {
                    next.push(key);
                }
            }
        }
        frontier = next;
    }
    let mut by_obs: HashMap<Vec<EventId>, BTreeSet<StateId>> = HashMap::new();
    for (q, _, obs) in seen {
        by_obs.entry(obs).or_default().insert(comm.state(q).plant);
    }
    pairs_within_groups(by_obs.values())
}

fn pairs_within_groups<'a>(groups: impl Iterator<Item = &'a BTreeSet<StateId>>) -> PairSet {
    let mut out = PairSet::new();
    for g in groups {
        for &a in g {
            for &b in g {
                out.insert(a, b);
            }
        }
    }
    out
}

fn reached_words(plant: &Plant, bound: usize) -> Vec<(Vec<EventId>, StateId)> {
    plant
        .bounded_language(bound)
        .into_iter()
        .map(|w| {
            let q = plant
                .step(plant.initial(), &w)
                .expect("word of the language");
            (w, q)
        })
        .collect()
}

/// `{θ(s₋ⱼ) : 0 ≤ j ≤ no}`.
pub fn delayed_observations(
    plant: &Plant,
    policy: &SensorPolicy,
    s: &[EventId],
    no: u32,
) -> BTreeSet<Vec<EventId>> {
    (0..=no as usize)
        .map(|j| info_map(plant, policy, suffix_truncate(s, j)).expect("prefix of a word"))
        .collect()
}

/// Plant-state pairs of words up to `bound` whose delayed observation sets
/// intersect.
pub fn brute_force_delayed_overlap(
    plant: &Plant,
    policy: &SensorPolicy,
    no: u32,
    bound: usize,
) -> PairSet {
    let mut by_obs: HashMap<Vec<EventId>, BTreeSet<StateId>> = HashMap::new();
    for (w, q) in reached_words(plant, bound) {
        for o in delayed_observations(plant, policy, &w, no) {
            by_obs.entry(o).or_default().insert(q);
        }
    }
    // Two words overlap iff they share some observation; collect per group.
    pairs_within_groups(by_obs.values())
}

/// Counter value a refined state should carry after `word`: `-1` before
/// the first fault of the class, else events since it, capped at `K`.
pub fn word_counters(faults: &FaultSpec, word: &[EventId]) -> Vec<i32> {
    faults
        .classes()
        .iter()
        .map(|c| match word.iter().position(|e| c.events.contains(e)) {
            None => -1,
            Some(i) => ((word.len() - i - 1) as i32).min(faults.k() as i32),
        })
        .collect()
}

/// A witness against delay K-diagnosability among words of length at most
/// `bound`: a word with at least `K` events after a fault of some class,
/// and a word free of that class, sharing a delayed observation.
pub fn brute_force_k_diag_witness(
    plant: &Plant,
    faults: &FaultSpec,
    policy: &SensorPolicy,
    no: u32,
    bound: usize,
) -> Option<(Vec<EventId>, Vec<EventId>)> {
    let words = reached_words(plant, bound);
    for class in faults.classes() {
        let mut clean: HashMap<Vec<EventId>, Vec<EventId>> = HashMap::new();
        for (w, _) in &words {
            if !w.iter().any(|e| class.events.contains(e)) {
                for o in delayed_observations(plant, policy, w, no) {
                    clean.entry(o).or_insert_with(|| w.clone());
                }
            }
        }
        for (w, _) in &words {
            let Some(i) = w.iter().position(|e| class.events.contains(e)) else {
                continue;
            };
            if w.len() - i - 1 < faults.k() as usize {
                continue;
            }
            for o in delayed_observations(plant, policy, w, no) {
                if let Some(other) = clean.get(&o) {
                    return Some((w.clone(), other.clone()));
                }
            }
        }
    }
    None
}

/// `{ψ(μ) : μ ∈ L(G̃)}` restricted to plant words of length at most `k`.
pub fn projected_language(comm: &CommAutomaton, k: usize) -> BTreeSet<Vec<EventId>> {
    let a = comm.automaton();
    let start = (a.initial(), Vec::new());
    let mut seen = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    while let Some((q, w)) = stack.pop() {
        for &(l, t) in a.edges(q) {
            let mut w2 = w.clone();
            if let ExtendedEvent::Plant(e) = l {
                if w.len() == k {
                    continue;
                }
                w2.push(e);
            }
            if seen.insert((t, w2.clone())) {
                stack.push((t, w2));
            }
        }
    }
    seen.into_iter().map(|(_, w)| w).collect()
}

/// Random deterministic plant: state `0` initial, events `e0..` with the
/// last one unobservable, occurring times in `1..=3`. With `acyclic`, every
/// transition goes to a higher-numbered state so the language is finite.
pub fn random_plant(seed: u64, states: usize, events: usize, acyclic: bool) -> Plant {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = PlantBuilder::new()
        .states((0..states).map(|i| i.to_string()))
        .initial("0");
    for e in 0..events {
        b = b.event(format!("e{e}"), e + 1 < events);
    }
    for q in 0..states {
        for e in 0..events {
            if !rng.random_bool(0.45) {
                continue;
            }
            let target = if acyclic {
                if q + 1 >= states {
                    continue;
                }
                rng.random_range(q + 1..states)
            } else {
                rng.random_range(0..states)
            };
            b = b.transition(
                q.to_string(),
                format!("e{e}"),
                target.to_string(),
                rng.random_range(1..=3),
            );
        }
    }
    b.build().expect("generated model is valid")
}

/// Random subset of `Q × Σo`.
pub fn random_policy(plant: &Plant, seed: u64, density: f64) -> SensorPolicy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SensorPolicy::full(plant)
        .iter()
        .filter(|_| rng.random_bool(density))
        .collect()
}
