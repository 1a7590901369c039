//! Several agents, each with its own sensors, channels and delay bounds.
//!
//! A tuple `(q, q1, …, qn)` is confusable when one true word `s` reaches `q`
//! and, for every agent `i`, some word `si` reaching `qi` shares a delayed
//! observation with `s` under agent `i`'s policy. A delayed observation of
//! `s` is what the agent saw of `s` with up to `No_i` trailing events still in
//! transit.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::channel::DelayBounds;
use crate::comm::{build_w, BuildError, WAutomaton};
use crate::fsa::{suffix_truncate, EventId, PairSet, Plant, StateId};
use crate::observe::{info_map, reach_within, SensorPolicy};
use crate::synthesis::{minimize_from, PickOrder, TraceStep};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentProfile {
    pub id: usize,
    pub observable: Vec<EventId>,
    pub bounds: DelayBounds,
}

impl AgentProfile {
    pub fn new(id: usize, observable: Vec<EventId>, no: u32, nc: u32) -> Self {
        AgentProfile {
            id,
            observable,
            bounds: DelayBounds::new(no, nc),
        }
    }

    /// `Q × Σo,i`.
    pub fn full_policy(&self, plant: &Plant) -> SensorPolicy {
        SensorPolicy::full_over(plant, self.observable.clone())
    }
}

/// One policy per agent, aligned with the agent list.
pub type PolicyVector = Vec<SensorPolicy>;

/// Forbidden `(n+1)`-tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointSpec {
    arity: usize,
    tuples: BTreeSet<Vec<StateId>>,
}

impl JointSpec {
    pub fn new(arity: usize) -> Self {
        JointSpec {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    pub fn insert(&mut self, tuple: Vec<StateId>) {
        assert_eq!(tuple.len(), self.arity, "tuple arity");
        self.tuples.insert(tuple);
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<StateId>> {
        self.tuples.iter()
    }

    pub fn contains(&self, tuple: &[StateId]) -> bool {
        self.tuples.contains(tuple)
    }

    /// A pair spec as 2-tuples, both orientations.
    pub fn from_pairs(pairs: &PairSet) -> Self {
        let mut spec = JointSpec::new(2);
        for (a, b) in pairs.iter() {
            spec.insert(vec![a, b]);
            spec.insert(vec![b, a]);
        }
        spec
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointEngine {
    /// Exact; explores a finite synchronized product.
    Product,
    /// Enumerates words up to the horizon. Reference semantics for tests.
    BruteForce { horizon: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointCheck {
    /// Spec tuples found confusable.
    pub witnesses: Vec<Vec<StateId>>,
    /// Brute force only: some word at the horizon could still be extended,
    /// so tuples beyond the horizon were not examined.
    pub truncated: bool,
}

impl JointCheck {
    pub fn satisfied(&self) -> bool {
        self.witnesses.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Shadow {
    /// Following a word with the same observation as the true word so far.
    Track(StateId),
    /// Stopped following; the true word has since made this many moves.
    Frozen(StateId, u32),
}

impl Shadow {
    fn state(self) -> StateId {
        match self {
            Shadow::Track(v) | Shadow::Frozen(v, _) => v,
        }
    }

    fn with_state(self, v: StateId) -> Shadow {
        match self {
            Shadow::Track(_) => Shadow::Track(v),
            Shadow::Frozen(_, c) => Shadow::Frozen(v, c),
        }
    }
}

type ProductState = (StateId, Vec<Shadow>);

/// Reachable states of the product of the true word with one shadow per
/// agent. A shadow ends at `v`; the agent's candidate states are then
/// `R^{No_i}(v)`, covering the trailing events of its own word.
fn product_states(
    plant: &Plant,
    agents: &[AgentProfile],
    policies: &[SensorPolicy],
) -> HashSet<ProductState> {
    let init: ProductState = (
        plant.initial(),
        vec![Shadow::Track(plant.initial()); agents.len()],
    );
    let mut seen = HashSet::from([init.clone()]);
    let mut queue = VecDeque::from([init]);
    while let Some((p, shadows)) = queue.pop_front() {
        let mut next = Vec::new();
        'moves: for (e, edge) in plant.out(p) {
            let mut moved = Vec::with_capacity(shadows.len());
            for (i, &sh) in shadows.iter().enumerate() {
                let sh2 = match sh {
                    Shadow::Track(v) if policies[i].contains(p, e) => match plant.next(v, e) {
                        Some(v2) if policies[i].contains(v, e) => Shadow::Track(v2),
                        _ => continue 'moves,
                    },
                    Shadow::Track(_) => sh,
                    Shadow::Frozen(v, c) if c < agents[i].bounds.no => Shadow::Frozen(v, c + 1),
                    Shadow::Frozen(..) => continue 'moves,
                };
                moved.push(sh2);
            }
            next.push((edge.target, moved));
        }
        for (i, &sh) in shadows.iter().enumerate() {
            let v = sh.state();
            for (e, edge) in plant.out(v) {
                if !policies[i].contains(v, e) {
                    let mut s2 = shadows.clone();
                    s2[i] = sh.with_state(edge.target);
                    next.push((p, s2));
                }
            }
            if let Shadow::Track(v) = sh {
                let mut s2 = shadows.clone();
                s2[i] = Shadow::Frozen(v, 0);
                next.push((p, s2));
            }
        }
        for s in next {
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    seen
}

fn reach_tables(plant: &Plant, agents: &[AgentProfile]) -> Vec<Vec<BTreeSet<StateId>>> {
    agents
        .iter()
        .map(|a| {
            plant
                .states()
                .map(|q| reach_within(plant, q, a.bounds.no))
                .collect()
        })
        .collect()
}

fn cartesian(head: StateId, sets: &[&BTreeSet<StateId>], out: &mut BTreeSet<Vec<StateId>>) {
    let mut acc = vec![vec![head]];
    for set in sets {
        acc = acc
            .into_iter()
            .flat_map(|t| {
                set.iter().map(move |&q| {
                    let mut t = t.clone();
                    t.push(q);
                    t
                })
            })
            .collect();
    }
    out.extend(acc);
}

/// All confusable tuples, for small instances and tests.
pub fn conf_tuples(
    plant: &Plant,
    agents: &[AgentProfile],
    policies: &[SensorPolicy],
    engine: JointEngine,
) -> (BTreeSet<Vec<StateId>>, bool) {
    let mut out = BTreeSet::new();
    match engine {
        JointEngine::Product => {
            let reach = reach_tables(plant, agents);
            for (p, shadows) in product_states(plant, agents, policies) {
                let sets: Vec<&BTreeSet<StateId>> = shadows
                    .iter()
                    .enumerate()
                    .map(|(i, sh)| &reach[i][sh.state().index()])
                    .collect();
                cartesian(p, &sets, &mut out);
            }
            (out, false)
        }
        JointEngine::BruteForce { horizon } => {
            let bf = BruteForce::new(plant, agents, policies, horizon);
            for (s, q) in &bf.words {
                let sets = bf.candidates(s);
                let refs: Vec<&BTreeSet<StateId>> = sets.iter().collect();
                cartesian(*q, &refs, &mut out);
            }
            (out, bf.truncated)
        }
    }
}

struct BruteForce<'a> {
    plant: &'a Plant,
    agents: &'a [AgentProfile],
    policies: &'a [SensorPolicy],
    words: Vec<(Vec<EventId>, StateId)>,
    /// Per agent: delayed observation → end states of words producing it.
    index: Vec<HashMap<Vec<EventId>, BTreeSet<StateId>>>,
    truncated: bool,
}

impl<'a> BruteForce<'a> {
    fn new(
        plant: &'a Plant,
        agents: &'a [AgentProfile],
        policies: &'a [SensorPolicy],
        horizon: usize,
    ) -> Self {
        let words: Vec<(Vec<EventId>, StateId)> = plant
            .bounded_language(horizon)
            .into_iter()
            .map(|w| {
                let q = plant
                    .step(plant.initial(), &w)
                    .expect("word of the language");
                (w, q)
            })
            .collect();
        let truncated = words
            .iter()
            .any(|(w, q)| w.len() == horizon && plant.out(*q).next().is_some());
        let mut bf = BruteForce {
            plant,
            agents,
            policies,
            words: Vec::new(),
            index: vec![HashMap::new(); agents.len()],
            truncated,
        };
        for (w, q) in &words {
            for i in 0..agents.len() {
                for o in bf.delayed(i, w) {
                    bf.index[i].entry(o).or_default().insert(*q);
                }
            }
        }
        bf.words = words;
        bf
    }

    fn delayed(&self, i: usize, w: &[EventId]) -> BTreeSet<Vec<EventId>> {
        (0..=self.agents[i].bounds.no as usize)
            .map(|j| {
                info_map(self.plant, &self.policies[i], suffix_truncate(w, j))
                    .expect("prefix of a word of the language")
            })
            .collect()
    }

    fn candidates(&self, s: &[EventId]) -> Vec<BTreeSet<StateId>> {
        (0..self.agents.len())
            .map(|i| {
                self.delayed(i, s)
                    .iter()
                    .filter_map(|o| self.index[i].get(o))
                    .flatten()
                    .copied()
                    .collect()
            })
            .collect()
    }
}

/// Decides whether the confusable tuples avoid `spec`.
pub fn joint_conf_check(
    plant: &Plant,
    agents: &[AgentProfile],
    policies: &[SensorPolicy],
    spec: &JointSpec,
    engine: JointEngine,
) -> JointCheck {
    assert_eq!(
        spec.arity(),
        agents.len() + 1,
        "spec arity must be agents + 1"
    );
    let mut witnesses = BTreeSet::new();
    if spec.is_empty() {
        return JointCheck {
            witnesses: Vec::new(),
            truncated: false,
        };
    }
    let mut by_head: HashMap<StateId, Vec<&Vec<StateId>>> = HashMap::new();
    for t in spec.iter() {
        by_head.entry(t[0]).or_default().push(t);
    }
    let truncated = match engine {
        JointEngine::Product => {
            let reach = reach_tables(plant, agents);
            for (p, shadows) in product_states(plant, agents, policies) {
                for t in by_head.get(&p).into_iter().flatten() {
                    let hit = shadows
                        .iter()
                        .enumerate()
                        .all(|(i, sh)| reach[i][sh.state().index()].contains(&t[i + 1]));
                    if hit {
                        witnesses.insert((*t).clone());
                    }
                }
            }
            false
        }
        JointEngine::BruteForce { horizon } => {
            let bf = BruteForce::new(plant, agents, policies, horizon);
            for (s, q) in &bf.words {
                let Some(tuples) = by_head.get(q) else {
                    continue;
                };
                let sets = bf.candidates(s);
                for t in tuples {
                    if sets
                        .iter()
                        .enumerate()
                        .all(|(i, set)| set.contains(&t[i + 1]))
                    {
                        witnesses.insert((*t).clone());
                    }
                }
            }
            bf.truncated
        }
    };
    JointCheck {
        witnesses: witnesses.into_iter().collect(),
        truncated,
    }
}

/// Order in which agents are minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AgentOrder {
    /// As listed.
    #[default]
    Listed,
    /// Shuffled by a seeded generator.
    Seeded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgentTrace {
    pub agent: usize,
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecError {
    #[error("joint specification violated even with every sensor always on ({} tuples)", .0.len())]
    SpecUnsatisfiableEvenFullyActivated(Vec<Vec<StateId>>),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Greedy minimization agent by agent, starting from all sensors on.
/// Candidate deletions for one agent keep the other agents' current
/// policies and are accepted iff the joint check still passes.
pub fn minimize_decentralized(
    plant: &Plant,
    agents: &[AgentProfile],
    spec: &JointSpec,
    agent_order: AgentOrder,
    pick: &PickOrder,
    engine: JointEngine,
) -> Result<(PolicyVector, Vec<AgentTrace>), DecError> {
    let ws: Vec<WAutomaton> = agents
        .iter()
        .map(|a| build_w(plant, a.bounds))
        .collect::<Result<_, _>>()?;
    let mut policies: PolicyVector = agents.iter().map(|a| a.full_policy(plant)).collect();
    let initial = joint_conf_check(plant, agents, &policies, spec, engine);
    if !initial.satisfied() {
        return Err(DecError::SpecUnsatisfiableEvenFullyActivated(
            initial.witnesses,
        ));
    }

    let mut order: Vec<usize> = (0..agents.len()).collect();
    if let AgentOrder::Seeded(seed) = agent_order {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let mut traces = Vec::new();
    for i in order {
        let start = policies[i].clone();
        let (result, steps) = minimize_from(plant, &ws[i], start, pick, |candidate, _| {
            let mut trial = policies.clone();
            trial[i] = candidate.clone();
            joint_conf_check(plant, agents, &trial, spec, engine).satisfied()
        })
        .expect("current vector satisfies the joint spec");
        policies[i] = result;
        traces.push(AgentTrace {
            agent: agents[i].id,
            steps,
        });
    }
    Ok((policies, traces))
}
