//! The communication automaton and its refinement with the command tracker.
//!
//! A communication state is `(q, θo, θc)`: the plant state and both channel
//! queues. Three kinds of moves exist:
//!
//! * `Plant(σ)` fires σ in the plant, provided both queues can age by
//!   `t_min(q,σ)` without breaching their bounds;
//! * `Comm(σ)` delivers the front observation σ and enqueues the command
//!   issued in response;
//! * `Exec(σ)` executes the front command.
//!
//! The refined automaton adds `x`, the plant state reached by the commands
//! executed so far. The agent's activation decision in force is the one it
//! made at `x`.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::channel::{self, Channel, DelayBounds};
use crate::fsa::{
    parallel_compose, relabel_exec, Automaton, EventId, ExtendedEvent, Plant, StateId,
};

/// Default upper limit on constructed states.
pub const DEFAULT_STATE_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("state space exceeds the cap of {0} states")]
    StateExplosion(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommState {
    pub plant: StateId,
    pub obs: Channel,
    pub ctrl: Channel,
}

impl CommState {
    pub fn render(&self, plant: &Plant) -> String {
        format!(
            "({} | {} | {})",
            plant.state_name(self.plant),
            self.obs.render(plant),
            self.ctrl.render(plant)
        )
    }
}

#[derive(Debug, Clone)]
pub struct CommAutomaton {
    automaton: Automaton<ExtendedEvent>,
    states: Vec<CommState>,
    bounds: DelayBounds,
}

fn full_alphabet(plant: &Plant) -> impl Iterator<Item = ExtendedEvent> + '_ {
    plant.events().flat_map(|e| {
        [
            ExtendedEvent::Plant(e),
            ExtendedEvent::Comm(e),
            ExtendedEvent::Exec(e),
        ]
    })
}

pub fn build_comm(plant: &Plant, bounds: DelayBounds) -> Result<CommAutomaton, BuildError> {
    build_comm_capped(plant, bounds, DEFAULT_STATE_CAP)
}

/// Breadth-first construction from `(q0, ε, ε)`; state numbering follows
/// discovery order, so it is deterministic.
pub fn build_comm_capped(
    plant: &Plant,
    bounds: DelayBounds,
    cap: usize,
) -> Result<CommAutomaton, BuildError> {
    let init = CommState {
        plant: plant.initial(),
        obs: Channel::empty(),
        ctrl: Channel::empty(),
    };
    let mut index = HashMap::from([(init.clone(), StateId(0))]);
    let mut states = vec![init];
    let mut edges: Vec<Vec<(ExtendedEvent, StateId)>> = vec![Vec::new()];
    let mut queue = VecDeque::from([StateId(0)]);

    while let Some(id) = queue.pop_front() {
        let s = states[id.index()].clone();
        let mut moves = Vec::new();
        for (sigma, edge) in plant.out(s.plant) {
            let obs = channel::in_obs(&s.obs, plant, s.plant, sigma, bounds.no);
            let ctrl = channel::plus(&s.ctrl, plant, s.plant, sigma, bounds.nc);
            if let (Some(obs), Some(ctrl)) = (obs, ctrl) {
                let t = CommState {
                    plant: edge.target,
                    obs,
                    ctrl,
                };
                moves.push((ExtendedEvent::Plant(sigma), t));
            }
        }
        if let Some((sigma, _)) = s.obs.front() {
            let obs = channel::out_obs(&s.obs, sigma).expect("front matches");
            let ctrl = channel::in_ctr(&s.ctrl, sigma);
            moves.push((
                ExtendedEvent::Comm(sigma),
                CommState {
                    plant: s.plant,
                    obs,
                    ctrl,
                },
            ));
        }
        if let Some((sigma, _)) = s.ctrl.front() {
            let ctrl = channel::out_ctr(&s.ctrl, sigma).expect("front matches");
            moves.push((
                ExtendedEvent::Exec(sigma),
                CommState {
                    plant: s.plant,
                    obs: s.obs.clone(),
                    ctrl,
                },
            ));
        }
        moves.sort_by_key(|m| m.0);
        for (label, target) in moves {
            let tid = match index.get(&target) {
                Some(&t) => t,
                None => {
                    if states.len() >= cap {
                        return Err(BuildError::StateExplosion(cap));
                    }
                    let t = StateId::from(states.len());
                    index.insert(target.clone(), t);
                    states.push(target);
                    edges.push(Vec::new());
                    queue.push_back(t);
                    t
                }
            };
            edges[id.index()].push((label, tid));
        }
    }

    let mut automaton =
        Automaton::new(states.len(), StateId(0)).with_alphabet(full_alphabet(plant));
    for (from, out) in edges.into_iter().enumerate() {
        for (label, to) in out {
            automaton
                .add_edge(StateId::from(from), label, to)
                .expect("one move per label");
        }
    }
    Ok(CommAutomaton {
        automaton,
        states,
        bounds,
    })
}

impl CommAutomaton {
    pub fn automaton(&self) -> &Automaton<ExtendedEvent> {
        &self.automaton
    }

    pub fn bounds(&self) -> DelayBounds {
        self.bounds
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, id: StateId) -> &CommState {
        &self.states[id.index()]
    }

    pub fn states(&self) -> impl Iterator<Item = (StateId, &CommState)> {
        self.states
            .iter()
            .enumerate()
            .map(|(i, s)| (StateId::from(i), s))
    }

    pub fn find(&self, s: &CommState) -> Option<StateId> {
        self.states.iter().position(|t| t == s).map(StateId::from)
    }

    pub fn step(&self, word: &[ExtendedEvent]) -> Option<StateId> {
        self.automaton.step(self.automaton.initial(), word)
    }
}

/// `ψ`: the plant events of μ, in order.
pub fn psi(mu: &[ExtendedEvent]) -> Vec<EventId> {
    mu.iter()
        .filter_map(|l| match l {
            ExtendedEvent::Plant(e) => Some(*e),
            _ => None,
        })
        .collect()
}

/// The executed commands of μ, unwrapped: the string whose end state
/// determines the activation decision currently in force.
pub fn effective_command_string(mu: &[ExtendedEvent]) -> Vec<EventId> {
    mu.iter()
        .filter_map(|l| match l {
            ExtendedEvent::Exec(e) => Some(*e),
            _ => None,
        })
        .collect()
}

/// `G̃ ‖ Gᵍ`. Exec events synchronize; plant and delivery events belong to
/// the communication automaton only.
#[derive(Debug, Clone)]
pub struct WAutomaton {
    comm: CommAutomaton,
    automaton: Automaton<ExtendedEvent>,
    components: Vec<(StateId, StateId)>,
}

pub fn build_w(plant: &Plant, bounds: DelayBounds) -> Result<WAutomaton, BuildError> {
    build_w_capped(plant, bounds, DEFAULT_STATE_CAP)
}

pub fn build_w_capped(
    plant: &Plant,
    bounds: DelayBounds,
    cap: usize,
) -> Result<WAutomaton, BuildError> {
    let comm = build_comm_capped(plant, bounds, cap)?;
    WAutomaton::from_comm(plant, comm, cap)
}

impl WAutomaton {
    pub fn from_comm(plant: &Plant, comm: CommAutomaton, cap: usize) -> Result<Self, BuildError> {
        let exec = relabel_exec(plant);
        let product = parallel_compose(&comm.automaton, &exec);
        if product.automaton.num_states() > cap {
            return Err(BuildError::StateExplosion(cap));
        }
        Ok(WAutomaton {
            comm,
            automaton: product.automaton,
            components: product.components,
        })
    }

    pub fn comm(&self) -> &CommAutomaton {
        &self.comm
    }

    pub fn automaton(&self) -> &Automaton<ExtendedEvent> {
        &self.automaton
    }

    pub fn num_states(&self) -> usize {
        self.automaton.num_states()
    }

    pub fn comm_state(&self, w: StateId) -> &CommState {
        self.comm.state(self.components[w.index()].0)
    }

    pub fn plant_state(&self, w: StateId) -> StateId {
        self.comm_state(w).plant
    }

    /// `x`: end state of the executed command string.
    pub fn tracker(&self, w: StateId) -> StateId {
        self.components[w.index()].1
    }

    pub fn step(&self, word: &[ExtendedEvent]) -> Option<StateId> {
        self.automaton.step(self.automaton.initial(), word)
    }

    /// Every plant move `(w, σ, w')` of the refined automaton.
    pub fn plant_moves(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.automaton.states().flat_map(move |w| {
            self.automaton
                .edges(w)
                .iter()
                .filter_map(move |&(l, t)| match l {
                    ExtendedEvent::Plant(e) => Some((w, e, t)),
                    _ => None,
                })
        })
    }

    pub fn render_state(&self, plant: &Plant, w: StateId) -> String {
        let s = self.comm_state(w);
        format!(
            "({} | {} | {} | {})",
            plant.state_name(s.plant),
            s.obs.render(plant),
            s.ctrl.render(plant),
            plant.state_name(self.tracker(w))
        )
    }
}
