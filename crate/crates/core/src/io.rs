//! JSON file formats and Graphviz export. Schemas are described in
//! `docs/formats.md`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comm::{CommAutomaton, WAutomaton};
use crate::decentral::{AgentProfile, JointSpec};
use crate::fsa::{EventId, ExtendedEvent, ModelError, PairSet, Plant, StateId};
use crate::observe::{ObsError, SensorPolicy};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Policy(#[from] ObsError),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventsFile {
    pub observable: Vec<String>,
    #[serde(default)]
    pub unobservable: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionFile {
    pub from: String,
    pub event: String,
    pub to: String,
    pub t_min: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub states: Vec<String>,
    pub initial: String,
    pub events: EventsFile,
    pub transitions: Vec<TransitionFile>,
}

impl ModelFile {
    pub fn into_plant(self) -> Result<Plant, ModelError> {
        let mut b = Plant::builder().states(self.states).initial(self.initial);
        for e in self.events.observable {
            b = b.event(e, true);
        }
        for e in self.events.unobservable {
            b = b.event(e, false);
        }
        for t in self.transitions {
            b = b.transition(t.from, t.event, t.to, t.t_min);
        }
        b.build()
    }

    pub fn from_plant(plant: &Plant) -> Self {
        let names = |obs: bool| {
            plant
                .events()
                .filter(|&e| plant.is_observable(e) == obs)
                .map(|e| plant.event_name(e).to_string())
                .collect()
        };
        ModelFile {
            states: plant
                .states()
                .map(|q| plant.state_name(q).to_string())
                .collect(),
            initial: plant.state_name(plant.initial()).to_string(),
            events: EventsFile {
                observable: names(true),
                unobservable: names(false),
            },
            transitions: plant
                .transitions()
                .map(|(q, e, edge)| TransitionFile {
                    from: plant.state_name(q).to_string(),
                    event: plant.event_name(e).to_string(),
                    to: plant.state_name(edge.target).to_string(),
                    t_min: edge.t_min,
                })
                .collect(),
        }
    }
}

pub fn parse_model(text: &str) -> Result<Plant, IoError> {
    let file: ModelFile = serde_json::from_str(text)?;
    Ok(file.into_plant()?)
}

pub fn model_to_json(plant: &Plant) -> String {
    to_pretty(&ModelFile::from_plant(plant))
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn state(plant: &Plant, name: &str) -> Result<StateId, IoError> {
    plant
        .state_by_name(name)
        .ok_or_else(|| IoError::UnknownState(name.to_string()))
}

fn event(plant: &Plant, name: &str) -> Result<EventId, IoError> {
    plant
        .event_by_name(name)
        .ok_or_else(|| IoError::UnknownEvent(name.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Activation {
    pub state: String,
    pub event: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyFile {
    pub activate: Vec<Activation>,
}

pub fn parse_policy(plant: &Plant, text: &str) -> Result<SensorPolicy, IoError> {
    let file: PolicyFile = serde_json::from_str(text)?;
    policy_from_file(plant, &file)
}

pub fn policy_from_file(plant: &Plant, file: &PolicyFile) -> Result<SensorPolicy, IoError> {
    let policy = file
        .activate
        .iter()
        .map(|a| Ok((state(plant, &a.state)?, event(plant, &a.event)?)))
        .collect::<Result<SensorPolicy, IoError>>()?;
    policy.validate(plant)?;
    Ok(policy)
}

pub fn policy_file(plant: &Plant, policy: &SensorPolicy) -> PolicyFile {
    PolicyFile {
        activate: policy
            .iter()
            .map(|(q, e)| Activation {
                state: plant.state_name(q).to_string(),
                event: plant.event_name(e).to_string(),
            })
            .collect(),
    }
}

pub fn policy_to_json(plant: &Plant, policy: &SensorPolicy) -> String {
    to_pretty(&policy_file(plant, policy))
}

/// A list of `["q", "q'"]` name pairs.
pub fn parse_pairs(plant: &Plant, text: &str) -> Result<PairSet, IoError> {
    let raw: Vec<[String; 2]> = serde_json::from_str(text)?;
    raw.iter()
        .map(|[a, b]| Ok((state(plant, a)?, state(plant, b)?)))
        .collect()
}

/// Sorted pairs, diagonal included when present.
pub fn pairs_to_json(plant: &Plant, pairs: &PairSet) -> String {
    let raw: Vec<[&str; 2]> = pairs
        .iter()
        .map(|(a, b)| [plant.state_name(a), plant.state_name(b)])
        .collect();
    to_pretty(&raw)
}

/// Report form: diagonal elided.
pub fn pairs_report(plant: &Plant, pairs: &PairSet) -> Vec<[String; 2]> {
    plant.render_pairs(pairs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentFile {
    pub id: usize,
    pub observable: Vec<String>,
    pub no: u32,
    pub nc: u32,
}

pub fn parse_agents(plant: &Plant, text: &str) -> Result<Vec<AgentProfile>, IoError> {
    let raw: Vec<AgentFile> = serde_json::from_str(text)?;
    raw.into_iter()
        .map(|a| {
            let observable = a
                .observable
                .iter()
                .map(|n| {
                    let e = event(plant, n)?;
                    if !plant.is_observable(e) {
                        return Err(IoError::Invalid(format!(
                            "agent {} lists unobservable event `{n}`",
                            a.id
                        )));
                    }
                    Ok(e)
                })
                .collect::<Result<_, IoError>>()?;
            Ok(AgentProfile::new(a.id, observable, a.no, a.nc))
        })
        .collect()
}

pub fn agents_to_json(plant: &Plant, agents: &[AgentProfile]) -> String {
    let raw: Vec<AgentFile> = agents
        .iter()
        .map(|a| AgentFile {
            id: a.id,
            observable: a
                .observable
                .iter()
                .map(|&e| plant.event_name(e).to_string())
                .collect(),
            no: a.bounds.no,
            nc: a.bounds.nc,
        })
        .collect();
    to_pretty(&raw)
}

/// A list of `[q, q1, …, qn]` name tuples.
pub fn parse_joint_spec(plant: &Plant, arity: usize, text: &str) -> Result<JointSpec, IoError> {
    let raw: Vec<Vec<String>> = serde_json::from_str(text)?;
    let mut spec = JointSpec::new(arity);
    for tuple in raw {
        if tuple.len() != arity {
            return Err(IoError::Invalid(format!(
                "joint spec tuple has {} entries, expected {arity}",
                tuple.len()
            )));
        }
        let ids = tuple
            .iter()
            .map(|n| state(plant, n))
            .collect::<Result<Vec<_>, _>>()?;
        spec.insert(ids);
    }
    Ok(spec)
}

pub fn joint_spec_to_json(plant: &Plant, spec: &JointSpec) -> String {
    let raw: Vec<Vec<&str>> = spec
        .iter()
        .map(|t| t.iter().map(|&q| plant.state_name(q)).collect())
        .collect();
    to_pretty(&raw)
}

/// One policy file per agent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyVectorFile {
    pub agents: Vec<AgentPolicyFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentPolicyFile {
    pub id: usize,
    pub activate: Vec<Activation>,
}

#[derive(Debug, Clone, Serialize)]
struct CommEventFile {
    name: String,
    kind: &'static str,
    base: String,
    observable: bool,
}

#[derive(Debug, Clone, Serialize)]
struct CommTransitionFile {
    from: String,
    event: String,
    to: String,
}

#[derive(Debug, Clone, Serialize)]
struct CommFile {
    states: Vec<String>,
    initial: String,
    events: Vec<CommEventFile>,
    transitions: Vec<CommTransitionFile>,
}

/// The communication automaton in the model layout, each event tagged with
/// its kind. States are named by their rendering.
pub fn comm_to_json(plant: &Plant, comm: &CommAutomaton) -> String {
    let a = comm.automaton();
    let name = |q: StateId| comm.state(q).render(plant);
    let file = CommFile {
        states: a.states().map(name).collect(),
        initial: name(a.initial()),
        events: a
            .alphabet()
            .iter()
            .map(|&l| CommEventFile {
                name: l.render(plant),
                kind: l.kind(),
                base: plant.event_name(l.base()).to_string(),
                observable: plant.is_observable(l.base()),
            })
            .collect(),
        transitions: a
            .states()
            .flat_map(|q| {
                a.edges(q).iter().map(move |&(l, t)| CommTransitionFile {
                    from: name(q),
                    event: l.render(plant),
                    to: name(t),
                })
            })
            .collect(),
    };
    to_pretty(&file)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dot<F, G>(name: &str, n: usize, initial: StateId, label: F, edges: G) -> String
where
    F: Fn(StateId) -> String,
    G: Fn(StateId) -> Vec<(String, StateId)>,
{
    let mut s = format!(
        "digraph \"{}\" {{\n  rankdir=LR;\n  node [shape=box];\n",
        dot_escape(name)
    );
    let _ = writeln!(s, "  init [shape=point];\n  init -> s{};", initial.0);
    for i in 0..n {
        let q = StateId::from(i);
        let _ = writeln!(s, "  s{} [label=\"{}\"];", i, dot_escape(&label(q)));
    }
    for i in 0..n {
        let q = StateId::from(i);
        for (l, t) in edges(q) {
            let _ = writeln!(s, "  s{} -> s{} [label=\"{}\"];", i, t.0, dot_escape(&l));
        }
    }
    s.push_str("}\n");
    s
}

fn labelled_edges(
    a: &crate::fsa::Automaton<ExtendedEvent>,
    plant: &Plant,
    q: StateId,
) -> Vec<(String, StateId)> {
    a.edges(q)
        .iter()
        .map(|&(l, t)| (l.render(plant), t))
        .collect()
}

pub fn plant_to_dot(plant: &Plant) -> String {
    dot(
        "plant",
        plant.num_states(),
        plant.initial(),
        |q| plant.state_name(q).to_string(),
        |q| {
            plant
                .out(q)
                .map(|(e, edge)| {
                    (
                        format!("{} [{}]", plant.event_name(e), edge.t_min),
                        edge.target,
                    )
                })
                .collect()
        },
    )
}

/// States labelled `(q | θo | θc)`.
pub fn comm_to_dot(plant: &Plant, comm: &CommAutomaton) -> String {
    let a = comm.automaton();
    dot(
        "comm",
        a.num_states(),
        a.initial(),
        |q| comm.state(q).render(plant),
        |q| labelled_edges(a, plant, q),
    )
}

/// States labelled `(q | θo | θc | x)`.
pub fn w_to_dot(plant: &Plant, w: &WAutomaton) -> String {
    let a = w.automaton();
    dot(
        "w",
        a.num_states(),
        a.initial(),
        |q| w.render_state(plant, q),
        |q| labelled_edges(a, plant, q),
    )
}
