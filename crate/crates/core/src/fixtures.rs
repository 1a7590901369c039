//! The models and policies shipped in `fixtures/`, parsed.
//!
//! `toy` has states 0..5 and the single unobservable event `f`;
//! `prodline` is the six-state production line with fault `f`.

use crate::decentral::{AgentProfile, JointSpec};
use crate::fsa::{PairSet, Plant};
use crate::io;
use crate::observe::SensorPolicy;

pub const TOY: &str = include_str!("../fixtures/toy.json");
pub const TOY_SPEC: &str = include_str!("../fixtures/toy_spec.json");
pub const TOY_NAIVE_POLICY: &str = include_str!("../fixtures/toy_naive_policy.json");
pub const TOY_DSTAR: &str = include_str!("../fixtures/toy_dstar.json");
pub const TOY_AGENTS: &str = include_str!("../fixtures/toy_agents.json");
pub const TOY_JOINT_SPEC: &str = include_str!("../fixtures/toy_joint_spec.json");
pub const PRODLINE: &str = include_str!("../fixtures/prodline.json");
pub const PRODLINE_DSTAR: &str = include_str!("../fixtures/prodline_dstar.json");
pub const PRODLINE_STATIC_AC: &str = include_str!("../fixtures/prodline_static_ac.json");

pub fn toy() -> Plant {
    io::parse_model(TOY).expect("toy fixture")
}

pub fn prodline() -> Plant {
    io::parse_model(PRODLINE).expect("prodline fixture")
}

/// `{(0,5), (1,5), (2,5)}`.
pub fn toy_spec() -> PairSet {
    io::parse_pairs(&toy(), TOY_SPEC).expect("toy spec fixture")
}

/// `{(0,b), (2,a), (3,a)}`: misses `a` after `bf` when the command for `b`
/// is still in transit.
pub fn toy_naive_policy() -> SensorPolicy {
    io::parse_policy(&toy(), TOY_NAIVE_POLICY).expect("naive policy fixture")
}

/// `{(0,a), (0,b), (2,a), (3,a)}`.
pub fn toy_dstar() -> SensorPolicy {
    io::parse_policy(&toy(), TOY_DSTAR).expect("toy policy fixture")
}

/// Agent 1 sees `a` with delays (1,2); agent 2 sees `b` with delays (0,2).
pub fn toy_agents() -> Vec<AgentProfile> {
    io::parse_agents(&toy(), TOY_AGENTS).expect("agents fixture")
}

/// Every tuple `(5, q1, q2)` with `q1, q2 ∈ {0,1,2}`.
pub fn toy_joint_spec() -> JointSpec {
    io::parse_joint_spec(&toy(), 3, TOY_JOINT_SPEC).expect("joint spec fixture")
}

/// Sensor `a` at every state and `b` everywhere except `x3`, stated over the
/// unrefined states.
pub fn prodline_dstar() -> SensorPolicy {
    io::parse_policy(&prodline(), PRODLINE_DSTAR).expect("prodline policy fixture")
}

/// Sensors `a` and `c` always on.
pub fn prodline_static_ac() -> SensorPolicy {
    io::parse_policy(&prodline(), PRODLINE_STATIC_AC).expect("static policy fixture")
}
