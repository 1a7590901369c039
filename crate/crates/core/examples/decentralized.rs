//! Two agents watching the toy model, one seeing only a, the other only b
//! without observation delay. Their policies are minimized in turn against
//! a joint specification, then checked with both engines.

use netsap::comm::build_w;
use netsap::decentral::{joint_conf_check, minimize_decentralized, AgentOrder, JointEngine};
use netsap::fixtures;
use netsap::synthesis::{check_delay_feasible, PickOrder};

fn main() {
    let toy = fixtures::toy();
    let agents = fixtures::toy_agents();
    let spec = fixtures::toy_joint_spec();
    println!("{} joint tuples to avoid", spec.len());

    for order in [AgentOrder::Listed, AgentOrder::Seeded(7)] {
        let (policies, traces) = minimize_decentralized(
            &toy,
            &agents,
            &spec,
            order,
            &PickOrder::Descending,
            JointEngine::Product,
        )
        .unwrap();
        println!("{order:?}:");
        for (t, (a, p)) in traces.iter().zip(agents.iter().zip(&policies)) {
            let w = build_w(&toy, a.bounds).unwrap();
            println!(
                "  agent {} ({} steps, feasible={}): {}",
                a.id,
                t.steps.len(),
                check_delay_feasible(&toy, &w, p).feasible(),
                p.render(&toy)
            );
        }
        for engine in [JointEngine::Product, JointEngine::BruteForce { horizon: 8 }] {
            let check = joint_conf_check(&toy, &agents, &policies, &spec, engine);
            println!(
                "  {engine:?}: satisfied={} truncated={}",
                check.satisfied(),
                check.truncated
            );
        }
    }
}
