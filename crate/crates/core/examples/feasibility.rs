//! Delay feasibility on the toy model: the naive policy fails because the
//! command that turns the a-sensor on arrives too late; the largest
//! feasible part of a policy is repaired by deleting violators.

use netsap::channel::DelayBounds;
use netsap::comm::build_w;
use netsap::fixtures;
use netsap::observe::{delayed_conf_pairs, SensorPolicy};
use netsap::synthesis::{check_delay_feasible, max_feasible_subpolicy, relevant_decisions};

fn main() {
    let toy = fixtures::toy();
    let w = build_w(&toy, DelayBounds::new(1, 2)).unwrap();

    for (name, policy) in [
        ("naive", fixtures::toy_naive_policy()),
        ("synthesized", fixtures::toy_dstar()),
        ("all on", SensorPolicy::full(&toy)),
    ] {
        let report = check_delay_feasible(&toy, &w, &policy);
        println!(
            "{name} {}: feasible = {}",
            policy.render(&toy),
            report.feasible()
        );
        for line in report.render(&toy, &w).iter().take(3) {
            println!("    {line}");
        }
    }

    println!(
        "decisions that can matter: {}",
        relevant_decisions(&toy, &w).render(&toy)
    );

    let q4 = toy.state_by_name("4").unwrap();
    let b = toy.event_by_name("b").unwrap();
    let input = SensorPolicy::full(&toy).without(q4, b);
    let (up, tconf) = max_feasible_subpolicy(&toy, &w, &input);
    println!("largest feasible part of {}:", input.render(&toy));
    println!("    {}", up.render(&toy));
    println!("    confusable: {:?}", toy.render_pairs(&tconf));
    println!(
        "    with one pending event: {:?}",
        toy.render_pairs(&delayed_conf_pairs(&toy, &tconf, 1))
    );
}
