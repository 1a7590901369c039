//! Minimal policy for the toy model: strings with f must be told apart from
//! strings without it. Runs the greedy loop with the default order and with
//! (4,b), (0,b) forced first, printing every iteration.

use netsap::channel::DelayBounds;
use netsap::comm::build_w;
use netsap::fixtures;
use netsap::synthesis::{minimize_sap, PickOrder, SynthesisTrace};

fn show(trace: &SynthesisTrace) {
    for (i, s) in trace.iter().enumerate() {
        println!(
            "  {:>2}. drop ({},{}) -> repaired size {:>2}, {}, policy size {}",
            i + 1,
            s.state,
            s.event,
            s.subpolicy_size,
            if s.accepted { "kept" } else { "rejected" },
            s.policy_size
        );
    }
}

fn main() {
    let toy = fixtures::toy();
    let w = build_w(&toy, DelayBounds::new(1, 2)).unwrap();
    let spec = fixtures::toy_spec();
    println!("must distinguish {:?}", toy.render_pairs(&spec));

    let (policy, trace) = minimize_sap(&toy, &w, &spec, &PickOrder::Descending).unwrap();
    println!("descending order: {}", policy.render(&toy));
    show(&trace);

    let at = |q: &str, e: &str| (toy.state_by_name(q).unwrap(), toy.event_by_name(e).unwrap());
    let order = PickOrder::Explicit(vec![at("4", "b"), at("0", "b")]);
    let (policy, trace) = minimize_sap(&toy, &w, &spec, &order).unwrap();
    println!("(4,b) then (0,b) first: {}", policy.render(&toy));
    show(&trace);
}
