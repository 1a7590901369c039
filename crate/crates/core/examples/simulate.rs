//! Random runs over the communication automaton. Under a feasible policy
//! what the agent sees always equals what it would see without delays;
//! under the naive policy some runs lose the a after bf.

use netsap::channel::DelayBounds;
use netsap::comm::{build_comm, psi};
use netsap::fixtures;
use netsap::observe::info_map;
use netsap::validation::simulate_run;

fn main() {
    let toy = fixtures::toy();
    let comm = build_comm(&toy, DelayBounds::new(1, 2)).unwrap();
    for (name, policy) in [
        ("synthesized", fixtures::toy_dstar()),
        ("naive", fixtures::toy_naive_policy()),
    ] {
        let mut differ = None;
        let mut count = 0;
        for seed in 0..500 {
            let t = simulate_run(&comm, &toy, &policy, seed, 30, &[]);
            if info_map(&toy, &policy, &psi(&t.mu)).unwrap() != t.observation {
                count += 1;
                differ.get_or_insert(t);
            }
        }
        println!("{name}: {count} of 500 runs see something other than the undelayed observation");
        if let Some(t) = differ {
            for line in t.log_lines(&toy, &comm) {
                println!("    {line}");
            }
        }
    }
}
