//! Fault diagnosis on the production line under two-unit delays. With two
//! steps after the fault no policy suffices, and the word oracle shows why;
//! with three steps a minimal policy is synthesized over the refined states.

use netsap::channel::DelayBounds;
use netsap::comm::build_w;
use netsap::diagnosis::{check_delay_k_diag, diag_spec, refine_k_diag, FaultSpec};
use netsap::fixtures;
use netsap::observe::SensorPolicy;
use netsap::synthesis::{minimize_sap, PickOrder, SynthError};
use netsap::validation::brute_force_k_diag_witness;

fn main() {
    let prod = fixtures::prodline();
    let bounds = DelayBounds::new(2, 2);

    for k in [2, 3] {
        let faults = FaultSpec::single(&prod, &["f"], k).unwrap();
        let refined = refine_k_diag(&prod, &faults).unwrap();
        let spec = diag_spec(&refined, &faults);
        println!(
            "K = {k}: {} refined states, {} pairs to separate",
            refined.plant.num_states(),
            spec.len()
        );

        for (name, base) in [
            ("listed policy", fixtures::prodline_dstar()),
            ("a and c everywhere", fixtures::prodline_static_ac()),
            ("everything", SensorPolicy::full(&prod)),
        ] {
            let lifted = refined.lift_policy(&base);
            let r = check_delay_k_diag(&refined, &faults, bounds, &lifted).unwrap();
            println!(
                "  {name:<20} feasible={} diagnosable={} {:?}",
                r.feasibility.feasible(),
                r.diagnosable(),
                refined.plant.render_pairs(&r.witnesses)
            );
            if let Some((faulty, clean)) =
                brute_force_k_diag_witness(&prod, &faults, &base, bounds.no, 10)
            {
                println!(
                    "  {:<20} {} and {} can look the same",
                    "",
                    prod.render_word(&faulty),
                    prod.render_word(&clean)
                );
            }
        }

        let w = build_w(&refined.plant, bounds).unwrap();
        match minimize_sap(&refined.plant, &w, &spec, &PickOrder::Descending) {
            Ok((policy, trace)) => {
                println!(
                    "  synthesized in {} steps: {}",
                    trace.len(),
                    policy.render(&refined.plant)
                );
                match refined.project_policy(&policy) {
                    Some(p) => println!("  same on every counter copy: {}", p.render(&prod)),
                    None => println!("  depends on the counters"),
                }
            }
            Err(SynthError::SpecUnsatisfiableEvenFullyActivated(p)) => {
                println!(
                    "  unsatisfiable even with every sensor on: {:?}",
                    refined.plant.render_pairs(&p)
                )
            }
            Err(e) => println!("  {e}"),
        }
    }
}
