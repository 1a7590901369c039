mod common;

use std::collections::BTreeSet;

use netsap::channel::{in_ctr, in_obs, out_ctr, out_obs, Channel, DelayBounds};
use netsap::comm::{build_comm, build_w};
use netsap::decentral::{conf_tuples, AgentProfile, JointEngine};
use netsap::diagnosis::{check_delay_k_diag, refine_k_diag, FaultSpec};
use netsap::fixtures;
use netsap::fsa::{parallel_compose, EventId, ExtendedEvent, PairSet, StateId};
use netsap::observe::{conf_pairs, p_map, SensorPolicy};
use netsap::synthesis::{check_delay_feasible, max_feasible_subpolicy};
use netsap::validation::{
    brute_force_k_diag_witness, random_plant, random_policy, simulate_run, word_counters,
};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn models_are_deterministic(seed in any::<u64>(), n in 1usize..7, acyclic in any::<bool>()) {
        let p = random_plant(seed, n, 3, acyclic);
        prop_assert!(p.automaton().is_deterministic());
        let comm = build_comm(&p, DelayBounds::new(1, 1)).unwrap();
        prop_assert!(comm.automaton().is_deterministic());
    }

    #[test]
    fn product_language_is_intersection_on_shared_labels(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_plant(s1, 4, 3, false).automaton();
        let b = random_plant(s2, 4, 3, false).automaton();
        let prod = parallel_compose(&a, &b).automaton;
        let la = a.bounded_language(5);
        let lb = b.bounded_language(5);
        let expected: BTreeSet<_> = la.intersection(&lb).cloned().collect();
        prop_assert_eq!(prod.bounded_language(5), expected);
    }

    #[test]
    fn pair_sets_are_symmetric(raw in proptest::collection::vec((0u32..8, 0u32..8), 0..20)) {
        let set: PairSet = raw.iter().map(|&(a, b)| (StateId(a), StateId(b))).collect();
        for &(a, b) in &raw {
            prop_assert!(set.contains(StateId(a), StateId(b)));
            prop_assert!(set.contains(StateId(b), StateId(a)));
        }
        prop_assert!(set.off_diagonal().all(|(a, b)| a != b));
    }

    #[test]
    fn observation_channel_stays_bounded(steps in proptest::collection::vec((0usize..6, 0usize..3), 0..12), no in 0u32..3) {
        let toy = fixtures::toy();
        let mut theta = Channel::empty();
        for (q, e) in steps {
            let (q, e) = (StateId(q as u32), EventId(e as u32));
            if toy.next(q, e).is_none() {
                continue;
            }
            match in_obs(&theta, &toy, q, e, no) {
                Some(next) => {
                    prop_assert_eq!(next.len(), theta.len() + 1);
                    prop_assert!(next.max_age() <= no);
                    prop_assert_eq!(next.entries().last().copied(), Some((e, 0)));
                    let ages: Vec<u32> = next.entries().iter().map(|&(_, n)| n).collect();
                    prop_assert!(ages.windows(2).all(|w| w[0] >= w[1]));
                    theta = next;
                }
                None => prop_assert!(theta.max_age() + toy.t_min(q, e).unwrap() > no),
            }
        }
    }

    #[test]
    fn control_channel_round_trip(events in proptest::collection::vec(0u32..3, 1..6)) {
        let mut theta = Channel::empty();
        for &e in &events {
            theta = in_ctr(&theta, EventId(e));
        }
        for &e in &events {
            let other = EventId((e + 1) % 3);
            prop_assert!(out_ctr(&theta, other).is_none());
            theta = out_ctr(&theta, EventId(e)).expect("front is the oldest entry");
        }
        prop_assert!(theta.is_empty());
        prop_assert!(out_obs(&theta, EventId(0)).is_none());
    }

    #[test]
    fn channels_are_fifo_along_runs(seed in any::<u64>(), model in any::<u64>(), no in 0u32..3, nc in 0u32..3) {
        let p = random_plant(model, 4, 3, false);
        let comm = build_comm(&p, DelayBounds::new(no, nc)).unwrap();
        let run = simulate_run(&comm, &p, &SensorPolicy::full(&p), seed, 40, &[]);
        let mut occurred = Vec::new();
        let mut sent = Vec::new();
        let mut executed = Vec::new();
        for l in run.mu {
            match l {
                ExtendedEvent::Plant(e) => occurred.push(e),
                ExtendedEvent::Comm(e) => sent.push(e),
                ExtendedEvent::Exec(e) => executed.push(e),
            }
            prop_assert!(occurred.starts_with(&sent));
            prop_assert!(sent.starts_with(&executed));
        }
    }

    #[test]
    fn channel_configurations_are_bounded(seed in any::<u64>(), no in 0u32..3, nc in 0u32..3) {
        let p = random_plant(seed, 4, 3, false);
        let comm = build_comm(&p, DelayBounds::new(no, nc)).unwrap();
        for (_, s) in comm.states() {
            prop_assert!(s.obs.len() <= no as usize + 1);
            prop_assert!(s.obs.max_age() <= no);
            prop_assert!(s.ctrl.max_age() <= nc);
        }
    }

    #[test]
    fn w_observation_matches_p_map(seed in any::<u64>(), walk in any::<u64>(), density in 0.0f64..1.0) {
        let p = random_plant(seed, 4, 3, false);
        let w = build_w(&p, DelayBounds::new(1, 1)).unwrap();
        let policy = random_policy(&p, seed ^ 7, density);
        let run = simulate_run(w.comm(), &p, &policy, walk, 30, &[]);
        // Walk W and observe by the tracker component.
        let a = w.automaton();
        let mut q = a.initial();
        let mut seen = Vec::new();
        for &l in &run.mu {
            if let ExtendedEvent::Plant(e) = l {
                if policy.contains(w.tracker(q), e) {
                    seen.push(e);
                }
            }
            q = a.next(q, l).unwrap();
        }
        prop_assert_eq!(&seen, &p_map(w.comm(), &p, &policy, &run.mu).unwrap());
        prop_assert_eq!(seen, run.observation);
    }

    #[test]
    fn union_of_feasible_policies_is_feasible(seed in any::<u64>(), n in 2usize..6, acyclic in any::<bool>()) {
        let p = random_plant(seed, n, 3, acyclic);
        let w = build_w(&p, DelayBounds::new(1, 2)).unwrap();
        let (d1, _) = max_feasible_subpolicy(&p, &w, &random_policy(&p, seed ^ 1, 0.7));
        let (d2, _) = max_feasible_subpolicy(&p, &w, &random_policy(&p, seed ^ 2, 0.7));
        prop_assert!(check_delay_feasible(&p, &w, &d1).feasible());
        prop_assert!(check_delay_feasible(&p, &w, &d1.union(&d2)).feasible());
        // The maximal subpolicy of the union contains both.
        let (up, _) = max_feasible_subpolicy(&p, &w, &d1.union(&d2));
        prop_assert_eq!(up, d1.union(&d2));
    }

    #[test]
    fn more_sensors_fewer_confusions(seed in any::<u64>(), n in 2usize..6) {
        let p = random_plant(seed, n, 3, false);
        let w = build_w(&p, DelayBounds::new(1, 1)).unwrap();
        let (big, _) = max_feasible_subpolicy(&p, &w, &random_policy(&p, seed ^ 3, 0.8));
        let shrunk: SensorPolicy = random_policy(&p, seed ^ 4, 0.5).iter().filter(|&(q, e)| big.contains(q, e)).collect();
        let (small, _) = max_feasible_subpolicy(&p, &w, &shrunk);
        prop_assert!(conf_pairs(&w, &big).is_subset(&conf_pairs(&w, &small)));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn refined_counters_match_word_walk(k in 1u32..4) {
        let prod = fixtures::prodline();
        let faults = FaultSpec::single(&prod, &["f"], k).unwrap();
        let refined = refine_k_diag(&prod, &faults).unwrap();
        for word in prod.bounded_language(10) {
            let r = refined.plant.step(refined.plant.initial(), &word).expect("refinement keeps the language");
            prop_assert_eq!(refined.counters(r).to_vec(), word_counters(&faults, &word));
            prop_assert_eq!(refined.base(r), prod.step(prod.initial(), &word).unwrap());
        }
    }

    #[test]
    fn diagnosability_matches_definition(k in 1u32..5, no in 0u32..3, seed in any::<u64>(), density in 0.0f64..1.0) {
        let prod = fixtures::prodline();
        let faults = FaultSpec::single(&prod, &["f"], k).unwrap();
        let refined = refine_k_diag(&prod, &faults).unwrap();
        let bounds = DelayBounds::new(no, 1);
        let w = build_w(&refined.plant, bounds).unwrap();
        let start = refined.lift_policy(&random_policy(&prod, seed, density));
        let (policy, _) = max_feasible_subpolicy(&refined.plant, &w, &start);
        let report = check_delay_k_diag(&refined, &faults, bounds, &policy).unwrap();
        let rf = FaultSpec::single(&refined.plant, &["f"], k).unwrap();
        let witness = brute_force_k_diag_witness(&refined.plant, &rf, &policy, no, 10);
        prop_assert_eq!(report.diagnosable(), witness.is_none(), "witness {:?}", witness);
        if k <= no {
            prop_assert!(!report.diagnosable());
        }
    }

    #[test]
    fn joint_engines_agree_on_finite_models(seed in any::<u64>(), n in 2usize..6, d1 in 0.0f64..1.0, d2 in 0.0f64..1.0) {
        let p = random_plant(seed, n, 3, true);
        let obs: Vec<EventId> = p.observable_events().collect();
        let agents = vec![
            AgentProfile::new(1, obs[..1].to_vec(), (seed % 2) as u32, 1),
            AgentProfile::new(2, obs.clone(), 1, 1),
        ];
        let policies: Vec<SensorPolicy> = agents
            .iter()
            .zip([d1, d2])
            .map(|(a, d)| random_policy(&p, seed ^ a.id as u64, d).iter().filter(|(_, e)| a.observable.contains(e)).collect())
            .collect();
        let (product, _) = conf_tuples(&p, &agents, &policies, JointEngine::Product);
        let (brute, truncated) = conf_tuples(&p, &agents, &policies, JointEngine::BruteForce { horizon: n });
        prop_assert!(!truncated);
        prop_assert_eq!(product, brute);
    }

    #[test]
    fn joint_confusion_shrinks_with_more_sensors(seed in any::<u64>(), n in 2usize..6) {
        let p = random_plant(seed, n, 3, false);
        let obs: Vec<EventId> = p.observable_events().collect();
        let agents = vec![AgentProfile::new(1, obs[..1].to_vec(), 1, 1), AgentProfile::new(2, obs.clone(), 0, 1)];
        let ws: Vec<_> = agents.iter().map(|a| build_w(&p, a.bounds).unwrap()).collect();
        let mut big = Vec::new();
        let mut small = Vec::new();
        for (i, a) in agents.iter().enumerate() {
            let start: SensorPolicy = random_policy(&p, seed ^ i as u64, 0.8).iter().filter(|(_, e)| a.observable.contains(e)).collect();
            let (b, _) = max_feasible_subpolicy(&p, &ws[i], &start);
            let shrunk: SensorPolicy = random_policy(&p, seed ^ 99 ^ i as u64, 0.5).iter().filter(|&(q, e)| b.contains(q, e)).collect();
            small.push(max_feasible_subpolicy(&p, &ws[i], &shrunk).0);
            big.push(b);
        }
        let (tb, _) = conf_tuples(&p, &agents, &big, JointEngine::Product);
        let (ts, _) = conf_tuples(&p, &agents, &small, JointEngine::Product);
        prop_assert!(tb.is_subset(&ts));
    }
}
