//! Builds the communication automaton of the toy model and its refinement
//! with the command tracker, prints a few states, and writes DOT to stdout
//! when given `--dot`.

use netsap::channel::DelayBounds;
use netsap::comm::{build_w, effective_command_string, psi};
use netsap::fixtures;
use netsap::fsa::ExtendedEvent::{Comm as H, Exec as G, Plant as P};
use netsap::io;

fn main() {
    let toy = fixtures::toy();
    let w = build_w(&toy, DelayBounds::new(1, 2)).unwrap();
    let comm = w.comm();
    println!(
        "communication automaton: {} states, {} transitions",
        comm.num_states(),
        comm.automaton().num_transitions()
    );
    println!("with tracker: {} states", w.num_states());

    let ev = |n: &str| toy.event_by_name(n).unwrap();
    let (a, b, f) = (ev("a"), ev("b"), ev("f"));
    for mu in [
        vec![P(a)],
        vec![P(a), H(a)],
        vec![P(b), P(f)],
        vec![P(b), H(b), P(f)],
        vec![P(b), H(b), G(b)],
        vec![P(b), P(f), H(b), H(f), P(a)],
    ] {
        let rendered: Vec<String> = mu.iter().map(|l| l.render(&toy)).collect();
        let state = w.step(&mu).map(|s| w.render_state(&toy, s));
        println!(
            "{:<22} ψ={:<4} command string={:<3} -> {}",
            rendered.join(" "),
            toy.render_word(&psi(&mu)),
            toy.render_word(&effective_command_string(&mu)),
            state.unwrap_or_else(|| "undefined".into())
        );
    }
    // a cannot fire while f is still undelivered: it would exceed the bound.
    println!(
        "b f h(b) a defined: {}",
        w.step(&[P(b), P(f), H(b), P(a)]).is_some()
    );

    if std::env::args().any(|a| a == "--dot") {
        println!("{}", io::w_to_dot(&toy, &w));
    }
}
