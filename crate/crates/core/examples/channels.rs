//! Channel updates on the toy model: what the observation and control
//! queues hold as events occur, are delivered, and are executed.

use netsap::channel::{in_ctr, in_obs, out_ctr, out_obs, plus, Channel};
use netsap::fixtures;

fn main() {
    let toy = fixtures::toy();
    let a = toy.event_by_name("a").unwrap();
    let b = toy.event_by_name("b").unwrap();
    let f = toy.event_by_name("f").unwrap();
    let (q0, q2) = (toy.initial(), toy.state_by_name("2").unwrap());
    let (no, nc) = (1, 2);

    // b occurs at 0, then f at 2 while b is still in transit.
    let obs = in_obs(&Channel::empty(), &toy, q0, b, no).unwrap();
    println!("after b:        obs {}", obs.render(&toy));
    let obs = in_obs(&obs, &toy, q2, f, no).unwrap();
    println!("after f:        obs {}", obs.render(&toy));

    // a has a minimum occurring time of 2, which would age b past the bound.
    let q3 = toy.state_by_name("3").unwrap();
    println!(
        "a now?          {:?}",
        in_obs(&obs, &toy, q3, a, no).map(|c| c.render(&toy))
    );

    // Delivering b moves it to the control side.
    let obs = out_obs(&obs, b).unwrap();
    let ctrl = in_ctr(&Channel::empty(), b);
    println!(
        "after h(b):     obs {}  ctrl {}",
        obs.render(&toy),
        ctrl.render(&toy)
    );
    let ctrl = plus(&ctrl, &toy, q2, f, nc).unwrap();
    let ctrl = in_ctr(&ctrl, f);
    println!("after h(f):     ctrl {}", ctrl.render(&toy));
    let ctrl = out_ctr(&ctrl, b).unwrap();
    println!("after g(b):     ctrl {}", ctrl.render(&toy));
    println!(
        "g(f) before g(b) is refused: {}",
        out_ctr(&in_ctr(&in_ctr(&Channel::empty(), b), f), f).is_none()
    );
}
