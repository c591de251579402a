use alloc::format;
use alloc::vec::Vec;

use crate::gadget::{DoorKind, OPEN};
use crate::system::{Endpoint, System};

/// Binary-counter style stress system over `n` symmetric self-closing doors.
///
/// The home room holds `start`, both entrances of door 1 and the `A` exits
/// of every door. Door `i`'s `B` exit opens onto a room with both
/// entrances of door `i + 1`; door `n`'s `B` exit is the goal. Reaching
/// door `i + 1` requires a fresh close-open cycle of door `i`, so the
/// shortest solution doubles with every door.
pub fn gen_counter_system(n: usize) -> System {
    assert!(n >= 1, "counter systems need at least one door");
    let id = |i: usize| format!("d{i:02}");
    let port = |i: usize, loc: &str| Endpoint::port(id(i), loc);

    let mut b =
        System::builder().use_library(DoorKind::SymmetricSelfClosing.canonical_name(), "sym");
    for i in 1..=n {
        b = b.instance(&id(i), "sym", OPEN);
    }

    let mut home: Vec<Endpoint> = (1..=n).rev().map(|i| port(i, "A_out")).collect();
    home.extend([port(1, "A_in"), port(1, "B_in")]);
    for w in home.windows(2) {
        b = b.connect(w[0].clone(), w[1].clone());
    }
    b = b.connect(Endpoint::Start, port(1, "A_in"));

    for i in 1..n {
        let room = [port(i, "B_out"), port(i + 1, "A_in"), port(i + 1, "B_in")];
        for w in room.windows(2) {
            b = b.connect(w[0].clone(), w[1].clone());
        }
    }
    b = b.connect(port(n, "B_out"), Endpoint::Goal);
    b.build()
}
