//! Small machines over the two-letter alphabet `{a, b}`, encoded as base-2
//! digits with `a = 0` and `b = 1`.

use crate::automata::Transducer;
use crate::sequential::{SequentialBuilder, SequentialTransducer};

/// Rotation `xu ↦ ux`: remember the first letter, copy the rest, then emit
/// the remembered letter on an epsilon-input transition.
pub fn rotation_t0() -> Transducer {
    let mut t = Transducer::new(2, 2).expect("base 2");
    let i = t.add_state("i");
    let qa = t.add_state("a");
    let qb = t.add_state("b");
    let f = t.add_state("f");
    t.set_initial(i);
    t.set_final(f);
    for (x, q) in [(0, qa), (1, qb)] {
        t.add_transition(i, Some(x), None, q).expect("valid");
        for c in 0..2 {
            t.add_transition(q, Some(c), Some(c), q).expect("valid");
        }
        t.add_transition(q, None, Some(x), f).expect("valid");
    }
    t
}

/// The same rotation as a sequential machine: the remembered letter is the
/// terminal word of the state that stores it.
pub fn rotation_t0_sequential() -> SequentialTransducer {
    let mut b = SequentialBuilder::new(2, 2).expect("base 2");
    let i = b.add_state("i");
    let qa = b.add_state("a");
    let qb = b.add_state("b");
    for (x, q) in [(0, qa), (1, qb)] {
        b.add_transition(i, x, vec![], q).expect("valid");
        for c in 0..2 {
            b.add_transition(q, c, vec![c], q).expect("valid");
        }
        b.set_terminal(q, vec![x]).expect("valid");
    }
    b.build(i)
}

/// Single state with loops `a/b` and `b/a`.
pub fn swap_t1() -> Transducer {
    let mut t = Transducer::new(2, 2).expect("base 2");
    let p = t.add_state("p");
    t.set_initial(p);
    t.set_final(p);
    t.add_transition(p, Some(0), Some(1), p).expect("valid");
    t.add_transition(p, Some(1), Some(0), p).expect("valid");
    t
}
