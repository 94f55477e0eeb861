//! Compositions, numeral lifts and serialization checked against oracles.

mod common;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use syncfn_core::{
    apply_suffix, compose_sequential, lift_relation, prefix_accel, prefix_compose, prefix_fabd,
    suffix_compose, suffix_fabd, ClosureMachine, DigitOrder, FabdParams, Machine, MapSpec,
};

use common::*;

#[test]
fn sequential_square_of_collatz() {
    let g = prefix_fabd(FabdParams::collatz()).unwrap();
    let sq = compose_sequential(g.machine(), g.machine()).unwrap();
    for n in 0..10_000u64 {
        let out = sq.apply(&msd_digits(n, 6)).unwrap();
        assert_eq!(msd_value(out.digits(), 6), iterate(|x| f(3, 1, 2, x), n, 2), "n={n}");
    }
}

#[test]
fn synchronized_square_of_accelerated_map() {
    let g = prefix_accel(3, 1).unwrap();
    let sq = prefix_compose(&g, &g).unwrap();
    assert_eq!(sq.num_states(), 4);
    for n in 0..10_000u64 {
        let out = sq.apply(&msd_digits(n, 3)).unwrap();
        assert_eq!(msd_value(out.digits(), 3), iterate(|x| f_accel(3, 1, x), n, 2), "n={n}");
    }
}

#[test]
fn suffix_square_of_collatz() {
    let s = suffix_fabd(FabdParams::collatz()).unwrap();
    let sq = suffix_compose(&s, &s).unwrap();
    assert!(sq.is_initial_epsilon_output());
    for n in 0..10_000u64 {
        let out = apply_suffix(&sq, &lsd_digits(n, 2), 8).unwrap_or_else(|| panic!("rejected {n}"));
        assert_eq!(lsd_value(out.digits(), 2), iterate(|x| f(3, 1, 2, x), n, 2), "n={n}");
    }
}

#[test]
fn lifted_relation_is_the_graph_of_the_map() {
    let g = prefix_fabd(FabdParams::collatz()).unwrap();
    let rel = g.machine().to_transducer().enumerate_relation(4, 6);
    let lifted = lift_relation(&rel, DigitOrder::MsdFirst).unwrap();
    for (m, v) in &lifted {
        let m64 = u64::try_from(m).unwrap();
        assert_eq!(*v, BigUint::from(f(3, 1, 2, m64)), "m={m}");
    }
    // prefix machines only accept after reading the whole input, so every
    // input of length <= 4 shows up
    for m in 0..6u64.pow(4) {
        assert!(lifted.iter().any(|(x, _)| *x == BigUint::from(m)), "missing {m}");
    }
}

#[test]
fn random_machines_survive_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let p = random_prefix(&mut rng, 3, 5);
        let m = Machine::Prefix(p);
        assert_eq!(Machine::from_json(&m.to_json().unwrap()).unwrap(), m);
        let s = random_suffix(&mut rng, 2, 5);
        let m = Machine::Suffix(s);
        assert_eq!(Machine::from_json(&m.to_json().unwrap()).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_matches_oracle_on_large_inputs(k in any::<u128>(), n in 0usize..12) {
        let map = MapSpec::General(FabdParams::collatz());
        let m = ClosureMachine::new(map).unwrap();
        let k = BigUint::from(k);
        prop_assert_eq!(m.eval_integer(&k, n).unwrap(), map.iterate(&k, n));
    }

    #[test]
    fn accelerated_closure_matches_oracle(k in any::<u64>(), n in 0usize..10) {
        let map = MapSpec::accelerated(5, 1).unwrap();
        let m = ClosureMachine::new(map).unwrap();
        let k = BigUint::from(k);
        prop_assert_eq!(m.eval_integer(&k, n).unwrap(), map.iterate(&k, n));
    }
}
