//! Explicit n-th powers of the prefix machines.
//!
//! The n-fold composition of the division by `d` in base `a` is the division
//! by `d^n`, with state `k` named by its reverse base-`d` word of length `n`.
//! Terminal words are the canonical encodings of `f^n(i)`, left-padded to the
//! number of multiply-add steps in the orbit of `i`.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{prefix_machine, MapSpec};
use crate::automata::StateId;
use crate::error::{Error, Result};
use crate::numerals::{decode_msd, encode_lsd_padded, encode_msd, encode_msd_padded};
use crate::sequential::{identity_sequential, SequentialBuilder, SequentialTransducer};
use crate::synchronized::{prefix_compose, PrefixSeq};
use crate::word::{format_digits, Digit};

/// Default cap on materialized states.
pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

/// Number of counted values among `q, f(q), …, f^{n-1}(q)`.
pub fn count_steps(map: &MapSpec, n: usize, q: &BigUint) -> usize {
    let mut x = q.clone();
    let mut count = 0;
    for _ in 0..n {
        count += usize::from(map.is_counted(&x));
        x = map.apply(&x);
    }
    count
}

/// Odd values among the first `n` points of the accelerated orbit of `q`.
pub fn eta(a: u32, b: u32, n: usize, q: &BigUint) -> Result<usize> {
    Ok(count_steps(&MapSpec::accelerated(a, b)?, n, q))
}

/// Values not divisible by `d` among the first `n` points of the orbit of `q`.
pub fn mu(params: crate::arith::FabdParams, n: usize, q: &BigUint) -> usize {
    count_steps(&MapSpec::General(params), n, q)
}

/// `d^n` as a state count, refused above `limit`.
pub fn section_size(d: u32, n: usize, limit: usize) -> Result<usize> {
    let states = (0..n).fold(1u128, |acc, _| acc.saturating_mul(u128::from(d)));
    if states > limit as u128 {
        return Err(Error::StateLimitExceeded { states, limit });
    }
    Ok(states as usize)
}

/// Reverse base-`d` word of length `n` naming state `k`.
pub fn state_word(k: usize, d: u32, n: usize) -> Vec<Digit> {
    encode_lsd_padded(k as u64, d, n)
}

pub fn state_name(k: usize, d: u32, n: usize) -> String {
    if n == 0 {
        "ε".to_owned()
    } else {
        format_digits(&state_word(k, d, n), d)
    }
}

/// Division by `d^n` in base `a`: `x -b/c→ y` iff `x·a + b = c·d^n + y`,
/// with state 0 initial and terminal.
pub fn division_power(a: u32, d: u32, n: usize) -> Result<SequentialTransducer> {
    division_power_with_limit(a, d, n, DEFAULT_STATE_LIMIT)
}

pub fn division_power_with_limit(a: u32, d: u32, n: usize, limit: usize) -> Result<SequentialTransducer> {
    if a < 2 {
        return Err(Error::InvalidBase(a));
    }
    if d == 0 {
        return Err(Error::InvalidParams("divisor must be positive".into()));
    }
    let size = section_size(d, n, limit)?;
    if n == 0 {
        return identity_sequential(a);
    }
    let modulus = size as u64;
    let mut builder = SequentialBuilder::with_capacity(a, a, size)?;
    for k in 0..size {
        builder.add_state(state_name(k, d, n));
    }
    for x in 0..modulus {
        for b in 0..a {
            let v = x * u64::from(a) + u64::from(b);
            builder.add_transition(
                StateId(x as usize),
                b,
                vec![(v / modulus) as Digit],
                StateId((v % modulus) as usize),
            )?;
        }
    }
    builder.set_terminal(StateId(0), Vec::new())?;
    Ok(builder.build(StateId(0)))
}

/// Terminal word of state `i` in the explicit n-th power: `f^n(i)` in the
/// map's base, left-padded to the count of multiply-add steps. Fails if the
/// canonical word is longer than that count.
pub fn power_terminal(map: &MapSpec, n: usize, i: u64) -> Result<Vec<Digit>> {
    let q = BigUint::from(i);
    let value = map.iterate(&q, n);
    let len = count_steps(map, n, &q);
    encode_msd_padded(&value, map.base(), len).map(|w| w.into_digits())
}

/// Division by `divisor^n` in the map's base with the padded terminal words.
pub fn explicit_power(map: &MapSpec, n: usize) -> Result<PrefixSeq> {
    explicit_power_with_limit(map, n, DEFAULT_STATE_LIMIT)
}

pub fn explicit_power_with_limit(map: &MapSpec, n: usize, limit: usize) -> Result<PrefixSeq> {
    map.check_prefix()?;
    let division = division_power_with_limit(map.base(), map.divisor(), n, limit)?;
    let size = division.num_states();
    let terminals: Vec<Vec<Digit>> = (0..size as u64)
        .into_par_iter()
        .map(|i| power_terminal(map, n, i))
        .collect::<Result<_>>()?;
    let mut builder = SequentialBuilder::with_capacity(division.input_base(), division.output_base(), size)?;
    for q in division.states() {
        builder.add_state(division.name(q).to_owned());
    }
    for (p, c, out, q) in division.transitions() {
        builder.add_transition(p, c, out.to_vec(), q)?;
    }
    for (i, w) in terminals.into_iter().enumerate() {
        builder.set_terminal(StateId(i), w)?;
    }
    PrefixSeq::new(builder.build(division.initial()))
}

pub fn explicit_power_accel(a: u32, b: u32, n: usize) -> Result<PrefixSeq> {
    explicit_power(&MapSpec::accelerated(a, b)?, n)
}

/// n-fold composition of the one-step prefix machine, first copy applied
/// first. The product index read in base `divisor` with the first copy as
/// most significant digit equals the reverse word of the explicit state.
pub fn composed_power(map: &MapSpec, n: usize) -> Result<PrefixSeq> {
    let one = prefix_machine(map)?;
    let mut acc = PrefixSeq::new(identity_sequential(map.base())?)?;
    for k in 0..n {
        acc = if k == 0 {
            one.clone()
        } else {
            prefix_compose(&acc, &one)?
        };
    }
    Ok(acc)
}

/// Explicit-machine state of a composed-power product index.
pub fn composed_index_to_state(index: usize, d: u32, n: usize) -> usize {
    // the index digits, most significant first, are the reverse word
    state_word(index, d, n)
        .iter()
        .fold(0, |value, &c| value * d as usize + c as usize)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PowerReport {
    pub states: usize,
    /// Product states whose arrows or terminal word differ from the explicit
    /// machine under the index renaming.
    pub structural_mismatches: Vec<usize>,
    /// `(m, oracle, explicit, composed)` for every disagreeing input.
    pub value_mismatches: Vec<(u64, String, String, String)>,
}

impl PowerReport {
    pub fn passed(&self) -> bool {
        self.structural_mismatches.is_empty() && self.value_mismatches.is_empty()
    }
}

fn eval_msd(p: &PrefixSeq, m: u64, base: u32) -> Option<BigUint> {
    let u = encode_msd(&BigUint::from(m), base).ok()?;
    let v = p.apply(u.digits())?;
    decode_msd(v.digits(), base).ok()
}

/// Explicit power ≡ composed power (state by state) ≡ iterated oracle on all
/// inputs below `bound`.
pub fn check_power_equivalence(map: &MapSpec, n: usize, bound: u64) -> Result<PowerReport> {
    let explicit = explicit_power(map, n)?;
    let composed = composed_power(map, n)?;
    let d = map.divisor();
    let (em, cm) = (explicit.machine(), composed.machine());
    let mut report = PowerReport {
        states: em.num_states(),
        ..PowerReport::default()
    };
    if cm.num_states() != em.num_states() {
        return Err(Error::InvariantViolation(format!(
            "composed power has {} states, explicit has {}",
            cm.num_states(),
            em.num_states()
        )));
    }
    for s in cm.states() {
        let t = StateId(composed_index_to_state(s.0, d, n));
        let arrows_match = (0..map.base()).all(|c| match (composed.step(s, c), explicit.step(t, c)) {
            (Some((o1, q1)), Some((o2, q2))) => {
                o1 == o2 && composed_index_to_state(q1.0, d, n) == q2.0
            }
            (None, None) => true,
            _ => false,
        });
        if !arrows_match || cm.terminal(s) != em.terminal(t) {
            report.structural_mismatches.push(s.0);
        }
    }
    let base = map.base();
    report.value_mismatches = (0..bound)
        .into_par_iter()
        .filter_map(|m| {
            let expected = map.iterate(&BigUint::from(m), n);
            let e = eval_msd(&explicit, m, base);
            let c = eval_msd(&composed, m, base);
            let show = |v: &Option<BigUint>| v.as_ref().map_or("-".to_owned(), BigUint::to_string);
            (e.as_ref() != Some(&expected) || c.as_ref() != Some(&expected))
                .then(|| (m, expected.to_string(), show(&e), show(&c)))
        })
        .collect();
    report.value_mismatches.sort();
    Ok(report)
}
