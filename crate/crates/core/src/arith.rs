//! Arithmetic oracles and the concrete machines realizing the maps
//! `n ↦ n/d` (d | n), `n ↦ an + b` (otherwise) and their accelerations.
//!
//! Multiplication machines read least significant digits first; division
//! machines read most significant digits first.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::automata::StateId;
use crate::error::{Error, Result};
use crate::sequential::{SequentialBuilder, SequentialTransducer};
use crate::synchronized::{PrefixSeq, SuffixBuilder, SuffixSeq};
use crate::word::Digit;

/// `f(n) = n/d` when `d | n`, else `a·n + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FabdParams {
    pub a: u32,
    pub b: u32,
    pub d: u32,
}

impl FabdParams {
    pub fn new(a: u32, b: u32, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParams("d must be positive".into()));
        }
        Ok(FabdParams { a, b, d })
    }

    /// `(a, b, d) = (3, 1, 2)`.
    pub fn collatz() -> Self {
        FabdParams { a: 3, b: 1, d: 2 }
    }

    /// Constraint shared by every prefix construction.
    pub fn check_prefix(&self) -> Result<()> {
        if self.b >= self.a {
            return Err(Error::InvalidParams(format!(
                "prefix machines need b < a (got a={}, b={}); the case b >= a is open",
                self.a, self.b
            )));
        }
        if self.a == 1 {
            return Err(Error::InvalidParams("prefix machines need a != 1".into()));
        }
        Ok(())
    }
}

/// One of the two map families, described by the data the division-based
/// prefix machines need: the digit base, the divisor and the digit fed into
/// the divisor machine to produce terminal words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MapSpec {
    General(FabdParams),
    /// `n/2` for even `n`, `(an + b)/2` otherwise.
    Accelerated { a: u32, b: u32 },
}

impl MapSpec {
    pub fn general(a: u32, b: u32, d: u32) -> Result<Self> {
        FabdParams::new(a, b, d).map(MapSpec::General)
    }

    pub fn accelerated(a: u32, b: u32) -> Result<Self> {
        check_parity(a, b)?;
        Ok(MapSpec::Accelerated { a, b })
    }

    /// Digit base of the prefix machines (`ad`, or `a` when accelerated).
    pub fn base(&self) -> u32 {
        match *self {
            MapSpec::General(p) => p.a * p.d,
            MapSpec::Accelerated { a, .. } => a,
        }
    }

    pub fn divisor(&self) -> u32 {
        match *self {
            MapSpec::General(p) => p.d,
            MapSpec::Accelerated { .. } => 2,
        }
    }

    /// Input digit whose arrow `j -feed/c→ 0` yields the terminal digit of `j`.
    pub fn feed_digit(&self) -> Digit {
        match *self {
            MapSpec::General(p) => p.b * p.d,
            MapSpec::Accelerated { b, .. } => b,
        }
    }

    pub fn apply(&self, n: &BigUint) -> BigUint {
        match *self {
            MapSpec::General(p) => oracle_f(p, n),
            MapSpec::Accelerated { a, b } => accel_unchecked(a, b, n),
        }
    }

    pub fn iterate(&self, n: &BigUint, steps: usize) -> BigUint {
        let mut x = n.clone();
        for _ in 0..steps {
            x = self.apply(&x);
        }
        x
    }

    /// Whether `n` takes the multiply-add branch.
    pub fn is_counted(&self, n: &BigUint) -> bool {
        !(n % self.divisor()).is_zero()
    }

    pub fn check_prefix(&self) -> Result<()> {
        match *self {
            MapSpec::General(p) => p.check_prefix(),
            MapSpec::Accelerated { a, b } => {
                check_parity(a, b)?;
                if a <= 1 || b >= a {
                    return Err(Error::InvalidParams(format!(
                        "accelerated prefix machine needs 0 <= b < a and a > 1 (got a={a}, b={b})"
                    )));
                }
                Ok(())
            }
        }
    }
}

impl std::fmt::Display for MapSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MapSpec::General(p) => write!(f, "f[a={},b={},d={}]", p.a, p.b, p.d),
            MapSpec::Accelerated { a, b } => write!(f, "f'[a={a},b={b}]"),
        }
    }
}

fn check_parity(a: u32, b: u32) -> Result<()> {
    if a % 2 != b % 2 {
        return Err(Error::InvalidParams(format!(
            "accelerated map needs a and b of the same parity (got a={a}, b={b})"
        )));
    }
    Ok(())
}

pub fn oracle_f(params: FabdParams, n: &BigUint) -> BigUint {
    let (q, r) = n.div_rem(&BigUint::from(params.d));
    if r.is_zero() {
        q
    } else {
        n * params.a + params.b
    }
}

pub fn oracle_f_accel(a: u32, b: u32, n: &BigUint) -> Result<BigUint> {
    check_parity(a, b)?;
    Ok(accel_unchecked(a, b, n))
}

fn accel_unchecked(a: u32, b: u32, n: &BigUint) -> BigUint {
    if n.is_even() {
        n >> 1u32
    } else {
        (n * a + b) >> 1u32
    }
}

/// `n, f(n), …, f^steps(n)`.
pub fn orbit(map: &MapSpec, n: &BigUint, steps: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(n.clone());
    for k in 0..steps {
        let next = map.apply(&out[k]);
        out.push(next);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRow {
    pub step: usize,
    #[serde(serialize_with = "crate::json::biguint_as_string")]
    pub value: BigUint,
    /// The value takes the multiply-add branch.
    pub counted: bool,
    /// Number of counted values among the previous `step` values.
    pub running: usize,
}

pub fn orbit_table(map: &MapSpec, n: &BigUint, steps: usize) -> Vec<OrbitRow> {
    let mut running = 0;
    orbit(map, n, steps)
        .into_iter()
        .enumerate()
        .map(|(step, value)| {
            let counted = map.is_counted(&value);
            let row = OrbitRow {
                step,
                value,
                counted,
                running,
            };
            running += usize::from(counted);
            row
        })
        .collect()
}

fn check_digit_base(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidBase(d));
    }
    Ok(())
}

/// `i -b/c→ j` iff `a·b + i = c + d·j`, restricted to carries `0..=max_carry`.
pub fn carry_transitions(d: u32, a: u32, max_carry: u32) -> Vec<(u32, Digit, Digit, u32)> {
    let mut out = Vec::new();
    for i in 0..=max_carry {
        for b in 0..d {
            let v = u64::from(a) * u64::from(b) + u64::from(i);
            let j = v / u64::from(d);
            if j <= u64::from(max_carry) {
                out.push((i, b, (v % u64::from(d)) as Digit, j as u32));
            }
        }
    }
    out
}

/// Carry machine over `0..=max_carry`, initial `start`, final carry 0.
pub fn carry_machine(d: u32, a: u32, max_carry: u32, start: u32) -> Result<SequentialTransducer> {
    check_digit_base(d)?;
    if start > max_carry {
        return Err(Error::InvalidParams(format!(
            "initial carry {start} exceeds {max_carry}"
        )));
    }
    let mut builder = SequentialBuilder::with_capacity(d, d, max_carry as usize + 1)?;
    for i in 0..=max_carry {
        builder.add_state(i.to_string());
    }
    for (i, b, c, j) in carry_transitions(d, a, max_carry) {
        builder.add_transition(StateId(i as usize), b, vec![c], StateId(j as usize))?;
    }
    builder.set_terminal(StateId(0), Vec::new())?;
    Ok(builder.build(StateId(start as usize)))
}

/// Multiplication by `a` in reverse base `d`.
pub fn mult_sync(d: u32, a: u32) -> Result<SequentialTransducer> {
    if a == 0 {
        return Err(Error::InvalidParams(
            "multiplication machine needs a >= 1 (state set 0..a-1)".into(),
        ));
    }
    carry_machine(d, a, a - 1, 0)
}

fn carry_bound(a: u32, b: u32) -> u32 {
    a.saturating_sub(1).max(b)
}

/// `n ↦ a·n + b` in reverse base `d`, states `0..=max(a-1, b)`, initial `b`.
pub fn mult_add_sync(d: u32, a: u32, b: u32) -> Result<SequentialTransducer> {
    carry_machine(d, a, carry_bound(a, b), b)
}

/// Suffix machine for the map in reverse base `d`: a divide-by-`d` branch
/// that drops a leading zero, and a multiply-add branch that refuses a
/// leading zero. Finals are `β` and carry 0.
pub fn suffix_fabd(params: FabdParams) -> Result<SuffixSeq> {
    let FabdParams { a, b, d } = params;
    check_digit_base(d)?;
    let m = carry_bound(a, b);
    let mut builder = SuffixBuilder::new(d, d)?;
    let alpha = builder.add_state("α");
    let beta = builder.add_state("β");
    let carry = |i: u32| StateId(2 + i as usize);
    for i in 0..=m {
        builder.add_state(i.to_string());
    }
    builder.set_final(beta);
    builder.set_final(carry(0));
    builder.add_transition(alpha, 0, None, beta)?;
    for c in 0..d {
        builder.add_transition(beta, c, Some(c), beta)?;
    }
    for (i, c, e, j) in carry_transitions(d, a, m) {
        builder.add_transition(carry(i), c, Some(e), carry(j))?;
        if i == b && c != 0 {
            builder.add_transition(alpha, c, Some(e), carry(j))?;
        }
    }
    builder.build(alpha)
}

/// How the division transitions are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivisionBuilder {
    /// Solve `i·a + b = c·d + j` for every `(i, b)`.
    Equation,
    /// One pass over sources with a goal counter modulo `d`.
    Incremental,
}

fn check_division(a: u32, d: u32) -> Result<()> {
    if a < 2 {
        return Err(Error::InvalidBase(a));
    }
    if d == 0 {
        return Err(Error::InvalidParams("divisor must be positive".into()));
    }
    Ok(())
}

pub fn division_transitions_by_equation(a: u32, d: u32) -> Result<Vec<(u32, Digit, Digit, u32)>> {
    check_division(a, d)?;
    let mut out = Vec::with_capacity(a as usize * d as usize);
    for i in 0..d {
        for b in 0..a {
            let v = u64::from(i) * u64::from(a) + u64::from(b);
            out.push((i, b, (v / u64::from(d)) as Digit, (v % u64::from(d)) as u32));
        }
    }
    Ok(out)
}

pub fn division_transitions_incremental(a: u32, d: u32) -> Result<Vec<(u32, Digit, Digit, u32)>> {
    check_division(a, d)?;
    let mut out = Vec::with_capacity(a as usize * d as usize);
    let mut output = 0;
    let mut goal = 0;
    for source in 0..d {
        for input in 0..a {
            out.push((source, input, output, goal));
            goal += 1;
            if goal == d {
                output += 1;
                goal = 0;
            }
        }
    }
    Ok(out)
}

pub fn division_transitions(a: u32, d: u32, how: DivisionBuilder) -> Result<Vec<(u32, Digit, Digit, u32)>> {
    match how {
        DivisionBuilder::Equation => division_transitions_by_equation(a, d),
        DivisionBuilder::Incremental => division_transitions_incremental(a, d),
    }
}

/// Division machine in base `a` by `d`, initial 0, with the given partial
/// terminal map.
fn division_machine<F>(a: u32, d: u32, how: DivisionBuilder, terminal: F) -> Result<SequentialTransducer>
where
    F: Fn(u32) -> Option<Vec<Digit>>,
{
    let transitions = division_transitions(a, d, how)?;
    let mut builder = SequentialBuilder::with_capacity(a, a, d as usize)?;
    for i in 0..d {
        builder.add_state(i.to_string());
    }
    for (i, b, c, j) in transitions {
        builder.add_transition(StateId(i as usize), b, vec![c], StateId(j as usize))?;
    }
    for i in 0..d {
        if let Some(w) = terminal(i) {
            builder.set_terminal(StateId(i as usize), w)?;
        }
    }
    Ok(builder.build(StateId(0)))
}

/// `u ↦ v` with `[u]_a = d·[v]_a + r` and `|u| = |v|`.
pub fn division_sync(a: u32, d: u32, r: u32) -> Result<SequentialTransducer> {
    division_sync_with(a, d, r, DivisionBuilder::Equation)
}

pub fn division_sync_with(a: u32, d: u32, r: u32, how: DivisionBuilder) -> Result<SequentialTransducer> {
    if r >= d {
        return Err(Error::InvalidParams(format!("remainder {r} must be below {d}")));
    }
    division_machine(a, d, how, |i| (i == r).then(Vec::new))
}

/// Prefix machine of a map: division by the divisor in the map's base, with
/// terminal digit of `j ≠ 0` read off the arrow `j -feed/c→ 0`.
pub fn prefix_machine(map: &MapSpec) -> Result<PrefixSeq> {
    map.check_prefix()?;
    let (base, d, feed) = (map.base(), map.divisor(), map.feed_digit());
    let machine = division_machine(base, d, DivisionBuilder::Equation, |j| {
        if j == 0 {
            return Some(Vec::new());
        }
        let v = j * base + feed;
        debug_assert_eq!(v % d, 0);
        Some(vec![v / d])
    })?;
    PrefixSeq::new(machine)
}

/// Two-state machine for the accelerated map in base `a`.
pub fn prefix_accel(a: u32, b: u32) -> Result<PrefixSeq> {
    prefix_machine(&MapSpec::accelerated(a, b)?)
}

/// `d`-state machine for the map in base `a·d`.
pub fn prefix_fabd(params: FabdParams) -> Result<PrefixSeq> {
    prefix_machine(&MapSpec::General(params))
}

/// Digit-delay machine `i -j/i→ j` for `n ↦ n/d` (d | n), identity otherwise.
pub fn prefix_identity_case(d: u32) -> Result<PrefixSeq> {
    if d == 0 {
        return Err(Error::InvalidParams("d must be positive".into()));
    }
    let mut builder = SequentialBuilder::with_capacity(d, d, d as usize)?;
    for i in 0..d {
        builder.add_state(i.to_string());
    }
    for i in 0..d {
        for j in 0..d {
            builder.add_transition(StateId(i as usize), j, vec![i], StateId(j as usize))?;
        }
        let w = if i == 0 { Vec::new() } else { vec![i] };
        builder.set_terminal(StateId(i as usize), w)?;
    }
    PrefixSeq::new(builder.build(StateId(0)))
}

/// Convenience wrapper for small values.
pub fn oracle_f_u64(params: FabdParams, n: u64) -> BigUint {
    oracle_f(params, &BigUint::from(n))
}
