//! Shared helpers for the integration tests: plain `u64` arithmetic oracles,
//! digit conversions written independently of the library, and random
//! machine generators.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use syncfn_core::{
    Digit, PrefixSeq, SequentialBuilder, StateId, SuffixBuilder, SuffixSeq,
};

pub fn f(a: u64, b: u64, d: u64, n: u64) -> u64 {
    if n.is_multiple_of(d) {
        n / d
    } else {
        a * n + b
    }
}

pub fn f_accel(a: u64, b: u64, n: u64) -> u64 {
    if n.is_multiple_of(2) {
        n / 2
    } else {
        (a * n + b) / 2
    }
}

pub fn iterate(step: impl Fn(u64) -> u64, n: u64, times: usize) -> u64 {
    (0..times).fold(n, |x, _| step(x))
}

pub fn msd_digits(mut n: u64, base: u32) -> Vec<Digit> {
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % base as u64) as Digit);
        n /= base as u64;
    }
    out.reverse();
    out
}

pub fn lsd_digits(n: u64, base: u32) -> Vec<Digit> {
    let mut w = msd_digits(n, base);
    w.reverse();
    w
}

pub fn msd_value(digits: &[Digit], base: u32) -> u64 {
    digits.iter().fold(0, |v, &c| v * base as u64 + c as u64)
}

pub fn lsd_value(digits: &[Digit], base: u32) -> u64 {
    digits.iter().rev().fold(0, |v, &c| v * base as u64 + c as u64)
}

/// Every word of length exactly `len`.
pub fn words(base: u32, len: usize) -> Vec<Vec<Digit>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..base).map(move |c| {
                    let mut w2 = w.clone();
                    w2.push(c);
                    w2
                })
            })
            .collect();
    }
    out
}

pub fn random_prefix<R: Rng>(rng: &mut R, base: u32, max_states: usize) -> PrefixSeq {
    let n = rng.gen_range(1..=max_states);
    let mut b = SequentialBuilder::new(base, base).unwrap();
    for k in 0..n {
        b.add_state(format!("p{k}"));
    }
    for p in 0..n {
        for c in 0..base {
            if rng.gen_bool(0.85) {
                let out = rng.gen_range(0..base);
                let q = rng.gen_range(0..n);
                b.add_transition(StateId(p), c, vec![out], StateId(q)).unwrap();
            }
        }
        if rng.gen_bool(0.6) {
            let len = rng.gen_range(0..=2);
            let w = (0..len).map(|_| rng.gen_range(0..base)).collect();
            b.set_terminal(StateId(p), w).unwrap();
        }
    }
    PrefixSeq::new(b.build(StateId(0))).unwrap()
}

/// Copy of `p` with one arrow output or one terminal word changed.
pub fn mutate_prefix<R: Rng>(rng: &mut R, p: &PrefixSeq) -> PrefixSeq {
    let m = p.machine();
    let base = m.input_base();
    let mut b = SequentialBuilder::new(base, base).unwrap();
    for q in m.states() {
        b.add_state(m.name(q).to_owned());
    }
    let arrows: Vec<_> = m.transitions().map(|(s, c, o, t)| (s, c, o.to_vec(), t)).collect();
    let victim = rng.gen_range(0..=arrows.len());
    for (k, (s, c, o, t)) in arrows.into_iter().enumerate() {
        let o = if k == victim { vec![(o[0] + 1) % base] } else { o };
        b.add_transition(s, c, o, t).unwrap();
    }
    for q in m.states() {
        match m.terminal(q) {
            Some(w) if victim == m.num_transitions() && q == m.initial() => {
                let mut w = w.to_vec();
                w.push(0);
                b.set_terminal(q, w).unwrap();
            }
            Some(w) => b.set_terminal(q, w.to_vec()).unwrap(),
            None => {}
        }
    }
    PrefixSeq::new(b.build(m.initial())).unwrap()
}

type SuffixArrow = (usize, Digit, Option<Digit>, usize);

fn build_suffix(base: u32, n: usize, arrows: &[SuffixArrow], finals: &[usize]) -> SuffixSeq {
    let mut b = SuffixBuilder::new(base, base).unwrap();
    for k in 0..n {
        b.add_state(format!("s{k}"));
    }
    for &q in finals {
        b.set_final(StateId(q));
    }
    for &(p, c, o, q) in arrows {
        b.add_transition(StateId(p), c, o, StateId(q)).unwrap();
    }
    b.build(StateId(0)).unwrap()
}

/// Keeps epsilon outputs only where no letter-output arrow enters.
fn repair(arrows: &mut [SuffixArrow], base: u32, rng: &mut impl Rng) {
    loop {
        let entered: Vec<usize> = arrows.iter().filter(|a| a.2.is_some()).map(|a| a.3).collect();
        let mut changed = false;
        for a in arrows.iter_mut() {
            if a.2.is_none() && entered.contains(&a.0) {
                a.2 = Some(rng.gen_range(0..base));
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

pub fn random_suffix<R: Rng>(rng: &mut R, base: u32, max_states: usize) -> SuffixSeq {
    let n = rng.gen_range(1..=max_states);
    let mut arrows = Vec::new();
    for p in 0..n {
        for c in 0..base {
            if rng.gen_bool(0.85) {
                let out = if rng.gen_bool(0.3) { None } else { Some(rng.gen_range(0..base)) };
                arrows.push((p, c, out, rng.gen_range(0..n)));
            }
        }
    }
    repair(&mut arrows, base, rng);
    let mut states: Vec<usize> = (0..n).collect();
    states.shuffle(rng);
    let finals: Vec<usize> = states.into_iter().take(rng.gen_range(1..=n)).collect();
    build_suffix(base, n, &arrows, &finals)
}

pub fn mutate_suffix<R: Rng>(rng: &mut R, s: &SuffixSeq) -> SuffixSeq {
    let base = s.input_base();
    let mut arrows: Vec<SuffixArrow> = s.transitions().map(|(p, c, o, q)| (p.0, c, o, q.0)).collect();
    let mut finals: Vec<usize> = s.states().filter(|&q| s.is_final(q)).map(|q| q.0).collect();
    if !arrows.is_empty() && rng.gen_bool(0.7) {
        let k = rng.gen_range(0..arrows.len());
        arrows[k].2 = Some(arrows[k].2.map_or(0, |c| (c + 1) % base));
        repair(&mut arrows, base, rng);
    } else {
        let q = rng.gen_range(0..s.num_states());
        if let Some(pos) = finals.iter().position(|&x| x == q) {
            finals.remove(pos);
        } else {
            finals.push(q);
        }
    }
    build_suffix(base, s.num_states(), &arrows, &finals)
}
