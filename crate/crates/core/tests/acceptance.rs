//! Acceptance criteria AC1..AC7, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the output;
//! exits nonzero if any criterion fails or exceeds its time budget.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syncfn_core::{
    apply_suffix, carry_machine, check_power_equivalence, compose_relations, division_sync,
    division_transitions_by_equation, division_transitions_incremental, explicit_power,
    explicit_power_accel, prefix_accel, prefix_compose, prefix_difference, prefix_fabd,
    prefix_intersect, suffix_compose, suffix_difference, suffix_fabd, suffix_intersect,
    ClosureMachine, FabdParams, MapSpec, PrefixSeq, StateId, SuffixSeq, WordPair,
    DEFAULT_STATE_LIMIT,
};

use common::*;

type Outcome = Result<(), String>;

/// Id, description, time budget, check.
type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big_u64(n: &BigUint) -> u64 {
    u64::try_from(n).expect("fits in u64")
}

/// f^3 for the accelerated 5n+1 map on the worked example.
fn ac1() -> Outcome {
    let g = explicit_power_accel(5, 1, 3).map_err(|e| e.to_string())?;
    let out = g.apply(&[4, 2, 3]).ok_or("input 423 rejected")?;
    check(out.to_digit_string() == "02404", || format!("output {out}"))?;
    check(msd_value(&[4, 2, 3], 5) == 113, || "423 is not 113".into())?;
    let value = msd_value(out.digits(), 5);
    check(value == 354, || format!("decoded {value}"))?;
    check(iterate(|n| f_accel(5, 1, n), 113, 3) == 354, || "oracle disagrees".into())?;
    let m = g.machine();
    let q = m.states().find(|&q| m.name(q) == "100").ok_or("no state 100")?;
    check(m.terminal(q) == Some(&[0, 4][..]), || format!("terminal of 100 is {:?}", m.terminal(q)))?;
    // the path 000 -4/0-> 001 -2/2-> 011 -3/4-> 100
    let names: Vec<&str> = [4, 2, 3]
        .iter()
        .scan(m.initial(), |q, &c| {
            *q = m.edge(*q, c)?.target;
            Some(m.name(*q))
        })
        .collect();
    check(names == ["001", "011", "100"], || format!("path {names:?}"))
}

/// Structure of the division by 8 in base 5 and the two builders.
fn ac2() -> Outcome {
    let m = division_sync(5, 8, 0).map_err(|e| e.to_string())?;
    check(m.num_states() == 8, || format!("{} states", m.num_states()))?;
    check(m.num_transitions() == 40, || format!("{} transitions", m.num_transitions()))?;
    let inc = division_transitions_incremental(5, 8).map_err(|e| e.to_string())?;
    check(inc.first() == Some(&(0, 0, 0, 0)), || format!("first {:?}", inc.first()))?;
    check(inc.last() == Some(&(7, 4, 4, 7)), || format!("last {:?}", inc.last()))?;
    for a in 2..=6u32 {
        for d in 1..=9u32 {
            let eq = division_transitions_by_equation(a, d).map_err(|e| e.to_string())?;
            let inc = division_transitions_incremental(a, d).map_err(|e| e.to_string())?;
            check(eq == inc, || format!("builders differ for a={a} d={d}"))?;
            for &(i, b, c, j) in &inc {
                check(i * a + b == c * d + j && j < d && c < a, || {
                    format!("bad arrow {i}-{b}/{c}->{j} for a={a} d={d}")
                })?;
            }
        }
    }
    Ok(())
}

fn prefix_sweep(p: &PrefixSeq, base: u32, bound: u64, oracle: impl Fn(u64) -> u64) -> Outcome {
    for n in 0..bound {
        let out = p.apply(&msd_digits(n, base)).ok_or_else(|| format!("{n} rejected"))?;
        let got = msd_value(out.digits(), base);
        check(got == oracle(n), || format!("n={n}: got {got}, want {}", oracle(n)))?;
    }
    Ok(())
}

/// Oracle sweeps for the one-step machines.
fn ac3() -> Outcome {
    let g = prefix_fabd(FabdParams::collatz()).map_err(|e| e.to_string())?;
    prefix_sweep(&g, 6, 100_000, |n| f(3, 1, 2, n))?;
    let s = suffix_fabd(FabdParams::collatz()).map_err(|e| e.to_string())?;
    for n in 0..10_000u64 {
        let out = apply_suffix(&s, &lsd_digits(n, 2), 4).ok_or_else(|| format!("suffix rejected {n}"))?;
        let got = lsd_value(out.digits(), 2);
        check(got == f(3, 1, 2, n), || format!("suffix n={n}: got {got}"))?;
    }
    let g31 = prefix_accel(3, 1).map_err(|e| e.to_string())?;
    prefix_sweep(&g31, 3, 10_000, |n| f_accel(3, 1, n))?;
    let g62 = prefix_accel(6, 2).map_err(|e| e.to_string())?;
    prefix_sweep(&g62, 6, 10_000, |n| f_accel(6, 2, n))?;
    // the accelerated (6,2) map is the Collatz map
    prefix_sweep(&g62, 6, 10_000, |n| f(3, 1, 2, n))
}

/// Path/arithmetic equivalences for multiplication and division machines,
/// composition of divisions, and the orbit identities.
fn ac4() -> Outcome {
    // multiplication: i -u/v-> j iff [u]a + i = [v] + j d^|u| (reverse base d)
    for (d, a) in [(2u32, 3u64), (2, 4), (3, 2), (5, 3)] {
        let m = carry_machine(d, a as u32, 6, 0).map_err(|e| e.to_string())?;
        for len in 0..=4usize {
            let all = words(d, len);
            let scale = (d as u64).pow(len as u32);
            for i in 0..=6u64 {
                for u in &all {
                    let path = m.run_from(StateId(i as usize), u).map(|(v, j)| (v, j.0 as u64));
                    let mut solutions = Vec::new();
                    for v in &all {
                        let lhs = lsd_value(u, d) * a + i;
                        let rv = lsd_value(v, d);
                        if lhs >= rv && (lhs - rv).is_multiple_of(scale) && (lhs - rv) / scale <= 6 {
                            solutions.push((v.clone(), (lhs - rv) / scale));
                        }
                    }
                    let expected: Vec<_> = path.into_iter().collect();
                    check(solutions == expected, || {
                        format!("mult d={d} a={a} i={i} u={u:?}: {solutions:?} vs {expected:?}")
                    })?;
                }
            }
        }
    }
    // division: i -u/v-> j iff i a^|u| + [u] = [v] d + j (base a)
    for (a, d) in [(2u32, 3u64), (3, 2), (5, 8), (6, 2)] {
        let m = division_sync(a, d as u32, 0).map_err(|e| e.to_string())?;
        for len in 0..=4usize {
            let all = words(a, len);
            let scale = (a as u64).pow(len as u32);
            for i in 0..d {
                for u in &all {
                    let path = m.run_from(StateId(i as usize), u).map(|(v, j)| (v, j.0 as u64));
                    let lhs = i * scale + msd_value(u, a);
                    let mut solutions = Vec::new();
                    for v in &all {
                        let rv = msd_value(v, a) * d;
                        if lhs >= rv && lhs - rv < d {
                            solutions.push((v.clone(), lhs - rv));
                        }
                    }
                    let expected: Vec<_> = path.into_iter().collect();
                    check(solutions == expected, || format!("div a={a} d={d} i={i} u={u:?}"))?;
                }
            }
        }
    }
    // composing divisions by d then d' is dividing by d d', (i, i') -> i + i' d
    for (a, d, d2) in [(2u32, 2u32, 3u32), (3, 2, 2), (5, 2, 4)] {
        let one = PrefixSeq::new(division_sync(a, d, 0).unwrap()).unwrap();
        let two = PrefixSeq::new(division_sync(a, d2, 0).unwrap()).unwrap();
        let comp = prefix_compose(&one, &two).map_err(|e| e.to_string())?;
        let direct = division_sync(a, d * d2, 0).unwrap();
        let code = |s: usize| (s / d2 as usize) + (s % d2 as usize) * d as usize;
        let lhs: BTreeSet<_> = comp
            .machine()
            .transitions()
            .map(|(p, c, o, q)| (code(p.0), c, o.to_vec(), code(q.0)))
            .collect();
        let rhs: BTreeSet<_> = direct.transitions().map(|(p, c, o, q)| (p.0, c, o.to_vec(), q.0)).collect();
        check(lhs == rhs, || format!("composition of divisions a={a} d={d} d'={d2}"))?;
    }
    // accelerated orbit identity with the odd counter
    for (a, b) in [(3u64, 1u64), (5, 1)] {
        let step = |n| f_accel(a, b, n);
        let count = |q: u64, n: usize| (0..n).filter(|&i| iterate(step, q, i) % 2 == 1).count() as u32;
        for n in 0..=5usize {
            for p in 0..8u64 {
                for q in 0..(1u64 << n) {
                    let x = p * (1 << n) + q;
                    let want = p * a.pow(count(q, n)) + iterate(step, q, n);
                    check(iterate(step, x, n) == want, || format!("odd identity a={a} n={n} p={p} q={q}"))?;
                    check(count(x, n) == count(q, n), || format!("odd counter a={a} n={n} p={p} q={q}"))?;
                }
            }
        }
    }
    // general orbit identity with the non-multiple counter
    for (a, b, d) in [(3u64, 1u64, 2u64), (2, 1, 3)] {
        let step = |n| f(a, b, d, n);
        let count = |q: u64, n: usize| (0..n).filter(|&i| iterate(step, q, i) % d != 0).count() as u32;
        for n in 0..=4usize {
            let dn = d.pow(n as u32);
            for p in 0..6u64 {
                for q in 0..dn {
                    let x = p * dn + q;
                    let want = p * (a * d).pow(count(q, n)) + iterate(step, q, n);
                    check(iterate(step, x, n) == want, || format!("identity a={a} d={d} n={n} p={p} q={q}"))?;
                    check(count(x, n) == count(q, n), || format!("counter a={a} d={d} n={n} p={p} q={q}"))?;
                }
            }
        }
    }
    Ok(())
}

/// Explicit powers, composed powers, closure sections and the oracle agree.
fn ac5() -> Outcome {
    for (a, b, d) in [(3u32, 1u32, 2u32), (5, 1, 2), (2, 1, 3)] {
        let map = MapSpec::general(a, b, d).unwrap();
        for n in 0..=5 {
            let report = check_power_equivalence(&map, n, 10_000).map_err(|e| e.to_string())?;
            check(report.passed(), || format!("{map} n={n}: {report:?}"))?;
            // and against the test oracle
            let p = explicit_power(&map, n).unwrap();
            let base = a * d;
            prefix_sweep(&p, base, 10_000, |k| {
                iterate(|x| f(a as u64, b as u64, d as u64, x), k, n)
            })?;
        }
        let closure = ClosureMachine::new(map).unwrap();
        for n in 0..=4 {
            let section = closure.section_export(n, DEFAULT_STATE_LIMIT).map_err(|e| e.to_string())?;
            let explicit = explicit_power(&map, n).unwrap();
            check(section.machine == explicit, || format!("{map}: section {n} differs"))?;
        }
        for n in 0..=8 {
            for k in 0..10_000u64 {
                let got = closure.eval_integer(&BigUint::from(k), n).map_err(|e| e.to_string())?;
                let want = iterate(|x| f(a as u64, b as u64, d as u64, x), k, n);
                check(big_u64(&got) == want, || format!("{map} n={n} k={k}: got {got}, want {want}"))?;
            }
        }
    }
    Ok(())
}

fn prefix_relation(p: &PrefixSeq, max_in: usize) -> BTreeSet<WordPair> {
    p.machine().to_transducer().enumerate_relation(max_in, max_in + 6)
}

fn suffix_relation(s: &SuffixSeq, max_in: usize) -> BTreeSet<WordPair> {
    s.to_transducer().enumerate_relation(max_in, max_in)
}

/// Quadratic products match the set operations on enumerated relations.
fn ac6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let len = 5;
    let mut pairs = 0;
    for round in 0..120 {
        let base = rng.gen_range(2..=3);
        let p = random_prefix(&mut rng, base, 4);
        let q = if round % 2 == 0 { random_prefix(&mut rng, base, 4) } else { mutate_prefix(&mut rng, &p) };
        let (rp, rq) = (prefix_relation(&p, len), prefix_relation(&q, len));
        let (np, nq) = (p.num_states(), q.num_states());

        let comp = prefix_compose(&p, &q).map_err(|e| e.to_string())?;
        let rq_long = q.machine().to_transducer().enumerate_relation(len + 2, len + 8);
        check(prefix_relation(&comp, len) == compose_relations(&rp, &rq_long), || {
            format!("prefix compose round {round}")
        })?;
        let inter = prefix_intersect(&p, &q).map_err(|e| e.to_string())?;
        let want: BTreeSet<_> = rp.intersection(&rq).cloned().collect();
        check(prefix_relation(&inter, len) == want, || format!("prefix intersect round {round}"))?;
        let diff = prefix_difference(&p, &q).map_err(|e| e.to_string())?;
        let want: BTreeSet<_> = rp.difference(&rq).cloned().collect();
        check(prefix_relation(&diff, len) == want, || format!("prefix difference round {round}"))?;
        check(
            comp.num_states() <= np * nq && inter.num_states() <= np * nq && diff.num_states() <= np * nq + np,
            || format!("prefix state bound round {round}"),
        )?;

        let s = random_suffix(&mut rng, base, 4);
        let t = if round % 2 == 0 { random_suffix(&mut rng, base, 4) } else { mutate_suffix(&mut rng, &s) };
        let (rs, rt) = (suffix_relation(&s, len), suffix_relation(&t, len));
        let (ns, nt) = (s.num_states(), t.num_states());
        let comp = suffix_compose(&s, &t).map_err(|e| e.to_string())?;
        check(comp.is_initial_epsilon_output(), || format!("suffix compose shape round {round}"))?;
        check(suffix_relation(&comp, len) == compose_relations(&rs, &rt), || {
            format!("suffix compose round {round}")
        })?;
        let inter = suffix_intersect(&s, &t).map_err(|e| e.to_string())?;
        let want: BTreeSet<_> = rs.intersection(&rt).cloned().collect();
        check(suffix_relation(&inter, len) == want, || format!("suffix intersect round {round}"))?;
        let diff = suffix_difference(&s, &t).map_err(|e| e.to_string())?;
        let want: BTreeSet<_> = rs.difference(&rt).cloned().collect();
        check(suffix_relation(&diff, len) == want, || format!("suffix difference round {round}"))?;
        check(
            comp.num_states() <= ns * nt && inter.num_states() <= ns * nt && diff.num_states() <= ns * nt + ns,
            || format!("suffix state bound round {round}"),
        )?;
        pairs += 2;
    }
    check(pairs >= 200, || format!("only {pairs} pairs"))
}

/// Fixed points of f^3 (Collatz) and f'^2 (accelerated) with witnesses.
fn ac7() -> Outcome {
    let cases = [
        (MapSpec::General(FabdParams::collatz()), 3usize, vec![0u64, 1, 2, 4]),
        (MapSpec::accelerated(3, 1).unwrap(), 2, vec![0, 1, 2]),
    ];
    for (map, n, want) in cases {
        let m = ClosureMachine::new(map).unwrap();
        let found = m.find_cycles(n, 100, 12).map_err(|e| e.to_string())?;
        let ks: Vec<u64> = found.iter().map(|c| big_u64(&c.k)).collect();
        check(ks == want, || format!("{map}: fixed points {ks:?}"))?;
        let oracle: Vec<u64> = (0..100)
            .filter(|&k| {
                let step = |x| match map {
                    MapSpec::General(p) => f(p.a as u64, p.b as u64, p.d as u64, x),
                    MapSpec::Accelerated { a, b } => f_accel(a as u64, b as u64, x),
                };
                iterate(step, k, n) == k
            })
            .collect();
        check(ks == oracle, || format!("{map}: oracle fixed points {oracle:?}"))?;
        for c in &found {
            let w = c.witness.as_ref().ok_or_else(|| format!("{map}: no witness for {}", c.k))?;
            // input uv, output 0^|v| u, terminal v
            let mut uv = w.u.digits().to_vec();
            uv.extend_from_slice(w.v.digits());
            let mut out = vec![0; w.v.len()];
            out.extend_from_slice(w.u.digits());
            check(w.input.digits() == uv.as_slice() && w.output.digits() == out.as_slice(), || {
                format!("{map}: malformed witness for {}", c.k)
            })?;
            check(m.terminal(w.end_state.digits()).unwrap() == w.v, || {
                format!("{map}: terminal mismatch for {}", c.k)
            })?;
            check(msd_value(w.input.digits(), map.base()) == big_u64(&c.k), || {
                format!("{map}: witness input does not encode {}", c.k)
            })?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("AC1", "accelerated 5n+1 cube: 423 -> 02404, 113 -> 354, state 100 -> 04", Duration::from_secs(1), ac1),
        ("AC2", "division by 8 in base 5: 8 states, 40 arrows; builders agree", Duration::from_secs(1), ac2),
        ("AC3", "Collatz prefix/suffix/accelerated sweeps vs oracle", Duration::from_secs(5), ac3),
        ("AC4", "path/arithmetic lemmas, division composition, orbit identities", Duration::from_secs(10), ac4),
        ("AC5", "explicit = composed = closure section = oracle", Duration::from_secs(30), ac5),
        ("AC6", "random product constructions vs set operations", Duration::from_secs(10), ac6),
        ("AC7", "cycle probe fixed points with circularity witnesses", Duration::from_secs(1), ac7),
    ];
    let mut failed = 0;
    for (id, what, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, elapsed <= budget) {
            (Ok(()), true) => "PASS".to_owned(),
            (Ok(()), false) => format!("FAIL (over budget {budget:?})"),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("{id} {verdict} {what} [{:.3}s]", elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
