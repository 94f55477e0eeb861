//! Oracle sweeps: run a machine on every input below a bound and compare
//! with the arithmetic definition.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{prefix_machine, suffix_fabd, MapSpec};
use crate::closure::ClosureMachine;
use crate::error::{Error, Result};
use crate::numerals::{decode_lsd, decode_msd, encode_lsd, encode_msd};
use crate::powers::explicit_power;
use crate::synchronized::{apply_suffix, PrefixSeq, SuffixSeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyKind {
    /// One-step prefix machine, most significant digit first.
    Prefix,
    /// One-step suffix machine, least significant digit first, base `d`.
    Suffix,
    /// Explicit n-th power.
    Power,
    /// Section `n` of the closure machine.
    Closure,
}

impl std::str::FromStr for VerifyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "prefix" => Ok(VerifyKind::Prefix),
            "suffix" => Ok(VerifyKind::Suffix),
            "power" => Ok(VerifyKind::Power),
            "closure" => Ok(VerifyKind::Closure),
            other => Err(format!("unknown verification kind {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub input: u64,
    pub expected: String,
    /// `None` when the machine rejected the input.
    pub got: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub kind: VerifyKind,
    pub map: MapSpec,
    pub n: usize,
    pub bound: u64,
    pub mismatches: Vec<Mismatch>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Trailing zeros enough to flush the carry of `n ↦ a·n + b` in base `d`:
/// `ceil(log_d a) + 2`.
pub fn default_pad_limit(d: u32, a: u32) -> usize {
    let mut digits = 0;
    let mut power: u64 = 1;
    while power < u64::from(a) {
        power *= u64::from(d.max(2));
        digits += 1;
    }
    digits + 2
}

pub fn eval_prefix_integer(p: &PrefixSeq, m: &BigUint, base: u32) -> Option<BigUint> {
    let u = encode_msd(m, base).ok()?;
    let v = p.apply(u.digits())?;
    decode_msd(v.digits(), base).ok()
}

pub fn eval_suffix_integer(s: &SuffixSeq, m: &BigUint, pad_limit: usize) -> Option<BigUint> {
    let base = s.input_base();
    let u = encode_lsd(m, base).ok()?;
    let v = apply_suffix(s, u.digits(), pad_limit)?;
    decode_lsd(v.digits(), base).ok()
}

fn sweep<F>(bound: u64, expected: impl Fn(&BigUint) -> BigUint + Sync, got: F) -> Vec<Mismatch>
where
    F: Fn(&BigUint) -> Option<BigUint> + Sync,
{
    let mut out: Vec<Mismatch> = (0..bound)
        .into_par_iter()
        .filter_map(|m| {
            let k = BigUint::from(m);
            let want = expected(&k);
            let have = got(&k);
            (have.as_ref() != Some(&want)).then(|| Mismatch {
                input: m,
                expected: want.to_string(),
                got: have.map(|v| v.to_string()),
            })
        })
        .collect();
    out.sort_by_key(|x| x.input);
    out
}

/// Compares the machine selected by `kind` with `f^n` on `0..bound`.
/// Prefix and suffix sweeps are one-step and ignore `n`.
pub fn verify(kind: VerifyKind, map: &MapSpec, n: usize, bound: u64) -> Result<VerifyReport> {
    let start = Instant::now();
    let steps = match kind {
        VerifyKind::Prefix | VerifyKind::Suffix => 1,
        VerifyKind::Power | VerifyKind::Closure => n,
    };
    let oracle = |k: &BigUint| map.iterate(k, steps);
    let mismatches = match kind {
        VerifyKind::Prefix => {
            let p = prefix_machine(map)?;
            sweep(bound, oracle, |k| eval_prefix_integer(&p, k, map.base()))
        }
        VerifyKind::Suffix => {
            let MapSpec::General(params) = *map else {
                return Err(Error::InvalidParams(
                    "suffix machines realize the general map only".into(),
                ));
            };
            let s = suffix_fabd(params)?;
            let pad = default_pad_limit(params.d, params.a);
            sweep(bound, oracle, |k| eval_suffix_integer(&s, k, pad))
        }
        VerifyKind::Power => {
            let p = explicit_power(map, n)?;
            sweep(bound, oracle, |k| eval_prefix_integer(&p, k, map.base()))
        }
        VerifyKind::Closure => {
            let m = ClosureMachine::new(*map)?;
            sweep(bound, oracle, |k| m.eval_integer(k, n).ok())
        }
    };
    Ok(VerifyReport {
        kind,
        map: *map,
        n: steps,
        bound,
        mismatches,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FabdParams;

    #[test]
    fn pad_defaults() {
        assert_eq!(default_pad_limit(2, 3), 4);
        assert_eq!(default_pad_limit(2, 4), 4);
        assert_eq!(default_pad_limit(10, 3), 3);
        assert_eq!(default_pad_limit(3, 1), 2);
    }

    #[test]
    fn small_sweeps_pass() {
        let c = MapSpec::General(FabdParams::collatz());
        for kind in [VerifyKind::Prefix, VerifyKind::Suffix, VerifyKind::Power, VerifyKind::Closure] {
            let r = verify(kind, &c, 2, 300).unwrap();
            assert!(r.passed(), "{kind:?}: {:?}", r.mismatches);
        }
        let accel = MapSpec::accelerated(3, 1).unwrap();
        assert!(verify(VerifyKind::Suffix, &accel, 1, 10).is_err());
    }

    #[test]
    fn wrong_machine_is_caught() {
        // the one-step machine compared against two steps
        let c = MapSpec::General(FabdParams::collatz());
        let p = prefix_machine(&c).unwrap();
        let bad = sweep(50, |k| c.iterate(k, 2), |k| eval_prefix_integer(&p, k, 6));
        assert!(!bad.is_empty());
    }
}
