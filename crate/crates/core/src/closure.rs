//! Lazy infinite prefix machine realizing every power of a map at once.
//!
//! States are words over `0..d`; the words of length `n` form section `n`,
//! a copy of the division by `d^n` whose initial state is `0^n`. Arrows are
//! computed on demand by cascading the input digit through `n` one-digit
//! division layers, so no arithmetic on `d^n` is needed. Terminal words are
//! defined by recursion on the word length.

use std::num::NonZeroUsize;
use std::sync::Mutex;

use lru::LruCache;
use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::MapSpec;
use crate::automata::StateId;
use crate::error::{Error, Result};
use crate::numerals::{decode_msd, encode_msd};
use crate::powers::{section_size, state_name, state_word};
use crate::sequential::SequentialBuilder;
use crate::synchronized::PrefixSeq;
use crate::word::{Digit, DigitWord};

/// Default number of memoized terminal words.
pub const DEFAULT_MEMO_BUDGET: usize = 1 << 20;

pub struct ClosureMachine {
    map: MapSpec,
    base: u32,
    divisor: u32,
    feed: Digit,
    memo: Mutex<LruCache<Vec<Digit>, Vec<Digit>>>,
}

impl std::fmt::Debug for ClosureMachine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosureMachine").field("map", &self.map).finish_non_exhaustive()
    }
}

impl ClosureMachine {
    pub fn new(map: MapSpec) -> Result<Self> {
        Self::with_memo_budget(map, DEFAULT_MEMO_BUDGET)
    }

    pub fn with_memo_budget(map: MapSpec, budget: usize) -> Result<Self> {
        map.check_prefix()?;
        let budget = NonZeroUsize::new(budget)
            .ok_or_else(|| Error::InvalidParams("memo budget must be positive".into()))?;
        Ok(ClosureMachine {
            map,
            base: map.base(),
            divisor: map.divisor(),
            feed: map.feed_digit(),
            memo: Mutex::new(LruCache::new(budget)),
        })
    }

    pub fn map(&self) -> &MapSpec {
        &self.map
    }

    /// Input/output digit base.
    pub fn base(&self) -> u32 {
        self.base
    }

    /// State digit base.
    pub fn divisor(&self) -> u32 {
        self.divisor
    }

    /// One arrow of the section `|x|`. Layer `k` solves
    /// `x_k·base + e = c·d + j`, keeps `j` and passes `c` to layer `k + 1`.
    pub fn step(&self, x: &[Digit], input: Digit) -> (Digit, Vec<Digit>) {
        let (base, d) = (u64::from(self.base), u64::from(self.divisor));
        let mut carry = u64::from(input);
        let next = x
            .iter()
            .map(|&xk| {
                let v = u64::from(xk) * base + carry;
                carry = v / d;
                (v % d) as Digit
            })
            .collect();
        (carry as Digit, next)
    }

    pub fn run(&self, from: &[Digit], input: &[Digit]) -> (Vec<Digit>, Vec<Digit>) {
        let mut state = from.to_vec();
        let mut out = Vec::with_capacity(input.len());
        for &e in input {
            let (c, next) = self.step(&state, e);
            out.push(c);
            state = next;
        }
        (out, state)
    }

    fn memo_get(&self, x: &[Digit]) -> Option<Vec<Digit>> {
        self.memo.lock().expect("memo lock").get(x).cloned()
    }

    /// `ω(ε) = ε`, `ω(0u) = ω(u)`, `ω(iu) = c·ω(v)` for `iu -feed/c→ 0v`.
    pub fn terminal(&self, x: &[Digit]) -> Result<DigitWord> {
        if let Some(&bad) = x.iter().find(|&&c| c >= self.divisor) {
            return Err(Error::DigitOutOfRange {
                digit: bad,
                base: self.divisor,
            });
        }
        // walk down the recursion, recording the emitted digit per level
        let mut chain: Vec<(Vec<Digit>, Option<Digit>)> = Vec::new();
        let mut current = x.to_vec();
        let mut tail = loop {
            if current.is_empty() {
                break Vec::new();
            }
            if let Some(hit) = self.memo_get(&current) {
                break hit;
            }
            if current[0] == 0 {
                let rest = current[1..].to_vec();
                chain.push((current, None));
                current = rest;
                continue;
            }
            let (c, next) = self.step(&current, self.feed);
            if next[0] != 0 {
                return Err(Error::InvariantViolation(format!(
                    "successor of {} on {} does not start with 0",
                    DigitWord::from_trusted(self.divisor, current),
                    self.feed
                )));
            }
            chain.push((current, Some(c)));
            current = next[1..].to_vec();
        };
        let mut memo = self.memo.lock().expect("memo lock");
        for (word, digit) in chain.into_iter().rev() {
            if let Some(c) = digit {
                tail.insert(0, c);
            }
            memo.put(word, tail.clone());
        }
        Ok(DigitWord::from_trusted(self.base, tail))
    }

    /// Output of the accepting path from `0^n` on `u`.
    pub fn eval_iterations(&self, u: &[Digit], n: usize) -> Result<DigitWord> {
        if let Some(&bad) = u.iter().find(|&&c| c >= self.base) {
            return Err(Error::DigitOutOfRange {
                digit: bad,
                base: self.base,
            });
        }
        let (mut out, end) = self.run(&vec![0; n], u);
        out.extend_from_slice(self.terminal(&end)?.digits());
        Ok(DigitWord::from_trusted(self.base, out))
    }

    /// `f^n(k)` through the machine.
    pub fn eval_integer(&self, k: &BigUint, n: usize) -> Result<BigUint> {
        let u = encode_msd(k, self.base)?;
        let v = self.eval_iterations(u.digits(), n)?;
        decode_msd(v.digits(), self.base)
    }

    /// Section `n` as a finite prefix machine, with the cross-section
    /// terminal arrows into section `n - 1`.
    pub fn section_export(&self, n: usize, limit: usize) -> Result<Section> {
        let size = section_size(self.divisor, n, limit)?;
        let d = self.divisor;
        let mut builder = SequentialBuilder::with_capacity(self.base, self.base, size)?;
        for k in 0..size {
            builder.add_state(state_name(k, d, n));
        }
        let index = |w: &[Digit]| w.iter().rev().fold(0usize, |v, &c| v * d as usize + c as usize);
        let mut cross = Vec::new();
        for k in 0..size {
            let x = state_word(k, d, n);
            for e in 0..self.base {
                let (c, y) = self.step(&x, e);
                builder.add_transition(StateId(k), e, vec![c], StateId(index(&y)))?;
            }
            builder.set_terminal(StateId(k), self.terminal(&x)?.into_digits())?;
            if n > 0 {
                let (label, target) = if x[0] == 0 {
                    (None, x[1..].to_vec())
                } else {
                    let (c, y) = self.step(&x, self.feed);
                    (Some(c), y[1..].to_vec())
                };
                cross.push(CrossEdge {
                    source: StateId(k),
                    label,
                    target: StateId(index(&target)),
                });
            }
        }
        Ok(Section {
            n,
            machine: PrefixSeq::new(builder.build(StateId(0)))?,
            cross,
        })
    }

    /// Fixed points of `f^n` below `bound`, each with its orbit and a
    /// path-form witness of length at most `max_witness_len` when one exists.
    pub fn find_cycles(&self, n: usize, bound: u64, max_witness_len: usize) -> Result<Vec<CycleReport>> {
        if n == 0 || bound == 0 {
            return Err(Error::InvalidParams("cycle probe needs n >= 1 and bound >= 1".into()));
        }
        let mut found = Vec::new();
        for k in 0..bound {
            let k = BigUint::from(k);
            if self.eval_integer(&k, n)? != k {
                continue;
            }
            let orbit = crate::arith::orbit(&self.map, &k, n);
            let witness = self.circularity_witness(&k, n, max_witness_len)?;
            found.push(CycleReport { k, orbit, witness });
        }
        Ok(found)
    }

    /// Looks for `0^n -uv/0^{|v|}u→ x` with `v` the terminal word of `x`,
    /// where `uv` is `k` in the machine base with leading zeros allowed.
    pub fn circularity_witness(&self, k: &BigUint, n: usize, max_len: usize) -> Result<Option<Witness>> {
        let canonical = encode_msd(k, self.base)?.into_digits();
        for pad in 0..=max_len.saturating_sub(canonical.len()) {
            let mut input = vec![0; pad];
            input.extend_from_slice(&canonical);
            let (output, end) = self.run(&vec![0; n], &input);
            let v = self.terminal(&end)?.into_digits();
            if v.len() > input.len() {
                continue;
            }
            let split = input.len() - v.len();
            let (u, tail) = input.split_at(split);
            let mut expected = vec![0; v.len()];
            expected.extend_from_slice(u);
            if tail == v.as_slice() && output == expected {
                return Ok(Some(Witness {
                    input: DigitWord::from_trusted(self.base, input.clone()),
                    output: DigitWord::from_trusted(self.base, output),
                    end_state: DigitWord::from_trusted(self.divisor, end),
                    u: DigitWord::from_trusted(self.base, u.to_vec()),
                    v: DigitWord::from_trusted(self.base, v),
                }));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossEdge {
    pub source: StateId,
    /// `None` for `0u → u`, the emitted digit for `iu → v`.
    pub label: Option<Digit>,
    /// State of the section below.
    pub target: StateId,
}

#[derive(Clone, Debug)]
pub struct Section {
    pub n: usize,
    pub machine: PrefixSeq,
    pub cross: Vec<CrossEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub input: DigitWord,
    pub output: DigitWord,
    pub end_state: DigitWord,
    pub u: DigitWord,
    pub v: DigitWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    #[serde(serialize_with = "crate::json::biguint_as_string")]
    pub k: BigUint,
    #[serde(serialize_with = "crate::json::biguints_as_strings")]
    pub orbit: Vec<BigUint>,
    pub witness: Option<Witness>,
}
