//! Prefix and suffix sequential transducers and their quadratic
//! composition, intersection and difference products.
//!
//! A prefix machine is a letter-to-letter sequential machine whose terminal
//! function appends a word (length-increasing). A suffix machine has a final
//! state set instead, and may output nothing on its first transitions only
//! (length-decreasing).
//!
//! All products index the pair `(p, p')` as `p * |Q'| + p'`. The difference
//! constructions put the copy of `Q` first and the pairs after it.

use std::collections::BTreeSet;

use crate::automata::{OptLetter, StateId, Transducer};
use crate::error::{Error, Result};
use crate::sequential::{SeqEdge, SequentialTransducer};
use crate::word::{check_base, Digit, DigitWord};

/// Letter-to-letter sequential transducer with a terminal function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSeq(SequentialTransducer);

impl PrefixSeq {
    /// Checks that every transition outputs exactly one letter.
    pub fn new(machine: SequentialTransducer) -> Result<Self> {
        if let Some((p, c, out, _)) = machine.transitions().find(|t| t.2.len() != 1) {
            return Err(Error::NotLetterToLetter {
                state: machine.name(p).to_owned(),
                input: c,
                len: out.len(),
            });
        }
        Ok(PrefixSeq(machine))
    }

    pub fn machine(&self) -> &SequentialTransducer {
        &self.0
    }

    pub fn into_machine(self) -> SequentialTransducer {
        self.0
    }

    pub fn num_states(&self) -> usize {
        self.0.num_states()
    }

    pub fn apply(&self, input: &[Digit]) -> Option<DigitWord> {
        self.0.apply(input)
    }

    /// Letter output of the arrow on `(q, c)`.
    pub fn step(&self, q: StateId, c: Digit) -> Option<(Digit, StateId)> {
        self.0.edge(q, c).map(|e| (e.output[0], e.target))
    }
}

pub fn apply_prefix(p: &PrefixSeq, input: &[Digit]) -> Option<DigitWord> {
    p.apply(input)
}

fn check_same_bases(left: (u32, u32), right: (u32, u32)) -> Result<()> {
    if left.0 != right.0 {
        return Err(Error::IncompatibleAlphabets {
            left: left.0,
            right: right.0,
        });
    }
    if left.1 != right.1 {
        return Err(Error::IncompatibleAlphabets {
            left: left.1,
            right: right.1,
        });
    }
    Ok(())
}

/// Composition: letters pair through a shared middle letter; the terminal
/// word of `(q, p')` is the replay of `ω(q)` from `p'` followed by `ω'`.
pub fn prefix_compose(first: &PrefixSeq, second: &PrefixSeq) -> Result<PrefixSeq> {
    let (t, t2) = (first.machine(), second.machine());
    if t.output_base() != t2.input_base() {
        return Err(Error::IncompatibleAlphabets {
            left: t.output_base(),
            right: t2.input_base(),
        });
    }
    let n2 = t2.num_states();
    let total = t.num_states() * n2;
    let mut names = Vec::with_capacity(total);
    let mut edges = Vec::with_capacity(total * t.input_base() as usize);
    let mut terminal = Vec::with_capacity(total);
    for p in t.states() {
        for p2 in t2.states() {
            names.push(format!("({},{})", t.name(p), t2.name(p2)));
            for a in 0..t.input_base() {
                edges.push(first.step(p, a).and_then(|(b, q)| {
                    let (c, q2) = second.step(p2, b)?;
                    Some(SeqEdge {
                        output: vec![c],
                        target: StateId(q.0 * n2 + q2.0),
                    })
                }));
            }
            terminal.push(t.terminal(p).and_then(|w| {
                let (mut v, q2) = t2.run_from(p2, w)?;
                v.extend_from_slice(t2.terminal(q2)?);
                Some(v)
            }));
        }
    }
    Ok(PrefixSeq(SequentialTransducer::from_parts(
        names,
        StateId(t.initial().0 * n2 + t2.initial().0),
        edges,
        terminal,
        t.input_base(),
        t2.output_base(),
    )))
}

/// Synchronization product: arrows with identical labels; terminal word
/// defined where both terminal words exist and agree.
pub fn prefix_intersect(left: &PrefixSeq, right: &PrefixSeq) -> Result<PrefixSeq> {
    let (t, t2) = (left.machine(), right.machine());
    check_same_bases(
        (t.input_base(), t.output_base()),
        (t2.input_base(), t2.output_base()),
    )?;
    let n2 = t2.num_states();
    let total = t.num_states() * n2;
    let mut names = Vec::with_capacity(total);
    let mut edges = Vec::with_capacity(total * t.input_base() as usize);
    let mut terminal = Vec::with_capacity(total);
    for p in t.states() {
        for p2 in t2.states() {
            names.push(format!("({},{})", t.name(p), t2.name(p2)));
            for a in 0..t.input_base() {
                edges.push(match (left.step(p, a), right.step(p2, a)) {
                    (Some((b, q)), Some((b2, q2))) if b == b2 => Some(SeqEdge {
                        output: vec![b],
                        target: StateId(q.0 * n2 + q2.0),
                    }),
                    _ => None,
                });
            }
            terminal.push(match (t.terminal(p), t2.terminal(p2)) {
                (Some(w), Some(w2)) if w == w2 => Some(w.to_vec()),
                _ => None,
            });
        }
    }
    Ok(PrefixSeq(SequentialTransducer::from_parts(
        names,
        StateId(t.initial().0 * n2 + t2.initial().0),
        edges,
        terminal,
        t.input_base(),
        t.output_base(),
    )))
}

/// Difference over `Q ∪ (Q × Q')`: pairs follow both machines while their
/// labels agree and escape into the `Q` copy as soon as `right` has no arrow
/// with the same label. Unreachable states are kept.
pub fn prefix_difference(left: &PrefixSeq, right: &PrefixSeq) -> Result<PrefixSeq> {
    let (t, t2) = (left.machine(), right.machine());
    check_same_bases(
        (t.input_base(), t.output_base()),
        (t2.input_base(), t2.output_base()),
    )?;
    let n = t.num_states();
    let n2 = t2.num_states();
    let pair = |p: StateId, p2: StateId| StateId(n + p.0 * n2 + p2.0);
    let total = n + n * n2;
    let mut names = Vec::with_capacity(total);
    let mut edges = Vec::with_capacity(total * t.input_base() as usize);
    let mut terminal = Vec::with_capacity(total);
    for p in t.states() {
        names.push(t.name(p).to_owned());
        for a in 0..t.input_base() {
            edges.push(t.edge(p, a).cloned());
        }
        terminal.push(t.terminal(p).map(<[Digit]>::to_vec));
    }
    for p in t.states() {
        for p2 in t2.states() {
            names.push(format!("({},{})", t.name(p), t2.name(p2)));
            for a in 0..t.input_base() {
                edges.push(left.step(p, a).map(|(b, q)| match right.step(p2, a) {
                    Some((b2, q2)) if b2 == b => SeqEdge {
                        output: vec![b],
                        target: pair(q, q2),
                    },
                    _ => SeqEdge {
                        output: vec![b],
                        target: q,
                    },
                }));
            }
            terminal.push(t.terminal(p).and_then(|w| match t2.terminal(p2) {
                Some(w2) if w2 == w => None,
                _ => Some(w.to_vec()),
            }));
        }
    }
    Ok(PrefixSeq(SequentialTransducer::from_parts(
        names,
        pair(t.initial(), t2.initial()),
        edges,
        terminal,
        t.input_base(),
        t.output_base(),
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuffixEdge {
    pub output: OptLetter,
    pub target: StateId,
}

/// Input-deterministic machine with optional-letter outputs, a final state
/// set, and epsilon outputs only at the start of paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixSeq {
    names: Vec<String>,
    initial: StateId,
    finals: Vec<bool>,
    edges: Vec<Option<SuffixEdge>>,
    input_base: u32,
    output_base: u32,
}

#[derive(Clone, Debug)]
pub struct SuffixBuilder {
    names: Vec<String>,
    finals: Vec<bool>,
    edges: Vec<Option<SuffixEdge>>,
    input_base: u32,
    output_base: u32,
}

impl SuffixBuilder {
    pub fn new(input_base: u32, output_base: u32) -> Result<Self> {
        check_base(input_base)?;
        check_base(output_base)?;
        Ok(SuffixBuilder {
            names: Vec::new(),
            finals: Vec::new(),
            edges: Vec::new(),
            input_base,
            output_base,
        })
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        self.names.push(name.into());
        self.finals.push(false);
        self.edges
            .extend(std::iter::repeat_n(None, self.input_base as usize));
        StateId(self.names.len() - 1)
    }

    pub fn set_final(&mut self, q: StateId) {
        self.finals[q.0] = true;
    }

    pub fn add_transition(
        &mut self,
        source: StateId,
        input: Digit,
        output: OptLetter,
        target: StateId,
    ) -> Result<()> {
        for q in [source, target] {
            if q.0 >= self.names.len() {
                return Err(Error::UnknownState(format!("#{}", q.0)));
            }
        }
        if input >= self.input_base {
            return Err(Error::DigitOutOfRange {
                digit: input,
                base: self.input_base,
            });
        }
        if let Some(c) = output.filter(|&c| c >= self.output_base) {
            return Err(Error::DigitOutOfRange {
                digit: c,
                base: self.output_base,
            });
        }
        let edge = SuffixEdge { output, target };
        let slot = &mut self.edges[source.0 * self.input_base as usize + input as usize];
        match slot {
            Some(existing) if *existing != edge => Err(Error::NotInputDeterministic {
                state: self.names[source.0].clone(),
                input,
            }),
            _ => {
                *slot = Some(edge);
                Ok(())
            }
        }
    }

    /// Validates the initial-epsilon-output shape and freezes the machine.
    pub fn build(self, initial: StateId) -> Result<SuffixSeq> {
        if initial.0 >= self.names.len() {
            return Err(Error::UnknownState(format!("#{}", initial.0)));
        }
        let machine = SuffixSeq {
            names: self.names,
            initial,
            finals: self.finals,
            edges: self.edges,
            input_base: self.input_base,
            output_base: self.output_base,
        };
        machine.check_initial_epsilon_output()?;
        Ok(machine)
    }
}

impl SuffixSeq {
    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.names.len()).map(StateId)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q.0]
    }

    pub fn input_base(&self) -> u32 {
        self.input_base
    }

    pub fn output_base(&self) -> u32 {
        self.output_base
    }

    pub fn edge(&self, q: StateId, input: Digit) -> Option<SuffixEdge> {
        if input >= self.input_base {
            return None;
        }
        self.edges[q.0 * self.input_base as usize + input as usize]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Digit, OptLetter, StateId)> + '_ {
        let base = self.input_base as usize;
        self.edges.iter().enumerate().filter_map(move |(k, e)| {
            e.map(|e| (StateId(k / base), (k % base) as Digit, e.output, e.target))
        })
    }

    /// `-·/b→ -·/ε→ ⟹ b = ε` over all consecutive transition pairs.
    pub fn is_initial_epsilon_output(&self) -> bool {
        self.check_initial_epsilon_output().is_ok()
    }

    fn check_initial_epsilon_output(&self) -> Result<()> {
        let mut has_eps_out = vec![false; self.names.len()];
        for (p, _, out, _) in self.transitions() {
            if out.is_none() {
                has_eps_out[p.0] = true;
            }
        }
        for (_, _, out, q) in self.transitions() {
            if out.is_some() && has_eps_out[q.0] {
                return Err(Error::InitialEpsilonOutput(self.names[q.0].clone()));
            }
        }
        Ok(())
    }

    pub fn run_from(&self, from: StateId, input: &[Digit]) -> Option<(Vec<Digit>, StateId)> {
        let mut q = from;
        let mut out = Vec::with_capacity(input.len());
        for &c in input {
            let e = self.edge(q, c)?;
            out.extend(e.output);
            q = e.target;
        }
        Some((out, q))
    }

    /// Plain evaluation without padding.
    pub fn apply(&self, input: &[Digit]) -> Option<DigitWord> {
        let (out, q) = self.run_from(self.initial, input)?;
        self.is_final(q)
            .then(|| DigitWord::from_trusted(self.output_base, out))
    }

    pub fn to_transducer(&self) -> Transducer {
        let mut t = Transducer::new(self.input_base, self.output_base).expect("valid bases");
        for name in &self.names {
            t.add_state(name.clone());
        }
        t.set_initial(self.initial);
        for q in self.states().filter(|&q| self.is_final(q)) {
            t.set_final(q);
        }
        for (p, c, out, q) in self.transitions() {
            t.add_transition(p, Some(c), out, q).expect("valid");
        }
        t
    }

    pub fn reachable(&self) -> BTreeSet<StateId> {
        let mut seen = BTreeSet::from([self.initial]);
        let mut stack = vec![self.initial];
        while let Some(q) = stack.pop() {
            for c in 0..self.input_base {
                if let Some(e) = self.edge(q, c) {
                    if seen.insert(e.target) {
                        stack.push(e.target);
                    }
                }
            }
        }
        seen
    }

    /// Copy restricted to states reachable from the initial state.
    pub fn prune_unreachable(&self) -> SuffixSeq {
        let keep: Vec<StateId> = self.reachable().into_iter().collect();
        let mut index = vec![None; self.names.len()];
        let mut b = SuffixBuilder::new(self.input_base, self.output_base).expect("valid");
        for &q in &keep {
            let nq = b.add_state(self.names[q.0].clone());
            if self.is_final(q) {
                b.set_final(nq);
            }
            index[q.0] = Some(nq);
        }
        for (p, c, out, q) in self.transitions() {
            if let (Some(np), Some(nq)) = (index[p.0], index[q.0]) {
                b.add_transition(np, c, out, nq).expect("valid");
            }
        }
        b.build(index[self.initial.0].expect("initial kept"))
            .expect("sub-machine keeps the shape")
    }
}

/// Deterministic run that appends up to `pad_limit` zero digits to the
/// input until a final state is reached. LSD-first encodings are insensitive
/// to trailing zeros, so padding only flushes pending carries.
pub fn apply_suffix(s: &SuffixSeq, input: &[Digit], pad_limit: usize) -> Option<DigitWord> {
    let (mut out, mut q) = s.run_from(s.initial, input)?;
    let mut pads = 0;
    while !s.is_final(q) {
        if pads == pad_limit {
            return None;
        }
        let e = s.edge(q, 0)?;
        out.extend(e.output);
        q = e.target;
        pads += 1;
    }
    Some(DigitWord::from_trusted(s.output_base, out))
}

/// Composition: epsilon-output arrows of `first` advance alone; the other
/// arrows feed their output letter to `second`. Finals are `F × F'`.
pub fn suffix_compose(first: &SuffixSeq, second: &SuffixSeq) -> Result<SuffixSeq> {
    if first.output_base != second.input_base {
        return Err(Error::IncompatibleAlphabets {
            left: first.output_base,
            right: second.input_base,
        });
    }
    let n2 = second.num_states();
    let mut b = SuffixBuilder::new(first.input_base, second.output_base)?;
    for p in first.states() {
        for p2 in second.states() {
            let q = b.add_state(format!("({},{})", first.name(p), second.name(p2)));
            if first.is_final(p) && second.is_final(p2) {
                b.set_final(q);
            }
        }
    }
    for (p, a, out, q) in first.transitions() {
        for p2 in second.states() {
            let source = StateId(p.0 * n2 + p2.0);
            match out {
                None => b.add_transition(source, a, None, StateId(q.0 * n2 + p2.0))?,
                Some(c) => {
                    if let Some(e) = second.edge(p2, c) {
                        b.add_transition(source, a, e.output, StateId(q.0 * n2 + e.target.0))?;
                    }
                }
            }
        }
    }
    b.build(StateId(first.initial.0 * n2 + second.initial.0))
}

/// Synchronization product with finals `F × F'`.
pub fn suffix_intersect(left: &SuffixSeq, right: &SuffixSeq) -> Result<SuffixSeq> {
    check_same_bases(
        (left.input_base, left.output_base),
        (right.input_base, right.output_base),
    )?;
    let n2 = right.num_states();
    let mut b = SuffixBuilder::new(left.input_base, left.output_base)?;
    for p in left.states() {
        for p2 in right.states() {
            let q = b.add_state(format!("({},{})", left.name(p), right.name(p2)));
            if left.is_final(p) && right.is_final(p2) {
                b.set_final(q);
            }
        }
    }
    for (p, a, out, q) in left.transitions() {
        for p2 in right.states() {
            if let Some(e) = right.edge(p2, a).filter(|e| e.output == out) {
                b.add_transition(StateId(p.0 * n2 + p2.0), a, out, StateId(q.0 * n2 + e.target.0))?;
            }
        }
    }
    b.build(StateId(left.initial.0 * n2 + right.initial.0))
}

/// Difference over `Q ∪ (Q × Q')` with finals `F ∪ (F × (Q' − F'))`.
pub fn suffix_difference(left: &SuffixSeq, right: &SuffixSeq) -> Result<SuffixSeq> {
    check_same_bases(
        (left.input_base, left.output_base),
        (right.input_base, right.output_base),
    )?;
    let n = left.num_states();
    let n2 = right.num_states();
    let pair = |p: StateId, p2: StateId| StateId(n + p.0 * n2 + p2.0);
    let mut b = SuffixBuilder::new(left.input_base, left.output_base)?;
    for p in left.states() {
        let q = b.add_state(left.name(p).to_owned());
        if left.is_final(p) {
            b.set_final(q);
        }
    }
    for p in left.states() {
        for p2 in right.states() {
            let q = b.add_state(format!("({},{})", left.name(p), right.name(p2)));
            if left.is_final(p) && !right.is_final(p2) {
                b.set_final(q);
            }
        }
    }
    for (p, a, out, q) in left.transitions() {
        b.add_transition(p, a, out, q)?;
        for p2 in right.states() {
            let target = match right.edge(p2, a) {
                Some(e) if e.output == out => pair(q, e.target),
                _ => q,
            };
            b.add_transition(pair(p, p2), a, out, target)?;
        }
    }
    b.build(pair(left.initial, right.initial))
}
