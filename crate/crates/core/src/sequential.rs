//! Sequential transducers: one initial state, input-deterministic
//! transitions labelled by a letter and an output word, and a partial
//! terminal function appending a word on acceptance.

use std::collections::BTreeSet;

use crate::automata::{StateId, Transducer};
use crate::error::{Error, Result};
use crate::word::{check_base, Digit, DigitWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqEdge {
    pub output: Vec<Digit>,
    pub target: StateId,
}

/// Input-deterministic machine with word outputs and a terminal function.
///
/// Transitions are stored densely by `(state, input digit)`, so determinism
/// holds by construction; [`SequentialBuilder`] rejects conflicting arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequentialTransducer {
    names: Vec<String>,
    initial: StateId,
    edges: Vec<Option<SeqEdge>>,
    terminal: Vec<Option<Vec<Digit>>>,
    input_base: u32,
    output_base: u32,
}

#[derive(Clone, Debug)]
pub struct SequentialBuilder {
    names: Vec<String>,
    edges: Vec<Option<SeqEdge>>,
    terminal: Vec<Option<Vec<Digit>>>,
    input_base: u32,
    output_base: u32,
}

impl SequentialBuilder {
    pub fn new(input_base: u32, output_base: u32) -> Result<Self> {
        check_base(input_base)?;
        check_base(output_base)?;
        Ok(SequentialBuilder {
            names: Vec::new(),
            edges: Vec::new(),
            terminal: Vec::new(),
            input_base,
            output_base,
        })
    }

    pub fn with_capacity(input_base: u32, output_base: u32, states: usize) -> Result<Self> {
        let mut b = SequentialBuilder::new(input_base, output_base)?;
        b.names.reserve(states);
        b.edges.reserve(states * input_base as usize);
        b.terminal.reserve(states);
        Ok(b)
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        self.names.push(name.into());
        self.edges
            .extend(std::iter::repeat_n(None, self.input_base as usize));
        self.terminal.push(None);
        StateId(self.names.len() - 1)
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    fn check_state(&self, q: StateId) -> Result<()> {
        if q.0 < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{}", q.0)))
        }
    }

    fn check_output(&self, word: &[Digit]) -> Result<()> {
        match word.iter().find(|&&c| c >= self.output_base) {
            Some(&c) => Err(Error::DigitOutOfRange {
                digit: c,
                base: self.output_base,
            }),
            None => Ok(()),
        }
    }

    /// Adds `source -input/output-> target`. Re-adding the same arrow is a
    /// no-op; a different arrow on the same `(source, input)` is an error.
    pub fn add_transition(
        &mut self,
        source: StateId,
        input: Digit,
        output: Vec<Digit>,
        target: StateId,
    ) -> Result<()> {
        self.check_state(source)?;
        self.check_state(target)?;
        if input >= self.input_base {
            return Err(Error::DigitOutOfRange {
                digit: input,
                base: self.input_base,
            });
        }
        self.check_output(&output)?;
        let slot = &mut self.edges[source.0 * self.input_base as usize + input as usize];
        let edge = SeqEdge { output, target };
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

    pub fn set_terminal(&mut self, q: StateId, word: Vec<Digit>) -> Result<()> {
        self.check_state(q)?;
        self.check_output(&word)?;
        self.terminal[q.0] = Some(word);
        Ok(())
    }

    pub fn build(self, initial: StateId) -> SequentialTransducer {
        assert!(initial.0 < self.names.len(), "initial state out of range");
        SequentialTransducer {
            names: self.names,
            initial,
            edges: self.edges,
            terminal: self.terminal,
            input_base: self.input_base,
            output_base: self.output_base,
        }
    }
}

impl SequentialTransducer {
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

    pub fn input_base(&self) -> u32 {
        self.input_base
    }

    pub fn output_base(&self) -> u32 {
        self.output_base
    }

    pub fn edge(&self, q: StateId, input: Digit) -> Option<&SeqEdge> {
        if input >= self.input_base {
            return None;
        }
        self.edges[q.0 * self.input_base as usize + input as usize].as_ref()
    }

    pub fn terminal(&self, q: StateId) -> Option<&[Digit]> {
        self.terminal[q.0].as_deref()
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.terminal[q.0].is_some()
    }

    /// All arrows as `(source, input, output, target)`, ordered by source
    /// then input.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Digit, &[Digit], StateId)> + '_ {
        let base = self.input_base as usize;
        self.edges.iter().enumerate().filter_map(move |(k, e)| {
            e.as_ref()
                .map(|e| (StateId(k / base), (k % base) as Digit, e.output.as_slice(), e.target))
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_input_complete(&self) -> bool {
        self.edges.iter().all(Option::is_some)
    }

    /// Follows the unique path from `from` reading `input`; returns the
    /// concatenated outputs and the goal state.
    pub fn run_from(&self, from: StateId, input: &[Digit]) -> Option<(Vec<Digit>, StateId)> {
        let mut q = from;
        let mut out = Vec::with_capacity(input.len());
        for &c in input {
            let e = self.edge(q, c)?;
            out.extend_from_slice(&e.output);
            q = e.target;
        }
        Some((out, q))
    }

    /// The realized function: outputs of the input path followed by the
    /// terminal word of its goal; `None` outside the domain.
    pub fn apply(&self, input: &[Digit]) -> Option<DigitWord> {
        let (mut out, q) = self.run_from(self.initial, input)?;
        out.extend_from_slice(self.terminal(q)?);
        Some(DigitWord::from_trusted(self.output_base, out))
    }

    /// Expands into a general transducer: multi-letter outputs become
    /// epsilon-input chains, terminal words lead to one fresh final state.
    pub fn to_transducer(&self) -> Transducer {
        let mut t = Transducer::new(self.input_base, self.output_base).expect("valid bases");
        for name in &self.names {
            t.add_state(name.clone());
        }
        t.set_initial(self.initial);
        let mut sink = None;
        let mut fresh = 0usize;
        let mut chain = |t: &mut Transducer,
                         from: StateId,
                         input: Option<Digit>,
                         word: &[Digit],
                         to: StateId| {
            let mut at = from;
            let mut first_input = input;
            let last = word.len().saturating_sub(1);
            if word.is_empty() {
                t.add_transition(at, first_input, None, to).expect("valid");
                return;
            }
            for (k, &c) in word.iter().enumerate() {
                let next = if k == last {
                    to
                } else {
                    fresh += 1;
                    t.add_state(format!("·{fresh}"))
                };
                t.add_transition(at, first_input.take(), Some(c), next).expect("valid");
                at = next;
            }
        };
        for (p, c, out, q) in self.transitions() {
            chain(&mut t, p, Some(c), out, q);
        }
        for q in self.states() {
            match self.terminal(q) {
                Some([]) => t.set_final(q),
                Some(word) => {
                    let f = *sink.get_or_insert_with(|| {
                        let f = t.add_state("⊤");
                        t.set_final(f);
                        f
                    });
                    chain(&mut t, q, None, word, f);
                }
                None => {}
            }
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
    pub fn prune_unreachable(&self) -> SequentialTransducer {
        let keep: Vec<StateId> = self.reachable().into_iter().collect();
        let mut index = vec![None; self.names.len()];
        let mut b = SequentialBuilder::new(self.input_base, self.output_base).expect("valid");
        for &q in &keep {
            index[q.0] = Some(b.add_state(self.names[q.0].clone()));
        }
        for &q in &keep {
            let nq = index[q.0].expect("kept");
            for c in 0..self.input_base {
                if let Some(e) = self.edge(q, c) {
                    let target = index[e.target.0].expect("reachable");
                    b.add_transition(nq, c, e.output.clone(), target).expect("valid");
                }
            }
            if let Some(w) = self.terminal(q) {
                b.set_terminal(nq, w.to_vec()).expect("valid");
            }
        }
        b.build(index[self.initial.0].expect("initial kept"))
    }

    pub(crate) fn from_parts(
        names: Vec<String>,
        initial: StateId,
        edges: Vec<Option<SeqEdge>>,
        terminal: Vec<Option<Vec<Digit>>>,
        input_base: u32,
        output_base: u32,
    ) -> SequentialTransducer {
        debug_assert_eq!(edges.len(), names.len() * input_base as usize);
        debug_assert_eq!(terminal.len(), names.len());
        SequentialTransducer {
            names,
            initial,
            edges,
            terminal,
            input_base,
            output_base,
        }
    }
}

/// `(p -a/u-> q ∧ p -a/v-> r) ⟹ (u = v ∧ q = r)`.
pub fn check_input_deterministic<O: PartialEq>(transitions: &[(StateId, Digit, O, StateId)]) -> bool {
    let mut sorted: Vec<&(StateId, Digit, O, StateId)> = transitions.iter().collect();
    sorted.sort_by_key(|t| (t.0, t.1));
    sorted
        .windows(2)
        .all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1) || (w[0].2 == w[1].2 && w[0].3 == w[1].3))
}

/// Every state of `0..num_states` has an arrow for every digit below `base`.
pub fn check_input_complete<O>(
    num_states: usize,
    transitions: &[(StateId, Digit, O, StateId)],
    base: u32,
) -> bool {
    let mut seen = vec![false; num_states * base as usize];
    for (p, c, _, _) in transitions {
        if p.0 < num_states && *c < base {
            seen[p.0 * base as usize + *c as usize] = true;
        }
    }
    seen.into_iter().all(|x| x)
}

/// Composition realizing `apply(second, apply(first, u))`.
///
/// Product states `(p, p')` use index `p * |Q'| + p'`. Each output word of
/// `first` is replayed through `second`; the terminal word of `(q, p')` is
/// the replay of `ω(q)` from `p'` followed by `ω'` of the landing state.
pub fn compose_sequential(
    first: &SequentialTransducer,
    second: &SequentialTransducer,
) -> Result<SequentialTransducer> {
    if first.output_base != second.input_base {
        return Err(Error::IncompatibleAlphabets {
            left: first.output_base,
            right: second.input_base,
        });
    }
    let n2 = second.num_states();
    let base = first.input_base as usize;
    let total = first.num_states() * n2;
    let mut names = Vec::with_capacity(total);
    let mut edges = Vec::with_capacity(total * base);
    let mut terminal = Vec::with_capacity(total);
    for p in first.states() {
        for p2 in second.states() {
            names.push(format!("({},{})", first.name(p), second.name(p2)));
            for c in 0..first.input_base {
                let edge = first.edge(p, c).and_then(|e| {
                    let (v, q2) = second.run_from(p2, &e.output)?;
                    Some(SeqEdge {
                        output: v,
                        target: StateId(e.target.0 * n2 + q2.0),
                    })
                });
                edges.push(edge);
            }
            let term = first.terminal(p).and_then(|w| {
                let (mut v, q2) = second.run_from(p2, w)?;
                v.extend_from_slice(second.terminal(q2)?);
                Some(v)
            });
            terminal.push(term);
        }
    }
    Ok(SequentialTransducer::from_parts(
        names,
        StateId(first.initial.0 * n2 + second.initial.0),
        edges,
        terminal,
        first.input_base,
        second.output_base,
    ))
}

/// One-state identity machine with empty terminal word.
pub fn identity_sequential(base: u32) -> Result<SequentialTransducer> {
    let mut b = SequentialBuilder::new(base, base)?;
    let q = b.add_state("ε");
    for c in 0..base {
        b.add_transition(q, c, vec![c], q)?;
    }
    b.set_terminal(q, vec![])?;
    Ok(b.build(q))
}
