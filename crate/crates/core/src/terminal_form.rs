//! Terminal form of a general transducer.
//!
//! Epsilon-input transitions are folded away: an arrow `p -a/vb-> q` exists
//! whenever `p -ε/v->* r -a/b-> q`, and the terminal language of `q` is
//! `{ v | q -ε/v->* f, f final }`. Both kinds of `v`-languages are kept as
//! small automata over the epsilon-input subgraph of the source machine,
//! since an output loop makes them infinite.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::automata::{OptLetter, StateId, Transducer, WordPair};
use crate::word::{Digit, DigitWord};

/// `{ v | start -ε/v->* r, r ∈ accept }` in the epsilon-input subgraph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EpsLanguage {
    pub start: StateId,
    pub accept: BTreeSet<StateId>,
}

/// `source -input/(prefix · last)-> target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TerminalTransition {
    pub source: StateId,
    pub input: Digit,
    pub prefix: EpsLanguage,
    pub last: OptLetter,
    pub target: StateId,
}

#[derive(Clone, Debug)]
pub struct TerminalForm {
    num_states: usize,
    initial: BTreeSet<StateId>,
    input_base: u32,
    output_base: u32,
    eps_edges: Vec<Vec<(OptLetter, StateId)>>,
    transitions: Vec<TerminalTransition>,
    terminal: Vec<Option<EpsLanguage>>,
}

fn eps_reach(eps_edges: &[Vec<(OptLetter, StateId)>], from: StateId) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::from([from]);
    let mut stack = vec![from];
    while let Some(q) = stack.pop() {
        for &(_, r) in &eps_edges[q.0] {
            if seen.insert(r) {
                stack.push(r);
            }
        }
    }
    seen
}

impl Transducer {
    pub fn to_terminal_form(&self) -> TerminalForm {
        let n = self.num_states();
        let mut eps_edges = vec![Vec::new(); n];
        let mut letter_edges: Vec<Vec<(Digit, OptLetter, StateId)>> = vec![Vec::new(); n];
        for t in self.transitions() {
            match t.input {
                None => eps_edges[t.source.0].push((t.output, t.target)),
                Some(a) => letter_edges[t.source.0].push((a, t.output, t.target)),
            }
        }
        let mut transitions = Vec::new();
        let mut terminal = vec![None; n];
        for p in self.states() {
            let reach = eps_reach(&eps_edges, p);
            // group the intermediate states r by the letter arrow they fire
            let mut grouped: BTreeMap<(Digit, OptLetter, StateId), BTreeSet<StateId>> = BTreeMap::new();
            for &r in &reach {
                for &(a, b, q) in &letter_edges[r.0] {
                    grouped.entry((a, b, q)).or_default().insert(r);
                }
            }
            for ((a, b, q), accept) in grouped {
                transitions.push(TerminalTransition {
                    source: p,
                    input: a,
                    prefix: EpsLanguage { start: p, accept },
                    last: b,
                    target: q,
                });
            }
            let finals: BTreeSet<StateId> = reach.intersection(self.finals()).copied().collect();
            if !finals.is_empty() {
                terminal[p.0] = Some(EpsLanguage {
                    start: p,
                    accept: finals,
                });
            }
        }
        TerminalForm {
            num_states: n,
            initial: self.initial().clone(),
            input_base: self.input_base(),
            output_base: self.output_base(),
            eps_edges,
            transitions,
            terminal,
        }
    }
}

impl TerminalForm {
    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn transitions(&self) -> &[TerminalTransition] {
        &self.transitions
    }

    /// `ω'(q)`, or `None` when no final state is epsilon-reachable.
    pub fn terminal_language(&self, q: StateId) -> Option<&EpsLanguage> {
        self.terminal[q.0].as_ref()
    }

    fn closure(&self, states: &mut BTreeSet<StateId>) {
        let mut stack: Vec<StateId> = states.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &(out, r) in &self.eps_edges[q.0] {
                if out.is_none() && states.insert(r) {
                    stack.push(r);
                }
            }
        }
    }

    pub fn contains(&self, lang: &EpsLanguage, word: &[Digit]) -> bool {
        let mut current = BTreeSet::from([lang.start]);
        self.closure(&mut current);
        for &c in word {
            let mut next = BTreeSet::new();
            for q in &current {
                for &(out, r) in &self.eps_edges[q.0] {
                    if out == Some(c) {
                        next.insert(r);
                    }
                }
            }
            self.closure(&mut next);
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        current.iter().any(|q| lang.accept.contains(q))
    }

    /// Words of `lang` of length at most `max_len`.
    pub fn words(&self, lang: &EpsLanguage, max_len: usize) -> BTreeSet<Vec<Digit>> {
        let mut seen: HashSet<(StateId, Vec<Digit>)> = HashSet::new();
        let mut queue = VecDeque::from([(lang.start, Vec::new())]);
        seen.insert((lang.start, Vec::new()));
        let mut out = BTreeSet::new();
        while let Some((q, w)) = queue.pop_front() {
            if lang.accept.contains(&q) {
                out.insert(w.clone());
            }
            for &(c, r) in &self.eps_edges[q.0] {
                if c.is_some() && w.len() >= max_len {
                    continue;
                }
                let mut w2 = w.clone();
                w2.extend(c);
                if seen.insert((r, w2.clone())) {
                    queue.push_back((r, w2));
                }
            }
        }
        out
    }

    /// Bounded relation of the terminal-form machine; equals the source
    /// machine's [`Transducer::enumerate_relation`] under the same bounds.
    pub fn enumerate_relation(&self, max_input_len: usize, max_output_len: usize) -> BTreeSet<WordPair> {
        let mut by_source: Vec<Vec<&TerminalTransition>> = vec![Vec::new(); self.num_states];
        for t in &self.transitions {
            by_source[t.source.0].push(t);
        }
        let mut relation = BTreeSet::new();
        let mut seen: HashSet<(StateId, Vec<Digit>, Vec<Digit>)> = HashSet::new();
        let mut queue: VecDeque<(StateId, Vec<Digit>, Vec<Digit>)> = self
            .initial
            .iter()
            .map(|&q| (q, Vec::new(), Vec::new()))
            .collect();
        while let Some((q, u, v)) = queue.pop_front() {
            if let Some(lang) = &self.terminal[q.0] {
                for w in self.words(lang, max_output_len - v.len()) {
                    let mut out = v.clone();
                    out.extend(w);
                    relation.insert(WordPair::new(
                        DigitWord::from_trusted(self.input_base, u.clone()),
                        DigitWord::from_trusted(self.output_base, out),
                    ));
                }
            }
            if u.len() >= max_input_len {
                continue;
            }
            for t in &by_source[q.0] {
                let room = max_output_len - v.len();
                let tail = usize::from(t.last.is_some());
                if room < tail {
                    continue;
                }
                for w in self.words(&t.prefix, room - tail) {
                    let mut u2 = u.clone();
                    u2.push(t.input);
                    let mut v2 = v.clone();
                    v2.extend(w);
                    v2.extend(t.last);
                    let next = (t.target, u2, v2);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        relation
    }
}
