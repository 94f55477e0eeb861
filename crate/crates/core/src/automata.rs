//! General finite transducers: 2-tape automata whose transitions carry a
//! pair of optional letters.
//!
//! Every machine value is immutable once built. The relational operations
//! (inverse, mirror, union, composition, finite powers) each produce a new
//! machine; [`Transducer::enumerate_relation`] is the brute-force reference
//! that the rest of the crate is checked against.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::word::{check_base, Digit, DigitWord};

/// Index of a state inside one machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A letter or the empty word.
pub type OptLetter = Option<Digit>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub input: OptLetter,
    pub output: OptLetter,
    pub target: StateId,
}

/// One element `(u, v)` of a realized relation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordPair {
    pub input: DigitWord,
    pub output: DigitWord,
}

impl WordPair {
    pub fn new(input: DigitWord, output: DigitWord) -> Self {
        WordPair { input, output }
    }
}

/// A finite transducer `(Q, I, F, T)` over `(↓input_base, ↓output_base)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    names: Vec<String>,
    initial: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    transitions: BTreeSet<Transition>,
    input_base: u32,
    output_base: u32,
}

impl Transducer {
    pub fn new(input_base: u32, output_base: u32) -> Result<Self> {
        check_base(input_base)?;
        check_base(output_base)?;
        Ok(Transducer {
            names: Vec::new(),
            initial: BTreeSet::new(),
            finals: BTreeSet::new(),
            transitions: BTreeSet::new(),
            input_base,
            output_base,
        })
    }

    /// The one-state machine with loops `c/c` for every digit; `T^0`.
    pub fn identity(base: u32) -> Result<Self> {
        let mut t = Transducer::new(base, base)?;
        let q = t.add_state("ε");
        t.set_initial(q);
        t.set_final(q);
        for c in 0..base {
            t.add_transition(q, Some(c), Some(c), q)?;
        }
        Ok(t)
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        self.names.push(name.into());
        StateId(self.names.len() - 1)
    }

    pub fn set_initial(&mut self, q: StateId) {
        assert!(q.0 < self.names.len(), "initial state out of range");
        self.initial.insert(q);
    }

    pub fn set_final(&mut self, q: StateId) {
        assert!(q.0 < self.names.len(), "final state out of range");
        self.finals.insert(q);
    }

    pub fn add_transition(
        &mut self,
        source: StateId,
        input: OptLetter,
        output: OptLetter,
        target: StateId,
    ) -> Result<()> {
        for q in [source, target] {
            if q.0 >= self.names.len() {
                return Err(Error::UnknownState(format!("#{}", q.0)));
            }
        }
        if let Some(c) = input.filter(|&c| c >= self.input_base) {
            return Err(Error::DigitOutOfRange {
                digit: c,
                base: self.input_base,
            });
        }
        if let Some(c) = output.filter(|&c| c >= self.output_base) {
            return Err(Error::DigitOutOfRange {
                digit: c,
                base: self.output_base,
            });
        }
        self.transitions.insert(Transition {
            source,
            input,
            output,
            target,
        });
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.names.len()).map(StateId)
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name).map(StateId)
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn input_base(&self) -> u32 {
        self.input_base
    }

    pub fn output_base(&self) -> u32 {
        self.output_base
    }

    pub(crate) fn outgoing(&self) -> Vec<Vec<Transition>> {
        let mut out = vec![Vec::new(); self.names.len()];
        for t in &self.transitions {
            out[t.source.0].push(*t);
        }
        out
    }

    /// All `(u, v)` with `|u| <= max_input_len`, `|v| <= max_output_len`
    /// labelling an accepting path.
    ///
    /// Breadth-first search over `(state, consumed input, produced output)`;
    /// visited configurations are remembered so epsilon cycles terminate.
    pub fn enumerate_relation(&self, max_input_len: usize, max_output_len: usize) -> BTreeSet<WordPair> {
        type Config = (StateId, Vec<Digit>, Vec<Digit>);
        let outgoing = self.outgoing();
        let mut seen: HashSet<Config> = HashSet::new();
        let mut queue: VecDeque<Config> = VecDeque::new();
        for &q in &self.initial {
            let start = (q, Vec::new(), Vec::new());
            if seen.insert(start.clone()) {
                queue.push_back(start);
            }
        }
        let mut relation = BTreeSet::new();
        while let Some((q, u, v)) = queue.pop_front() {
            if self.finals.contains(&q) {
                relation.insert(WordPair::new(
                    DigitWord::from_trusted(self.input_base, u.clone()),
                    DigitWord::from_trusted(self.output_base, v.clone()),
                ));
            }
            for t in &outgoing[q.0] {
                if t.input.is_some() && u.len() >= max_input_len {
                    continue;
                }
                if t.output.is_some() && v.len() >= max_output_len {
                    continue;
                }
                let mut u2 = u.clone();
                u2.extend(t.input);
                let mut v2 = v.clone();
                v2.extend(t.output);
                let next = (t.target, u2, v2);
                if !seen.contains(&next) {
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        relation
    }

    /// Exchanges input and output on every transition.
    pub fn inverse(&self) -> Transducer {
        Transducer {
            names: self.names.clone(),
            initial: self.initial.clone(),
            finals: self.finals.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    source: t.source,
                    input: t.output,
                    output: t.input,
                    target: t.target,
                })
                .collect(),
            input_base: self.output_base,
            output_base: self.input_base,
        }
    }

    /// Reverses every arrow and swaps initial and final states.
    pub fn mirror(&self) -> Transducer {
        Transducer {
            names: self.names.clone(),
            initial: self.finals.clone(),
            finals: self.initial.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    source: t.target,
                    input: t.input,
                    output: t.output,
                    target: t.source,
                })
                .collect(),
            input_base: self.input_base,
            output_base: self.output_base,
        }
    }

    /// Disjoint union. Clashing names of `other` get a `'` suffix.
    pub fn union(&self, other: &Transducer) -> Result<Transducer> {
        if self.input_base != other.input_base || self.output_base != other.output_base {
            return Err(Error::IncompatibleAlphabets {
                left: self.input_base,
                right: other.input_base,
            });
        }
        let mut out = self.clone();
        let offset = self.names.len();
        let taken: HashSet<&str> = self.names.iter().map(String::as_str).collect();
        for name in &other.names {
            let mut fresh = name.clone();
            while taken.contains(fresh.as_str()) || out.names.contains(&fresh) {
                fresh.push('\'');
            }
            out.names.push(fresh);
        }
        let shift = |q: StateId| StateId(q.0 + offset);
        out.initial.extend(other.initial.iter().map(|&q| shift(q)));
        out.finals.extend(other.finals.iter().map(|&q| shift(q)));
        out.transitions.extend(other.transitions.iter().map(|t| Transition {
            source: shift(t.source),
            input: t.input,
            output: t.output,
            target: shift(t.target),
        }));
        Ok(out)
    }

    /// Product composition realizing `[[self]] ∘ [[other]]` (apply `self`
    /// first). Product state `(p, p')` has index `p * |Q'| + p'`.
    pub fn compose(&self, other: &Transducer) -> Result<Transducer> {
        self.compose_named(other, |a, b| format!("({a},{b})"))
    }

    fn compose_named(
        &self,
        other: &Transducer,
        name_of: impl Fn(&str, &str) -> String,
    ) -> Result<Transducer> {
        if self.output_base != other.input_base {
            return Err(Error::IncompatibleAlphabets {
                left: self.output_base,
                right: other.input_base,
            });
        }
        let n2 = other.names.len();
        let pair = |p: StateId, p2: StateId| StateId(p.0 * n2 + p2.0);
        let mut names = Vec::with_capacity(self.names.len() * n2);
        for a in &self.names {
            for b in &other.names {
                names.push(name_of(a, b));
            }
        }
        let mut transitions = BTreeSet::new();
        for t in self.transitions.iter().filter(|t| t.output.is_none()) {
            for p2 in other.states() {
                transitions.insert(Transition {
                    source: pair(t.source, p2),
                    input: t.input,
                    output: None,
                    target: pair(t.target, p2),
                });
            }
        }
        for t2 in other.transitions.iter().filter(|t| t.input.is_none()) {
            for p in self.states() {
                transitions.insert(Transition {
                    source: pair(p, t2.source),
                    input: None,
                    output: t2.output,
                    target: pair(p, t2.target),
                });
            }
        }
        let other_out = other.outgoing();
        for t in self.transitions.iter().filter(|t| t.output.is_some()) {
            for p2 in other.states() {
                for t2 in other_out[p2.0].iter().filter(|t2| t2.input == t.output) {
                    transitions.insert(Transition {
                        source: pair(t.source, p2),
                        input: t.input,
                        output: t2.output,
                        target: pair(t.target, t2.target),
                    });
                }
            }
        }
        let product = |a: &BTreeSet<StateId>, b: &BTreeSet<StateId>| {
            a.iter()
                .flat_map(|&p| b.iter().map(move |&p2| pair(p, p2)))
                .collect::<BTreeSet<_>>()
        };
        Ok(Transducer {
            names,
            initial: product(&self.initial, &other.initial),
            finals: product(&self.finals, &other.finals),
            transitions,
            input_base: self.input_base,
            output_base: other.output_base,
        })
    }

    /// `T^n`: `T^0` is the identity machine and `T^{k+1} = T^k ∘ T`.
    /// Tuple states get flattened names (`"011"` for digit-named states).
    pub fn power(&self, n: usize) -> Result<Transducer> {
        if self.input_base != self.output_base {
            return Err(Error::IncompatibleAlphabets {
                left: self.output_base,
                right: self.input_base,
            });
        }
        let compact = self.names.iter().all(|name| name.chars().count() == 1);
        let mut acc = Transducer::identity(self.input_base)?;
        for step in 0..n {
            acc = acc.compose_named(self, |a, b| {
                if step == 0 {
                    b.to_owned()
                } else if compact {
                    format!("{a}{b}")
                } else {
                    format!("{a},{b}")
                }
            })?;
        }
        Ok(acc)
    }

    /// States reachable from an initial state.
    pub fn reachable(&self) -> BTreeSet<StateId> {
        let outgoing = self.outgoing();
        let mut seen: BTreeSet<StateId> = self.initial.clone();
        let mut stack: Vec<StateId> = seen.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for t in &outgoing[q.0] {
                if seen.insert(t.target) {
                    stack.push(t.target);
                }
            }
        }
        seen
    }
}

/// Relational composition of two enumerated relations.
pub fn compose_relations(left: &BTreeSet<WordPair>, right: &BTreeSet<WordPair>) -> BTreeSet<WordPair> {
    left.iter()
        .flat_map(|x| {
            right
                .iter()
                .filter(move |y| y.input.digits() == x.output.digits())
                .map(move |y| WordPair::new(x.input.clone(), y.output.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{rotation_t0, swap_t1};

    fn word(base: u32, digits: &[Digit]) -> DigitWord {
        DigitWord::new(base, digits.to_vec()).unwrap()
    }

    fn pair(u: &[Digit], v: &[Digit]) -> WordPair {
        WordPair::new(word(2, u), word(2, v))
    }

    fn all_words(base: u32, max_len: usize) -> Vec<Vec<Digit>> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for c in 0..base {
                    let mut w2: Vec<Digit> = w.clone();
                    w2.push(c);
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn t0_rotates_first_letter() {
        let rel = rotation_t0().enumerate_relation(3, 3);
        assert!(rel.contains(&pair(&[0, 1], &[1, 0])));
        assert!(rel.contains(&pair(&[1, 0], &[0, 1])));
        // xu -> ux for every nonempty word of length <= 3
        for u in all_words(2, 3).into_iter().filter(|u| !u.is_empty()) {
            let mut v = u[1..].to_vec();
            v.push(u[0]);
            assert!(rel.contains(&pair(&u, &v)), "{u:?}");
        }
        assert_eq!(rel.len(), 2 + 4 + 8);
    }

    #[test]
    fn empty_path_acceptance() {
        let mut t = Transducer::new(2, 2).unwrap();
        let q = t.add_state("q");
        t.set_initial(q);
        t.set_final(q);
        let rel = t.enumerate_relation(2, 2);
        assert_eq!(rel.into_iter().collect::<Vec<_>>(), vec![pair(&[], &[])]);
    }

    #[test]
    fn t1_relation_up_to_two() {
        let rel = swap_t1().enumerate_relation(2, 2);
        let expected: BTreeSet<WordPair> = [
            pair(&[], &[]),
            pair(&[0], &[1]),
            pair(&[1], &[0]),
            pair(&[0, 0], &[1, 1]),
            pair(&[0, 1], &[1, 0]),
            pair(&[1, 0], &[0, 1]),
            pair(&[1, 1], &[0, 0]),
        ]
        .into_iter()
        .collect();
        assert_eq!(rel, expected);
    }

    #[test]
    fn inverse_is_involution_and_t1_self_inverse() {
        let t0 = rotation_t0();
        assert_eq!(t0.inverse().inverse(), t0);
        assert_eq!(swap_t1().inverse(), swap_t1());
        let converse: BTreeSet<WordPair> = t0
            .enumerate_relation(4, 4)
            .into_iter()
            .map(|p| WordPair::new(p.output, p.input))
            .collect();
        assert_eq!(t0.inverse().enumerate_relation(4, 4), converse);
    }

    #[test]
    fn mirror_reverses_words() {
        let t0 = rotation_t0();
        assert_eq!(t0.mirror().mirror(), t0);
        let mirrored: BTreeSet<WordPair> = t0
            .enumerate_relation(4, 4)
            .into_iter()
            .map(|p| WordPair::new(p.input.reversed(), p.output.reversed()))
            .collect();
        assert_eq!(t0.mirror().enumerate_relation(4, 4), mirrored);
    }

    #[test]
    fn mirror_single_arrow() {
        let mut t = Transducer::new(2, 2).unwrap();
        let p = t.add_state("p");
        let q = t.add_state("q");
        t.set_initial(p);
        t.set_final(q);
        t.add_transition(p, Some(0), Some(1), q).unwrap();
        let m = t.mirror();
        assert_eq!(m.initial().iter().copied().collect::<Vec<_>>(), vec![q]);
        assert_eq!(m.finals().iter().copied().collect::<Vec<_>>(), vec![p]);
        let arrows: Vec<_> = m.transitions().iter().copied().collect();
        assert_eq!(
            arrows,
            vec![Transition {
                source: q,
                input: Some(0),
                output: Some(1),
                target: p
            }]
        );
    }

    #[test]
    fn compose_with_identity_and_swap_twice() {
        let t0 = rotation_t0();
        let id = Transducer::identity(2).unwrap();
        let c = t0.compose(&id).unwrap();
        assert_eq!(c.num_states(), t0.num_states() * id.num_states());
        assert_eq!(c.enumerate_relation(4, 4), t0.enumerate_relation(4, 4));

        let t1 = swap_t1();
        let tt = t1.compose(&t1).unwrap();
        let ident = id.enumerate_relation(4, 4);
        assert_eq!(tt.enumerate_relation(4, 4), ident);
    }

    #[test]
    fn compose_rejects_base_mismatch() {
        let a = Transducer::identity(2).unwrap();
        let b = Transducer::identity(3).unwrap();
        assert!(matches!(a.compose(&b), Err(Error::IncompatibleAlphabets { .. })));
    }

    #[test]
    fn powers_of_t1_alternate() {
        let t1 = swap_t1();
        let id = Transducer::identity(2).unwrap().enumerate_relation(3, 3);
        let swap = t1.enumerate_relation(3, 3);
        for n in 0..=2 {
            assert_eq!(t1.power(2 * n).unwrap().enumerate_relation(3, 3), id);
            assert_eq!(t1.power(2 * n + 1).unwrap().enumerate_relation(3, 3), swap);
        }
        assert_eq!(t1.power(3).unwrap().num_states(), 1);
    }

    #[test]
    fn power_zero_is_identity_and_one_is_copy() {
        let t0 = rotation_t0();
        let p0 = t0.power(0).unwrap();
        for u in all_words(2, 4) {
            let rel = p0.enumerate_relation(4, 4);
            assert!(rel.contains(&WordPair::new(word(2, &u), word(2, &u))));
        }
        assert_eq!(t0.power(1).unwrap().enumerate_relation(4, 4), t0.enumerate_relation(4, 4));
    }

    #[test]
    fn power_names_are_flattened() {
        let mut t = Transducer::new(2, 2).unwrap();
        let z = t.add_state("0");
        let o = t.add_state("1");
        t.set_initial(z);
        t.set_final(o);
        t.add_transition(z, Some(1), Some(1), o).unwrap();
        let p = t.power(3).unwrap();
        assert_eq!(p.num_states(), 8);
        assert_eq!(p.name(StateId(3)), "011");
    }

    #[test]
    fn power_additivity() {
        let t0 = rotation_t0();
        for m in 0..=2 {
            for n in 0..=(4 - m).min(2) {
                let lhs = t0.power(m + n).unwrap().enumerate_relation(3, 3);
                let rhs = t0
                    .power(m)
                    .unwrap()
                    .compose(&t0.power(n).unwrap())
                    .unwrap()
                    .enumerate_relation(3, 3);
                assert_eq!(lhs, rhs, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn union_neutral_and_idempotent() {
        let t0 = rotation_t0();
        let empty = Transducer::new(2, 2).unwrap();
        let rel = t0.enumerate_relation(4, 4);
        assert_eq!(t0.union(&empty).unwrap().enumerate_relation(4, 4), rel);
        let tt = t0.union(&t0).unwrap();
        assert_eq!(tt.enumerate_relation(4, 4), rel);
        let mut unique = tt.names().to_vec();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), tt.num_states());
    }
}
