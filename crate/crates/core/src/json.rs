//! JSON interchange for all machine kinds.
//!
//! ```json
//! { "kind": "prefix", "input_base": 6, "output_base": 6,
//!   "states": ["0", "1"], "initial": ["0"], "final": ["0", "1"],
//!   "transitions": [["0", 0, "0", "0"], ...],
//!   "terminal": { "0": "", "1": "4" } }
//! ```
//!
//! General and suffix machines use a digit or `null` (ε) for each label.
//! Sequential and prefix machines use digit strings for outputs and carry
//! their terminal words in `"terminal"`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};

use crate::automata::{StateId, Transducer};
use crate::error::{Error, Result};
use crate::sequential::{SequentialBuilder, SequentialTransducer};
use crate::synchronized::{PrefixSeq, SuffixBuilder, SuffixSeq};
use crate::word::{format_digits, Digit, DigitWord};

pub(crate) fn biguint_as_string<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub(crate) fn biguints_as_strings<S: Serializer>(ns: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ns.iter().map(BigUint::to_string))
}

impl Serialize for DigitWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_digit_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MachineKind {
    Transducer,
    Sequential,
    Prefix,
    Suffix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutLabel {
    Letter(Digit),
    Word(String),
}

pub type TransitionDoc = (String, Option<Digit>, Option<OutLabel>, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineDoc {
    pub kind: MachineKind,
    pub input_base: u32,
    pub output_base: u32,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    #[serde(rename = "final", default)]
    pub finals: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub terminal: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Transducer(Transducer),
    Sequential(SequentialTransducer),
    Prefix(PrefixSeq),
    Suffix(SuffixSeq),
}

fn sequential_doc(kind: MachineKind, m: &SequentialTransducer) -> MachineDoc {
    let name = |q: StateId| m.name(q).to_owned();
    let mut terminal = BTreeMap::new();
    let mut finals = Vec::new();
    for q in m.states() {
        if let Some(w) = m.terminal(q) {
            finals.push(name(q));
            terminal.insert(name(q), format_digits(w, m.output_base()));
        }
    }
    MachineDoc {
        kind,
        input_base: m.input_base(),
        output_base: m.output_base(),
        states: m.names().to_vec(),
        initial: vec![name(m.initial())],
        finals,
        transitions: m
            .transitions()
            .map(|(p, c, out, q)| {
                (
                    name(p),
                    Some(c),
                    Some(OutLabel::Word(format_digits(out, m.output_base()))),
                    name(q),
                )
            })
            .collect(),
        terminal,
    }
}

impl Machine {
    pub fn kind(&self) -> MachineKind {
        match self {
            Machine::Transducer(_) => MachineKind::Transducer,
            Machine::Sequential(_) => MachineKind::Sequential,
            Machine::Prefix(_) => MachineKind::Prefix,
            Machine::Suffix(_) => MachineKind::Suffix,
        }
    }

    pub fn to_doc(&self) -> MachineDoc {
        match self {
            Machine::Transducer(t) => {
                let name = |q: StateId| t.name(q).to_owned();
                MachineDoc {
                    kind: MachineKind::Transducer,
                    input_base: t.input_base(),
                    output_base: t.output_base(),
                    states: t.names().to_vec(),
                    initial: t.initial().iter().map(|&q| name(q)).collect(),
                    finals: t.finals().iter().map(|&q| name(q)).collect(),
                    transitions: t
                        .transitions()
                        .iter()
                        .map(|tr| (name(tr.source), tr.input, tr.output.map(OutLabel::Letter), name(tr.target)))
                        .collect(),
                    terminal: BTreeMap::new(),
                }
            }
            Machine::Sequential(m) => sequential_doc(MachineKind::Sequential, m),
            Machine::Prefix(p) => sequential_doc(MachineKind::Prefix, p.machine()),
            Machine::Suffix(s) => {
                let name = |q: StateId| s.name(q).to_owned();
                MachineDoc {
                    kind: MachineKind::Suffix,
                    input_base: s.input_base(),
                    output_base: s.output_base(),
                    states: s.names().to_vec(),
                    initial: vec![name(s.initial())],
                    finals: s.states().filter(|&q| s.is_final(q)).map(name).collect(),
                    transitions: s
                        .transitions()
                        .map(|(p, c, out, q)| (name(p), Some(c), out.map(OutLabel::Letter), name(q)))
                        .collect(),
                    terminal: BTreeMap::new(),
                }
            }
        }
    }

    /// Validates and rebuilds a machine from its document.
    pub fn from_doc(doc: &MachineDoc) -> Result<Machine> {
        let mut index = HashMap::new();
        for (k, s) in doc.states.iter().enumerate() {
            if index.insert(s.as_str(), StateId(k)).is_some() {
                return Err(Error::DuplicateState(s.clone()));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownState(s.to_owned()));
        let single_initial = || -> Result<StateId> {
            match doc.initial.as_slice() {
                [one] => lookup(one),
                _ => Err(Error::InvalidParams(format!(
                    "{:?} machines need exactly one initial state",
                    doc.kind
                ))),
            }
        };
        let letter = |label: &Option<OutLabel>| -> Result<Option<Digit>> {
            match label {
                None => Ok(None),
                Some(OutLabel::Letter(c)) => Ok(Some(*c)),
                Some(OutLabel::Word(w)) => match DigitWord::parse(w, doc.output_base)?.digits() {
                    [] => Ok(None),
                    [c] => Ok(Some(*c)),
                    _ => Err(Error::MalformedWord(w.clone())),
                },
            }
        };
        let input = |c: Option<Digit>| c.ok_or_else(|| Error::InvalidParams("epsilon input in a deterministic machine".into()));
        match doc.kind {
            MachineKind::Transducer => {
                let mut t = Transducer::new(doc.input_base, doc.output_base)?;
                for s in &doc.states {
                    t.add_state(s.clone());
                }
                for s in &doc.initial {
                    t.set_initial(lookup(s)?);
                }
                for s in &doc.finals {
                    t.set_final(lookup(s)?);
                }
                for (p, a, b, q) in &doc.transitions {
                    t.add_transition(lookup(p)?, *a, letter(b)?, lookup(q)?)?;
                }
                Ok(Machine::Transducer(t))
            }
            MachineKind::Sequential | MachineKind::Prefix => {
                let mut builder = SequentialBuilder::with_capacity(doc.input_base, doc.output_base, doc.states.len())?;
                for s in &doc.states {
                    builder.add_state(s.clone());
                }
                for (p, a, b, q) in &doc.transitions {
                    let out = match b {
                        None => Vec::new(),
                        Some(OutLabel::Letter(c)) => vec![*c],
                        Some(OutLabel::Word(w)) => DigitWord::parse(w, doc.output_base)?.into_digits(),
                    };
                    builder.add_transition(lookup(p)?, input(*a)?, out, lookup(q)?)?;
                }
                for s in &doc.finals {
                    let w = doc.terminal.get(s).map_or("", String::as_str);
                    builder.set_terminal(lookup(s)?, DigitWord::parse(w, doc.output_base)?.into_digits())?;
                }
                for (s, w) in &doc.terminal {
                    if !doc.finals.contains(s) {
                        builder.set_terminal(lookup(s)?, DigitWord::parse(w, doc.output_base)?.into_digits())?;
                    }
                }
                let m = builder.build(single_initial()?);
                if doc.kind == MachineKind::Prefix {
                    Ok(Machine::Prefix(PrefixSeq::new(m)?))
                } else {
                    Ok(Machine::Sequential(m))
                }
            }
            MachineKind::Suffix => {
                let mut builder = SuffixBuilder::new(doc.input_base, doc.output_base)?;
                for s in &doc.states {
                    builder.add_state(s.clone());
                }
                for s in &doc.finals {
                    builder.set_final(lookup(s)?);
                }
                for (p, a, b, q) in &doc.transitions {
                    builder.add_transition(lookup(p)?, input(*a)?, letter(b)?, lookup(q)?)?;
                }
                Ok(Machine::Suffix(builder.build(single_initial()?)?))
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc())?)
    }

    pub fn from_json(text: &str) -> Result<Machine> {
        Machine::from_doc(&serde_json::from_str(text)?)
    }
}
