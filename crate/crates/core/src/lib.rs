//! Finite-state transducers over digit alphabets, and the sequential
//! machines realizing the maps `n ↦ n/d` (when `d | n`), `n ↦ an + b`
//! (otherwise), their n-th powers and their composition closure.
//!
//! ```
//! use num_bigint::BigUint;
//! use syncfn_core::{explicit_power_accel, decode_msd};
//!
//! let cube = explicit_power_accel(5, 1, 3).unwrap();
//! let out = cube.apply(&[4, 2, 3]).unwrap();
//! assert_eq!(out.to_digit_string(), "02404");
//! assert_eq!(decode_msd(out.digits(), 5).unwrap(), BigUint::from(354u32));
//! ```

pub mod arith;
pub mod automata;
pub mod closure;
pub mod error;
pub mod json;
pub mod layout;
pub mod numerals;
pub mod powers;
pub mod render;
pub mod samples;
pub mod sequential;
pub mod synchronized;
pub mod terminal_form;
pub mod verify;
pub mod word;

pub use arith::{
    carry_machine, division_sync, division_sync_with, division_transitions_by_equation,
    division_transitions_incremental, mult_add_sync, mult_sync, oracle_f, oracle_f_accel, orbit,
    orbit_table, prefix_accel, prefix_fabd, prefix_identity_case, prefix_machine, suffix_fabd,
    DivisionBuilder, FabdParams, MapSpec, OrbitRow,
};
pub use automata::{compose_relations, OptLetter, StateId, Transducer, Transition, WordPair};
pub use closure::{ClosureMachine, CrossEdge, CycleReport, Section, Witness};
pub use error::{Error, Result};
pub use json::{Machine, MachineDoc, MachineKind};
pub use layout::{Layout, RenderSpec};
pub use numerals::{
    decode, decode_lsd, decode_msd, encode, encode_lsd, encode_msd, lift_relation, DigitOrder,
};
pub use powers::{
    check_power_equivalence, composed_power, division_power, division_power_with_limit, eta,
    explicit_power, explicit_power_accel, explicit_power_with_limit, mu, PowerReport,
    DEFAULT_STATE_LIMIT,
};
pub use render::{render_cone, render_sequential, render_suffix, render_transducer};
pub use sequential::{
    check_input_complete, check_input_deterministic, compose_sequential, identity_sequential,
    SequentialBuilder, SequentialTransducer,
};
pub use synchronized::{
    apply_prefix, apply_suffix, prefix_compose, prefix_difference, prefix_intersect,
    suffix_compose, suffix_difference, suffix_intersect, PrefixSeq, SuffixBuilder, SuffixSeq,
};
pub use terminal_form::{EpsLanguage, TerminalForm};
pub use verify::{default_pad_limit, verify, Mismatch, VerifyKind, VerifyReport};
pub use word::{Digit, DigitWord};
