//! Positional encodings of naturals as digit words.
//!
//! `[c_n..c_0]_a` reads the least significant digit on the right
//! ([`DigitOrder::MsdFirst`]); the reverse representation reads it on the
//! left ([`DigitOrder::LsdFirst`]). Zero is encoded by the empty word.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::automata::WordPair;
use crate::error::{Error, Result};
use crate::word::{Digit, DigitWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DigitOrder {
    /// Most significant digit first: `[u]_a`.
    MsdFirst,
    /// Least significant digit first: the reverse representation.
    LsdFirst,
}

fn check_numeral_base(base: u32) -> Result<()> {
    if base < 2 {
        return Err(Error::InvalidParams(format!(
            "numeral base must be at least 2, got {base}"
        )));
    }
    Ok(())
}

/// Canonical LSD-first digits (no trailing zeros).
fn lsd_digits(n: &BigUint, base: u32) -> Vec<Digit> {
    let mut out = Vec::new();
    if let Some(mut small) = n.to_u64() {
        let base = u64::from(base);
        while small > 0 {
            out.push((small % base) as Digit);
            small /= base;
        }
        return out;
    }
    let big_base = BigUint::from(base);
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&big_base);
        out.push(r.to_u32().expect("remainder below base"));
        rest = q;
    }
    out
}

pub fn encode_msd(n: &BigUint, base: u32) -> Result<DigitWord> {
    check_numeral_base(base)?;
    let mut digits = lsd_digits(n, base);
    digits.reverse();
    Ok(DigitWord::from_trusted(base, digits))
}

pub fn encode_lsd(n: &BigUint, base: u32) -> Result<DigitWord> {
    check_numeral_base(base)?;
    Ok(DigitWord::from_trusted(base, lsd_digits(n, base)))
}

/// `[u]_base`; leading zeros are ignored.
pub fn decode_msd(digits: &[Digit], base: u32) -> Result<BigUint> {
    check_numeral_base(base)?;
    let mut acc = BigUint::zero();
    let mut small: u64 = 0;
    let mut use_small = true;
    for &c in digits {
        if c >= base {
            return Err(Error::DigitOutOfRange { digit: c, base });
        }
        if use_small {
            match small
                .checked_mul(u64::from(base))
                .and_then(|v| v.checked_add(u64::from(c)))
            {
                Some(v) => {
                    small = v;
                    continue;
                }
                None => {
                    use_small = false;
                    acc = BigUint::from(small);
                }
            }
        }
        acc = acc * base + c;
    }
    Ok(if use_small { BigUint::from(small) } else { acc })
}

/// Reverse representation: `decode_lsd(u) = decode_msd(reverse(u))`.
pub fn decode_lsd(digits: &[Digit], base: u32) -> Result<BigUint> {
    let reversed: Vec<Digit> = digits.iter().rev().copied().collect();
    decode_msd(&reversed, base)
}

pub fn decode(digits: &[Digit], base: u32, order: DigitOrder) -> Result<BigUint> {
    match order {
        DigitOrder::MsdFirst => decode_msd(digits, base),
        DigitOrder::LsdFirst => decode_lsd(digits, base),
    }
}

pub fn encode(n: &BigUint, base: u32, order: DigitOrder) -> Result<DigitWord> {
    match order {
        DigitOrder::MsdFirst => encode_msd(n, base),
        DigitOrder::LsdFirst => encode_lsd(n, base),
    }
}

/// MSD-first encoding left-padded with zeros to exactly `len` digits.
/// Fails when the canonical encoding is already longer.
pub fn encode_msd_padded(n: &BigUint, base: u32, len: usize) -> Result<DigitWord> {
    let canonical = encode_msd(n, base)?;
    if canonical.len() > len {
        return Err(Error::InvariantViolation(format!(
            "{n} needs {} digits in base {base}, more than {len}",
            canonical.len()
        )));
    }
    let mut digits = vec![0; len - canonical.len()];
    digits.extend_from_slice(canonical.digits());
    Ok(DigitWord::from_trusted(base, digits))
}

/// LSD-first word of exactly `len` digits for `n < base^len`.
pub fn encode_lsd_padded(n: u64, base: u32, len: usize) -> Vec<Digit> {
    let mut out = Vec::with_capacity(len);
    let mut rest = n;
    for _ in 0..len {
        out.push((rest % u64::from(base)) as Digit);
        rest /= u64::from(base);
    }
    debug_assert_eq!(rest, 0, "{n} does not fit in {len} digits of base {base}");
    out
}

/// Small LSD-first decode used for state words (values below the state limit).
pub fn lsd_value(digits: &[Digit], base: u32) -> u64 {
    digits
        .iter()
        .rev()
        .fold(0u64, |acc, &c| acc * u64::from(base) + u64::from(c))
}

/// Lifts a word relation to a relation on naturals, decoding each component
/// in its own base with the given reading order.
pub fn lift_relation<'a, I>(pairs: I, order: DigitOrder) -> Result<BTreeSet<(BigUint, BigUint)>>
where
    I: IntoIterator<Item = &'a WordPair>,
{
    pairs
        .into_iter()
        .map(|pair| {
            Ok((
                decode(pair.input.digits(), pair.input.base(), order)?,
                decode(pair.output.digits(), pair.output.base(), order)?,
            ))
        })
        .collect()
}
