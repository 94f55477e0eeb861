//! Digit words over `{0, .., base-1}`.

use std::fmt;

use crate::error::{Error, Result};

/// A single letter of a digit alphabet.
pub type Digit = u32;

/// A finite word of digits below `base`.
///
/// Words carry no reading convention; the numeral functions decide whether
/// the first digit is the most or the least significant one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitWord {
    digits: Vec<Digit>,
    base: u32,
}

impl DigitWord {
    pub fn new(base: u32, digits: Vec<Digit>) -> Result<Self> {
        check_base(base)?;
        if let Some(&digit) = digits.iter().find(|&&c| c >= base) {
            return Err(Error::DigitOutOfRange { digit, base });
        }
        Ok(DigitWord { digits, base })
    }

    pub fn empty(base: u32) -> Self {
        DigitWord {
            digits: Vec::new(),
            base,
        }
    }

    /// Builds a word without range checks. Callers guarantee `digits < base`.
    pub(crate) fn from_trusted(base: u32, digits: Vec<Digit>) -> Self {
        debug_assert!(digits.iter().all(|&c| c < base));
        DigitWord { digits, base }
    }

    /// Parses the textual form: one character per digit for bases up to 10,
    /// comma-separated numbers above. `""` and `"ε"` are the empty word.
    pub fn parse(text: &str, base: u32) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(DigitWord::empty(base));
        }
        let digits = if base <= 10 {
            text.chars()
                .map(|ch| ch.to_digit(10).ok_or_else(|| Error::MalformedWord(text.to_owned())))
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::MalformedWord(text.to_owned()))
                })
                .collect::<Result<Vec<_>>>()?
        };
        DigitWord::new(base, digits)
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<Digit> {
        self.digits
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut digits = self.digits.clone();
        digits.reverse();
        DigitWord {
            digits,
            base: self.base,
        }
    }

    /// Serialised form; the empty word becomes `""`.
    pub fn to_digit_string(&self) -> String {
        format_digits(&self.digits, self.base)
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.to_digit_string())
        }
    }
}

impl AsRef<[Digit]> for DigitWord {
    fn as_ref(&self) -> &[Digit] {
        &self.digits
    }
}

pub(crate) fn check_base(base: u32) -> Result<()> {
    if base == 0 {
        Err(Error::InvalidBase(base))
    } else {
        Ok(())
    }
}

/// Formats raw digits the same way [`DigitWord::to_digit_string`] does.
pub fn format_digits(digits: &[Digit], base: u32) -> String {
    if base <= 10 {
        digits
            .iter()
            .map(|&c| char::from_digit(c, 10).unwrap_or('?'))
            .collect()
    } else {
        digits
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Like [`format_digits`] but shows the empty word as `ε`.
pub fn display_digits(digits: &[Digit], base: u32) -> String {
    if digits.is_empty() {
        "ε".to_owned()
    } else {
        format_digits(digits, base)
    }
}
