use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Longest outcome string handled; outcomes are packed into a `u64`.
pub const MAX_MEASURED: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Trit {
    Zero,
    One,
    Wild,
}

/// A measurement outcome over `len` measured qubits.
///
/// Bit 0 of the string (the first measured qubit) is the most significant bit
/// of `index`, so numeric order on `index` is lexicographic order on strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome {
    len: usize,
    index: u64,
}

impl Outcome {
    pub fn new(index: u64, len: usize) -> Result<Self> {
        if len > MAX_MEASURED || (len < 64 && index >> len != 0) {
            return Err(Error::InvalidParameter(format!(
                "outcome index {index} does not fit in {len} bits"
            )));
        }
        Ok(Outcome { len, index })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.len() > MAX_MEASURED {
            return Err(Error::InvalidParameter("outcome too long".into()));
        }
        let index = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Ok(Outcome { len: bits.len(), index })
    }

    pub fn zeros(len: usize) -> Self {
        Outcome { len, index: 0 }
    }

    #[inline]
    pub fn index(&self) -> u64 {
        self.index
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Value of measured bit `i` (0-based, string order).
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        (self.index >> (self.len - 1 - i)) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.bit(i)).collect()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Pattern(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Outcome::from_bits(&bits)
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An event over the measured bits: each position is `0`, `1` or a wildcard
/// that marginalises that bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OutcomePattern {
    trits: Vec<Trit>,
}

impl OutcomePattern {
    pub fn new(trits: Vec<Trit>) -> Result<Self> {
        if trits.len() > MAX_MEASURED {
            return Err(Error::InvalidParameter("pattern too long".into()));
        }
        Ok(OutcomePattern { trits })
    }

    pub fn all_wild(len: usize) -> Self {
        OutcomePattern {
            trits: vec![Trit::Wild; len],
        }
    }

    /// The full (wildcard-free) pattern of `outcome`.
    pub fn from_outcome(outcome: Outcome) -> Self {
        Self::prefix(outcome, outcome.len(), outcome.len())
    }

    /// The first `fixed` bits of `outcome`, wildcards on the remaining
    /// `len - fixed` positions.
    pub fn prefix(outcome: Outcome, fixed: usize, len: usize) -> Self {
        let trits = (0..len)
            .map(|i| {
                if i < fixed {
                    if outcome.bit(i) {
                        Trit::One
                    } else {
                        Trit::Zero
                    }
                } else {
                    Trit::Wild
                }
            })
            .collect();
        OutcomePattern { trits }
    }

    /// Pattern whose first `bits.len()` positions are fixed to `bits`.
    pub fn from_prefix_bits(bits: &[bool], len: usize) -> Self {
        let trits = (0..len)
            .map(|i| match bits.get(i) {
                Some(true) => Trit::One,
                Some(false) => Trit::Zero,
                None => Trit::Wild,
            })
            .collect();
        OutcomePattern { trits }
    }

    pub fn len(&self) -> usize {
        self.trits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trits.is_empty()
    }

    pub fn trits(&self) -> &[Trit] {
        &self.trits
    }

    pub fn get(&self, i: usize) -> Trit {
        self.trits[i]
    }

    pub fn set(&mut self, i: usize, t: Trit) {
        self.trits[i] = t;
    }

    /// Number of fixed (non-wildcard) positions.
    pub fn fixed_count(&self) -> usize {
        self.trits.iter().filter(|&&t| t != Trit::Wild).count()
    }

    pub fn has_wildcard(&self) -> bool {
        self.trits.contains(&Trit::Wild)
    }

    /// `(mask, value)` such that an outcome index matches iff
    /// `index & mask == value`.
    pub fn mask_value(&self) -> (u64, u64) {
        let k = self.len();
        let mut mask = 0u64;
        let mut value = 0u64;
        for (i, t) in self.trits.iter().enumerate() {
            let bit = 1u64 << (k - 1 - i);
            match t {
                Trit::Zero => mask |= bit,
                Trit::One => {
                    mask |= bit;
                    value |= bit;
                }
                Trit::Wild => {}
            }
        }
        (mask, value)
    }

    pub fn matches(&self, outcome: &Outcome) -> bool {
        let (mask, value) = self.mask_value();
        outcome.len() == self.len() && outcome.index() & mask == value
    }

    pub fn check_len(&self, k: usize) -> Result<()> {
        if self.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for OutcomePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.trits {
            f.write_str(match t {
                Trit::Zero => "0",
                Trit::One => "1",
                Trit::Wild => "*",
            })?;
        }
        Ok(())
    }
}

impl FromStr for OutcomePattern {
    type Err = Error;

    /// Strings over `{0, 1, *}`; `•` is accepted as a wildcard too.
    fn from_str(s: &str) -> Result<Self> {
        let trits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(Trit::Zero),
                '1' => Ok(Trit::One),
                '*' | '•' => Ok(Trit::Wild),
                _ => Err(Error::Pattern(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        OutcomePattern::new(trits)
    }
}

impl Serialize for OutcomePattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
