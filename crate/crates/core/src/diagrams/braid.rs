use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A single braid generator `σ_index^{±1}`. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub index: usize,
    pub positive: bool,
}

impl Letter {
    pub fn pos(index: usize) -> Self {
        Letter { index, positive: true }
    }

    pub fn neg(index: usize) -> Self {
        Letter { index, positive: false }
    }

    pub fn sign(&self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn inverse(&self) -> Self {
        Letter { index: self.index, positive: !self.positive }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::NoStrands);
        }
        for l in &letters {
            if l.index == 0 || l.index >= strands {
                return Err(Error::IndexOutOfRange { index: l.index as i64, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Result<Self> {
        Self::new(strands, vec![])
    }

    /// `σ_index^exp`; negative exponents give inverse letters.
    pub fn power(strands: usize, index: usize, exp: i64) -> Result<Self> {
        let l = if exp >= 0 { Letter::pos(index) } else { Letter::neg(index) };
        Self::new(strands, vec![l; exp.unsigned_abs() as usize])
    }

    /// Builds a word from signed generator indices (`-2` is `σ₂⁻¹`).
    pub fn from_signed(strands: usize, signed: &[i64]) -> Result<Self> {
        let mut letters = Vec::with_capacity(signed.len());
        for &i in signed {
            if i == 0 || i.unsigned_abs() as usize >= strands {
                return Err(Error::IndexOutOfRange { index: i, strands });
            }
            letters.push(Letter { index: i.unsigned_abs() as usize, positive: i > 0 });
        }
        Self::new(strands, letters)
    }

    /// The full twist `(σ₂σ₁)³` on three strands.
    pub fn full_twist3() -> Self {
        Self::from_signed(3, &[2, 1, 2, 1, 2, 1]).unwrap()
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.positive)
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(Letter::sign).sum()
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        let strands = self.strands.max(other.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { strands, letters }
    }

    pub fn pow(&self, k: usize) -> BraidWord {
        let mut letters = Vec::with_capacity(self.letters.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        BraidWord { strands: self.strands, letters }
    }

    pub fn reversed(&self) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        BraidWord { strands: self.strands, letters }
    }

    pub fn inverse(&self) -> BraidWord {
        let letters = self.letters.iter().rev().map(Letter::inverse).collect();
        BraidWord { strands: self.strands, letters }
    }

    /// Markov stabilization: one more strand and a trailing `σ_{n}^{±1}`.
    pub fn stabilized(&self, positive: bool) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.push(Letter { index: self.strands, positive });
        BraidWord { strands: self.strands + 1, letters }
    }

    /// Permutation of strand positions: `perm[p]` is where the strand
    /// starting at bottom position `p` ends up at the top.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            at.swap(l.index - 1, l.index);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    pub fn cycle_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; perm.len()];
        let mut cycles = 0;
        for s in 0..perm.len() {
            if !seen[s] {
                cycles += 1;
                let mut p = s;
                while !seen[p] {
                    seen[p] = true;
                    p = perm[p];
                }
            }
        }
        cycles
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for l in &self.letters {
            write!(f, " {}", l.sign() * l.index as i64)?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Parses `<strands>: <i₁> <i₂> ...`.
    fn from_str(text: &str) -> Result<Self> {
        let (head, body) = text
            .split_once(':')
            .ok_or_else(|| Error::BraidSyntax(format!("missing ':' in {text:?}")))?;
        let strands: i64 = head
            .trim()
            .parse()
            .map_err(|_| Error::BraidSyntax(format!("bad strand count {:?}", head.trim())))?;
        if strands < 1 {
            return Err(Error::NoStrands);
        }
        let signed = body
            .split_whitespace()
            .map(|tok| tok.parse::<i64>().map_err(|_| Error::BraidSyntax(format!("bad token {tok:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_signed(strands as usize, &signed)
    }
}

pub fn braid_from_text(text: &str) -> Result<BraidWord> {
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let b: BraidWord = "3: 1 1 1".parse().unwrap();
        assert_eq!(b.strands(), 3);
        assert_eq!(b.letters(), &[Letter::pos(1); 3]);

        let d: BraidWord = "3: 2 1 2 1 2 1".parse().unwrap();
        assert_eq!(d, BraidWord::full_twist3());

        assert!(matches!("3: 0 1".parse::<BraidWord>(), Err(Error::IndexOutOfRange { index: 0, .. })));
        assert!(matches!("3: 3".parse::<BraidWord>(), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!("0:".parse::<BraidWord>(), Err(Error::NoStrands)));
        assert!(matches!("3: 1 x".parse::<BraidWord>(), Err(Error::BraidSyntax(_))));
        assert!(matches!("3 1 2".parse::<BraidWord>(), Err(Error::BraidSyntax(_))));
    }

    #[test]
    fn negative_letters() {
        let b: BraidWord = "3: 1 -2 1 -2".parse().unwrap();
        assert_eq!(b.exponent_sum(), 0);
        assert!(!b.is_positive());
    }

    #[test]
    fn permutation_cycles() {
        assert_eq!(BraidWord::identity(3).unwrap().cycle_count(), 3);
        assert_eq!("3: 1 1 1".parse::<BraidWord>().unwrap().cycle_count(), 2);
        assert_eq!(BraidWord::full_twist3().cycle_count(), 3);
        assert_eq!("3: 2 1 2 1".parse::<BraidWord>().unwrap().cycle_count(), 1);
    }

    fn arb_word() -> impl Strategy<Value = BraidWord> {
        (1usize..6).prop_flat_map(|s| {
            let letter = if s > 1 {
                (1..s, any::<bool>()).prop_map(|(i, p)| Letter { index: i, positive: p }).boxed()
            } else {
                Just(Letter::pos(1)).boxed()
            };
            let n = if s > 1 { 12 } else { 0 };
            proptest::collection::vec(letter, 0..=n).prop_map(move |ls| BraidWord::new(s, ls).unwrap())
        })
    }

    proptest! {
        #[test]
        fn text_roundtrip(b in arb_word()) {
            let text = b.to_string();
            prop_assert_eq!(text.parse::<BraidWord>().unwrap(), b);
        }

        #[test]
        fn inverse_cancels_permutation(b in arb_word()) {
            let id = b.concat(&b.inverse());
            prop_assert_eq!(id.permutation(), (0..b.strands()).collect::<Vec<_>>());
        }
    }
}
