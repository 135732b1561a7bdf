//! Laurent polynomials in `t^{1/2}` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Polynomial keyed by doubled exponent: `coeffs[e2]` multiplies `t^{e2/2}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Laurent {
    coeffs: BTreeMap<i64, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coeff · t^{e2/2}`.
    pub fn monomial(e2: i64, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e2, coeff);
        p
    }

    pub fn add_term(&mut self, e2: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.coeffs.entry(e2).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.coeffs.remove(&e2);
        }
    }

    pub fn coeff(&self, e2: i64) -> i64 {
        self.coeffs.get(&e2).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplies by `t^{e2/2}`.
    pub fn shift(&self, e2: i64) -> Self {
        Laurent { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + e2, c)).collect() }
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut r = Self::zero();
        for (e, c) in self.terms() {
            r.add_term(e, c * k);
        }
        r
    }

    /// Substitutes `t ↦ t^{-1}`.
    pub fn invert_variable(&self) -> Self {
        Laurent { coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect() }
    }

    /// `|p(-1)|`, taking `t^{1/2} = i`. All exponents of a link polynomial
    /// share a parity, so the value is real or purely imaginary.
    pub fn abs_at_minus_one(&self) -> i64 {
        let (mut re, mut im) = (0i64, 0i64);
        for (e, c) in self.terms() {
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        if re != 0 && im != 0 {
            // not a link polynomial; fall back to the modulus rounded down
            return ((re * re + im * im) as f64).sqrt() as i64;
        }
        re.abs() + im.abs()
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, c);
        }
        r
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { coeffs: self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect() }
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, o: &Laurent) -> Laurent {
        self + &(-o)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, o: &Laurent) -> Laurent {
        let mut r = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }
}

fn fmt_exponent(e2: i64) -> String {
    if e2 % 2 == 0 {
        format!("{}", e2 / 2)
    } else {
        format!("{}/2", e2)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (e, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => {}
                _ => write!(f, "{a}*")?,
            }
            match e {
                0 => {}
                2 => write!(f, "t")?,
                _ => write!(f, "t^{}", fmt_exponent(e))?,
            }
        }
        Ok(())
    }
}
