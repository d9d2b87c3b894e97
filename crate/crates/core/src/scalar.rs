//! Exact scalar coefficients: a rational number times a monomial in named
//! constants (`m2`, `eps`, `il2`, ...).  No floating point enters the
//! symbolic layer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Index into the per-theory constant table.
pub type ConstId = u32;

/// How a named constant behaves under powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ConstKind {
    /// Free commutative symbol (m2, il2, Lam, ...).
    Free,
    /// A sign: squares to one (eps).
    Sign,
    /// Nilpotent marker: squares to zero (used by the finite/infinitesimal
    /// consistency check).
    Nilpotent,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConstInfo {
    pub name: String,
    pub kind: ConstKind,
}

/// Exact coefficient: rational * product of constants^exponent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coeff {
    pub rat: BigRational,
    /// Constant exponents; exponents are never zero in normalized form.
    pub consts: BTreeMap<ConstId, i64>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { rat: BigRational::zero(), consts: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Coeff { rat: BigRational::one(), consts: BTreeMap::new() }
    }

    pub fn int(n: i64) -> Self {
        Coeff { rat: BigRational::from_integer(BigInt::from(n)), consts: BTreeMap::new() }
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Coeff {
            rat: BigRational::new(BigInt::from(num), BigInt::from(den)),
            consts: BTreeMap::new(),
        }
    }

    pub fn constant(c: ConstId) -> Self {
        let mut m = BTreeMap::new();
        m.insert(c, 1);
        Coeff { rat: BigRational::one(), consts: m }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    pub fn neg(&self) -> Self {
        Coeff { rat: -self.rat.clone(), consts: self.consts.clone() }
    }

    /// Multiply, applying the constants' power rules.
    pub fn mul(&self, other: &Self, table: &[ConstInfo]) -> Self {
        let mut rat = &self.rat * &other.rat;
        if rat.is_zero() {
            return Coeff::zero();
        }
        let mut consts = self.consts.clone();
        for (&c, &e) in &other.consts {
            let entry = consts.entry(c).or_insert(0);
            *entry += e;
            let exp = *entry;
            match table.get(c as usize).map(|i| i.kind).unwrap_or(ConstKind::Free) {
                ConstKind::Free => {
                    if exp == 0 {
                        consts.remove(&c);
                    }
                }
                ConstKind::Sign => {
                    let r = exp.rem_euclid(2);
                    if r == 0 {
                        consts.remove(&c);
                    } else {
                        *consts.get_mut(&c).unwrap() = r;
                    }
                }
                ConstKind::Nilpotent => {
                    if exp == 0 {
                        consts.remove(&c);
                    } else if exp >= 2 {
                        rat = BigRational::zero();
                    }
                }
            }
        }
        if rat.is_zero() {
            return Coeff::zero();
        }
        Coeff { rat, consts }
    }

    /// Addition is only defined for identical const-monomials; the caller
    /// (term merging) guarantees this.
    pub fn add_same_monomial(&mut self, other: &Self) {
        debug_assert_eq!(self.consts, other.consts);
        self.rat += &other.rat;
        if self.rat.is_zero() {
            self.consts.clear();
        }
    }

    pub fn render(&self, table: &[ConstInfo]) -> String {
        let mut s = String::new();
        let r = &self.rat;
        if r.denom().is_one() {
            s.push_str(&r.numer().to_string());
        } else {
            s.push_str(&format!("{}/{}", r.numer(), r.denom()));
        }
        for (&c, &e) in &self.consts {
            let name = table.get(c as usize).map(|i| i.name.as_str()).unwrap_or("?");
            if e == 1 {
                s.push_str(&format!(" {}", name));
            } else {
                s.push_str(&format!(" {}^{}", name, e));
            }
        }
        s
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rat.denom().is_one() {
            write!(f, "{}", self.rat.numer())?;
        } else {
            write!(f, "{}/{}", self.rat.numer(), self.rat.denom())?;
        }
        for (c, e) in &self.consts {
            write!(f, " c{}^{}", c, e)?;
        }
        Ok(())
    }
}

/// Convenience: is this +1 with no constants?
pub fn coeff_is_one(c: &Coeff) -> bool {
    c.consts.is_empty() && c.rat.is_one()
}

/// Convenience: |rat| with sign split off, for rendering "a - b".
pub fn coeff_abs(c: &Coeff) -> (bool, Coeff) {
    if c.rat.is_negative() {
        (true, c.neg())
    } else {
        (false, c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Vec<ConstInfo> {
        vec![
            ConstInfo { name: "m2".into(), kind: ConstKind::Free },
            ConstInfo { name: "eps".into(), kind: ConstKind::Sign },
            ConstInfo { name: "lin".into(), kind: ConstKind::Nilpotent },
        ]
    }

    #[test]
    fn sign_squares_to_one() {
        let t = table();
        let e = Coeff::constant(1);
        let sq = e.mul(&e, &t);
        assert_eq!(sq, Coeff::one());
    }

    #[test]
    fn nilpotent_squares_to_zero() {
        let t = table();
        let l = Coeff::constant(2);
        assert!(l.mul(&l, &t).is_zero());
    }

    #[test]
    fn free_constants_accumulate() {
        let t = table();
        let m = Coeff::constant(0);
        let m2 = m.mul(&m, &t);
        assert_eq!(m2.consts.get(&0), Some(&2));
    }
}
