//! Laurent polynomials in a formal root `t = L^{1/r}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer as _;
use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LaurentPoly {
    root: u64,
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero(root: u64) -> Self {
        assert!(root >= 1, "root must be positive");
        Self {
            root,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(root: u64, c: Rational) -> Self {
        Self::monomial(root, 0, c)
    }

    pub fn one(root: u64) -> Self {
        Self::constant(root, Rational::one())
    }

    /// `c · t^exp` with `t = L^{1/root}`.
    pub fn monomial(root: u64, exp: i64, c: Rational) -> Self {
        let mut p = Self::zero(root);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// `L^k = t^{root·k}`.
    pub fn lefschetz_power(root: u64, k: i64) -> Self {
        Self::monomial(root, root as i64 * k, Rational::one())
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-expresses the polynomial in `t' = L^{1/target}`; `root` must divide `target`.
    pub fn rebase(&self, target: u64) -> Self {
        assert!(
            target.is_multiple_of(self.root),
            "cannot rebase root {} to {target}",
            self.root
        );
        let step = (target / self.root) as i64;
        Self {
            root: target,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e * step, c.clone()))
                .collect(),
        }
    }

    /// Value at `t = 1`, i.e. the sum of the coefficients.
    pub fn eval_at_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.root);
        }
        Self {
            root: self.root,
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }

    fn insert_add(&mut self, e: i64, c: Rational) {
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.root == other.root {
            return self.terms == other.terms;
        }
        let r = self.root.lcm(&other.root);
        self.rebase(r).terms == other.rebase(r).terms
    }
}

impl Eq for LaurentPoly {}

/// `1 + t + … + t^{b-1}` with `t = L^{1/r}`.
pub fn geom_sum(b: i64, r: u64) -> Result<LaurentPoly> {
    if b < 1 {
        return Err(Error::EmptyGeometricSum(b));
    }
    let mut p = LaurentPoly::zero(r);
    for e in 0..b {
        p.terms.insert(e, Rational::one());
    }
    Ok(p)
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let r = self.root.lcm(&rhs.root);
        let mut out = self.rebase(r);
        for (e, c) in rhs.rebase(r).terms {
            out.insert_add(e, c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let r = self.root.lcm(&rhs.root);
        let (a, b) = (self.rebase(r), rhs.rebase(r));
        let mut out = LaurentPoly::zero(r);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                out.insert_add(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (*e, c.is_one()) {
                (0, _) => write!(f, "{}", format_rational(c))?,
                (_, true) => write!(f, "t^{e}")?,
                _ => write!(f, "{}*t^{e}", format_rational(c))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn geometric_sums() {
        assert_eq!(geom_sum(1, 5).unwrap(), LaurentPoly::one(5));
        let g = geom_sum(3, 3).unwrap();
        assert_eq!(g.terms().keys().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
        for b in 1..8 {
            assert_eq!(geom_sum(b, 2).unwrap().eval_at_one(), int(b));
        }
        assert_eq!(geom_sum(0, 1), Err(Error::EmptyGeometricSum(0)));
    }

    #[test]
    fn mixed_roots_combine_at_lcm() {
        // L^{1/2} · L^{1/3} = L^{5/6}
        let a = LaurentPoly::monomial(2, 1, int(1));
        let b = LaurentPoly::monomial(3, 1, int(1));
        let p = &a * &b;
        assert_eq!(p, LaurentPoly::monomial(6, 5, int(1)));
        // L = t^2 at root 2 equals t^3 at root 3
        assert_eq!(
            &LaurentPoly::lefschetz_power(2, 1) - &LaurentPoly::lefschetz_power(3, 1),
            LaurentPoly::zero(6)
        );
    }

    #[test]
    fn cancellation_drops_terms() {
        let a = LaurentPoly::monomial(1, -2, int(3));
        assert!((&a - &a).is_zero());
    }
}
