//! Exact arithmetic in cyclotomic fields ℚ(ζ_m).
//!
//! An element of order `m` is stored by its coordinates in the power basis
//! `1, ζ_m, …, ζ_m^{φ(m)-1}`, i.e. reduced modulo the m-th cyclotomic
//! polynomial. Values of different orders are compared and combined after
//! embedding both into ℚ(ζ_lcm).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer as _;
use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Integer coefficients of Φ_m, lowest degree first. Cached per order.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    assert!(m >= 1, "cyclotomic order must be positive");
    // x^m - 1 divided by Φ_d for every proper divisor d of m
    let mut poly = vec![0i64; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            poly = exact_divide(&poly, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(poly);
    cache.lock().unwrap().insert(m, poly.clone());
    poly
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    debug_assert_eq!(lead, 1);
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd] / lead;
        quot[k] = c;
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

pub fn euler_phi(m: u64) -> usize {
    cyclotomic_polynomial(m).len() - 1
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[derive(Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    /// Builds `Σ raw[k] ζ_m^k` for a coefficient vector of any length.
    pub fn from_powers(order: u64, raw: Vec<Rational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Self {
            order,
            coeffs: reduce(order, raw),
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// Canonical representation of ζ_m^power.
    pub fn zeta_pow(power: i64, m: u64) -> Self {
        assert!(m >= 1, "cyclotomic order must be positive");
        let e = power.rem_euclid(m as i64) as usize;
        let mut raw = vec![Rational::zero(); e + 1];
        raw[e] = Rational::one();
        Self::from_powers(m, raw)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// Embeds into ℚ(ζ_target). `self.order()` must divide `target`.
    pub fn rebase(&self, target: u64) -> Self {
        if target == self.order {
            return self.clone();
        }
        assert!(
            target.is_multiple_of(self.order),
            "cannot rebase order {} to {target}",
            self.order
        );
        let step = (target / self.order) as usize;
        let mut raw = vec![Rational::zero(); step * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[k * step] = c.clone();
        }
        Self::from_powers(target, raw)
    }

    /// Coordinates after embedding into ℚ(ζ_target); used as a hashable key.
    pub fn coeffs_at(&self, target: u64) -> Vec<Rational> {
        self.rebase(target).coeffs
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = lcm(a.order, b.order);
        (a.rebase(m), b.rebase(m))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        // Solve (multiplication by self) · x = 1 over ℚ.
        let n = self.coeffs.len();
        let mut columns = Vec::with_capacity(n);
        for j in 0..n {
            let mut raw = vec![Rational::zero(); j + n];
            for (k, c) in self.coeffs.iter().enumerate() {
                raw[j + k] = c.clone();
            }
            columns.push(reduce(self.order, raw));
        }
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> = columns.iter().map(|col| col[i].clone()).collect();
                row.push(if i == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                });
                row
            })
            .collect();
        let x = solve_augmented(&mut aug).ok_or(Error::DivisionByZero)?;
        Ok(Self {
            order: self.order,
            coeffs: x,
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }
}

/// Folds exponents modulo m, then reduces modulo Φ_m.
fn reduce(order: u64, raw: Vec<Rational>) -> Vec<Rational> {
    let m = order as usize;
    let mut folded = vec![Rational::zero(); m];
    for (k, c) in raw.into_iter().enumerate() {
        if !c.is_zero() {
            folded[k % m] += c;
        }
    }
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    for k in (deg..m).rev() {
        let c = std::mem::take(&mut folded[k]);
        if c.is_zero() {
            continue;
        }
        // x^k = x^{k-deg} · x^deg and x^deg = -Σ_{j<deg} phi[j] x^j
        for (j, pj) in phi[..deg].iter().enumerate() {
            if *pj != 0 {
                folded[k - deg + j] -= &c * Rational::from_integer((*pj).into());
            }
        }
    }
    folded.truncate(deg);
    folded
}

/// Gaussian elimination on a square system with the right-hand side as the
/// last column. Returns `None` when the system is singular.
fn solve_augmented(aug: &mut [Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = aug.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let p = aug[col][col].clone();
        for v in aug[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                let (src, dst) = if r < col {
                    let (a, b) = aug.split_at_mut(col);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = aug.split_at_mut(r);
                    (&a[col], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= &f * s;
                }
            }
        }
    }
    Some(aug.iter().map(|row| row[n].clone()).collect())
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        let (a, b) = Cyclotomic::common(self, rhs);
        let mut raw = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        Cyclotomic::from_powers(a.order, raw)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                _ if c.is_one() => write!(f, "z{}^{}", self.order, k)?,
                _ => write!(f, "{}*z{}^{}", format_rational(c), self.order, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}
