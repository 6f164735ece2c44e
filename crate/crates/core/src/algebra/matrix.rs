//! Square matrices over cyclotomic fields and exact elimination.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive};

use super::cyclotomic::Cyclotomic;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct CycloMatrix {
    n: usize,
    entries: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Cyclotomic::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Cyclotomic::one();
        }
        Self { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "matrix with {n} rows is not square"
            )));
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(diag: Vec<Cyclotomic>) -> Self {
        let n = diag.len();
        let mut m = Self::identity(n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Cyclotomic>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Least common cyclotomic order of the entries.
    pub fn order_of_field(&self) -> u64 {
        self.entries.iter().fold(1, |acc, e| acc.lcm(&e.order()))
    }

    /// All entries embedded into ℚ(ζ_order).
    pub fn rebase(&self, order: u64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|e| e.rebase(order)).collect(),
        }
    }

    /// Hashable canonical key for matrices whose entries live in ℚ(ζ_order).
    pub fn key(&self, order: u64) -> Vec<Vec<Rational>> {
        self.entries.iter().map(|e| e.coeffs_at(order)).collect()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "matrix size mismatch");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Cyclotomic::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Self { n, entries }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn trace(&self) -> Cyclotomic {
        (0..self.n).fold(Cyclotomic::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn minus_identity(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            let d = &m.entries[i * self.n + i] - &Cyclotomic::one();
            m.entries[i * self.n + i] = d;
        }
        m
    }

    pub fn det(&self) -> Cyclotomic {
        let mut rows = self.rows();
        let n = self.n;
        let mut det = Cyclotomic::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
                return Cyclotomic::zero();
            };
            if p != col {
                rows.swap(p, col);
                det = -det;
            }
            let pivot = rows[col][col].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = &rows[r][col] * &inv;
                for c in col..n {
                    let v = &rows[r][c] - &(&f * &rows[col][c]);
                    rows[r][c] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut aug: Vec<Vec<Cyclotomic>> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| {
                    if i == j {
                        Cyclotomic::one()
                    } else {
                        Cyclotomic::zero()
                    }
                }));
                r
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        Self::from_rows(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Smallest `d ≤ cap` with `self^d = 1`.
    pub fn multiplicative_order(&self, cap: u64) -> Option<u64> {
        let mut acc = self.clone();
        for d in 1..=cap {
            if acc.is_identity() {
                return Some(d);
            }
            acc = acc.mul(self);
        }
        None
    }
}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Cyclotomic>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = &*v - &(&f * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of `{x : A x = 0}` for the given rows (each of length `ncols`).
pub fn kernel_basis(rows: &[Vec<Cyclotomic>], ncols: usize) -> Vec<Vec<Cyclotomic>> {
    let mut a = rows.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Cyclotomic::zero(); ncols];
            v[fc] = Cyclotomic::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[row][fc];
            }
            v
        })
        .collect()
}

/// `dim ker(g - 1)`, the dimension of the fixed subspace of `g`.
pub fn matrix_fixed_dim(g: &CycloMatrix) -> Result<usize> {
    if g.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let n = g.size();
    let mut rows = g.minus_identity().rows();
    Ok(n - rref(&mut rows).len())
}

/// Exponents `a_j ∈ [0, d)` with eigenvalues `ζ_d^{a_j}`, listed with
/// multiplicity in increasing order.
pub fn eigen_exponents(g: &CycloMatrix, d: u64) -> Result<Vec<u64>> {
    if d == 0 || !g.pow(d).is_identity() {
        return Err(Error::NotFiniteOrder {
            order: d,
            reason: "g^d is not the identity".into(),
        });
    }
    let traces: Vec<Cyclotomic> = {
        let mut acc = CycloMatrix::identity(g.size());
        (0..d)
            .map(|_| {
                let t = acc.trace();
                acc = acc.mul(g);
                t
            })
            .collect()
    };
    let inv_d = Rational::new(One::one(), d.into());
    let mut out = Vec::new();
    for j in 0..d {
        let mut sum = Cyclotomic::zero();
        for (k, t) in traces.iter().enumerate() {
            let w = Cyclotomic::zeta_pow(-((j * k as u64 % d) as i64), d);
            sum = &sum + &(t * &w);
        }
        let mult = sum
            .scale(&inv_d)
            .as_rational()
            .filter(|q| q.is_integer() && !q.is_negative())
            .ok_or_else(|| Error::NotFiniteOrder {
                order: d,
                reason: format!("eigenvalue multiplicity for exponent {j} is not a natural number"),
            })?;
        let count = mult.to_integer().to_usize().unwrap_or(0);
        out.extend(std::iter::repeat_n(j, count));
    }
    if out.len() != g.size() {
        return Err(Error::NotFiniteOrder {
            order: d,
            reason: "multiplicities do not sum to the dimension".into(),
        });
    }
    Ok(out)
}
