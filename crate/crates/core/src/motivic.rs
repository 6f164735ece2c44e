//! Symbolic relative motivic expressions.
//!
//! An expression is a finite sum of terms
//! `{V_1 ×_X … ×_X V_k} · p(t) / Π gs(b_j)`, where `t = L^{1/r}`, `p` is a
//! Laurent polynomial and `gs(b) = 1 + t + … + t^{b-1}`. Equality is decided
//! on normalized representatives only; two expressions that agree after
//! specialization need not compare equal here.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer as _;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::laurent::LaurentPoly;
use crate::algebra::rational::{format_rational, parse_rational, Rational};
use crate::constructible::{ConstructibleFn, StratifiedSpace};
use crate::error::{Error, Result};

const BASE_NAME: &str = "{X}";
const EMPTY_NAME: &str = "{∅}";

/// The class `{g: V → X}` of a variety over the base, optionally carrying the
/// constructible function `g_* 1_V`.
#[derive(Clone, Debug)]
pub struct ClassSymbol {
    name: String,
    backing: Option<ConstructibleFn>,
}

impl ClassSymbol {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            backing: None,
        }
    }

    pub fn backed(name: impl Into<String>, pushforward: ConstructibleFn) -> Self {
        Self {
            name: name.into(),
            backing: Some(pushforward),
        }
    }

    /// `{X}`, the ring identity.
    pub fn base() -> Self {
        Self::new(BASE_NAME)
    }

    /// `{∅}`, the ring zero.
    pub fn empty() -> Self {
        Self::new(EMPTY_NAME)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn backing(&self) -> Option<&ConstructibleFn> {
        self.backing.as_ref()
    }
}

/// Symbols are identified by name.
impl PartialEq for ClassSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for ClassSymbol {}

/// The denominator factor `Σ_{k<len} L^{k/root}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeomFactor {
    pub len: u64,
    pub root: u64,
}

#[derive(Clone, Debug)]
pub struct MotivicTerm {
    /// Sorted by name; the empty list is `{X}`.
    symbols: Vec<ClassSymbol>,
    numerator: LaurentPoly,
    /// Sorted; factors of length 1 are dropped.
    denom: Vec<GeomFactor>,
}

impl MotivicTerm {
    pub fn symbols(&self) -> &[ClassSymbol] {
        &self.symbols
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn denominators(&self) -> &[GeomFactor] {
        &self.denom
    }

    fn key(&self) -> (Vec<String>, Vec<GeomFactor>) {
        (
            self.symbols.iter().map(|s| s.name.clone()).collect(),
            self.denom.clone(),
        )
    }

    fn denom_at_one(&self) -> Rational {
        self.denom
            .iter()
            .map(|g| Rational::from_integer(g.len.into()))
            .product()
    }
}

#[derive(Clone, Debug)]
pub struct MotivicExpr {
    root: u64,
    terms: Vec<MotivicTerm>,
}

impl MotivicExpr {
    pub fn zero(root: u64) -> Self {
        Self {
            root,
            terms: Vec::new(),
        }
    }

    /// `{X}`.
    pub fn one(root: u64) -> Self {
        Self::term(vec![], LaurentPoly::one(root), vec![]).expect("valid")
    }

    pub fn symbol(sym: ClassSymbol, root: u64) -> Self {
        match sym.name.as_str() {
            BASE_NAME => Self::one(root),
            EMPTY_NAME => Self::zero(root),
            _ => Self::term(vec![sym], LaurentPoly::one(root), vec![]).expect("valid"),
        }
    }

    /// `L^k`.
    pub fn lefschetz(root: u64, k: i64) -> Self {
        Self::term(vec![], LaurentPoly::lefschetz_power(root, k), vec![]).expect("valid")
    }

    pub fn constant(root: u64, c: Rational) -> Self {
        Self::term(vec![], LaurentPoly::constant(root, c), vec![]).expect("valid")
    }

    /// A single term `{Π symbols} · numerator / Π gs(b, numerator.root())`.
    pub fn term(
        symbols: Vec<ClassSymbol>,
        numerator: LaurentPoly,
        denom: Vec<u64>,
    ) -> Result<Self> {
        let root = numerator.root();
        let mut factors = Vec::with_capacity(denom.len());
        for b in denom {
            if b == 0 {
                return Err(Error::EmptyGeometricSum(0));
            }
            factors.push(GeomFactor { len: b, root });
        }
        if symbols.iter().any(|s| s.name == EMPTY_NAME) {
            return Ok(Self::zero(root));
        }
        let symbols = symbols
            .into_iter()
            .filter(|s| s.name != BASE_NAME)
            .collect();
        Ok(Self {
            root,
            terms: vec![MotivicTerm {
                symbols,
                numerator,
                denom: factors,
            }],
        }
        .normalized())
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn terms(&self) -> &[MotivicTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalized(self) -> Self {
        let root = self.root;
        let mut merged: BTreeMap<(Vec<String>, Vec<GeomFactor>), MotivicTerm> = BTreeMap::new();
        for mut t in self.terms {
            t.symbols.sort_by(|a, b| a.name.cmp(&b.name));
            t.denom.retain(|g| g.len != 1);
            t.denom.sort();
            let numerator = t.numerator.rebase(root);
            match merged.entry(t.key()) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let acc = &e.get().numerator + &numerator;
                    e.get_mut().numerator = acc;
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(MotivicTerm { numerator, ..t });
                }
            }
        }
        Self {
            root,
            terms: merged
                .into_values()
                .filter(|t| !t.numerator.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let root = self.root.lcm(&other.root);
        Self {
            root,
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        Self {
            root: self.root,
            terms: self
                .terms
                .iter()
                .map(|t| MotivicTerm {
                    numerator: -&t.numerator,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.mul(&Self::constant(self.root, c.clone()))
    }

    /// Symbol multisets are joined (formal fiber product over X), numerators
    /// multiplied and denominators concatenated.
    pub fn mul(&self, other: &Self) -> Self {
        let root = self.root.lcm(&other.root);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(MotivicTerm {
                    symbols: a.symbols.iter().chain(&b.symbols).cloned().collect(),
                    numerator: &a.numerator * &b.numerator,
                    denom: a.denom.iter().chain(&b.denom).copied().collect(),
                });
            }
        }
        Self { root, terms }.normalized()
    }

    /// Degree-level specialization: `t ↦ 1`, `gs(b) ↦ b`, and each symbol to
    /// its Euler characteristic, multiplicatively over fiber products.
    pub fn euler_specialize(
        &self,
        chi: impl Fn(&ClassSymbol) -> Option<Rational>,
    ) -> Result<Rational> {
        let mut total = Rational::zero();
        for t in &self.terms {
            let mut v = t.numerator.eval_at_one() / t.denom_at_one();
            if t.symbols.is_empty() {
                // a multiple of {X}; a point base when no value is supplied
                if let Some(x) = chi(&ClassSymbol::base()) {
                    v *= x;
                }
            }
            for s in &t.symbols {
                v *= chi(s).ok_or_else(|| Error::MissingChi(s.name.clone()))?;
            }
            total += v;
        }
        Ok(total)
    }

    pub fn euler_specialize_map(&self, chi: &BTreeMap<String, Rational>) -> Result<Rational> {
        self.euler_specialize(|s| chi.get(&s.name).cloned())
    }

    /// Euler specialization with `χ(symbol) = ∫ backing(symbol)` and
    /// `χ({X}) = χ_c(base)`.
    pub fn euler_from_backing(&self, base: &StratifiedSpace) -> Result<Rational> {
        for t in &self.terms {
            if let Some(s) = t.symbols.iter().find(|s| s.backing.is_none()) {
                return Err(Error::MissingBacking(s.name.clone()));
            }
        }
        let chi_x = Rational::from_integer(base.chi_c());
        self.euler_specialize(|s| {
            if s.name == BASE_NAME {
                Some(chi_x.clone())
            } else {
                s.backing.as_ref().map(ConstructibleFn::integral)
            }
        })
    }

    /// The ring homomorphism to F(X)_ℚ: symbols map to their backing
    /// functions, fiber products to pointwise products, `L^{1/r} ↦ 1` and
    /// `gs(b) ↦ b`.
    pub fn phi_specialize(&self, base: &Arc<StratifiedSpace>) -> Result<ConstructibleFn> {
        let mut total = ConstructibleFn::zero(base);
        for t in &self.terms {
            let mut f =
                ConstructibleFn::constant(base, t.numerator.eval_at_one() / t.denom_at_one());
            for s in &t.symbols {
                let backing = s
                    .backing
                    .as_ref()
                    .ok_or_else(|| Error::MissingBacking(s.name.clone()))?;
                f = f.mul(backing)?;
            }
            total = total.add(&f)?;
        }
        Ok(total)
    }

    pub fn to_file(&self) -> MotivicExprFile {
        MotivicExprFile {
            root: self.root,
            terms: self
                .terms
                .iter()
                .map(|t| TermFile {
                    symbols: t.symbols.iter().map(|s| s.name.clone()).collect(),
                    numerator: t
                        .numerator
                        .terms()
                        .iter()
                        .map(|(e, c)| (*e, format_rational(c)))
                        .collect(),
                    denominators: t.denom.clone(),
                })
                .collect(),
        }
    }
}

impl PartialEq for MotivicExpr {
    fn eq(&self, other: &Self) -> bool {
        let root = self.root.lcm(&other.root);
        let a = Self {
            root,
            terms: self.terms.clone(),
        }
        .normalized();
        let b = Self {
            root,
            terms: other.terms.clone(),
        }
        .normalized();
        a.terms.len() == b.terms.len()
            && a.terms
                .iter()
                .zip(&b.terms)
                .all(|(x, y)| x.key() == y.key() && x.numerator == y.numerator)
    }
}

impl fmt::Display for MotivicExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let sym = if t.symbols.is_empty() {
                BASE_NAME.to_string()
            } else {
                t.symbols
                    .iter()
                    .map(|s| s.name.as_str())
                    .collect::<Vec<_>>()
                    .join(" x ")
            };
            write!(f, "{sym}·({})", t.numerator)?;
            for g in &t.denom {
                write!(f, "/gs({},{})", g.len, g.root)?;
            }
        }
        write!(f, "  [t = L^(1/{})]", self.root)
    }
}

/// Serialized expression as it appears in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotivicExprFile {
    pub root: u64,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub symbols: Vec<String>,
    /// `(exponent of t, coefficient)` pairs.
    pub numerator: Vec<(i64, String)>,
    pub denominators: Vec<GeomFactor>,
}

impl TryFrom<&MotivicExprFile> for MotivicExpr {
    type Error = Error;
    fn try_from(f: &MotivicExprFile) -> Result<Self> {
        let mut out = MotivicExpr::zero(f.root);
        for t in &f.terms {
            let mut num = LaurentPoly::zero(f.root);
            for (e, c) in &t.numerator {
                num = &num + &LaurentPoly::monomial(f.root, *e, parse_rational(c)?);
            }
            let term = MotivicTerm {
                symbols: t.symbols.iter().map(ClassSymbol::new).collect(),
                numerator: num,
                denom: t.denominators.clone(),
            };
            out = out.add(&MotivicExpr {
                root: f.root,
                terms: vec![term],
            });
        }
        Ok(out)
    }
}
