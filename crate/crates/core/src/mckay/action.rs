//! Finite linear actions on affine space and their JSON form.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::cyclotomic::Cyclotomic;
use crate::algebra::matrix::CycloMatrix;
use crate::algebra::rational::{serde_rational_vec, Rational};
use crate::error::{Error, Result};
use crate::json;

/// Generators of a matrix group acting on ℂⁿ, with entries in ℚ(ζ_m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearAction {
    n: usize,
    m: u64,
    generators: Vec<CycloMatrix>,
}

impl LinearAction {
    pub fn new(n: usize, m: u64, generators: Vec<CycloMatrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("the action needs n >= 1".into()));
        }
        if m == 0 {
            return Err(Error::Parse("cyclotomic order m must be positive".into()));
        }
        let mut gens = Vec::with_capacity(generators.len());
        for (i, g) in generators.into_iter().enumerate() {
            if g.size() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator {i} is {0}x{0}, expected {n}x{n}",
                    g.size()
                )));
            }
            if !m.is_multiple_of(g.order_of_field()) {
                return Err(Error::Parse(format!(
                    "generator {i} has entries outside Q(zeta_{m})"
                )));
            }
            if g.det().is_zero() {
                return Err(Error::SingularMatrix);
            }
            gens.push(g.rebase(m));
        }
        Ok(Self {
            n,
            m,
            generators: gens,
        })
    }

    /// The diagonal action of `ℤ_r`-generators `diag(ζ_r^{w_1}, …, ζ_r^{w_n})`.
    pub fn diagonal(r: u64, weights: &[Vec<i64>]) -> Result<Self> {
        let n = match weights.first() {
            Some(w) => w.len(),
            None => {
                return Err(Error::Parse(
                    "diagonal action needs at least one weight vector".into(),
                ))
            }
        };
        if r == 0 {
            return Err(Error::Parse("r must be positive".into()));
        }
        let gens = weights
            .iter()
            .map(|w| {
                if w.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "weight vectors of lengths {n} and {}",
                        w.len()
                    )));
                }
                Ok(CycloMatrix::diagonal(
                    w.iter().map(|&a| Cyclotomic::zeta_pow(a, r)).collect(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, r, gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn generators(&self) -> &[CycloMatrix] {
        &self.generators
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = json::from_str(text)?;
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let kind = value.get("type").cloned();
        match kind {
            None => Self::try_from(json::from_value::<GeneralActionFile>(value)?),
            Some(Value::String(s)) if s == "diagonal" => {
                let f: DiagonalActionFile = json::from_value(value)?;
                Self::diagonal(f.r, &f.weights)
            }
            Some(Value::String(s)) if s == "general" => {
                Self::try_from(json::from_value::<GeneralActionFile>(value)?)
            }
            Some(other) => Err(Error::Parse(format!(
                "at `type`: expected \"diagonal\" or \"general\", found {other}"
            ))),
        }
    }

    pub fn to_file(&self) -> GeneralActionFile {
        GeneralActionFile {
            kind: None,
            n: self.n,
            m: self.m,
            generators: self
                .generators
                .iter()
                .map(|g| {
                    g.rows()
                        .into_iter()
                        .map(|row| row.iter().map(|e| CoeffVec(e.coeffs_at(self.m))).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralActionFile {
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub n: usize,
    pub m: u64,
    /// Each entry is a coefficient vector in powers of ζ_m.
    pub generators: Vec<Vec<Vec<CoeffVec>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffVec(#[serde(with = "serde_rational_vec")] pub Vec<Rational>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalActionFile {
    #[serde(rename = "type")]
    pub kind: String,
    pub r: u64,
    pub weights: Vec<Vec<i64>>,
}

impl TryFrom<GeneralActionFile> for LinearAction {
    type Error = Error;
    fn try_from(f: GeneralActionFile) -> Result<Self> {
        if f.m == 0 {
            return Err(Error::Parse(
                "at `m`: cyclotomic order must be positive".into(),
            ));
        }
        let mut gens = Vec::with_capacity(f.generators.len());
        for (gi, g) in f.generators.into_iter().enumerate() {
            if g.len() != f.n || g.iter().any(|row| row.len() != f.n) {
                return Err(Error::DimensionMismatch(format!(
                    "generators[{gi}] is not a {0}x{0} matrix",
                    f.n
                )));
            }
            let rows = g
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|c| Cyclotomic::from_powers(f.m, c.0))
                        .collect()
                })
                .collect();
            gens.push(CycloMatrix::from_rows(rows)?);
        }
        LinearAction::new(f.n, f.m, gens)
    }
}
