//! Constructible functions on finite stratified spaces.
//!
//! A [`StratifiedSpace`] is a finite list of locally closed strata, each with
//! a complex dimension and a compactly supported Euler characteristic, plus
//! the closure order between them. A [`ConstructibleFn`] assigns a rational
//! value to every stratum. Proper pushforward along a [`StratMap`] weights
//! each source stratum by the Euler characteristic of its fibers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{serde_integer, serde_rational, Integer, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stratum {
    pub id: String,
    pub dim: u32,
    #[serde(with = "serde_integer")]
    pub chi_c: Integer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Stratum {
    pub fn new(id: impl Into<String>, dim: u32, chi_c: i64) -> Self {
        Self {
            id: id.into(),
            dim,
            chi_c: chi_c.into(),
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// On-disk form of a stratified space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub name: String,
    pub strata: Vec<Stratum>,
    #[serde(default)]
    pub closure: Vec<(String, String)>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "SpaceFile", into = "SpaceFile")]
pub struct StratifiedSpace {
    name: String,
    strata: Vec<Stratum>,
    closure: Vec<(String, String)>,
    index: HashMap<String, usize>,
    /// `leq[i][j]` iff stratum i lies in the closure of stratum j (reflexive).
    leq: Vec<Vec<bool>>,
}

impl StratifiedSpace {
    /// Validates the strata and takes the reflexive-transitive closure of the
    /// given `(lower, upper)` pairs.
    pub fn new(
        name: impl Into<String>,
        strata: Vec<Stratum>,
        closure: Vec<(String, String)>,
    ) -> Result<Self> {
        let name = name.into();
        let bad = |msg: String| Error::InvalidSpace(format!("{name}: {msg}"));
        let mut index = HashMap::new();
        for (i, s) in strata.iter().enumerate() {
            if index.insert(s.id.clone(), i).is_some() {
                return Err(bad(format!("duplicate stratum id `{}`", s.id)));
            }
        }
        let n = strata.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in &closure {
            let i = *index
                .get(lo)
                .ok_or_else(|| bad(format!("closure pair names unknown stratum `{lo}`")))?;
            let j = *index
                .get(hi)
                .ok_or_else(|| bad(format!("closure pair names unknown stratum `{hi}`")))?;
            leq[i][j] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] {
                    if leq[j][i] {
                        return Err(bad(format!(
                            "closure order has a cycle through `{}` and `{}`",
                            strata[i].id, strata[j].id
                        )));
                    }
                    if strata[i].dim >= strata[j].dim {
                        return Err(bad(format!(
                            "`{}` lies in the closure of `{}` but its dimension is not smaller",
                            strata[i].id, strata[j].id
                        )));
                    }
                }
            }
        }
        Ok(Self {
            name,
            strata,
            closure,
            index,
            leq,
        })
    }

    /// The one-point space.
    pub fn point() -> Self {
        Self::new("point", vec![Stratum::new("pt", 0, 1)], vec![]).expect("valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn stratum(&self, id: &str) -> Option<&Stratum> {
        self.index_of(id).map(|i| &self.strata[i])
    }

    /// Whether stratum `i` lies in the closure of stratum `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn chi_c(&self) -> Integer {
        self.strata.iter().map(|s| &s.chi_c).sum()
    }

    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            name: self.name.clone(),
            strata: self.strata.clone(),
            closure: self.closure.clone(),
        }
    }
}

impl TryFrom<SpaceFile> for StratifiedSpace {
    type Error = Error;
    fn try_from(f: SpaceFile) -> Result<Self> {
        Self::new(f.name, f.strata, f.closure)
    }
}

impl From<StratifiedSpace> for SpaceFile {
    fn from(s: StratifiedSpace) -> Self {
        s.to_file()
    }
}

impl PartialEq for StratifiedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.strata == other.strata && self.leq == other.leq
    }
}

impl Eq for StratifiedSpace {}

impl fmt::Debug for StratifiedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StratifiedSpace")
            .field("name", &self.name)
            .field("strata", &self.strata)
            .field("closure", &self.closure)
            .finish()
    }
}

fn same_space(a: &Arc<StratifiedSpace>, b: &Arc<StratifiedSpace>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch(a.name.clone(), b.name.clone()))
    }
}

/// A ℚ-valued function constant on the strata of a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructibleFn {
    space: Arc<StratifiedSpace>,
    values: Vec<Rational>,
}

impl ConstructibleFn {
    pub fn zero(space: &Arc<StratifiedSpace>) -> Self {
        Self::constant(space, Rational::zero())
    }

    pub fn constant(space: &Arc<StratifiedSpace>, c: Rational) -> Self {
        Self {
            space: space.clone(),
            values: vec![c; space.len()],
        }
    }

    pub fn from_values(space: &Arc<StratifiedSpace>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} strata",
                values.len(),
                space.len()
            )));
        }
        Ok(Self {
            space: space.clone(),
            values,
        })
    }

    /// Strata missing from `values` get the value 0.
    pub fn from_map(
        space: &Arc<StratifiedSpace>,
        values: &BTreeMap<String, Rational>,
    ) -> Result<Self> {
        let mut f = Self::zero(space);
        for (id, v) in values {
            let i = space
                .index_of(id)
                .ok_or_else(|| Error::InvalidSpace(format!("unknown stratum `{id}`")))?;
            f.values[i] = v.clone();
        }
        Ok(f)
    }

    /// `1_S` for a single stratum `S`.
    pub fn indicator(space: &Arc<StratifiedSpace>, id: &str) -> Result<Self> {
        let i = space
            .index_of(id)
            .ok_or_else(|| Error::InvalidSpace(format!("unknown stratum `{id}`")))?;
        let mut f = Self::zero(space);
        f.values[i] = Rational::one();
        Ok(f)
    }

    /// Indicator of the closure of stratum `id`.
    pub fn closure_indicator(space: &Arc<StratifiedSpace>, id: &str) -> Result<Self> {
        let j = space
            .index_of(id)
            .ok_or_else(|| Error::InvalidSpace(format!("unknown stratum `{id}`")))?;
        let values = (0..space.len())
            .map(|i| {
                if space.leq(i, j) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Ok(Self {
            space: space.clone(),
            values,
        })
    }

    pub fn space(&self) -> &Arc<StratifiedSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, id: &str) -> Option<&Rational> {
        self.space.index_of(id).map(|i| &self.values[i])
    }

    pub fn to_map(&self) -> BTreeMap<String, Rational> {
        self.space
            .strata
            .iter()
            .zip(&self.values)
            .map(|(s, v)| (s.id.clone(), v.clone()))
            .collect()
    }

    /// Per-stratum values in stratum order, for reports.
    pub fn to_report(&self) -> Vec<StratumValue> {
        self.space
            .strata
            .iter()
            .zip(&self.values)
            .map(|(s, v)| StratumValue {
                stratum: s.id.clone(),
                value: v.clone(),
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        same_space(&self.space, &other.space)?;
        Ok(Self {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product; `1_S · 1_T = 1_{S∩T}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `Σ_s φ(s)·χ_c(s)`, the pushforward to a point.
    pub fn integral(&self) -> Rational {
        self.space
            .strata
            .iter()
            .zip(&self.values)
            .map(|(s, v)| v * Rational::from_integer(s.chi_c.clone()))
            .sum()
    }

    /// Whether every value is an integer, i.e. the function lies in F(X).
    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    /// Coefficients `b_s` with `φ = Σ_s b_s · 1_{closure(s)}`.
    ///
    /// `φ(u) = Σ_{s ≥ u} b_s`, so the coefficients are solved from the
    /// highest-dimensional strata downwards.
    pub fn closed_basis(&self) -> BTreeMap<String, Rational> {
        let sp = &self.space;
        let mut order: Vec<usize> = (0..sp.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(sp.strata[i].dim));
        let mut b = vec![Rational::zero(); sp.len()];
        for &u in &order {
            let above: Rational = (0..sp.len())
                .filter(|&s| s != u && sp.leq(u, s))
                .map(|s| b[s].clone())
                .sum();
            b[u] = &self.values[u] - above;
        }
        sp.strata.iter().map(|s| s.id.clone()).zip(b).collect()
    }

    /// Inverse of [`ConstructibleFn::closed_basis`].
    pub fn from_closed_basis(
        space: &Arc<StratifiedSpace>,
        coeffs: &BTreeMap<String, Rational>,
    ) -> Result<Self> {
        let mut f = Self::zero(space);
        for (id, b) in coeffs {
            f = f.add(&Self::closure_indicator(space, id)?.scale(b))?;
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumValue {
    pub stratum: String,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

/// A Fubini violation found by [`StratMap::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FubiniViolation {
    pub stratum: String,
    #[serde(with = "serde_integer")]
    pub expected: Integer,
    #[serde(with = "serde_integer")]
    pub computed: Integer,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FubiniReport {
    pub violations: Vec<FubiniViolation>,
}

impl FubiniReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Pushforward data for a proper map between stratified spaces.
///
/// `fiber_chi[s][u]` is χ_c of the part of source stratum `s` lying over a
/// point of target stratum `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratMap {
    source: Arc<StratifiedSpace>,
    target: Arc<StratifiedSpace>,
    fiber_chi: Vec<Vec<Integer>>,
}

impl StratMap {
    /// Entries not listed are 0.
    pub fn new<'a>(
        source: &Arc<StratifiedSpace>,
        target: &Arc<StratifiedSpace>,
        entries: impl IntoIterator<Item = (&'a str, &'a str, Integer)>,
    ) -> Result<Self> {
        let mut fiber_chi = vec![vec![Integer::zero(); target.len()]; source.len()];
        for (src, tgt, chi) in entries {
            let s = source
                .index_of(src)
                .ok_or_else(|| Error::InvalidMap(format!("unknown source stratum `{src}`")))?;
            let t = target
                .index_of(tgt)
                .ok_or_else(|| Error::InvalidMap(format!("unknown target stratum `{tgt}`")))?;
            fiber_chi[s][t] = chi;
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            fiber_chi,
        })
    }

    pub fn from_matrix(
        source: &Arc<StratifiedSpace>,
        target: &Arc<StratifiedSpace>,
        fiber_chi: Vec<Vec<Integer>>,
    ) -> Result<Self> {
        if fiber_chi.len() != source.len() || fiber_chi.iter().any(|r| r.len() != target.len()) {
            return Err(Error::InvalidMap("fiber table has the wrong shape".into()));
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            fiber_chi,
        })
    }

    pub fn identity(space: &Arc<StratifiedSpace>) -> Self {
        let n = space.len();
        let fiber_chi = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Integer::one()
                        } else {
                            Integer::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            source: space.clone(),
            target: space.clone(),
            fiber_chi,
        }
    }

    /// The constant map to the one-point space.
    pub fn to_point(space: &Arc<StratifiedSpace>) -> Self {
        Self {
            source: space.clone(),
            target: Arc::new(StratifiedSpace::point()),
            fiber_chi: space.strata.iter().map(|s| vec![s.chi_c.clone()]).collect(),
        }
    }

    pub fn source(&self) -> &Arc<StratifiedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<StratifiedSpace> {
        &self.target
    }

    pub fn fiber_chi(&self) -> &[Vec<Integer>] {
        &self.fiber_chi
    }

    /// `(f_*φ)(u) = Σ_s φ(s)·fiber_chi(s,u)`.
    pub fn pushforward(&self, phi: &ConstructibleFn) -> Result<ConstructibleFn> {
        same_space(&self.source, &phi.space)?;
        let mut values = vec![Rational::zero(); self.target.len()];
        for (row, v) in self.fiber_chi.iter().zip(&phi.values) {
            if v.is_zero() {
                continue;
            }
            for (out, chi) in values.iter_mut().zip(row) {
                *out += v * Rational::from_integer(chi.clone());
            }
        }
        ConstructibleFn::from_values(&self.target, values)
    }

    /// `g ∘ self`; the fiber tables multiply as matrices.
    pub fn then(&self, g: &StratMap) -> Result<StratMap> {
        same_space(&self.target, &g.source)?;
        let fiber_chi = self
            .fiber_chi
            .iter()
            .map(|row| {
                (0..g.target.len())
                    .map(|w| {
                        row.iter()
                            .zip(&g.fiber_chi)
                            .map(|(a, grow)| a * &grow[w])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Ok(StratMap {
            source: self.source.clone(),
            target: g.target.clone(),
            fiber_chi,
        })
    }

    /// Source strata violating `Σ_u fiber_chi(s,u)·χ_c(u) = χ_c(s)`.
    pub fn validate(&self) -> FubiniReport {
        let violations = self
            .source
            .strata
            .iter()
            .zip(&self.fiber_chi)
            .filter_map(|(s, row)| {
                let computed: Integer = row
                    .iter()
                    .zip(&self.target.strata)
                    .map(|(chi, u)| chi * &u.chi_c)
                    .sum();
                (computed != s.chi_c).then(|| FubiniViolation {
                    stratum: s.id.clone(),
                    expected: s.chi_c.clone(),
                    computed,
                })
            })
            .collect();
        FubiniReport { violations }
    }

    pub fn to_file(&self) -> MapFile {
        let mut fiber_chi = Vec::new();
        for (s, row) in self.source.strata.iter().zip(&self.fiber_chi) {
            for (u, chi) in self.target.strata.iter().zip(row) {
                if !chi.is_zero() {
                    fiber_chi.push(FiberEntry {
                        src: s.id.clone(),
                        tgt: u.id.clone(),
                        chi: chi.clone(),
                    });
                }
            }
        }
        MapFile {
            source: self.source.to_file(),
            target: self.target.to_file(),
            fiber_chi,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberEntry {
    pub src: String,
    pub tgt: String,
    #[serde(with = "serde_integer")]
    pub chi: Integer,
}

/// On-disk form of a stratified map; omitted fiber entries are 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub source: SpaceFile,
    pub target: SpaceFile,
    pub fiber_chi: Vec<FiberEntry>,
}

impl TryFrom<MapFile> for StratMap {
    type Error = Error;
    fn try_from(f: MapFile) -> Result<Self> {
        let source = Arc::new(StratifiedSpace::try_from(f.source)?);
        let target = Arc::new(StratifiedSpace::try_from(f.target)?);
        StratMap::new(
            &source,
            &target,
            f.fiber_chi
                .iter()
                .map(|e| (e.src.as_str(), e.tgt.as_str(), e.chi.clone())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    /// ℂ²/±1: a smooth open stratum whose closure contains the singular point.
    fn a1_space() -> Arc<StratifiedSpace> {
        Arc::new(
            StratifiedSpace::new(
                "A1",
                vec![Stratum::new("free", 2, 0), Stratum::new("origin", 0, 1)],
                vec![("origin".into(), "free".into())],
            )
            .unwrap(),
        )
    }

    #[test]
    fn rejects_bad_orders() {
        let s = vec![Stratum::new("a", 1, 1), Stratum::new("b", 1, 1)];
        assert!(StratifiedSpace::new("x", s.clone(), vec![("a".into(), "b".into())]).is_err());
        assert!(StratifiedSpace::new("x", s, vec![("a".into(), "zz".into())]).is_err());
        let s = vec![Stratum::new("a", 0, 1), Stratum::new("b", 1, 1)];
        let cyc = vec![("a".into(), "b".into()), ("b".into(), "a".into())];
        assert!(StratifiedSpace::new("x", s, cyc).is_err());
        let dup = vec![Stratum::new("a", 0, 1), Stratum::new("a", 1, 1)];
        assert!(StratifiedSpace::new("x", dup, vec![]).is_err());
    }

    #[test]
    fn transitive_closure() {
        let sp = StratifiedSpace::new(
            "chain",
            vec![
                Stratum::new("p", 0, 1),
                Stratum::new("c", 1, 0),
                Stratum::new("s", 2, 0),
            ],
            vec![("p".into(), "c".into()), ("c".into(), "s".into())],
        )
        .unwrap();
        assert!(sp.leq(0, 2));
        assert!(!sp.leq(2, 0));
    }

    #[test]
    fn arithmetic() {
        let sp = a1_space();
        let one_free = ConstructibleFn::indicator(&sp, "free").unwrap();
        let cl = ConstructibleFn::closure_indicator(&sp, "free").unwrap();
        // 1_S · 1_T = 1_{S∩T}
        assert_eq!(one_free.mul(&cl).unwrap(), one_free);
        assert_eq!(one_free.add(&ConstructibleFn::zero(&sp)).unwrap(), one_free);
        assert_eq!(cl.scale(&int(2)).values(), &[int(2), int(2)]);
        let other = Arc::new(StratifiedSpace::point());
        assert!(matches!(
            one_free.add(&ConstructibleFn::zero(&other)),
            Err(Error::SpaceMismatch(..))
        ));
    }

    #[test]
    fn integral_examples() {
        let sp = a1_space();
        assert_eq!(ConstructibleFn::constant(&sp, int(1)).integral(), int(1));
        let phi = ConstructibleFn::from_values(&sp, vec![int(1), int(2)]).unwrap();
        assert_eq!(phi.integral(), int(2));
    }

    #[test]
    fn closed_basis_examples() {
        let sp = a1_space();
        let cl = ConstructibleFn::closure_indicator(&sp, "free").unwrap();
        let b = cl.closed_basis();
        assert_eq!(b["free"], int(1));
        assert_eq!(b["origin"], int(0));

        let phi = ConstructibleFn::from_values(&sp, vec![int(1), int(2)]).unwrap();
        let b = phi.closed_basis();
        assert_eq!((b["free"].clone(), b["origin"].clone()), (int(1), int(1)));

        let open = ConstructibleFn::indicator(&sp, "free").unwrap();
        let b = open.closed_basis();
        assert_eq!((b["free"].clone(), b["origin"].clone()), (int(1), int(-1)));
        assert_eq!(ConstructibleFn::from_closed_basis(&sp, &b).unwrap(), open);
    }

    #[test]
    fn pushforward_examples() {
        let sp = a1_space();
        let phi = ConstructibleFn::from_values(&sp, vec![int(3), int(-1)]).unwrap();
        assert_eq!(StratMap::identity(&sp).pushforward(&phi).unwrap(), phi);
        let pt = StratMap::to_point(&sp).pushforward(&phi).unwrap();
        assert_eq!(pt.values(), &[int(-1)]);
        assert!(StratMap::identity(&sp).validate().is_valid());
    }

    #[test]
    fn corrupted_fiber_is_flagged() {
        let sp = a1_space();
        let mut f = StratMap::identity(&sp);
        f.fiber_chi[1][1] = Integer::from(2);
        let r = f.validate();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].stratum, "origin");
    }

    #[test]
    fn json_round_trip() {
        let sp = a1_space();
        let json = serde_json::to_string(&*sp).unwrap();
        let back: StratifiedSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, *sp);
        let f = StratMap::identity(&sp);
        let back = StratMap::try_from(f.to_file()).unwrap();
        assert_eq!(back, f);
    }
}
