//! Stringy invariants from simple-normal-crossing resolution data.
//!
//! The input is a resolution `f: Y → X` already reduced to numbers: the
//! discrepancy `a_i` of each exceptional component `E_i`, and for every
//! nonempty stratum `E_I^0` its Euler characteristic together with the Euler
//! characteristics of its fibers over the strata of `X`. From this the
//! evaluator produces
//!
//! * the motivic integral `Σ_I {E_I^0} Π_{i∈I} gs(r)/gs(r(a_i+1))`,
//! * the function `Φ = Σ_I f_* 1_{E_I^0} / Π_{i∈I}(a_i+1)`,
//! * the stringy Euler number `Σ_I χ_c(E_I^0) / Π_{i∈I}(a_i+1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use crate::algebra::laurent::{geom_sum, LaurentPoly};
use crate::algebra::rational::{format_rational, serde_integer, serde_rational, Integer, Rational};
use crate::constructible::{
    ConstructibleFn, FubiniReport, SpaceFile, StratMap, StratifiedSpace, Stratum, StratumValue,
};
use crate::error::{Error, Result};
use crate::motivic::{ClassSymbol, MotivicExpr};

/// Whether discrepancies below -1 are accepted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LogTerminalGate {
    /// Every `a_i > -1`.
    #[default]
    Required,
    /// Only `a_i ≠ -1`; results are not certified resolution-independent.
    AllowBeyond,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: String,
    pub a: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncStratum {
    pub subset: BTreeSet<String>,
    pub chi_c: Integer,
    /// χ_c of the fiber over each base stratum, in base order.
    pub fibers: Vec<Integer>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncDatum {
    base: Arc<StratifiedSpace>,
    components: Vec<Component>,
    strata: Vec<SncStratum>,
    y_chi_c: Option<Integer>,
}

pub fn stratum_name(subset: &BTreeSet<String>) -> String {
    if subset.is_empty() {
        "Y\\E".to_string()
    } else {
        format!(
            "E_{{{}}}^0",
            subset.iter().cloned().collect::<Vec<_>>().join(",")
        )
    }
}

impl SncDatum {
    /// `strata` lists `(I, χ_c(E_I^0), fibers by base stratum id)`; fibers
    /// not listed are 0, and subsets not listed are empty strata.
    pub fn new(
        base: Arc<StratifiedSpace>,
        components: Vec<Component>,
        strata: Vec<(Vec<String>, Integer, BTreeMap<String, Integer>)>,
        y_chi_c: Option<Integer>,
    ) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for c in &components {
            if !ids.insert(c.id.clone()) {
                return Err(Error::InvalidSnc(format!(
                    "duplicate component id `{}`",
                    c.id
                )));
            }
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(strata.len());
        for (subset, chi_c, fibers) in strata {
            let subset: BTreeSet<String> = subset.into_iter().collect();
            if let Some(bad) = subset.iter().find(|i| !ids.contains(*i)) {
                return Err(Error::InvalidSnc(format!(
                    "stratum references unknown component `{bad}`"
                )));
            }
            if !seen.insert(subset.clone()) {
                return Err(Error::InvalidSnc(format!(
                    "stratum {} listed twice",
                    stratum_name(&subset)
                )));
            }
            let mut row = vec![Integer::zero(); base.len()];
            for (sid, chi) in fibers {
                let i = base.index_of(&sid).ok_or_else(|| {
                    Error::InvalidSnc(format!("fiber over unknown base stratum `{sid}`"))
                })?;
                row[i] = chi;
            }
            out.push(SncStratum {
                subset,
                chi_c,
                fibers: row,
            });
        }
        // fixed subset order for reproducible output
        out.sort_by(|a, b| (a.subset.len(), &a.subset).cmp(&(b.subset.len(), &b.subset)));
        Ok(Self {
            base,
            components,
            strata: out,
            y_chi_c,
        })
    }

    pub fn base(&self) -> &Arc<StratifiedSpace> {
        &self.base
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn strata(&self) -> &[SncStratum] {
        &self.strata
    }

    fn discrepancy(&self, id: &str) -> &Rational {
        &self
            .components
            .iter()
            .find(|c| c.id == id)
            .expect("validated component id")
            .a
    }

    /// Least common denominator of the discrepancies.
    pub fn root(&self) -> u64 {
        self.components.iter().fold(1u64, |acc, c| {
            let d: u64 = c.a.denom().try_into().expect("denominator fits in u64");
            acc.lcm(&d)
        })
    }

    /// `1 / Π_{i∈I}(a_i + 1)`.
    pub fn weight(&self, subset: &BTreeSet<String>) -> Rational {
        subset
            .iter()
            .map(|i| self.discrepancy(i) + Rational::one())
            .product::<Rational>()
            .recip()
    }

    /// The stratification of Y by the `E_I^0`. `E_I^0` lies in the closure
    /// of `E_J^0` when `J ⊊ I`, and has dimension `dim X - |I|`.
    pub fn y_space(&self) -> Result<Arc<StratifiedSpace>> {
        let dim = self.base.strata().iter().map(|s| s.dim).max().unwrap_or(0);
        let mut strata = Vec::with_capacity(self.strata.len());
        for s in &self.strata {
            let codim = s.subset.len() as u32;
            if codim > dim {
                return Err(Error::InvalidSnc(format!(
                    "{} has codimension {codim} > dim X = {dim}",
                    stratum_name(&s.subset)
                )));
            }
            strata.push(Stratum {
                id: stratum_name(&s.subset),
                dim: dim - codim,
                chi_c: s.chi_c.clone(),
                label: None,
            });
        }
        let mut closure = Vec::new();
        for lo in &self.strata {
            for hi in &self.strata {
                if hi.subset.len() < lo.subset.len() && hi.subset.is_subset(&lo.subset) {
                    closure.push((stratum_name(&lo.subset), stratum_name(&hi.subset)));
                }
            }
        }
        Ok(Arc::new(StratifiedSpace::new(
            format!("Y over {}", self.base.name()),
            strata,
            closure,
        )?))
    }

    /// The resolution map `f: Y → X` at the level of strata.
    pub fn resolution_map(&self) -> Result<StratMap> {
        let y = self.y_space()?;
        StratMap::from_matrix(
            &y,
            &self.base,
            self.strata.iter().map(|s| s.fibers.clone()).collect(),
        )
    }

    /// The function `Σ_I 1_{E_I^0} / Π_{i∈I}(a_i+1)` on Y.
    pub fn weight_function(&self) -> Result<ConstructibleFn> {
        let y = self.y_space()?;
        ConstructibleFn::from_values(
            &y,
            self.strata.iter().map(|s| self.weight(&s.subset)).collect(),
        )
    }

    pub fn validate(&self, gate: LogTerminalGate) -> Result<ValidationReport> {
        snc_validate(self, gate)
    }

    pub fn to_file(&self) -> SncFile {
        let base_ids: Vec<&str> = self.base.strata().iter().map(|s| s.id.as_str()).collect();
        SncFile {
            base: self.base.to_file(),
            components: self
                .components
                .iter()
                .map(|c| ComponentFile {
                    id: c.id.clone(),
                    a: c.a.clone(),
                })
                .collect(),
            strata: self
                .strata
                .iter()
                .map(|s| SncStratumFile {
                    subset: s.subset.iter().cloned().collect(),
                    chi_c: s.chi_c.clone(),
                    fibers: base_ids
                        .iter()
                        .zip(&s.fibers)
                        .filter(|(_, chi)| !chi.is_zero())
                        .map(|(id, chi)| FiberFile {
                            stratum: id.to_string(),
                            chi: chi.clone(),
                        })
                        .collect(),
                })
                .collect(),
            y_chi_c: self.y_chi_c.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub warnings: Vec<String>,
    pub fubini: FubiniReport,
    /// `(declared, Σ_I χ_c(E_I^0))` when they differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_chi_c_mismatch: Option<(String, String)>,
}

impl ValidationReport {
    pub fn is_consistent(&self) -> bool {
        self.fubini.is_valid() && self.y_chi_c_mismatch.is_none()
    }
}

pub fn snc_validate(d: &SncDatum, gate: LogTerminalGate) -> Result<ValidationReport> {
    let minus_one = -Rational::one();
    let mut report = ValidationReport::default();
    for c in &d.components {
        if c.a == minus_one {
            return Err(Error::DegenerateDiscrepancy {
                component: c.id.clone(),
            });
        }
        if c.a < minus_one {
            match gate {
                LogTerminalGate::Required => {
                    return Err(Error::NotLogTerminal {
                        component: c.id.clone(),
                        a: format_rational(&c.a),
                    })
                }
                LogTerminalGate::AllowBeyond => report.warnings.push(format!(
                    "component `{}` has discrepancy {} < -1: the pair is not log-terminal and \
                     independence of the resolution is an open question; the result is not certified",
                    c.id,
                    format_rational(&c.a)
                )),
            }
        }
    }
    report.fubini = d.resolution_map()?.validate();
    if let Some(declared) = &d.y_chi_c {
        let sum: Integer = d.strata.iter().map(|s| &s.chi_c).sum();
        if &sum != declared {
            report.y_chi_c_mismatch = Some((declared.to_string(), sum.to_string()));
        }
    }
    Ok(report)
}

/// Validation as a precondition: inconsistent data becomes an error.
fn checked(d: &SncDatum, gate: LogTerminalGate) -> Result<ValidationReport> {
    let report = snc_validate(d, gate)?;
    if let Some(v) = report.fubini.violations.first() {
        return Err(Error::InvalidSnc(format!(
            "Fubini check fails on {}: fibers give {}, declared χ_c is {}",
            v.stratum, v.computed, v.expected
        )));
    }
    if let Some((declared, sum)) = &report.y_chi_c_mismatch {
        return Err(Error::InvalidSnc(format!(
            "declared χ_c(Y) = {declared} but the strata sum to {sum}"
        )));
    }
    Ok(report)
}

/// The relative motivic integral of the datum. Needs every `a_i > -1`, since
/// otherwise the geometric sums in the denominators are empty.
pub fn snc_motivic(d: &SncDatum) -> Result<MotivicExpr> {
    checked(d, LogTerminalGate::Required)?;
    let r = d.root();
    let numerator_factor = geom_sum(r as i64, r)?;
    let mut total = MotivicExpr::zero(r);
    for s in &d.strata {
        let backing = ConstructibleFn::from_values(
            &d.base,
            s.fibers
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        )?;
        let mut numerator = LaurentPoly::one(r);
        let mut denom = Vec::with_capacity(s.subset.len());
        for i in &s.subset {
            numerator = &numerator * &numerator_factor;
            let b = d.discrepancy(i) + Rational::one();
            let len = (b * Rational::from_integer(r.into())).to_integer();
            denom.push(u64::try_from(&len).expect("positive geometric sum length"));
        }
        let term = MotivicExpr::term(
            vec![ClassSymbol::backed(
                format!("{{{}}}", stratum_name(&s.subset)),
                backing,
            )],
            numerator,
            denom,
        )?;
        total = total.add(&term);
    }
    Ok(total)
}

/// `Φ = Σ_I f_* 1_{E_I^0} / Π_{i∈I}(a_i+1)`.
pub fn snc_phi(d: &SncDatum, gate: LogTerminalGate) -> Result<ConstructibleFn> {
    checked(d, gate)?;
    d.resolution_map()?.pushforward(&d.weight_function()?)
}

/// `e_st = Σ_I χ_c(E_I^0) / Π_{i∈I}(a_i+1)`.
pub fn stringy_euler(d: &SncDatum, gate: LogTerminalGate) -> Result<Rational> {
    checked(d, gate)?;
    Ok(d.strata
        .iter()
        .map(|s| Rational::from_integer(s.chi_c.clone()) * d.weight(&s.subset))
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumComparison {
    pub stratum: String,
    #[serde(with = "serde_rational")]
    pub first: Rational,
    #[serde(with = "serde_rational")]
    pub second: Rational,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonReport {
    pub strata: Vec<StratumComparison>,
    #[serde(with = "serde_rational")]
    pub e_st_first: Rational,
    #[serde(with = "serde_rational")]
    pub e_st_second: Rational,
    pub euler_equal: bool,
    pub equal: bool,
    pub warnings: Vec<String>,
}

/// Compares Φ and e_st computed from two resolutions of the same base.
pub fn compare_resolutions(
    d1: &SncDatum,
    d2: &SncDatum,
    gate: LogTerminalGate,
) -> Result<ComparisonReport> {
    if d1.base != d2.base {
        return Err(Error::SpaceMismatch(
            d1.base.name().to_string(),
            d2.base.name().to_string(),
        ));
    }
    let mut warnings = checked(d1, gate)?.warnings;
    warnings.extend(checked(d2, gate)?.warnings);
    let p1 = snc_phi(d1, gate)?;
    let p2 = snc_phi(d2, gate)?;
    let strata: Vec<StratumComparison> = d1
        .base
        .strata()
        .iter()
        .zip(p1.values().iter().zip(p2.values()))
        .map(|(s, (a, b))| StratumComparison {
            stratum: s.id.clone(),
            first: a.clone(),
            second: b.clone(),
            equal: a == b,
        })
        .collect();
    let e1 = stringy_euler(d1, gate)?;
    let e2 = stringy_euler(d2, gate)?;
    let euler_equal = e1 == e2;
    let equal = euler_equal && strata.iter().all(|s| s.equal);
    Ok(ComparisonReport {
        strata,
        e_st_first: e1,
        e_st_second: e2,
        euler_equal,
        equal,
        warnings,
    })
}

/// The class on a common resolution of two K-equivalent varieties, at the
/// level of constructible functions, and its two pushforwards.
#[derive(Clone, Debug)]
pub struct KEquivWitness {
    pub c: ConstructibleFn,
    pub push_x: ConstructibleFn,
    pub push_x_prime: ConstructibleFn,
    /// `push_x` equals Φ of the first datum.
    pub matches_phi_x: bool,
    pub matches_phi_x_prime: bool,
}

/// `d` and `d_prime` describe the same Y (same strata and discrepancies)
/// mapping to X and X′ respectively.
pub fn kequiv_witness(
    d: &SncDatum,
    d_prime: &SncDatum,
    gate: LogTerminalGate,
) -> Result<KEquivWitness> {
    if d.components != d_prime.components {
        return Err(Error::DiscrepancyMismatch(
            "K_{Y/X} and K_{Y/X'} have different coefficient lists".into(),
        ));
    }
    let same_y = d.strata.len() == d_prime.strata.len()
        && d.strata
            .iter()
            .zip(&d_prime.strata)
            .all(|(a, b)| a.subset == b.subset && a.chi_c == b.chi_c);
    if !same_y {
        return Err(Error::InvalidSnc(
            "the two data do not describe the same stratification of Y".into(),
        ));
    }
    checked(d, gate)?;
    checked(d_prime, gate)?;
    let c = d.weight_function()?;
    let push_x = d.resolution_map()?.pushforward(&c)?;
    // same weights, relabelled onto the second copy of Y
    let c_prime = ConstructibleFn::from_values(&d_prime.y_space()?, c.values().to_vec())?;
    let push_x_prime = d_prime.resolution_map()?.pushforward(&c_prime)?;
    let matches_phi_x = push_x == snc_phi(d, gate)?;
    let matches_phi_x_prime = push_x_prime == snc_phi(d_prime, gate)?;
    Ok(KEquivWitness {
        c,
        push_x,
        push_x_prime,
        matches_phi_x,
        matches_phi_x_prime,
    })
}

/// Summary of an SNC evaluation, as written into reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SncEvaluation {
    pub root: u64,
    pub phi: Vec<StratumValue>,
    pub phi_integral_valued: bool,
    #[serde(with = "serde_rational")]
    pub e_st: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motivic: Option<crate::motivic::MotivicExprFile>,
    /// Both evaluation routes (motivic, pushforward) agree.
    pub routes_agree: bool,
    pub warnings: Vec<String>,
}

pub fn evaluate(d: &SncDatum, gate: LogTerminalGate) -> Result<SncEvaluation> {
    let report = checked(d, gate)?;
    let phi = snc_phi(d, gate)?;
    let e_st = stringy_euler(d, gate)?;
    let beyond = d
        .components
        .iter()
        .any(|c| c.a.is_negative() && c.a < -Rational::one());
    let (motivic, routes_agree) = if beyond {
        (None, phi.integral() == e_st)
    } else {
        let m = snc_motivic(d)?;
        let agree = m.phi_specialize(&d.base)? == phi
            && m.euler_from_backing(&d.base)? == e_st
            && phi.integral() == e_st;
        (Some(m.to_file()), agree)
    };
    Ok(SncEvaluation {
        root: d.root(),
        phi_integral_valued: phi.is_integral(),
        phi: phi.to_report(),
        e_st,
        motivic,
        routes_agree,
        warnings: report.warnings,
    })
}

// ---- file format ----

fn de_id<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Id {
        Num(u64),
        Str(String),
    }
    Ok(match Id::deserialize(d)? {
        Id::Num(n) => n.to_string(),
        Id::Str(s) => s,
    })
}

fn de_ids<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<String>, D::Error> {
    #[derive(Deserialize)]
    struct W(#[serde(deserialize_with = "de_id")] String);
    Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFile {
    #[serde(deserialize_with = "de_id")]
    pub id: String,
    #[serde(with = "serde_rational")]
    pub a: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberFile {
    pub stratum: String,
    #[serde(with = "serde_integer")]
    pub chi: Integer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SncStratumFile {
    #[serde(rename = "I", deserialize_with = "de_ids")]
    pub subset: Vec<String>,
    #[serde(with = "serde_integer")]
    pub chi_c: Integer,
    #[serde(default)]
    pub fibers: Vec<FiberFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SncFile {
    pub base: SpaceFile,
    pub components: Vec<ComponentFile>,
    pub strata: Vec<SncStratumFile>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_integer")]
    pub y_chi_c: Option<Integer>,
}

mod opt_integer {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(
        v: &Option<Integer>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(n) => serde_integer::serialize(n, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Integer>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "serde_integer")] Integer);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

impl TryFrom<SncFile> for SncDatum {
    type Error = Error;
    fn try_from(f: SncFile) -> Result<Self> {
        let base = Arc::new(StratifiedSpace::try_from(f.base)?);
        let components = f
            .components
            .into_iter()
            .map(|c| Component { id: c.id, a: c.a })
            .collect();
        let strata = f
            .strata
            .into_iter()
            .map(|s| {
                let mut fibers = BTreeMap::new();
                for fb in s.fibers {
                    if fibers.insert(fb.stratum.clone(), fb.chi).is_some() {
                        return Err(Error::InvalidSnc(format!(
                            "fiber over `{}` listed twice",
                            fb.stratum
                        )));
                    }
                }
                Ok((s.subset, s.chi_c, fibers))
            })
            .collect::<Result<Vec<_>>>()?;
        SncDatum::new(base, components, strata, f.y_chi_c)
    }
}

// ---- standard data ----

/// `ℂ²/μ_n` stratified into the smooth locus and the singular point. The
/// labels name the stabilizer strata of the diagonal action.
pub fn cyclic_surface_base(n: u32) -> Arc<StratifiedSpace> {
    Arc::new(
        StratifiedSpace::new(
            format!("C^2/Z_{n}"),
            vec![
                Stratum::new("free", 2, 0).with_label("H0"),
                Stratum::new("origin", 0, 1).with_label("H1"),
            ],
            vec![("origin".into(), "free".into())],
        )
        .expect("valid space"),
    )
}

/// Minimal resolution of the `A_{n-1}` singularity: a chain of `n-1`
/// rational curves, all crepant.
pub fn a_chain(n: u32) -> SncDatum {
    assert!(n >= 2, "A_(n-1) needs n >= 2");
    let base = cyclic_surface_base(n);
    let k = n - 1;
    let ids: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    let components = ids
        .iter()
        .map(|id| Component {
            id: id.clone(),
            a: Rational::zero(),
        })
        .collect();
    let over_origin = |chi: i64| BTreeMap::from([("origin".to_string(), Integer::from(chi))]);
    let mut strata = vec![(
        vec![],
        Integer::zero(),
        BTreeMap::from([("free".to_string(), Integer::one())]),
    )];
    for (i, id) in ids.iter().enumerate() {
        // ℙ¹ minus the points where it meets its neighbours
        let neighbours = [i > 0, i + 1 < k as usize].iter().filter(|b| **b).count() as i64;
        let chi = 2 - neighbours;
        strata.push((vec![id.clone()], chi.into(), over_origin(chi)));
    }
    for w in ids.windows(2) {
        strata.push((w.to_vec(), Integer::one(), over_origin(1)));
    }
    SncDatum::new(base, components, strata, None).expect("valid datum")
}
