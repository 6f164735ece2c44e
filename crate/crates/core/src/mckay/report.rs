use serde::{Deserialize, Serialize};

use crate::algebra::rational::{serde_integer, serde_rational, Integer, Rational};
use crate::constructible::StratumValue;
use crate::error::{Error, Result};
use crate::motivic::MotivicExprFile;
use crate::snc::{snc_phi, stringy_euler, LogTerminalGate, SncDatum, StratumComparison};

use super::McKay;

/// One conjugacy class of G, which is also one piece `M^g/C(g)` of the
/// inertia decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassRow {
    pub representative: usize,
    pub size: usize,
    pub order: u64,
    #[serde(with = "serde_rational")]
    pub age: Rational,
    pub fixed_dim: usize,
    pub centralizer_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumRow {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub stabilizer_order: usize,
    pub normalizer_order: usize,
    pub fixed_dim: usize,
    #[serde(with = "serde_integer")]
    pub chi_c: Integer,
    pub stabilizer_classes: usize,
}

/// Per-stratum check that the pushforwards from the inertia pieces equal
/// the étale degrees `|K_H|/|K_H(h)|` summed over `h ∈ 𝒞(N_H) ∩ H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityRow {
    pub stratum: String,
    #[serde(with = "serde_rational")]
    pub pushforward_sum: Rational,
    #[serde(with = "serde_rational")]
    pub etale_degree_sum: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassCountRow {
    pub subgroup: String,
    pub order: usize,
    #[serde(with = "serde_rational")]
    pub index_sum: Rational,
    pub class_number: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SncAlignment {
    /// `(SNC base stratum, stabilizer stratum)` pairs.
    pub pairs: Vec<(String, String)>,
    pub phi: Vec<StratumComparison>,
    #[serde(with = "serde_rational")]
    pub e_st: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McKayEvaluation {
    pub n: usize,
    pub m: u64,
    pub group_order: usize,
    pub sl: bool,
    pub classes: Vec<ClassRow>,
    pub strata: Vec<StratumRow>,
    pub phi: Vec<StratumValue>,
    #[serde(with = "serde_rational")]
    pub e_st: Rational,
    #[serde(with = "serde_rational")]
    pub e_orbifold: Rational,
    pub motivic: MotivicExprFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McKayReport {
    pub n: usize,
    pub m: u64,
    pub group_order: usize,
    pub classes: Vec<ClassRow>,
    pub strata: Vec<StratumRow>,
    pub phi_first: Vec<StratumValue>,
    pub phi_second: Vec<StratumValue>,
    pub identity: Vec<IdentityRow>,
    pub class_count: Vec<ClassCountRow>,
    pub conjugacy_classes: usize,
    #[serde(with = "serde_rational")]
    pub e_orbifold: Rational,
    #[serde(with = "serde_rational")]
    pub e_st: Rational,
    #[serde(with = "serde_rational")]
    pub motivic_euler: Rational,
    #[serde(with = "serde_integer")]
    pub partition_sum: Integer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snc: Option<SncAlignment>,
    pub verdicts: Vec<Verdict>,
}

impl McKayReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|v| !v.pass)
            .map(|v| v.name.as_str())
            .collect()
    }
}

fn class_rows(mk: &McKay) -> Result<Vec<ClassRow>> {
    let g = mk.group();
    mk.conjugacy_classes()
        .iter()
        .map(|c| {
            let x = c[0];
            Ok(ClassRow {
                representative: x,
                size: c.len(),
                order: g.element_order(x),
                age: mk.age(x)?,
                fixed_dim: g.fixed_dim(&[x]),
                centralizer_order: g.centralizer(x).len(),
            })
        })
        .collect()
}

fn stratum_rows(mk: &McKay) -> Vec<StratumRow> {
    mk.stabilizer_strata()
        .strata()
        .iter()
        .zip(mk.stratum_classes())
        .map(|(s, &i)| {
            let c = &mk.subgroup_classes()[i];
            StratumRow {
                id: s.id.clone(),
                label: s.label.clone(),
                stabilizer_order: c.order(),
                normalizer_order: c.normalizer.len(),
                fixed_dim: c.fix_dim,
                chi_c: s.chi_c.clone(),
                stabilizer_classes: mk.class_number(i),
            }
        })
        .collect()
}

/// Φ_X, e_st and the motivic McKay expression, without cross-checks.
pub fn evaluate_mckay(mk: &McKay) -> Result<McKayEvaluation> {
    let phi = mk.phi_first()?;
    let motivic = mk.motivic_mckay()?;
    Ok(McKayEvaluation {
        n: mk.group().n(),
        m: mk.group().m(),
        group_order: mk.group().order(),
        sl: mk.is_sl(),
        classes: class_rows(mk)?,
        strata: stratum_rows(mk),
        e_st: phi.integral(),
        phi: phi.to_report(),
        e_orbifold: mk.orbifold_euler(),
        motivic: motivic.to_file(),
    })
}

/// Matches each base stratum of `d` with a stabilizer stratum, by label or
/// id, requiring a bijection that preserves χ_c.
fn align(mk: &McKay, d: &SncDatum) -> Result<Vec<(usize, usize)>> {
    let ours = mk.stabilizer_strata();
    let theirs = d.base();
    if ours.len() != theirs.len() {
        return Err(Error::StratumLabelMismatch(format!(
            "the resolution base has {} strata, the quotient has {}",
            theirs.len(),
            ours.len()
        )));
    }
    let mut pairs = Vec::with_capacity(theirs.len());
    let mut used = vec![false; ours.len()];
    for (i, s) in theirs.strata().iter().enumerate() {
        let hits: Vec<usize> = ours
            .strata()
            .iter()
            .enumerate()
            .filter(|(_, o)| {
                s.label.as_deref() == Some(o.id.as_str())
                    || s.id == o.id
                    || o.label.as_deref() == Some(s.id.as_str())
            })
            .map(|(j, _)| j)
            .collect();
        let j = match hits.as_slice() {
            [j] => *j,
            [] => {
                return Err(Error::StratumLabelMismatch(format!(
                    "base stratum `{}` matches no stabilizer stratum",
                    s.id
                )))
            }
            _ => {
                return Err(Error::StratumLabelMismatch(format!(
                    "base stratum `{}` matches several stabilizer strata",
                    s.id
                )))
            }
        };
        if used[j] {
            return Err(Error::StratumLabelMismatch(format!(
                "stabilizer stratum `{}` is matched twice",
                ours.strata()[j].id
            )));
        }
        if ours.strata()[j].chi_c != s.chi_c {
            return Err(Error::StratumLabelMismatch(format!(
                "`{}` has χ_c = {} but `{}` has χ_c = {}",
                s.id,
                s.chi_c,
                ours.strata()[j].id,
                ours.strata()[j].chi_c
            )));
        }
        used[j] = true;
        pairs.push((i, j));
    }
    Ok(pairs)
}

fn verdict(name: &str, pass: bool) -> Verdict {
    Verdict {
        name: name.to_string(),
        pass,
    }
}

/// Every identity checkable from the group, plus agreement with a
/// resolution when one is supplied.
pub fn verify_mckay(
    mk: &McKay,
    d: Option<&SncDatum>,
    gate: LogTerminalGate,
) -> Result<McKayReport> {
    let phi1 = mk.phi_first()?;
    let phi2 = mk.phi_second()?;
    let grp = mk.group();
    let space = mk.stabilizer_strata();

    let mut identity = Vec::new();
    for (k, &i) in mk.stratum_classes().iter().enumerate() {
        let (etale, _) = mk.class_count_identity(i);
        let push = phi2.values()[k].clone();
        identity.push(IdentityRow {
            stratum: space.strata()[k].id.clone(),
            pass: push == etale,
            pushforward_sum: push,
            etale_degree_sum: etale,
        });
    }
    let class_count: Vec<ClassCountRow> = (0..mk.subgroup_classes().len())
        .map(|i| {
            let (lhs, rhs) = mk.class_count_identity(i);
            ClassCountRow {
                subgroup: format!("S{i}"),
                order: mk.subgroup_classes()[i].order(),
                pass: lhs == Rational::from_integer(rhs.into()),
                index_sum: lhs,
                class_number: rhs,
            }
        })
        .collect();

    let mut ages_pair = true;
    for x in 0..grp.order() {
        let lhs = mk.age(x)? + mk.age(grp.inv(x))?;
        let rhs = Rational::from_integer((grp.n() - grp.fixed_dim(&[x])).into());
        ages_pair &= lhs == rhs;
    }

    let conjugacy = mk.conjugacy_classes().len();
    let conj_q = Rational::from_integer(conjugacy.into());
    let e_orbifold = mk.orbifold_euler();
    let e_st = phi1.integral();
    let motivic_euler = mk.motivic_mckay()?.euler_from_backing(space)?;
    let partition_sum = mk.partition_sum();

    let mut verdicts = vec![
        verdict("phi_first = phi_second on every stratum", phi1 == phi2),
        verdict(
            "pushforwards = etale degrees on every stratum",
            identity.iter().all(|r| r.pass),
        ),
        verdict(
            "class-count identity for every subgroup class",
            class_count.iter().all(|r| r.pass),
        ),
        verdict("age(g) + age(g^-1) = n - dim Fix(g)", ages_pair),
        verdict("Burnside e(M,G) = |C(G)|", e_orbifold == conj_q),
        verdict("integral of Phi = e(M,G)", e_st == e_orbifold),
        verdict(
            "Euler specialization of motivic McKay = integral of Phi",
            motivic_euler == e_st,
        ),
        verdict(
            "stabilizer strata partition M",
            partition_sum == Integer::from(1),
        ),
    ];

    let snc = match d {
        None => None,
        Some(d) => {
            let pairs = align(mk, d)?;
            let phi_d = snc_phi(d, gate)?;
            let e_d = stringy_euler(d, gate)?;
            let phi: Vec<StratumComparison> = pairs
                .iter()
                .map(|&(i, j)| {
                    let first = phi_d.values()[i].clone();
                    let second = phi1.values()[j].clone();
                    StratumComparison {
                        stratum: space.strata()[j].id.clone(),
                        equal: first == second,
                        first,
                        second,
                    }
                })
                .collect();
            verdicts.push(verdict(
                "resolution Phi = phi_first",
                phi.iter().all(|c| c.equal),
            ));
            verdicts.push(verdict("resolution e_st = e(M,G)", e_d == e_orbifold));
            Some(SncAlignment {
                pairs: pairs
                    .iter()
                    .map(|&(i, j)| {
                        (
                            d.base().strata()[i].id.clone(),
                            space.strata()[j].id.clone(),
                        )
                    })
                    .collect(),
                phi,
                e_st: e_d,
            })
        }
    };

    Ok(McKayReport {
        n: grp.n(),
        m: grp.m(),
        group_order: grp.order(),
        classes: class_rows(mk)?,
        strata: stratum_rows(mk),
        phi_first: phi1.to_report(),
        phi_second: phi2.to_report(),
        identity,
        class_count,
        conjugacy_classes: conjugacy,
        e_orbifold,
        e_st,
        motivic_euler,
        partition_sum,
        snc,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::mckay::group::tests::quaternion;
    use crate::mckay::{GroupLimits, LinearAction};
    use crate::snc::a_chain;

    const REQ: LogTerminalGate = LogTerminalGate::Required;

    #[test]
    fn cyclic_series_with_chains() {
        for n in 2..=6u32 {
            let a = LinearAction::diagonal(n as u64, &[vec![1, n as i64 - 1]]).unwrap();
            let mk = McKay::from_action(&a, GroupLimits::default()).unwrap();
            let r = verify_mckay(&mk, Some(&a_chain(n)), REQ).unwrap();
            assert!(r.all_pass(), "n = {n}: {:?}", r.failed());
            assert_eq!(r.e_orbifold, int(n as i64));
            assert_eq!(r.snc.unwrap().e_st, int(n as i64));
        }
    }

    #[test]
    fn quaternion_without_datum() {
        let mk = McKay::from_action(&quaternion(), GroupLimits::default()).unwrap();
        let r = verify_mckay(&mk, None, REQ).unwrap();
        assert!(r.all_pass(), "{:?}", r.failed());
        assert_eq!(r.conjugacy_classes, 5);
        assert_eq!(r.e_st, int(5));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<McKayReport>(&json).unwrap(), r);
    }

    #[test]
    fn misaligned_datum() {
        let a = LinearAction::diagonal(3, &[vec![1, 2]]).unwrap();
        let mk = McKay::from_action(&a, GroupLimits::default()).unwrap();
        // the A_1 chain aligns with the strata of ℤ3 but its values differ
        let r = verify_mckay(&mk, Some(&a_chain(2)), REQ).unwrap();
        assert!(!r.all_pass());
        let z = LinearAction::diagonal(2, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let k = McKay::from_action(&z, GroupLimits::default()).unwrap();
        assert!(matches!(
            verify_mckay(&k, Some(&a_chain(2)), REQ),
            Err(Error::StratumLabelMismatch(_))
        ));
    }
}
