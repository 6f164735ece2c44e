#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use proptest::prelude::*;
use stringy_core::algebra::{LaurentPoly, Rational};
use stringy_core::cli::{parse_input, Input, InputKind};
use stringy_core::constructible::{ConstructibleFn, StratMap, StratifiedSpace, Stratum};
use stringy_core::mckay::{GroupLimits, LinearAction, McKay};
use stringy_core::motivic::{ClassSymbol, MotivicExpr};
use stringy_core::snc::{Component, SncDatum};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn snc(name: &str) -> SncDatum {
    match parse_input(&fixture(name), InputKind::Snc).unwrap() {
        Input::Snc(d) => d,
        _ => unreachable!(),
    }
}

pub fn action(name: &str) -> LinearAction {
    match parse_input(&fixture(name), InputKind::Action).unwrap() {
        Input::Action(a) => a,
        _ => unreachable!(),
    }
}

pub fn mckay(name: &str) -> McKay {
    McKay::from_action(&action(name), GroupLimits::default()).unwrap()
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn qq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// SL test groups with their expected number of conjugacy classes.
pub const SL_GROUPS: &[(&str, usize)] = &[
    ("z2.json", 2),
    ("z3.json", 3),
    ("z4.json", 4),
    ("z5.json", 5),
    ("z6.json", 6),
    ("q8.json", 5),
    ("binary_tetrahedral.json", 7),
    ("z3_sl3.json", 3),
    ("z2xz2_sl3.json", 4),
    ("s3_sl3.json", 3),
];

// ---- motivic expressions over a fixed base ----

pub const ROOT: u64 = 2;

pub fn three_strata() -> Arc<StratifiedSpace> {
    Arc::new(
        StratifiedSpace::new(
            "base",
            vec![
                Stratum::new("U", 2, -1),
                Stratum::new("C", 1, 2),
                Stratum::new("P", 0, 1),
            ],
            vec![("P".into(), "C".into()), ("C".into(), "U".into())],
        )
        .unwrap(),
    )
}

fn backed_symbol(base: &Arc<StratifiedSpace>, k: usize) -> ClassSymbol {
    let tables = [[1, 0, 2], [0, 3, 1], [2, 2, 0]];
    let values = tables[k].iter().map(|&v| q(v)).collect();
    ClassSymbol::backed(
        format!("{{V{k}}}"),
        ConstructibleFn::from_values(base, values).unwrap(),
    )
}

prop_compose! {
    fn arb_term(base: Arc<StratifiedSpace>)(
        syms in proptest::collection::vec(0usize..3, 0..3),
        coeffs in proptest::collection::btree_map(-2i64..4, -3i64..4, 1..3),
        denom in proptest::collection::vec(1u64..4, 0..3),
    ) -> MotivicExpr {
        let symbols = syms.into_iter().map(|k| backed_symbol(&base, k)).collect();
        let mut numerator = LaurentPoly::zero(ROOT);
        for (e, c) in coeffs {
            numerator = &numerator + &LaurentPoly::monomial(ROOT, e, q(c));
        }
        MotivicExpr::term(symbols, numerator, denom).unwrap()
    }
}

pub fn arb_expr(base: Arc<StratifiedSpace>) -> impl Strategy<Value = MotivicExpr> {
    proptest::collection::vec(arb_term(base), 0..4).prop_map(|terms| {
        terms
            .iter()
            .fold(MotivicExpr::zero(ROOT), |acc, t| acc.add(t))
    })
}

// ---- random spaces and maps ----

/// A space whose strata are ordered by strictly decreasing dimension, with
/// closure relations drawn from `links`.
pub fn arb_space(name: &'static str, max: usize) -> impl Strategy<Value = Arc<StratifiedSpace>> {
    (1..=max)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(-3i64..4, n),
                proptest::collection::vec(any::<bool>(), n * n),
            )
        })
        .prop_map(move |(chis, links)| {
            let n = chis.len();
            let strata = chis
                .iter()
                .enumerate()
                .map(|(i, &c)| Stratum::new(format!("{name}{i}"), (n - i) as u32, c))
                .collect();
            let mut closure = Vec::new();
            for lo in 0..n {
                for hi in 0..lo {
                    if links[lo * n + hi] {
                        closure.push((format!("{name}{lo}"), format!("{name}{hi}")));
                    }
                }
            }
            Arc::new(StratifiedSpace::new(name, strata, closure).unwrap())
        })
}

pub fn arb_map(
    source: Arc<StratifiedSpace>,
    target: Arc<StratifiedSpace>,
) -> impl Strategy<Value = StratMap> {
    let (s, t) = (source.len(), target.len());
    proptest::collection::vec(0i64..4, s * t).prop_map(move |v| {
        let rows = (0..s)
            .map(|i| (0..t).map(|j| v[i * t + j].into()).collect())
            .collect();
        StratMap::from_matrix(&source, &target, rows).unwrap()
    })
}

pub fn arb_fn(space: Arc<StratifiedSpace>) -> impl Strategy<Value = ConstructibleFn> {
    let n = space.len();
    proptest::collection::vec((-6i64..7, 1i64..4), n).prop_map(move |v| {
        ConstructibleFn::from_values(&space, v.into_iter().map(|(a, b)| qq(a, b)).collect())
            .unwrap()
    })
}

/// A map `Y → X` whose source Euler characteristics are forced by Fubini.
pub fn arb_consistent_map(
    target: Arc<StratifiedSpace>,
    max_source: usize,
) -> impl Strategy<Value = StratMap> {
    let t = target.len();
    (1..=max_source)
        .prop_flat_map(move |s| proptest::collection::vec(0i64..4, s * t))
        .prop_map(move |v| {
            let s = v.len() / t;
            let strata = (0..s)
                .map(|i| {
                    let chi: i64 = (0..t)
                        .map(|j| v[i * t + j] * i64::try_from(&target.strata()[j].chi_c).unwrap())
                        .sum();
                    Stratum::new(format!("y{i}"), (s - i) as u32, chi)
                })
                .collect();
            let source = Arc::new(StratifiedSpace::new("Y", strata, vec![]).unwrap());
            let rows = (0..s)
                .map(|i| (0..t).map(|j| v[i * t + j].into()).collect())
                .collect();
            StratMap::from_matrix(&source, &target, rows).unwrap()
        })
}

// ---- random SNC data ----

fn snc_base() -> Arc<StratifiedSpace> {
    Arc::new(
        StratifiedSpace::new(
            "X",
            vec![
                Stratum::new("U", 4, -2),
                Stratum::new("Z", 1, 3),
                Stratum::new("P", 0, 1),
            ],
            vec![("P".into(), "Z".into()), ("Z".into(), "U".into())],
        )
        .unwrap(),
    )
}

/// Valid data: discrepancies `p/q > -1`, at most four components, and
/// stratum Euler characteristics forced by their fibers.
pub fn arb_snc() -> impl Strategy<Value = SncDatum> {
    (0usize..=4)
        .prop_flat_map(|k| {
            (
                proptest::collection::vec((0i64..9, 1i64..5), k),
                proptest::collection::btree_map(
                    0u32..(1u32 << k),
                    proptest::collection::vec(0i64..3, 3),
                    1..8,
                ),
            )
        })
        .prop_map(|(disc, subsets)| {
            let base = snc_base();
            let components: Vec<Component> = disc
                .iter()
                .enumerate()
                .map(|(i, &(p, d))| Component {
                    id: format!("e{i}"),
                    // p/d - 1 + 1/d > -1 always
                    a: qq(p, d) - q(1) + qq(1, d),
                })
                .collect();
            let strata = subsets
                .into_iter()
                .map(|(mask, fib)| {
                    let ids: Vec<String> = (0..components.len())
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| format!("e{i}"))
                        .collect();
                    let chi: i64 = fib[0] * -2 + fib[1] * 3 + fib[2];
                    let fibers: BTreeMap<String, _> = ["U", "Z", "P"]
                        .iter()
                        .zip(&fib)
                        .map(|(s, &c)| (s.to_string(), c.into()))
                        .collect();
                    (ids, chi.into(), fibers)
                })
                .collect();
            SncDatum::new(base, components, strata, None).unwrap()
        })
}
pub mod props;
