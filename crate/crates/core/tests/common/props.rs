//! Property checks shared by the property suite and the acceptance runner.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use stringy_core::constructible::{ConstructibleFn, StratMap, StratifiedSpace};
use stringy_core::mckay::McKay;
use stringy_core::motivic::MotivicExpr;
use stringy_core::snc::{snc_motivic, snc_phi, stringy_euler, LogTerminalGate, SncDatum};

use super::*;

pub const CASES: u32 = 1000;

pub fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

pub fn ring_axioms(a: &MotivicExpr, b: &MotivicExpr, c: &MotivicExpr) -> Result<(), TestCaseError> {
    let zero = MotivicExpr::zero(ROOT);
    let one = MotivicExpr::one(ROOT);
    prop_assert_eq!(a.add(b), b.add(a));
    prop_assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
    prop_assert_eq!(a.add(&zero), a.clone());
    prop_assert!(a.add(&a.neg()).is_zero());
    prop_assert_eq!(a.mul(b), b.mul(a));
    prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
    prop_assert_eq!(a.mul(&one), a.clone());
    prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
    Ok(())
}

pub fn phi_homomorphism(
    base: &Arc<StratifiedSpace>,
    a: &MotivicExpr,
    b: &MotivicExpr,
) -> Result<(), TestCaseError> {
    let pa = a.phi_specialize(base).unwrap();
    let pb = b.phi_specialize(base).unwrap();
    prop_assert_eq!(a.add(b).phi_specialize(base).unwrap(), pa.add(&pb).unwrap());
    prop_assert_eq!(a.mul(b).phi_specialize(base).unwrap(), pa.mul(&pb).unwrap());
    prop_assert_eq!(
        MotivicExpr::one(ROOT).phi_specialize(base).unwrap(),
        ConstructibleFn::constant(base, q(1))
    );
    Ok(())
}

pub fn functoriality(
    f: &StratMap,
    g: &StratMap,
    phi: &ConstructibleFn,
) -> Result<(), TestCaseError> {
    let gf = f.then(g).unwrap();
    prop_assert_eq!(
        gf.pushforward(phi).unwrap(),
        g.pushforward(&f.pushforward(phi).unwrap()).unwrap()
    );
    // the integral is the pushforward to a point
    let to_pt = StratMap::to_point(g.target());
    let pushed = to_pt.pushforward(&gf.pushforward(phi).unwrap()).unwrap();
    prop_assert_eq!(
        pushed.values()[0].clone(),
        gf.pushforward(phi).unwrap().integral()
    );
    Ok(())
}

/// A Fubini-consistent map validates; bumping a fiber over a stratum with
/// nonzero χ_c is caught.
pub fn fubini(map: &StratMap, row: usize) -> Result<(), TestCaseError> {
    prop_assert!(map.validate().is_valid());
    let target = map.target();
    if let Some(col) = target.strata().iter().position(|s| s.chi_c != 0.into()) {
        let mut rows = map.fiber_chi().to_vec();
        let r = row % rows.len();
        rows[r][col] += 1;
        let bad = StratMap::from_matrix(map.source(), target, rows).unwrap();
        let report = bad.validate();
        prop_assert_eq!(report.violations.len(), 1);
        prop_assert_eq!(&report.violations[0].stratum, &map.source().strata()[r].id);
    }
    Ok(())
}

pub fn closed_basis_round_trip(f: &ConstructibleFn) -> Result<(), TestCaseError> {
    let coeffs = f.closed_basis();
    let back = ConstructibleFn::from_closed_basis(f.space(), &coeffs).unwrap();
    prop_assert_eq!(&back, f);
    Ok(())
}

pub fn snc_routes(d: &SncDatum) -> Result<(), TestCaseError> {
    let gate = LogTerminalGate::Required;
    let m = snc_motivic(d).unwrap();
    let e = stringy_euler(d, gate).unwrap();
    prop_assert_eq!(m.euler_from_backing(d.base()).unwrap(), e.clone());
    let phi = snc_phi(d, gate).unwrap();
    prop_assert_eq!(m.phi_specialize(d.base()).unwrap(), phi.clone());
    prop_assert_eq!(phi.integral(), e);
    Ok(())
}

/// Ages pair up and are integers, for every element.
pub fn ages(mk: &McKay) -> bool {
    let g = mk.group();
    (0..g.order()).all(|x| {
        let a = mk.age(x).unwrap();
        let b = mk.age(g.inv(x)).unwrap();
        let codim = (g.n() - g.fixed_dim(&[x])) as i64;
        a.is_integer() && a + b == q(codim)
    })
}

pub fn class_counts(mk: &McKay) -> bool {
    (0..mk.subgroup_classes().len()).all(|i| {
        let (lhs, rhs) = mk.class_count_identity(i);
        lhs == q(rhs as i64)
    })
}
