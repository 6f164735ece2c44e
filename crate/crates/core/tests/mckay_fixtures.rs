mod common;

use common::*;
use stringy_core::mckay::{verify_mckay, GroupLimits, McKay};
use stringy_core::snc::{a_chain, LogTerminalGate};
use stringy_core::Error;

#[test]
fn class_counts_and_euler_numbers() {
    for &(name, classes) in SL_GROUPS {
        let mk = mckay(name);
        assert!(mk.is_sl(), "{name}");
        assert_eq!(mk.conjugacy_classes().len(), classes, "{name}");
        assert_eq!(mk.orbifold_euler(), q(classes as i64), "{name}");
        let r = verify_mckay(&mk, None, LogTerminalGate::Required).unwrap();
        assert!(r.all_pass(), "{name}: {:?}", r.failed());
        assert_eq!(r.e_st, q(classes as i64), "{name}");
    }
}

#[test]
fn quaternion_details() {
    let mk = mckay("q8.json");
    assert_eq!(mk.group().order(), 8);
    let mut sizes: Vec<usize> = mk.conjugacy_classes().iter().map(Vec::len).collect();
    sizes.sort();
    assert_eq!(sizes, [1, 1, 2, 2, 2]);
    assert_eq!(mk.subgroup_classes().len(), 6);
    assert_eq!(mk.phi_first().unwrap().values(), &[q(1), q(5)]);
    assert_eq!(mk.phi_second().unwrap().values(), &[q(1), q(5)]);
    let chis: Vec<_> = mk
        .stabilizer_strata()
        .strata()
        .iter()
        .map(|s| s.chi_c.clone())
        .collect();
    assert_eq!(chis, vec![0.into(), 1.into()]);
}

#[test]
fn z3_in_sl3() {
    let mk = mckay("z3_sl3.json");
    let mut ages: Vec<_> = (0..3).map(|x| mk.age(x).unwrap()).collect();
    ages.sort();
    assert_eq!(ages, [q(0), q(1), q(2)]);
    let e = mk.motivic_mckay().unwrap();
    assert_eq!(e.euler_from_backing(mk.stabilizer_strata()).unwrap(), q(3));
}

#[test]
fn cyclic_groups_against_chains() {
    for n in 2..=6u32 {
        let mk = mckay(&format!("z{n}.json"));
        let r = verify_mckay(&mk, Some(&a_chain(n)), LogTerminalGate::Required).unwrap();
        assert!(r.all_pass(), "n = {n}: {:?}", r.failed());
        assert_eq!(r.snc.as_ref().unwrap().e_st, q(n as i64));
        assert_eq!(r.e_orbifold, q(n as i64));
    }
}

#[test]
fn a1_fixtures_against_z2() {
    let mk = mckay("z2.json");
    for name in ["a1_minimal.json", "a1_blowup.json"] {
        let r = verify_mckay(&mk, Some(&snc(name)), LogTerminalGate::Required).unwrap();
        assert!(r.all_pass(), "{name}: {:?}", r.failed());
    }
    let r = verify_mckay(
        &mk,
        Some(&snc("a1_blowup_wrong.json")),
        LogTerminalGate::Required,
    )
    .unwrap();
    assert!(!r.all_pass());
}

#[test]
fn non_sl_is_rejected() {
    let mk = mckay("z2_nonsl.json");
    assert!(!mk.is_sl());
    assert!(matches!(mk.phi_first(), Err(Error::SlGateFailed { .. })));
    assert!(matches!(
        verify_mckay(&mk, None, LogTerminalGate::Required),
        Err(Error::SlGateFailed { .. })
    ));
}

#[test]
fn cap_is_enforced() {
    let a = action("binary_tetrahedral.json");
    assert!(matches!(
        McKay::from_action(&a, GroupLimits::uniform(20)),
        Err(Error::CapExceeded { cap: 20 })
    ));
    assert!(matches!(
        McKay::from_action(
            &a,
            GroupLimits {
                closure_cap: 100,
                subgroup_cap: 10
            }
        ),
        Err(Error::SubgroupEnumerationCap {
            order: 24,
            bound: 10
        })
    ));
}
