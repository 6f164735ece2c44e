//! McKay correspondence for finite linear actions `G ⊂ GL_n` on `M = ℂⁿ`
//! with quotient `X = M/G`.

pub mod action;
pub mod group;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::laurent::LaurentPoly;
use crate::algebra::matrix::eigen_exponents;
use crate::algebra::rational::{format_rational, Integer, Rational};
use crate::constructible::{ConstructibleFn, StratifiedSpace, Stratum};
use crate::error::{Error, Result};
use crate::motivic::{ClassSymbol, MotivicExpr};

pub use action::LinearAction;
pub use group::{FiniteGroup, GroupLimits, Subgroup, SubgroupClass};
pub use report::{
    evaluate_mckay, verify_mckay, ClassCountRow, ClassRow, IdentityRow, McKayEvaluation,
    McKayReport, SncAlignment, StratumRow, Verdict,
};

pub fn close_group(action: &LinearAction, limits: GroupLimits) -> Result<FiniteGroup> {
    FiniteGroup::close(action, limits)
}

/// Every element has determinant 1.
pub fn sl_gate(g: &FiniteGroup) -> bool {
    g.is_sl()
}

/// `age(g) = (Σ a_j)/d` where `d` is the order of `g` and `ζ_d^{a_j}` are
/// its eigenvalues.
pub fn raw_age(g: &FiniteGroup, x: usize) -> Result<Rational> {
    let d = g.element_order(x);
    let exps = eigen_exponents(g.element(x), d)?;
    let sum: u64 = exps.iter().sum();
    Ok(Rational::new(sum.into(), d.into()))
}

/// The group together with everything derived from it: classes, subgroup
/// classes, and the stratification of X by stabilizer type.
#[derive(Clone, Debug)]
pub struct McKay {
    group: FiniteGroup,
    sl: bool,
    classes: Vec<Vec<usize>>,
    subgroups: Vec<SubgroupClass>,
    /// Class index of every subgroup.
    class_of: BTreeMap<Subgroup, usize>,
    /// `χ_c(M^H)` per subgroup class.
    chi_m: Vec<Integer>,
    /// Subgroup classes that occur as stabilizers, in stratum order.
    strata: Vec<usize>,
    space: Arc<StratifiedSpace>,
}

impl McKay {
    pub fn new(group: FiniteGroup) -> Result<Self> {
        let sl = group.is_sl();
        let classes = group.conjugacy_classes();
        let subgroups = group.subgroup_classes()?;
        let mut class_of = BTreeMap::new();
        for (i, c) in subgroups.iter().enumerate() {
            for h in &c.members {
                class_of.insert(h.clone(), i);
            }
        }
        let contains = |big: &Subgroup, small: &Subgroup| {
            big.len() > small.len() && small.iter().all(|x| big.binary_search(x).is_ok())
        };
        // Fix(H) is the disjoint union of the M^{H'} over all H' ⊇ H, each a
        // linear subspace minus smaller ones, so χ_c(M^H) = 1 - Σ_{H' ⊋ H} χ_c(M^{H'}).
        let mut chi_m = vec![Integer::zero(); subgroups.len()];
        for i in (0..subgroups.len()).rev() {
            let rep = &subgroups[i].rep;
            let mut chi = Integer::one();
            for (h, &j) in &class_of {
                if contains(h, rep) {
                    chi -= &chi_m[j];
                }
            }
            chi_m[i] = chi;
        }
        // M^H ≠ ∅ iff no strictly larger subgroup has the same fixed space
        let isotropy: Vec<bool> = subgroups
            .iter()
            .map(|c| {
                !class_of
                    .iter()
                    .any(|(h, &j)| contains(h, &c.rep) && subgroups[j].fix_dim == c.fix_dim)
            })
            .collect();
        for (i, iso) in isotropy.iter().enumerate() {
            if !iso && !chi_m[i].is_zero() {
                return Err(Error::InvalidSpace(format!(
                    "subgroup class {i} is not a stabilizer but χ_c(M^H) = {}",
                    chi_m[i]
                )));
            }
        }
        let strata: Vec<usize> = (0..subgroups.len()).filter(|&i| isotropy[i]).collect();
        let mut space_strata = Vec::with_capacity(strata.len());
        for (k, &i) in strata.iter().enumerate() {
            let c = &subgroups[i];
            let index = Integer::from(c.normalizer.len() / c.order());
            let (q, r) = num_integer::Integer::div_rem(&chi_m[i], &index);
            if !r.is_zero() {
                return Err(Error::InvalidSpace(format!(
                    "χ_c(M^H) = {} is not divisible by [N_H : H] = {index}",
                    chi_m[i]
                )));
            }
            let mut s = Stratum {
                id: format!("H{k}"),
                dim: c.fix_dim as u32,
                chi_c: q,
                label: None,
            };
            if c.order() == 1 {
                s.label = Some("free".into());
            } else if c.fix_dim == 0 {
                s.label = Some("origin".into());
            }
            space_strata.push(s);
        }
        let mut closure = Vec::new();
        for (a, &i) in strata.iter().enumerate() {
            for (b, &j) in strata.iter().enumerate() {
                if i != j && subgroups[j].contains_conjugate_of(&subgroups[i]) {
                    closure.push((format!("H{b}"), format!("H{a}")));
                }
            }
        }
        let space = Arc::new(StratifiedSpace::new(
            format!("C^{}/G, |G| = {}", group.n(), group.order()),
            space_strata,
            closure,
        )?);
        Ok(Self {
            group,
            sl,
            classes,
            subgroups,
            class_of,
            chi_m,
            strata,
            space,
        })
    }

    pub fn from_action(action: &LinearAction, limits: GroupLimits) -> Result<Self> {
        Self::new(FiniteGroup::close(action, limits)?)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn is_sl(&self) -> bool {
        self.sl
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Smallest element of each conjugacy class.
    pub fn class_reps(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn subgroup_classes(&self) -> &[SubgroupClass] {
        &self.subgroups
    }

    pub fn chi_m(&self, class: usize) -> &Integer {
        &self.chi_m[class]
    }

    /// Subgroup class of each stratum of [`Self::stabilizer_strata`].
    pub fn stratum_classes(&self) -> &[usize] {
        &self.strata
    }

    pub fn stabilizer_strata(&self) -> &Arc<StratifiedSpace> {
        &self.space
    }

    fn require_sl(&self) -> Result<()> {
        match self.group.sl_violation() {
            None => Ok(()),
            Some(element) => Err(Error::SlGateFailed { element }),
        }
    }

    /// Age of an element; integral under the SL gate.
    pub fn age(&self, x: usize) -> Result<Rational> {
        let a = raw_age(&self.group, x)?;
        if self.sl && !a.is_integer() {
            return Err(Error::NonIntegralAge {
                element: x,
                age: format_rational(&a),
            });
        }
        Ok(a)
    }

    /// χ_c of the fiber of `π_g: M^g/C(g) → X` over a point of `X^H`: the
    /// number of `C(g)`-orbits on `{Hk : k g k⁻¹ ∈ H}`.
    pub fn fiber_count(&self, g: usize, class: usize) -> usize {
        let grp = &self.group;
        let h = &self.subgroups[class].rep;
        let coset = |k: usize| {
            h.iter()
                .map(|&x| grp.mul(x, k))
                .min()
                .expect("H is nonempty")
        };
        let good: BTreeSet<usize> = (0..grp.order())
            .filter(|&k| h.binary_search(&grp.conj(k, g)).is_ok())
            .map(coset)
            .collect();
        let cent = grp.centralizer(g);
        let mut seen = BTreeSet::new();
        let mut orbits = 0;
        for &c in &good {
            if !seen.insert(c) {
                continue;
            }
            orbits += 1;
            let mut stack = vec![c];
            while let Some(k) = stack.pop() {
                for &z in &cent {
                    let next = coset(grp.mul(k, z));
                    if seen.insert(next) {
                        stack.push(next);
                    }
                }
            }
        }
        orbits
    }

    /// Number of conjugacy classes of the group `H` itself.
    pub fn class_number(&self, class: usize) -> usize {
        let h = &self.subgroups[class].rep;
        self.group.classes_in(h, h).len()
    }

    /// `Φ_X = Σ_H |𝒞(H)| 1_{X^H}`.
    pub fn phi_first(&self) -> Result<ConstructibleFn> {
        self.require_sl()?;
        let values = self
            .strata
            .iter()
            .map(|&i| Rational::from_integer(self.class_number(i).into()))
            .collect();
        ConstructibleFn::from_values(&self.space, values)
    }

    /// `Φ_X = Σ_{g ∈ 𝒞(G)} (π_g)_* 1_{M^g/C(g)}`.
    pub fn phi_second(&self) -> Result<ConstructibleFn> {
        self.require_sl()?;
        let reps = self.class_reps();
        let values = self
            .strata
            .iter()
            .map(|&i| {
                let total: usize = reps.iter().map(|&g| self.fiber_count(g, i)).sum();
                Rational::from_integer(total.into())
            })
            .collect();
        ConstructibleFn::from_values(&self.space, values)
    }

    /// `e(M,G) = Σ_{g ∈ 𝒞(G)} χ_c(M^g/C(g))`, each quotient by the Burnside
    /// average `(1/|Γ|) Σ_γ χ_c(Y^γ)`.
    pub fn orbifold_euler(&self) -> Rational {
        let grp = &self.group;
        let mut total = Rational::zero();
        for g in self.class_reps() {
            let cent = grp.centralizer(g);
            let mut sum = Rational::zero();
            for &c in &cent {
                // M^g ∩ M^c is a linear subspace, so χ_c = 1 whatever its dimension
                let _dim = grp.fixed_dim(&[g, c]);
                sum += Rational::one();
            }
            total += sum / Rational::from_integer(cent.len().into());
        }
        total
    }

    /// `Σ_H {X^H} · Σ_{h ∈ 𝒞(H)} L^{age(h)}` in `t = L^{1/m}`.
    pub fn motivic_mckay(&self) -> Result<MotivicExpr> {
        self.require_sl()?;
        let r = self.group.m();
        let mut total = MotivicExpr::zero(r);
        for (k, &i) in self.strata.iter().enumerate() {
            let h = &self.subgroups[i].rep;
            let mut numerator = LaurentPoly::zero(r);
            for class in self.group.classes_in(h, h) {
                let age = self.age(class[0])?;
                let e = (age * Rational::from_integer(r.into())).to_integer();
                let e = i64::try_from(e).expect("age exponent fits in i64");
                numerator = &numerator + &LaurentPoly::monomial(r, e, Rational::one());
            }
            let symbol = if self.strata.len() == 1 {
                ClassSymbol::base()
            } else {
                let id = format!("H{k}");
                ClassSymbol::backed(
                    format!("{{X^{id}}}"),
                    ConstructibleFn::indicator(&self.space, &id)?,
                )
            };
            total = total.add(&MotivicExpr::term(vec![symbol], numerator, vec![])?);
        }
        Ok(total)
    }

    /// Both sides of `Σ_{h ∈ 𝒞(N_H) ∩ H} |K_H|/|K_H(h)| = |𝒞(H)|`, where
    /// `K_H = N_H/H` and `K_H(h) = C_{N_H}(h)/C_H(h)`.
    pub fn class_count_identity(&self, class: usize) -> (Rational, usize) {
        let grp = &self.group;
        let c = &self.subgroups[class];
        let h = &c.rep;
        let n = &c.normalizer;
        let k = Rational::new(n.len().into(), h.len().into());
        let commuting = |set: &[usize], x: usize| {
            set.iter()
                .filter(|&&y| grp.mul(x, y) == grp.mul(y, x))
                .count()
        };
        let lhs = grp
            .classes_in(n, h)
            .iter()
            .map(|cls| {
                let x = cls[0];
                let k_x = Rational::new(commuting(n, x).into(), commuting(h, x).into());
                &k / k_x
            })
            .sum();
        (lhs, self.class_number(class))
    }

    /// `Σ_H [G : N_H] χ_c(M^H)`, which must be `χ_c(ℂⁿ) = 1`.
    pub fn partition_sum(&self) -> Integer {
        self.subgroups
            .iter()
            .zip(&self.chi_m)
            .map(|(c, chi)| Integer::from(c.conjugates()) * chi)
            .sum()
    }

    pub fn subgroup_class_of(&self, h: &Subgroup) -> Option<usize> {
        self.class_of.get(h).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::group::tests::{binary_tetrahedral, quaternion};
    use super::*;
    use crate::algebra::rational::int;

    fn mk(a: &LinearAction) -> McKay {
        McKay::from_action(a, GroupLimits::default()).unwrap()
    }

    fn diag(r: u64, w: &[i64]) -> McKay {
        mk(&LinearAction::diagonal(r, &[w.to_vec()]).unwrap())
    }

    #[test]
    fn sl_gate_examples() {
        assert!(diag(2, &[1, 1]).is_sl());
        assert!(!diag(2, &[1, 0]).is_sl());
        assert!(mk(&quaternion()).is_sl());
        let m = diag(2, &[1, 0]);
        assert!(matches!(
            m.phi_first(),
            Err(Error::SlGateFailed { element: 1 })
        ));
        assert!(m.motivic_mckay().is_err());
    }

    #[test]
    fn ages() {
        let m = diag(2, &[1, 1]);
        assert_eq!(m.age(0).unwrap(), int(0));
        assert_eq!(m.age(1).unwrap(), int(1));
        let m = diag(3, &[1, 1, 1]);
        let mut ages: Vec<Rational> = (0..3).map(|x| m.age(x).unwrap()).collect();
        ages.sort();
        assert_eq!(ages, vec![int(0), int(1), int(2)]);
        // non-SL: fractional ages are allowed
        let m = diag(2, &[1, 0]);
        assert_eq!(m.age(1).unwrap(), Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn strata_examples() {
        let triv = mk(&LinearAction::new(3, 1, vec![]).unwrap());
        let s = triv.stabilizer_strata();
        assert_eq!(s.len(), 1);
        assert_eq!(s.strata()[0].chi_c, 1.into());

        for m in [
            diag(2, &[1, 1]),
            mk(&quaternion()),
            mk(&binary_tetrahedral()),
        ] {
            let s = m.stabilizer_strata();
            let chis: Vec<Integer> = s.strata().iter().map(|x| x.chi_c.clone()).collect();
            assert_eq!(chis, vec![0.into(), 1.into()]);
            assert_eq!(s.strata()[0].label.as_deref(), Some("free"));
            assert_eq!(s.strata()[1].label.as_deref(), Some("origin"));
            assert!(s.leq(1, 0));
            assert_eq!(m.partition_sum(), 1.into());
        }
    }

    #[test]
    fn strata_with_positive_dimensional_fixed_loci() {
        // ℤ2×ℤ2 ⊂ SL3 by sign changes: three coordinate axes plus the origin
        let a = LinearAction::diagonal(2, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let m = mk(&a);
        let s = m.stabilizer_strata();
        assert_eq!(s.len(), 5);
        let dims: Vec<u32> = s.strata().iter().map(|x| x.dim).collect();
        assert_eq!(dims, vec![3, 1, 1, 1, 0]);
        // ℂ* on each axis, modulo the residual ℤ2 acting by sign: χ_c = 0
        let chis: Vec<Integer> = s.strata().iter().map(|x| x.chi_c.clone()).collect();
        assert_eq!(chis, vec![0.into(), 0.into(), 0.into(), 0.into(), 1.into()]);
        assert_eq!(m.partition_sum(), 1.into());
        assert_eq!(m.phi_first().unwrap(), m.phi_second().unwrap());
    }

    #[test]
    fn fiber_count_examples() {
        let m = diag(2, &[1, 1]);
        let triv = 0;
        let whole = m.subgroup_classes().len() - 1;
        assert_eq!(m.fiber_count(0, triv), 1);
        assert_eq!(m.fiber_count(0, whole), 1);
        assert_eq!(m.fiber_count(1, whole), 1);
        assert_eq!(m.fiber_count(1, triv), 0);
    }

    #[test]
    fn phi_examples() {
        let triv = mk(&LinearAction::new(2, 1, vec![]).unwrap());
        assert_eq!(triv.phi_first().unwrap().values(), &[int(1)]);
        assert_eq!(triv.phi_second().unwrap().values(), &[int(1)]);
        let z2 = diag(2, &[1, 1]);
        assert_eq!(z2.phi_first().unwrap().values(), &[int(1), int(2)]);
        assert_eq!(z2.phi_second().unwrap().values(), &[int(1), int(2)]);
        let z3 = diag(3, &[1, 2]);
        assert_eq!(z3.phi_second().unwrap().values(), &[int(1), int(3)]);
        let q8 = mk(&quaternion());
        assert_eq!(q8.phi_first().unwrap().values(), &[int(1), int(5)]);
        assert_eq!(q8.phi_second().unwrap().values(), &[int(1), int(5)]);
    }

    #[test]
    fn orbifold_euler_examples() {
        assert_eq!(
            mk(&LinearAction::new(2, 1, vec![]).unwrap()).orbifold_euler(),
            int(1)
        );
        assert_eq!(diag(2, &[1, 1]).orbifold_euler(), int(2));
        assert_eq!(mk(&quaternion()).orbifold_euler(), int(5));
        assert_eq!(mk(&binary_tetrahedral()).orbifold_euler(), int(7));
    }

    #[test]
    fn motivic_examples() {
        let triv = mk(&LinearAction::new(2, 1, vec![]).unwrap());
        assert_eq!(triv.motivic_mckay().unwrap(), MotivicExpr::one(1));

        let z2 = diag(2, &[1, 1]);
        let e = z2.motivic_mckay().unwrap();
        assert_eq!(e.root(), 2);
        let s = z2.stabilizer_strata();
        let x1 = ClassSymbol::backed("{X^H0}", ConstructibleFn::indicator(s, "H0").unwrap());
        let xg = ClassSymbol::backed("{X^H1}", ConstructibleFn::indicator(s, "H1").unwrap());
        let one_plus_l = &LaurentPoly::one(2) + &LaurentPoly::monomial(2, 2, int(1));
        let expected = MotivicExpr::symbol(x1, 2)
            .add(&MotivicExpr::term(vec![xg], one_plus_l, vec![]).unwrap());
        assert_eq!(e, expected);

        let z3 = diag(3, &[1, 1, 1]);
        let e = z3.motivic_mckay().unwrap();
        assert_eq!(
            e.euler_from_backing(z3.stabilizer_strata()).unwrap(),
            int(3)
        );
    }

    #[test]
    fn class_count_examples() {
        for m in [
            diag(2, &[1, 1]),
            diag(6, &[1, 5]),
            mk(&quaternion()),
            mk(&binary_tetrahedral()),
        ] {
            for i in 0..m.subgroup_classes().len() {
                let (lhs, rhs) = m.class_count_identity(i);
                assert_eq!(lhs, Rational::from_integer(rhs.into()));
            }
            assert_eq!(m.class_count_identity(0), (int(1), 1));
        }
        let z6 = diag(6, &[1, 5]);
        let whole = z6.subgroup_classes().len() - 1;
        assert_eq!(z6.class_count_identity(whole), (int(6), 6));
    }
}
