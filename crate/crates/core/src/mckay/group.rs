//! Finite matrix groups: closure, multiplication table, conjugacy classes,
//! centralizers and subgroup classes.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::algebra::cyclotomic::Cyclotomic;
use crate::algebra::matrix::{kernel_basis, CycloMatrix};
use crate::algebra::rational::Rational;
use crate::error::{Error, Result};

use super::action::LinearAction;

/// Caps on group order for closure and for subgroup enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupLimits {
    pub closure_cap: usize,
    pub subgroup_cap: usize,
}

impl Default for GroupLimits {
    fn default() -> Self {
        Self {
            closure_cap: 200,
            subgroup_cap: 200,
        }
    }
}

impl GroupLimits {
    pub fn uniform(cap: usize) -> Self {
        Self {
            closure_cap: cap,
            subgroup_cap: cap,
        }
    }
}

/// A sorted set of element indices closed under the product.
pub type Subgroup = Vec<usize>;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    n: usize,
    m: u64,
    elements: Vec<CycloMatrix>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    subgroup_cap: usize,
}

impl FiniteGroup {
    /// Breadth-first closure of the generators. Index 0 is the identity.
    pub fn close(action: &LinearAction, limits: GroupLimits) -> Result<Self> {
        let cap = limits.closure_cap.max(1);
        let m = action.m();
        let gens = action.generators();
        let mut elements = vec![CycloMatrix::identity(action.n()).rebase(m)];
        let mut index: HashMap<Vec<Vec<Rational>>, usize> = HashMap::new();
        index.insert(elements[0].key(m), 0);
        // right[e][s] = index of elements[e] * gens[s]
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            let mut row = Vec::with_capacity(gens.len());
            for g in gens {
                let p = elements[e].mul(g).rebase(m);
                let key = p.key(m);
                let k = match index.get(&key) {
                    Some(&k) => k,
                    None => {
                        if elements.len() == cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        let k = elements.len();
                        index.insert(key, k);
                        elements.push(p);
                        queue.push_back(k);
                        k
                    }
                };
                row.push(k);
            }
            if right.len() <= e {
                right.resize(e + 1, Vec::new());
            }
            right[e] = row;
        }
        // each non-identity element is parent * generator for some earlier parent
        let size = elements.len();
        let mut word: Vec<Option<(usize, usize)>> = vec![None; size];
        for (e, row) in right.iter().enumerate() {
            for (s, &k) in row.iter().enumerate() {
                if k != 0 && word[k].is_none() && k > e {
                    word[k] = Some((e, s));
                }
            }
        }
        let mut mult = vec![vec![0usize; size]; size];
        for (i, row) in mult.iter_mut().enumerate() {
            row[0] = i;
            for k in 1..size {
                let (parent, s) = word[k].expect("BFS order reaches every element");
                row[k] = right[row[parent]][s];
            }
        }
        let inv = (0..size)
            .map(|i| {
                mult[i]
                    .iter()
                    .position(|&k| k == 0)
                    .expect("group element has an inverse")
            })
            .collect();
        Ok(Self {
            n: action.n(),
            m,
            elements,
            mult,
            inv,
            subgroup_cap: limits.subgroup_cap,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &CycloMatrix {
        &self.elements[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `k g k⁻¹`.
    pub fn conj(&self, k: usize, g: usize) -> usize {
        self.mult[self.mult[k][g]][self.inv[k]]
    }

    pub fn element_order(&self, g: usize) -> u64 {
        let mut x = g;
        let mut d = 1;
        while x != 0 {
            x = self.mult[x][g];
            d += 1;
        }
        d
    }

    /// First element with determinant ≠ 1, if any.
    pub fn sl_violation(&self) -> Option<usize> {
        self.elements.iter().position(|g| !g.det().is_one())
    }

    pub fn is_sl(&self) -> bool {
        self.sl_violation().is_none()
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order())
            .filter(|&k| self.mult[k][g] == self.mult[g][k])
            .collect()
    }

    /// Conjugacy classes within the subgroup `within`, each sorted, listed
    /// by smallest member.
    pub fn classes_in(&self, within: &[usize], of: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &g in of {
            if seen.contains(&g) {
                continue;
            }
            let class: BTreeSet<usize> = within.iter().map(|&k| self.conj(k, g)).collect();
            seen.extend(class.iter().copied());
            out.push(class.into_iter().collect::<Vec<_>>());
        }
        out.sort();
        out
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.order()).collect();
        self.classes_in(&all, &all)
    }

    /// Smallest subgroup containing `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier: Vec<usize> = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mult[x][g];
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn conjugate_subgroup(&self, k: usize, h: &[usize]) -> Subgroup {
        let mut out: Vec<usize> = h.iter().map(|&x| self.conj(k, x)).collect();
        out.sort_unstable();
        out
    }

    pub fn normalizer(&self, h: &[usize]) -> Vec<usize> {
        (0..self.order())
            .filter(|&k| self.conjugate_subgroup(k, h) == h)
            .collect()
    }

    /// Every subgroup, found by joining cyclic subgroups until nothing new
    /// appears.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        if self.order() > self.subgroup_cap {
            return Err(Error::SubgroupEnumerationCap {
                order: self.order(),
                bound: self.subgroup_cap,
            });
        }
        let cyclic: BTreeSet<Subgroup> = (0..self.order()).map(|g| self.generate(&[g])).collect();
        let mut all: BTreeSet<Subgroup> = cyclic.clone();
        let mut frontier: Vec<Subgroup> = cyclic.iter().cloned().collect();
        while let Some(h) = frontier.pop() {
            for c in &cyclic {
                if c.iter().all(|x| h.binary_search(x).is_ok()) {
                    continue;
                }
                let gens: Vec<usize> = h.iter().chain(c.iter()).copied().collect();
                let joined = self.generate(&gens);
                if all.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        let mut out: Vec<Subgroup> = all.into_iter().collect();
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Ok(out)
    }

    /// Subgroups up to conjugacy. Each class is represented by its
    /// lexicographically least member, and classes are ordered by
    /// `(|H|, representative)`.
    pub fn subgroup_classes(&self) -> Result<Vec<SubgroupClass>> {
        let all = self.all_subgroups()?;
        let mut classes: BTreeMap<(usize, Subgroup), BTreeSet<Subgroup>> = BTreeMap::new();
        let mut done: BTreeSet<Subgroup> = BTreeSet::new();
        for h in &all {
            if done.contains(h) {
                continue;
            }
            let conjugates: BTreeSet<Subgroup> = (0..self.order())
                .map(|k| self.conjugate_subgroup(k, h))
                .collect();
            done.extend(conjugates.iter().cloned());
            let rep = conjugates.iter().next().expect("nonempty").clone();
            classes.insert((rep.len(), rep), conjugates);
        }
        classes
            .into_iter()
            .map(|((_, rep), conjugates)| {
                let normalizer = self.normalizer(&rep);
                let fix_basis = self.fixed_basis(&rep);
                Ok(SubgroupClass {
                    members: conjugates.into_iter().collect(),
                    normalizer,
                    fix_dim: fix_basis.len(),
                    fix_basis,
                    rep,
                })
            })
            .collect()
    }

    /// Basis of the common fixed space `{x : h x = x for all h ∈ H}`.
    pub fn fixed_basis(&self, h: &[usize]) -> Vec<Vec<Cyclotomic>> {
        let rows: Vec<Vec<Cyclotomic>> = h
            .iter()
            .filter(|&&x| x != 0)
            .flat_map(|&x| self.elements[x].minus_identity().rows())
            .collect();
        kernel_basis(&rows, self.n)
    }

    pub fn fixed_dim(&self, h: &[usize]) -> usize {
        self.fixed_basis(h).len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub rep: Subgroup,
    /// All conjugates of `rep`, sorted.
    pub members: Vec<Subgroup>,
    pub normalizer: Vec<usize>,
    pub fix_dim: usize,
    pub fix_basis: Vec<Vec<Cyclotomic>>,
}

impl SubgroupClass {
    pub fn order(&self) -> usize {
        self.rep.len()
    }

    pub fn conjugates(&self) -> usize {
        self.members.len()
    }

    pub fn contains_conjugate_of(&self, other: &SubgroupClass) -> bool {
        other
            .members
            .iter()
            .any(|h| h.iter().all(|x| self.rep.binary_search(x).is_ok()))
    }
}
