//! Finite p-groups given by dense multiplication tables.
//!
//! A [`PGroup`] owns its table and, at construction, computes the
//! structural data every later stage needs: element orders, the center,
//! the derived subgroup, the agemo `G^p`, the Frattini subgroup and the
//! conjugacy partition. Index 0 is always the identity.

mod classes;
mod construct;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::prime::{Prime, PrimeError};

pub use classes::ConjugacyPartition;
pub use construct::{Builder, ExtraspecialKind, OrderCap, DEFAULT_ORDER_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error("group order {order} exceeds the order cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("factors are over different primes ({0} and {1})")]
    MixedPrimes(Prime, Prime),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("central product needs a factor with center of order p, found center of order {0}")]
    CenterNotOrderP(usize),
    #[error("amalgam is not a central subgroup of order p: {0}")]
    BadAmalgam(String),
    #[error("table does not define a p-group: {0}")]
    NotAPGroup(String),
}

/// Index of an element in its group's table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(u32);

impl ElementId {
    pub const IDENTITY: ElementId = ElementId(0);

    pub fn new(index: usize) -> Self {
        ElementId(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

/// A subgroup of some [`PGroup`], stored as a sorted member list plus a
/// membership mask over the parent's elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<ElementId>,
    mask: Vec<bool>,
    exponent: usize,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn contains(&self, g: ElementId) -> bool {
        self.mask[g.index()]
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    /// A p-group is cyclic iff some element has order equal to the group order.
    pub fn is_cyclic(&self) -> bool {
        self.exponent == self.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

/// The four numbers that pin down a cyclic-Frattini group up to isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupInvariants {
    pub order: usize,
    pub exponent: usize,
    pub center_order: usize,
    pub center_exponent: usize,
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(|G|={}, exp G={}, |Z(G)|={}, exp Z(G)={})",
            self.order, self.exponent, self.center_order, self.center_exponent
        )
    }
}

#[derive(Debug, Clone)]
pub struct PGroup {
    p: Prime,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    label: String,
    element_orders: Vec<usize>,
    center: Subgroup,
    derived: Subgroup,
    agemo: Subgroup,
    frattini: Subgroup,
    classes: ConjugacyPartition,
}

/// Above this order the associativity check samples random triples.
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 125;
const SAMPLED_TRIPLES: usize = 100_000;

impl PGroup {
    /// Validates `table` (row-major, `table[a * n + b] = a * b`) as a
    /// p-group law with identity at index 0 and caches its structure.
    pub fn from_table(p: Prime, table: Vec<u32>, label: impl Into<String>) -> Result<Self, GroupError> {
        let n = (table.len() as f64).sqrt().round() as usize;
        if n * n != table.len() || n == 0 {
            return Err(GroupError::NotAPGroup("table is not square".into()));
        }
        if !p.is_power(n) {
            return Err(GroupError::NotAPGroup(format!("order {n} is not a power of {p}")));
        }
        if table.iter().any(|&x| x as usize >= n) {
            return Err(GroupError::NotAPGroup("entry out of range".into()));
        }
        for a in 0..n {
            if table[a] as usize != a || table[a * n] as usize != a {
                return Err(GroupError::NotAPGroup("index 0 is not the identity".into()));
            }
        }
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let c = table[a * n + b] as usize;
                if seen[c] {
                    return Err(GroupError::NotAPGroup(format!("row {a} repeats {c}")));
                }
                seen[c] = true;
            }
        }
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            let b = (0..n).find(|&b| table[a * n + b] == 0).expect("latin row contains identity");
            if table[b * n + a] != 0 {
                return Err(GroupError::NotAPGroup(format!("left and right inverses of {a} differ")));
            }
            inverses[a] = b as u32;
        }
        check_associative(&table, n)?;

        let mut element_orders = vec![0usize; n];
        for g in 0..n {
            let mut k = 1;
            let mut x = g;
            while x != 0 {
                x = table[x * n + g] as usize;
                k += 1;
            }
            if !p.is_power(k) {
                return Err(GroupError::NotAPGroup(format!("element {g} has order {k}")));
            }
            element_orders[g] = k;
        }

        let mut group = PGroup {
            p,
            order: n,
            table,
            inverses,
            label: label.into(),
            element_orders,
            center: Subgroup { members: vec![], mask: vec![], exponent: 1 },
            derived: Subgroup { members: vec![], mask: vec![], exponent: 1 },
            agemo: Subgroup { members: vec![], mask: vec![], exponent: 1 },
            frattini: Subgroup { members: vec![], mask: vec![], exponent: 1 },
            classes: ConjugacyPartition::empty(),
        };
        group.center = group.subgroup_from_members(
            (0..n).map(ElementId::new).filter(|&z| group.elements().all(|g| group.commute(z, g))),
        );
        let commutators: Vec<ElementId> = group
            .elements()
            .flat_map(|a| group.elements().map(move |b| (a, b)))
            .map(|(a, b)| group.commutator(a, b))
            .collect();
        group.derived = group.closure(&commutators);
        let pth_powers: Vec<ElementId> = group.elements().map(|g| group.pow(g, p.as_usize())).collect();
        group.agemo = group.closure(&pth_powers);
        let mut frattini_gens = group.agemo.members.clone();
        frattini_gens.extend_from_slice(&group.derived.members);
        group.frattini = group.closure(&frattini_gens);
        group.classes = ConjugacyPartition::compute(&group);
        Ok(group)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + Clone {
        (0..self.order).map(ElementId::new)
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.table[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn inv(&self, a: ElementId) -> ElementId {
        ElementId(self.inverses[a.index()])
    }

    pub fn pow(&self, g: ElementId, k: usize) -> ElementId {
        let k = k % self.element_orders[g.index()];
        let mut acc = ElementId::IDENTITY;
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    /// `(a, b) = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: ElementId, b: ElementId) -> ElementId {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `h⁻¹ g h`.
    pub fn conjugate(&self, g: ElementId, h: ElementId) -> ElementId {
        self.mul(self.mul(self.inv(h), g), h)
    }

    pub fn commute(&self, a: ElementId, b: ElementId) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn element_order(&self, g: ElementId) -> usize {
        self.element_orders[g.index()]
    }

    /// Exponent of a p-group: the largest element order.
    pub fn exponent(&self) -> usize {
        self.element_orders.iter().copied().max().unwrap_or(1)
    }

    pub fn is_abelian(&self) -> bool {
        self.derived.is_trivial()
    }

    pub fn center(&self) -> &Subgroup {
        &self.center
    }

    pub fn commutator_subgroup(&self) -> &Subgroup {
        &self.derived
    }

    /// `G^p`, the subgroup generated by all p-th powers.
    pub fn agemo(&self) -> &Subgroup {
        &self.agemo
    }

    /// `Φ(G) = G^p G'`.
    pub fn frattini(&self) -> &Subgroup {
        &self.frattini
    }

    pub fn conjugacy_partition(&self) -> &ConjugacyPartition {
        &self.classes
    }

    pub fn group_invariants(&self) -> GroupInvariants {
        GroupInvariants {
            order: self.order,
            exponent: self.exponent(),
            center_order: self.center.order(),
            center_exponent: self.center.exponent(),
        }
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[ElementId]) -> Subgroup {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut members = vec![ElementId::IDENTITY];
        let mut gens: Vec<ElementId> = gens.iter().copied().filter(|g| !g.is_identity()).collect();
        gens.sort();
        gens.dedup();
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &s in &gens {
                let y = self.mul(x, s);
                if !mask[y.index()] {
                    mask[y.index()] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        self.subgroup_from_mask(mask)
    }

    /// Builds a [`Subgroup`] from a member set already known to be closed.
    fn subgroup_from_members(&self, members: impl IntoIterator<Item = ElementId>) -> Subgroup {
        let mut mask = vec![false; self.order];
        for g in members {
            mask[g.index()] = true;
        }
        self.subgroup_from_mask(mask)
    }

    fn subgroup_from_mask(&self, mask: Vec<bool>) -> Subgroup {
        let members: Vec<ElementId> = (0..self.order).filter(|&i| mask[i]).map(ElementId::new).collect();
        let exponent = members.iter().map(|&g| self.element_order(g)).max().unwrap_or(1);
        Subgroup { members, mask, exponent }
    }

    /// A generating set chosen greedily in index order.
    pub fn generators(&self) -> Vec<ElementId> {
        let mut gens = Vec::new();
        let mut current = self.closure(&[]);
        for g in self.elements() {
            if !current.contains(g) {
                gens.push(g);
                current = self.closure(&gens);
            }
        }
        gens
    }

    /// The p-th power subgroup `G^{p^k}` generated by all `p^k`-th powers.
    pub fn power_subgroup(&self, k: u32) -> Subgroup {
        let e = self.p.pow(k).expect("power overflow");
        let powers: Vec<ElementId> = self.elements().map(|g| self.pow(g, e)).collect();
        self.closure(&powers)
    }

    /// Transports the law along `perm` (old index to new index, fixing 0).
    pub fn relabel(&self, perm: &[usize]) -> Result<PGroup, GroupError> {
        let n = self.order;
        if perm.len() != n || perm[0] != 0 {
            return Err(GroupError::InvalidParameter("relabeling must be a permutation fixing 0".into()));
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.table[a * n + b] as usize] as u32;
            }
        }
        PGroup::from_table(self.p, table, self.label.clone())
    }

    /// A random relabeling permutation fixing the identity.
    pub fn random_relabeling(&self, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..self.order).collect();
        for i in (2..self.order).rev() {
            let j = rng.random_range(1..=i);
            perm.swap(i, j);
        }
        perm
    }

    pub(crate) fn table(&self) -> &[u32] {
        &self.table
    }
}

impl fmt::Display for PGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.label, self.order)
    }
}

fn check_associative(table: &[u32], n: usize) -> Result<(), GroupError> {
    let m = |a: usize, b: usize| table[a * n + b] as usize;
    let fail = |a, b, c| Err(GroupError::NotAPGroup(format!("({a}*{b})*{c} != {a}*({b}*{c})")));
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return fail(a, b, c);
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..SAMPLED_TRIPLES {
            let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            if m(m(a, b), c) != m(a, m(b, c)) {
                return fail(a, b, c);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn rejects_non_groups() {
        // Z/3 with a broken row.
        let bad = vec![0, 1, 2, 1, 1, 0, 2, 0, 1];
        assert!(PGroup::from_table(p(3), bad, "bad").is_err());
        // order 6 is not a 3-power
        let z6: Vec<u32> = (0..36).map(|i| ((i / 6 + i % 6) % 6) as u32).collect();
        assert!(matches!(PGroup::from_table(p(3), z6, "z6"), Err(GroupError::NotAPGroup(_))));
    }

    #[test]
    fn identity_has_order_one() {
        let g = Builder::default().cyclic(p(3), 2).unwrap();
        assert_eq!(g.element_order(ElementId::IDENTITY), 1);
        assert_eq!(g.element_order(ElementId::new(1)), 9);
    }

    #[test]
    fn abelian_groups_have_trivial_derived_subgroup() {
        let b = Builder::default();
        let g = b.direct(&b.cyclic(p(3), 1).unwrap(), &b.cyclic(p(3), 2).unwrap()).unwrap();
        assert!(g.is_abelian());
        assert_eq!(g.commutator_subgroup().order(), 1);
        assert_eq!(g.center().order(), 27);
    }

    #[test]
    fn relabeling_preserves_invariants() {
        let b = Builder::default();
        let g = b.modular(p(3), 4).unwrap();
        for seed in 0..5 {
            let h = g.relabel(&g.random_relabeling(seed)).unwrap();
            assert_eq!(h.group_invariants(), g.group_invariants());
            assert_eq!(h.frattini().order(), g.frattini().order());
            assert_eq!(h.conjugacy_partition().t(), g.conjugacy_partition().t());
        }
    }

    #[test]
    fn generators_generate() {
        let g = Builder::default().extraspecial(p(3), ExtraspecialKind::ExponentP).unwrap();
        let gens = g.generators();
        assert_eq!(gens.len(), 2);
        assert_eq!(g.closure(&gens).order(), 27);
    }

    /// Every subgroup, by closing under one new element at a time.
    fn all_subgroups(g: &PGroup) -> Vec<Subgroup> {
        let mut seen = std::collections::HashSet::new();
        let mut out = vec![g.closure(&[])];
        seen.insert(out[0].members().to_vec());
        let mut i = 0;
        while i < out.len() {
            let current = out[i].clone();
            let base = current.members().to_vec();
            for x in g.elements().filter(|&x| !current.contains(x)) {
                let mut gens = base.clone();
                gens.push(x);
                let h = g.closure(&gens);
                if seen.insert(h.members().to_vec()) {
                    out.push(h);
                }
            }
            i += 1;
        }
        out
    }

    #[test]
    fn frattini_is_intersection_of_maximal_subgroups() {
        let b = Builder::default();
        let q = p(3);
        let e = b.extraspecial(q, ExtraspecialKind::ExponentP).unwrap();
        let groups = [
            e.clone(),
            b.modular(q, 3).unwrap(),
            b.modular(q, 4).unwrap(),
            b.direct(&e, &b.cyclic(q, 1).unwrap()).unwrap(),
            b.central(&e, &b.cyclic(q, 2).unwrap(), None).unwrap(),
            b.direct(&b.cyclic(q, 1).unwrap(), &b.cyclic(q, 2).unwrap()).unwrap(),
        ];
        for g in groups {
            let maximal: Vec<Subgroup> = all_subgroups(&g).into_iter().filter(|h| h.order() * 3 == g.order()).collect();
            assert!(!maximal.is_empty());
            let meet: Vec<ElementId> = g.elements().filter(|&x| maximal.iter().all(|h| h.contains(x))).collect();
            assert_eq!(meet, g.frattini().members(), "{}", g.label());
        }
    }
}
