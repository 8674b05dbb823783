//! Exact arithmetic in the group algebra `F_p G`.
//!
//! Elements are dense coefficient vectors indexed by [`ElementId`]. The
//! group is shared through an [`Arc`]; mixing elements of different group
//! instances is an error for the `checked_*` methods and a panic for the
//! operator impls.

mod linalg;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::{ElementId, PGroup};
use crate::prime::{Prime, PrimeError};

pub use linalg::{kernel, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("elements belong to different groups")]
    MismatchedGroups,
    #[error("element has augmentation 0 and is not a unit")]
    NotAUnit,
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Seed for reproducible sampling. Sample `i` of a run uses `seed ^ i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub u64);

impl Seed {
    pub fn split(self, index: u64) -> Seed {
        Seed(self.0 ^ index)
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

#[derive(Clone)]
pub struct AlgebraElement {
    group: Arc<PGroup>,
    coeffs: Vec<u32>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.coeffs == other.coeffs
    }
}

impl Eq for AlgebraElement {}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement[{}]({self})", self.group.label())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (i, 1) => write!(f, "g{i}")?,
                (i, c) => write!(f, "{c}*g{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl AlgebraElement {
    pub fn zero(group: &Arc<PGroup>) -> Self {
        AlgebraElement { group: Arc::clone(group), coeffs: vec![0; group.order()] }
    }

    pub fn one(group: &Arc<PGroup>) -> Self {
        Self::from_group_element(group, ElementId::IDENTITY)
    }

    /// Embeds a group element as a basis vector.
    pub fn from_group_element(group: &Arc<PGroup>, g: ElementId) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[g.index()] = 1;
        x
    }

    /// Coefficients are reduced mod p.
    pub fn from_coeffs(group: &Arc<PGroup>, coeffs: Vec<u32>) -> Result<Self, AlgebraError> {
        if coeffs.len() != group.order() {
            return Err(AlgebraError::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                group.order(),
                coeffs.len()
            )));
        }
        let p = group.p().get();
        Ok(AlgebraElement { group: Arc::clone(group), coeffs: coeffs.into_iter().map(|c| c % p).collect() })
    }

    /// `D̂ = Σ_{g ∈ D} g`.
    pub fn class_sum(group: &Arc<PGroup>, set: &[ElementId]) -> Self {
        let mut x = Self::zero(group);
        for &g in set {
            x.coeffs[g.index()] = group.p().add(x.coeffs[g.index()], 1);
        }
        x
    }

    pub fn group(&self) -> &Arc<PGroup> {
        &self.group
    }

    pub fn p(&self) -> Prime {
        self.group.p()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, g: ElementId) -> u32 {
        self.coeffs[g.index()]
    }

    pub fn support(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| ElementId::new(i))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Sum of coefficients mod p.
    pub fn augmentation(&self) -> u32 {
        let p = self.p();
        p.reduce(self.coeffs.iter().map(|&c| c as u64).sum())
    }

    fn same_group(&self, other: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.group, &other.group) {
            Ok(())
        } else {
            Err(AlgebraError::MismatchedGroups)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        let p = self.p();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| p.add(a, b)).collect();
        Ok(AlgebraElement { group: Arc::clone(&self.group), coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        let p = self.p();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| p.sub(a, b)).collect();
        Ok(AlgebraElement { group: Arc::clone(&self.group), coeffs })
    }

    /// Convolution over the group law.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        let n = self.group.order();
        let table = self.group.table();
        let rhs: Vec<(usize, u64)> =
            other.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(h, &c)| (h, c as u64)).collect();
        let mut acc = vec![0u64; n];
        for (g, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = &table[g * n..(g + 1) * n];
            let a = a as u64;
            for &(h, b) in &rhs {
                acc[row[h] as usize] += a * b;
            }
        }
        let p = self.p();
        Ok(AlgebraElement { group: Arc::clone(&self.group), coeffs: acc.into_iter().map(|c| p.reduce(c)).collect() })
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p();
        AlgebraElement { group: Arc::clone(&self.group), coeffs: self.coeffs.iter().map(|&a| p.mul(a, c)).collect() }
    }

    /// `x^m` by square-and-multiply.
    pub fn pow(&self, mut m: u64) -> Self {
        let mut acc = Self::one(&self.group);
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                acc = &acc * &base;
            }
            m >>= 1;
            if m > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Two-sided inverse of an element with nonzero augmentation.
    ///
    /// Scales to augmentation 1, writes the result as `1 + n` with `n` in
    /// the augmentation ideal, and sums `Σ (-n)^k` until the running power
    /// vanishes. The augmentation ideal of a p-group algebra is nilpotent of
    /// index at most `|G|`, so the loop stops within `|G|` terms.
    pub fn invert_normalized(&self) -> Result<Self, AlgebraError> {
        let p = self.p();
        let aug = self.augmentation();
        let aug_inv = p.inv(aug).ok_or(AlgebraError::NotAUnit)?;
        let y = self.scale(aug_inv);
        let minus_n = &Self::one(&self.group) - &y;
        let mut term = Self::one(&self.group);
        let mut sum = term.clone();
        for _ in 0..self.group.order() {
            term = &term * &minus_n;
            if term.is_zero() {
                return Ok(sum.scale(aug_inv));
            }
            sum = &sum + &term;
        }
        unreachable!("augmentation ideal of a p-group algebra is nilpotent of index <= |G|")
    }

    /// First group element that does not commute with `self`, if any.
    pub fn first_noncommuting(&self) -> Option<ElementId> {
        self.group.elements().find(|&g| {
            let e = Self::from_group_element(&self.group, g);
            &e * self != self * &e
        })
    }

    pub fn is_central(&self) -> bool {
        self.first_noncommuting().is_none()
    }

    /// `Σ α_g f(g)`.
    pub fn transport(&self, f: impl Fn(ElementId) -> ElementId) -> Self {
        let p = self.p();
        let mut out = Self::zero(&self.group);
        for g in self.support() {
            let i = f(g).index();
            out.coeffs[i] = p.add(out.coeffs[i], self.coeffs[g.index()]);
        }
        out
    }

    /// Keeps only the coefficients on elements where `keep` holds.
    pub fn restrict(&self, keep: impl Fn(ElementId) -> bool) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if !keep(ElementId::new(i)) {
                *c = 0;
            }
        }
        out
    }

    /// Multiplicative order of a unit; a power of p because `V(F_pG)` is a p-group.
    pub fn unit_order(&self) -> Result<usize, AlgebraError> {
        if self.augmentation() != 1 {
            return Err(AlgebraError::InvalidArgument("unit_order expects a normalized unit".into()));
        }
        let p = self.p();
        let mut x = self.clone();
        let mut order = 1usize;
        while !x.is_one() {
            x = x.pow(p.get() as u64);
            order *= p.as_usize();
        }
        Ok(order)
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a AlgebraElement> for &'a AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: &'a AlgebraElement) -> AlgebraElement {
                self.$checked(rhs).expect("operands from different groups")
            }
        }
        impl $trait for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: AlgebraElement) -> AlgebraElement {
                self.$checked(&rhs).expect("operands from different groups")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(self.p().get() - 1)
    }
}

/// Uniform coefficients, with the identity coefficient adjusted so the
/// augmentation is 1.
pub fn random_normalized_unit(group: &Arc<PGroup>, seed: Seed) -> AlgebraElement {
    let mut x = random_element(group, seed);
    let p = group.p();
    let aug = x.augmentation();
    x.coeffs[0] = p.add(x.coeffs[0], p.sub(1, aug));
    x
}

/// Uniform coefficients, no normalization.
pub fn random_element(group: &Arc<PGroup>, seed: Seed) -> AlgebraElement {
    let mut rng = seed.rng();
    let p = group.p().get();
    let coeffs = (0..group.order()).map(|_| rng.random_range(0..p)).collect();
    AlgebraElement { group: Arc::clone(group), coeffs }
}

/// Class-coefficient criterion for membership in `[F_pG, F_pG]`: every
/// conjugacy class must carry coefficient sum 0.
pub fn commutator_subspace_test(x: &AlgebraElement) -> bool {
    let p = x.p();
    x.group()
        .conjugacy_partition()
        .classes()
        .iter()
        .all(|class| p.reduce(class.iter().map(|&g| x.coeff(g) as u64).sum()) == 0)
}

/// Explicit span of `gh - hg` over all basis pairs.
pub fn commutator_subspace(group: &Arc<PGroup>) -> Subspace {
    let n = group.order();
    let p = group.p();
    let mut s = Subspace::zero(p, n);
    for g in group.elements() {
        for h in group.elements() {
            let (gh, hg) = (group.mul(g, h), group.mul(h, g));
            if gh == hg {
                continue;
            }
            let mut v = vec![0u32; n];
            v[gh.index()] = 1;
            v[hg.index()] = p.get() - 1;
            s.insert(&v);
        }
    }
    s
}

/// `ζ(F_pG)` as the span of all class sums.
pub fn center_subspace(group: &Arc<PGroup>) -> Subspace {
    let classes = group.conjugacy_partition().classes();
    Subspace::spanned_by(group.p(), group.order(), classes.iter().map(|c| AlgebraElement::class_sum(group, c).coeffs))
}

/// `ζ(F_pG)` as the kernel of `x ↦ (sx - xs)` over a generating set.
pub fn center_subspace_by_commutation(group: &Arc<PGroup>) -> Subspace {
    let n = group.order();
    let p = group.p();
    let gens = group.generators();
    // Column h of the block for s is the vector s h - h s.
    let mut rows = Vec::with_capacity(gens.len() * n);
    for &s in &gens {
        let mut block = vec![vec![0u32; n]; n];
        for h in group.elements() {
            let (sh, hs) = (group.mul(s, h), group.mul(h, s));
            if sh != hs {
                block[sh.index()][h.index()] = p.add(block[sh.index()][h.index()], 1);
                block[hs.index()][h.index()] = p.sub(block[hs.index()][h.index()], 1);
            }
        }
        rows.extend(block);
    }
    kernel(p, n, rows)
}

/// `Σ_{γ ∈ F_p^×} γ^r mod p` for `1 <= r <= p - 1`, p odd.
pub fn unit_power_sums(p: Prime, r: u32) -> Result<u32, AlgebraError> {
    p.require_odd()?;
    if r == 0 || r >= p.get() {
        return Err(AlgebraError::InvalidArgument(format!("r = {r} outside [1, {}]", p.get() - 1)));
    }
    let total: u64 = (1..p.get()).map(|g| p.pow_mod(g, r as u64) as u64).sum();
    Ok(p.reduce(total))
}

/// Spanning set `{g(h - 1) : g ∈ G, h ∈ G'}` of the ideal generated by `G' - 1`.
pub fn derived_ideal_spanning_set(group: &Arc<PGroup>) -> Vec<AlgebraElement> {
    let one = AlgebraElement::one(group);
    let mut out = Vec::new();
    for &h in group.commutator_subgroup().members().iter().filter(|h| !h.is_identity()) {
        let hm1 = &AlgebraElement::from_group_element(group, h) - &one;
        for g in group.elements() {
            out.push(&AlgebraElement::from_group_element(group, g) * &hm1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Builder, ExtraspecialKind};

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn e27() -> Arc<PGroup> {
        Arc::new(Builder::default().extraspecial(p(3), ExtraspecialKind::ExponentP).unwrap())
    }

    fn m27() -> Arc<PGroup> {
        Arc::new(Builder::default().modular(p(3), 3).unwrap())
    }

    fn derived_sum(g: &Arc<PGroup>) -> AlgebraElement {
        AlgebraElement::class_sum(g, g.commutator_subgroup().members())
    }

    #[test]
    fn ring_op_examples() {
        let g = e27();
        for x in g.elements() {
            let e = AlgebraElement::from_group_element(&g, x);
            let ei = AlgebraElement::from_group_element(&g, g.inv(x));
            assert!((&e * &ei).is_one());
        }
        let d = derived_sum(&g);
        assert!((&d * &d).is_zero());

        let c3 = Arc::new(Builder::default().cyclic(p(3), 1).unwrap());
        let one = AlgebraElement::one(&c3);
        let gen = AlgebraElement::from_group_element(&c3, ElementId::new(1));
        let sq = &(&gen - &one) * &(&gen - &one);
        // g² − 2g + 1
        assert_eq!(sq.coeffs(), &[1, 1, 1]);
    }

    #[test]
    fn mismatched_groups_error() {
        let (a, b) = (e27(), e27());
        let x = AlgebraElement::one(&a);
        let y = AlgebraElement::one(&b);
        assert_eq!(x.checked_mul(&y), Err(AlgebraError::MismatchedGroups));
    }

    #[test]
    fn augmentation_examples() {
        let g = e27();
        for x in g.elements() {
            assert_eq!(AlgebraElement::from_group_element(&g, x).augmentation(), 1);
        }
        assert_eq!(derived_sum(&g).augmentation(), 0);
        let x = AlgebraElement::from_group_element(&g, ElementId::new(4));
        let y = AlgebraElement::from_group_element(&g, ElementId::new(7));
        assert_eq!((&x - &y).augmentation(), 0);
    }

    #[test]
    fn class_sums_are_translates_of_the_derived_sum() {
        let g = e27();
        let d = derived_sum(&g);
        let classes: Vec<_> = g.conjugacy_partition().noncentral().map(|c| c.to_vec()).collect();
        for c in &classes {
            let rep = AlgebraElement::from_group_element(&g, c[0]);
            assert_eq!(AlgebraElement::class_sum(&g, c), &rep * &d);
        }
        for ci in &classes {
            for cj in &classes {
                let prod = &AlgebraElement::class_sum(&g, ci) * &AlgebraElement::class_sum(&g, cj);
                assert!(prod.is_zero());
            }
        }
        let z = g.center().members()[1];
        assert_eq!(AlgebraElement::class_sum(&g, &[z]), AlgebraElement::from_group_element(&g, z));
    }

    #[test]
    fn inversion_examples() {
        let g = m27();
        for x in g.elements() {
            let e = AlgebraElement::from_group_element(&g, x);
            let expected = AlgebraElement::from_group_element(&g, g.pow(x, g.element_order(x) - 1));
            assert_eq!(e.invert_normalized().unwrap(), expected);
        }
        let d = derived_sum(&g);
        let one = AlgebraElement::one(&g);
        let b = AlgebraElement::from_group_element(&g, ElementId::new(9));
        let bd = &b * &d;
        assert_eq!((&one + &bd).invert_normalized().unwrap(), &one - &bd);
        for i in 0..20 {
            let x = random_normalized_unit(&g, Seed(11).split(i));
            let xi = x.invert_normalized().unwrap();
            assert!((&x * &xi).is_one() && (&xi * &x).is_one());
        }
        assert_eq!(d.invert_normalized(), Err(AlgebraError::NotAUnit));
    }

    #[test]
    fn inversion_of_non_normalized_unit() {
        let g = m27();
        let x = random_normalized_unit(&g, Seed(5)).scale(2);
        assert_eq!(x.augmentation(), 2);
        assert!((&x * &x.invert_normalized().unwrap()).is_one());
    }

    #[test]
    fn power_examples() {
        let g = e27();
        let x = random_normalized_unit(&g, Seed(3));
        assert!(x.pow(0).is_one());
        for y in g.elements() {
            let e = AlgebraElement::from_group_element(&g, y);
            assert!(e.pow(g.element_order(y) as u64).is_one());
        }
        let one = AlgebraElement::one(&g);
        let a = AlgebraElement::from_group_element(&g, ElementId::new(1));
        let b = AlgebraElement::from_group_element(&g, ElementId::new(3));
        let u = &(&a + &b) - &one;
        assert!(!u.pow(3).is_one());
        assert_eq!(u.unit_order().unwrap(), 9);
    }

    #[test]
    fn commutator_subspace_examples() {
        let g = e27();
        let a = ElementId::new(1);
        let b = ElementId::new(3);
        let x = &AlgebraElement::from_group_element(&g, a) - &AlgebraElement::from_group_element(&g, g.conjugate(a, b));
        assert!(commutator_subspace_test(&x));
        assert!(!commutator_subspace_test(&AlgebraElement::one(&g)));
        for i in 0..10 {
            let x = random_element(&g, Seed(1).split(2 * i));
            let y = random_element(&g, Seed(1).split(2 * i + 1));
            let lhs = &(&(&x + &y).pow(3) - &x.pow(3)) - &y.pow(3);
            assert!(commutator_subspace_test(&lhs));
            assert!(commutator_subspace_test(&(&(&x * &y) - &(&y * &x))));
        }
    }

    #[test]
    fn center_subspace_examples() {
        let c9 = Arc::new(Builder::default().cyclic(p(3), 2).unwrap());
        assert_eq!(center_subspace(&c9).dim(), 9);
        for g in [e27(), m27()] {
            let z = center_subspace(&g);
            assert_eq!(z.dim(), 11);
            assert!(z.same_as(&center_subspace_by_commutation(&g)));
        }
    }

    #[test]
    fn random_units_are_deterministic_units() {
        let g = m27();
        let x = random_normalized_unit(&g, Seed(42));
        assert_eq!(x.augmentation(), 1);
        assert_eq!(x, random_normalized_unit(&g, Seed(42)));
        assert_ne!(x, random_normalized_unit(&g, Seed(43)));
        assert!(x.invert_normalized().is_ok());
    }

    #[test]
    fn power_sums() {
        assert_eq!(unit_power_sums(p(3), 1), Ok(0));
        assert_eq!(unit_power_sums(p(3), 2), Ok(2));
        assert_eq!(unit_power_sums(p(5), 2), Ok(0));
        assert!(matches!(unit_power_sums(p(2), 1), Err(AlgebraError::Prime(PrimeError::EvenPrime))));
        assert!(unit_power_sums(p(5), 5).is_err());
    }

    #[test]
    fn derived_ideal_pth_power_vanishes() {
        let g = e27();
        let span = derived_ideal_spanning_set(&g);
        // every product of three spanning elements is zero
        let sample: Vec<_> = span.iter().step_by(5).collect();
        for a in &sample {
            for b in &sample {
                let ab = *a * *b;
                for c in &sample {
                    assert!((&ab * *c).is_zero());
                }
            }
        }
    }
}
