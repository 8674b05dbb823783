//! Constructions from explicit normal forms.

use super::{ElementId, GroupError, PGroup};
use crate::prime::Prime;

pub const DEFAULT_ORDER_CAP: usize = 343;

/// Largest group order any construction will produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderCap(pub usize);

impl Default for OrderCap {
    fn default() -> Self {
        OrderCap(DEFAULT_ORDER_CAP)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtraspecialKind {
    /// Heisenberg group mod p.
    ExponentP,
    /// Exponent p²; at order p³ this is the modular group `M_{p³}`.
    ExponentP2,
}

/// Builds groups subject to an order cap.
#[derive(Debug, Clone, Copy, Default)]
pub struct Builder {
    cap: OrderCap,
}

impl Builder {
    pub fn new(cap: OrderCap) -> Self {
        Builder { cap }
    }

    pub fn with_cap(cap: usize) -> Self {
        Builder { cap: OrderCap(cap) }
    }

    pub fn cap(&self) -> usize {
        self.cap.0
    }

    fn check_cap(&self, order: Option<usize>) -> Result<usize, GroupError> {
        match order {
            Some(n) if n <= self.cap.0 => Ok(n),
            Some(n) => Err(GroupError::CapExceeded { order: n, cap: self.cap.0 }),
            None => Err(GroupError::CapExceeded { order: usize::MAX, cap: self.cap.0 }),
        }
    }

    pub fn trivial(&self, p: Prime) -> PGroup {
        PGroup::from_table(p, vec![0], "trivial").expect("trivial group")
    }

    /// `C_{p^n}`; the generator sits at index 1 and `g^i` at index `i`.
    pub fn cyclic(&self, p: Prime, n: u32) -> Result<PGroup, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameter("cyclic group needs n >= 1".into()));
        }
        let m = self.check_cap(p.pow(n))?;
        let table = (0..m * m).map(|i| ((i / m + i % m) % m) as u32).collect();
        PGroup::from_table(p, table, format!("cyclic({p},{n})"))
    }

    /// `C_p^k` as an iterated direct product.
    pub fn elementary_abelian(&self, p: Prime, k: u32) -> Result<PGroup, GroupError> {
        if k == 0 {
            return Err(GroupError::InvalidParameter("elementary abelian group needs k >= 1".into()));
        }
        self.check_cap(p.pow(k))?;
        let cp = self.cyclic(p, 1)?;
        let mut g = cp.clone();
        for _ in 1..k {
            g = self.direct(&g, &cp)?;
        }
        Ok(g.with_label(format!("elem_abelian({p},{k})")))
    }

    /// Extraspecial group of order p³ with the requested exponent.
    pub fn extraspecial(&self, p: Prime, kind: ExtraspecialKind) -> Result<PGroup, GroupError> {
        p.require_odd()?;
        match kind {
            ExtraspecialKind::ExponentP => self.heisenberg(p),
            ExtraspecialKind::ExponentP2 => Ok(self.modular(p, 3)?.with_label(format!("extraspecial({p},p^2)"))),
        }
    }

    /// Triples `(x, y, z)` mod p with `(x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy')`,
    /// stored at index `x + p*y + p²*z`. Generators sit at indices 1 and p,
    /// the center is generated by index p².
    fn heisenberg(&self, p: Prime) -> Result<PGroup, GroupError> {
        let q = p.as_usize();
        let n = self.check_cap(p.pow(3))?;
        let decode = |i: usize| (i % q, (i / q) % q, i / (q * q));
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            let (x, y, z) = decode(a);
            for b in 0..n {
                let (x2, y2, z2) = decode(b);
                let c = ((x + x2) % q) + q * ((y + y2) % q) + q * q * ((z + z2 + x * y2) % q);
                table[a * n + b] = c as u32;
            }
        }
        PGroup::from_table(p, table, format!("extraspecial({p},p)"))
    }

    /// Extraspecial group of exponent p and order `p^(2m+1)`, as the
    /// central product of `m` Heisenberg groups.
    pub fn extraspecial_exponent_p(&self, p: Prime, m: u32) -> Result<PGroup, GroupError> {
        if m == 0 {
            return Err(GroupError::InvalidParameter("extraspecial rank must be >= 1".into()));
        }
        self.check_cap(p.pow(2 * m + 1))?;
        let h = self.heisenberg(p)?;
        let mut g = h.clone();
        for _ in 1..m {
            g = self.central(&h, &g, None)?;
        }
        Ok(g.with_label(format!("extraspecial_p({p},{})", 2 * m + 1)))
    }

    /// `M_{p^n} = ⟨a, b | a^{p^{n-1}} = b^p = 1, (a,b) = a^{p^{n-2}}⟩`.
    ///
    /// Elements `a^i b^j` sit at index `i + p^{n-1} j`, so `a` is index 1 and
    /// `b` is index `p^{n-1}`. Conjugation by `b` acts on `⟨a⟩` by
    /// `b a b⁻¹ = a^{1 - p^{n-2}}`.
    pub fn modular(&self, p: Prime, n: u32) -> Result<PGroup, GroupError> {
        p.require_odd()?;
        if n < 3 {
            return Err(GroupError::InvalidParameter(format!("modular group needs n >= 3, got {n}")));
        }
        let order = self.check_cap(p.pow(n))?;
        let q = p.pow(n - 1).expect("bounded by cap");
        let s = p.pow(n - 2).expect("bounded by cap");
        let pp = p.as_usize();
        // twist[j] = (1 - s)^j mod q = 1 - j*s mod q
        let twist: Vec<usize> = (0..pp).map(|j| (1 + q - (j * s) % q) % q).collect();
        let mut table = vec![0u32; order * order];
        for x in 0..order {
            let (i, j) = (x % q, x / q);
            for y in 0..order {
                let (k, l) = (y % q, y / q);
                let c = (i + k * twist[j]) % q + q * ((j + l) % pp);
                table[x * order + y] = c as u32;
            }
        }
        PGroup::from_table(p, table, format!("modular({p},{n})"))
    }

    /// Dihedral group of order 8, a `p = 2` negative control.
    pub fn dihedral8(&self) -> Result<PGroup, GroupError> {
        let two = Prime::new(2)?;
        self.check_cap(Some(8))?;
        let mut table = vec![0u32; 64];
        for x in 0..8 {
            let (i, j) = (x % 4, x / 4);
            for y in 0..8 {
                let (k, l) = (y % 4, y / 4);
                let rot = if j == 0 { (i + k) % 4 } else { (i + 4 - k) % 4 };
                table[x * 8 + y] = (rot + 4 * ((j + l) % 2)) as u32;
            }
        }
        PGroup::from_table(two, table, "dihedral8()")
    }

    /// Quaternion group of order 8, a `p = 2` negative control.
    pub fn quaternion8(&self) -> Result<PGroup, GroupError> {
        let two = Prime::new(2)?;
        self.check_cap(Some(8))?;
        let mut table = vec![0u32; 64];
        for x in 0..8 {
            let (i, j) = (x % 4, x / 4);
            for y in 0..8 {
                let (k, l) = (y % 4, y / 4);
                let mut a = if j == 0 { i + k } else { i + 4 - k };
                let mut b = j + l;
                if b == 2 {
                    a += 2;
                    b = 0;
                }
                table[x * 8 + y] = ((a % 4) + 4 * b) as u32;
            }
        }
        PGroup::from_table(two, table, "quaternion8()")
    }

    /// `G × H` with `(g, h)` at index `g + |G| h`.
    pub fn direct(&self, g: &PGroup, h: &PGroup) -> Result<PGroup, GroupError> {
        if g.p() != h.p() {
            return Err(GroupError::MixedPrimes(g.p(), h.p()));
        }
        let (m, k) = (g.order(), h.order());
        let n = self.check_cap(m.checked_mul(k))?;
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            let (g1, h1) = (ElementId::new(x % m), ElementId::new(x / m));
            for y in 0..n {
                let (g2, h2) = (ElementId::new(y % m), ElementId::new(y / m));
                table[x * n + y] = (g.mul(g1, g2).index() + m * h.mul(h1, h2).index()) as u32;
            }
        }
        PGroup::from_table(g.p(), table, format!("({} x {})", g.label(), h.label()))
    }

    /// Central product `K Y L = (K × L) / D`, where `D` identifies the
    /// order-p center of `K` with the order-p central subgroup of `L`
    /// generated by `amalgam` (default: the lowest-index central element of
    /// order p in `L`).
    ///
    /// The minimal-index generators of the two order-p subgroups are matched:
    /// `D = {(z_K^i, z_L^{-i})}`. Cosets are numbered by their minimal
    /// `K × L` index, so the identity coset is index 0. When `|K| = p` the
    /// identification swallows `K` and the result is `L` itself.
    pub fn central(&self, k: &PGroup, l: &PGroup, amalgam: Option<ElementId>) -> Result<PGroup, GroupError> {
        let p = k.p();
        if p != l.p() {
            return Err(GroupError::MixedPrimes(p, l.p()));
        }
        if k.center().order() != p.as_usize() {
            return Err(GroupError::CenterNotOrderP(k.center().order()));
        }
        let zl = match amalgam {
            Some(z) => {
                if z.index() >= l.order() {
                    return Err(GroupError::BadAmalgam(format!("{z} is not an element of L")));
                }
                if !l.center().contains(z) {
                    return Err(GroupError::BadAmalgam(format!("{z} is not central in L")));
                }
                if l.element_order(z) != p.as_usize() {
                    return Err(GroupError::BadAmalgam(format!("{z} has order {}", l.element_order(z))));
                }
                z
            }
            None => l
                .center()
                .members()
                .iter()
                .copied()
                .find(|&z| l.element_order(z) == p.as_usize())
                .ok_or_else(|| GroupError::BadAmalgam("L has trivial center".into()))?,
        };
        let label = format!("({} Y {})", k.label(), l.label());
        if k.order() == p.as_usize() {
            return Ok(l.clone().with_label(label));
        }
        let zk = k.center().members()[1];
        let (m, r) = (k.order(), l.order());
        let n = self.check_cap(Some(m * r / p.as_usize()))?;

        let pp = p.as_usize();
        let zk_pows: Vec<ElementId> = (0..pp).map(|i| k.pow(zk, i)).collect();
        let zl_inv_pows: Vec<ElementId> = (0..pp).map(|i| l.inv(l.pow(zl, i))).collect();
        let mut coset = vec![usize::MAX; m * r];
        let mut reps = Vec::with_capacity(n);
        for x in 0..m * r {
            if coset[x] != usize::MAX {
                continue;
            }
            let (a, b) = (ElementId::new(x % m), ElementId::new(x / m));
            for i in 0..pp {
                let y = k.mul(a, zk_pows[i]).index() + m * l.mul(b, zl_inv_pows[i]).index();
                coset[y] = reps.len();
            }
            reps.push((a, b));
        }
        debug_assert_eq!(reps.len(), n);
        let mut table = vec![0u32; n * n];
        for (x, &(a1, b1)) in reps.iter().enumerate() {
            for (y, &(a2, b2)) in reps.iter().enumerate() {
                let prod = k.mul(a1, a2).index() + m * l.mul(b1, b2).index();
                table[x * n + y] = coset[prod] as u32;
            }
        }
        PGroup::from_table(p, table, label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn cyclic_examples() {
        let b = Builder::default();
        let c3 = b.cyclic(p(3), 1).unwrap();
        assert_eq!((c3.order(), c3.exponent()), (3, 3));
        let c9 = b.cyclic(p(3), 2).unwrap();
        assert_eq!(c9.frattini().order(), 3);
        let c125 = b.cyclic(p(5), 3).unwrap();
        assert_eq!(c125.agemo().order(), 25);
        assert!(matches!(b.cyclic(p(7), 4), Err(GroupError::CapExceeded { order: 2401, .. })));
    }

    #[test]
    fn extraspecial_examples() {
        let b = Builder::default();
        let e = b.extraspecial(p(3), ExtraspecialKind::ExponentP).unwrap();
        assert_eq!((e.order(), e.exponent(), e.center().order()), (27, 3, 3));
        assert_eq!(e.commutator_subgroup(), e.center());
        assert_eq!(e.frattini(), e.center());
        let m = b.extraspecial(p(3), ExtraspecialKind::ExponentP2).unwrap();
        assert_eq!((m.order(), m.exponent()), (27, 9));
        let e5 = b.extraspecial(p(5), ExtraspecialKind::ExponentP).unwrap();
        assert_eq!(e5.conjugacy_partition().t(), 24);
        assert!(matches!(
            b.extraspecial(p(2), ExtraspecialKind::ExponentP),
            Err(GroupError::Prime(crate::prime::PrimeError::EvenPrime))
        ));
    }

    #[test]
    fn modular_presentation_holds() {
        let b = Builder::default();
        for (pr, n) in [(3, 3), (3, 4), (5, 3)] {
            let g = b.modular(p(pr), n).unwrap();
            let q = p(pr).pow(n - 1).unwrap();
            let a = ElementId::new(1);
            let bb = ElementId::new(q);
            assert_eq!(g.element_order(a), q);
            assert_eq!(g.element_order(bb), pr as usize);
            let s = p(pr).pow(n - 2).unwrap();
            assert_eq!(g.commutator(a, bb), g.pow(a, s));
            assert_eq!(g.closure(&[a, bb]).order(), g.order());
            assert_eq!(g.commutator_subgroup().order(), pr as usize);
        }
    }

    #[test]
    fn modular_examples() {
        let b = Builder::default();
        let m27 = b.modular(p(3), 3).unwrap();
        assert_eq!((m27.order(), m27.exponent()), (27, 9));
        let a = ElementId::new(1);
        assert_eq!(m27.center().members(), m27.closure(&[m27.pow(a, 3)]).members());
        let m81 = b.modular(p(3), 4).unwrap();
        assert_eq!(m81.frattini().order(), 9);
        assert!(m81.frattini().is_cyclic());
        assert_eq!(m81.frattini().members(), m81.closure(&[m81.pow(a, 3)]).members());
        assert_eq!(b.modular(p(5), 3).unwrap().exponent(), 25);
        assert!(b.modular(p(3), 2).is_err());
        assert!(b.modular(p(2), 4).is_err());
    }

    #[test]
    fn direct_examples() {
        let b = Builder::default();
        let c3 = b.cyclic(p(3), 1).unwrap();
        let v = b.direct(&c3, &c3).unwrap();
        assert_eq!((v.order(), v.exponent()), (9, 3));
        let e = b.extraspecial(p(3), ExtraspecialKind::ExponentP).unwrap();
        let g = b.direct(&e, &c3).unwrap();
        assert_eq!((g.order(), g.center().order()), (81, 9));
        assert_eq!(g.frattini().order(), 3);
        assert!(g.frattini().is_cyclic());
        let c9 = b.cyclic(p(3), 2).unwrap();
        let h = b.direct(&c3, &c9).unwrap();
        assert_eq!((h.exponent(), h.agemo().order()), (9, 3));
        let c5 = b.cyclic(p(5), 1).unwrap();
        assert!(matches!(b.direct(&c3, &c5), Err(GroupError::MixedPrimes(..))));
    }

    #[test]
    fn central_examples() {
        let b = Builder::default();
        let e = b.extraspecial(p(3), ExtraspecialKind::ExponentP).unwrap();
        let c9 = b.cyclic(p(3), 2).unwrap();
        let g = b.central(&e, &c9, None).unwrap();
        assert_eq!((g.order(), g.exponent()), (81, 9));
        assert_eq!(g.center().order(), 9);
        assert!(g.center().is_cyclic());

        let c3 = b.cyclic(p(3), 1).unwrap();
        let collapsed = b.central(&c3, &c9, None).unwrap();
        assert_eq!(collapsed.group_invariants(), c9.group_invariants());

        let e5 = b.extraspecial(p(5), ExtraspecialKind::ExponentP).unwrap();
        let c25 = b.cyclic(p(5), 2).unwrap();
        assert!(matches!(b.central(&e5, &c25, None), Err(GroupError::CapExceeded { order: 625, .. })));
        let big = Builder::with_cap(625).central(&e5, &c25, None).unwrap();
        assert_eq!(big.order(), 625);
    }

    #[test]
    fn central_product_rejects_bad_inputs() {
        let b = Builder::default();
        let c9 = b.cyclic(p(3), 2).unwrap();
        let e = b.extraspecial(p(3), ExtraspecialKind::ExponentP).unwrap();
        // C9 has center of order 9
        assert!(matches!(b.central(&c9, &e, None), Err(GroupError::CenterNotOrderP(9))));
        // generator of C9 has order 9
        assert!(matches!(b.central(&e, &c9, Some(ElementId::new(1))), Err(GroupError::BadAmalgam(_))));
        // a non-central element of the Heisenberg group
        assert!(matches!(b.central(&e, &e, Some(ElementId::new(1))), Err(GroupError::BadAmalgam(_))));
    }

    #[test]
    fn extraspecial_of_order_243() {
        let g = Builder::default().extraspecial_exponent_p(p(3), 2).unwrap();
        assert_eq!((g.order(), g.exponent(), g.center().order()), (243, 3, 3));
        assert_eq!(g.commutator_subgroup().order(), 3);
    }

    #[test]
    fn two_groups_of_order_8() {
        let b = Builder::default();
        let d = b.dihedral8().unwrap();
        let q = b.quaternion8().unwrap();
        assert_eq!((d.exponent(), d.center().order()), (4, 2));
        assert_eq!((q.exponent(), q.center().order()), (4, 2));
        let involutions = |g: &PGroup| g.elements().filter(|&x| g.element_order(x) == 2).count();
        assert_eq!(involutions(&d), 5);
        assert_eq!(involutions(&q), 1);
    }
}
