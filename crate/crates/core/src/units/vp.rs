//! The subgroup `V^p` generated by p-th powers, for `|Φ(G)| = p`:
//! `V^p = V(F_p G^p) × N`.

use std::sync::Arc;

use super::{derived_sum, noncentral_representatives, require_derived_order_p, require_frattini_order_p, UnitError};
use crate::algebra::{random_normalized_unit, AlgebraElement, Seed};
use crate::group::{ElementId, PGroup, Subgroup};

/// First element in index order that does not commute with `g`.
pub fn default_partner(group: &PGroup, g: ElementId) -> Option<ElementId> {
    group.elements().find(|&h| !group.commute(g, h))
}

fn unit_gamma(group: &Arc<PGroup>, g: ElementId, h: ElementId, gamma: u32) -> AlgebraElement {
    // u_γ = h + γ(g⁻¹h − 1)
    let ginv_h = AlgebraElement::from_group_element(group, group.mul(group.inv(g), h));
    let shift = (&ginv_h - &AlgebraElement::one(group)).scale(gamma);
    &AlgebraElement::from_group_element(group, h) + &shift
}

/// Result of evaluating `Π_{γ ∈ F_p^×} (u_γ^p h^{-p})` with
/// `u_γ = h + γ(g⁻¹h − 1)`.
///
/// Writing `X = ((g⁻¹h)^p − 1) h^{-p}`, the product expands to
/// `Π_γ (1 + γX) − gĜ' = 1 − X^{p−1} − gĜ'`. When `(g⁻¹h)^p = 1` this is
/// `1 − gĜ' = (1 + gĜ')⁻¹`; otherwise `(g⁻¹h)^p` generates `G'`, so
/// `X^{p−1} = Ĝ'` and the product is `(1 − Ĝ')(1 − gĜ')`.
#[derive(Debug, Clone)]
pub struct VpWitness {
    pub g: ElementId,
    pub h: ElementId,
    pub product: AlgebraElement,
    /// `1 − gĜ'`.
    pub target: AlgebraElement,
    /// `(g⁻¹h)^p ≠ 1`.
    pub carries_derived_factor: bool,
}

impl VpWitness {
    /// Whether the product equals `1 − gĜ'` on the nose.
    pub fn hits_target(&self) -> bool {
        self.product == self.target
    }
}

/// Evaluates the witness product and checks it against the exact identity
/// described on [`VpWitness`].
pub fn vp_witness(group: &Arc<PGroup>, g: ElementId, h: ElementId) -> Result<VpWitness, UnitError> {
    require_frattini_order_p(group)?;
    if group.commute(g, h) {
        return Err(UnitError::CommutingPair);
    }
    let p = group.p();
    let one = AlgebraElement::one(group);
    let h_inv_p = AlgebraElement::from_group_element(group, group.inv(group.pow(h, p.as_usize())));
    let mut product = one.clone();
    for gamma in 1..p.get() {
        let u = unit_gamma(group, g, h, gamma);
        product = &product * &(&u.pow(p.get() as u64) * &h_inv_p);
    }
    let d = derived_sum(group);
    let target = &one - &(&AlgebraElement::from_group_element(group, g) * &d);
    let carries_derived_factor = !group.pow(group.mul(group.inv(g), h), p.as_usize()).is_identity();
    let expected = if carries_derived_factor { &(&one - &d) * &target } else { target.clone() };
    if product != expected {
        return Err(UnitError::IdentityViolated(format!(
            "product over F_p^x for g={g}, h={h} is {product}, expected {expected}"
        )));
    }
    Ok(VpWitness { g, h, product, target, carries_derived_factor })
}

/// `1 + g Ĝ'` written as a product of p-th powers `Π b_j^p`.
#[derive(Debug, Clone)]
pub struct NGeneratorCertificate {
    pub class_rep: ElementId,
    pub partner: ElementId,
    pub bases: Vec<AlgebraElement>,
}

impl NGeneratorCertificate {
    pub fn product_of_powers(&self) -> AlgebraElement {
        let group = self.bases[0].group();
        let p = group.p().get() as u64;
        self.bases.iter().fold(AlgebraElement::one(group), |acc, b| &acc * &b.pow(p))
    }
}

/// Inverts the witness product: `1 + gĜ' = Π_γ h^p (u_γ⁻¹)^p · r^p`, where
/// `r = 1 − Σ_j (g⁻¹h)^j` (so `r^p = 1 − Ĝ'`) is present only when the
/// witness carries the derived factor. All factors are central.
pub fn n_generator_certificate(
    group: &Arc<PGroup>,
    g: ElementId,
    h: ElementId,
) -> Result<NGeneratorCertificate, UnitError> {
    let witness = vp_witness(group, g, h)?;
    let p = group.p();
    let mut bases = Vec::with_capacity(2 * p.as_usize() - 1);
    for gamma in 1..p.get() {
        bases.push(AlgebraElement::from_group_element(group, h));
        bases.push(unit_gamma(group, g, h, gamma).invert_normalized()?);
    }
    if witness.carries_derived_factor {
        let base = group.mul(group.inv(g), h);
        let mut r = AlgebraElement::one(group);
        for j in 0..p.as_usize() {
            r = &r - &AlgebraElement::from_group_element(group, group.pow(base, j));
        }
        bases.push(r);
    }
    let cert = NGeneratorCertificate { class_rep: g, partner: h, bases };
    let target = &AlgebraElement::one(group) + &(&AlgebraElement::from_group_element(group, g) * &derived_sum(group));
    if cert.product_of_powers() != target {
        return Err(UnitError::IdentityViolated(format!("p-th power certificate for 1 + {g}·Ĝ' failed")));
    }
    Ok(cert)
}

/// A unit of `F_p G^p` together with a p-th root in `F_p⟨g⟩`.
#[derive(Debug, Clone)]
pub struct AgemoRoot {
    pub unit: AlgebraElement,
    pub root: AlgebraElement,
}

#[derive(Debug, Clone)]
pub struct VpDecomposition {
    pub agemo_order: usize,
    /// `g` with `G^p = ⟨g^p⟩`, when `G^p` is nontrivial.
    pub agemo_generator: Option<ElementId>,
    pub t: usize,
    /// `(|G^p| − 1) + t`.
    pub predicted_log_order: usize,
    pub n_certificates: Vec<NGeneratorCertificate>,
    pub agemo_roots: Vec<AgemoRoot>,
    pub seed: Seed,
    pub samples_checked: usize,
}

/// Membership in `V(F_p G^p) × N`.
///
/// The center-supported part `s` of `x` must be a normalized unit supported
/// on `G^p`; then `s⁻¹x − 1` must lie in `J = span{Ĉ_i}`, i.e. vanish on
/// `ζ(G)` and be constant on every non-central class. Requires `G^p ⊆ ζ(G)`.
pub fn in_vp_product(x: &AlgebraElement) -> bool {
    let group = x.group();
    let center = group.center();
    let agemo = group.agemo();
    let s = x.restrict(|g| center.contains(g));
    if s.support().any(|g| !agemo.contains(g)) || s.augmentation() != 1 {
        return false;
    }
    let Ok(s_inv) = s.invert_normalized() else {
        return false;
    };
    let w = &(&s_inv * x) - &AlgebraElement::one(group);
    if center.members().iter().any(|&z| w.coeff(z) != 0) {
        return false;
    }
    group.conjugacy_partition().noncentral().all(|c| c.iter().all(|&g| w.coeff(g) == w.coeff(c[0])))
}

pub fn vp_decomposition(group: &Arc<PGroup>, seed: Seed, samples: usize) -> Result<VpDecomposition, UnitError> {
    require_frattini_order_p(group)?;
    let p = group.p();
    let pp = p.as_usize();

    let mut n_certificates = Vec::new();
    for g in noncentral_representatives(group) {
        let h = default_partner(group, g).expect("non-central element has a non-commuting partner");
        n_certificates.push(n_generator_certificate(group, g, h)?);
    }

    let agemo = group.agemo();
    let agemo_generator = group.elements().find(|&g| !group.pow(g, pp).is_identity());
    let mut agemo_roots = Vec::new();
    if let Some(g) = agemo_generator {
        if group.closure(&[group.pow(g, pp)]).order() != agemo.order() {
            return Err(UnitError::IdentityViolated("G^p is not generated by a single p-th power".into()));
        }
        // c = g^p has order p; c^j ↦ g^j is the coefficient transport used for roots.
        let c = group.pow(g, pp);
        let to_root: Vec<(ElementId, ElementId)> = (0..pp).map(|j| (group.pow(c, j), group.pow(g, j))).collect();
        let one = AlgebraElement::one(group);
        let c_minus_1 = &AlgebraElement::from_group_element(group, c) - &one;
        for k in 1..pp {
            let unit = &one + &c_minus_1.pow(k as u64);
            let root = unit.transport(|x| to_root.iter().find(|(cj, _)| *cj == x).expect("supported on <c>").1);
            if root.pow(pp as u64) != unit {
                return Err(UnitError::IdentityViolated(format!(
                    "transported root of 1 + (c-1)^{k} is not a p-th root"
                )));
            }
            agemo_roots.push(AgemoRoot { unit, root });
        }
    }

    for i in 0..samples {
        let x = random_normalized_unit(group, seed.split(i as u64));
        if !in_vp_product(&x.pow(pp as u64)) {
            return Err(UnitError::IdentityViolated(format!("sample {i}: x^p not in V(F_p G^p) x N")));
        }
    }

    let t = group.conjugacy_partition().t();
    Ok(VpDecomposition {
        agemo_order: agemo.order(),
        agemo_generator,
        t,
        predicted_log_order: agemo.order() - 1 + t,
        n_certificates,
        agemo_roots,
        seed,
        samples_checked: samples,
    })
}

/// `G ∩ V^p`, decided element by element, and checked against `G^p`.
///
/// For nonabelian `G` with `|Φ(G)| = p` membership uses the decomposition
/// `V^p = V(F_p G^p) × N`. For abelian `G`, `V^p = V(F_p G^p)` because
/// `(Σ α_g g)^p = Σ α_g g^p`.
pub fn intersection_g_vp(group: &Arc<PGroup>) -> Result<Subgroup, UnitError> {
    group.p().require_odd()?;
    let members: Vec<ElementId> = if group.is_abelian() {
        let pp = group.p().as_usize();
        let pth: Vec<ElementId> = group.elements().map(|h| group.pow(h, pp)).collect();
        group.elements().filter(|g| pth.contains(g)).collect()
    } else {
        require_frattini_order_p(group)?;
        group.elements().filter(|&g| in_vp_product(&AlgebraElement::from_group_element(group, g))).collect()
    };
    let sub = group.closure(&members);
    if sub.order() != members.len() || sub.members() != group.agemo().members() {
        return Err(UnitError::IdentityViolated(format!(
            "G ∩ V^p has {} elements, G^p has {}",
            members.len(),
            group.agemo().order()
        )));
    }
    Ok(sub)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorExponentReport {
    pub checked: usize,
    /// Index of the first pair whose commutator has order > p.
    pub violation: Option<usize>,
}

/// Samples pairs of units (sample `i` uses seeds `seed ^ 2i` and
/// `seed ^ (2i+1)`) and checks `(x⁻¹y⁻¹xy)^p = 1`.
pub fn commutator_exponent_sample(
    group: &Arc<PGroup>,
    seed: Seed,
    count: usize,
) -> Result<CommutatorExponentReport, UnitError> {
    if !group.is_abelian() {
        require_derived_order_p(group)?;
    }
    let p = group.p().get() as u64;
    let mut violation = None;
    for i in 0..count {
        let x = random_normalized_unit(group, seed.split(2 * i as u64));
        let y = random_normalized_unit(group, seed.split(2 * i as u64 + 1));
        let comm = &(&x.invert_normalized()? * &y.invert_normalized()?) * &(&x * &y);
        if !comm.pow(p).is_one() {
            violation = Some(i);
            break;
        }
    }
    Ok(CommutatorExponentReport { checked: count, violation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Builder, ExtraspecialKind};
    use crate::prime::Prime;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn e27() -> Arc<PGroup> {
        Arc::new(Builder::default().extraspecial(p(3), ExtraspecialKind::ExponentP).unwrap())
    }

    fn m27() -> Arc<PGroup> {
        Arc::new(Builder::default().modular(p(3), 3).unwrap())
    }

    #[test]
    fn witness_examples() {
        let g = e27();
        for x in g.elements().filter(|&x| !g.center().contains(x)) {
            let h = default_partner(&g, x).unwrap();
            let w = vp_witness(&g, x, h).unwrap();
            assert!(w.hits_target() && !w.carries_derived_factor);
        }
        let m = m27();
        // g = b, h = a: (b⁻¹a)³ ≠ 1, so the product is (1 − Ĝ')(1 − bĜ')
        let one = AlgebraElement::one(&m);
        let d = derived_sum(&m);
        let w = vp_witness(&m, ElementId::new(9), ElementId::new(1)).unwrap();
        let bd = &AlgebraElement::from_group_element(&m, ElementId::new(9)) * &d;
        assert!(w.carries_derived_factor && !w.hits_target());
        assert_eq!(w.product, &(&one - &d) * &(&one - &bd));
        // g = a, h = ab: a⁻¹·ab = b has order 3
        let ab = m.mul(ElementId::new(1), ElementId::new(9));
        let w = vp_witness(&m, ElementId::new(1), ab).unwrap();
        assert!(w.hits_target());
        let z = g.center().members()[1];
        assert!(matches!(vp_witness(&g, ElementId::new(1), z), Err(UnitError::CommutingPair)));
    }

    #[test]
    fn order_p_elements_of_m27_have_no_exact_partner() {
        let m = m27();
        for g in m.elements().filter(|&g| !m.center().contains(g) && m.element_order(g) == 3) {
            for h in m.elements().filter(|&h| !m.commute(g, h)) {
                let w = vp_witness(&m, g, h).unwrap();
                assert!(w.carries_derived_factor && !w.hits_target());
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let d = vp_decomposition(&e27(), Seed(1), 20).unwrap();
        assert_eq!((d.agemo_order, d.t, d.predicted_log_order), (1, 8, 8));
        assert!(d.agemo_roots.is_empty());
        let d = vp_decomposition(&m27(), Seed(1), 20).unwrap();
        assert_eq!((d.agemo_order, d.t, d.predicted_log_order), (3, 8, 10));
        assert_eq!(d.agemo_roots.len(), 2);
        assert_eq!(d.n_certificates.len(), 8);
        let m81 = Arc::new(Builder::default().modular(p(3), 4).unwrap());
        assert_eq!(vp_decomposition(&m81, Seed(1), 1).unwrap_err(), UnitError::FrattiniNotOrderP(9));
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersection_g_vp(&e27()).unwrap().order(), 1);
        let m = m27();
        let s = intersection_g_vp(&m).unwrap();
        assert_eq!(s.members(), m.closure(&[m.pow(ElementId::new(1), 3)]).members());
        let v9 = Arc::new(Builder::default().elementary_abelian(p(3), 2).unwrap());
        assert_eq!(intersection_g_vp(&v9).unwrap().order(), 1);
    }

    #[test]
    fn membership_rejects_noncentral_units() {
        let g = e27();
        assert!(!in_vp_product(&AlgebraElement::from_group_element(&g, ElementId::new(1))));
        assert!(in_vp_product(&AlgebraElement::one(&g)));
    }

    #[test]
    fn commutator_exponent_examples() {
        let r = commutator_exponent_sample(&e27(), Seed(4), 20).unwrap();
        assert_eq!(r.violation, None);
        let c9 = Arc::new(Builder::default().cyclic(p(3), 2).unwrap());
        assert_eq!(commutator_exponent_sample(&c9, Seed(4), 5).unwrap().violation, None);
    }
}
