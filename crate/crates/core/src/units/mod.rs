//! Power structure of the normalized unit group `V = V(F_pG)` when the
//! derived subgroup `G'` has order p and p is odd.
//!
//! Throughout, `Ĝ'` is the sum of the elements of `G'`, the non-central
//! conjugacy classes are `C_1, …, C_t` with minimal-index representatives
//! `g_i`, and `Ĉ_i = g_i Ĝ'`. The span `J` of the `Ĉ_i` is a square-zero
//! ideal of the center of `F_pG`, so `N = 1 + J` is elementary abelian.

mod vp;

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{center_subspace, AlgebraElement, AlgebraError, Subspace};
use crate::group::{ElementId, PGroup};
use crate::prime::PrimeError;

pub use vp::{
    commutator_exponent_sample, default_partner, in_vp_product, intersection_g_vp, n_generator_certificate,
    vp_decomposition, vp_witness, AgemoRoot, CommutatorExponentReport, NGeneratorCertificate, VpDecomposition,
    VpWitness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("derived subgroup has order {0}, expected p")]
    DerivedNotOrderP(usize),
    #[error("Frattini subgroup has order {0}, expected p")]
    FrattiniNotOrderP(usize),
    #[error("group is abelian")]
    Abelian,
    #[error("element does not commute with {0}")]
    NotCentral(ElementId),
    #[error("element has augmentation {0}, expected 1")]
    NotNormalized(u32),
    #[error("elements commute")]
    CommutingPair,
    #[error("subgroup generated by the pair has derived subgroup of order {order}, central: {central}")]
    PairDerivedInvalid { order: usize, central: bool },
    #[error("identity failed: {0}")]
    IdentityViolated(String),
}

/// Odd p and `|G'| = p`.
pub fn require_derived_order_p(group: &PGroup) -> Result<(), UnitError> {
    group.p().require_odd()?;
    let d = group.commutator_subgroup().order();
    if d != group.p().as_usize() {
        return Err(UnitError::DerivedNotOrderP(d));
    }
    Ok(())
}

/// Odd p, nonabelian, `|Φ(G)| = p`.
pub fn require_frattini_order_p(group: &PGroup) -> Result<(), UnitError> {
    group.p().require_odd()?;
    if group.is_abelian() {
        return Err(UnitError::Abelian);
    }
    let f = group.frattini().order();
    if f != group.p().as_usize() {
        return Err(UnitError::FrattiniNotOrderP(f));
    }
    Ok(())
}

pub fn derived_sum(group: &Arc<PGroup>) -> AlgebraElement {
    AlgebraElement::class_sum(group, group.commutator_subgroup().members())
}

/// Minimal-index representatives of the non-central classes.
pub fn noncentral_representatives(group: &PGroup) -> Vec<ElementId> {
    group.conjugacy_partition().noncentral().map(|c| c[0]).collect()
}

/// `x = z · Π (1 + g_i Ĝ')^{β_i}` for a central normalized unit `x`.
#[derive(Debug, Clone)]
pub struct CentralUnitFactorization {
    pub z: AlgebraElement,
    pub betas: Vec<u32>,
    pub representatives: Vec<ElementId>,
}

impl CentralUnitFactorization {
    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> AlgebraElement {
        let group = self.z.group();
        let one = AlgebraElement::one(group);
        let d = derived_sum(group);
        let mut acc = self.z.clone();
        for (&g, &beta) in self.representatives.iter().zip(&self.betas) {
            let gen = &one + &(&AlgebraElement::from_group_element(group, g) * &d);
            acc = &acc * &gen.pow(beta as u64);
        }
        acc
    }
}

pub fn central_unit_factor(x: &AlgebraElement) -> Result<CentralUnitFactorization, UnitError> {
    let group = x.group();
    require_derived_order_p(group)?;
    let aug = x.augmentation();
    if aug != 1 {
        return Err(UnitError::NotNormalized(aug));
    }
    if let Some(g) = x.first_noncommuting() {
        return Err(UnitError::NotCentral(g));
    }
    let center = group.center();
    let z = x.restrict(|g| center.contains(g));
    // x = z + Σ α_i Ĉ_i, so z^{-1}x - 1 = Σ β_i Ĉ_i with β_i read at the representatives.
    let w = &(&z.invert_normalized()? * x) - &AlgebraElement::one(group);
    let representatives = noncentral_representatives(group);
    let betas: Vec<u32> = representatives.iter().map(|&g| w.coeff(g)).collect();
    let fact = CentralUnitFactorization { z, betas, representatives };
    if &fact.reconstruct() != x {
        return Err(UnitError::IdentityViolated("central unit factorization does not reproduce x".into()));
    }
    Ok(fact)
}

/// `log_p |ζ(V)|` computed by rank and by closed form, plus the direct
/// decomposition `ζ(V) = V(F_p ζ(G)) × N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterOfV {
    /// `dim ζ(F_pG) − 1`.
    pub log_order_by_rank: usize,
    /// `(|G| + (p−1)|ζ(G)| − p) / p`.
    pub log_order_by_formula: usize,
    /// `log_p |V(F_p ζ(G))| = |ζ(G)| − 1`.
    pub log_center_factor: usize,
    /// `log_p |N| = t`.
    pub log_n_factor: usize,
    /// Dimension of `span ζ(G) ∩ J`; zero iff the two factors meet trivially.
    pub intersection_dim: usize,
}

impl CenterOfV {
    pub fn is_consistent(&self) -> bool {
        self.log_order_by_rank == self.log_order_by_formula
            && self.intersection_dim == 0
            && self.log_center_factor + self.log_n_factor == self.log_order_by_rank
    }
}

pub fn center_of_v(group: &Arc<PGroup>) -> Result<CenterOfV, UnitError> {
    require_derived_order_p(group)?;
    let p = group.p().as_usize();
    let n = group.order();
    let zg = group.center().order();
    let center_alg = center_subspace(group);
    let numerator = n + (p - 1) * zg - p;
    if !numerator.is_multiple_of(p) {
        return Err(UnitError::IdentityViolated(format!("(|G| + (p-1)|Z(G)| - p) = {numerator} not divisible by p")));
    }
    let center_span = Subspace::spanned_by(
        group.p(),
        n,
        group.center().members().iter().map(|&z| AlgebraElement::from_group_element(group, z).coeffs().to_vec()),
    );
    let j = class_sum_span(group);
    if !center_alg.contains_subspace(&j) || !center_alg.contains_subspace(&center_span) {
        return Err(UnitError::IdentityViolated("factor subspaces not central".into()));
    }
    Ok(CenterOfV {
        log_order_by_rank: center_alg.dim() - 1,
        log_order_by_formula: numerator / p,
        log_center_factor: zg - 1,
        log_n_factor: j.dim(),
        intersection_dim: center_span.intersection_dim(&j),
    })
}

/// `J = span{Ĉ_i}`.
pub fn class_sum_span(group: &Arc<PGroup>) -> Subspace {
    Subspace::spanned_by(
        group.p(),
        group.order(),
        group.conjugacy_partition().noncentral().map(|c| AlgebraElement::class_sum(group, c).coeffs().to_vec()),
    )
}

/// Right-hand side of `(a+b)^p = a^p + b^p + Σ_{r=1}^{p-1} (C(p,r)/p) a^r b^{p-r} Ĥ'`
/// for `H = ⟨a, b⟩` with `H'` central of order p.
pub fn frobenius_expansion(group: &Arc<PGroup>, a: ElementId, b: ElementId) -> Result<AlgebraElement, UnitError> {
    let p = group.p();
    p.require_odd()?;
    if group.commute(a, b) {
        return Err(UnitError::CommutingPair);
    }
    let h = group.closure(&[a, b]);
    let comms: Vec<ElementId> = h
        .members()
        .iter()
        .flat_map(|&x| h.members().iter().map(move |&y| (x, y)))
        .map(|(x, y)| group.commutator(x, y))
        .collect();
    let hd = group.closure(&comms);
    let central = hd.members().iter().all(|&c| h.members().iter().all(|&x| group.commute(c, x)));
    if hd.order() != p.as_usize() || !central {
        return Err(UnitError::PairDerivedInvalid { order: hd.order(), central });
    }
    let elem = |g| AlgebraElement::from_group_element(group, g);
    let hd_sum = AlgebraElement::class_sum(group, hd.members());
    let pp = p.as_usize();
    let mut rhs = &elem(group.pow(a, pp)) + &elem(group.pow(b, pp));
    for r in 1..pp {
        let word = group.mul(group.pow(a, r), group.pow(b, pp - r));
        let term = (&elem(word) * &hd_sum).scale(p.reduced_binomial(r as u32));
        rhs = &rhs + &term;
    }
    Ok(rhs)
}

/// Outcome of checking that `x^p` is central.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralityWitness {
    pub violator: Option<ElementId>,
}

impl CentralityWitness {
    pub fn holds(&self) -> bool {
        self.violator.is_none()
    }
}

pub fn pth_power_centrality(x: &AlgebraElement) -> Result<CentralityWitness, UnitError> {
    require_derived_order_p(x.group())?;
    let xp = x.pow(x.p().get() as u64);
    Ok(CentralityWitness { violator: xp.first_noncommuting() })
}

/// `Σ α_g g^{p²}` for `x = Σ α_g g`.
pub fn p2_transport(x: &AlgebraElement) -> AlgebraElement {
    let group = x.group();
    let p2 = x.p().as_usize().pow(2);
    x.transport(|g| group.pow(g, p2))
}

/// Checks `x^{p²} = Σ α_g g^{p²}`.
pub fn p2_power_identity(x: &AlgebraElement) -> Result<bool, UnitError> {
    require_derived_order_p(x.group())?;
    let p2 = (x.p().get() as u64).pow(2);
    Ok(x.pow(p2) == p2_transport(x))
}

/// Certified value of `exp V`.
#[derive(Debug, Clone)]
pub struct ExponentCertificate {
    pub value: usize,
    /// Unit whose order realizes the lower bound.
    pub witness: AlgebraElement,
    pub witness_order: usize,
    /// `p² · exp(G^{p²})`: since `x^{p²} = Σ α_g g^{p²}` lies in the
    /// commutative algebra of the central subgroup `G^{p²}`, raising it to
    /// `exp(G^{p²})` gives `Σ α_g = 1`.
    pub upper_bound: usize,
}

impl ExponentCertificate {
    pub fn is_tight(&self) -> bool {
        self.witness_order == self.value && self.upper_bound == self.value
    }
}

/// `exp V = exp G` when `exp G > p`, and `p²` when `exp G = p`.
pub fn predicted_exponent_v(group: &Arc<PGroup>) -> Result<ExponentCertificate, UnitError> {
    require_derived_order_p(group)?;
    let p = group.p().as_usize();
    let exp_g = group.exponent();
    let value = if exp_g > p { exp_g } else { p * p };
    let witness = if exp_g > p {
        let g = group.elements().find(|&g| group.element_order(g) == exp_g).expect("exponent is attained");
        AlgebraElement::from_group_element(group, g)
    } else {
        let (a, b) = first_noncommuting_pair(group).ok_or(UnitError::Abelian)?;
        let elem = |g| AlgebraElement::from_group_element(group, g);
        &(&elem(a) + &elem(b)) - &AlgebraElement::one(group)
    };
    let witness_order = witness.unit_order()?;
    let upper_bound = p * p * group.power_subgroup(2).exponent();
    let cert = ExponentCertificate { value, witness, witness_order, upper_bound };
    if !cert.is_tight() {
        return Err(UnitError::IdentityViolated(format!(
            "exponent certificate not tight: predicted {value}, witness order {witness_order}, upper bound {upper_bound}"
        )));
    }
    Ok(cert)
}

/// Lowest-index `a` outside the center and the lowest-index `b` not commuting with it.
pub fn first_noncommuting_pair(group: &PGroup) -> Option<(ElementId, ElementId)> {
    let a = group.elements().find(|&g| !group.center().contains(g))?;
    let b = group.elements().find(|&h| !group.commute(a, h))?;
    Some((a, b))
}

/// `exp ζ(V)`.
///
/// `ζ(V) = 1 + Z₀` where `Z₀` is the augmentation-zero part of `ζ(F_pG)`.
/// In this commutative algebra `(1+m)^{p^k} = 1 + m^{p^k}` and `m ↦ m^{p^k}`
/// is F_p-linear, so the exponent is the largest `p^k` needed to kill a
/// basis element of `Z₀`. The basis used is `{z − 1 : z ∈ ζ(G)} ∪ {Ĉ_i}`.
pub fn center_exponent_v(group: &Arc<PGroup>) -> usize {
    let p = group.p().get() as u64;
    let one = AlgebraElement::one(group);
    let basis = group
        .center()
        .members()
        .iter()
        .filter(|z| !z.is_identity())
        .map(|&z| &AlgebraElement::from_group_element(group, z) - &one)
        .chain(group.conjugacy_partition().noncentral().map(|c| AlgebraElement::class_sum(group, c)));
    let mut exponent = 1usize;
    for m in basis {
        let mut e = 1usize;
        let mut power = m;
        while !power.is_zero() {
            power = power.pow(p);
            e *= p as usize;
        }
        exponent = exponent.max(e);
    }
    exponent
}
