//! Recovering a cyclic-Frattini group from invariants of its unit group.
//!
//! Every field of [`UnitInvariants`] is a group-theoretic invariant of
//! `V(F_pG)` (an order or an exponent). They are computed with the help of
//! the group basis, but two groups with isomorphic unit groups produce the
//! same tuple. From the tuple one recovers `(|G|, exp G, |ζ(G)|, exp ζ(G))`
//! and from those the parameters of `G = E × (K Y L)`, where `E` is
//! elementary abelian, `K` is trivial or extraspecial of exponent p and `L`
//! is cyclic or `M_{p^n}`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlgebraElement, Seed, Subspace};
use crate::group::{Builder, GroupError, GroupInvariants, PGroup};
use crate::prime::{Prime, PrimeError};
use crate::units::{
    center_exponent_v, center_of_v, class_sum_span, predicted_exponent_v, require_derived_order_p, vp_decomposition,
    UnitError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizerError {
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Unit(#[from] UnitError),
    #[error("inconsistent invariants: {0}")]
    Inconsistent(String),
    #[error("Frattini subgroup of {0} is not cyclic")]
    NotCyclicFrattini(String),
    #[error("groups are over different primes ({0} and {1})")]
    MixedPrimes(Prime, Prime),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitInvariants {
    pub p: Prime,
    /// `dim F_pG = |G|`; `|V| = p^{|G|−1}`.
    pub dimension: usize,
    pub log_center_order: usize,
    pub center_exponent: usize,
    pub v_exponent: usize,
    /// `log_p |V^p|`, known when `|Φ(G)| = p`.
    pub log_vp_order: Option<usize>,
}

impl fmt::Display for UnitInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} dim={} log_zV={} exp_zV={} exp_V={} log_Vp={}",
            self.p,
            self.dimension,
            self.log_center_order,
            self.center_exponent,
            self.v_exponent,
            self.log_vp_order.map_or_else(|| "-".to_string(), |v| v.to_string())
        )
    }
}

/// Computes the unit-group invariants of a nonabelian `G` with `|G'| = p`, p odd.
pub fn v_invariants(group: &Arc<PGroup>) -> Result<UnitInvariants, RecognizerError> {
    require_derived_order_p(group)?;
    let p = group.p();
    let center = center_of_v(group)?;
    if !center.is_consistent() {
        return Err(RecognizerError::Inconsistent(format!("center of V: {center:?}")));
    }
    let v_exponent = predicted_exponent_v(group)?.value;
    let log_vp_order = if group.frattini().order() == p.as_usize() {
        let dec = vp_decomposition(group, Seed(0), 0)?;
        let rank = vp_rank(group);
        if rank != dec.predicted_log_order {
            return Err(RecognizerError::Inconsistent(format!(
                "V^p spans {rank} dimensions, decomposition predicts {}",
                dec.predicted_log_order
            )));
        }
        Some(rank)
    } else {
        None
    };
    Ok(UnitInvariants {
        p,
        dimension: group.order(),
        log_center_order: center.log_order_by_rank,
        center_exponent: center_exponent_v(group),
        v_exponent,
        log_vp_order,
    })
}

/// `V^p = 1 + (I(G^p) ⊕ J)` as an affine subspace; returns its dimension.
fn vp_rank(group: &Arc<PGroup>) -> usize {
    let one = AlgebraElement::one(group);
    let mut span: Subspace = class_sum_span(group);
    for &c in group.agemo().members().iter().filter(|c| !c.is_identity()) {
        span.insert((&AlgebraElement::from_group_element(group, c) - &one).coeffs());
    }
    span.dim()
}

/// Recovers `(|G|, exp G, |ζ(G)|, exp ζ(G))` from a unit-invariant tuple.
///
/// `|ζ(G)|` inverts `p·log|ζ(V)| = |G| + (p−1)|ζ(G)| − p`. When `exp V = p²`,
/// `exp G ∈ {p, p²}` is read off `log|V^p| = (|G^p| − 1) + t`, where
/// `t = (|G| − |ζ(G)|)/p` counts the non-central classes.
pub fn recover_group_invariants(ui: &UnitInvariants) -> Result<GroupInvariants, RecognizerError> {
    let p = ui.p.as_usize();
    let n = ui.dimension;
    let numerator = (p * ui.log_center_order + p).checked_sub(n).filter(|v| v % (p - 1) == 0);
    let Some(center_order) = numerator.map(|v| v / (p - 1)) else {
        return Err(RecognizerError::Inconsistent(format!(
            "p·log|ζ(V)| − |G| + p is not a positive multiple of p − 1 for {ui}"
        )));
    };
    if !ui.p.is_power(center_order) || !n.is_multiple_of(center_order) || center_order >= n {
        return Err(RecognizerError::Inconsistent(format!("recovered |ζ(G)| = {center_order} is not valid for {ui}")));
    }
    let exponent = if ui.v_exponent > p * p {
        ui.v_exponent
    } else if ui.v_exponent == p * p {
        let t = (n - center_order) / p;
        match ui.log_vp_order {
            Some(l) if l == t => p,
            Some(l) if l == t + p - 1 => p * p,
            Some(l) => {
                return Err(RecognizerError::Inconsistent(format!("log|V^p| = {l} is neither t = {t} nor t + p − 1")))
            }
            None => return Err(RecognizerError::Inconsistent("exp V = p² but |V^p| unknown".into())),
        }
    } else {
        return Err(RecognizerError::Inconsistent(format!("exp V = {} is below p²", ui.v_exponent)));
    };
    Ok(GroupInvariants { order: n, exponent, center_order, center_exponent: ui.center_exponent })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KKind {
    /// `K = C_p`, so `K Y L = L`.
    Trivial,
    ExtraspecialExpP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LKind {
    Cyclic,
    Modular,
}

/// Parameters of `E × (K Y L)`; `|E| · |K| · |L| / p = |G|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KYLParams {
    pub e_order: usize,
    pub k_kind: KKind,
    pub k_order: usize,
    pub l_kind: LKind,
    pub l_order: usize,
}

impl fmt::Display for KYLParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.k_kind {
            KKind::Trivial => "C".to_string(),
            KKind::ExtraspecialExpP => "Ext".to_string(),
        };
        let l = match self.l_kind {
            LKind::Cyclic => "C",
            LKind::Modular => "M",
        };
        write!(f, "E{} x ({}{} Y {}{})", self.e_order, k, self.k_order, l, self.l_order)
    }
}

fn require_power(p: Prime, value: usize, what: &str) -> Result<u32, RecognizerError> {
    p.log(value).ok_or_else(|| RecognizerError::Inconsistent(format!("{what} = {value} is not a power of {p}")))
}

/// `L` is cyclic iff `exp G = exp ζ(G)`. Then `|L| = exp G` and
/// `|K| = p·|G:ζ(G)|`; otherwise `L = M_{p^n}` with `|L| = p·exp G` and
/// `|K| = |G:ζ(G)|/p`.
pub fn classify_kyl(gi: &GroupInvariants, p: Prime) -> Result<KYLParams, RecognizerError> {
    p.require_odd()?;
    let pp = p.as_usize();
    for (what, v) in
        [("|G|", gi.order), ("exp G", gi.exponent), ("|ζ(G)|", gi.center_order), ("exp ζ(G)", gi.center_exponent)]
    {
        require_power(p, v, what)?;
    }
    if gi.center_order == 0 || !gi.order.is_multiple_of(gi.center_order) || gi.center_order == gi.order {
        return Err(RecognizerError::Inconsistent(format!("{gi} is not nonabelian")));
    }
    let index = gi.order / gi.center_order;
    let (l_kind, l_order, k_order) = if gi.exponent == gi.center_exponent {
        (LKind::Cyclic, gi.exponent, pp * index)
    } else {
        if !index.is_multiple_of(pp) {
            return Err(RecognizerError::Inconsistent(format!("|G:ζ(G)| = {index} below p")));
        }
        (LKind::Modular, pp * gi.exponent, index / pp)
    };
    let k_log = require_power(p, k_order, "|K|")?;
    if k_log == 0 || k_log % 2 == 0 {
        return Err(RecognizerError::Inconsistent(format!("|K| = {k_order} is not p or an extraspecial order")));
    }
    if l_kind == LKind::Modular && require_power(p, l_order, "|L|")? < 3 {
        return Err(RecognizerError::Inconsistent(format!("modular L of order {l_order}")));
    }
    let denom = k_order * l_order;
    if !(pp * gi.order).is_multiple_of(denom) {
        return Err(RecognizerError::Inconsistent(format!("|E| = p|G|/(|K||L|) is not integral for {gi}")));
    }
    let e_order = pp * gi.order / denom;
    require_power(p, e_order, "|E|")?;
    let k_kind = if k_order > pp { KKind::ExtraspecialExpP } else { KKind::Trivial };
    if k_kind == KKind::Trivial && l_kind == LKind::Cyclic {
        return Err(RecognizerError::Inconsistent(format!("{gi} would be abelian")));
    }
    Ok(KYLParams { e_order, k_kind, k_order, l_kind, l_order })
}

/// Builds `E × (K Y L)` from parameters.
pub fn build_kyl(params: &KYLParams, p: Prime, builder: &Builder) -> Result<PGroup, RecognizerError> {
    let k = match params.k_kind {
        KKind::Trivial => builder.cyclic(p, 1)?,
        KKind::ExtraspecialExpP => {
            let log = require_power(p, params.k_order, "|K|")?;
            builder.extraspecial_exponent_p(p, (log - 1) / 2)?
        }
    };
    let l_log = require_power(p, params.l_order, "|L|")?;
    let l = match params.l_kind {
        LKind::Cyclic => builder.cyclic(p, l_log)?,
        LKind::Modular => builder.modular(p, l_log)?,
    };
    let kl = builder.central(&k, &l, None)?;
    let e_log = require_power(p, params.e_order, "|E|")?;
    let g = if e_log == 0 { kl } else { builder.direct(&builder.elementary_abelian(p, e_log)?, &kl)? };
    Ok(g.with_label(params.to_string()))
}

/// How the two readings of `|L| = p⁻¹|G:ζ(G)|` fare in the modular branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypoReading {
    /// `|L| = p·exp G` and `|L| = p⁻¹|G:ζ(G)|` agree.
    pub literal_consistent: bool,
    /// `|K| = p⁻¹|G:ζ(G)|` yields parameters whose rebuild has the input invariants.
    pub corrected_consistent: bool,
}

/// `None` when `L` is cyclic, where the clause does not apply.
pub fn typo_reading_check(
    gi: &GroupInvariants,
    p: Prime,
    builder: &Builder,
) -> Result<Option<TypoReading>, RecognizerError> {
    if gi.exponent == gi.center_exponent {
        return Ok(None);
    }
    let pp = p.as_usize();
    let index = gi.order / gi.center_order;
    let literal_consistent = pp * gi.exponent * pp == index;
    let corrected_consistent = match classify_kyl(gi, p) {
        Ok(params) => build_kyl(&params, p, builder)?.group_invariants() == *gi,
        Err(_) => false,
    };
    Ok(Some(TypoReading { literal_consistent, corrected_consistent }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Distinguished,
    SameType,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Distinguished => "distinguished",
            VerdictKind::SameType => "same-type",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub left: UnitInvariants,
    pub right: UnitInvariants,
    /// Recovered parameters, when the tuples coincide.
    pub params: Option<KYLParams>,
}

fn verdict_from(left: UnitInvariants, right: UnitInvariants) -> Result<Verdict, RecognizerError> {
    if left.p != right.p {
        return Err(RecognizerError::MixedPrimes(left.p, right.p));
    }
    if left != right {
        return Ok(Verdict { kind: VerdictKind::Distinguished, left, right, params: None });
    }
    let params = classify_kyl(&recover_group_invariants(&left)?, left.p)?;
    Ok(Verdict { kind: VerdictKind::SameType, left, right, params: Some(params) })
}

/// Requires both groups nonabelian with cyclic Frattini subgroup and p odd.
pub fn distinguish(g: &Arc<PGroup>, h: &Arc<PGroup>) -> Result<Verdict, RecognizerError> {
    if g.p() != h.p() {
        return Err(RecognizerError::MixedPrimes(g.p(), h.p()));
    }
    require_cyclic_frattini(g)?;
    require_cyclic_frattini(h)?;
    verdict_from(v_invariants(g)?, v_invariants(h)?)
}

pub fn require_cyclic_frattini(group: &PGroup) -> Result<(), RecognizerError> {
    group.p().require_odd()?;
    if group.is_abelian() {
        return Err(UnitError::Abelian.into());
    }
    if !group.frattini().is_cyclic() {
        return Err(RecognizerError::NotCyclicFrattini(group.label().to_string()));
    }
    Ok(())
}

/// Symmetric table of verdicts.
#[derive(Debug, Clone)]
pub struct BermanMatrix {
    pub labels: Vec<String>,
    pub invariants: Vec<UnitInvariants>,
    pub verdicts: Vec<Vec<VerdictKind>>,
}

impl BermanMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn off_diagonal_distinguished(&self) -> bool {
        (0..self.len()).all(|i| (0..self.len()).all(|j| i == j || self.verdicts[i][j] == VerdictKind::Distinguished))
    }
}

pub fn berman_matrix(catalog: &[Arc<PGroup>]) -> Result<BermanMatrix, RecognizerError> {
    for g in catalog {
        require_cyclic_frattini(g)?;
    }
    let invariants: Vec<UnitInvariants> = catalog.par_iter().map(v_invariants).collect::<Result<_, _>>()?;
    let n = catalog.len();
    let mut verdicts = vec![vec![VerdictKind::SameType; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = verdict_from(invariants[i], invariants[j])?.kind;
            verdicts[i][j] = v;
            verdicts[j][i] = v;
        }
    }
    Ok(BermanMatrix { labels: catalog.iter().map(|g| g.label().to_string()).collect(), invariants, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ExtraspecialKind;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn catalog3() -> Vec<Arc<PGroup>> {
        let b = Builder::default();
        let p = p3();
        let e = b.extraspecial(p, ExtraspecialKind::ExponentP).unwrap();
        let m27 = b.modular(p, 3).unwrap();
        vec![
            Arc::new(e.clone()),
            Arc::new(m27.clone()),
            Arc::new(b.modular(p, 4).unwrap()),
            Arc::new(b.direct(&e, &b.cyclic(p, 1).unwrap()).unwrap()),
            Arc::new(b.central(&e, &b.cyclic(p, 2).unwrap(), None).unwrap()),
            Arc::new(b.direct(&m27, &b.cyclic(p, 1).unwrap()).unwrap()),
        ]
    }

    fn ui(dim: usize, log_z: usize, exp_z: usize, exp_v: usize, vp: Option<usize>) -> UnitInvariants {
        UnitInvariants {
            p: p3(),
            dimension: dim,
            log_center_order: log_z,
            center_exponent: exp_z,
            v_exponent: exp_v,
            log_vp_order: vp,
        }
    }

    fn gi(order: usize, exponent: usize, center_order: usize, center_exponent: usize) -> GroupInvariants {
        GroupInvariants { order, exponent, center_order, center_exponent }
    }

    #[test]
    fn invariant_examples() {
        let c = catalog3();
        assert_eq!(v_invariants(&c[0]).unwrap(), ui(27, 10, 3, 9, Some(8)));
        assert_eq!(v_invariants(&c[1]).unwrap(), ui(27, 10, 3, 9, Some(10)));
        assert_eq!(v_invariants(&c[2]).unwrap(), ui(81, 32, 9, 27, None));
    }

    #[test]
    fn recovery_examples() {
        assert_eq!(recover_group_invariants(&ui(27, 10, 3, 9, Some(8))).unwrap(), gi(27, 3, 3, 3));
        assert_eq!(recover_group_invariants(&ui(27, 10, 3, 9, Some(10))).unwrap(), gi(27, 9, 3, 3));
        assert_eq!(recover_group_invariants(&ui(81, 32, 9, 27, None)).unwrap(), gi(81, 27, 9, 9));
        assert!(recover_group_invariants(&ui(27, 10, 3, 9, Some(9))).is_err());
        assert!(recover_group_invariants(&ui(27, 11, 3, 9, Some(8))).is_err());
    }

    #[test]
    fn round_trip_and_rebuild() {
        let b = Builder::default();
        for g in catalog3() {
            let brute = g.group_invariants();
            assert_eq!(recover_group_invariants(&v_invariants(&g).unwrap()).unwrap(), brute, "{}", g.label());
            let params = classify_kyl(&brute, p3()).unwrap();
            assert_eq!(build_kyl(&params, p3(), &b).unwrap().group_invariants(), brute, "{}", g.label());
        }
    }

    #[test]
    fn classification_examples() {
        let p = p3();
        let e = classify_kyl(&gi(27, 3, 3, 3), p).unwrap();
        assert_eq!(
            (e.e_order, e.k_kind, e.k_order, e.l_kind, e.l_order),
            (1, KKind::ExtraspecialExpP, 27, LKind::Cyclic, 3)
        );
        let m = classify_kyl(&gi(27, 9, 3, 3), p).unwrap();
        assert_eq!((m.e_order, m.k_kind, m.k_order, m.l_kind, m.l_order), (1, KKind::Trivial, 3, LKind::Modular, 27));
        let ey = classify_kyl(&gi(81, 9, 9, 9), p).unwrap();
        assert_eq!((ey.e_order, ey.k_order, ey.l_kind, ey.l_order), (1, 27, LKind::Cyclic, 9));
        assert!(classify_kyl(&gi(27, 3, 27, 3), p).is_err());
    }

    #[test]
    fn typo_reading_favours_k() {
        let b = Builder::default();
        for inv in [gi(27, 9, 3, 3), gi(81, 27, 9, 9), gi(81, 9, 9, 3)] {
            let r = typo_reading_check(&inv, p3(), &b).unwrap().unwrap();
            assert!(r.corrected_consistent && !r.literal_consistent, "{inv}");
        }
        assert_eq!(typo_reading_check(&gi(27, 3, 3, 3), p3(), &b).unwrap(), None);
    }

    #[test]
    fn verdicts() {
        let c = catalog3();
        assert_eq!(distinguish(&c[0], &c[1]).unwrap().kind, VerdictKind::Distinguished);
        assert_eq!(distinguish(&c[3], &c[4]).unwrap().kind, VerdictKind::Distinguished);
        let same = distinguish(&c[1], &c[1]).unwrap();
        assert_eq!(same.kind, VerdictKind::SameType);
        let m = berman_matrix(&c).unwrap();
        assert!(m.off_diagonal_distinguished());
        let single = berman_matrix(&c[..1]).unwrap();
        assert_eq!(single.verdicts, vec![vec![VerdictKind::SameType]]);
        let twice = berman_matrix(&[
            c[0].clone(),
            Arc::new(
                build_kyl(&classify_kyl(&c[0].group_invariants(), p3()).unwrap(), p3(), &Builder::default()).unwrap(),
            ),
        ])
        .unwrap();
        assert_eq!(twice.verdicts[0][1], VerdictKind::SameType);
    }

    #[test]
    fn relabel_invariance() {
        let c = catalog3();
        for g in &c[..2] {
            let perm = g.random_relabeling(11);
            let h = Arc::new(g.relabel(&perm).unwrap());
            assert_eq!(v_invariants(g).unwrap(), v_invariants(&h).unwrap());
        }
    }
}
