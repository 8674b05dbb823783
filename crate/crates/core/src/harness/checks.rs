//! The verification runner.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use super::catalog::{builtin_catalog, Role};
use super::HarnessError;
use crate::algebra::{
    commutator_subspace, commutator_subspace_test, random_element, random_normalized_unit, unit_power_sums,
    AlgebraElement, AlgebraError, Seed,
};
use crate::group::{Builder, ElementId, PGroup};
use crate::prime::Prime;
use crate::recognizer::{
    berman_matrix, build_kyl, classify_kyl, recover_group_invariants, require_cyclic_frattini, typo_reading_check,
    v_invariants, RecognizerError,
};
use crate::units::{
    center_of_v, central_unit_factor, commutator_exponent_sample, default_partner, derived_sum, frobenius_expansion,
    intersection_g_vp, noncentral_representatives, p2_power_identity, predicted_exponent_v, pth_power_centrality,
    require_derived_order_p, require_frattini_order_p, vp_decomposition, vp_witness, UnitError,
};

pub const DEFAULT_SAMPLES: usize = 200;

/// Largest order on which the explicit commutator span is computed.
const EXPLICIT_SPAN_LIMIT: usize = 81;

#[derive(Debug, Clone, Copy)]
pub struct CheckInfo {
    pub id: &'static str,
    pub operation: &'static str,
    pub statement: &'static str,
}

pub const CHECKS: &[CheckInfo] = &[
    CheckInfo {
        id: "brauer",
        operation: "algebra::commutator_subspace_test",
        statement: "(x+y)^p - x^p - y^p has zero class sums; criterion agrees with the explicit span",
    },
    CheckInfo {
        id: "huppert",
        operation: "algebra::unit_power_sums",
        statement: "sum of g^r over F_p^x is 0 for r < p-1 and p-1 for r = p-1",
    },
    CheckInfo {
        id: "center-eq2",
        operation: "units::center_of_v",
        statement: "log_p|Z(V)| = (|G| + (p-1)|Z(G)| - p)/p",
    },
    CheckInfo {
        id: "center-eq3",
        operation: "units::center_of_v, units::central_unit_factor",
        statement: "Z(V) = V(F_p Z(G)) x N with N elementary abelian",
    },
    CheckInfo {
        id: "lemma-abp",
        operation: "units::frobenius_expansion",
        statement: "(a+b)^p = a^p + b^p + sum C(p,r)/p a^r b^(p-r) H'^",
    },
    CheckInfo { id: "lemma-center", operation: "units::pth_power_centrality", statement: "x^p is central" },
    CheckInfo { id: "eq-p2", operation: "units::p2_power_identity", statement: "x^(p^2) = sum a_g g^(p^2)" },
    CheckInfo {
        id: "exp-v",
        operation: "units::predicted_exponent_v",
        statement: "exp V = exp G if exp G > p, else p^2",
    },
    CheckInfo {
        id: "vp-witness",
        operation: "units::vp_witness",
        statement: "prod over F_p^x of u^p h^-p = 1 - gG'^ for every non-central g",
    },
    CheckInfo {
        id: "vp-decomp",
        operation: "units::vp_decomposition",
        statement: "V^p = V(F_p G^p) x N, log_p|V^p| = (|G^p| - 1) + t",
    },
    CheckInfo { id: "johnson", operation: "units::intersection_g_vp", statement: "G meet V^p = G^p" },
    CheckInfo { id: "comm-exp", operation: "units::commutator_exponent_sample", statement: "V' has exponent p" },
    CheckInfo {
        id: "recognizer",
        operation: "recognizer::v_invariants, recover_group_invariants, classify_kyl",
        statement: "unit invariants recover (|G|, exp G, |Z(G)|, exp Z(G)) and E x (K Y L)",
    },
    CheckInfo {
        id: "berman",
        operation: "recognizer::berman_matrix",
        statement: "non-isomorphic catalog groups have non-isomorphic unit groups",
    },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    SkippedPrecondition,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedPrecondition => "skipped-precondition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub check: &'static str,
    pub group: String,
    pub seed: u64,
    pub samples: usize,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check={} group={} status={} seed={} samples={} detail={}",
            self.check, self.group, self.status, self.seed, self.samples, self.detail
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::SkippedPrecondition => s.skipped += 1,
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.skipped
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "summary total={} pass={} fail={} skipped={}", self.total(), self.pass, self.fail, self.skipped)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub p: Prime,
    pub seed: u64,
    pub samples: usize,
    pub cap: usize,
}

/// Resolves `all` or a comma-separated list into known check ids, in
/// canonical order.
pub fn parse_selection(text: &str) -> Result<Vec<&'static str>, HarnessError> {
    if text.trim() == "all" {
        return Ok(CHECKS.iter().map(|c| c.id).collect());
    }
    let mut wanted = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let info = CHECKS.iter().find(|c| c.id == part).ok_or_else(|| HarnessError::UnknownCheck(part.to_string()))?;
        wanted.push(info.id);
    }
    if wanted.is_empty() {
        return Err(HarnessError::UnknownCheck(text.to_string()));
    }
    Ok(CHECKS.iter().map(|c| c.id).filter(|id| wanted.contains(id)).collect())
}

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

impl From<UnitError> for Outcome {
    fn from(e: UnitError) -> Self {
        match e {
            UnitError::IdentityViolated(_) | UnitError::Algebra(AlgebraError::NotAUnit) => Outcome::Fail(e.to_string()),
            _ => Outcome::Skip(e.to_string()),
        }
    }
}

impl From<RecognizerError> for Outcome {
    fn from(e: RecognizerError) -> Self {
        match e {
            RecognizerError::Unit(u) => u.into(),
            RecognizerError::Inconsistent(_) => Outcome::Fail(e.to_string()),
            _ => Outcome::Skip(e.to_string()),
        }
    }
}

impl From<AlgebraError> for Outcome {
    fn from(e: AlgebraError) -> Self {
        UnitError::from(e).into()
    }
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

/// Report labels may not contain spaces.
pub fn report_label(label: &str) -> String {
    label.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Runs the selected checks on the built-in catalog for `cfg.p`.
pub fn run_checks(selection: &[&str], cfg: &RunConfig) -> Result<Vec<VerificationReport>, HarnessError> {
    for id in selection {
        if !CHECKS.iter().any(|c| c.id == *id) {
            return Err(HarnessError::UnknownCheck(id.to_string()));
        }
    }
    let builder = Builder::with_cap(cfg.cap);
    let catalog = builtin_catalog(cfg.p, cfg.cap);
    let groups: Vec<(Role, Arc<PGroup>)> =
        catalog.iter().map(|e| e.spec.evaluate(&builder).map(|g| (e.role, Arc::new(g)))).collect::<Result<_, _>>()?;

    let mut jobs: Vec<(usize, &'static str, Option<usize>)> = Vec::new();
    for (ci, check) in CHECKS.iter().enumerate().filter(|(_, c)| selection.contains(&c.id)) {
        match check.id {
            "huppert" | "berman" => jobs.push((ci, check.id, None)),
            _ => jobs.extend((0..groups.len()).map(|gi| (ci, check.id, Some(gi)))),
        }
    }
    let seed = Seed(cfg.seed);
    let reports = jobs
        .par_iter()
        .map(|&(_, id, gi)| {
            let (label, outcome) = match (id, gi) {
                ("huppert", _) => (format!("F_{}", cfg.p), check_huppert(cfg.p)),
                ("berman", _) => (format!("catalog(p={})", cfg.p), check_berman(&groups)),
                (_, Some(gi)) => {
                    (report_label(&catalog[gi].label), run_one(id, &groups[gi].1, seed, cfg.samples, &builder))
                }
                _ => unreachable!("group checks carry an index"),
            };
            let (status, detail) = match outcome {
                Outcome::Pass(d) => (Status::Pass, d),
                Outcome::Fail(d) => (Status::Fail, d),
                Outcome::Skip(d) => (Status::SkippedPrecondition, d),
            };
            VerificationReport { check: id, group: label, seed: cfg.seed, samples: cfg.samples, status, detail }
        })
        .collect();
    Ok(reports)
}

fn run_one(id: &str, g: &Arc<PGroup>, seed: Seed, samples: usize, builder: &Builder) -> Outcome {
    let result = match id {
        "brauer" => Ok(check_brauer(g, seed, samples)),
        "center-eq2" => check_center_eq2(g),
        "center-eq3" => check_center_eq3(g, seed, samples),
        "lemma-abp" => check_lemma_abp(g, seed, samples),
        "lemma-center" => check_lemma_center(g, seed, samples),
        "eq-p2" => check_eq_p2(g, seed, samples),
        "exp-v" => check_exp_v(g, seed, samples),
        "vp-witness" => check_vp_witness(g),
        "vp-decomp" => check_vp_decomp(g, seed, samples),
        "johnson" => intersection_g_vp(g).map(|s| Outcome::Pass(format!("order={} equals G^p", s.order()))),
        "comm-exp" => commutator_exponent_sample(g, seed, samples).map(|r| match r.violation {
            None => Outcome::Pass(format!("pairs={}", r.checked)),
            Some(i) => Outcome::Fail(format!("pair {i} has commutator of order > p")),
        }),
        "recognizer" => return check_recognizer(g, builder).unwrap_or_else(Outcome::from),
        _ => unreachable!("unknown check ids are rejected earlier"),
    };
    result.unwrap_or_else(Outcome::from)
}

fn check_huppert(p: Prime) -> Outcome {
    if !p.is_odd() {
        return Outcome::Skip("p must be odd".into());
    }
    for r in 1..p.get() {
        let want = if r == p.get() - 1 { p.get() - 1 } else { 0 };
        match unit_power_sums(p, r) {
            Ok(v) if v == want => {}
            Ok(v) => return Outcome::Fail(format!("r={r} gives {v}, expected {want}")),
            Err(e) => return e.into(),
        }
    }
    Outcome::Pass(format!("exponents=1..{}", p.get() - 1))
}

fn check_brauer(g: &Arc<PGroup>, seed: Seed, samples: usize) -> Outcome {
    let p = g.p().get() as u64;
    let span = (g.order() <= EXPLICIT_SPAN_LIMIT).then(|| commutator_subspace(g));
    let mut agreements = 0;
    for i in 0..samples {
        let x = random_element(g, seed.split(2 * i as u64));
        let y = random_element(g, seed.split(2 * i as u64 + 1));
        let defect = &(&(&x + &y).pow(p) - &x.pow(p)) - &y.pow(p);
        if !commutator_subspace_test(&defect) {
            return Outcome::Fail(format!("pair {i}: (x+y)^p - x^p - y^p has a nonzero class sum"));
        }
        if let Some(span) = &span {
            // One vector inside the span and one generic vector.
            for v in [&defect, &x] {
                if commutator_subspace_test(v) != span.contains(v.coeffs()) {
                    return Outcome::Fail(format!("pair {i}: class criterion disagrees with explicit span"));
                }
                agreements += 1;
            }
        }
    }
    let span_note = match span {
        Some(s) => format!(" span_dim={} agreements={agreements}", s.dim()),
        None => " span=not-computed".to_string(),
    };
    Outcome::Pass(format!("pairs={samples}{span_note}"))
}

fn check_center_eq2(g: &Arc<PGroup>) -> Result<Outcome, UnitError> {
    let c = center_of_v(g)?;
    Ok(verdict(
        c.log_order_by_rank == c.log_order_by_formula,
        format!("log_zV_rank={} log_zV_formula={}", c.log_order_by_rank, c.log_order_by_formula),
    ))
}

fn check_center_eq3(g: &Arc<PGroup>, seed: Seed, samples: usize) -> Result<Outcome, UnitError> {
    let c = center_of_v(g)?;
    if !c.is_consistent() {
        return Ok(Outcome::Fail(format!("{c:?}")));
    }
    let p = g.p();
    let one = AlgebraElement::one(g);
    let d = derived_sum(g);
    let reps = noncentral_representatives(g);
    let gens: Vec<AlgebraElement> =
        reps.iter().map(|&r| &one + &(&AlgebraElement::from_group_element(g, r) * &d)).collect();
    for (i, a) in gens.iter().enumerate() {
        if !a.pow(p.get() as u64).is_one() || gens[..i].iter().any(|b| (a * b) != (b * a)) {
            return Ok(Outcome::Fail(format!("generator 1 + {}G'^ breaks elementary abelian N", reps[i])));
        }
    }
    let center = g.center();
    for i in 0..samples {
        let mut rng = seed.split(i as u64).rng();
        let z = random_normalized_unit(g, seed.split(i as u64)).restrict(|x| center.contains(x));
        let z = &z + &AlgebraElement::one(g).scale(p.sub(1, z.augmentation()));
        let betas: Vec<u32> = gens.iter().map(|_| rng.random_range(0..p.get())).collect();
        let x = gens.iter().zip(&betas).fold(z, |acc, (gen, &b)| &acc * &gen.pow(b as u64));
        let fact = central_unit_factor(&x)?;
        if fact.betas != betas {
            return Ok(Outcome::Fail(format!(
                "sample {i}: recovered exponents {:?}, built with {betas:?}",
                fact.betas
            )));
        }
    }
    Ok(Outcome::Pass(format!(
        "log_zV={} = {} + {} meet=0 factorizations={samples}",
        c.log_order_by_rank, c.log_center_factor, c.log_n_factor
    )))
}

fn check_lemma_abp(g: &Arc<PGroup>, seed: Seed, samples: usize) -> Result<Outcome, UnitError> {
    require_derived_order_p(g)?;
    let p = g.p().get() as u64;
    let n = g.order();
    for i in 0..samples {
        let mut rng = seed.split(i as u64).rng();
        let (a, b) = loop {
            let a = ElementId::new(rng.random_range(0..n));
            let b = ElementId::new(rng.random_range(0..n));
            if !g.commute(a, b) {
                break (a, b);
            }
        };
        let lhs = (&AlgebraElement::from_group_element(g, a) + &AlgebraElement::from_group_element(g, b)).pow(p);
        if lhs != frobenius_expansion(g, a, b)? {
            return Ok(Outcome::Fail(format!("pair {i}: (a+b)^p differs from the expansion for a={a}, b={b}")));
        }
    }
    Ok(Outcome::Pass(format!("pairs={samples}")))
}

fn check_lemma_center(g: &Arc<PGroup>, seed: Seed, samples: usize) -> Result<Outcome, UnitError> {
    for i in 0..samples {
        let x = random_normalized_unit(g, seed.split(i as u64));
        if let Some(v) = pth_power_centrality(&x)?.violator {
            return Ok(Outcome::Fail(format!("sample {i}: x^p does not commute with {v}")));
        }
    }
    Ok(Outcome::Pass(format!("units={samples}")))
}

fn check_eq_p2(g: &Arc<PGroup>, seed: Seed, samples: usize) -> Result<Outcome, UnitError> {
    let p2 = (g.p().get() as u64).pow(2);
    let exp_p = g.exponent() == g.p().as_usize();
    for i in 0..samples {
        let x = random_normalized_unit(g, seed.split(i as u64));
        if !p2_power_identity(&x)? {
            return Ok(Outcome::Fail(format!("sample {i}: x^(p^2) differs from the transported sum")));
        }
        if exp_p && !x.pow(p2).is_one() {
            return Ok(Outcome::Fail(format!("sample {i}: x^(p^2) != 1 in an exponent-p group")));
        }
    }
    Ok(Outcome::Pass(format!("units={samples} trivial_p2_power={exp_p}")))
}

fn check_exp_v(g: &Arc<PGroup>, seed: Seed, samples: usize) -> Result<Outcome, UnitError> {
    let cert = predicted_exponent_v(g)?;
    for i in 0..samples {
        let x = random_normalized_unit(g, seed.split(i as u64));
        let order = x.unit_order()?;
        if order > cert.value {
            return Ok(Outcome::Fail(format!("sample {i} has order {order} > {}", cert.value)));
        }
    }
    Ok(Outcome::Pass(format!(
        "exp_V={} witness_order={} upper_bound={} units={samples}",
        cert.value, cert.witness_order, cert.upper_bound
    )))
}

fn check_vp_witness(g: &Arc<PGroup>) -> Result<Outcome, UnitError> {
    require_frattini_order_p(g)?;
    let mut total = 0;
    let mut missed = Vec::new();
    for x in g.elements().filter(|&x| !g.center().contains(x)) {
        let h = default_partner(g, x).expect("non-central element has a non-commuting partner");
        let w = vp_witness(g, x, h)?;
        total += 1;
        if !w.hits_target() {
            missed.push((x, h));
        }
    }
    if missed.is_empty() {
        return Ok(Outcome::Pass(format!("elements={total} product=1-gG'^")));
    }
    let (x, h) = missed[0];
    // Whether some other partner would have produced 1 - gG'^.
    let mut rescued = 0;
    for &(x, _) in &missed {
        for h in g.elements().filter(|&h| !g.commute(x, h)) {
            if vp_witness(g, x, h)?.hits_target() {
                rescued += 1;
                break;
            }
        }
    }
    Ok(Outcome::Fail(format!(
        "product misses 1-gG'^ for {}/{total} elements with the first partner (first g={x} h={h}, (g^-1 h)^p != 1); \
         {} of them have no partner at all; (1-G'^)(1-gG'^) holds for every miss",
        missed.len(),
        missed.len() - rescued
    )))
}

fn check_vp_decomp(g: &Arc<PGroup>, seed: Seed, samples: usize) -> Result<Outcome, UnitError> {
    let d = vp_decomposition(g, seed, samples)?;
    Ok(Outcome::Pass(format!(
        "log_Vp={} agemo_order={} t={} cube_certificates={} agemo_roots={} memberships={}",
        d.predicted_log_order,
        d.agemo_order,
        d.t,
        d.n_certificates.len(),
        d.agemo_roots.len(),
        d.samples_checked
    )))
}

fn check_recognizer(g: &Arc<PGroup>, builder: &Builder) -> Result<Outcome, RecognizerError> {
    require_cyclic_frattini(g)?;
    let ui = v_invariants(g)?;
    let recovered = recover_group_invariants(&ui)?;
    let brute = g.group_invariants();
    if recovered != brute {
        return Ok(Outcome::Fail(format!("recovered {recovered}, brute force {brute}")));
    }
    let params = classify_kyl(&recovered, g.p())?;
    let rebuilt = build_kyl(&params, g.p(), builder)?.group_invariants();
    if rebuilt != brute {
        return Ok(Outcome::Fail(format!("rebuilt {params} has {rebuilt}")));
    }
    let typo = match typo_reading_check(&recovered, g.p(), builder)? {
        None => "n/a".to_string(),
        Some(r) if r.corrected_consistent => format!("corrected(literal={})", r.literal_consistent),
        Some(_) => return Ok(Outcome::Fail("corrected |K| reading inconsistent".into())),
    };
    Ok(Outcome::Pass(format!("{} kyl={} reading={typo}", ui, report_label(&params.to_string()))))
}

fn check_berman(groups: &[(Role, Arc<PGroup>)]) -> Outcome {
    let members: Vec<Arc<PGroup>> =
        groups.iter().filter(|(r, _)| *r == Role::CyclicFrattini).map(|(_, g)| Arc::clone(g)).collect();
    if members.len() < 2 {
        return Outcome::Skip(format!("catalog has {} cyclic-Frattini groups", members.len()));
    }
    match berman_matrix(&members) {
        Ok(m) => {
            let pairs = m.len() * (m.len() - 1) / 2;
            verdict(
                m.off_diagonal_distinguished(),
                format!("groups={} pairs={pairs} all_distinguished={}", m.len(), m.off_diagonal_distinguished()),
            )
        }
        Err(e) => e.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_ORDER_CAP;

    fn cfg(p: u32, samples: usize) -> RunConfig {
        RunConfig { p: Prime::new(p).unwrap(), seed: 1, samples, cap: DEFAULT_ORDER_CAP }
    }

    fn find<'a>(reports: &'a [VerificationReport], check: &str, group: &str) -> &'a VerificationReport {
        reports.iter().find(|r| r.check == check && r.group == group).unwrap()
    }

    #[test]
    fn runner_examples() {
        let r = run_checks(&["lemma-abp", "vp-decomp", "berman"], &cfg(3, 100)).unwrap();
        assert_eq!(find(&r, "lemma-abp", "extraspecial(3,p)").status, Status::Pass);
        assert_eq!(find(&r, "vp-decomp", "modular(3,4)").status, Status::SkippedPrecondition);
        assert_eq!(find(&r, "berman", "catalog(p=3)").status, Status::Pass);
        assert!(matches!(run_checks(&["nope"], &cfg(3, 1)), Err(HarnessError::UnknownCheck(_))));
    }

    #[test]
    fn selection_is_canonical() {
        assert_eq!(parse_selection("johnson,brauer").unwrap(), vec!["brauer", "johnson"]);
        assert_eq!(parse_selection("all").unwrap().len(), CHECKS.len());
        assert!(parse_selection("brauer,bogus").is_err());
        assert!(parse_selection("").is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_checks(&["brauer", "exp-v", "recognizer"], &cfg(3, 10)).unwrap();
        let b = run_checks(&["brauer", "exp-v", "recognizer"], &cfg(3, 10)).unwrap();
        assert_eq!(super::super::render_report(&a), super::super::render_report(&b));
        assert!(a.iter().all(|r| !r.group.contains(' ')));
    }

    #[test]
    fn even_controls_are_skipped_not_passed() {
        let r = run_checks(&["lemma-center"], &cfg(3, 5)).unwrap();
        assert_eq!(find(&r, "lemma-center", "dihedral8()").status, Status::SkippedPrecondition);
        assert_eq!(find(&r, "lemma-center", "cyclic(3,1)xcyclic(3,2)").status, Status::SkippedPrecondition);
    }
}
