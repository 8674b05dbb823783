//! Built-in groups exercised by the checks.

use super::dsl::{parse_group_spec, GroupSpec};
use crate::group::DEFAULT_ORDER_CAP;
use crate::prime::Prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Nonabelian with cyclic Frattini subgroup.
    CyclicFrattini,
    AbelianControl,
    /// p = 2, outside every odd-p statement.
    EvenControl,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: String,
    pub spec: GroupSpec,
    pub role: Role,
    pub order: usize,
}

const TEMPLATES: &[(&str, Role, u32)] = &[
    ("extraspecial({p},p)", Role::CyclicFrattini, 3),
    ("modular({p},3)", Role::CyclicFrattini, 3),
    ("modular({p},4)", Role::CyclicFrattini, 4),
    ("extraspecial({p},p) x cyclic({p},1)", Role::CyclicFrattini, 4),
    ("extraspecial({p},p) Y cyclic({p},2)", Role::CyclicFrattini, 4),
    ("modular({p},3) x cyclic({p},1)", Role::CyclicFrattini, 4),
    ("cyclic({p},1) x cyclic({p},2)", Role::AbelianControl, 3),
];

/// Groups for prime `p` whose order fits under `cap`.
///
/// Primes above 5 give an empty catalog unless the cap has been raised above
/// the default. The p = 2 controls are appended to every nonempty catalog.
pub fn builtin_catalog(p: Prime, cap: usize) -> Vec<CatalogEntry> {
    if !p.is_odd() || (p.get() > 5 && cap <= DEFAULT_ORDER_CAP) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for &(template, role, log_order) in TEMPLATES {
        let Some(order) = p.pow(log_order).filter(|&n| n <= cap) else {
            continue;
        };
        let text = template.replace("{p}", &p.to_string());
        let spec = parse_group_spec(&text).expect("catalog template parses");
        out.push(CatalogEntry { label: spec.to_string(), spec, role, order });
    }
    if !out.is_empty() && cap >= 8 {
        for spec in [GroupSpec::Dihedral8, GroupSpec::Quaternion8] {
            out.push(CatalogEntry { label: spec.to_string(), spec, role: Role::EvenControl, order: 8 });
        }
    }
    out
}
