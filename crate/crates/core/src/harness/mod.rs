//! Group-construction language, built-in catalog and verification runner.

mod catalog;
mod checks;
mod dsl;

use thiserror::Error;

use crate::group::GroupError;

pub use catalog::{builtin_catalog, CatalogEntry, Role};
pub use checks::{
    parse_selection, report_label, run_checks, CheckInfo, RunConfig, Status, Summary, VerificationReport, CHECKS,
    DEFAULT_SAMPLES,
};
pub use dsl::{parse_group_spec, GroupSpec, ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Report lines followed by the summary line, each newline-terminated.
pub fn render_report(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out.push_str(&Summary::of(reports).to_string());
    out.push('\n');
    out
}
