//! The identity catalog and the residual engine.
//!
//! Each [`IdentityRecord`] pairs two independently computed sides over a
//! small hand-picked parameter grid. Variants alter one side (a sign, a
//! scaling, a different reading of an ambiguous symbol) and are evaluated
//! on the same grid, so the report shows which reading survives.

mod entries;
pub mod polynomial;
pub mod report;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::{SeriesResult, TruncationPolicy};

pub use polynomial::{
    theta2_weighted_log, theta4_weighted_log, zeta_inner_sum, zeta_integral_term,
    zeta_integral_term_quadrature, PolynomialSpec, Theta4LogForm,
};
pub use report::{Classification, ResidualReport, TermsMeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expectation {
    ExpectPass,
    Contested,
    DocumentOnly,
}

impl Expectation {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ExpectPass => "ExpectPass",
            Self::Contested => "Contested",
            Self::DocumentOnly => "DocumentOnly",
        }
    }
}

/// A named parameter: its default grid and the closed range overrides must respect.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub grid: Vec<f64>,
    pub range: (f64, f64),
}

/// Parameter values sorted by name.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint(Vec<(&'static str, f64)>);

impl GridPoint {
    pub fn new(mut values: Vec<(&'static str, f64)>) -> Self {
        values.sort_by(|a, b| a.0.cmp(b.0));
        Self(values)
    }

    /// Value of a parameter the record declares.
    ///
    /// # Panics
    /// If `name` is not part of the point; records only ask for their own parameters.
    pub fn get(&self, name: &str) -> f64 {
        self.try_get(name)
            .unwrap_or_else(|| panic!("grid point has no parameter {name}"))
    }

    pub fn try_get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }

    pub fn values(&self) -> &[(&'static str, f64)] {
        &self.0
    }

    fn owned(&self) -> Vec<(String, f64)> {
        self.0.iter().map(|&(n, v)| (n.to_owned(), v)).collect()
    }
}

pub type SideFn = fn(&GridPoint, &TruncationPolicy) -> Result<SeriesResult>;

/// One side of an identity, named so independence can be inspected.
#[derive(Clone, Copy)]
pub struct Side {
    pub name: &'static str,
    pub eval: SideFn,
}

impl std::fmt::Debug for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name)
    }
}

#[derive(Debug, Clone)]
pub struct Variant {
    pub id: &'static str,
    pub lhs: Side,
    pub rhs: Side,
    pub note: &'static str,
}

pub type Constraint = fn(&GridPoint) -> std::result::Result<(), String>;

#[derive(Debug, Clone)]
pub struct IdentityRecord {
    pub id: &'static str,
    /// The statement being audited.
    pub anchor: &'static str,
    pub params: Vec<ParamSpec>,
    pub constraint: Option<Constraint>,
    /// The first variant is the statement as printed.
    pub variants: Vec<Variant>,
    pub expected: Expectation,
    /// Attached to every report of the record.
    pub note: Option<&'static str>,
}

impl IdentityRecord {
    pub fn base(&self) -> &Variant {
        &self.variants[0]
    }

    pub fn variant(&self, id: &str) -> Result<&Variant> {
        self.variants
            .iter()
            .find(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVariant {
                identity: self.id.to_owned(),
                variant: id.to_owned(),
            })
    }

    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }

    /// Range checks plus the record's own constraint.
    pub fn check_point(&self, point: &GridPoint) -> Result<()> {
        for p in &self.params {
            let v = point.try_get(p.name).ok_or_else(|| {
                Error::Constraint(format!("{}: missing parameter {}", self.id, p.name))
            })?;
            let (lo, hi) = p.range;
            if !(lo..=hi).contains(&v) {
                return Err(Error::Constraint(format!(
                    "{}: {} = {v} outside [{lo}, {hi}]",
                    self.id, p.name
                )));
            }
        }
        if point.values().len() != self.params.len() {
            return Err(Error::Constraint(format!(
                "{}: unexpected parameters",
                self.id
            )));
        }
        if let Some(c) = self.constraint {
            c(point).map_err(|m| Error::Constraint(format!("{}: {m}", self.id)))?;
        }
        Ok(())
    }

    /// The Cartesian grid, with `overrides` replacing named parameter lists.
    pub fn grid(&self, overrides: &GridOverrides) -> Vec<GridPoint> {
        let mut points: Vec<Vec<(&'static str, f64)>> = vec![Vec::new()];
        for p in &self.params {
            let values = overrides.get(p.name).unwrap_or(&p.grid);
            points = points
                .into_iter()
                .flat_map(|pt| {
                    values.iter().map(move |&v| {
                        let mut next = pt.clone();
                        next.push((p.name, v));
                        next
                    })
                })
                .collect();
        }
        points.into_iter().map(GridPoint::new).collect()
    }

    pub fn grid_size(&self) -> usize {
        self.params.iter().map(|p| p.grid.len()).product()
    }
}

/// Replacement value lists keyed by parameter name.
pub type GridOverrides = BTreeMap<String, Vec<f64>>;

/// Immutable catalog of identities, ordered by id.
#[derive(Debug, Clone)]
pub struct Registry {
    records: Vec<IdentityRecord>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

impl Registry {
    /// Every audited identity.
    pub fn standard() -> Self {
        let mut records = entries::all();
        records.sort_by(|a, b| a.id.cmp(b.id));
        Self { records }
    }

    pub fn records(&self) -> &[IdentityRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Result<&IdentityRecord> {
        self.records
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_owned()))
    }

    /// Number of reports a full default run produces.
    pub fn report_count(&self) -> usize {
        self.records
            .iter()
            .map(|r| r.variants.len() * r.grid_size())
            .sum()
    }
}

fn evaluate_checked(
    record: &IdentityRecord,
    variant: &Variant,
    point: &GridPoint,
    policy: &TruncationPolicy,
) -> ResidualReport {
    let params = point.owned();
    let sides =
        (variant.lhs.eval)(point, policy).and_then(|l| Ok((l, (variant.rhs.eval)(point, policy)?)));
    match sides {
        Ok((l, r)) => {
            let terms = TermsMeta {
                lhs_terms: l.terms_used,
                rhs_terms: r.terms_used,
                lhs_tail: l.tail_bound,
                rhs_tail: r.tail_bound,
            };
            let mut report = ResidualReport::from_values(
                record.id,
                variant.id,
                params,
                l.value,
                r.value,
                terms,
                record.note.map(str::to_owned),
            );
            if !(l.value.is_finite() && r.value.is_finite()) {
                report.classification = Classification::Inconclusive;
                report.note = Some("non-finite side".into());
            }
            report
        }
        Err(e) => {
            let mut report = ResidualReport::from_error(record.id, variant.id, params, &e);
            if let (Some(n), Some(extra)) = (report.note.as_mut(), record.note) {
                n.push_str("; ");
                n.push_str(extra);
            }
            report
        }
    }
}

/// Evaluates one variant of one identity at one point.
///
/// Unknown ids and constraint violations are errors; failures inside the
/// evaluators (non-convergence, poles, domain) come back as an
/// INCONCLUSIVE report carrying the error text.
pub fn evaluate_identity(
    registry: &Registry,
    id: &str,
    variant: &str,
    point: &GridPoint,
    policy: &TruncationPolicy,
) -> Result<ResidualReport> {
    let record = registry.get(id)?;
    let v = record.variant(variant)?;
    record.check_point(point)?;
    Ok(evaluate_checked(record, v, point, policy))
}

fn tasks<'a>(
    record: &'a IdentityRecord,
    overrides: &GridOverrides,
) -> impl Iterator<Item = (&'a IdentityRecord, &'a Variant, GridPoint)> {
    let grid = record.grid(overrides);
    record
        .variants
        .iter()
        .flat_map(move |v| grid.clone().into_iter().map(move |p| (record, v, p)))
}

fn evaluate_task(
    record: &IdentityRecord,
    variant: &Variant,
    point: &GridPoint,
    policy: &TruncationPolicy,
) -> ResidualReport {
    match record.check_point(point) {
        Ok(()) => evaluate_checked(record, variant, point, policy),
        Err(e) => ResidualReport::from_error(record.id, variant.id, point.owned(), &e),
    }
}

/// Every variant of one identity over its grid, in canonical order.
pub fn run_grid(
    registry: &Registry,
    id: &str,
    policy: &TruncationPolicy,
    overrides: &GridOverrides,
) -> Result<Vec<ResidualReport>> {
    let record = registry.get(id)?;
    let mut out: Vec<ResidualReport> = tasks(record, overrides)
        .map(|(r, v, p)| evaluate_task(r, v, &p, policy))
        .collect();
    report::sort_canonical(&mut out);
    Ok(out)
}

/// Options for [`run_all`].
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Restrict to these ids; empty means all.
    pub filter: Vec<String>,
    pub overrides: GridOverrides,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
}

/// Evaluates the selected identities, possibly in parallel; output order is canonical.
pub fn run_all(
    registry: &Registry,
    policy: &TruncationPolicy,
    options: &RunOptions,
) -> Result<Vec<ResidualReport>> {
    for id in &options.filter {
        registry.get(id)?;
    }
    let selected: Vec<&IdentityRecord> = registry
        .records()
        .iter()
        .filter(|r| options.filter.is_empty() || options.filter.iter().any(|f| f == r.id))
        .collect();
    let work: Vec<_> = selected
        .iter()
        .flat_map(|r| tasks(r, &options.overrides))
        .collect();
    let run = || -> Vec<ResidualReport> {
        work.par_iter()
            .map(|(r, v, p)| evaluate_task(r, v, p, policy))
            .collect()
    };
    let mut out = match options.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    report::sort_canonical(&mut out);
    Ok(out)
}

/// Whether an identity's reports satisfy its expectation: for ExpectPass
/// entries every point of the base variant must PASS.
pub fn meets_expectation(record: &IdentityRecord, reports: &[ResidualReport]) -> bool {
    match record.expected {
        Expectation::ExpectPass => reports
            .iter()
            .filter(|r| r.identity == record.id && r.variant == record.base().id)
            .all(|r| r.classification == Classification::Pass),
        Expectation::Contested | Expectation::DocumentOnly => true,
    }
}
