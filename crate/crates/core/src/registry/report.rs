//! Residual reports, classification and serialization.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};

pub const PASS_THRESHOLD: f64 = 1e-9;
pub const INCONCLUSIVE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Classification {
    Pass,
    Inconclusive,
    Fail,
}

impl Classification {
    /// Pure function of the relative residual; anything non-finite is inconclusive.
    pub fn from_relative(rel: f64) -> Self {
        if !rel.is_finite() {
            Self::Inconclusive
        } else if rel <= PASS_THRESHOLD {
            Self::Pass
        } else if rel <= INCONCLUSIVE_THRESHOLD {
            Self::Inconclusive
        } else {
            Self::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Inconclusive => "INCONCLUSIVE",
            Self::Fail => "FAIL",
        }
    }
}

/// Terms summed and tail bounds for each side.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TermsMeta {
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub lhs_tail: f64,
    pub rhs_tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity: String,
    pub variant: String,
    /// Parameter values sorted by name.
    pub params: Vec<(String, f64)>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub abs_residual: Option<f64>,
    pub rel_residual: Option<f64>,
    pub classification: Classification,
    pub terms: TermsMeta,
    pub note: Option<String>,
}

/// `|l - r| / max(1, |l|, |r|)`.
pub fn relative_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / 1f64.max(lhs.abs()).max(rhs.abs())
}

impl ResidualReport {
    pub fn from_values(
        identity: &str,
        variant: &str,
        params: Vec<(String, f64)>,
        lhs: f64,
        rhs: f64,
        terms: TermsMeta,
        note: Option<String>,
    ) -> Self {
        let abs = (lhs - rhs).abs();
        let rel = relative_residual(lhs, rhs);
        Self {
            identity: identity.to_owned(),
            variant: variant.to_owned(),
            params,
            lhs: Some(lhs),
            rhs: Some(rhs),
            abs_residual: Some(abs),
            rel_residual: Some(rel),
            classification: Classification::from_relative(rel),
            terms,
            note,
        }
    }

    /// A report for a point whose evaluation failed; never classified PASS.
    pub fn from_error(
        identity: &str,
        variant: &str,
        params: Vec<(String, f64)>,
        error: &Error,
    ) -> Self {
        Self {
            identity: identity.to_owned(),
            variant: variant.to_owned(),
            params,
            lhs: None,
            rhs: None,
            abs_residual: None,
            rel_residual: None,
            classification: Classification::from_relative(f64::NAN),
            terms: TermsMeta::default(),
            note: Some(format!("error: {error}")),
        }
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// Canonical order: identity, variant, then grid point lexicographically.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.identity
            .cmp(&other.identity)
            .then_with(|| self.variant.cmp(&other.variant))
            .then_with(|| {
                for ((na, va), (nb, vb)) in self.params.iter().zip(&other.params) {
                    let o = na.cmp(nb).then_with(|| va.total_cmp(vb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                self.params.len().cmp(&other.params.len())
            })
    }
}

pub fn sort_canonical(reports: &mut [ResidualReport]) {
    reports.sort_by(|a, b| a.canonical_cmp(b));
}

/// 17 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_owned()
    }
}

fn raw(x: Option<f64>) -> Box<RawValue> {
    RawValue::from_string(x.map_or_else(|| "null".to_owned(), format_number))
        .expect("valid JSON number")
}

#[derive(Serialize)]
struct JsonTerms {
    lhs: usize,
    rhs: usize,
    lhs_tail: Box<RawValue>,
    rhs_tail: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    identity: &'a str,
    variant: &'a str,
    params: BTreeMap<&'a str, Box<RawValue>>,
    lhs: Box<RawValue>,
    rhs: Box<RawValue>,
    abs_residual: Box<RawValue>,
    rel_residual: Box<RawValue>,
    classification: &'static str,
    terms: JsonTerms,
    note: Option<&'a str>,
}

impl<'a> From<&'a ResidualReport> for JsonRow<'a> {
    fn from(r: &'a ResidualReport) -> Self {
        Self {
            identity: &r.identity,
            variant: &r.variant,
            params: r
                .params
                .iter()
                .map(|(n, v)| (n.as_str(), raw(Some(*v))))
                .collect(),
            lhs: raw(r.lhs),
            rhs: raw(r.rhs),
            abs_residual: raw(r.abs_residual),
            rel_residual: raw(r.rel_residual),
            classification: r.classification.as_str(),
            terms: JsonTerms {
                lhs: r.terms.lhs_terms,
                rhs: r.terms.rhs_terms,
                lhs_tail: raw(Some(r.terms.lhs_tail)),
                rhs_tail: raw(Some(r.terms.rhs_tail)),
            },
            note: r.note.as_deref(),
        }
    }
}

pub const COLUMNS: [&str; 10] = [
    "identity",
    "variant",
    "params",
    "lhs",
    "rhs",
    "abs_residual",
    "rel_residual",
    "classification",
    "terms",
    "note",
];

pub fn to_json(reports: &[ResidualReport]) -> String {
    let rows: Vec<JsonRow> = reports.iter().map(JsonRow::from).collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("reports serialize");
    s.push('\n');
    s
}

fn params_cell(params: &[(String, f64)]) -> String {
    params
        .iter()
        .map(|(n, v)| format!("{n}={}", format_number(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

fn cell(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

pub fn to_csv(reports: &[ResidualReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    w.write_record(COLUMNS).map_err(io)?;
    for r in reports {
        w.write_record([
            r.identity.clone(),
            r.variant.clone(),
            params_cell(&r.params),
            cell(r.lhs),
            cell(r.rhs),
            cell(r.abs_residual),
            cell(r.rel_residual),
            r.classification.as_str().to_owned(),
            format!("{}/{}", r.terms.lhs_terms, r.terms.rhs_terms),
            r.note.clone().unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Domain(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Variants whose every point passes, per identity.
pub fn passing_variants(reports: &[ResidualReport]) -> BTreeMap<&str, Vec<&str>> {
    let mut all: BTreeMap<(&str, &str), bool> = BTreeMap::new();
    for r in reports {
        let e = all.entry((&r.identity, &r.variant)).or_insert(true);
        *e &= r.classification == Classification::Pass;
    }
    let mut out: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for ((id, variant), ok) in all {
        let e = out.entry(id).or_default();
        if ok {
            e.push(variant);
        }
    }
    out
}

/// Human-readable table; `header` supplies a per-identity heading line.
pub fn to_pretty<F>(reports: &[ResidualReport], header: F) -> String
where
    F: Fn(&str, &[&str]) -> String,
{
    let winners = passing_variants(reports);
    let mut out = String::new();
    let mut current: Option<&str> = None;
    for r in reports {
        if current != Some(r.identity.as_str()) {
            if current.is_some() {
                out.push('\n');
            }
            let w = winners
                .get(r.identity.as_str())
                .map(Vec::as_slice)
                .unwrap_or(&[]);
            let _ = writeln!(out, "{}", header(&r.identity, w));
            current = Some(&r.identity);
        }
        let params = r
            .params
            .iter()
            .map(|(n, v)| format!("{n}={v:.6}"))
            .collect::<Vec<_>>()
            .join(" ");
        let num = |x: Option<f64>| x.map_or_else(|| "-".to_owned(), |v| format!("{v:+.12e}"));
        let _ = write!(
            out,
            "  {:<22} {:<28} lhs {:<20} rhs {:<20} rel {:<10} {}",
            r.variant,
            params,
            num(r.lhs),
            num(r.rhs),
            r.rel_residual
                .map_or_else(|| "-".to_owned(), |v| format!("{v:.2e}")),
            r.classification.as_str()
        );
        if let Some(n) = &r.note {
            let _ = write!(out, "  [{n}]");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bands() {
        assert_eq!(Classification::from_relative(0.0), Classification::Pass);
        assert_eq!(Classification::from_relative(1e-9), Classification::Pass);
        assert_eq!(
            Classification::from_relative(2e-9),
            Classification::Inconclusive
        );
        assert_eq!(
            Classification::from_relative(1e-6),
            Classification::Inconclusive
        );
        assert_eq!(Classification::from_relative(1.1e-6), Classification::Fail);
        assert_eq!(
            Classification::from_relative(f64::NAN),
            Classification::Inconclusive
        );
    }

    #[test]
    fn relative_denominator() {
        assert_eq!(relative_residual(1e-3, 0.0), 1e-3);
        assert_eq!(relative_residual(10.0, 12.0), 2.0 / 12.0);
    }

    #[test]
    fn json_field_order_and_nulls() {
        let r = ResidualReport::from_error(
            "X",
            "base",
            vec![("a".into(), 1.0)],
            &Error::Domain("d".into()),
        );
        let s = to_json(&[r]);
        let keys = [
            "identity",
            "variant",
            "params",
            "lhs",
            "rhs",
            "abs_residual",
            "rel_residual",
            "classification",
            "terms",
            "note",
        ];
        let pos: Vec<usize> = keys
            .iter()
            .map(|k| s.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(s.contains("\"lhs\": null"));
        assert!(s.contains("1.0000000000000000e0"));
    }
}
