//! Command implementations behind the `ellid` binary.
//!
//! Everything here returns strings and exit codes so the commands can be
//! driven from tests and examples without spawning a process.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::elliptic::{dK, ellint_E, ellint_K, EllipticArgument, Nome};
use crate::error::{Error, Result};
use crate::registry::{
    meets_expectation, report, run_all, GridOverrides, Registry, ResidualReport, RunOptions,
};
use crate::series;
use crate::singular::{a_of_k, dadk_fd, solve_k};
use crate::summation::{SeriesResult, TruncationPolicy};
use crate::theta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "pretty" | "pretty-text" | "text" => Ok(Self::Pretty),
            _ => Err(Error::config(
                "format",
                format!("expected json, csv or pretty, got `{s}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tolerance: f64,
    pub cap: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub filter: Vec<String>,
    pub parallelism: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let policy = TruncationPolicy::default();
        Self {
            tolerance: policy.tolerance,
            cap: policy.cap,
            output: None,
            format: Format::Pretty,
            filter: Vec::new(),
            parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl RunConfig {
    /// Rejects invalid values; the error names the offending field.
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::config(
                "tolerance",
                format!("must be positive and finite, got {}", self.tolerance),
            ));
        }
        if self.cap == 0 {
            return Err(Error::config("cap", "must be at least 1"));
        }
        if self.parallelism == 0 {
            return Err(Error::config("parallelism", "must be at least 1"));
        }
        if let Some(id) = self.filter.iter().find(|id| id.trim().is_empty()) {
            return Err(Error::config("filter", format!("empty identity id `{id}`")));
        }
        Ok(())
    }

    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy::default()
            .with_tolerance(self.tolerance)
            .with_cap(self.cap)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self =
            serde_json::from_str(s).map_err(|e| Error::config("config", e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

/// `key=v1,v2,...` into a named override list.
pub fn parse_grid_override(s: &str) -> Result<(String, Vec<f64>)> {
    let (key, values) = s
        .split_once('=')
        .ok_or_else(|| Error::config("grid", format!("expected key=v1,v2,... got `{s}`")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(Error::config(
            "grid",
            format!("missing parameter name in `{s}`"),
        ));
    }
    let values = values
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::config("grid", format!("`{v}` is not a finite number")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((key.to_owned(), values))
}

pub fn collect_overrides(items: &[String]) -> Result<GridOverrides> {
    let mut out = GridOverrides::new();
    for item in items {
        let (k, v) = parse_grid_override(item)?;
        out.insert(k, v);
    }
    Ok(out)
}

/// Table of registry entries, ordered by id; `filter` restricts to those ids.
pub fn cmd_list(registry: &Registry, filter: &[String]) -> Result<String> {
    for id in filter {
        registry.get(id)?;
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:<12} {:>5}  {:<60}  anchor",
        "id", "expected", "grid", "variants"
    );
    for r in registry.records() {
        if !filter.is_empty() && !filter.iter().any(|f| f == r.id) {
            continue;
        }
        let variants = r
            .variants
            .iter()
            .map(|v| v.id)
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            out,
            "{:<6} {:<12} {:>5}  {:<60}  {}",
            r.id,
            r.expected.as_str(),
            r.grid_size(),
            variants,
            r.anchor
        );
    }
    Ok(out)
}

/// Reports rendered in the requested format.
pub fn render(registry: &Registry, reports: &[ResidualReport], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(report::to_json(reports)),
        Format::Csv => report::to_csv(reports),
        Format::Pretty => Ok(report::to_pretty(reports, |id, winners| {
            let Ok(record) = registry.get(id) else {
                return id.to_owned();
            };
            let verdict = if winners.is_empty() {
                "no variant passes everywhere".to_owned()
            } else if winners.contains(&record.base().id) {
                format!("passing: {}", winners.join(", "))
            } else {
                format!("passing: {} (as stated fails)", winners.join(", "))
            };
            format!(
                "{id}  [{}]  {verdict}\n  {}",
                record.expected.as_str(),
                record.anchor
            )
        })),
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub exit_code: i32,
    pub reports: Vec<ResidualReport>,
    pub rendered: String,
    /// Ids whose expectation was not met.
    pub unmet: Vec<String>,
}

fn finish(
    registry: &Registry,
    reports: Vec<ResidualReport>,
    config: &RunConfig,
) -> Result<CheckOutcome> {
    let mut ids: Vec<&str> = reports.iter().map(|r| r.identity.as_str()).collect();
    ids.dedup();
    let mut unmet = Vec::new();
    for id in ids {
        if !meets_expectation(registry.get(id)?, &reports) {
            unmet.push(id.to_owned());
        }
    }
    let rendered = render(registry, &reports, config.format)?;
    if let Some(path) = &config.output {
        std::fs::write(path, &rendered)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(CheckOutcome {
        exit_code: if unmet.is_empty() { 0 } else { 1 },
        reports,
        rendered,
        unmet,
    })
}

fn check_overrides(registry: &Registry, ids: &[&str], overrides: &GridOverrides) -> Result<()> {
    for key in overrides.keys() {
        let known = ids
            .iter()
            .filter_map(|id| registry.get(id).ok())
            .any(|r| r.param(key).is_some());
        if !known {
            return Err(Error::config(
                "grid",
                format!("no selected identity has a parameter `{key}`"),
            ));
        }
    }
    Ok(())
}

/// Runs every variant of one identity. Exit code 1 only when an ExpectPass
/// entry has a non-PASS point in its base variant.
pub fn cmd_check(
    registry: &Registry,
    id: &str,
    overrides: &GridOverrides,
    config: &RunConfig,
) -> Result<CheckOutcome> {
    config.validate()?;
    registry.get(id)?;
    check_overrides(registry, &[id], overrides)?;
    let options = RunOptions {
        filter: vec![id.to_owned()],
        overrides: overrides.clone(),
        threads: Some(config.parallelism),
    };
    let reports = run_all(registry, &config.policy(), &options)?;
    finish(registry, reports, config)
}

/// Runs the configured selection (all identities when the filter is empty).
pub fn cmd_check_all(
    registry: &Registry,
    overrides: &GridOverrides,
    config: &RunConfig,
) -> Result<CheckOutcome> {
    config.validate()?;
    let ids: Vec<&str> = if config.filter.is_empty() {
        registry.records().iter().map(|r| r.id).collect()
    } else {
        config.filter.iter().map(String::as_str).collect()
    };
    for id in &ids {
        registry.get(id)?;
    }
    check_overrides(registry, &ids, overrides)?;
    let options = RunOptions {
        filter: config.filter.clone(),
        overrides: overrides.clone(),
        threads: Some(config.parallelism),
    };
    let reports = run_all(registry, &config.policy(), &options)?;
    finish(registry, reports, config)
}

/// Functions reachable through `eval`, with their parameters.
pub const EVAL_FUNCTIONS: &[(&str, &str, &str)] = &[
    (
        "K",
        "--k | --m",
        "complete elliptic integral of the first kind",
    ),
    (
        "E",
        "--k | --m",
        "complete elliptic integral of the second kind",
    ),
    (
        "dK",
        "--k | --m",
        "derivative of K in the argument's own convention",
    ),
    ("theta2", "--z --q", "θ2(z, q)"),
    ("theta3", "--z --q", "θ3(z, q)"),
    ("theta4", "--z --q", "θ4(z, q)"),
    ("theta4_imag", "--t --q", "θ4(it, q)"),
    ("P0", "--q", "Π(1 − q^{2n})"),
    ("euler_product", "--q", "Π(1 − qⁿ)"),
    ("solve_k", "--a", "modulus k with K(k')/K(k) = a"),
    ("a_of_k", "--k | --m", "K(complement)/K"),
    (
        "dadk_fd",
        "--k | --m",
        "finite-difference derivative of a_of_k",
    ),
    ("S1", "--a --t", "Σ cosh(2tn)/(n sinh(πan))"),
    ("S1_single", "--a --t", "Σ cosh(tn)/(n sinh(πan))"),
    ("S3", "--c", "Σ (−1)ⁿ n/(e^{cn} − 1)"),
    ("S4", "--b", "Σ n/sinh(πbn)"),
    ("S5", "--a", "Σ sech(nπa)"),
    ("S5sq", "--x", "Σ sech²(πnx)"),
    ("S6", "--a --v", "Σ (−1)ⁿ sin(nv)/(e^{an} − 1)"),
    ("S6_closed", "--a --v", "−(1/2) Σ sin v/(cos v + cosh(an))"),
    ("S7", "--a --v", "Σ csch(2nπ²/a) sinh(2πnv/a)"),
    ("S8", "--b", "Σ e^{2nπ/b}/(1 + e^{2nπ/b})³"),
    ("S9", "--q", "Σ n qⁿ/(1 − qⁿ)"),
    ("S10", "--z --q", "Σ (−1)ⁿ sin(2nz) q^{2n}/(1 − q^{2n})"),
];

/// `--name value` pairs into a map.
pub fn parse_eval_args(args: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        let name = flag
            .strip_prefix("--")
            .filter(|n| !n.is_empty())
            .ok_or_else(|| Error::Usage(format!("expected --name value, got `{flag}`")))?;
        let (name, value) = match name.split_once('=') {
            Some((n, v)) => (n, v.to_owned()),
            None => (
                name,
                it.next()
                    .ok_or_else(|| Error::Usage(format!("--{name} needs a value")))?
                    .clone(),
            ),
        };
        let v: f64 = value
            .parse()
            .map_err(|_| Error::Usage(format!("--{name}: `{value}` is not a number")))?;
        if out.insert(name.to_owned(), v).is_some() {
            return Err(Error::Usage(format!("--{name} given twice")));
        }
    }
    Ok(out)
}

struct Args<'a> {
    function: &'a str,
    map: &'a BTreeMap<String, f64>,
    used: Vec<&'static str>,
}

impl Args<'_> {
    fn get(&mut self, name: &'static str) -> Result<f64> {
        self.used.push(name);
        self.map
            .get(name)
            .copied()
            .ok_or_else(|| Error::Usage(format!("{} needs --{name}", self.function)))
    }

    fn nome(&mut self) -> Result<Nome> {
        Nome::new(self.get("q")?)
    }

    fn elliptic(&mut self) -> Result<EllipticArgument> {
        self.used.extend(["k", "m"]);
        match (self.map.get("k"), self.map.get("m")) {
            (Some(&k), None) => EllipticArgument::modulus(k),
            (None, Some(&m)) => EllipticArgument::parameter(m),
            _ => Err(Error::Usage(format!(
                "{} needs exactly one of --k, --m",
                self.function
            ))),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.map.keys().find(|k| !self.used.contains(&k.as_str())) {
            Some(k) => Err(Error::Usage(format!(
                "{} does not take --{k}",
                self.function
            ))),
            None => Ok(()),
        }
    }
}

/// Evaluates a named function; returns its value with series metadata.
pub fn eval_function(
    function: &str,
    params: &BTreeMap<String, f64>,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    use crate::series::CoshScaling;
    let mut a = Args {
        function,
        map: params,
        used: Vec::new(),
    };
    let exact = SeriesResult::exact;
    let out = match function {
        "K" => exact(ellint_K(a.elliptic()?)?),
        "E" => exact(ellint_E(a.elliptic()?)?),
        "dK" => exact(dK(a.elliptic()?)?),
        "theta2" => theta::theta2(a.get("z")?, &a.nome()?, policy)?,
        "theta3" => theta::theta3(a.get("z")?, &a.nome()?, policy)?,
        "theta4" => theta::theta4(a.get("z")?, &a.nome()?, policy)?,
        "theta4_imag" => theta::theta4_imag(a.get("t")?, &a.nome()?, policy)?,
        "P0" => theta::q_product_p0(&a.nome()?, policy)?,
        "euler_product" => theta::euler_product(&a.nome()?, policy)?,
        "solve_k" => {
            let s = solve_k(a.get("a")?)?;
            SeriesResult {
                value: s.k.value(),
                terms_used: s.iterations,
                tail_bound: s.residual,
            }
        }
        "a_of_k" => exact(a_of_k(a.elliptic()?)?),
        "dadk_fd" => {
            let est = dadk_fd(a.elliptic()?)?;
            SeriesResult {
                value: est.value,
                terms_used: 0,
                tail_bound: est.error,
            }
        }
        "S1" => series::s1_cosh_over_sinh(a.get("a")?, a.get("t")?, CoshScaling::Double, policy)?,
        "S1_single" => {
            series::s1_cosh_over_sinh(a.get("a")?, a.get("t")?, CoshScaling::Single, policy)?
        }
        "S3" => series::s3_alt_n_over_expm1(a.get("c")?, policy)?,
        "S4" => series::s4_n_over_sinh(a.get("b")?, policy)?,
        "S5" => series::s5_sech(a.get("a")?, policy)?,
        "S5sq" => series::s5sq_sech2(a.get("x")?, policy)?,
        "S6" => series::s6_alt_sin_over_expm1(a.get("a")?, a.get("v")?, policy)?,
        "S6_closed" => series::s6_closed(a.get("a")?, a.get("v")?, policy)?,
        "S7" => series::s7_csch_sinh(a.get("a")?, a.get("v")?, policy)?,
        "S8" => series::s8_exp_over_cube(a.get("b")?, policy)?,
        "S9" => series::s9_lambert_e2(&a.nome()?, policy)?,
        "S10" => series::s10_alt_sin_lambert(a.get("z")?, &a.nome()?, policy)?,
        _ => {
            let names = EVAL_FUNCTIONS
                .iter()
                .map(|f| f.0)
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::Usage(format!(
                "unknown function `{function}`; available: {names}"
            )));
        }
    };
    a.finish()?;
    Ok(out)
}

/// `eval` as printed by the binary.
pub fn cmd_eval(
    function: &str,
    params: &BTreeMap<String, f64>,
    policy: &TruncationPolicy,
) -> Result<String> {
    let r = eval_function(function, params, policy)?;
    let tail_label = match function {
        "solve_k" => "residual",
        "dadk_fd" => "error_estimate",
        _ => "tail_bound",
    };
    let terms_label = if function == "solve_k" {
        "iterations"
    } else {
        "terms_used"
    };
    Ok(format!(
        "value = {}\n{terms_label} = {}\n{tail_label} = {}\n",
        report::format_number(r.value),
        r.terms_used,
        report::format_number(r.tail_bound)
    ))
}

/// Help text listing the `eval` functions.
pub fn eval_listing() -> String {
    let mut out = String::new();
    for (name, params, what) in EVAL_FUNCTIONS {
        let _ = writeln!(out, "  {name:<14} {params:<12} {what}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let c = RunConfig {
            filter: vec!["P1".into()],
            output: Some("r.json".into()),
            format: Format::Json,
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn invalid_config_names_field() {
        let c = RunConfig {
            tolerance: -1.0,
            ..RunConfig::default()
        };
        match c.validate() {
            Err(Error::Config { field, .. }) => assert_eq!(field, "tolerance"),
            other => panic!("{other:?}"),
        }
        let c = RunConfig {
            cap: 0,
            ..RunConfig::default()
        };
        assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "cap"));
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(
            parse_grid_override("a=1,2.5").unwrap(),
            ("a".into(), vec![1.0, 2.5])
        );
        assert!(parse_grid_override("a").is_err());
        assert!(parse_grid_override("a=x").is_err());
        assert!(parse_grid_override("=1").is_err());
    }

    #[test]
    fn eval_arguments() {
        let args: Vec<String> = ["--k", "0.5"].iter().map(|s| s.to_string()).collect();
        let p = parse_eval_args(&args).unwrap();
        let policy = TruncationPolicy::default();
        assert!((eval_function("K", &p, &policy).unwrap().value - 1.685750354812596).abs() < 1e-14);
        assert!(eval_function("theta2", &p, &policy).is_err());
        assert!(eval_function("nope", &p, &policy).is_err());
    }

    #[test]
    fn list_filter() {
        let reg = Registry::standard();
        let all = cmd_list(&reg, &[]).unwrap();
        assert_eq!(all.lines().count(), reg.len() + 1);
        let one = cmd_list(&reg, &["P1".to_owned()]).unwrap();
        assert_eq!(one.lines().count(), 2);
    }
}
