//! Subcommand implementations. Each returns the exact text destined for stdout.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use hallforge_core::checks::{self, CheckResult};
use hallforge_core::quiver::parse_int_list;
use hallforge_core::{
    Catalog, CatalogJson, DerivedHallAlgebra, DerivedHallElement, DimVector, ElementJson,
    HallAlgebra, HallElement, K0Class, PerfectObject,
};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::{cache_key, Cache, Lookup};
use crate::config::{Cli, Command, Format, JobConfig, Mode, Suite};
use crate::error::{CliError, CliResult};

/// What happened when the catalog was requested from the cache.
#[derive(Debug, Clone, Default)]
pub struct CacheStatus {
    pub enabled: bool,
    pub hit: bool,
    pub corrupt: Option<(PathBuf, String)>,
}

fn open_cache(config: &JobConfig) -> CliResult<Option<Cache>> {
    config.cache.as_deref().map(Cache::open).transpose()
}

fn build_catalog(config: &JobConfig) -> CliResult<Catalog> {
    Ok(Catalog::build(
        &config.field,
        config.quiver.clone(),
        &config.bound,
        &config.budget,
    )?)
}

/// The catalog for `config`, through the cache when one is configured.
pub fn load_catalog(config: &JobConfig) -> CliResult<(Arc<Catalog>, CacheStatus)> {
    let mut status = CacheStatus::default();
    let Some(cache) = open_cache(config)? else {
        return Ok((Arc::new(build_catalog(config)?), status));
    };
    status.enabled = true;
    let key = cache_key(config, "catalog", "");
    match cache.get(&key, "catalog") {
        Lookup::Hit(payload) => {
            let parsed = serde_json::from_str::<CatalogJson>(&payload)
                .map_err(|e| e.to_string())
                .and_then(|j| Catalog::from_json(&j, &config.budget).map_err(|e| e.to_string()));
            match parsed {
                Ok(c) if c.quiver().digest() == config.quiver.digest() && c.bound() == &config.bound => {
                    status.hit = true;
                    return Ok((Arc::new(c), status));
                }
                Ok(_) => status.corrupt = Some((cache.path_for(&key), "catalog inputs differ".into())),
                Err(e) => status.corrupt = Some((cache.path_for(&key), e)),
            }
        }
        Lookup::Corrupt(path, why) => status.corrupt = Some((path, why)),
        Lookup::Miss => {}
    }
    if let Some((path, why)) = &status.corrupt {
        eprintln!("warning: cache entry {} failed revalidation ({why}); recomputing", path.display());
    }
    let catalog = build_catalog(config)?;
    let payload = serde_json::to_string(&catalog.to_json()).expect("catalog serializes");
    cache.put(&key, "catalog", &payload)?;
    Ok((Arc::new(catalog), status))
}

pub fn run(cli: &Cli) -> CliResult<String> {
    let config = JobConfig::from_args(&cli.global)?;
    match &cli.command {
        Command::Catalog { out } => cmd_catalog(&config, out.as_ref()),
        Command::Product { lhs, rhs, mode } => cmd_product(&config, lhs, rhs, *mode),
        Command::Dproduct { lhs, rhs } => cmd_product(&config, lhs, rhs, Mode::Derived),
        Command::Hallnum { r, m, n } => cmd_hallnum(&config, r, m, n),
        Command::Table { degree, mode } => cmd_table(&config, degree, *mode),
        Command::Verify { suite } => {
            let report = cmd_verify(&config, *suite)?;
            let text = render_report(&report, config.format.unwrap_or(Format::Json));
            if report.passed {
                Ok(text)
            } else {
                print!("{text}");
                Err(CliError::Verification(format!(
                    "{} of {} checks failed",
                    report.checks.iter().filter(|c| !c.passed).count(),
                    report.checks.len()
                )))
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct CatalogSummary {
    q: u32,
    quiver: String,
    bound: Vec<u32>,
    indecomposables: usize,
    classes: BTreeMap<String, usize>,
}

pub fn cmd_catalog(config: &JobConfig, out: Option<&PathBuf>) -> CliResult<String> {
    let (catalog, _) = load_catalog(config)?;
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&catalog.to_json()).expect("catalog serializes");
        std::fs::write(path, text + "\n").map_err(|e| CliError::Cache {
            path: path.clone(),
            source: e,
        })?;
    }
    let mut per_dim: Vec<(DimVector, usize)> = config
        .bound
        .below()
        .into_iter()
        .map(|d| {
            let n = catalog.classes_of_dim(&d).map(|c| c.len())?;
            Ok((d, n))
        })
        .collect::<CliResult<_>>()?;
    per_dim.sort();
    let fmt_dims = |d: &DimVector| {
        let parts: Vec<String> = d.0.iter().map(u32::to_string).collect();
        format!("({})", parts.join(","))
    };
    Ok(match config.format.unwrap_or(Format::Text) {
        Format::Json => {
            let summary = CatalogSummary {
                q: config.q(),
                quiver: config.quiver.digest(),
                bound: config.bound.0.clone(),
                indecomposables: catalog.members().len(),
                classes: per_dim.iter().map(|(d, n)| (fmt_dims(d), *n)).collect(),
            };
            serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("dims,classes\n");
            for (d, n) in &per_dim {
                writeln!(s, "\"{}\",{n}", fmt_dims(d)).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = format!("indecomposables: {}\n", catalog.members().len());
            for (i, m) in catalog.members().iter().enumerate() {
                writeln!(s, "  [{i}] dims {}", fmt_dims(m.dims())).unwrap();
            }
            s.push_str("classes per dimension vector:\n");
            for (d, n) in &per_dim {
                writeln!(s, "  {}: {n}", fmt_dims(d)).unwrap();
            }
            s
        }
    })
}

fn render_element_json(json: &ElementJson) -> String {
    serde_json::to_string_pretty(json).expect("element serializes") + "\n"
}

fn render_element_csv(json: &ElementJson) -> String {
    let mut s = String::from("class,num,den\n");
    for t in &json.terms {
        writeln!(s, "\"{}\",{},{}", t.class, t.num, t.den).unwrap();
    }
    s
}

fn render_element(json: &ElementJson, text: String, format: Format) -> String {
    match format {
        Format::Json => render_element_json(json),
        Format::Csv => render_element_csv(json),
        Format::Text => text + "\n",
    }
}

pub fn render_classical(catalog: &Catalog, e: &HallElement, format: Format) -> String {
    let render = |l: &_| catalog.render(l);
    render_element(&e.to_json(render), e.display(render), format)
}

pub fn render_derived(d: &DerivedHallAlgebra, e: &DerivedHallElement, format: Format) -> String {
    let render = |o: &PerfectObject| d.render(o);
    render_element(&e.to_json(render), e.display(render), format)
}

pub fn cmd_product(config: &JobConfig, lhs: &str, rhs: &str, mode: Mode) -> CliResult<String> {
    let (catalog, _) = load_catalog(config)?;
    let format = config.format.unwrap_or(Format::Json);
    match mode {
        Mode::Classical => {
            let h = HallAlgebra::new(catalog.clone());
            let (m, n) = (catalog.parse_label(lhs)?, catalog.parse_label(rhs)?);
            let p = h.product(&h.basis(&m), &h.basis(&n))?;
            Ok(render_classical(&catalog, &p, format))
        }
        Mode::Derived => {
            let d = DerivedHallAlgebra::new(catalog)?;
            let (a, b) = (d.parse(lhs)?, d.parse(rhs)?);
            let p = d.derived_product(&d.basis(&a), &d.basis(&b))?;
            Ok(render_derived(&d, &p, format))
        }
    }
}

#[derive(Debug, Serialize)]
struct HallNumber {
    r: String,
    m: String,
    n: String,
    g: String,
}

pub fn cmd_hallnum(config: &JobConfig, r: &str, m: &str, n: &str) -> CliResult<String> {
    let (catalog, _) = load_catalog(config)?;
    let h = HallAlgebra::new(catalog.clone());
    let (lr, lm, ln) = (catalog.parse_label(r)?, catalog.parse_label(m)?, catalog.parse_label(n)?);
    let g = h.hall_number_subcount(&lr, &lm, &ln)?;
    let g2 = h.hall_number_extcount(&lr, &lm, &ln)?;
    if g != g2 {
        return Err(CliError::Verification(format!(
            "subobject count {g} differs from exact-sequence count {g2}"
        )));
    }
    let row = HallNumber {
        r: catalog.render(&lr),
        m: catalog.render(&lm),
        n: catalog.render(&ln),
        g: g.to_string(),
    };
    Ok(match config.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&row).expect("row serializes") + "\n",
        Format::Csv => format!("r,m,n,g\n\"{}\",\"{}\",\"{}\",{}\n", row.r, row.m, row.n, row.g),
        Format::Text => format!("{}\n", row.g),
    })
}

fn csv_field(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn ratio(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// CSV of every structure constant in `degree`, rows sorted by `(m, n, r)` as rendered.
pub fn table_csv(config: &JobConfig, catalog: &Arc<Catalog>, degree: &[i64], mode: Mode) -> CliResult<String> {
    let nv = config.quiver.vertex_count();
    if degree.len() != nv {
        return Err(CliError::Invalid(format!("degree needs {nv} entries")));
    }
    let mut rows: Vec<[String; 4]> = match mode {
        Mode::Classical => {
            if degree.iter().any(|&x| x < 0) {
                Vec::new()
            } else {
                let d = DimVector(degree.iter().map(|&x| x as u32).collect());
                if !d.le(&config.bound) {
                    return Err(hallforge_core::Error::OutsideCatalogBound {
                        dims: d,
                        bound: config.bound.clone(),
                    }
                    .into());
                }
                let h = HallAlgebra::new(catalog.clone());
                h.structure_table(&d)?
                    .into_iter()
                    .map(|c| {
                        [
                            catalog.render(&c.m),
                            catalog.render(&c.n),
                            catalog.render(&c.r),
                            c.g.to_string(),
                        ]
                    })
                    .collect()
            }
        }
        Mode::Derived => {
            let d = DerivedHallAlgebra::new(catalog.clone())?;
            let target = K0Class(degree.to_vec());
            let objects = d.objects_in_range(config.amplitude, &config.bound)?;
            let pairs: Vec<(PerfectObject, PerfectObject)> = checks::bounded_pairs(&objects, &config.bound)
                .into_iter()
                .filter(|(a, b)| {
                    !a.is_zero() && !b.is_zero() && a.k0_class(nv).add(&b.k0_class(nv)) == target
                })
                .collect();
            let cells: Vec<CliResult<Vec<[String; 4]>>> = pairs
                .par_iter()
                .map(|(a, b)| {
                    let p = d.product_basis(a, b)?;
                    Ok(p.terms()
                        .iter()
                        .map(|(y, c)| [d.render(a), d.render(b), d.render(y), ratio(c)])
                        .collect())
                })
                .collect();
            let mut rows = Vec::new();
            for c in cells {
                rows.extend(c?);
            }
            rows
        }
    };
    rows.sort();
    let mut s = String::from("m,n,r,g\n");
    for [m, n, r, g] in rows {
        writeln!(s, "{},{},{},{g}", csv_field(&m), csv_field(&n), csv_field(&r)).unwrap();
    }
    Ok(s)
}

pub fn cmd_table(config: &JobConfig, degree: &str, mode: Mode) -> CliResult<String> {
    let degree = parse_int_list(degree).map_err(CliError::Invalid)?;
    if config.format == Some(Format::Json) || config.format == Some(Format::Text) {
        return Err(CliError::Invalid("table output is CSV only".into()));
    }
    let cache = open_cache(config)?;
    let mode_tag = match mode {
        Mode::Classical => "classical",
        Mode::Derived => "derived",
    };
    let extra = format!(
        "{mode_tag};{:?};amp={},{}",
        degree, config.amplitude.0, config.amplitude.1
    );
    let key = cache.as_ref().map(|_| cache_key(config, "table", &extra));
    if let (Some(cache), Some(key)) = (&cache, &key) {
        match cache.get(key, "table") {
            Lookup::Hit(payload) => return Ok(payload),
            Lookup::Corrupt(path, why) => {
                eprintln!("warning: cache entry {} failed revalidation ({why}); recomputing", path.display())
            }
            Lookup::Miss => {}
        }
    }
    let (catalog, _) = load_catalog(config)?;
    let csv = table_csv(config, &catalog, &degree, mode)?;
    if let (Some(cache), Some(key)) = (&cache, &key) {
        cache.put(key, "table", &csv)?;
    }
    Ok(csv)
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn check(name: &str, passed: bool, cases: u64, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        cases,
        detail,
    }
}

/// The `Σ 2ε_i + ε_j` dims needed for the Serre-type relation fit in the catalog.
fn relation_fits(catalog: &Catalog) -> bool {
    let n = catalog.quiver().vertex_count();
    !catalog.quiver().arrows().is_empty()
        && catalog.quiver().arrows().iter().all(|a| {
            let mut d = DimVector::zero(n);
            d.0[a.source] += 2;
            d.0[a.target] += 1;
            catalog.covers(&d)
        })
}

pub fn hall_suite(h: &HallAlgebra, bound: &DimVector) -> Vec<CheckResult> {
    let mut out = vec![
        checks::hall_number_agreement(h),
        checks::classical_associativity(h, bound),
        checks::classical_grading(h, bound),
        // longest sequences of simples (up to 3) that some bounded class can hold
        checks::filtration_formula(h, (bound.total() as usize).min(3)),
    ];
    if relation_fits(h.catalog()) {
        out.push(checks::ringel_relation(h));
    }
    out
}

pub fn derived_suite(catalog: &Arc<Catalog>, amplitude: (i32, i32), bound: &DimVector) -> CliResult<Vec<CheckResult>> {
    let h = HallAlgebra::new(catalog.clone());
    let d = DerivedHallAlgebra::new(catalog.clone())?;
    let mut out = vec![checks::classical_limit(&d, &h, bound)];
    if !catalog.quiver().arrows().is_empty() {
        let other = DerivedHallAlgebra::with_slot_order(catalog.clone(), hallforge_core::SlotOrder::SubFirst)?;
        let alt = checks::classical_limit(&other, &h, bound);
        out.push(check(
            "slot order: only the quotient-first assignment reproduces the classical product",
            out[0].passed && !alt.passed,
            alt.cases,
            if alt.passed { "sub-first assignment also matched".into() } else { String::new() },
        ));
    }
    if amplitude != (0, 0) {
        out.push(checks::derived_associativity(&d, amplitude, bound));
        out.push(checks::local_finiteness(&d, amplitude, bound));
        out.push(checks::k0_grading(&d));
        if relation_fits(catalog) {
            out.push(checks::ringel_relation_derived(&d));
        }
    }
    Ok(out)
}

pub fn cmd_verify(config: &JobConfig, suite: Suite) -> CliResult<VerifyReport> {
    let (catalog, status) = load_catalog(config)?;
    let mut results = Vec::new();
    if status.enabled {
        results.push(match &status.corrupt {
            Some((path, why)) => check(
                "cache: stored catalog revalidates",
                false,
                1,
                format!("{}: {why}", path.display()),
            ),
            None => check("cache: stored catalog revalidates", true, 1, String::new()),
        });
        if status.hit {
            let cold = build_catalog(config)?;
            results.push(check(
                "cache: hit equals cold recomputation",
                cold.to_json() == catalog.to_json(),
                1,
                String::new(),
            ));
        }
    }
    if matches!(suite, Suite::Hall | Suite::All) {
        results.extend(hall_suite(&HallAlgebra::new(catalog.clone()), &config.bound));
    }
    if matches!(suite, Suite::Derived | Suite::All) {
        results.extend(derived_suite(&catalog, config.amplitude, &config.bound)?);
    }
    let suite_name = match suite {
        Suite::Hall => "hall",
        Suite::Derived => "derived",
        Suite::All => "all",
    };
    Ok(VerifyReport {
        suite: suite_name.into(),
        passed: results.iter().all(|c| c.passed),
        checks: results,
    })
}

pub fn render_report(report: &VerifyReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("check,passed,cases,detail\n");
            for c in &report.checks {
                writeln!(s, "{},{},{},{}", csv_field(&c.name), c.passed, c.cases, csv_field(&c.detail)).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                writeln!(s, "{c}").unwrap();
            }
            let status = if report.passed { "PASS" } else { "FAIL" };
            writeln!(s, "{status} suite {}", report.suite).unwrap();
            s
        }
    }
}
