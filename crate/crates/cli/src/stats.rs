//! Size and claim summaries over many configuration files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use boxgt::geometry::Config;
use boxgt::io;

pub const HEADER: &str =
    "file,construction,params,points,tests,dim,disjunct,not_disjunct,separable,not_separable,log_ratio,slope";

/// Parameters that vary along a sweep; all others name the family.
const SWEEP_KEYS: &[&str] = &["n", "m"];

pub struct Row {
    pub file: String,
    pub construction: String,
    pub params: String,
    pub family: String,
    pub points: usize,
    pub tests: usize,
    pub dim: usize,
    pub claims: [Option<usize>; 4],
    pub log_ratio: Option<f64>,
    pub slope: Option<f64>,
}

pub fn expand(patterns: &[String]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for pattern in patterns {
        let mut matched: Vec<PathBuf> = glob::glob(pattern)
            .with_context(|| format!("bad pattern {pattern:?}"))?
            .collect::<std::result::Result<_, _>>()?;
        if matched.is_empty() {
            anyhow::bail!("no files match {pattern:?}");
        }
        matched.sort();
        files.extend(matched);
    }
    Ok(files)
}

fn row(path: &Path, config: &Config) -> Row {
    let c = config.claims();
    let construction = c.construction.clone().unwrap_or_default();
    let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let fixed: Vec<String> = c
        .params
        .iter()
        .filter(|(k, _)| !SWEEP_KEYS.contains(&k.as_str()))
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    let (points, tests) = (config.points().len(), config.boxes().len());
    let log_ratio = (points > 0 && tests > 1).then(|| (points as f64).ln() / (tests as f64).ln());
    Row {
        file: path.display().to_string(),
        family: format!("{construction};{}", fixed.join(";")),
        construction,
        params: params.join(";"),
        points,
        tests,
        dim: config.dim(),
        claims: [c.disjunct, c.not_disjunct, c.separable, c.not_separable],
        log_ratio,
        slope: None,
    }
}

/// Least-squares slope of `ln points` against `ln tests`.
fn fit(rows: &[&Row]) -> Option<f64> {
    let xy: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.points > 0 && r.tests > 0)
        .map(|r| ((r.tests as f64).ln(), (r.points as f64).ln()))
        .collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (xy.len() >= 2 && sxx > 1e-12).then(|| sxy / sxx)
}

pub fn collect(files: &[PathBuf]) -> Result<Vec<Row>> {
    let mut rows = Vec::with_capacity(files.len());
    for path in files {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let config = io::parse_config(&bytes).with_context(|| format!("parsing {}", path.display()))?;
        rows.push(row(path, &config));
    }
    let mut families: BTreeMap<&str, Vec<&Row>> = BTreeMap::new();
    for r in &rows {
        families.entry(r.family.as_str()).or_default().push(r);
    }
    let slopes: BTreeMap<String, f64> = families
        .iter()
        .filter_map(|(f, members)| fit(members).map(|s| (f.to_string(), s)))
        .collect();
    for r in &mut rows {
        r.slope = slopes.get(&r.family).copied();
    }
    Ok(rows)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = format!("{HEADER}\n");
    for r in rows {
        let claims: Vec<String> = r.claims.iter().map(|c| opt(*c)).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            quote(&r.file),
            quote(&r.construction),
            quote(&r.params),
            r.points,
            r.tests,
            r.dim,
            claims.join(","),
            opt(r.log_ratio.map(|x| format!("{x:.6}"))),
            opt(r.slope.map(|x| format!("{x:.6}"))),
        ));
    }
    out
}

pub fn to_json(rows: &[Row]) -> Result<String> {
    let values: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "file": r.file,
                "construction": r.construction,
                "params": r.params,
                "points": r.points,
                "tests": r.tests,
                "dim": r.dim,
                "disjunct": r.claims[0],
                "not_disjunct": r.claims[1],
                "separable": r.claims[2],
                "not_separable": r.claims[3],
                "log_ratio": r.log_ratio.map(|x| format!("{x:.6}")),
                "slope": r.slope.map(|x| format!("{x:.6}")),
            })
        })
        .collect();
    Ok(io::to_json(&values)?)
}
