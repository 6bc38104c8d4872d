//! The draws file: one row per kept iteration with columns
//! `iter,a,b,m,labels,theta_star`. The number of clusters varies across
//! iterations, so labels are run-length encoded and the distinct values
//! packed into single quoted fields. A leading comment line carries the
//! run metadata needed to rebuild the in-memory draws.

use std::path::Path;

use copmix::copula::CopulaFamily;
use copmix::sampler::{DrawRecord, PosteriorDraws};

use crate::error::{CliError, CliResult};

/// Run-length encoding of a label sequence: "label x count" tokens.
pub fn encode_labels(labels: &[usize]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < labels.len() {
        let mut j = i + 1;
        while j < labels.len() && labels[j] == labels[i] {
            j += 1;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&format!("{}x{}", labels[i], j - i));
        i = j;
    }
    out
}

pub fn decode_labels(text: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        let (label, count) = token
            .split_once('x')
            .ok_or_else(|| CliError::Data(format!("bad label run: {token:?}")))?;
        let label: usize = label
            .parse()
            .map_err(|_| CliError::Data(format!("bad label in run: {token:?}")))?;
        let count: usize = count
            .parse()
            .map_err(|_| CliError::Data(format!("bad count in run: {token:?}")))?;
        out.extend(std::iter::repeat_n(label, count));
    }
    Ok(out)
}

pub fn write_draws(draws: &PosteriorDraws, path: &Path) -> CliResult<()> {
    let mut out = String::new();
    out.push_str(&format!(
        "# family={} n={} p={} n_iter={} burn_in={} thin={} seed={}\n",
        draws.family, draws.n, draws.p, draws.n_iter, draws.burn_in, draws.thin, draws.seed
    ));
    out.push_str("iter,a,b,m,labels,theta_star\n");
    for d in &draws.draws {
        let thetas: Vec<String> = d.theta_star.iter().map(|v| format!("{v}")).collect();
        out.push_str(&format!(
            "{},{},{},{},\"{}\",\"{}\"\n",
            d.iteration,
            d.a,
            d.b,
            d.cluster_count(),
            encode_labels(&d.labels),
            thetas.join(" ")
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Metadata parsed back from the draws-file comment line.
#[derive(Debug, Clone, PartialEq)]
pub struct DrawsMeta {
    pub family: CopulaFamily,
    pub n: usize,
    pub p: usize,
    pub n_iter: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
}

/// Reads a draws file back; `log_densities` are left empty (the summarize
/// path recomputes them against the dataset).
pub fn read_draws(path: &Path) -> CliResult<(DrawsMeta, Vec<DrawRecord>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let meta_line = lines
        .next()
        .ok_or_else(|| CliError::Data(format!("{}: empty draws file", path.display())))?;
    let meta = parse_meta(meta_line)
        .ok_or_else(|| CliError::Data(format!("{}: bad metadata line: {meta_line}", path.display())))?;
    let header = lines
        .next()
        .ok_or_else(|| CliError::Data(format!("{}: missing header", path.display())))?;
    if header != "iter,a,b,m,labels,theta_star" {
        return Err(CliError::Data(format!("{}: unexpected header {header:?}", path.display())));
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells = split_quoted_csv(line);
        if cells.len() != 6 {
            return Err(CliError::Data(format!(
                "{} row {}: {} fields, expected 6",
                path.display(),
                lineno + 3,
                cells.len()
            )));
        }
        let bad = |what: &str| CliError::Data(format!("{} row {}: bad {what}", path.display(), lineno + 3));
        let iteration: usize = cells[0].parse().map_err(|_| bad("iter"))?;
        let a: f64 = cells[1].parse().map_err(|_| bad("a"))?;
        let b: f64 = cells[2].parse().map_err(|_| bad("b"))?;
        let m: usize = cells[3].parse().map_err(|_| bad("m"))?;
        let labels = decode_labels(&cells[4])?;
        let theta_star: Vec<f64> = cells[5]
            .split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|_| bad("theta_star")))
            .collect::<CliResult<_>>()?;
        if theta_star.len() != m || labels.len() != meta.n {
            return Err(bad("shape"));
        }
        records.push(DrawRecord {
            iteration,
            a,
            b,
            labels,
            theta_star,
            log_densities: Vec::new(),
        });
    }
    Ok((meta, records))
}

fn parse_meta(line: &str) -> Option<DrawsMeta> {
    let rest = line.strip_prefix("# ")?;
    let mut family = None;
    let mut n = None;
    let mut p = None;
    let mut n_iter = None;
    let mut burn_in = None;
    let mut thin = None;
    let mut seed = None;
    for token in rest.split_whitespace() {
        let (k, v) = token.split_once('=')?;
        match k {
            "family" => family = CopulaFamily::parse(v),
            "n" => n = v.parse().ok(),
            "p" => p = v.parse().ok(),
            "n_iter" => n_iter = v.parse().ok(),
            "burn_in" => burn_in = v.parse().ok(),
            "thin" => thin = v.parse().ok(),
            "seed" => seed = v.parse().ok(),
            _ => return None,
        }
    }
    Some(DrawsMeta {
        family: family?,
        n: n?,
        p: p?,
        n_iter: n_iter?,
        burn_in: burn_in?,
        thin: thin?,
        seed: seed?,
    })
}

/// Splits a CSV line whose quoted fields never contain commas or quotes.
fn split_quoted_csv(line: &str) -> Vec<String> {
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    for c in line.chars() {
        match c {
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => cells.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    cells.push(cur);
    cells
}
