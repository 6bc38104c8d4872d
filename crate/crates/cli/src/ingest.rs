//! Dataset ingestion: CSV read/write and the modified rank transform.

use std::path::Path;

use copmix::Dataset;

use crate::error::{CliError, CliResult};

/// Column-wise modified rank transform: u_ij = rank(x_ij)/(n+1) with
/// average ranks for ties. Output lies strictly inside (0, 1) and is
/// invariant under strictly monotone transformations of a column.
pub fn rank_transform(raw: &[Vec<f64>]) -> CliResult<Vec<Vec<f64>>> {
    let n = raw.len();
    if n < 2 {
        return Err(CliError::Data(format!("rank transform needs n >= 2 rows, got {n}")));
    }
    let p = raw[0].len();
    let mut out = vec![vec![0.0; p]; n];
    for j in 0..p {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| raw[a][j].partial_cmp(&raw[b][j]).unwrap());
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && raw[idx[end]][j] == raw[idx[start]][j] {
                end += 1;
            }
            // 1-based ranks start+1 ..= end share the average rank.
            let avg = (start + 1 + end) as f64 / 2.0;
            for &i in &idx[start..end] {
                out[i][j] = avg / (n as f64 + 1.0);
            }
            start = end;
        }
    }
    Ok(out)
}

/// Reads a CSV with one header row; non-numeric or missing cells are data
/// errors naming the row and column.
pub fn read_raw_csv(path: &Path) -> CliResult<(Vec<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| CliError::Data(format!("{}: empty file", path.display())))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let p = header.len();
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != p {
            return Err(CliError::Data(format!(
                "{} row {}: {} cells, expected {p}",
                path.display(),
                lineno + 2,
                cells.len()
            )));
        }
        let mut row = Vec::with_capacity(p);
        for (j, cell) in cells.iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| {
                CliError::Data(format!(
                    "{} row {} column {} ({}): not a number: {cell:?}",
                    path.display(),
                    lineno + 2,
                    j + 1,
                    header[j]
                ))
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Loads a dataset, optionally rank-transforming raw margins first.
pub fn load_dataset(path: &Path, rank: bool) -> CliResult<Dataset> {
    let (header, rows) = read_raw_csv(path)?;
    let rows = if rank { rank_transform(&rows)? } else { rows };
    Dataset::from_rows(rows, Some(header)).map_err(|e| CliError::Data(e.to_string()))
}

/// Writes a dataset with one header row and 16 significant digits,
/// enough to round-trip above the boundary clamp.
pub fn write_dataset(data: &Dataset, path: &Path) -> CliResult<()> {
    let mut out = String::new();
    out.push_str(&data.columns().join(","));
    out.push('\n');
    for point in data.points() {
        let cells: Vec<String> = point.coords().iter().map(|v| format!("{v:.15e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}
