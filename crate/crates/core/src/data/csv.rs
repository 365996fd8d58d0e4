use super::{DataError, Dataset, FeatureKind};
use crate::numerics::Matrix;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Load a dataset from a UTF-8, comma-delimited CSV with a header row.
///
/// Every cell outside the optional label column must parse as a real number.
/// The label column, when named, is mapped to dense category indices in
/// sorted order of the distinct label strings.
pub fn load_csv(path: &Path, label_column: Option<&str>) -> Result<Dataset, DataError> {
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| DataError::Domain(format!("{}: file is empty", path.display())))?;
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();

    let label_idx = match label_column {
        Some(name) => Some(
            columns
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| DataError::Domain(format!("label column \"{name}\" not found")))?,
        ),
        None => None,
    };
    let feature_names: Vec<String> = columns
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != label_idx)
        .map(|(_, c)| c.clone())
        .collect();
    let d = feature_names.len();
    if d == 0 {
        return Err(DataError::Domain("no feature columns".into()));
    }

    let mut values: Vec<f64> = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    let mut n = 0usize;
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let row = lineno + 2; // 1-based, counting the header
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns.len() {
            return Err(DataError::Ragged {
                row,
                expected: columns.len(),
                got: cells.len(),
            });
        }
        for (i, cell) in cells.iter().enumerate() {
            if Some(i) == label_idx {
                raw_labels.push(cell.trim().to_string());
                continue;
            }
            let parsed: f64 = cell.trim().parse().map_err(|_| DataError::Parse {
                row,
                column: columns[i].clone(),
                cell: cell.trim().to_string(),
            })?;
            values.push(parsed);
        }
        n += 1;
    }

    let features = Matrix::from_vec(n, d, values).map_err(|e| DataError::Domain(e.to_string()))?;

    let (labels, label_names) = if label_idx.is_some() {
        let mut names: Vec<String> = raw_labels.clone();
        names.sort();
        names.dedup();
        let labels = raw_labels
            .iter()
            .map(|l| names.iter().position(|n| n == l).unwrap())
            .collect();
        (Some(labels), names)
    } else {
        (None, Vec::new())
    };

    Dataset::new(
        (0..n).map(|i| i.to_string()).collect(),
        features,
        labels,
        label_names,
        feature_names,
        vec![FeatureKind::Continuous; d],
    )
}

/// Write a dataset as CSV. Values use the shortest decimal representation
/// that round-trips, so a save/load cycle reproduces them bit for bit.
pub fn save_csv(ds: &Dataset, path: &Path) -> Result<(), DataError> {
    let io_err = |source| DataError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = String::new();
    let mut header: Vec<String> = ds.feature_names().to_vec();
    if ds.labels().is_some() {
        header.push("label".to_string());
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..ds.len() {
        let mut cells: Vec<String> = ds.sample(i).iter().map(|v| v.to_string()).collect();
        if let Some(labels) = ds.labels() {
            cells.push(ds.label_names()[labels[i]].clone());
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(out.as_bytes()).map_err(io_err)?;
    Ok(())
}
