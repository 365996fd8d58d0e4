use super::{KnowledgeError, KnowledgeMatrix};
use std::fs;
use std::io::Write;
use std::path::Path;

/// Load a knowledge matrix from CSV: `n` rows of `n` cells, empty cell =
/// missing entry. Enforces symmetry of known cells and a zero diagonal;
/// empty diagonal cells default to the known zero.
pub fn load_knowledge_csv(path: &Path) -> Result<KnowledgeMatrix, KnowledgeError> {
    let text = fs::read_to_string(path).map_err(|source| KnowledgeError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let rows: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
    let n = rows.len();
    let mut mt = KnowledgeMatrix::unknown(n);
    let fmt_err = |row: usize, col: usize, message: String| KnowledgeError::Format {
        path: path.to_path_buf(),
        row,
        col,
        message,
    };

    let mut parsed: Vec<Vec<Option<f64>>> = Vec::with_capacity(n);
    for (i, line) in rows.iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != n {
            return Err(fmt_err(
                i + 1,
                cells.len(),
                format!("expected {n} cells, found {}", cells.len()),
            ));
        }
        let mut row = Vec::with_capacity(n);
        for (j, cell) in cells.iter().enumerate() {
            let cell = cell.trim();
            if cell.is_empty() {
                row.push(None);
            } else {
                let v: f64 = cell.parse().map_err(|_| {
                    fmt_err(i + 1, j + 1, format!("cannot parse \"{cell}\" as a number"))
                })?;
                row.push(Some(v));
            }
        }
        parsed.push(row);
    }

    for i in 0..n {
        match parsed[i][i] {
            None | Some(0.0) => {}
            Some(v) => {
                return Err(fmt_err(
                    i + 1,
                    i + 1,
                    format!("diagonal must be zero, got {v}"),
                ))
            }
        }
        for j in (i + 1)..n {
            match (parsed[i][j], parsed[j][i]) {
                (None, None) => {}
                (Some(a), Some(b)) if a == b => {
                    mt.set_pair(i, j, a)
                        .map_err(|e| fmt_err(i + 1, j + 1, e.to_string()))?;
                }
                (Some(a), Some(b)) => {
                    return Err(fmt_err(
                        i + 1,
                        j + 1,
                        format!("asymmetric entries: {a} vs {b}"),
                    ))
                }
                _ => {
                    return Err(fmt_err(
                        i + 1,
                        j + 1,
                        "entry known on one side of the diagonal only".into(),
                    ))
                }
            }
        }
    }
    Ok(mt)
}

/// Write a knowledge matrix as CSV; missing entries become empty cells.
pub fn save_knowledge_csv(mt: &KnowledgeMatrix, path: &Path) -> Result<(), KnowledgeError> {
    let io_err = |source| KnowledgeError::Io {
        path: path.to_path_buf(),
        source,
    };
    let n = mt.len();
    let mut out = String::new();
    for i in 0..n {
        let cells: Vec<String> = (0..n)
            .map(|j| mt.get(i, j).map(|v| v.to_string()).unwrap_or_default())
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(out.as_bytes()).map_err(io_err)?;
    Ok(())
}
