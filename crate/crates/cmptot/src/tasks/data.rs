//! Dataset loaders.
//!
//! - QA: JSONL, one `{"question", "options", "correct"}` object per line.
//! - Game of 24: CSV; any column whose cell is four whitespace-separated
//!   integers is accepted, so both a headered `Puzzles` column and a bare
//!   single-column file load.
//! - Sudoku: JSON array of `{"size", "givens"}`; empty cells are `null`
//!   or `"*"`.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use super::sudoku::{self, SudokuGrid};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {reason}")]
    Record { path: String, line: usize, reason: String },
    #[error("{path}: {reason}")]
    Schema { path: String, reason: String },
    #[error("{path}: dataset is empty")]
    Empty { path: String },
}

fn read(path: &Path) -> Result<String, DataError> {
    fs::read_to_string(path)
        .map_err(|source| DataError::Io { path: path.display().to_string(), source })
}

/// One multiple-choice question.
#[derive(Debug, Clone, Deserialize)]
pub struct QaInstance {
    pub question: String,
    pub options: Vec<String>,
    pub correct: String,
}

impl QaInstance {
    /// The question as posed to the generator: stem plus options.
    pub fn prompt_text(&self) -> String {
        if self.options.is_empty() {
            self.question.clone()
        } else {
            format!("{}\nOptions: {}", self.question, self.options.join(" "))
        }
    }

    pub fn correct_letter(&self) -> Option<char> {
        let c = self.correct.trim().chars().next()?;
        let c = c.to_ascii_uppercase();
        ('A'..='E').contains(&c).then_some(c)
    }
}

pub fn load_qa_jsonl(path: &Path) -> Result<Vec<QaInstance>, DataError> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let inst: QaInstance = serde_json::from_str(line).map_err(|e| DataError::Record {
            path: path.display().to_string(),
            line: i + 1,
            reason: e.to_string(),
        })?;
        if inst.correct_letter().is_none() {
            return Err(DataError::Record {
                path: path.display().to_string(),
                line: i + 1,
                reason: format!("correct answer {:?} is not a letter A-E", inst.correct),
            });
        }
        out.push(inst);
    }
    if out.is_empty() {
        return Err(DataError::Empty { path: path.display().to_string() });
    }
    Ok(out)
}

/// One four-number puzzle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct G24Instance {
    pub numbers: [i64; 4],
}

fn parse_puzzle_cell(cell: &str) -> Option<[i64; 4]> {
    let nums: Vec<i64> = cell.split_whitespace().map(|t| t.parse().ok()).collect::<Option<_>>()?;
    let arr: [i64; 4] = nums.try_into().ok()?;
    arr.iter().all(|&n| n > 0).then_some(arr)
}

pub fn load_game24_csv(path: &Path) -> Result<Vec<G24Instance>, DataError> {
    let text = read(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| DataError::Schema {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        // Header rows and rank columns simply fail the 4-number parse.
        if let Some(numbers) = record.iter().find_map(parse_puzzle_cell) {
            out.push(G24Instance { numbers });
        }
    }
    if out.is_empty() {
        return Err(DataError::Empty { path: path.display().to_string() });
    }
    Ok(out)
}

/// One Sudoku puzzle.
#[derive(Debug, Clone)]
pub struct SudokuInstance {
    pub size: usize,
    pub givens: SudokuGrid,
}

pub fn load_sudoku_json(path: &Path) -> Result<Vec<SudokuInstance>, DataError> {
    let text = read(path)?;
    let schema = |reason: String| DataError::Schema { path: path.display().to_string(), reason };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| schema(e.to_string()))?;
    let items = value.as_array().ok_or_else(|| schema("expected a JSON array".into()))?;
    let mut out = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let size = item
            .get("size")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| schema(format!("item {i}: missing integer \"size\"")))? as usize;
        if !(3..=5).contains(&size) {
            return Err(schema(format!("item {i}: size {size} not in 3..=5")));
        }
        let givens = item
            .get("givens")
            .and_then(|v| v.as_array())
            .ok_or_else(|| schema(format!("item {i}: missing array \"givens\"")))?;
        let mut cells = Vec::new();
        for row in givens {
            let row = row
                .as_array()
                .ok_or_else(|| schema(format!("item {i}: givens rows must be arrays")))?;
            let mut cells_row = Vec::new();
            for cell in row {
                let parsed = match cell {
                    serde_json::Value::Null => None,
                    serde_json::Value::String(s) if s.trim() == "*" => None,
                    serde_json::Value::String(s) => Some(
                        s.trim()
                            .parse::<u8>()
                            .map_err(|_| schema(format!("item {i}: bad cell {s:?}")))?,
                    ),
                    serde_json::Value::Number(n) => {
                        let v = n
                            .as_u64()
                            .ok_or_else(|| schema(format!("item {i}: bad cell {n}")))?;
                        Some(
                            u8::try_from(v)
                                .map_err(|_| schema(format!("item {i}: cell {v} too large")))?,
                        )
                    }
                    other => return Err(schema(format!("item {i}: bad cell {other}"))),
                };
                cells_row.push(parsed);
            }
            cells.push(cells_row);
        }
        let grid = SudokuGrid::new(cells).map_err(|e| schema(format!("item {i}: {e}")))?;
        if grid.size() != size {
            return Err(schema(format!(
                "item {i}: declared size {size} but grid is {}x{}",
                grid.size(),
                grid.size()
            )));
        }
        if !sudoku::check(&grid, &grid).consistent {
            return Err(schema(format!("item {i}: givens are already inconsistent")));
        }
        out.push(SudokuInstance { size, givens: grid });
    }
    if out.is_empty() {
        return Err(DataError::Empty { path: path.display().to_string() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp(content: &str, ext: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn qa_jsonl_round_trip() {
        let f = temp(
            r#"{"question":"1+1?","options":["A)1","B)2","C)3","D)4","E)5"],"correct":"B"}
{"question":"2*3?","options":["A)5","B)6"],"correct":"B)6"}
"#,
            ".jsonl",
        );
        let rows = load_qa_jsonl(f.path()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].correct_letter(), Some('B'));
        assert!(rows[0].prompt_text().contains("Options: A)1 B)2"));
    }

    #[test]
    fn qa_jsonl_rejects_bad_letter() {
        let f = temp(r#"{"question":"q","options":[],"correct":"Z"}"#, ".jsonl");
        assert!(matches!(load_qa_jsonl(f.path()), Err(DataError::Record { .. })));
    }

    #[test]
    fn game24_csv_with_headers() {
        let f = temp("Rank,Puzzles,Solved rate\n1,1 1 4 6,99.8%\n2,1 1 11 11,99.6%\n", ".csv");
        let rows = load_game24_csv(f.path()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].numbers, [1, 1, 4, 6]);
    }

    #[test]
    fn game24_csv_bare_column() {
        let f = temp("4 9 10 13\n2 9 10 12\n", ".csv");
        let rows = load_game24_csv(f.path()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].numbers, [2, 9, 10, 12]);
    }

    #[test]
    fn game24_csv_empty_fails() {
        let f = temp("Rank,Puzzles\n", ".csv");
        assert!(matches!(load_game24_csv(f.path()), Err(DataError::Empty { .. })));
    }

    #[test]
    fn sudoku_json_loads() {
        let f = temp(
            r#"[{"size":3,"givens":[[1,null,"*"],["*",1,null],[null,2,"*"]]}]"#,
            ".json",
        );
        let rows = load_sudoku_json(f.path()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].givens.render(), "[[1, *, *], [*, 1, *], [*, 2, *]]");
    }

    #[test]
    fn sudoku_json_rejects_bad_schema() {
        let f = temp(r#"[{"size":6,"givens":[[1]]}]"#, ".json");
        assert!(matches!(load_sudoku_json(f.path()), Err(DataError::Schema { .. })));
        let f2 = temp(r#"[{"size":3,"givens":[[1,1,null],[null,null,null],[null,null,null]]}]"#, ".json");
        assert!(load_sudoku_json(f2.path()).unwrap_err().to_string().contains("inconsistent"));
    }
}
