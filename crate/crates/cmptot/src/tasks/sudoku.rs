//! Latin-square Sudoku grids: parsing, rendering and constraint checking.
//!
//! Puzzles are N x N (row/column constraints only, no boxes); `*` marks an
//! unfilled cell. Generator replies carry the grid after the last `###`
//! marker in the `[[1, *, *], [*, 1, *], [*, 2, *]]` format.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SudokuParseError {
    #[error("no ### marker in reply")]
    MissingMarker,
    #[error("no grid found after marker")]
    MissingGrid,
    #[error("grid syntax error: {0}")]
    Syntax(String),
    #[error("grid is not square: {rows} rows but row {row} has {cols} cells")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("cell ({row},{col}) value {value} outside 1..={size}")]
    CellOutOfRange { row: usize, col: usize, value: i64, size: usize },
    #[error("unsupported grid size {0}")]
    BadSize(usize),
}

/// A (possibly partial) N x N grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SudokuGrid {
    size: usize,
    cells: Vec<Vec<Option<u8>>>,
}

impl SudokuGrid {
    pub fn new(cells: Vec<Vec<Option<u8>>>) -> Result<Self, SudokuParseError> {
        let size = cells.len();
        if !(2..=9).contains(&size) {
            return Err(SudokuParseError::BadSize(size));
        }
        for (r, row) in cells.iter().enumerate() {
            if row.len() != size {
                return Err(SudokuParseError::NotSquare { rows: size, row: r, cols: row.len() });
            }
            for (c, cell) in row.iter().enumerate() {
                if let Some(v) = cell {
                    if !(1..=size as u8).contains(v) {
                        return Err(SudokuParseError::CellOutOfRange {
                            row: r,
                            col: c,
                            value: *v as i64,
                            size,
                        });
                    }
                }
            }
        }
        Ok(Self { size, cells })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn cell(&self, r: usize, c: usize) -> Option<u8> {
        self.cells[r][c]
    }

    pub fn rows(&self) -> &[Vec<Option<u8>>] {
        &self.cells
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_some()).count()
    }

    pub fn with_cell(&self, r: usize, c: usize, v: Option<u8>) -> Self {
        let mut cells = self.cells.clone();
        cells[r][c] = v;
        Self { size: self.size, cells }
    }

    /// The `[[1, *, *], [*, 1, *], [*, 2, *]]` form used in prompts.
    pub fn render(&self) -> String {
        let rows: Vec<String> = self
            .cells
            .iter()
            .map(|row| {
                let cells: Vec<String> = row
                    .iter()
                    .map(|c| match c {
                        Some(v) => v.to_string(),
                        None => "*".to_string(),
                    })
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// Verdict of [`check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SudokuCheck {
    /// No digit repeats within any row or column among filled cells.
    pub consistent: bool,
    /// No unfilled cells and every row and column is a permutation of 1..=N.
    pub complete: bool,
    /// Every originally-given cell is unchanged.
    pub respects_givens: bool,
}

impl SudokuCheck {
    pub fn solved(&self) -> bool {
        self.consistent && self.complete && self.respects_givens
    }
}

/// Checks a grid against the reference givens.
pub fn check(grid: &SudokuGrid, givens: &SudokuGrid) -> SudokuCheck {
    let n = grid.size;
    let mut consistent = true;
    for i in 0..n {
        let mut row_seen = vec![false; n + 1];
        let mut col_seen = vec![false; n + 1];
        for j in 0..n {
            if let Some(v) = grid.cells[i][j] {
                let v = v as usize;
                if row_seen[v] {
                    consistent = false;
                }
                row_seen[v] = true;
            }
            if let Some(v) = grid.cells[j][i] {
                let v = v as usize;
                if col_seen[v] {
                    consistent = false;
                }
                col_seen[v] = true;
            }
        }
    }

    let filled = grid.filled_count() == n * n;
    // For a fully filled grid, "each row and column is a permutation of
    // 1..=N" is exactly consistency; both are computed so the implication
    // `complete => consistent` is checkable rather than assumed.
    let mut permutations = filled;
    if filled {
        for i in 0..n {
            let mut row_mask = vec![false; n + 1];
            let mut col_mask = vec![false; n + 1];
            for j in 0..n {
                if let Some(v) = grid.cells[i][j] {
                    row_mask[v as usize] = true;
                }
                if let Some(v) = grid.cells[j][i] {
                    col_mask[v as usize] = true;
                }
            }
            if row_mask[1..].iter().any(|&b| !b) || col_mask[1..].iter().any(|&b| !b) {
                permutations = false;
            }
        }
    }

    let respects_givens = grid.size == givens.size
        && (0..n).all(|r| {
            (0..n).all(|c| match givens.cells[r][c] {
                Some(v) => grid.cells[r][c] == Some(v),
                None => true,
            })
        });

    SudokuCheck { consistent, complete: filled && permutations, respects_givens }
}

/// Parses an `[[...], ...]` array (no `###` marker expected).
pub fn parse_array(text: &str) -> Result<SudokuGrid, SudokuParseError> {
    let mut chars = text.chars().peekable();
    skip_ws(&mut chars);
    expect(&mut chars, '[')?;
    let mut rows = Vec::new();
    loop {
        skip_ws(&mut chars);
        match chars.peek() {
            Some('[') => {
                chars.next();
                rows.push(parse_row(&mut chars)?);
                skip_ws(&mut chars);
                match chars.peek() {
                    Some(',') => {
                        chars.next();
                    }
                    Some(']') => {}
                    other => {
                        return Err(SudokuParseError::Syntax(format!(
                            "expected ',' or ']' after row, found {other:?}"
                        )))
                    }
                }
            }
            Some(']') => {
                chars.next();
                break;
            }
            other => {
                return Err(SudokuParseError::Syntax(format!(
                    "expected row or ']', found {other:?}"
                )))
            }
        }
    }
    SudokuGrid::new(rows)
}

fn skip_ws(chars: &mut std::iter::Peekable<std::str::Chars>) {
    while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
        chars.next();
    }
}

fn expect(
    chars: &mut std::iter::Peekable<std::str::Chars>,
    want: char,
) -> Result<(), SudokuParseError> {
    match chars.next() {
        Some(c) if c == want => Ok(()),
        other => Err(SudokuParseError::Syntax(format!("expected {want:?}, found {other:?}"))),
    }
}

fn parse_row(
    chars: &mut std::iter::Peekable<std::str::Chars>,
) -> Result<Vec<Option<u8>>, SudokuParseError> {
    let mut row = Vec::new();
    loop {
        skip_ws(chars);
        match chars.peek() {
            Some(']') => {
                chars.next();
                return Ok(row);
            }
            Some('*') => {
                chars.next();
                row.push(None);
            }
            Some('\'') | Some('"') => {
                // Tolerate quoted cells such as '*' or "3".
                let quote = chars.next().unwrap();
                let mut body = String::new();
                loop {
                    match chars.next() {
                        Some(c) if c == quote => break,
                        Some(c) => body.push(c),
                        None => {
                            return Err(SudokuParseError::Syntax("unterminated quote".into()))
                        }
                    }
                }
                if body == "*" {
                    row.push(None);
                } else {
                    let v: i64 = body
                        .trim()
                        .parse()
                        .map_err(|_| SudokuParseError::Syntax(format!("bad cell {body:?}")))?;
                    row.push(Some(u8::try_from(v).map_err(|_| {
                        SudokuParseError::Syntax(format!("cell {v} out of byte range"))
                    })?));
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let mut tok = String::new();
                while matches!(chars.peek(), Some(c) if c.is_ascii_digit()) {
                    tok.push(chars.next().unwrap());
                }
                let v: i64 =
                    tok.parse().map_err(|_| SudokuParseError::Syntax(format!("bad cell {tok}")))?;
                row.push(Some(u8::try_from(v).map_err(|_| {
                    SudokuParseError::Syntax(format!("cell {v} out of byte range"))
                })?));
            }
            other => {
                return Err(SudokuParseError::Syntax(format!("unexpected cell token {other:?}")))
            }
        }
        skip_ws(chars);
        match chars.peek() {
            Some(',') => {
                chars.next();
            }
            Some(']') => {}
            other => {
                return Err(SudokuParseError::Syntax(format!(
                    "expected ',' or ']' in row, found {other:?}"
                )))
            }
        }
    }
}

/// Extracts and parses the grid after the last `###` marker of a reply.
pub fn parse_reply(text: &str) -> Result<SudokuGrid, SudokuParseError> {
    let pos = text.rfind("###").ok_or(SudokuParseError::MissingMarker)?;
    let tail = &text[pos + 3..];
    let start = tail.find('[').ok_or(SudokuParseError::MissingGrid)?;
    parse_array(&tail[start..])
}

/// The cyclic Latin square `L[i][j] = ((i + j) mod n) + 1`, useful as a
/// seed grid in tests and simulations.
pub fn cyclic_latin(n: usize) -> SudokuGrid {
    let cells = (0..n)
        .map(|i| (0..n).map(|j| Some((((i + j) % n) + 1) as u8)).collect())
        .collect();
    SudokuGrid::new(cells).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: &[&[i8]]) -> SudokuGrid {
        let cells = rows
            .iter()
            .map(|r| r.iter().map(|&v| if v < 0 { None } else { Some(v as u8) }).collect())
            .collect();
        SudokuGrid::new(cells).unwrap()
    }

    #[test]
    fn parse_reply_paper_format() {
        let g = parse_reply("###[[1, *, *], [*, 1, *], [*, 2, *]]").unwrap();
        assert_eq!(g.size(), 3);
        assert_eq!(g.filled_count(), 3);
        assert_eq!(g.cell(0, 0), Some(1));
        assert_eq!(g.cell(2, 1), Some(2));
        assert_eq!(g.cell(0, 1), None);
    }

    #[test]
    fn parse_reply_uses_last_marker() {
        let text = "### first try [[9]] ...\nsecond: ###[[1, 2], [2, 1]]";
        let g = parse_reply(text).unwrap();
        assert_eq!(g.size(), 2);
    }

    #[test]
    fn parse_rejects_non_square() {
        let err = parse_reply("###[[1, 2], [2, 1], [1, 2]]").unwrap_err();
        assert!(matches!(err, SudokuParseError::NotSquare { .. }), "{err:?}");
    }

    #[test]
    fn parse_rejects_out_of_range_digit() {
        let err = parse_reply("###[[4, *, *], [*, 1, *], [*, 2, *]]").unwrap_err();
        assert!(matches!(err, SudokuParseError::CellOutOfRange { value: 4, .. }), "{err:?}");
    }

    #[test]
    fn parse_requires_marker() {
        assert_eq!(
            parse_reply("[[1, *], [*, 1]]").unwrap_err(),
            SudokuParseError::MissingMarker
        );
    }

    #[test]
    fn check_latin_square_is_complete() {
        let givens = grid(&[&[1, -1, -1], &[-1, 1, -1], &[-1, 2, -1]]);
        let g = grid(&[&[1, 2, 3], &[2, 3, 1], &[3, 1, 2]]);
        let c = check(&g, &givens);
        assert!(c.consistent && c.complete);
        // The reference givens here put 1 at (1,1) and 2 at (2,1); the
        // candidate has 3 and 1 there, so givens are violated.
        assert!(!c.respects_givens);

        let matching_givens = grid(&[&[1, -1, -1], &[-1, 3, -1], &[-1, 1, -1]]);
        assert!(check(&g, &matching_givens).solved());
    }

    #[test]
    fn check_duplicate_row() {
        let givens = grid(&[&[-1, -1, -1], &[-1, -1, -1], &[-1, -1, -1]]);
        let g = grid(&[&[1, 1, -1], &[-1, -1, -1], &[-1, -1, -1]]);
        let c = check(&g, &givens);
        assert!(!c.consistent);
        assert!(!c.complete);
        assert!(c.respects_givens);
    }

    #[test]
    fn check_duplicate_column() {
        let givens = grid(&[&[-1, -1, -1], &[-1, -1, -1], &[-1, -1, -1]]);
        let g = grid(&[&[2, -1, -1], &[2, -1, -1], &[-1, -1, -1]]);
        assert!(!check(&g, &givens).consistent);
    }

    #[test]
    fn check_altered_given() {
        let givens = grid(&[&[1, -1], &[-1, 2]]);
        let g = grid(&[&[2, -1], &[-1, 2]]);
        assert!(!check(&g, &givens).respects_givens);
    }

    #[test]
    fn render_round_trips() {
        let g = grid(&[&[1, -1, -1], &[-1, 1, -1], &[-1, 2, -1]]);
        assert_eq!(g.render(), "[[1, *, *], [*, 1, *], [*, 2, *]]");
        let back = parse_array(&g.render()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn cyclic_latin_is_solved_for_empty_givens() {
        for n in [3usize, 4, 5] {
            let empty = SudokuGrid::new(vec![vec![None; n]; n]).unwrap();
            let g = cyclic_latin(n);
            assert!(check(&g, &empty).solved(), "n={n}");
        }
    }
}
