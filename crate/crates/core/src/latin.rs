//! Square symbol arrays and their text format.
//!
//! The text format is `n` lines of `n` space-separated symbols, each line
//! terminated by a newline. The order is inferred from the number of lines.

use std::fmt;

use thiserror::Error;

/// Errors raised while reading or validating a square array.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SquareError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("square is empty")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("symbol {symbol} at ({row}, {col}) is outside 1..={n}")]
    SymbolOutOfRange {
        row: usize,
        col: usize,
        symbol: u32,
        n: usize,
    },
    #[error("symbol {symbol} repeats in row {row}")]
    RowRepeat { row: usize, symbol: u32 },
    #[error("symbol {symbol} repeats in column {col}")]
    ColumnRepeat { col: usize, symbol: u32 },
}

/// An `n x n` array of symbols in `1..=n`, stored row-major, with no latin
/// constraint. This is what checkers consume.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolGrid {
    n: usize,
    cells: Vec<u32>,
}

impl SymbolGrid {
    pub fn new(n: usize, cells: Vec<u32>) -> Result<Self, SquareError> {
        if n == 0 {
            return Err(SquareError::Empty);
        }
        assert_eq!(cells.len(), n * n, "cell count must be n*n");
        for (idx, &symbol) in cells.iter().enumerate() {
            if symbol == 0 || symbol as usize > n {
                return Err(SquareError::SymbolOutOfRange {
                    row: idx / n,
                    col: idx % n,
                    symbol,
                    n,
                });
            }
        }
        Ok(SymbolGrid { n, cells })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self, SquareError> {
        let n = rows.len();
        if n == 0 {
            return Err(SquareError::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(SquareError::RaggedRow {
                    row,
                    found: r.len(),
                    expected: n,
                });
            }
        }
        SymbolGrid::new(n, rows.concat())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Zero-based row and column.
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.n + col]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.cells[row * self.n..(row + 1) * self.n]
    }

    pub fn transpose(&self) -> SymbolGrid {
        let n = self.n;
        let mut cells = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                cells[c * n + r] = self.cells[r * n + c];
            }
        }
        SymbolGrid { n, cells }
    }

    fn first_row_repeat(&self) -> Option<SquareError> {
        let n = self.n;
        for row in 0..n {
            let mut seen = vec![false; n + 1];
            for &symbol in self.row(row) {
                if std::mem::replace(&mut seen[symbol as usize], true) {
                    return Some(SquareError::RowRepeat { row, symbol });
                }
            }
        }
        None
    }

    fn first_column_repeat(&self) -> Option<SquareError> {
        match self.transpose().first_row_repeat() {
            Some(SquareError::RowRepeat { row, symbol }) => {
                Some(SquareError::ColumnRepeat { col: row, symbol })
            }
            other => other,
        }
    }

    /// Parses the square text format. `#` comment lines and blank lines are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self, SquareError> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut row = Vec::new();
            let mut column = 1;
            for token in line.split_whitespace() {
                // report the 1-based character column of the bad token
                let offset = line[column - 1..].find(token).unwrap_or(0) + column - 1;
                let value = token.parse::<u32>().map_err(|_| SquareError::Syntax {
                    line: lineno + 1,
                    column: offset + 1,
                    message: format!("expected a positive integer, found {token:?}"),
                })?;
                row.push(value);
                column = offset + token.len() + 1;
            }
            rows.push(row);
        }
        SymbolGrid::from_rows(&rows)
    }
}

impl fmt::Display for SymbolGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..self.n {
            let line: Vec<String> = self.row(row).iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// An array in which each symbol appears exactly once in every row. Columns
/// are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowLatinSquare(SymbolGrid);

impl RowLatinSquare {
    pub fn new(grid: SymbolGrid) -> Result<Self, SquareError> {
        match grid.first_row_repeat() {
            Some(err) => Err(err),
            None => Ok(RowLatinSquare(grid)),
        }
    }

    pub fn grid(&self) -> &SymbolGrid {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.n
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.0.get(row, col)
    }
}

/// A latin square: each symbol once in each row and once in each column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare(SymbolGrid);

impl LatinSquare {
    pub fn new(grid: SymbolGrid) -> Result<Self, SquareError> {
        if let Some(err) = grid.first_row_repeat() {
            return Err(err);
        }
        if let Some(err) = grid.first_column_repeat() {
            return Err(err);
        }
        Ok(LatinSquare(grid))
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self, SquareError> {
        LatinSquare::new(SymbolGrid::from_rows(rows)?)
    }

    /// The square whose cell `(i, j)` holds `(i + j) mod n + 1`.
    pub fn cyclic(n: usize) -> Self {
        let cells = (0..n * n)
            .map(|idx| ((idx / n + idx % n) % n + 1) as u32)
            .collect();
        LatinSquare(SymbolGrid { n, cells })
    }

    pub fn grid(&self) -> &SymbolGrid {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.n
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.0.get(row, col)
    }

    pub fn transpose(&self) -> LatinSquare {
        LatinSquare(self.0.transpose())
    }

    /// Applies a row permutation, a column permutation and a symbol
    /// relabelling, all given as zero-based images.
    pub fn permuted(&self, rows: &[usize], cols: &[usize], symbols: &[usize]) -> LatinSquare {
        let n = self.0.n;
        let mut cells = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                let symbol = self.0.get(r, c) as usize - 1;
                cells[rows[r] * n + cols[c]] = symbols[symbol] as u32 + 1;
            }
        }
        LatinSquare(SymbolGrid { n, cells })
    }

    pub fn parse(text: &str) -> Result<Self, SquareError> {
        LatinSquare::new(SymbolGrid::parse(text)?)
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for RowLatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_squares_are_latin() {
        for n in 1..10 {
            let square = LatinSquare::cyclic(n);
            assert!(LatinSquare::new(square.grid().clone()).is_ok());
        }
    }

    #[test]
    fn text_round_trip() {
        let square = LatinSquare::cyclic(5);
        let text = square.to_string();
        assert!(text.ends_with('\n'));
        assert_eq!(LatinSquare::parse(&text).unwrap(), square);
    }

    #[test]
    fn rejects_column_repeat() {
        let err = LatinSquare::from_rows(&[vec![1, 2], vec![1, 2]]).unwrap_err();
        assert_eq!(err, SquareError::ColumnRepeat { col: 0, symbol: 1 });
    }

    #[test]
    fn row_latin_allows_column_repeats() {
        let grid = SymbolGrid::from_rows(&[vec![1, 2], vec![1, 2]]).unwrap();
        assert!(RowLatinSquare::new(grid).is_ok());
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = SymbolGrid::parse("1 2\n2 x\n").unwrap_err();
        assert_eq!(
            err,
            SquareError::Syntax {
                line: 2,
                column: 3,
                message: "expected a positive integer, found \"x\"".into()
            }
        );
    }

    #[test]
    fn out_of_range_symbol() {
        assert!(matches!(
            SymbolGrid::parse("1 3\n2 1\n"),
            Err(SquareError::SymbolOutOfRange { symbol: 3, .. })
        ));
    }
}
