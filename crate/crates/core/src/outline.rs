//! Outline latin squares.
//!
//! Given compositions `S = (p_1..p_s)`, `T = (q_1..q_t)` and
//! `U = (r_1..r_u)` of `n`, an outline latin square is an `s x t` array of
//! symbol multisets over `0..u` such that
//!
//! 1. symbol `k` occurs `p_i * r_k` times in row `i`,
//! 2. symbol `k` occurs `q_j * r_k` times in column `j`,
//! 3. cell `(i, j)` holds `p_i * q_j` symbols counting repetitions.
//!
//! Amalgamating the row blocks, column blocks and symbol groups of a latin
//! square always gives an outline latin square, and [`realize_outline`]
//! goes the other way.

use std::fmt;

use thiserror::Error;

use crate::graph::{equitable_edge_colouring, BipartiteMultigraph};
use crate::latin::{LatinSquare, SymbolGrid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OutlineError {
    #[error("composition parts must be positive")]
    EmptyPart,
    #[error("compositions sum to {rows}, {cols} and {symbols}, expected {n}")]
    SumMismatch {
        n: usize,
        rows: usize,
        cols: usize,
        symbols: usize,
    },
    #[error("expected {expected} cell counts, found {found}")]
    CellCount { expected: usize, found: usize },
    #[error("{axis} {index} has part {part}, nothing to split")]
    NotSplittable {
        axis: &'static str,
        index: usize,
        part: usize,
    },
    #[error("index {index} is out of range for a composition with {len} parts")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("not an outline latin square: {0}")]
    Invalid(OutlineViolation),
    #[error("splitting produced a non-latin array (internal error): {0}")]
    Internal(String),
}

/// An ordered tuple of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self, OutlineError> {
        if parts.contains(&0) {
            return Err(OutlineError::EmptyPart);
        }
        Ok(Composition(parts))
    }

    /// `(1, 1, ..., 1)` with `n` parts.
    pub fn units(n: usize) -> Self {
        Composition(vec![1; n])
    }

    /// `count` copies of `part`.
    pub fn uniform(part: usize, count: usize) -> Self {
        assert!(part > 0, "composition parts must be positive");
        Composition(vec![part; count])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_units(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    /// Block index of every element `0..total`.
    fn block_of(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(block, &part)| std::iter::repeat(block).take(part))
            .collect()
    }

    /// Replaces part `index` by `part` ones.
    fn split(&self, index: usize) -> Composition {
        let mut parts = Vec::with_capacity(self.0.len() + self.0[index]);
        parts.extend_from_slice(&self.0[..index]);
        parts.extend(std::iter::repeat(1).take(self.0[index]));
        parts.extend_from_slice(&self.0[index + 1..]);
        Composition(parts)
    }
}

/// The first violated counting condition of an outline square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutlineViolation {
    /// Condition (iii).
    CellSize {
        row: usize,
        col: usize,
        expected: usize,
        found: usize,
    },
    /// Condition (i).
    RowSymbol {
        row: usize,
        symbol: usize,
        expected: usize,
        found: usize,
    },
    /// Condition (ii).
    ColumnSymbol {
        col: usize,
        symbol: usize,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for OutlineViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutlineViolation::CellSize {
                row,
                col,
                expected,
                found,
            } => write!(
                f,
                "cell ({row}, {col}) holds {found} symbols, expected {expected}"
            ),
            OutlineViolation::RowSymbol {
                row,
                symbol,
                expected,
                found,
            } => write!(
                f,
                "symbol {symbol} occurs {found} times in row {row}, expected {expected}"
            ),
            OutlineViolation::ColumnSymbol {
                col,
                symbol,
                expected,
                found,
            } => write!(
                f,
                "symbol {symbol} occurs {found} times in column {col}, expected {expected}"
            ),
        }
    }
}

/// An `s x t` array of symbol multisets together with its compositions.
/// Each cell is a dense count vector over the `u` symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutlineLatinSquare {
    rows: Composition,
    cols: Composition,
    symbols: Composition,
    counts: Vec<u32>,
}

impl OutlineLatinSquare {
    /// Builds an array without checking the counting conditions; see
    /// [`validate_outline`]. `counts` is indexed `(row * t + col) * u + symbol`.
    pub fn new(
        rows: Composition,
        cols: Composition,
        symbols: Composition,
        counts: Vec<u32>,
    ) -> Result<Self, OutlineError> {
        let n = rows.total();
        if cols.total() != n || symbols.total() != n {
            return Err(OutlineError::SumMismatch {
                n,
                rows: rows.total(),
                cols: cols.total(),
                symbols: symbols.total(),
            });
        }
        let expected = rows.len() * cols.len() * symbols.len();
        if counts.len() != expected {
            return Err(OutlineError::CellCount {
                expected,
                found: counts.len(),
            });
        }
        Ok(OutlineLatinSquare {
            rows,
            cols,
            symbols,
            counts,
        })
    }

    /// Builds an array from explicit cell contents, each a list of symbols
    /// (repetitions allowed), rows of cells in order.
    pub fn from_cells(
        rows: Composition,
        cols: Composition,
        symbols: Composition,
        cells: &[Vec<Vec<usize>>],
    ) -> Result<Self, OutlineError> {
        let u = symbols.len();
        let mut counts = vec![0; rows.len() * cols.len() * u];
        if cells.len() != rows.len() || cells.iter().any(|row| row.len() != cols.len()) {
            return Err(OutlineError::CellCount {
                expected: rows.len() * cols.len(),
                found: cells.iter().map(Vec::len).sum(),
            });
        }
        for (i, row) in cells.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                for &symbol in cell {
                    if symbol >= u {
                        return Err(OutlineError::IndexOutOfRange {
                            index: symbol,
                            len: u,
                        });
                    }
                    counts[(i * cols.len() + j) * u + symbol] += 1;
                }
            }
        }
        OutlineLatinSquare::new(rows, cols, symbols, counts)
    }

    pub fn order(&self) -> usize {
        self.rows.total()
    }

    pub fn row_composition(&self) -> &Composition {
        &self.rows
    }

    pub fn column_composition(&self) -> &Composition {
        &self.cols
    }

    pub fn symbol_composition(&self) -> &Composition {
        &self.symbols
    }

    /// Number of block rows (`s`).
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Number of block columns (`t`).
    pub fn column_count(&self) -> usize {
        self.cols.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    /// Copies of `symbol` in cell `(row, col)`.
    pub fn count(&self, row: usize, col: usize, symbol: usize) -> u32 {
        self.counts[self.index(row, col, symbol)]
    }

    /// Count vector of a cell.
    pub fn cell(&self, row: usize, col: usize) -> &[u32] {
        let start = self.index(row, col, 0);
        &self.counts[start..start + self.symbols.len()]
    }

    fn index(&self, row: usize, col: usize, symbol: usize) -> usize {
        (row * self.cols.len() + col) * self.symbols.len() + symbol
    }

    /// Exchanges the roles of rows and columns.
    pub fn transpose(&self) -> OutlineLatinSquare {
        let (s, t, u) = (self.rows.len(), self.cols.len(), self.symbols.len());
        let mut counts = vec![0; self.counts.len()];
        for i in 0..s {
            for j in 0..t {
                let from = (i * t + j) * u;
                let to = (j * s + i) * u;
                counts[to..to + u].copy_from_slice(&self.counts[from..from + u]);
            }
        }
        OutlineLatinSquare {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            symbols: self.symbols.clone(),
            counts,
        }
    }

    /// Text dump of the count vectors, one block row per line, used in
    /// diagnostics.
    pub fn to_debug_text(&self) -> String {
        let mut out = format!(
            "S={:?} T={:?} U={:?}\n",
            self.rows.parts(),
            self.cols.parts(),
            self.symbols.parts()
        );
        for i in 0..self.rows.len() {
            let cells: Vec<String> = (0..self.cols.len())
                .map(|j| {
                    let items: Vec<String> = self.cell(i, j).iter().map(u32::to_string).collect();
                    format!("[{}]", items.join(","))
                })
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Merges the row blocks of `rows`, column blocks of `cols` and symbol
/// groups of `symbols` of a latin square.
pub fn amalgamate(
    square: &LatinSquare,
    rows: &Composition,
    cols: &Composition,
    symbols: &Composition,
) -> Result<OutlineLatinSquare, OutlineError> {
    let n = square.order();
    if rows.total() != n || cols.total() != n || symbols.total() != n {
        return Err(OutlineError::SumMismatch {
            n,
            rows: rows.total(),
            cols: cols.total(),
            symbols: symbols.total(),
        });
    }
    let (row_block, col_block, symbol_group) =
        (rows.block_of(), cols.block_of(), symbols.block_of());
    let (t, u) = (cols.len(), symbols.len());
    let mut counts = vec![0; rows.len() * t * u];
    for r in 0..n {
        for c in 0..n {
            let symbol = symbol_group[square.get(r, c) as usize - 1];
            counts[(row_block[r] * t + col_block[c]) * u + symbol] += 1;
        }
    }
    OutlineLatinSquare::new(rows.clone(), cols.clone(), symbols.clone(), counts)
}

/// Checks the three counting conditions. Cell sizes are checked first, then
/// row counts, then column counts; the first violation found is returned.
pub fn validate_outline(outline: &OutlineLatinSquare) -> Result<(), OutlineViolation> {
    let (p, q, r) = (
        outline.rows.parts(),
        outline.cols.parts(),
        outline.symbols.parts(),
    );
    for (i, &pi) in p.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            let found: usize = outline.cell(i, j).iter().map(|&c| c as usize).sum();
            if found != pi * qj {
                return Err(OutlineViolation::CellSize {
                    row: i,
                    col: j,
                    expected: pi * qj,
                    found,
                });
            }
        }
    }
    for (i, &pi) in p.iter().enumerate() {
        for (k, &rk) in r.iter().enumerate() {
            let found: usize = (0..q.len()).map(|j| outline.count(i, j, k) as usize).sum();
            if found != pi * rk {
                return Err(OutlineViolation::RowSymbol {
                    row: i,
                    symbol: k,
                    expected: pi * rk,
                    found,
                });
            }
        }
    }
    for (j, &qj) in q.iter().enumerate() {
        for (k, &rk) in r.iter().enumerate() {
            let found: usize = (0..p.len()).map(|i| outline.count(i, j, k) as usize).sum();
            if found != qj * rk {
                return Err(OutlineViolation::ColumnSymbol {
                    col: j,
                    symbol: k,
                    expected: qj * rk,
                    found,
                });
            }
        }
    }
    Ok(())
}

/// Splits block row `row` (of height `p >= 2`) into `p` rows of height one.
///
/// The columns x symbols multigraph of the row, with one edge per copy of a
/// symbol in a cell, has degrees `p * q_j` and `p * r_k`; an equitable
/// `p`-colouring hands each new row `q_j` symbols in column `j` and `r_k`
/// copies of symbol `k`. New rows appear in colour order.
pub fn split_row(
    outline: &OutlineLatinSquare,
    row: usize,
) -> Result<OutlineLatinSquare, OutlineError> {
    let s = outline.rows.len();
    if row >= s {
        return Err(OutlineError::IndexOutOfRange { index: row, len: s });
    }
    let p = outline.rows.parts()[row];
    if p < 2 {
        return Err(OutlineError::NotSplittable {
            axis: "row",
            index: row,
            part: p,
        });
    }
    let (t, u) = (outline.cols.len(), outline.symbols.len());
    let mut graph = BipartiteMultigraph::new(t, u);
    for j in 0..t {
        for (k, &copies) in outline.cell(row, j).iter().enumerate() {
            for _ in 0..copies {
                graph.add_edge(j, k);
            }
        }
    }
    let colouring = equitable_edge_colouring(&graph, p).map_err(|err| {
        OutlineError::Invalid(match err {
            crate::graph::ColouringError::DegreeNotDivisible {
                side: "left",
                vertex,
                degree,
                ..
            } => OutlineViolation::CellSize {
                row,
                col: vertex,
                expected: p * outline.cols.parts()[vertex],
                found: degree,
            },
            crate::graph::ColouringError::DegreeNotDivisible { vertex, degree, .. } => {
                OutlineViolation::RowSymbol {
                    row,
                    symbol: vertex,
                    expected: p * outline.symbols.parts()[vertex],
                    found: degree,
                }
            }
            other => unreachable!("unexpected colouring error {other}"),
        })
    })?;
    let mut new_rows = vec![0u32; p * t * u];
    for (&(j, k), &colour) in graph.edges().iter().zip(&colouring.assignment) {
        new_rows[(colour * t + j) * u + k] += 1;
    }
    let start = row * t * u;
    let end = start + t * u;
    let mut counts = Vec::with_capacity(outline.counts.len() + (p - 1) * t * u);
    counts.extend_from_slice(&outline.counts[..start]);
    counts.extend_from_slice(&new_rows);
    counts.extend_from_slice(&outline.counts[end..]);
    Ok(OutlineLatinSquare {
        rows: outline.rows.split(row),
        cols: outline.cols.clone(),
        symbols: outline.symbols.clone(),
        counts,
    })
}

/// Splits block column `col` into unit columns; [`split_row`] on the
/// transpose.
pub fn split_column(
    outline: &OutlineLatinSquare,
    col: usize,
) -> Result<OutlineLatinSquare, OutlineError> {
    match split_row(&outline.transpose(), col) {
        Ok(split) => Ok(split.transpose()),
        Err(OutlineError::NotSplittable { index, part, .. }) => Err(OutlineError::NotSplittable {
            axis: "column",
            index,
            part,
        }),
        Err(other) => Err(other),
    }
}

/// Splits symbol group `symbol` (of size `r >= 2`) into `r` unit symbols.
///
/// The rows x columns multigraph with one edge per copy of the symbol has
/// degrees `p_i * r` and `q_j * r`; copies coloured `c` become the `c`-th new
/// symbol.
pub fn split_symbol(
    outline: &OutlineLatinSquare,
    symbol: usize,
) -> Result<OutlineLatinSquare, OutlineError> {
    let u = outline.symbols.len();
    if symbol >= u {
        return Err(OutlineError::IndexOutOfRange {
            index: symbol,
            len: u,
        });
    }
    let r = outline.symbols.parts()[symbol];
    if r < 2 {
        return Err(OutlineError::NotSplittable {
            axis: "symbol",
            index: symbol,
            part: r,
        });
    }
    let (s, t) = (outline.rows.len(), outline.cols.len());
    let mut graph = BipartiteMultigraph::new(s, t);
    for i in 0..s {
        for j in 0..t {
            for _ in 0..outline.count(i, j, symbol) {
                graph.add_edge(i, j);
            }
        }
    }
    let colouring = equitable_edge_colouring(&graph, r).map_err(|err| match err {
        crate::graph::ColouringError::DegreeNotDivisible {
            side,
            vertex,
            degree,
            ..
        } => OutlineError::Invalid(if side == "left" {
            OutlineViolation::RowSymbol {
                row: vertex,
                symbol,
                expected: outline.rows.parts()[vertex] * r,
                found: degree,
            }
        } else {
            OutlineViolation::ColumnSymbol {
                col: vertex,
                symbol,
                expected: outline.cols.parts()[vertex] * r,
                found: degree,
            }
        }),
        other => OutlineError::Internal(other.to_string()),
    })?;
    let new_u = u + r - 1;
    let mut counts = vec![0u32; s * t * new_u];
    for i in 0..s {
        for j in 0..t {
            let from = (i * t + j) * u;
            let to = (i * t + j) * new_u;
            counts[to..to + symbol].copy_from_slice(&outline.counts[from..from + symbol]);
            counts[to + symbol + r..to + new_u]
                .copy_from_slice(&outline.counts[from + symbol + 1..from + u]);
        }
    }
    for (&(i, j), &colour) in graph.edges().iter().zip(&colouring.assignment) {
        counts[(i * t + j) * new_u + symbol + colour] += 1;
    }
    Ok(OutlineLatinSquare {
        rows: outline.rows.clone(),
        cols: outline.cols.clone(),
        symbols: outline.symbols.split(symbol),
        counts,
    })
}

/// Produces a latin square whose amalgamation by the outline's compositions
/// is exactly the outline.
///
/// Rows are split first (top to bottom), then columns (left to right), then
/// symbols (in increasing index).
pub fn realize_outline(outline: &OutlineLatinSquare) -> Result<LatinSquare, OutlineError> {
    validate_outline(outline).map_err(OutlineError::Invalid)?;
    let mut current = outline.clone();
    current = split_all_rows(current)?;
    current = split_all_rows(current.transpose())?.transpose();
    let mut symbol = 0;
    while symbol < current.symbols.len() {
        let r = current.symbols.parts()[symbol];
        if r > 1 {
            current = split_symbol(&current, symbol)?;
        }
        symbol += r;
    }
    let n = current.order();
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let cell = current.cell(i, j);
            let symbol = cell
                .iter()
                .position(|&c| c == 1)
                .filter(|_| cell.iter().sum::<u32>() == 1)
                .ok_or_else(|| {
                    OutlineError::Internal(format!("cell ({i}, {j}) is not a singleton"))
                })?;
            cells.push(symbol as u32 + 1);
        }
    }
    let grid = SymbolGrid::new(n, cells).map_err(|err| OutlineError::Internal(err.to_string()))?;
    LatinSquare::new(grid).map_err(|err| OutlineError::Internal(err.to_string()))
}

fn split_all_rows(mut current: OutlineLatinSquare) -> Result<OutlineLatinSquare, OutlineError> {
    let mut row = 0;
    while row < current.rows.len() {
        let p = current.rows.parts()[row];
        if p > 1 {
            current = split_row(&current, row)?;
        }
        row += p;
    }
    Ok(current)
}
