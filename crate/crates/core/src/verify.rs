//! Independent checkers, a brute-force realization oracle and an exhaustive
//! enumerator of rectangular frameworks.
//!
//! Nothing here is shared with the constructive code in `realize`; the
//! checkers count symbols directly from the raw arrays.

use std::fmt;
use std::time::Instant;

use thiserror::Error;

use crate::framework::RegionPartition;
use crate::latin::{LatinSquare, SymbolGrid};
use crate::outline::OutlineLatinSquare;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    Row,
    Column,
    Region,
    Shape,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::Row => "row",
            ViolationKind::Column => "column",
            ViolationKind::Region => "region",
            ViolationKind::Shape => "shape",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Zero-based row, column or region index.
    pub index: usize,
    pub symbol: u32,
    pub details: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: symbol {} {}",
            self.kind,
            self.index + 1,
            self.symbol,
            self.details
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("square has order {square} but the framework has order {framework}")]
pub struct DimensionMismatch {
    pub square: usize,
    pub framework: usize,
}

/// Reports every symbol that is missing from or repeated in a group of
/// cells.
fn check_group(
    kind: ViolationKind,
    index: usize,
    n: usize,
    symbols: impl Iterator<Item = u32>,
    out: &mut Vec<Violation>,
) {
    let mut counts = vec![0usize; n + 1];
    for symbol in symbols {
        if symbol >= 1 && (symbol as usize) <= n {
            counts[symbol as usize] += 1;
        }
    }
    for symbol in 1..=n {
        match counts[symbol] {
            1 => {}
            0 => out.push(Violation {
                kind,
                index,
                symbol: symbol as u32,
                details: "is missing".into(),
            }),
            many => out.push(Violation {
                kind,
                index,
                symbol: symbol as u32,
                details: format!("appears {many} times"),
            }),
        }
    }
}

fn check(
    grid: &SymbolGrid,
    framework: Option<&RegionPartition>,
    columns: bool,
) -> VerificationReport {
    let n = grid.order();
    let cells = grid.cells();
    let mut violations = Vec::new();
    for (idx, &symbol) in cells.iter().enumerate() {
        if symbol == 0 || symbol as usize > n {
            violations.push(Violation {
                kind: ViolationKind::Shape,
                index: idx,
                symbol,
                details: format!("is outside 1..={n}"),
            });
        }
    }
    for r in 0..n {
        check_group(
            ViolationKind::Row,
            r,
            n,
            (0..n).map(|c| cells[r * n + c]),
            &mut violations,
        );
    }
    if columns {
        for c in 0..n {
            check_group(
                ViolationKind::Column,
                c,
                n,
                (0..n).map(|r| cells[r * n + c]),
                &mut violations,
            );
        }
    }
    if let Some(framework) = framework {
        let labels = framework.cell_regions();
        let regions = framework.region_count();
        if regions != n {
            violations.push(Violation {
                kind: ViolationKind::Shape,
                index: 0,
                symbol: 0,
                details: format!("framework has {regions} regions, expected {n}"),
            });
        }
        let mut members = vec![Vec::new(); regions];
        for (idx, &label) in labels.iter().enumerate() {
            members[label].push(cells[idx]);
        }
        for (region, symbols) in members.into_iter().enumerate() {
            check_group(
                ViolationKind::Region,
                region,
                n,
                symbols.into_iter(),
                &mut violations,
            );
        }
    }
    VerificationReport { violations }
}

/// Checks that `grid` is a latin square in which every region of the
/// framework contains each symbol once.
pub fn verify_realization(
    grid: &SymbolGrid,
    framework: &RegionPartition,
) -> Result<VerificationReport, DimensionMismatch> {
    if grid.order() != framework.order() {
        return Err(DimensionMismatch {
            square: grid.order(),
            framework: framework.order(),
        });
    }
    Ok(check(grid, Some(framework), true))
}

/// Checks rows and regions only.
pub fn verify_row_realization(
    grid: &SymbolGrid,
    framework: &RegionPartition,
) -> Result<VerificationReport, DimensionMismatch> {
    if grid.order() != framework.order() {
        return Err(DimensionMismatch {
            square: grid.order(),
            framework: framework.order(),
        });
    }
    Ok(check(grid, Some(framework), false))
}

pub fn verify_latin(grid: &SymbolGrid) -> VerificationReport {
    check(grid, None, true)
}

/// Recounts the three outline conditions from the cell contents.
pub fn outline_conditions_hold(outline: &OutlineLatinSquare) -> bool {
    let p = outline.row_composition().parts();
    let q = outline.column_composition().parts();
    let r = outline.symbol_composition().parts();
    let mut row_totals = vec![vec![0usize; r.len()]; p.len()];
    let mut col_totals = vec![vec![0usize; r.len()]; q.len()];
    for i in 0..p.len() {
        for j in 0..q.len() {
            let cell = outline.cell(i, j);
            if cell.iter().map(|&c| c as usize).sum::<usize>() != p[i] * q[j] {
                return false;
            }
            for (k, &c) in cell.iter().enumerate() {
                row_totals[i][k] += c as usize;
                col_totals[j][k] += c as usize;
            }
        }
    }
    let rows_ok = (0..p.len()).all(|i| (0..r.len()).all(|k| row_totals[i][k] == p[i] * r[k]));
    let cols_ok = (0..q.len()).all(|j| (0..r.len()).all(|k| col_totals[j][k] == q[j] * r[k]));
    rows_ok && cols_ok
}

/// Limits for the brute-force search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub max_assignments: u64,
    pub max_seconds: Option<f64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_assignments: 10_000_000,
            max_seconds: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForceOutcome {
    Realized(LatinSquare),
    /// The search space was exhausted without finding a realization.
    Unrealizable,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteForceError {
    #[error("partition is not a gerechte framework")]
    NotGerechte,
    #[error("order {0} exceeds the 64 symbols the search supports")]
    OrderTooLarge(usize),
    #[error("search budget exhausted after {assignments} assignments")]
    BudgetExceeded { assignments: u64 },
}

struct Search<'a> {
    n: usize,
    regions: &'a [usize],
    cells: Vec<u32>,
    rows: Vec<u64>,
    cols: Vec<u64>,
    boxes: Vec<u64>,
    full: u64,
    assignments: u64,
    budget: SearchBudget,
    started: Instant,
}

impl Search<'_> {
    fn over_budget(&self) -> bool {
        if self.assignments > self.budget.max_assignments {
            return true;
        }
        match self.budget.max_seconds {
            Some(limit) if self.assignments % 4096 == 0 => {
                self.started.elapsed().as_secs_f64() > limit
            }
            _ => false,
        }
    }

    fn candidates(&self, cell: usize) -> u64 {
        let (r, c) = (cell / self.n, cell % self.n);
        self.full & !(self.rows[r] | self.cols[c] | self.boxes[self.regions[cell]])
    }

    /// Ok(true) when solved, Ok(false) when this branch is refuted.
    fn solve(&mut self) -> Result<bool, BruteForceError> {
        // most constrained empty cell
        let mut best: Option<(usize, u64)> = None;
        for cell in 0..self.cells.len() {
            if self.cells[cell] != 0 {
                continue;
            }
            let options = self.candidates(cell);
            if best.is_none_or(|(_, b)| options.count_ones() < b.count_ones()) {
                best = Some((cell, options));
                if options.count_ones() <= 1 {
                    break;
                }
            }
        }
        let Some((cell, mut options)) = best else {
            return Ok(true);
        };
        let (r, c, g) = (cell / self.n, cell % self.n, self.regions[cell]);
        while options != 0 {
            let bit = options & options.wrapping_neg();
            options &= options - 1;
            self.assignments += 1;
            if self.over_budget() {
                return Err(BruteForceError::BudgetExceeded {
                    assignments: self.assignments,
                });
            }
            self.cells[cell] = bit.trailing_zeros() + 1;
            self.rows[r] |= bit;
            self.cols[c] |= bit;
            self.boxes[g] |= bit;
            if self.solve()? {
                return Ok(true);
            }
            self.rows[r] &= !bit;
            self.cols[c] &= !bit;
            self.boxes[g] &= !bit;
            self.cells[cell] = 0;
        }
        Ok(false)
    }
}

/// Complete backtracking search for a realization, choosing the most
/// constrained cell at every step.
pub fn brute_force_realize(
    framework: &RegionPartition,
    budget: SearchBudget,
) -> Result<BruteForceOutcome, BruteForceError> {
    if !framework.is_gerechte() {
        return Err(BruteForceError::NotGerechte);
    }
    let n = framework.order();
    if n > 64 {
        return Err(BruteForceError::OrderTooLarge(n));
    }
    let mut search = Search {
        n,
        regions: framework.cell_regions(),
        cells: vec![0; n * n],
        rows: vec![0; n],
        cols: vec![0; n],
        boxes: vec![0; n],
        full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
        assignments: 0,
        budget,
        started: Instant::now(),
    };
    if !search.solve()? {
        return Ok(BruteForceOutcome::Unrealizable);
    }
    let grid = SymbolGrid::new(n, search.cells).expect("symbols in range");
    let square = LatinSquare::new(grid).expect("search keeps rows and columns latin");
    debug_assert!(verify_realization(square.grid(), framework).unwrap().ok());
    Ok(BruteForceOutcome::Realized(square))
}

/// Largest order enumerated without an explicit override.
pub const ENUMERATION_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("order {n} exceeds the enumeration cap of {cap}; pass the override to proceed")]
    CapExceeded { n: usize, cap: usize },
    #[error("order must be positive")]
    ZeroOrder,
}

/// Every partition of the `n x n` grid into `n` rectangles of area `n`,
/// each exactly once. Rectangles are placed at the first free cell in
/// row-major order, trying heights in increasing order.
pub fn enumerate_rect_frameworks(
    n: usize,
    allow_large: bool,
) -> Result<RectFrameworks, EnumerateError> {
    if n == 0 {
        return Err(EnumerateError::ZeroOrder);
    }
    if n > ENUMERATION_CAP && !allow_large {
        return Err(EnumerateError::CapExceeded {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    let shapes = (1..=n).filter(|h| n % h == 0).map(|h| (h, n / h)).collect();
    Ok(RectFrameworks {
        n,
        shapes,
        owner: vec![usize::MAX; n * n],
        stack: Vec::new(),
        state: EnumState::Fresh,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EnumState {
    Fresh,
    Running,
    Done,
}

#[derive(Debug, Clone)]
struct Frame {
    cell: usize,
    next_shape: usize,
    placed: Option<(usize, usize)>,
}

/// Resumable stream of rectangular frameworks; see
/// [`enumerate_rect_frameworks`].
#[derive(Debug, Clone)]
pub struct RectFrameworks {
    n: usize,
    shapes: Vec<(usize, usize)>,
    owner: Vec<usize>,
    stack: Vec<Frame>,
    state: EnumState,
}

impl RectFrameworks {
    fn fits(&self, cell: usize, (h, w): (usize, usize)) -> bool {
        let (r, c) = (cell / self.n, cell % self.n);
        r + h <= self.n
            && c + w <= self.n
            && (r..r + h).all(|rr| (c..c + w).all(|cc| self.owner[rr * self.n + cc] == usize::MAX))
    }

    fn paint(&mut self, cell: usize, (h, w): (usize, usize), id: usize) {
        let (r, c) = (cell / self.n, cell % self.n);
        for rr in r..r + h {
            for cc in c..c + w {
                self.owner[rr * self.n + cc] = id;
            }
        }
    }
}

impl Iterator for RectFrameworks {
    type Item = RegionPartition;

    fn next(&mut self) -> Option<RegionPartition> {
        match self.state {
            EnumState::Done => return None,
            EnumState::Fresh => {
                self.stack.push(Frame {
                    cell: 0,
                    next_shape: 0,
                    placed: None,
                });
                self.state = EnumState::Running;
            }
            EnumState::Running => {}
        }
        loop {
            let depth = self.stack.len() - 1;
            let frame = self.stack[depth].clone();
            if let Some(shape) = frame.placed {
                self.paint(frame.cell, shape, usize::MAX);
                self.stack[depth].placed = None;
            }
            let choice = (frame.next_shape..self.shapes.len())
                .find(|&i| self.fits(frame.cell, self.shapes[i]));
            let Some(i) = choice else {
                self.stack.pop();
                if self.stack.is_empty() {
                    self.state = EnumState::Done;
                    return None;
                }
                continue;
            };
            let shape = self.shapes[i];
            self.paint(frame.cell, shape, depth);
            self.stack[depth].placed = Some(shape);
            self.stack[depth].next_shape = i + 1;
            match (frame.cell..self.n * self.n).find(|&cell| self.owner[cell] == usize::MAX) {
                Some(cell) => self.stack.push(Frame {
                    cell,
                    next_shape: 0,
                    placed: None,
                }),
                None => return Some(RegionPartition::from_cell_ids(self.n, &self.owner)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::RegionPartition;

    fn four_boxes() -> RegionPartition {
        RegionPartition::parse("4\n1 1 2 2\n1 1 2 2\n3 3 4 4\n3 3 4 4\n").unwrap()
    }

    #[test]
    fn cyclic_square_against_rows() {
        for n in 1..9 {
            let rows: Vec<usize> = (0..n * n).map(|idx| idx / n).collect();
            let f = RegionPartition::from_cell_ids(n, &rows);
            let report = verify_realization(LatinSquare::cyclic(n).grid(), &f).unwrap();
            assert!(report.ok(), "n = {n}");
        }
    }

    #[test]
    fn cyclic_square_against_boxes() {
        let report = verify_realization(LatinSquare::cyclic(4).grid(), &four_boxes()).unwrap();
        assert!(!report.ok());
        assert!(report
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::Region));
        // the top-left box holds 1 2 / 2 3: 2 repeated, 4 missing
        let first: Vec<_> = report.violations.iter().filter(|v| v.index == 0).collect();
        assert_eq!(first.len(), 2);
        assert_eq!(first[0].symbol, 2);
        assert_eq!(first[1].symbol, 4);
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(
            verify_realization(LatinSquare::cyclic(3).grid(), &four_boxes()),
            Err(DimensionMismatch {
                square: 3,
                framework: 4
            })
        );
    }

    #[test]
    fn brute_force_small_cases() {
        let f = four_boxes();
        match brute_force_realize(&f, SearchBudget::default()).unwrap() {
            BruteForceOutcome::Realized(square) => {
                assert!(verify_realization(square.grid(), &f).unwrap().ok())
            }
            other => panic!("expected a realization, got {other:?}"),
        }
        let one = RegionPartition::parse("1\n1\n").unwrap();
        assert_eq!(
            brute_force_realize(&one, SearchBudget::default()).unwrap(),
            BruteForceOutcome::Realized(LatinSquare::cyclic(1))
        );
    }

    #[test]
    fn diagonal_order_two() {
        // Each order-2 latin square has a constant diagonal, so neither
        // realizes the framework whose regions are the two diagonals.
        let f = RegionPartition::parse("2\n1 2\n2 1\n").unwrap();
        for rows in [[[1, 2], [2, 1]], [[2, 1], [1, 2]]] {
            let grid = SymbolGrid::from_rows(&rows.map(|r| r.to_vec())).unwrap();
            assert!(!verify_realization(&grid, &f).unwrap().ok());
        }
        assert_eq!(
            brute_force_realize(&f, SearchBudget::default()).unwrap(),
            BruteForceOutcome::Unrealizable
        );
    }

    #[test]
    fn budget_exceeded_is_distinct() {
        let f = RegionPartition::parse("2\n1 2\n2 1\n").unwrap();
        let budget = SearchBudget {
            max_assignments: 1,
            max_seconds: None,
        };
        assert!(matches!(
            brute_force_realize(&f, budget),
            Err(BruteForceError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumerator_small_orders() {
        assert_eq!(enumerate_rect_frameworks(1, false).unwrap().count(), 1);
        let two: Vec<_> = enumerate_rect_frameworks(2, false).unwrap().collect();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].to_grid_text(), "2\n1 1\n2 2\n");
        assert_eq!(two[1].to_grid_text(), "2\n1 2\n1 2\n");
        assert!(matches!(
            enumerate_rect_frameworks(7, false),
            Err(EnumerateError::CapExceeded { n: 7, cap: 6 })
        ));
        assert_eq!(enumerate_rect_frameworks(7, true).unwrap().count(), 2);
    }

    #[test]
    fn outline_recount() {
        use crate::outline::{amalgamate, Composition};
        let l = LatinSquare::cyclic(6);
        let m = amalgamate(
            &l,
            &Composition::new(vec![1, 2, 3]).unwrap(),
            &Composition::new(vec![2, 2, 2]).unwrap(),
            &Composition::new(vec![1, 1, 2, 2]).unwrap(),
        )
        .unwrap();
        assert!(outline_conditions_hold(&m));
    }
}
