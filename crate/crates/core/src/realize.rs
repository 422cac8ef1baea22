//! Constructive realizations of gerechte frameworks.
//!
//! Every construction ends by building an outline latin square whose
//! amalgamation pattern matches the framework and calling
//! [`realize_outline`]. Every square returned from this module has passed
//! [`verify_realization`].

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::framework::{
    alignment_classes_of, begin_counts, classify, reduce, refine, Classification, FrameworkError,
    Orientation, Rect, RegionPartition,
};
use crate::gcd;
use crate::graph::{equitable_edge_colouring, proper_edge_colouring, BipartiteMultigraph};
use crate::latin::{LatinSquare, RowLatinSquare, SymbolGrid};
use crate::outline::{
    realize_outline, validate_outline, Composition, OutlineError, OutlineLatinSquare,
};
use crate::verify::{
    brute_force_realize, verify_realization, verify_row_realization, BruteForceError,
    BruteForceOutcome, SearchBudget,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Auto,
    Uniform,
    Divides,
    Mixed,
    Columns,
    Tree,
    Brute,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Uniform => "uniform",
            Method::Divides => "divides",
            Method::Mixed => "mixed",
            Method::Columns => "columns",
            Method::Tree => "tree",
            Method::Brute => "brute",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "auto" => Method::Auto,
            "uniform" => Method::Uniform,
            "divides" => Method::Divides,
            "mixed" => Method::Mixed,
            "columns" => Method::Columns,
            "tree" => Method::Tree,
            "brute" => Method::Brute,
            other => return Err(format!("unknown method {other:?}")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("partition is not a gerechte framework")]
    NotGerechte,
    #[error("method {method} does not apply to a framework classified as `{classification}`")]
    ClassificationMismatch {
        method: Method,
        classification: String,
    },
    #[error(
        "no constructive method applies and order {n} exceeds the brute-force limit of {limit}"
    )]
    NoMethod { n: usize, limit: usize },
    #[error("order {n} exceeds the brute-force limit of {limit}")]
    BruteForceOrderLimit { n: usize, limit: usize },
    #[error(transparent)]
    BruteForce(#[from] BruteForceError),
    #[error("exhaustive search found no realization")]
    Unrealizable,
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    Outline(#[from] OutlineError),
    #[error("internal invariant failed: {message}\nframework:\n{framework}")]
    Invariant { message: String, framework: String },
    #[error("{method} produced a square that fails verification: {first}")]
    VerificationFailed { method: Method, first: String },
}

impl RealizeError {
    fn invariant(message: impl Into<String>, framework: &RegionPartition) -> Self {
        RealizeError::Invariant {
            message: message.into(),
            framework: framework.to_grid_text(),
        }
    }
}

fn mismatch(method: Method, classification: &Classification) -> RealizeError {
    RealizeError::ClassificationMismatch {
        method,
        classification: classification.to_string(),
    }
}

fn checked(
    square: LatinSquare,
    framework: &RegionPartition,
    method: Method,
) -> Result<LatinSquare, RealizeError> {
    let report = verify_realization(square.grid(), framework)
        .map_err(|err| RealizeError::invariant(err.to_string(), framework))?;
    match report.violations.first() {
        None => Ok(square),
        Some(first) => Err(RealizeError::VerificationFailed {
            method,
            first: first.to_string(),
        }),
    }
}

fn require_gerechte(framework: &RegionPartition) -> Result<(), RealizeError> {
    if framework.is_gerechte() {
        Ok(())
    } else {
        Err(RealizeError::NotGerechte)
    }
}

/// Realizes a framework of `s x t` boxes of one orientation.
///
/// The `t x s` outline with row parts `s`, column parts `t` and every
/// symbol in every cell amalgamates each box into one cell, so any latin
/// square with that amalgamation puts every symbol in every box.
pub fn realize_uniform(framework: &RegionPartition) -> Result<LatinSquare, RealizeError> {
    require_gerechte(framework)?;
    let classification = classify(framework);
    let (s, t) = classification
        .uniform
        .ok_or_else(|| mismatch(Method::Uniform, &classification))?;
    let n = s * t;
    let counts = vec![1u32; t * s * n];
    let outline = OutlineLatinSquare::new(
        Composition::uniform(s, t),
        Composition::uniform(t, s),
        Composition::units(n),
        counts,
    )?;
    checked(realize_outline(&outline)?, framework, Method::Uniform)
}

/// The square that realizes every framework of `s x cs` and `cs x s`
/// regions, independent of their layout.
///
/// On the `t x t` array (`t = cs`) cell `(i, j)` gets group `(i + j) mod c`;
/// every `1 x c` or `c x 1` run then holds each group once. Group `g` stands
/// for the `s^2` symbols `g s^2 .. (g + 1) s^2`.
pub fn divides_square(s: usize, c: usize) -> Result<LatinSquare, RealizeError> {
    if s == 0 || c == 0 {
        return Err(FrameworkError::InvalidParameters("s and c must be positive".into()).into());
    }
    let t = c * s;
    let n = s * t;
    let block = s * s;
    let mut counts = vec![0u32; t * t * n];
    for i in 0..t {
        for j in 0..t {
            let group = (i + j) % c;
            let cell = (i * t + j) * n;
            counts[cell + group * block..cell + (group + 1) * block].fill(1);
        }
    }
    let outline = OutlineLatinSquare::new(
        Composition::uniform(s, t),
        Composition::uniform(s, t),
        Composition::units(n),
        counts,
    )?;
    Ok(realize_outline(&outline)?)
}

/// Realizes a framework of `s x t` and `t x s` regions with `s | t`.
pub fn realize_divides(framework: &RegionPartition) -> Result<LatinSquare, RealizeError> {
    require_gerechte(framework)?;
    let classification = classify(framework);
    let (s, t) = classification
        .mixed
        .filter(|(s, t)| t % s == 0)
        .ok_or_else(|| mismatch(Method::Divides, &classification))?;
    checked(divides_square(s, t / s)?, framework, Method::Divides)
}

/// The intermediate array of the mixed construction: a fill of the reduced
/// framework `F/k` with `s't'` symbols in which every symbol appears `k`
/// times in each row and column and once in each reduced region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedFill {
    pub side: usize,
    pub k: usize,
    /// `s't'`.
    pub symbol_count: usize,
    /// After the horizontal fill, before the vertical rotations.
    pub canonical: Vec<u32>,
    /// Final symbols `1..=s't'`, row-major.
    pub cells: Vec<u32>,
    pub reduced: RegionPartition,
}

impl ReducedFill {
    /// Checks the three balance properties, returning a description of the
    /// first failure.
    pub fn check(&self) -> Result<(), String> {
        let (side, m) = (self.side, self.symbol_count);
        for line in 0..side {
            let mut by_row = vec![0usize; m + 1];
            let mut by_col = vec![0usize; m + 1];
            for x in 0..side {
                by_row[self.cells[line * side + x] as usize] += 1;
                by_col[self.cells[x * side + line] as usize] += 1;
            }
            if let Some(symbol) = (1..=m).find(|&s| by_row[s] != self.k) {
                return Err(format!(
                    "symbol {symbol} appears {} times in reduced row {line}",
                    by_row[symbol]
                ));
            }
            if let Some(symbol) = (1..=m).find(|&s| by_col[s] != self.k) {
                return Err(format!(
                    "symbol {symbol} appears {} times in reduced column {line}",
                    by_col[symbol]
                ));
            }
        }
        for (region, cells) in self.reduced.region_cells().iter().enumerate() {
            let mut seen = vec![false; m + 1];
            for &(r, c) in cells {
                let symbol = self.cells[r * side + c] as usize;
                if std::mem::replace(&mut seen[symbol], true) {
                    return Err(format!(
                        "symbol {symbol} repeats in reduced region {region}"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Builds the reduced fill for a framework of `s x t` and `t x s` regions.
///
/// Regions of each orientation are handled separately. For `a x b` regions
/// (`s' x t'` first, then `t' x s'`), the leftmost region of every
/// horizontal alignment class gets block `r` (symbols `rb+1 ..= (r+1)b`) in
/// its row `r`; the member at position `m` of the class gets the same slices
/// moved down by `m` rows cyclically. Then each vertical alignment class is
/// cut, top to bottom, into groups of `b` regions, and inside a group the
/// `j`-th slice holding a given block is rotated left by `j`.
pub fn reduced_fill(framework: &RegionPartition) -> Result<ReducedFill, RealizeError> {
    require_gerechte(framework)?;
    let classification = classify(framework);
    let (s, t) = classification
        .mixed
        .ok_or_else(|| mismatch(Method::Mixed, &classification))?;
    // Fails on a partition that is not a valid tiling by these shapes.
    begin_counts(framework, s, t)?;
    let k = gcd(s, t);
    let (sp, tp) = (s / k, t / k);
    let reduced = reduce(framework, k)?;
    let rects = reduced.rects()?;
    let side = reduced.order();
    let mut cells = vec![0u32; side * side];

    let mut passes = vec![(sp, tp)];
    if sp != tp {
        passes.push((tp, sp));
    }
    for &(a, b) in &passes {
        canonical_fill(&rects, a, b, side, &mut cells)
            .map_err(|message| RealizeError::invariant(message, framework))?;
    }
    if cells.contains(&0) {
        return Err(RealizeError::invariant(
            "reduced fill left a cell empty",
            framework,
        ));
    }
    let canonical = cells.clone();
    for &(a, b) in &passes {
        vertical_fix(&rects, a, b, side, &mut cells)
            .map_err(|message| RealizeError::invariant(message, framework))?;
    }
    let fill = ReducedFill {
        side,
        k,
        symbol_count: sp * tp,
        canonical,
        cells,
        reduced,
    };
    fill.check()
        .map_err(|message| RealizeError::invariant(message, framework))?;
    Ok(fill)
}

fn canonical_fill(
    rects: &[Rect],
    a: usize,
    b: usize,
    side: usize,
    cells: &mut [u32],
) -> Result<(), String> {
    let classes = alignment_classes_of(rects, |r| r.height == a && r.width == b);
    for class in classes
        .iter()
        .filter(|c| c.orientation == Orientation::Horizontal)
    {
        if class.members.len() % a != 0 {
            return Err(format!(
                "horizontal class at row {} has {} members, not a multiple of {a}",
                class.start,
                class.members.len()
            ));
        }
        for (position, &region) in class.members.iter().enumerate() {
            let rect = rects[region];
            for row in 0..a {
                let block = (row + a - position % a) % a;
                for x in 0..b {
                    cells[(rect.top + row) * side + rect.left + x] = (block * b + x + 1) as u32;
                }
            }
        }
    }
    Ok(())
}

fn vertical_fix(
    rects: &[Rect],
    a: usize,
    b: usize,
    side: usize,
    cells: &mut [u32],
) -> Result<(), String> {
    let classes = alignment_classes_of(rects, |r| r.height == a && r.width == b);
    for class in classes
        .iter()
        .filter(|c| c.orientation == Orientation::Vertical)
    {
        if class.members.len() % b != 0 {
            return Err(format!(
                "vertical class at column {} has {} members, not a multiple of {b}",
                class.start,
                class.members.len()
            ));
        }
        for group in class.members.chunks(b) {
            for (position, &region) in group.iter().enumerate() {
                let rect = rects[region];
                // every slice of the region holds one whole block; rotating
                // each slice by the region's position treats every block alike
                for row in rect.top..rect.bottom() {
                    let start = row * side + rect.left;
                    cells[start..start + b].rotate_left(position);
                }
            }
        }
    }
    Ok(())
}

/// Realizes any framework of `s x t` and `t x s` regions via the reduced
/// fill, replacing each of its symbols by `k^2` symbols and realizing the
/// resulting outline with `k x k` blocks.
pub fn realize_mixed(framework: &RegionPartition) -> Result<LatinSquare, RealizeError> {
    let fill = reduced_fill(framework)?;
    let (side, k, m) = (fill.side, fill.k, fill.symbol_count);
    let n = framework.order();
    let block = k * k;
    let mut counts = vec![0u32; side * side * n];
    for (cell, &symbol) in fill.cells.iter().enumerate() {
        let start = cell * n + (symbol as usize - 1) * block;
        counts[start..start + block].fill(1);
    }
    debug_assert_eq!(m * block, n);
    let outline = OutlineLatinSquare::new(
        Composition::uniform(k, side),
        Composition::uniform(k, side),
        Composition::units(n),
        counts,
    )?;
    checked(realize_outline(&outline)?, framework, Method::Mixed)
}

/// A row-latin square in which every region of the framework holds each
/// symbol once. Regions need not be rectangles.
///
/// The rows x regions multigraph (one edge per cell) is `n`-regular; a proper
/// `n`-colouring places symbol `c + 1` in the leftmost unfilled cell of the
/// row and region of each edge coloured `c`.
pub fn row_realization(framework: &RegionPartition) -> Result<RowLatinSquare, RealizeError> {
    require_gerechte(framework)?;
    let n = framework.order();
    let regions = framework.cell_regions();
    let mut graph = BipartiteMultigraph::new(n, n);
    for (cell, &region) in regions.iter().enumerate() {
        graph.add_edge(cell / n, region);
    }
    let colouring = proper_edge_colouring(&graph);
    // edges are in row-major cell order, so the i-th edge of a (row, region)
    // pair is paired with the i-th cell of that pair from the left
    let cells: Vec<u32> = colouring.assignment.iter().map(|&c| c as u32 + 1).collect();
    let grid = SymbolGrid::new(n, cells)
        .map_err(|err| RealizeError::invariant(err.to_string(), framework))?;
    let square = RowLatinSquare::new(grid)
        .map_err(|err| RealizeError::invariant(err.to_string(), framework))?;
    let report = verify_row_realization(square.grid(), framework)
        .map_err(|err| RealizeError::invariant(err.to_string(), framework))?;
    if let Some(first) = report.violations.first() {
        return Err(RealizeError::invariant(
            format!("row realization: {first}"),
            framework,
        ));
    }
    Ok(square)
}

/// The outline with unit rows and symbols whose column `j` merges the
/// `j`-th strip of `widths` columns.
fn strip_outline(grid: &SymbolGrid, widths: &[usize]) -> Result<OutlineLatinSquare, OutlineError> {
    let n = grid.order();
    let strips = widths.len();
    let mut counts = vec![0u32; n * strips * n];
    for row in 0..n {
        let mut col = 0;
        for (strip, &width) in widths.iter().enumerate() {
            for _ in 0..width {
                let symbol = grid.get(row, col) as usize - 1;
                counts[(row * strips + strip) * n + symbol] += 1;
                col += 1;
            }
        }
    }
    OutlineLatinSquare::new(
        Composition::units(n),
        Composition::new(widths.to_vec())?,
        Composition::units(n),
        counts,
    )
}

/// The row-realization and the column-amalgamated outline used by
/// [`realize_columns`].
pub fn columns_outline(
    framework: &RegionPartition,
) -> Result<(RowLatinSquare, OutlineLatinSquare), RealizeError> {
    require_gerechte(framework)?;
    let classification = classify(framework);
    if !classification.columns {
        return Err(mismatch(Method::Columns, &classification));
    }
    let rects = framework.rects()?;
    let n = framework.order();
    let mut widths = Vec::new();
    let mut col = 0;
    while col < n {
        let width = rects[framework.region_at(0, col)].width;
        widths.push(width);
        col += width;
    }
    let square = row_realization(framework)?;
    let outline = strip_outline(square.grid(), &widths)?;
    validate_outline(&outline)
        .map_err(|v| RealizeError::invariant(format!("column outline: {v}"), framework))?;
    Ok((square, outline))
}

/// Realizes a framework whose regions are arranged in columns.
pub fn realize_columns(framework: &RegionPartition) -> Result<LatinSquare, RealizeError> {
    let (_, outline) = columns_outline(framework)?;
    checked(realize_outline(&outline)?, framework, Method::Columns)
}

/// One rearrangement step of the tree construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStep {
    /// Representative region whose top set was rearranged.
    pub representative: usize,
    pub chunk_widths: Vec<usize>,
    /// gcd of the chunk widths.
    pub d: usize,
    /// Number of width-`d` chunks.
    pub q: usize,
    /// Copies of each symbol in the top set.
    pub r: usize,
    /// The square after this step.
    pub square: RowLatinSquare,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeTrace {
    pub initial: RowLatinSquare,
    pub steps: Vec<TreeStep>,
    /// Widths of the column strips of the refined framework.
    pub strip_widths: Vec<usize>,
    pub outline: OutlineLatinSquare,
}

/// Realizes a framework arranged in a tree structure.
pub fn realize_tree(framework: &RegionPartition) -> Result<LatinSquare, RealizeError> {
    realize_tree_traced(framework).map(|(square, _)| square)
}

/// [`realize_tree`], also returning every intermediate square.
///
/// Starting from a row-realization, the vertical alignment classes are
/// visited through their bottom-most members in order of begin row. For each
/// representative, its top set (its columns, from the top edge down to its
/// last row) is cut into chunks by the regions directly below it. With `d`
/// the gcd of the chunk widths and `q = width / d`, an equitable
/// `q`-colouring of the rows x symbols graph of the top set decides which
/// width-`d` chunk each symbol of each row moves to. Symbols only move
/// within a row of the top set, and that row segment lies inside a single
/// region, so every step keeps a row-realization. The result is amalgamated
/// over the column strips of the refined framework and realized.
pub fn realize_tree_traced(
    framework: &RegionPartition,
) -> Result<(LatinSquare, TreeTrace), RealizeError> {
    require_gerechte(framework)?;
    let classification = classify(framework);
    if !classification.tree {
        return Err(mismatch(Method::Tree, &classification));
    }
    let n = framework.order();
    let rects = framework.rects()?;
    let initial = row_realization(framework)?;
    let mut cells = initial.grid().cells().to_vec();

    let mut representatives: Vec<usize> = alignment_classes_of(&rects, |_| true)
        .into_iter()
        .filter(|c| c.orientation == Orientation::Vertical)
        .map(|c| *c.members.last().expect("classes are non-empty"))
        .collect();
    representatives.sort_by_key(|&region| (rects[region].top, rects[region].left));

    let mut steps = Vec::with_capacity(representatives.len());
    for &representative in &representatives {
        let rep = rects[representative];
        let rows = rep.bottom();
        let width = rep.width;
        let mut below: Vec<Rect> = rects
            .iter()
            .filter(|r| r.top == rep.bottom() && r.left >= rep.left && r.right() <= rep.right())
            .copied()
            .collect();
        below.sort_by_key(|r| r.left);
        let chunk_widths: Vec<usize> = if rep.bottom() == n {
            vec![width]
        } else {
            below.iter().map(|r| r.width).collect()
        };
        if chunk_widths.iter().sum::<usize>() != width {
            return Err(RealizeError::invariant(
                format!("regions directly below region {representative} do not span its columns"),
                framework,
            ));
        }
        let d = chunk_widths.iter().copied().fold(0, gcd);
        let q = width / d;
        if (rows * width) % n != 0 {
            return Err(RealizeError::invariant(
                format!(
                    "top set of region {representative} has {} cells",
                    rows * width
                ),
                framework,
            ));
        }
        let r = rows * width / n;
        // the top set must already hold every symbol r times
        let mut tally = vec![0usize; n + 1];
        for row in 0..rows {
            for col in rep.left..rep.right() {
                tally[cells[row * n + col] as usize] += 1;
            }
        }
        if let Some(symbol) = (1..=n).find(|&s| tally[s] != r) {
            return Err(RealizeError::invariant(
                format!("top set of region {representative} holds symbol {symbol} {} times, expected {r}", tally[symbol]),
                framework,
            ));
        }
        if q > 1 {
            let mut graph = BipartiteMultigraph::new(rows, n);
            for row in 0..rows {
                for col in rep.left..rep.right() {
                    graph.add_edge(row, cells[row * n + col] as usize - 1);
                }
            }
            let colouring = equitable_edge_colouring(&graph, q).map_err(|err| {
                RealizeError::invariant(format!("top set colouring: {err}"), framework)
            })?;
            let mut next = vec![0usize; q];
            for (edge, &(row, symbol)) in graph.edges().iter().enumerate() {
                if edge % width == 0 {
                    next.iter_mut().for_each(|slot| *slot = 0);
                }
                let chunk = colouring.assignment[edge];
                let col = rep.left + chunk * d + next[chunk];
                next[chunk] += 1;
                cells[row * n + col] = symbol as u32 + 1;
            }
        }
        let grid = SymbolGrid::new(n, cells.clone()).expect("symbols stay in range");
        let square = RowLatinSquare::new(grid).map_err(|err| {
            RealizeError::invariant(format!("after region {representative}: {err}"), framework)
        })?;
        let report = verify_row_realization(square.grid(), framework)
            .map_err(|err| RealizeError::invariant(err.to_string(), framework))?;
        if let Some(first) = report.violations.first() {
            return Err(RealizeError::invariant(
                format!("after region {representative} the square is no longer a row-realization: {first}"),
                framework,
            ));
        }
        let mut left = rep.left;
        for &chunk in &chunk_widths {
            let per_symbol = rows * chunk / n;
            let mut tally = vec![0usize; n + 1];
            for row in 0..rows {
                for col in left..left + chunk {
                    tally[cells[row * n + col] as usize] += 1;
                }
            }
            if let Some(symbol) = (1..=n).find(|&s| tally[s] != per_symbol) {
                return Err(RealizeError::invariant(
                    format!("chunk at column {left} under region {representative} holds symbol {symbol} {} times", tally[symbol]),
                    framework,
                ));
            }
            left += chunk;
        }
        steps.push(TreeStep {
            representative,
            chunk_widths,
            d,
            q,
            r,
            square,
        });
    }

    let refined = refine(framework)?;
    let mut strip_widths = Vec::new();
    let refined = &refined;
    let column = |c: usize| (0..n).map(move |row| refined.region_at(row, c));
    let mut start = 0;
    for col in 1..=n {
        if col == n || !column(col).eq(column(start)) {
            strip_widths.push(col - start);
            start = col;
        }
    }
    let grid = SymbolGrid::new(n, cells).expect("symbols stay in range");
    let outline = strip_outline(&grid, &strip_widths)?;
    validate_outline(&outline)
        .map_err(|v| RealizeError::invariant(format!("refined outline: {v}"), framework))?;
    let square = checked(realize_outline(&outline)?, framework, Method::Tree)?;
    Ok((
        square,
        TreeTrace {
            initial,
            steps,
            strip_widths,
            outline,
        },
    ))
}

/// Dispatcher settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizeOptions {
    pub budget: SearchBudget,
    /// Largest order handed to the brute-force search.
    pub brute_max_order: usize,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions {
            budget: SearchBudget::default(),
            brute_max_order: 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub square: LatinSquare,
    /// The method that produced the square; never [`Method::Auto`].
    pub method: Method,
}

/// Realizes a framework with the requested method. `Auto` tries uniform,
/// mixed, columns and tree constructions in that order, whichever apply, and
/// falls back to brute force for small orders.
pub fn realize(
    framework: &RegionPartition,
    method: Method,
    options: &RealizeOptions,
) -> Result<Realization, RealizeError> {
    require_gerechte(framework)?;
    let square = match method {
        Method::Auto => return realize_auto(framework, options),
        Method::Uniform => realize_uniform(framework)?,
        Method::Divides => realize_divides(framework)?,
        Method::Mixed => realize_mixed(framework)?,
        Method::Columns => realize_columns(framework)?,
        Method::Tree => realize_tree(framework)?,
        Method::Brute => realize_brute(framework, options)?,
    };
    Ok(Realization { square, method })
}

fn realize_brute(
    framework: &RegionPartition,
    options: &RealizeOptions,
) -> Result<LatinSquare, RealizeError> {
    let n = framework.order();
    if n > options.brute_max_order {
        return Err(RealizeError::BruteForceOrderLimit {
            n,
            limit: options.brute_max_order,
        });
    }
    match brute_force_realize(framework, options.budget)? {
        BruteForceOutcome::Realized(square) => checked(square, framework, Method::Brute),
        BruteForceOutcome::Unrealizable => Err(RealizeError::Unrealizable),
    }
}

fn realize_auto(
    framework: &RegionPartition,
    options: &RealizeOptions,
) -> Result<Realization, RealizeError> {
    let classification = classify(framework);
    let mut candidates = Vec::new();
    if classification.uniform.is_some() {
        candidates.push(Method::Uniform);
    }
    if classification.mixed.is_some() {
        candidates.push(Method::Mixed);
    }
    if classification.columns {
        candidates.push(Method::Columns);
    }
    if classification.tree {
        candidates.push(Method::Tree);
    }
    let mut last_error = None;
    for method in candidates {
        match realize(framework, method, options) {
            Ok(found) => return Ok(found),
            Err(err) => last_error = Some(err),
        }
    }
    let n = framework.order();
    if n <= options.brute_max_order {
        return realize(framework, Method::Brute, options);
    }
    Err(last_error.unwrap_or(RealizeError::NoMethod {
        n,
        limit: options.brute_max_order,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{generate, GenerateRequest};

    fn parse(text: &str) -> RegionPartition {
        RegionPartition::parse(text).unwrap()
    }

    #[test]
    fn uniform_small_cases() {
        let one = parse("1\n1\n");
        assert_eq!(realize_uniform(&one).unwrap(), LatinSquare::cyclic(1));
        let boxes = parse("rects 4\n1 1 2 2\n1 3 2 2\n3 1 2 2\n3 3 2 2\n");
        let l = realize_uniform(&boxes).unwrap();
        assert!(verify_realization(l.grid(), &boxes).unwrap().ok());
    }

    #[test]
    fn uniform_rejects_other_classes() {
        let tree = generate(GenerateRequest::Tree { n: 12 }, 1).unwrap();
        if classify(&tree).uniform.is_none() {
            assert!(matches!(
                realize_uniform(&tree),
                Err(RealizeError::ClassificationMismatch {
                    method: Method::Uniform,
                    ..
                })
            ));
        }
    }

    #[test]
    fn row_realization_of_rows_and_columns() {
        let rows = parse("3\n1 1 1\n2 2 2\n3 3 3\n");
        assert!(row_realization(&rows).is_ok());
        let cols = parse("2\n1 2\n1 2\n");
        let w = row_realization(&cols).unwrap();
        assert!(LatinSquare::new(w.grid().clone()).is_ok());
    }

    #[test]
    fn row_realization_handles_non_rectangular() {
        let f = parse("3\n1 1 2\n1 2 3\n2 3 3\n");
        let w = row_realization(&f).unwrap();
        assert!(verify_row_realization(w.grid(), &f).unwrap().ok());
    }

    #[test]
    fn equal_sides_reduce_to_one_symbol() {
        let f = generate(
            GenerateRequest::Uniform {
                height: 3,
                width: 3,
            },
            0,
        )
        .unwrap();
        let fill = reduced_fill(&f).unwrap();
        assert_eq!(fill.symbol_count, 1);
        assert!(fill.cells.iter().all(|&s| s == 1));
        assert!(realize_mixed(&f).is_ok());
    }

    #[test]
    fn vertical_rotation_keeps_row_multisets() {
        let f = generate(GenerateRequest::Mixed { s: 3, t: 4 }, 11).unwrap();
        let fill = reduced_fill(&f).unwrap();
        for row in 0..fill.side {
            let mut before = fill.canonical[row * fill.side..(row + 1) * fill.side].to_vec();
            let mut after = fill.cells[row * fill.side..(row + 1) * fill.side].to_vec();
            before.sort();
            after.sort();
            assert_eq!(before, after);
        }
    }

    #[test]
    fn brute_respects_order_limit() {
        let f = generate(
            GenerateRequest::Uniform {
                height: 2,
                width: 5,
            },
            0,
        )
        .unwrap();
        assert!(matches!(
            realize(&f, Method::Brute, &RealizeOptions::default()),
            Err(RealizeError::BruteForceOrderLimit { n: 10, limit: 9 })
        ));
    }

    #[test]
    fn auto_falls_back_to_brute() {
        let bricks = parse(
            "6\n1 1 1 2 2 2\n1 1 1 2 2 2\n3 3 4 4 5 5\n3 3 4 4 5 5\n3 3 4 4 5 5\n6 6 6 6 6 6\n",
        );
        let found = realize(&bricks, Method::Auto, &RealizeOptions::default()).unwrap();
        assert_eq!(found.method, Method::Brute);
        let options = RealizeOptions {
            brute_max_order: 4,
            ..RealizeOptions::default()
        };
        assert!(matches!(
            realize(&bricks, Method::Auto, &options),
            Err(RealizeError::NoMethod { n: 6, limit: 4 })
        ));
    }

    #[test]
    fn method_names_round_trip() {
        for method in [
            Method::Auto,
            Method::Uniform,
            Method::Divides,
            Method::Mixed,
            Method::Columns,
            Method::Tree,
            Method::Brute,
        ] {
            assert_eq!(method.name().parse::<Method>().unwrap(), method);
        }
        assert!("nope".parse::<Method>().is_err());
    }
}
