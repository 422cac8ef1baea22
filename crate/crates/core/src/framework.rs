//! Region partitions of a square grid: gerechte frameworks and the reduced
//! and refined partitions derived from them.
//!
//! Rows, columns and region indices are zero-based throughout the API. The
//! file formats use one-based labels and coordinates.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gcd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: label {label} is outside 1..={max}")]
    LabelOutOfRange { line: usize, label: u64, max: usize },
    #[error("labels must be 1..={max} with none missing, but label {missing} never occurs")]
    MissingLabel { missing: usize, max: usize },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("line {line}: expected {expected} labels, found {found}")]
    LabelCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: rectangle leaves the {n}x{n} grid")]
    RectOutOfBounds { line: usize, n: usize },
    #[error("line {line}: rectangle overlaps cell ({row}, {col}) already covered")]
    RectOverlap { line: usize, row: usize, col: usize },
    #[error("cell ({row}, {col}) is not covered by any rectangle")]
    RectGap { row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("partition is not a gerechte framework")]
    NotGerechte,
    #[error("region {region} is not a rectangle")]
    NotRectangular { region: usize },
    #[error("{k} does not divide the {dimension} of region {region}")]
    NotDivisible {
        k: usize,
        region: usize,
        dimension: &'static str,
    },
    #[error("regions are not all {s}x{t} or {t}x{s} rectangles")]
    ShapeMismatch { s: usize, t: usize },
    #[error("framework is not arranged in a tree structure")]
    NotTree,
    #[error(
        "{count} {shape} regions begin in {axis} {index}, which is not a multiple of {modulus}"
    )]
    BeginCountNotDivisible {
        axis: &'static str,
        index: usize,
        shape: &'static str,
        count: usize,
        modulus: usize,
    },
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
    #[error("no framework found for the requested class within the search limit")]
    GenerationExhausted,
}

/// An axis-aligned rectangle of cells, zero-based, with exclusive ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub top: usize,
    pub left: usize,
    pub height: usize,
    pub width: usize,
}

impl Rect {
    pub fn new(top: usize, left: usize, height: usize, width: usize) -> Self {
        Rect {
            top,
            left,
            height,
            width,
        }
    }

    pub fn bottom(&self) -> usize {
        self.top + self.height
    }

    pub fn right(&self) -> usize {
        self.left + self.width
    }

    pub fn area(&self) -> usize {
        self.height * self.width
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        (self.top..self.bottom()).contains(&row) && (self.left..self.right()).contains(&col)
    }

    fn shares_columns(&self, other: &Rect) -> bool {
        self.left < other.right() && other.left < self.right()
    }
}

/// A labelled partition of an `n x n` grid.
///
/// Labels are canonical: region `0` is the region of cell `(0, 0)`, and the
/// remaining regions are numbered in order of first appearance in a
/// row-major scan.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegionPartition {
    n: usize,
    labels: Vec<usize>,
    regions: usize,
}

impl RegionPartition {
    /// Builds a partition from arbitrary region ids, one per cell in
    /// row-major order. Ids are relabelled canonically.
    pub fn from_cell_ids<T: Ord + Copy>(n: usize, ids: &[T]) -> Self {
        assert!(n > 0, "partition must have at least one cell");
        assert_eq!(ids.len(), n * n, "one id per cell required");
        let mut map = BTreeMap::new();
        let labels = ids
            .iter()
            .map(|id| {
                let next = map.len();
                *map.entry(*id).or_insert(next)
            })
            .collect();
        RegionPartition {
            n,
            labels,
            regions: map.len(),
        }
    }

    /// Builds a partition from rectangles that tile the grid exactly.
    pub fn from_rects(n: usize, rects: &[Rect]) -> Result<Self, ParseError> {
        let mut ids = vec![usize::MAX; n * n];
        for (idx, rect) in rects.iter().enumerate() {
            if rect.height == 0 || rect.width == 0 || rect.bottom() > n || rect.right() > n {
                return Err(ParseError::RectOutOfBounds { line: idx + 2, n });
            }
            for r in rect.top..rect.bottom() {
                for c in rect.left..rect.right() {
                    if ids[r * n + c] != usize::MAX {
                        return Err(ParseError::RectOverlap {
                            line: idx + 2,
                            row: r + 1,
                            col: c + 1,
                        });
                    }
                    ids[r * n + c] = idx;
                }
            }
        }
        if let Some(pos) = ids.iter().position(|&id| id == usize::MAX) {
            return Err(ParseError::RectGap {
                row: pos / n + 1,
                col: pos % n + 1,
            });
        }
        Ok(RegionPartition::from_cell_ids(n, &ids))
    }

    /// Side length of the grid.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn region_count(&self) -> usize {
        self.regions
    }

    /// Region index of a cell.
    pub fn region_at(&self, row: usize, col: usize) -> usize {
        self.labels[row * self.n + col]
    }

    /// Region indices in row-major cell order.
    pub fn cell_regions(&self) -> &[usize] {
        &self.labels
    }

    pub fn region_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.regions];
        for &label in &self.labels {
            sizes[label] += 1;
        }
        sizes
    }

    /// Cells of each region, row-major within a region.
    pub fn region_cells(&self) -> Vec<Vec<(usize, usize)>> {
        let mut cells = vec![Vec::new(); self.regions];
        for (idx, &label) in self.labels.iter().enumerate() {
            cells[label].push((idx / self.n, idx % self.n));
        }
        cells
    }

    /// `n` regions of `n` cells each.
    pub fn is_gerechte(&self) -> bool {
        self.regions == self.n && self.region_sizes().iter().all(|&size| size == self.n)
    }

    pub fn is_rectangular(&self) -> bool {
        self.rects().is_ok()
    }

    /// The bounding box of each region.
    pub fn bounding_boxes(&self) -> Vec<Rect> {
        let mut bounds = vec![(usize::MAX, usize::MAX, 0, 0); self.regions];
        for (idx, &label) in self.labels.iter().enumerate() {
            let (r, c) = (idx / self.n, idx % self.n);
            let b = &mut bounds[label];
            b.0 = b.0.min(r);
            b.1 = b.1.min(c);
            b.2 = b.2.max(r + 1);
            b.3 = b.3.max(c + 1);
        }
        bounds
            .into_iter()
            .map(|(top, left, bottom, right)| Rect::new(top, left, bottom - top, right - left))
            .collect()
    }

    /// Region rectangles, or the first region that is not its own bounding
    /// box.
    pub fn rects(&self) -> Result<Vec<Rect>, FrameworkError> {
        let boxes = self.bounding_boxes();
        let sizes = self.region_sizes();
        for (region, rect) in boxes.iter().enumerate() {
            if rect.area() != sizes[region] {
                return Err(FrameworkError::NotRectangular { region });
            }
        }
        Ok(boxes)
    }

    pub fn transpose(&self) -> RegionPartition {
        let n = self.n;
        let ids: Vec<usize> = (0..n * n)
            .map(|idx| self.labels[(idx % n) * n + idx / n])
            .collect();
        RegionPartition::from_cell_ids(n, &ids)
    }

    /// Parses either file format. A first line of the form `rects <n>`
    /// selects the rectangle-list format; otherwise the label grid format is
    /// used. Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, line)| (idx + 1, line))
            .filter(|(_, line)| {
                let trimmed = line.trim();
                !trimmed.is_empty() && !trimmed.starts_with('#')
            });
        let Some((header_line, header)) = lines.next() else {
            return Err(ParseError::Syntax {
                line: 1,
                column: 1,
                message: "empty input".into(),
            });
        };
        let header_tokens = tokenize(header_line, header)?;
        match header_tokens.as_slice() {
            [(_, Token::Word(word)), (col, Token::Int(n))] if word == "rects" => {
                let n = positive_order(header_line, *col, *n)?;
                parse_rect_list(n, lines)
            }
            [(col, Token::Int(n))] => {
                let n = positive_order(header_line, *col, *n)?;
                parse_label_grid(n, lines)
            }
            _ => Err(ParseError::Syntax {
                line: header_line,
                column: 1,
                message: "expected `<n>` or `rects <n>`".into(),
            }),
        }
    }

    /// Canonical grid-format serialization.
    pub fn to_grid_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in 0..self.n {
            let line: Vec<String> = self.labels[row * self.n..(row + 1) * self.n]
                .iter()
                .map(|label| (label + 1).to_string())
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Rectangle-list serialization in canonical region order.
    pub fn to_rect_text(&self) -> Result<String, FrameworkError> {
        let rects = self.rects()?;
        let mut out = format!("rects {}\n", self.n);
        for rect in rects {
            out.push_str(&format!(
                "{} {} {} {}\n",
                rect.top + 1,
                rect.left + 1,
                rect.height,
                rect.width
            ));
        }
        Ok(out)
    }
}

impl fmt::Display for RegionPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_grid_text())
    }
}

enum Token {
    Int(u64),
    Word(String),
}

fn tokenize(line_no: usize, line: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut tokens = Vec::new();
    let mut search_from = 0;
    for raw in line.split_whitespace() {
        let offset = line[search_from..].find(raw).unwrap_or(0) + search_from;
        search_from = offset + raw.len();
        let token = if raw.chars().all(|c| c.is_ascii_digit()) {
            Token::Int(raw.parse().map_err(|_| ParseError::Syntax {
                line: line_no,
                column: offset + 1,
                message: format!("integer {raw} is too large"),
            })?)
        } else if raw.chars().all(|c| c.is_ascii_alphabetic()) {
            Token::Word(raw.to_string())
        } else {
            return Err(ParseError::Syntax {
                line: line_no,
                column: offset + 1,
                message: format!("unexpected token {raw:?}"),
            });
        };
        tokens.push((offset + 1, token));
    }
    Ok(tokens)
}

fn int_tokens(line_no: usize, line: &str) -> Result<Vec<(usize, u64)>, ParseError> {
    tokenize(line_no, line)?
        .into_iter()
        .map(|(column, token)| match token {
            Token::Int(value) => Ok((column, value)),
            Token::Word(word) => Err(ParseError::Syntax {
                line: line_no,
                column,
                message: format!("expected an integer, found {word:?}"),
            }),
        })
        .collect()
}

fn positive_order(line: usize, column: usize, n: u64) -> Result<usize, ParseError> {
    if n == 0 || n > 4096 {
        return Err(ParseError::Syntax {
            line,
            column,
            message: format!("order {n} is outside 1..=4096"),
        });
    }
    Ok(n as usize)
}

fn parse_label_grid<'a>(
    n: usize,
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<RegionPartition, ParseError> {
    // A general partition may have up to n*n regions (refined and reduced
    // partitions have more than n).
    let max = n * n;
    let mut labels = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (line_no, line) in lines {
        rows += 1;
        if rows > n {
            return Err(ParseError::RowCount {
                expected: n,
                found: rows,
            });
        }
        let values = int_tokens(line_no, line)?;
        if values.len() != n {
            return Err(ParseError::LabelCount {
                line: line_no,
                expected: n,
                found: values.len(),
            });
        }
        for (_, value) in values {
            if value == 0 || value > max as u64 {
                return Err(ParseError::LabelOutOfRange {
                    line: line_no,
                    label: value,
                    max,
                });
            }
            labels.push(value as usize);
        }
    }
    if rows != n {
        return Err(ParseError::RowCount {
            expected: n,
            found: rows,
        });
    }
    let top = *labels.iter().max().unwrap_or(&0);
    let mut present = vec![false; top + 1];
    for &label in &labels {
        present[label] = true;
    }
    if let Some(missing) = (1..=top).find(|&label| !present[label]) {
        return Err(ParseError::MissingLabel { missing, max: top });
    }
    Ok(RegionPartition::from_cell_ids(n, &labels))
}

fn parse_rect_list<'a>(
    n: usize,
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<RegionPartition, ParseError> {
    let mut rects = Vec::new();
    for (line_no, line) in lines {
        let values = int_tokens(line_no, line)?;
        if values.len() != 4 {
            return Err(ParseError::LabelCount {
                line: line_no,
                expected: 4,
                found: values.len(),
            });
        }
        let [top, left, height, width] = [values[0], values[1], values[2], values[3]];
        if top.1 == 0 || left.1 == 0 {
            let column = if top.1 == 0 { top.0 } else { left.0 };
            return Err(ParseError::Syntax {
                line: line_no,
                column,
                message: "coordinates are 1-based".into(),
            });
        }
        let fits = |start: u64, len: u64| len > 0 && start - 1 + len <= n as u64;
        if !fits(top.1, height.1) || !fits(left.1, width.1) {
            return Err(ParseError::RectOutOfBounds { line: line_no, n });
        }
        rects.push((
            line_no,
            Rect::new(
                top.1 as usize - 1,
                left.1 as usize - 1,
                height.1 as usize,
                width.1 as usize,
            ),
        ));
    }
    let mut ids = vec![usize::MAX; n * n];
    for (idx, (line_no, rect)) in rects.iter().enumerate() {
        for r in rect.top..rect.bottom() {
            for c in rect.left..rect.right() {
                if ids[r * n + c] != usize::MAX {
                    return Err(ParseError::RectOverlap {
                        line: *line_no,
                        row: r + 1,
                        col: c + 1,
                    });
                }
                ids[r * n + c] = idx;
            }
        }
    }
    if let Some(pos) = ids.iter().position(|&id| id == usize::MAX) {
        return Err(ParseError::RectGap {
            row: pos / n + 1,
            col: pos % n + 1,
        });
    }
    Ok(RegionPartition::from_cell_ids(n, &ids))
}

/// One label of the classification. A framework usually carries several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    /// Every region is a `height x width` rectangle of one orientation.
    Uniform {
        height: usize,
        width: usize,
    },
    /// Every region is `s x t` or `t x s` with `s <= t`; `divides` is set
    /// when `s | t`.
    Mixed {
        s: usize,
        t: usize,
        divides: bool,
    },
    /// Every region is vertically aligned with all regions above and below
    /// it.
    Columns,
    /// The cells below each region, within its columns, form complete
    /// regions.
    Tree,
    /// Rectangular, but in none of the families above.
    UnsupportedRectangular,
    NonRectangular,
}

impl ClassLabel {
    pub fn name(&self) -> &'static str {
        match self {
            ClassLabel::Uniform { .. } => "uniform",
            ClassLabel::Mixed { .. } => "mixed",
            ClassLabel::Columns => "columns",
            ClassLabel::Tree => "tree",
            ClassLabel::UnsupportedRectangular => "unsupported-rectangular",
            ClassLabel::NonRectangular => "non-rectangular",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every family a framework belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub gerechte: bool,
    pub rectangular: bool,
    /// `(height, width)` of the regions.
    pub uniform: Option<(usize, usize)>,
    /// `(s, t)` with `s <= t`.
    pub mixed: Option<(usize, usize)>,
    pub columns: bool,
    pub tree: bool,
}

impl Classification {
    /// All labels, most specific first.
    pub fn labels(&self) -> Vec<ClassLabel> {
        let mut labels = Vec::new();
        if !self.rectangular {
            labels.push(ClassLabel::NonRectangular);
            return labels;
        }
        if let Some((height, width)) = self.uniform {
            labels.push(ClassLabel::Uniform { height, width });
        }
        if let Some((s, t)) = self.mixed {
            labels.push(ClassLabel::Mixed {
                s,
                t,
                divides: t % s == 0,
            });
        }
        if self.columns {
            labels.push(ClassLabel::Columns);
        }
        if self.tree {
            labels.push(ClassLabel::Tree);
        }
        if labels.is_empty() {
            labels.push(ClassLabel::UnsupportedRectangular);
        }
        labels
    }

    pub fn most_specific(&self) -> ClassLabel {
        self.labels()[0]
    }

    /// True when at least one constructive procedure applies.
    pub fn is_supported(&self) -> bool {
        self.gerechte && (self.mixed.is_some() || self.columns || self.tree)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.labels().iter().map(ClassLabel::name).collect();
        f.write_str(&names.join(" "))
    }
}

/// Classifies a framework into the realizable families. Partitions that are
/// not gerechte frameworks only receive the rectangular/non-rectangular
/// distinction.
pub fn classify(framework: &RegionPartition) -> Classification {
    let gerechte = framework.is_gerechte();
    let Ok(rects) = framework.rects() else {
        return Classification {
            gerechte,
            rectangular: false,
            uniform: None,
            mixed: None,
            columns: false,
            tree: false,
        };
    };
    if !gerechte {
        return Classification {
            gerechte,
            rectangular: true,
            uniform: None,
            mixed: None,
            columns: false,
            tree: false,
        };
    }
    let first = rects[0];
    let (s, t) = (first.height.min(first.width), first.height.max(first.width));
    let mixed = rects
        .iter()
        .all(|r| r.height.min(r.width) == s && r.height.max(r.width) == t)
        .then_some((s, t));
    let uniform = rects
        .iter()
        .all(|r| r.height == first.height && r.width == first.width)
        .then_some((first.height, first.width));
    Classification {
        gerechte,
        rectangular: true,
        uniform,
        mixed,
        columns: arranged_in_columns(framework, &rects),
        tree: arranged_in_tree(&rects),
    }
}

fn arranged_in_columns(framework: &RegionPartition, rects: &[Rect]) -> bool {
    let n = framework.order();
    (0..n).all(|col| {
        let span = |row: usize| {
            let rect = rects[framework.region_at(row, col)];
            (rect.left, rect.width)
        };
        (1..n).all(|row| span(row) == span(0))
    })
}

fn arranged_in_tree(rects: &[Rect]) -> bool {
    rects.iter().all(|region| {
        // Every region reaching below `region` inside its columns must lie
        // entirely in the bottom set.
        rects.iter().all(|other| {
            let reaches_bottom_set =
                other.shares_columns(region) && other.bottom() > region.bottom();
            !reaches_bottom_set
                || (other.top >= region.bottom()
                    && other.left >= region.left
                    && other.right() <= region.right())
        })
    })
}

/// Merges every `k x k` block of cells into a single cell.
pub fn reduce(framework: &RegionPartition, k: usize) -> Result<RegionPartition, FrameworkError> {
    if k == 0 {
        return Err(FrameworkError::InvalidParameters(
            "k must be positive".into(),
        ));
    }
    let rects = framework.rects()?;
    for (region, rect) in rects.iter().enumerate() {
        for (dimension, value) in [("height", rect.height), ("width", rect.width)] {
            if value % k != 0 {
                return Err(FrameworkError::NotDivisible {
                    k,
                    region,
                    dimension,
                });
            }
        }
    }
    let side = framework.order() / k;
    let ids: Vec<usize> = (0..side * side)
        .map(|idx| framework.region_at((idx / side) * k, (idx % side) * k))
        .collect();
    Ok(RegionPartition::from_cell_ids(side, &ids))
}

/// Extends every vertical region boundary of a tree-structured framework
/// upwards to the top edge and splits the regions it crosses.
pub fn refine(framework: &RegionPartition) -> Result<RegionPartition, FrameworkError> {
    if !framework.is_gerechte() {
        return Err(FrameworkError::NotGerechte);
    }
    let rects = framework.rects()?;
    if !arranged_in_tree(&rects) {
        return Err(FrameworkError::NotTree);
    }
    let n = framework.order();
    // cuts[region] = sorted interior x positions at which the region is split
    let mut cuts: Vec<Vec<usize>> = vec![Vec::new(); rects.len()];
    for (idx, region) in rects.iter().enumerate() {
        for source in &rects {
            for x in [source.left, source.right()] {
                // the extended line occupies rows 0..source.bottom() at x
                if region.left < x && x < region.right() && region.top < source.bottom() {
                    cuts[idx].push(x);
                }
            }
        }
        cuts[idx].sort_unstable();
        cuts[idx].dedup();
    }
    let ids: Vec<(usize, usize)> = (0..n * n)
        .map(|cell| {
            let col = cell % n;
            let region = framework.cell_regions()[cell];
            let strip = cuts[region].partition_point(|&x| x <= col);
            (region, strip)
        })
        .collect();
    Ok(RegionPartition::from_cell_ids(n, &ids))
}

/// Per-row and per-column counts of regions beginning there, split by
/// orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeginCounts {
    pub s: usize,
    pub t: usize,
    pub k: usize,
    pub s_prime: usize,
    pub t_prime: usize,
    /// `s x t` (height `s`) regions beginning in each row.
    pub landscape_by_row: Vec<usize>,
    /// `t x s` regions beginning in each row.
    pub portrait_by_row: Vec<usize>,
    pub landscape_by_col: Vec<usize>,
    pub portrait_by_col: Vec<usize>,
}

/// Counts the regions beginning in each row and column and checks the
/// divisibility that holds for every framework of `s x t` and `t x s`
/// regions.
///
/// With `k = gcd(s, t)`, `s = s'k` and `t = t'k`, the `s x t` regions
/// beginning in a row number a multiple of `s'`. The same argument applied
/// with `s` and `t` exchanged covers the `t x s` regions (multiple of `t'`),
/// and applied to the transposed framework it covers columns: `s x t`
/// regions beginning in a column number a multiple of `t'`, `t x s` regions
/// a multiple of `s'`.
///
/// When `s == t` every region is counted as landscape.
pub fn begin_counts(
    framework: &RegionPartition,
    s: usize,
    t: usize,
) -> Result<BeginCounts, FrameworkError> {
    if s == 0 || t == 0 {
        return Err(FrameworkError::InvalidParameters(
            "s and t must be positive".into(),
        ));
    }
    let rects = framework.rects()?;
    let n = framework.order();
    let k = gcd(s, t);
    let (s_prime, t_prime) = (s / k, t / k);
    let mut counts = BeginCounts {
        s,
        t,
        k,
        s_prime,
        t_prime,
        landscape_by_row: vec![0; n],
        portrait_by_row: vec![0; n],
        landscape_by_col: vec![0; n],
        portrait_by_col: vec![0; n],
    };
    for rect in &rects {
        if rect.height == s && rect.width == t {
            counts.landscape_by_row[rect.top] += 1;
            counts.landscape_by_col[rect.left] += 1;
        } else if rect.height == t && rect.width == s {
            counts.portrait_by_row[rect.top] += 1;
            counts.portrait_by_col[rect.left] += 1;
        } else {
            return Err(FrameworkError::ShapeMismatch { s, t });
        }
    }
    let checks: [(&'static str, &'static str, &Vec<usize>, usize); 4] = [
        ("row", "landscape", &counts.landscape_by_row, s_prime),
        ("row", "portrait", &counts.portrait_by_row, t_prime),
        ("column", "landscape", &counts.landscape_by_col, t_prime),
        ("column", "portrait", &counts.portrait_by_col, s_prime),
    ];
    for (axis, shape, values, modulus) in checks {
        if let Some(index) = values.iter().position(|&count| count % modulus != 0) {
            return Err(FrameworkError::BeginCountNotDivisible {
                axis,
                index,
                shape,
                count: values[index],
                modulus,
            });
        }
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Regions that begin in the same row with the same height (horizontal), or
/// in the same column with the same width (vertical).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentClass {
    pub orientation: Orientation,
    /// Shared begin row (horizontal) or begin column (vertical).
    pub start: usize,
    /// Shared height (horizontal) or width (vertical).
    pub extent: usize,
    /// Region indices, left to right (horizontal) or top to bottom
    /// (vertical).
    pub members: Vec<usize>,
}

/// Horizontal classes first, then vertical ones, each sorted by
/// `(start, extent)`.
pub fn alignment_classes(
    framework: &RegionPartition,
) -> Result<Vec<AlignmentClass>, FrameworkError> {
    let rects = framework.rects()?;
    Ok(alignment_classes_of(&rects, |_| true))
}

pub(crate) fn alignment_classes_of(
    rects: &[Rect],
    include: impl Fn(&Rect) -> bool,
) -> Vec<AlignmentClass> {
    let mut horizontal: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut vertical: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (idx, rect) in rects.iter().enumerate().filter(|(_, r)| include(r)) {
        horizontal
            .entry((rect.top, rect.height))
            .or_default()
            .push(idx);
        vertical
            .entry((rect.left, rect.width))
            .or_default()
            .push(idx);
    }
    let mut classes = Vec::new();
    for ((start, extent), mut members) in horizontal {
        members.sort_by_key(|&idx| rects[idx].left);
        classes.push(AlignmentClass {
            orientation: Orientation::Horizontal,
            start,
            extent,
            members,
        });
    }
    for ((start, extent), mut members) in vertical {
        members.sort_by_key(|&idx| rects[idx].top);
        classes.push(AlignmentClass {
            orientation: Orientation::Vertical,
            start,
            extent,
            members,
        });
    }
    classes
}

/// What to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenerateRequest {
    /// Banded layout of `height x width` boxes.
    Uniform { height: usize, width: usize },
    /// Random tiling by `s x t` and `t x s` rectangles, order `st`.
    Mixed { s: usize, t: usize },
    /// Random column groups of order `n`.
    Columns { n: usize },
    /// Random tree-structured framework of order `n`.
    Tree { n: usize },
}

/// Backtracking nodes allowed per tiling attempt before restarting.
const TILING_NODE_LIMIT: usize = 200_000;
const TILING_ATTEMPTS: usize = 64;

/// Generates a framework of the requested class. Output depends only on the
/// request and the seed; no claim is made about the distribution over all
/// such frameworks.
pub fn generate(request: GenerateRequest, seed: u64) -> Result<RegionPartition, FrameworkError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match request {
        GenerateRequest::Uniform { height, width } => {
            if height == 0 || width == 0 {
                return Err(FrameworkError::InvalidParameters(
                    "box sides must be positive".into(),
                ));
            }
            let n = height * width;
            let ids: Vec<usize> = (0..n * n)
                .map(|idx| (idx / n / height) * height + (idx % n) / width)
                .collect();
            Ok(RegionPartition::from_cell_ids(n, &ids))
        }
        GenerateRequest::Mixed { s, t } => generate_mixed(s, t, &mut rng),
        GenerateRequest::Columns { n } => generate_columns(n, &mut rng),
        GenerateRequest::Tree { n } => generate_tree(n, &mut rng),
    }
}

fn generate_mixed(
    s: usize,
    t: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RegionPartition, FrameworkError> {
    if s == 0 || t == 0 {
        return Err(FrameworkError::InvalidParameters(
            "s and t must be positive".into(),
        ));
    }
    let n = s * t;
    let mut shapes = vec![(s, t)];
    if s != t {
        shapes.push((t, s));
    }
    for _ in 0..TILING_ATTEMPTS {
        let mut tiler = SkylineTiler::new(n, &shapes);
        if let Some(rects) = tiler.run(rng) {
            return RegionPartition::from_rects(n, &rects)
                .map_err(|err| FrameworkError::InvalidParameters(err.to_string()));
        }
    }
    Err(FrameworkError::GenerationExhausted)
}

/// Randomized depth-first tiling. Every column stays filled from the top
/// down, so the state is a skyline and the next region always starts at the
/// leftmost lowest free cell.
struct SkylineTiler<'a> {
    n: usize,
    shapes: &'a [(usize, usize)],
    heights: Vec<usize>,
    placed: Vec<Rect>,
    nodes: usize,
    /// representable[x]: x is a sum of shape sides along the relevant axis
    widths_ok: Vec<bool>,
    heights_ok: Vec<bool>,
}

impl<'a> SkylineTiler<'a> {
    fn new(n: usize, shapes: &'a [(usize, usize)]) -> Self {
        let sums = |sides: Vec<usize>| {
            let mut ok = vec![false; n + 1];
            ok[0] = true;
            for x in 1..=n {
                ok[x] = sides.iter().any(|&side| side <= x && ok[x - side]);
            }
            ok
        };
        SkylineTiler {
            n,
            shapes,
            heights: vec![0; n],
            placed: Vec::new(),
            nodes: 0,
            widths_ok: sums(shapes.iter().map(|s| s.1).collect()),
            heights_ok: sums(shapes.iter().map(|s| s.0).collect()),
        }
    }

    fn run(&mut self, rng: &mut ChaCha8Rng) -> Option<Vec<Rect>> {
        if self.search(rng) {
            Some(std::mem::take(&mut self.placed))
        } else {
            None
        }
    }

    fn search(&mut self, rng: &mut ChaCha8Rng) -> bool {
        self.nodes += 1;
        if self.nodes > TILING_NODE_LIMIT {
            return false;
        }
        let top = *self.heights.iter().min().expect("n > 0");
        if top == self.n {
            return true;
        }
        let left = self
            .heights
            .iter()
            .position(|&h| h == top)
            .expect("min exists");
        let run = self.heights[left..]
            .iter()
            .take_while(|&&h| h == top)
            .count();
        if !self.widths_ok[run] {
            return false;
        }
        let mut order: Vec<(usize, usize)> = self.shapes.to_vec();
        order.shuffle(rng);
        for (height, width) in order {
            if width > run || top + height > self.n {
                continue;
            }
            let columns = left..left + width;
            if !self.heights_ok[self.n - top - height] {
                continue;
            }
            for col in columns.clone() {
                self.heights[col] += height;
            }
            self.placed.push(Rect::new(top, left, height, width));
            if self.search(rng) {
                return true;
            }
            self.placed.pop();
            for col in columns {
                self.heights[col] -= height;
            }
            if self.nodes > TILING_NODE_LIMIT {
                return false;
            }
        }
        false
    }
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn generate_columns(n: usize, rng: &mut ChaCha8Rng) -> Result<RegionPartition, FrameworkError> {
    if n == 0 {
        return Err(FrameworkError::InvalidParameters(
            "order must be positive".into(),
        ));
    }
    let divs = divisors(n);
    let mut rects = Vec::new();
    let mut left = 0;
    while left < n {
        let choices: Vec<usize> = divs.iter().copied().filter(|&d| d <= n - left).collect();
        let width = *choices.choose(rng).expect("1 always fits");
        let height = n / width;
        for band in 0..width {
            rects.push(Rect::new(band * height, left, height, width));
        }
        left += width;
    }
    RegionPartition::from_rects(n, &rects)
        .map_err(|err| FrameworkError::InvalidParameters(err.to_string()))
}

fn generate_tree(n: usize, rng: &mut ChaCha8Rng) -> Result<RegionPartition, FrameworkError> {
    if n == 0 {
        return Err(FrameworkError::InvalidParameters(
            "order must be positive".into(),
        ));
    }
    let mut rects = Vec::new();
    tree_block(n, 0, 0, n, rng, &mut rects);
    RegionPartition::from_rects(n, &rects)
        .map_err(|err| FrameworkError::InvalidParameters(err.to_string()))
}

/// Fills the block `rows top..n, columns left..left + width` with complete
/// regions. Either a full-width region caps the block, or the block is split
/// side by side into two blocks whose areas are multiples of `n`.
fn tree_block(
    n: usize,
    top: usize,
    left: usize,
    width: usize,
    rng: &mut ChaCha8Rng,
    rects: &mut Vec<Rect>,
) {
    let remaining = n - top;
    if remaining == 0 {
        return;
    }
    // block widths must be multiples of this for the area to be a multiple of n
    let step = n / gcd(n, remaining);
    debug_assert_eq!(width % step, 0);
    let can_cap = n % width == 0 && n / width <= remaining;
    let can_split = width >= 2 * step;
    let cap = can_cap && (!can_split || rng.gen_bool(0.5));
    if cap {
        let height = n / width;
        rects.push(Rect::new(top, left, height, width));
        tree_block(n, top + height, left, width, rng, rects);
    } else {
        let first = step * rng.gen_range(1..width / step);
        tree_block(n, top, left, first, rng, rects);
        tree_block(n, top, left + first, width - first, rng, rects);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_boxes() -> RegionPartition {
        RegionPartition::parse("rects 4\n1 1 2 2\n1 3 2 2\n3 1 2 2\n3 3 2 2\n").unwrap()
    }

    #[test]
    fn parses_smallest_banded_grid() {
        let f = RegionPartition::parse("2\n1 1\n2 2").unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.cell_regions(), &[0, 0, 1, 1]);
        assert!(f.is_gerechte());
        assert!(f.is_rectangular());
    }

    #[test]
    fn parses_rect_list() {
        let f = four_boxes();
        assert_eq!(f.to_grid_text(), "4\n1 1 2 2\n1 1 2 2\n3 3 4 4\n3 3 4 4\n");
        assert!(f.is_gerechte());
    }

    #[test]
    fn grid_labels_are_canonicalized() {
        let f = RegionPartition::parse("# comment\n2\n2 2\n1 1\n").unwrap();
        assert_eq!(f.to_grid_text(), "2\n1 1\n2 2\n");
    }

    #[test]
    fn missing_label_is_an_error() {
        let err = RegionPartition::parse("2\n1 1\n3 3\n").unwrap_err();
        assert_eq!(err, ParseError::MissingLabel { missing: 2, max: 3 });
    }

    #[test]
    fn label_out_of_range() {
        assert!(matches!(
            RegionPartition::parse("2\n1 1\n2 5\n"),
            Err(ParseError::LabelOutOfRange { label: 5, .. })
        ));
        assert!(matches!(
            RegionPartition::parse("2\n0 1\n1 1\n"),
            Err(ParseError::LabelOutOfRange { label: 0, .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = RegionPartition::parse("2\n1 1\n2 z\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 3,
                column: 3,
                message: "expected an integer, found \"z\"".into()
            }
        );
        assert!(matches!(
            RegionPartition::parse("2\n1 1 1\n2 2\n"),
            Err(ParseError::LabelCount {
                line: 2,
                expected: 2,
                found: 3
            })
        ));
        assert!(matches!(
            RegionPartition::parse("3\n1 1 1\n"),
            Err(ParseError::RowCount {
                expected: 3,
                found: 1
            })
        ));
    }

    #[test]
    fn rect_list_overlap_and_gap() {
        assert!(matches!(
            RegionPartition::parse("rects 2\n1 1 1 2\n1 2 2 1\n"),
            Err(ParseError::RectOverlap {
                line: 3,
                row: 1,
                col: 2
            })
        ));
        assert!(matches!(
            RegionPartition::parse("rects 2\n1 1 1 2\n"),
            Err(ParseError::RectGap { row: 2, col: 1 })
        ));
        assert!(matches!(
            RegionPartition::parse("rects 2\n2 2 2 1\n"),
            Err(ParseError::RectOutOfBounds { line: 2, .. })
        ));
    }

    #[test]
    fn non_rectangular_detected() {
        let f = RegionPartition::parse("2\n1 2\n2 1\n").unwrap();
        assert!(f.is_gerechte());
        assert!(!f.is_rectangular());
        assert_eq!(classify(&f).labels(), vec![ClassLabel::NonRectangular]);
    }

    #[test]
    fn uniform_boxes_carry_every_implied_label() {
        let c = classify(&four_boxes());
        assert_eq!(
            c.labels(),
            vec![
                ClassLabel::Uniform {
                    height: 2,
                    width: 2
                },
                ClassLabel::Mixed {
                    s: 2,
                    t: 2,
                    divides: true
                },
                ClassLabel::Columns,
                ClassLabel::Tree,
            ]
        );
        assert_eq!(c.to_string(), "uniform mixed columns tree");
    }

    #[test]
    fn reduce_identity_and_boxes() {
        let f = four_boxes();
        assert_eq!(reduce(&f, 1).unwrap(), f);
        let r = reduce(&f, 2).unwrap();
        assert_eq!(r.to_grid_text(), "2\n1 2\n3 4\n");
        assert!(matches!(
            reduce(&f, 3),
            Err(FrameworkError::NotDivisible { k: 3, .. })
        ));
    }

    #[test]
    fn refine_leaves_columns_unchanged() {
        let f = four_boxes();
        assert_eq!(refine(&f).unwrap(), f);
        let cols = generate(GenerateRequest::Columns { n: 12 }, 3).unwrap();
        assert_eq!(refine(&cols).unwrap(), cols);
    }

    const BRICKS: &str =
        "6\n1 1 1 2 2 2\n1 1 1 2 2 2\n3 3 4 4 5 5\n3 3 4 4 5 5\n3 3 4 4 5 5\n6 6 6 6 6 6\n";

    #[test]
    fn staggered_bricks_are_unsupported() {
        let f = RegionPartition::parse(BRICKS).unwrap();
        let c = classify(&f);
        assert!(c.gerechte && c.rectangular);
        assert!(!c.tree && !c.columns && c.mixed.is_none());
        assert_eq!(c.labels(), vec![ClassLabel::UnsupportedRectangular]);
        assert_eq!(refine(&f), Err(FrameworkError::NotTree));
    }

    #[test]
    fn alignment_of_banded_order_two() {
        let f = RegionPartition::parse("2\n1 1\n2 2\n").unwrap();
        let classes = alignment_classes(&f).unwrap();
        let horizontal: Vec<_> = classes
            .iter()
            .filter(|c| c.orientation == Orientation::Horizontal)
            .collect();
        assert_eq!(horizontal.len(), 2);
        assert!(horizontal.iter().all(|c| c.members.len() == 1));
    }

    #[test]
    fn uniform_generation_is_banded() {
        let f = generate(
            GenerateRequest::Uniform {
                height: 2,
                width: 3,
            },
            99,
        )
        .unwrap();
        let expected =
            "6\n1 1 1 2 2 2\n1 1 1 2 2 2\n3 3 3 4 4 4\n3 3 3 4 4 4\n5 5 5 6 6 6\n5 5 5 6 6 6\n";
        assert_eq!(f.to_grid_text(), expected);
        assert_eq!(classify(&f).uniform, Some((2, 3)));
    }

    #[test]
    fn generators_are_deterministic() {
        for request in [
            GenerateRequest::Mixed { s: 3, t: 4 },
            GenerateRequest::Columns { n: 24 },
            GenerateRequest::Tree { n: 24 },
        ] {
            assert_eq!(generate(request, 5).unwrap(), generate(request, 5).unwrap());
        }
    }

    #[test]
    fn tree_generation_classifies_as_tree() {
        for seed in 0..50 {
            let f = generate(GenerateRequest::Tree { n: 12 }, seed).unwrap();
            let c = classify(&f);
            assert!(c.gerechte && c.rectangular && c.tree, "seed {seed}\n{f}");
        }
    }
}
