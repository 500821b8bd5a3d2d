//! Subpixel cells, symbol matrices and the generalized OR used to stack
//! transparencies.
//!
//! White behaves as colour id 0 under stacking, so the binary OR and the
//! colour rule are one operation: equal cells survive, anything else turns
//! Black.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One subpixel.
///
/// The derived ordering (White < Color(1) < ... < Black) is what column
/// multisets are sorted by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    White,
    /// Palette colour, ids start at 1.
    Color(u16),
    Black,
}

impl Cell {
    /// Binary reading: `false` is White, `true` is Black.
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Cell::Black
        } else {
            Cell::White
        }
    }

    pub fn is_white(self) -> bool {
        self == Cell::White
    }

    /// Stack two subpixels.
    #[inline]
    pub fn stack(self, other: Cell) -> Cell {
        if self == other {
            self
        } else {
            Cell::Black
        }
    }
}

/// Result of stacking one or more rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StackedRow(pub Vec<Cell>);

impl StackedRow {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.0
    }
}

impl From<&[Cell]> for StackedRow {
    fn from(cells: &[Cell]) -> Self {
        StackedRow(cells.to_vec())
    }
}

/// Darkness summary of a stacked row or tile.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightReport {
    /// Hamming weight: every cell that is not White.
    pub nonwhite_count: usize,
    pub black_count: usize,
    /// Occurrences of each palette colour that occurs at least once.
    pub per_color_count: BTreeMap<u16, usize>,
}

impl WeightReport {
    pub fn of(cells: &[Cell]) -> Self {
        let mut report = WeightReport::default();
        for &cell in cells {
            match cell {
                Cell::White => {}
                Cell::Black => {
                    report.black_count += 1;
                    report.nonwhite_count += 1;
                }
                Cell::Color(id) => {
                    *report.per_color_count.entry(id).or_insert(0) += 1;
                    report.nonwhite_count += 1;
                }
            }
        }
        report
    }

    pub fn color(&self, id: u16) -> usize {
        self.per_color_count.get(&id).copied().unwrap_or(0)
    }

    /// Cells that let light through (anything but Black).
    pub fn nonblack_count(&self, len: usize) -> usize {
        len - self.black_count
    }

    /// Combine reports of disjoint column ranges.
    pub fn add(&mut self, other: &WeightReport) {
        self.nonwhite_count += other.nonwhite_count;
        self.black_count += other.black_count;
        for (&id, &count) in &other.per_color_count {
            *self.per_color_count.entry(id).or_insert(0) += count;
        }
    }
}

/// Cellwise generalized OR of one or more rows of equal length.
pub fn stack_or(rows: &[StackedRow]) -> Result<StackedRow> {
    let (first, rest) = rows
        .split_first()
        .ok_or_else(|| Error::Parameter("stack_or needs at least one row".into()))?;
    let mut out = first.0.clone();
    for row in rest {
        if row.len() != out.len() {
            return Err(Error::Dimension(format!(
                "cannot stack rows of length {} and {}",
                out.len(),
                row.len()
            )));
        }
        for (acc, &cell) in out.iter_mut().zip(&row.0) {
            *acc = acc.stack(cell);
        }
    }
    Ok(StackedRow(out))
}

pub fn weight(row: &StackedRow) -> WeightReport {
    WeightReport::of(&row.0)
}

/// An `n_rows x n_cols` grid of cells stored row-major.
///
/// Zero columns is allowed and is the identity for [`concat`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
}

impl SymbolMatrix {
    pub fn new(rows: usize, cols: usize, cells: Vec<Cell>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::Dimension("a matrix needs at least one row".into()));
        }
        if cells.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} cells do not fill a {rows}x{cols} matrix",
                cells.len()
            )));
        }
        Ok(SymbolMatrix { rows, cols, cells })
    }

    pub fn filled(rows: usize, cols: usize, cell: Cell) -> Result<Self> {
        Self::new(rows, cols, alloc::vec![cell; rows * cols])
    }

    pub fn from_rows(rows: Vec<Vec<Cell>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut cells = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} cells, expected {n_cols}",
                    row.len()
                )));
            }
            cells.extend(row);
        }
        Self::new(n_rows, n_cols, cells)
    }

    /// Binary matrix from 0/1 rows.
    pub fn from_bits(rows: &[&[u8]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&b| Cell::from_bit(b != 0)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> Cell {
        self.cells[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, cell: Cell) {
        self.cells[row * self.cols + col] = cell;
    }

    pub fn row(&self, row: usize) -> &[Cell] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Cell> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn map(&self, f: impl Fn(Cell) -> Cell) -> SymbolMatrix {
        SymbolMatrix {
            rows: self.rows,
            cols: self.cols,
            cells: self.cells.iter().map(|&c| f(c)).collect(),
        }
    }

    /// Stack the given rows (0-based). Panics on an empty selection.
    pub fn stack(&self, rows: &[usize]) -> StackedRow {
        let mut out = self.row(rows[0]).to_vec();
        for &r in &rows[1..] {
            for (acc, &cell) in out.iter_mut().zip(self.row(r)) {
                *acc = acc.stack(cell);
            }
        }
        StackedRow(out)
    }

    pub fn stack_weight(&self, rows: &[usize]) -> WeightReport {
        WeightReport::of(&self.stack(rows).0)
    }

    /// Sub-matrix made of the given rows, in the given order.
    pub fn restrict_rows(&self, rows: &[usize]) -> SymbolMatrix {
        let mut cells = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            cells.extend_from_slice(self.row(r));
        }
        SymbolMatrix {
            rows: rows.len(),
            cols: self.cols,
            cells,
        }
    }

    /// Columns sorted into canonical order; two matrices generate the same
    /// column-permutation collection iff these agree.
    pub fn column_multiset(&self) -> Vec<Vec<Cell>> {
        let mut columns: Vec<Vec<Cell>> = (0..self.cols).map(|c| self.column(c)).collect();
        columns.sort_unstable();
        columns
    }

    pub fn same_columns(&self, other: &SymbolMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.column_multiset() == other.column_multiset()
    }

    /// Drop every column for which `drop` returns true; survivors keep their
    /// relative order.
    pub fn retain_columns(&self, drop: impl Fn(&[Cell]) -> bool) -> SymbolMatrix {
        let keep: Vec<usize> = (0..self.cols).filter(|&c| !drop(&self.column(c))).collect();
        let mut cells = Vec::with_capacity(self.rows * keep.len());
        for r in 0..self.rows {
            let row = self.row(r);
            cells.extend(keep.iter().map(|&c| row[c]));
        }
        SymbolMatrix {
            rows: self.rows,
            cols: keep.len(),
            cells,
        }
    }

    /// Palette ids used anywhere in the matrix.
    pub fn max_color(&self) -> u16 {
        self.cells
            .iter()
            .filter_map(|c| match c {
                Cell::Color(id) => Some(*id),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Row-wise concatenation `a ∘ b`.
pub fn concat(a: &SymbolMatrix, b: &SymbolMatrix) -> Result<SymbolMatrix> {
    if a.rows != b.rows {
        return Err(Error::Dimension(format!(
            "cannot concatenate {} rows with {} rows",
            a.rows, b.rows
        )));
    }
    let cols = a.cols + b.cols;
    let mut cells = Vec::with_capacity(a.rows * cols);
    for r in 0..a.rows {
        cells.extend_from_slice(a.row(r));
        cells.extend_from_slice(b.row(r));
    }
    Ok(SymbolMatrix {
        rows: a.rows,
        cols,
        cells,
    })
}

/// Concatenate a non-empty sequence of matrices.
pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a SymbolMatrix>) -> Result<SymbolMatrix> {
    let mut iter = parts.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::Parameter("nothing to concatenate".into()))?
        .clone();
    iter.try_fold(first, |acc, m| concat(&acc, m))
}

/// Column `j` of the output is column `perm[j]` of the input.
pub fn permute_columns(m: &SymbolMatrix, perm: &[usize]) -> Result<SymbolMatrix> {
    if perm.len() != m.cols {
        return Err(Error::InvalidPermutation(format!(
            "length {} for {} columns",
            perm.len(),
            m.cols
        )));
    }
    let mut seen = alloc::vec![false; m.cols];
    for &p in perm {
        if p >= m.cols || seen[p] {
            return Err(Error::InvalidPermutation(format!("index {p} repeated or out of range")));
        }
        seen[p] = true;
    }
    let mut cells = Vec::with_capacity(m.cells.len());
    for r in 0..m.rows {
        let row = m.row(r);
        cells.extend(perm.iter().map(|&p| row[p]));
    }
    Ok(SymbolMatrix {
        rows: m.rows,
        cols: m.cols,
        cells,
    })
}
