//! Extended matrix collections: star-bearing matrices that make each share
//! display its cover image without changing any `k`-row stack.

use alloc::format;
use alloc::vec::Vec;

use crate::basis::SymbolKind;
use crate::combin::ceil_div;
use crate::error::{Error, Result};
use crate::matrix::{concat, Cell, SymbolMatrix};

/// A matrix over {filler, star}. Row `i` holds `row_levels[i] - 1` stars and
/// no column holds more than `k - 1` of them, so stacking any `k` rows gives
/// all filler whatever the stars become.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCollection {
    k: usize,
    rows: usize,
    cols: usize,
    stars: Vec<bool>,
    row_levels: Vec<usize>,
    /// Non-star cells, and stars showing the darkest cover level.
    pub filler: Cell,
    /// What a star shows for a lighter gray cover level.
    pub light: Cell,
}

impl StarCollection {
    /// Assemble from a star mask (row-major). Checks both star-count
    /// invariants.
    pub fn new(k: usize, rows: usize, cols: usize, stars: Vec<bool>, row_levels: Vec<usize>) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!("extension needs k >= 2, got {k}")));
        }
        if rows == 0 || stars.len() != rows * cols || row_levels.len() != rows {
            return Err(Error::Dimension(format!(
                "star mask of {} cells and {} levels for a {rows}x{cols} collection",
                stars.len(),
                row_levels.len()
            )));
        }
        let a = StarCollection {
            k,
            rows,
            cols,
            stars,
            row_levels,
            filler: Cell::Black,
            light: Cell::White,
        };
        for r in 0..rows {
            let count = a.stars_in_row(r);
            if a.row_levels[r] == 0 || count != a.row_levels[r] - 1 {
                return Err(Error::Parameter(format!(
                    "row {} holds {count} stars for {} levels",
                    r + 1,
                    a.row_levels[r]
                )));
            }
        }
        for c in 0..cols {
            let count = a.stars_in_column(c);
            if count > k - 1 {
                return Err(Error::Parameter(format!(
                    "column {} holds {count} stars, at most {} allowed",
                    c + 1,
                    k - 1
                )));
            }
        }
        Ok(a)
    }

    pub fn with_cells(mut self, light: Cell, filler: Cell) -> Self {
        self.light = light;
        self.filler = filler;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Width `m_0`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_levels(&self) -> &[usize] {
        &self.row_levels
    }

    pub fn is_star(&self, row: usize, col: usize) -> bool {
        self.stars[row * self.cols + col]
    }

    pub fn stars_in_row(&self, row: usize) -> usize {
        (0..self.cols).filter(|&c| self.is_star(row, c)).count()
    }

    pub fn stars_in_column(&self, col: usize) -> usize {
        (0..self.rows).filter(|&r| self.is_star(r, col)).count()
    }

    /// Number of values row `row` can show for the given cover kind.
    pub fn cover_domain(&self, row: usize, kind: SymbolKind) -> usize {
        match kind {
            SymbolKind::Gray => self.row_levels[row],
            SymbolKind::Palette(c) => c as usize,
        }
    }

    /// Replace every star by a cover-dependent cell.
    ///
    /// Gray covers: in a row with `g` levels showing level `t` (1 = lightest)
    /// the first `g - t` stars become `light`, the rest `filler`, so the row
    /// weight is `m_0 - (g - t)`. Palette covers: every star becomes the
    /// cover colour.
    pub fn instantiate(&self, kind: SymbolKind, cover: &[u16]) -> Result<SymbolMatrix> {
        if cover.len() != self.rows {
            return Err(Error::Dimension(format!(
                "{} cover values for {} rows",
                cover.len(),
                self.rows
            )));
        }
        let mut cells = Vec::with_capacity(self.rows * self.cols);
        for (r, &value) in cover.iter().enumerate() {
            let domain = self.cover_domain(r, kind);
            if value == 0 || value as usize > domain {
                return Err(Error::Symbol(format!(
                    "cover value {value} for row {} outside 1..={domain}",
                    r + 1
                )));
            }
            let mut lighten = match kind {
                SymbolKind::Gray => self.row_levels[r] - value as usize,
                SymbolKind::Palette(_) => 0,
            };
            for c in 0..self.cols {
                let cell = if !self.is_star(r, c) {
                    self.filler
                } else {
                    match kind {
                        SymbolKind::Palette(_) => Cell::Color(value),
                        SymbolKind::Gray if lighten > 0 => {
                            lighten -= 1;
                            self.light
                        }
                        SymbolKind::Gray => self.filler,
                    }
                };
                cells.push(cell);
            }
        }
        SymbolMatrix::new(self.rows, self.cols, cells)
    }
}

/// Smallest width that can hold `Σ (g_i - 1)` stars at `k - 1` per column.
pub fn min_extension_width(k: usize, levels: &[usize]) -> usize {
    let stars: usize = levels.iter().map(|g| g.saturating_sub(1)).sum();
    ceil_div(stars, k - 1)
}

/// Minimum-width collection for covers with `levels[i]` gray levels.
///
/// Rows are placed in order; each row's stars go to the least-filled
/// columns (lowest index on ties) that still have room and do not already
/// hold a star of that row.
pub fn build_extension(k: usize, n: usize, levels: &[usize]) -> Result<StarCollection> {
    if k < 2 || n < k {
        return Err(Error::Parameter(format!(
            "extension needs 2 <= k <= n, got k={k} n={n}"
        )));
    }
    if levels.len() != n {
        return Err(Error::Dimension(format!("{} cover levels for n={n}", levels.len())));
    }
    if let Some(i) = levels.iter().position(|&g| g == 0) {
        return Err(Error::Parameter(format!("row {} has zero cover levels", i + 1)));
    }
    let width = min_extension_width(k, levels);
    if let Some(i) = levels.iter().position(|&g| g - 1 > width) {
        return Err(Error::Parameter(format!(
            "row {} needs {} stars but only {width} columns exist",
            i + 1,
            levels[i] - 1
        )));
    }
    let mut stars = alloc::vec![false; n * width];
    let mut fill = alloc::vec![0usize; width];
    for (r, &g) in levels.iter().enumerate() {
        for _ in 0..g - 1 {
            let col = (0..width)
                .filter(|&c| fill[c] < k - 1 && !stars[r * width + c])
                .min_by_key(|&c| (fill[c], c))
                .ok_or_else(|| Error::Parameter(format!("no free column for row {}", r + 1)))?;
            stars[r * width + col] = true;
            fill[col] += 1;
        }
    }
    StarCollection::new(k, n, width, stars, levels.to_vec())
}

/// `g - 1` side-by-side copies of a two-level collection.
pub fn replicate_gray(a2: &StarCollection, g: usize) -> Result<StarCollection> {
    if g < 2 {
        return Err(Error::Parameter(format!("replication needs g >= 2, got {g}")));
    }
    if a2.row_levels.iter().any(|&lv| lv != 2) {
        return Err(Error::Parameter("replication needs one star per row".into()));
    }
    let width = a2.cols * (g - 1);
    let mut stars = Vec::with_capacity(a2.rows * width);
    for r in 0..a2.rows {
        for _ in 0..g - 1 {
            stars.extend_from_slice(&a2.stars[r * a2.cols..(r + 1) * a2.cols]);
        }
    }
    Ok(StarCollection::new(a2.k, a2.rows, width, stars, alloc::vec![g; a2.rows])?.with_cells(a2.light, a2.filler))
}

/// How a colour channel renders on a transparency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorModel {
    /// Light subpixels carry the primary (red/green/blue), dark ones are Black.
    Additive,
    /// Light subpixels are White, dark ones carry the primary (cyan/magenta/yellow).
    Subtractive,
}

/// Palette id of channel `l` (0, 1, 2) in either model: red/cyan = 1,
/// green/magenta = 2, blue/yellow = 3.
pub fn channel_color(channel: usize) -> Cell {
    Cell::Color(channel as u16 + 1)
}

/// One collection per colour channel, each of minimum width for its cover
/// levels.
pub fn build_color_extension(
    k: usize,
    n: usize,
    channel_levels: [&[usize]; 3],
    model: ColorModel,
) -> Result<[StarCollection; 3]> {
    let build = |channel: usize| -> Result<StarCollection> {
        let a = build_extension(k, n, channel_levels[channel])?;
        let primary = channel_color(channel);
        Ok(match model {
            ColorModel::Additive => a.with_cells(primary, Cell::Black),
            ColorModel::Subtractive => a.with_cells(Cell::White, primary),
        })
    };
    Ok([build(0)?, build(1)?, build(2)?])
}

/// Concatenate instantiated channel collections into one matrix.
pub fn instantiate_channels(channels: &[StarCollection; 3], covers: [&[u16]; 3]) -> Result<SymbolMatrix> {
    let r = channels[0].instantiate(SymbolKind::Gray, covers[0])?;
    let g = channels[1].instantiate(SymbolKind::Gray, covers[1])?;
    let b = channels[2].instantiate(SymbolKind::Gray, covers[2])?;
    concat(&concat(&r, &g)?, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::combinations;
    use alloc::vec;
    use Cell::{Black as K, White as W};

    fn mask(a: &StarCollection) -> Vec<Vec<bool>> {
        (0..a.rows())
            .map(|r| (0..a.cols()).map(|c| a.is_star(r, c)).collect())
            .collect()
    }

    #[test]
    fn two_of_two_is_the_diagonal() {
        let a = build_extension(2, 2, &[2, 2]).unwrap();
        assert_eq!(mask(&a), vec![vec![true, false], vec![false, true]]);
    }

    #[test]
    fn three_of_five_binary_width_and_column_loads() {
        let a = build_extension(3, 5, &[2; 5]).unwrap();
        assert_eq!(a.cols(), 3);
        let mut loads: Vec<usize> = (0..3).map(|c| a.stars_in_column(c)).collect();
        loads.sort();
        assert_eq!(loads, vec![1, 2, 2]);
    }

    #[test]
    fn three_of_five_three_levels() {
        let a = build_extension(3, 5, &[3; 5]).unwrap();
        assert_eq!(a.cols(), 5);
        for r in 0..5 {
            assert_eq!(a.stars_in_row(r), 2);
        }
        for c in 0..5 {
            assert_eq!(a.stars_in_column(c), 2);
        }
    }

    #[test]
    fn constant_covers_need_no_columns() {
        let a = build_extension(3, 5, &[1; 5]).unwrap();
        assert_eq!(a.cols(), 0);
    }

    #[test]
    fn infeasible_row_is_named() {
        // row 1 needs 4 stars but ceil(5/4) = 2 columns
        let err = build_extension(5, 5, &[5, 2, 1, 1, 1]).unwrap_err();
        match err {
            Error::Parameter(msg) => assert!(msg.contains("row 1"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(build_extension(1, 3, &[2, 2, 2]).is_err());
        assert!(build_extension(4, 3, &[2, 2, 2]).is_err());
        assert!(build_extension(2, 3, &[2, 2]).is_err());
    }

    #[test]
    fn instantiate_worked_example() {
        let a = build_extension(2, 2, &[2, 2]).unwrap();
        let inst = a.instantiate(SymbolKind::Gray, &[1, 2]).unwrap();
        assert_eq!(inst, SymbolMatrix::from_bits(&[&[0, 1], &[1, 1]]).unwrap());
    }

    #[test]
    fn lightest_level_whitens_every_star() {
        let a = build_extension(3, 5, &[3, 2, 4, 1, 3]).unwrap();
        let inst = a.instantiate(SymbolKind::Gray, &[1; 5]).unwrap();
        for (r, &g) in a.row_levels().iter().enumerate() {
            let weight = inst.row(r).iter().filter(|&&c| c != W).count();
            assert_eq!(weight, a.cols() - (g - 1));
        }
    }

    #[test]
    fn instantiation_never_changes_threshold_stacks() {
        let a = build_extension(3, 5, &[2; 5]).unwrap();
        for index in 0..32u16 {
            let cover: Vec<u16> = (0..5).map(|b| (index >> b & 1) + 1).collect();
            let inst = a.instantiate(SymbolKind::Gray, &cover).unwrap();
            for q in combinations(5, 3) {
                assert!(inst.stack(&q).0.iter().all(|&c| c == K));
            }
        }
    }

    #[test]
    fn cover_out_of_range() {
        let a = build_extension(2, 2, &[2, 2]).unwrap();
        assert!(matches!(
            a.instantiate(SymbolKind::Gray, &[3, 1]),
            Err(Error::Symbol(_))
        ));
        assert!(matches!(
            a.instantiate(SymbolKind::Gray, &[0, 1]),
            Err(Error::Symbol(_))
        ));
        assert!(matches!(
            a.instantiate(SymbolKind::Palette(3), &[4, 1]),
            Err(Error::Symbol(_))
        ));
    }

    #[test]
    fn palette_stars_take_the_cover_colour() {
        let a = build_extension(2, 3, &[2, 2, 2]).unwrap();
        let inst = a.instantiate(SymbolKind::Palette(3), &[3, 1, 2]).unwrap();
        assert_eq!(inst.row(0), &[Cell::Color(3), K, K]);
        assert_eq!(inst.row(1), &[K, Cell::Color(1), K]);
        assert_eq!(inst.row(2), &[K, K, Cell::Color(2)]);
    }

    #[test]
    fn replication_of_two_levels() {
        let a2 = build_extension(3, 5, &[2; 5]).unwrap();
        assert_eq!(replicate_gray(&a2, 2).unwrap(), a2);
        let a3 = replicate_gray(&a2, 3).unwrap();
        assert_eq!(a3.cols(), 6);
        assert!(a3.row_levels().iter().all(|&g| g == 3));
        assert!(replicate_gray(&a3, 2).is_err());
    }

    #[test]
    fn star_invariants_are_enforced() {
        // two stars in one column with k = 2
        let err = StarCollection::new(2, 2, 1, vec![true, true], vec![2, 2]).unwrap_err();
        assert!(matches!(err, Error::Parameter(_)));
        let err = StarCollection::new(2, 2, 2, vec![true, true, false, true], vec![2, 2]).unwrap_err();
        assert!(matches!(err, Error::Parameter(_)));
    }

    #[test]
    fn colour_channels() {
        let levels = [2usize; 5];
        let chans = build_color_extension(3, 5, [&levels, &levels, &levels], ColorModel::Additive).unwrap();
        let total: usize = chans.iter().map(StarCollection::cols).sum();
        assert_eq!(total, 9);
        assert_eq!(chans[0].light, Cell::Color(1));
        assert_eq!(chans[2].filler, K);
        let sub = build_color_extension(3, 5, [&levels, &levels, &levels], ColorModel::Subtractive).unwrap();
        assert_eq!((sub[1].light, sub[1].filler), (W, Cell::Color(2)));
        let three = [3usize; 5];
        let wide = build_color_extension(3, 5, [&three, &three, &three], ColorModel::Additive).unwrap();
        assert_eq!(wide.iter().map(StarCollection::cols).sum::<usize>(), 15);
    }
}
