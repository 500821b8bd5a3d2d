//! Basis matrices: the per-symbol patterns that carry the secret pixel.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::combin::combinations;
use crate::error::{Error, Result};
use crate::matrix::{concat_all, Cell, SymbolMatrix};

/// What the symbols of a secret (or cover) stand for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    /// Ordered gray levels, 1 = lightest. Binary is the two-level case.
    Gray,
    /// Palette colours `1..=c`.
    Palette(u16),
}

/// Basis matrices of a `(k, n)` scheme, one per secret symbol.
///
/// Variant `i` encodes symbol `i + 1`: gray level `i + 1` (variant 0 is the
/// lightest) or palette colour `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSet {
    pub k: usize,
    pub n: usize,
    pub kind: SymbolKind,
    pub variants: Vec<SymbolMatrix>,
    /// Absolute contrast gap `α·m`.
    pub alpha_m: usize,
    /// Blackness threshold.
    pub d: usize,
}

/// A gray ladder is a basis set whose variants are ordered by darkness.
pub type GrayLadder = BasisSet;

impl BasisSet {
    pub fn new(
        k: usize,
        n: usize,
        kind: SymbolKind,
        variants: Vec<SymbolMatrix>,
        alpha_m: usize,
        d: usize,
    ) -> Result<Self> {
        check_shape(k, n, &variants)?;
        if let SymbolKind::Palette(c) = kind {
            if c as usize != variants.len() {
                return Err(Error::Dimension(format!(
                    "{} variants for a {c}-colour palette",
                    variants.len()
                )));
            }
        }
        Ok(BasisSet {
            k,
            n,
            kind,
            variants,
            alpha_m,
            d,
        })
    }

    /// Build a set whose kind, `α·m` and `d` are measured from the matrices
    /// over every `k`-row stack.
    pub fn derive(k: usize, n: usize, variants: Vec<SymbolMatrix>) -> Result<Self> {
        check_shape(k, n, &variants)?;
        let kind = if variants.iter().any(|v| v.max_color() > 0) {
            SymbolKind::Palette(variants.len() as u16)
        } else {
            SymbolKind::Gray
        };
        let (alpha_m, d) = measure_contrast(k, kind, &variants);
        Ok(BasisSet {
            k,
            n,
            kind,
            variants,
            alpha_m,
            d,
        })
    }

    /// Pixel expansion.
    pub fn m(&self) -> usize {
        self.variants[0].cols()
    }

    pub fn symbols(&self) -> usize {
        self.variants.len()
    }

    pub fn is_binary(&self) -> bool {
        self.kind == SymbolKind::Gray && self.variants.len() == 2
    }
}

fn check_shape(k: usize, n: usize, variants: &[SymbolMatrix]) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("threshold k={k} with n={n}")));
    }
    let first = variants
        .first()
        .ok_or_else(|| Error::Dimension("a basis set needs at least one variant".into()))?;
    for (i, v) in variants.iter().enumerate() {
        if v.rows() != n {
            return Err(Error::Dimension(format!(
                "variant {i} has {} rows, expected {n}",
                v.rows()
            )));
        }
        if v.cols() != first.cols() {
            return Err(Error::Dimension(format!(
                "variant {i} has {} columns, variant 0 has {}",
                v.cols(),
                first.cols()
            )));
        }
    }
    Ok(())
}

/// Smallest gap and threshold over every `k`-row stack. Gaps that go
/// negative are reported as 0.
fn measure_contrast(k: usize, kind: SymbolKind, variants: &[SymbolMatrix]) -> (usize, usize) {
    let n = variants[0].rows();
    let mut gap = i64::MAX;
    let mut d = usize::MAX;
    for subset in combinations(n, k) {
        let stacks: Vec<_> = variants.iter().map(|v| v.stack_weight(&subset)).collect();
        match kind {
            SymbolKind::Gray => {
                for pair in stacks.windows(2) {
                    gap = gap.min(pair[1].nonwhite_count as i64 - pair[0].nonwhite_count as i64);
                }
                if let Some(last) = stacks.last() {
                    d = d.min(last.nonwhite_count);
                }
            }
            SymbolKind::Palette(_) => {
                for (c, own) in stacks.iter().enumerate() {
                    let color = c as u16 + 1;
                    d = d.min(own.color(color));
                    for (other_c, other) in stacks.iter().enumerate() {
                        if other_c != c {
                            gap = gap.min(own.color(color) as i64 - other.color(color) as i64);
                        }
                    }
                }
            }
        }
    }
    let gap = if gap == i64::MAX { 0 } else { gap.max(0) as usize };
    let d = if d == usize::MAX { 0 } else { d };
    (gap, d)
}

/// `(k, k)` scheme whose columns are the characteristic vectors of the even
/// (white) and odd (black) subsets of `{1..k}`.
pub fn naor_shamir_kk(k: usize) -> Result<BasisSet> {
    if k == 0 || k > 16 {
        return Err(Error::Parameter(format!("naor-shamir threshold k={k} outside 1..=16")));
    }
    let columns = |parity: u32| -> Vec<u32> { (0u32..1 << k).filter(|mask| mask.count_ones() % 2 == parity).collect() };
    let build = |masks: &[u32]| {
        let cells = (0..k)
            .flat_map(|row| masks.iter().map(move |mask| Cell::from_bit(mask >> row & 1 == 1)))
            .collect();
        SymbolMatrix::new(k, masks.len(), cells)
    };
    let white = build(&columns(0))?;
    let black = build(&columns(1))?;
    let half = 1usize << (k - 1);
    BasisSet::new(k, k, SymbolKind::Gray, alloc::vec![white, black], 1, half)
}

/// Built-in binary schemes: `"2-2"` and `"2-3"`.
pub fn builtin(name: &str) -> Result<BasisSet> {
    match name {
        "2-2" => BasisSet::new(
            2,
            2,
            SymbolKind::Gray,
            alloc::vec![
                SymbolMatrix::from_bits(&[&[1, 0], &[1, 0]])?,
                SymbolMatrix::from_bits(&[&[1, 0], &[0, 1]])?,
            ],
            1,
            2,
        ),
        "2-3" => BasisSet::new(
            2,
            3,
            SymbolKind::Gray,
            alloc::vec![
                SymbolMatrix::from_bits(&[&[0, 1, 1], &[0, 1, 1], &[0, 1, 1]])?,
                SymbolMatrix::from_bits(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])?,
            ],
            1,
            3,
        ),
        other => Err(Error::UnknownBuiltin(String::from(other))),
    }
}

/// `g`-level ladder: level `j` concatenates `j - 1` copies of the black
/// matrix with `g - j` copies of the white one.
pub fn gray_ladder(base: &BasisSet, g: usize) -> Result<GrayLadder> {
    if g < 2 {
        return Err(Error::Parameter(format!("gray ladder needs g >= 2, got {g}")));
    }
    if !base.is_binary() {
        return Err(Error::Parameter("gray ladder needs a binary base".into()));
    }
    let (white, black) = (&base.variants[0], &base.variants[1]);
    let variants = (1..=g)
        .map(|level| {
            let parts = core::iter::repeat_n(black, level - 1).chain(core::iter::repeat_n(white, g - level));
            concat_all(parts)
        })
        .collect::<Result<Vec<_>>>()?;
    BasisSet::new(
        base.k,
        base.n,
        SymbolKind::Gray,
        variants,
        base.alpha_m,
        (g - 1) * base.d,
    )
}

/// `c`-colour basis from a binary pair `(S0, S1)`.
///
/// Variant `c` is `S0` with white mapped to colour `c`, followed by, for
/// each column of `S1` and each other colour `c'` in increasing order, that
/// column with white mapped to `c'`; black stays black. Columns that end up
/// entirely black are removed.
pub fn color_basis(c: u16, base: &BasisSet) -> Result<BasisSet> {
    if c == 0 {
        return Err(Error::Parameter("colour basis needs at least one colour".into()));
    }
    if !base.is_binary() {
        return Err(Error::Parameter("colour basis needs a binary base".into()));
    }
    let (s0, s1) = (&base.variants[0], &base.variants[1]);
    let paint = |cell: Cell, color: u16| match cell {
        Cell::White => Cell::Color(color),
        other => other,
    };
    let variants = (1..=c)
        .map(|color| {
            let mut rows: Vec<Vec<Cell>> = (0..base.n)
                .map(|r| s0.row(r).iter().map(|&x| paint(x, color)).collect())
                .collect();
            for col in 0..s1.cols() {
                for other in (1..=c).filter(|&o| o != color) {
                    for (r, row) in rows.iter_mut().enumerate() {
                        row.push(paint(s1.get(r, col), other));
                    }
                }
            }
            Ok(SymbolMatrix::from_rows(rows)?.retain_columns(|column| column.iter().all(|&x| x == Cell::Black)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (alpha_m, d) = measure_contrast(base.k, SymbolKind::Palette(c), &variants);
    BasisSet::new(base.k, base.n, SymbolKind::Palette(c), variants, alpha_m, d)
}
