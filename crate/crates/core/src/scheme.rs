//! A complete scheme: extension collection plus one basis block per secret.
//!
//! The per-pixel matrix is `T = A ∘ B_1 ∘ … ∘ B_s`: the instantiated
//! extension leftmost, then every secret block embedded into all `n` rows.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::basis::{BasisSet, SymbolKind};
use crate::combin::combinations;
use crate::error::{Error, Result};
use crate::extension::StarCollection;
use crate::matrix::{Cell, SymbolMatrix};

/// Scheme families the toolkit builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    BinaryEvcs,
    GrayEvcs,
    ColorEvcs,
    GrayMevcs,
    ColorMevcs,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::BinaryEvcs,
        Mode::GrayEvcs,
        Mode::ColorEvcs,
        Mode::GrayMevcs,
        Mode::ColorMevcs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::BinaryEvcs => "binary-evcs",
            Mode::GrayEvcs => "gray-evcs",
            Mode::ColorEvcs => "color-evcs",
            Mode::GrayMevcs => "gray-mevcs",
            Mode::ColorMevcs => "color-mevcs",
        }
    }

    pub fn parse(name: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn is_multi_secret(self) -> bool {
        matches!(self, Mode::GrayMevcs | Mode::ColorMevcs)
    }

    pub fn is_color(self) -> bool {
        matches!(self, Mode::ColorEvcs | Mode::ColorMevcs)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which stacks reveal a block's secret.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reveal {
    /// Any `k` of the block's rows.
    Threshold,
    /// Exactly the block's member rows.
    Exact,
}

/// One secret's basis matrices and the participants that carry them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Sorted 0-based participant indices; basis row `j` goes to share
    /// `members[j]`.
    pub members: Vec<usize>,
    pub reveal: Reveal,
    pub basis: BasisSet,
}

impl Block {
    /// Basis variant over all `n` rows; non-members are all Black.
    pub fn embedded(&self, variant: usize, n: usize) -> SymbolMatrix {
        embed_rows(&self.basis.variants[variant], &self.members, n)
    }
}

/// Place row `j` of `b` at row `members[j]` of an `n`-row matrix and fill
/// the rest with Black.
pub fn embed_rows(b: &SymbolMatrix, members: &[usize], n: usize) -> SymbolMatrix {
    let mut out = SymbolMatrix::filled(n, b.cols(), Cell::Black).expect("n >= 1");
    for (j, &row) in members.iter().enumerate() {
        for c in 0..b.cols() {
            out.set(row, c, b.get(j, c));
        }
    }
    out
}

/// Exact non-negative fraction, always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A fully assembled (multi-secret) extended scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    pub mode: Mode,
    pub k: usize,
    pub n: usize,
    /// How cover pixels are interpreted by the extension.
    pub cover_kind: SymbolKind,
    pub extension: StarCollection,
    pub blocks: Vec<Block>,
}

impl Scheme {
    pub fn new(
        mode: Mode,
        k: usize,
        n: usize,
        cover_kind: SymbolKind,
        extension: StarCollection,
        blocks: Vec<Block>,
    ) -> Result<Self> {
        if k < 2 || k > n {
            return Err(Error::Parameter(format!("need 2 <= k <= n, got k={k} n={n}")));
        }
        if extension.rows() != n || extension.k() != k {
            return Err(Error::Dimension(format!(
                "extension is ({}, {}), scheme is ({k}, {n})",
                extension.k(),
                extension.rows()
            )));
        }
        if blocks.is_empty() {
            return Err(Error::Parameter("a scheme needs at least one secret".into()));
        }
        for (i, block) in blocks.iter().enumerate() {
            let ok_members =
                block.members.windows(2).all(|w| w[0] < w[1]) && block.members.last().is_some_and(|&m| m < n);
            if !ok_members {
                return Err(Error::Parameter(format!(
                    "secret {}: members must be distinct indices below {n}",
                    i + 1
                )));
            }
            if block.basis.n != block.members.len() {
                return Err(Error::Dimension(format!(
                    "secret {}: basis has {} rows for {} members",
                    i + 1,
                    block.basis.n,
                    block.members.len()
                )));
            }
            match block.reveal {
                Reveal::Threshold if block.basis.k != k || block.members.len() != n => {
                    return Err(Error::Parameter(format!(
                        "secret {}: threshold blocks must span all {n} rows with k={k}",
                        i + 1
                    )));
                }
                Reveal::Exact if block.members.len() < k || block.basis.k != block.members.len() => {
                    return Err(Error::Parameter(format!(
                        "secret {}: exact blocks need k <= p and a (p, p) basis",
                        i + 1
                    )));
                }
                _ => {}
            }
        }
        Ok(Scheme {
            mode,
            k,
            n,
            cover_kind,
            extension,
            blocks,
        })
    }

    /// Short identifier used in share provenance.
    pub fn id(&self) -> String {
        format!("{}-{}-{}", self.mode, self.k, self.n)
    }

    /// Width of the extension, `m_0`.
    pub fn m0(&self) -> usize {
        self.extension.cols()
    }

    /// Total width of the secret blocks, `m`.
    pub fn basis_width(&self) -> usize {
        self.blocks.iter().map(|b| b.basis.m()).sum()
    }

    /// Pixel expansion `m_E = m_0 + m`.
    pub fn m_e(&self) -> usize {
        self.m0() + self.basis_width()
    }

    /// Relative difference of secret `i` (0-based): `α_i·m_i / m_E`.
    pub fn alpha_e(&self, i: usize) -> Ratio {
        Ratio::new(self.blocks[i].basis.alpha_m as u64, self.m_e() as u64)
    }

    pub fn secrets(&self) -> usize {
        self.blocks.len()
    }

    /// Number of values each cover row can take.
    pub fn cover_domains(&self) -> Vec<usize> {
        (0..self.n)
            .map(|r| self.extension.cover_domain(r, self.cover_kind))
            .collect()
    }

    pub fn symbol_domains(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.basis.symbols()).collect()
    }

    /// Stacks that must reveal secret `i`.
    pub fn qualified_subsets(&self, i: usize) -> Vec<Vec<usize>> {
        let block = &self.blocks[i];
        match block.reveal {
            Reveal::Threshold => combinations(self.n, self.k),
            Reveal::Exact => alloc::vec![block.members.clone()],
        }
    }

    /// Column range of each part of `T` before permutation: the extension
    /// first, then the blocks in order.
    pub fn block_ranges(&self) -> Vec<core::ops::Range<usize>> {
        let mut start = self.m0();
        let mut out = alloc::vec![0..start];
        for b in &self.blocks {
            out.push(start..start + b.basis.m());
            start += b.basis.m();
        }
        out
    }

    /// `T` for the given 1-based cover values and 1-based secret symbols.
    pub fn assemble(&self, cover: &[u16], symbols: &[u16]) -> Result<SymbolMatrix> {
        if symbols.len() != self.blocks.len() {
            return Err(Error::Dimension(format!(
                "{} secret symbols for {} secrets",
                symbols.len(),
                self.blocks.len()
            )));
        }
        let a = self.extension.instantiate(self.cover_kind, cover)?;
        let mut rows: Vec<Vec<Cell>> = (0..self.n)
            .map(|r| {
                let mut row = Vec::with_capacity(self.m_e());
                row.extend_from_slice(a.row(r));
                row
            })
            .collect();
        for (i, (block, &sym)) in self.blocks.iter().zip(symbols).enumerate() {
            if sym == 0 || sym as usize > block.basis.symbols() {
                return Err(Error::Symbol(format!(
                    "secret {} symbol {sym} outside 1..={}",
                    i + 1,
                    block.basis.symbols()
                )));
            }
            let variant = &block.basis.variants[sym as usize - 1];
            let mut member = block.members.iter().peekable();
            let mut j = 0;
            for (r, row) in rows.iter_mut().enumerate() {
                if member.peek() == Some(&&r) {
                    row.extend_from_slice(variant.row(j));
                    member.next();
                    j += 1;
                } else {
                    row.extend(core::iter::repeat_n(Cell::Black, variant.cols()));
                }
            }
        }
        SymbolMatrix::from_rows(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::builtin;
    use crate::extension::build_extension;
    use alloc::string::ToString;
    use alloc::vec;

    fn worked_example() -> Scheme {
        let basis = builtin("2-2").unwrap();
        let ext = build_extension(2, 2, &[2, 2]).unwrap();
        Scheme::new(
            Mode::BinaryEvcs,
            2,
            2,
            SymbolKind::Gray,
            ext,
            vec![Block {
                members: vec![0, 1],
                reveal: Reveal::Threshold,
                basis,
            }],
        )
        .unwrap()
    }

    #[test]
    fn ratio_reduces_and_prints() {
        assert_eq!(Ratio::new(2, 8).to_string(), "1/4");
        assert_eq!(Ratio::new(0, 5), Ratio { num: 0, den: 1 });
    }

    #[test]
    fn metrics_of_worked_example() {
        let s = worked_example();
        assert_eq!(s.m_e(), 4);
        assert_eq!(s.alpha_e(0), Ratio::new(1, 4));
        assert_eq!(s.id(), "binary-evcs-2-2");
    }

    #[test]
    fn assembly_puts_extension_first() {
        let s = worked_example();
        // white secret, covers (w, b): A^{wb} = (01; 11), B_w = (10; 10)
        let t = s.assemble(&[1, 2], &[1]).unwrap();
        assert_eq!(t, SymbolMatrix::from_bits(&[&[0, 1, 1, 0], &[1, 1, 1, 0]]).unwrap());
    }

    #[test]
    fn assembly_rejects_bad_symbols() {
        let s = worked_example();
        assert!(matches!(s.assemble(&[1, 1], &[3]), Err(Error::Symbol(_))));
        assert!(matches!(s.assemble(&[1, 1], &[1, 1]), Err(Error::Dimension(_))));
    }

    #[test]
    fn embedding_fills_non_members_black() {
        let b = SymbolMatrix::from_bits(&[&[0, 1], &[1, 0]]).unwrap();
        let e = embed_rows(&b, &[0, 2], 3);
        assert_eq!(e.row(0), b.row(0));
        assert_eq!(e.row(1), &[Cell::Black, Cell::Black]);
        assert_eq!(e.row(2), b.row(1));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(Mode::parse(m.name()), Some(m));
        }
        assert_eq!(Mode::parse("rgb"), None);
    }
}
