//! Multi-secret schemes: every participant subset of size at least `k`
//! recovers its own secret image.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{color_basis, gray_ladder, naor_shamir_kk, BasisSet, SymbolKind};
use crate::combin::combinations;
use crate::error::{Error, Result};
use crate::extension::{build_extension, channel_color, ColorModel};
use crate::matrix::{Cell, SymbolMatrix};
use crate::scheme::{embed_rows, Block, Mode, Ratio, Reveal, Scheme};

/// Participants (1-based, sorted) whose stack reveals secret `secret_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualifiedSet {
    pub members: Vec<usize>,
    pub secret_index: usize,
}

impl QualifiedSet {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.members.iter().map(|m| m - 1).collect()
    }
}

/// All subsets of size `k..=n`, by size and then lexicographically.
pub fn enumerate_qualified(k: usize, n: usize) -> Result<Vec<QualifiedSet>> {
    if k < 2 || k > n {
        return Err(Error::Parameter(format!("need 2 <= k <= n, got k={k} n={n}")));
    }
    let sets = (k..=n)
        .flat_map(|size| combinations(n, size))
        .enumerate()
        .map(|(i, members)| QualifiedSet {
            members: members.into_iter().map(|m| m + 1).collect(),
            secret_index: i + 1,
        })
        .collect();
    Ok(sets)
}

/// Embed a `p_i`-row matrix into `n` rows at the set's members.
pub fn embed(b: &SymbolMatrix, set: &QualifiedSet, n: usize) -> Result<SymbolMatrix> {
    if b.rows() != set.size() {
        return Err(Error::Dimension(format!(
            "{}-row matrix for a {}-member set",
            b.rows(),
            set.size()
        )));
    }
    if set.members.iter().any(|&m| m == 0 || m > n) {
        return Err(Error::Parameter(format!("member outside 1..={n} in {:?}", set.members)));
    }
    Ok(embed_rows(b, &set.zero_based(), n))
}

/// Secret symbol domains of a multi-secret scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecretDomain {
    /// `g_i` gray levels for secret `i`; one entry per qualified set.
    Gray(Vec<usize>),
    /// Every secret uses the same `c`-colour palette.
    Palette(u16),
}

/// Cover domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverDomain {
    /// `h_j` gray levels for cover `j`.
    Gray(Vec<usize>),
    /// Every cover uses the same `c`-colour palette.
    Palette(u16),
}

impl CoverDomain {
    fn kind(&self) -> SymbolKind {
        match self {
            CoverDomain::Gray(_) => SymbolKind::Gray,
            CoverDomain::Palette(c) => SymbolKind::Palette(*c),
        }
    }

    fn levels(&self, n: usize) -> Vec<usize> {
        match self {
            CoverDomain::Gray(levels) => levels.clone(),
            CoverDomain::Palette(_) => vec![2; n],
        }
    }
}

/// Multi-secret scheme with generated per-set bases: gray ladders over the
/// `(p_i, p_i)` even/odd-subset scheme, or colour bases over that scheme.
pub fn build_mevcs(k: usize, n: usize, secrets: &SecretDomain, covers: &CoverDomain) -> Result<Scheme> {
    let sets = enumerate_qualified(k, n)?;
    let bases = match secrets {
        SecretDomain::Gray(levels) => {
            if levels.len() != sets.len() {
                return Err(Error::Dimension(format!(
                    "{} secret level counts for {} qualified sets",
                    levels.len(),
                    sets.len()
                )));
            }
            sets.iter()
                .zip(levels)
                .map(|(set, &g)| gray_ladder(&naor_shamir_kk(set.size())?, g))
                .collect::<Result<Vec<_>>>()?
        }
        SecretDomain::Palette(c) => sets
            .iter()
            .map(|set| color_basis(*c, &naor_shamir_kk(set.size())?))
            .collect::<Result<Vec<_>>>()?,
    };
    build_mevcs_with_bases(k, n, bases, covers)
}

/// Multi-secret scheme from explicit per-set bases, one `(p_i, p_i)` set per
/// qualified set in canonical order.
pub fn build_mevcs_with_bases(k: usize, n: usize, bases: Vec<BasisSet>, covers: &CoverDomain) -> Result<Scheme> {
    let sets = enumerate_qualified(k, n)?;
    if bases.len() != sets.len() {
        return Err(Error::Dimension(format!(
            "{} bases for {} qualified sets",
            bases.len(),
            sets.len()
        )));
    }
    let mode = match bases[0].kind {
        SymbolKind::Gray => Mode::GrayMevcs,
        SymbolKind::Palette(_) => Mode::ColorMevcs,
    };
    let blocks = sets
        .iter()
        .zip(bases)
        .map(|(set, basis)| Block {
            members: set.zero_based(),
            reveal: Reveal::Exact,
            basis,
        })
        .collect();
    let extension = build_extension(k, n, &covers.levels(n))?;
    Scheme::new(mode, k, n, covers.kind(), extension, blocks)
}

fn palette_matrix(rows: &[&[u16]]) -> SymbolMatrix {
    SymbolMatrix::from_rows(
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| if x == 0 { Cell::Black } else { Cell::Color(x) })
                    .collect()
            })
            .collect(),
    )
    .expect("fixture is rectangular")
}

/// The shipped three-colour `(2,3)` multi-secret bases, restricted to each
/// set's member rows (0 stands for Black).
pub fn three_color_2_3_bases() -> Vec<BasisSet> {
    let pair =
        |first: u16, a: u16, b: u16| -> SymbolMatrix { palette_matrix(&[&[first, a, 0, b, 0], &[first, 0, a, 0, b]]) };
    let triple = |first: u16, a: u16, b: u16| -> SymbolMatrix {
        palette_matrix(&[
            &[first, a, 0, 0, b, 0, 0],
            &[first, 0, a, 0, 0, b, 0],
            &[first, 0, 0, a, 0, 0, b],
        ])
    };
    let pairs = || vec![pair(1, 2, 3), pair(2, 1, 3), pair(3, 1, 2)];
    let mut bases: Vec<BasisSet> = (0..3)
        .map(|_| BasisSet::new(2, 2, SymbolKind::Palette(3), pairs(), 1, 1).expect("fixture"))
        .collect();
    bases.push(
        BasisSet::new(
            3,
            3,
            SymbolKind::Palette(3),
            vec![triple(1, 2, 3), triple(2, 1, 3), triple(3, 1, 2)],
            1,
            1,
        )
        .expect("fixture"),
    );
    bases
}

/// Three per-channel gray schemes rendered side by side (red, green, blue
/// or cyan, magenta, yellow). Channel matrices stay White/Black;
/// [`ChannelScheme::render`] maps them onto the channel's subpixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelScheme {
    pub model: ColorModel,
    pub channels: [Scheme; 3],
}

impl ChannelScheme {
    pub fn m_e(&self) -> usize {
        self.channels.iter().map(Scheme::m_e).sum()
    }

    /// Overall relative difference of secret `i`: the channel contrasts
    /// weighted by channel width.
    pub fn alpha_star(&self, i: usize) -> Ratio {
        let gap: usize = self.channels.iter().map(|s| s.blocks[i].basis.alpha_m).sum();
        Ratio::new(gap as u64, self.m_e() as u64)
    }

    /// Subpixel a channel's gray cell turns into on the transparency.
    pub fn render(&self, channel: usize, cell: Cell) -> Cell {
        let primary = channel_color(channel);
        match (self.model, cell) {
            (ColorModel::Additive, Cell::White) => primary,
            (ColorModel::Subtractive, Cell::Black) => primary,
            (_, other) => other,
        }
    }
}

/// Per-channel single-secret gray schemes over one binary base.
pub fn build_channel_evcs(
    base: &BasisSet,
    secret_levels: [usize; 3],
    cover_levels: [&[usize]; 3],
    model: ColorModel,
) -> Result<ChannelScheme> {
    let build = |l: usize| -> Result<Scheme> { crate::build::build_gray_evcs(base, secret_levels[l], cover_levels[l]) };
    Ok(ChannelScheme {
        model,
        channels: [build(0)?, build(1)?, build(2)?],
    })
}

/// Per-channel gray multi-secret schemes.
pub fn build_color_mevcs(
    k: usize,
    n: usize,
    secret_levels: [&[usize]; 3],
    cover_levels: [&[usize]; 3],
    model: ColorModel,
) -> Result<ChannelScheme> {
    let build = |l: usize| -> Result<Scheme> {
        build_mevcs(
            k,
            n,
            &SecretDomain::Gray(secret_levels[l].to_vec()),
            &CoverDomain::Gray(cover_levels[l].to_vec()),
        )
    };
    Ok(ChannelScheme {
        model,
        channels: [build(0)?, build(1)?, build(2)?],
    })
}

/// Binary multi-secret scheme over even/odd-subset bases.
pub fn build_binary_mevcs(k: usize, n: usize) -> Result<Scheme> {
    let s = enumerate_qualified(k, n)?.len();
    build_mevcs(k, n, &SecretDomain::Gray(vec![2; s]), &CoverDomain::Gray(vec![2; n]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_of_three_sets() {
        let sets = enumerate_qualified(2, 3).unwrap();
        let members: Vec<Vec<usize>> = sets.iter().map(|s| s.members.clone()).collect();
        assert_eq!(members, vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]]);
        assert_eq!(sets[3].secret_index, 4);
    }

    #[test]
    fn set_counts() {
        assert_eq!(enumerate_qualified(3, 3).unwrap().len(), 1);
        assert_eq!(enumerate_qualified(2, 4).unwrap().len(), 11);
        assert!(enumerate_qualified(4, 3).is_err());
    }

    #[test]
    fn embed_first_fixture() {
        let bases = three_color_2_3_bases();
        let set = &enumerate_qualified(2, 3).unwrap()[0];
        let e = embed(&bases[0].variants[0], set, 3).unwrap();
        assert_eq!(
            e,
            palette_matrix(&[&[1, 2, 0, 3, 0], &[1, 0, 2, 0, 3], &[0, 0, 0, 0, 0]])
        );
    }

    #[test]
    fn embed_full_set_is_identity() {
        let b = naor_shamir_kk(3).unwrap().variants[1].clone();
        let set = QualifiedSet {
            members: vec![1, 2, 3],
            secret_index: 1,
        };
        assert_eq!(embed(&b, &set, 3).unwrap(), b);
        let bad = QualifiedSet {
            members: vec![1, 2, 4],
            secret_index: 1,
        };
        assert!(embed(&b, &bad, 3).is_err());
    }

    #[test]
    fn fixture_expansion() {
        let s = build_mevcs_with_bases(2, 3, three_color_2_3_bases(), &CoverDomain::Palette(3)).unwrap();
        assert_eq!(s.m_e(), 25);
        for i in 0..4 {
            assert_eq!(s.alpha_e(i), Ratio::new(1, 25));
        }
    }

    #[test]
    fn binary_expansions() {
        assert_eq!(build_binary_mevcs(2, 3).unwrap().m_e(), 13);
        assert_eq!(build_binary_mevcs(3, 3).unwrap().m_e(), 6);
    }

    #[test]
    fn channel_sums() {
        let levels = [2usize; 4];
        let covers = [2usize; 3];
        let ch = build_color_mevcs(
            2,
            3,
            [&levels, &levels, &levels],
            [&covers, &covers, &covers],
            ColorModel::Additive,
        )
        .unwrap();
        assert_eq!(ch.m_e(), 39);
        assert_eq!(ch.alpha_star(0), ch.channels[0].alpha_e(0));
        assert_eq!(ch.render(0, Cell::White), Cell::Color(1));
        assert_eq!(ch.render(0, Cell::Black), Cell::Black);
    }
}
