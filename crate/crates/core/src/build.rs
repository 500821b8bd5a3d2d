//! Single-secret extended schemes: binary, gray-level and palette colour.

use alloc::format;
use alloc::vec;

use crate::basis::{builtin, color_basis, gray_ladder, naor_shamir_kk, BasisSet, SymbolKind};
use crate::error::{Error, Result};
use crate::extension::build_extension;
use crate::scheme::{Block, Mode, Reveal, Scheme};

/// Binary basis used when none is supplied: the built-in `(2,2)` and
/// `(2,3)` pairs, or the even/odd-subset construction when `k == n`.
pub fn default_binary_base(k: usize, n: usize) -> Result<BasisSet> {
    match (k, n) {
        (2, 2) => builtin("2-2"),
        (2, 3) => builtin("2-3"),
        (k, n) if k == n => naor_shamir_kk(k),
        _ => Err(Error::Parameter(format!(
            "no built-in ({k},{n}) basis; load one from a file"
        ))),
    }
}

fn single_block(basis: BasisSet) -> Block {
    Block {
        members: (0..basis.n).collect(),
        reveal: Reveal::Threshold,
        basis,
    }
}

/// Binary secret, binary covers.
pub fn build_binary_evcs(basis: BasisSet) -> Result<Scheme> {
    if !basis.is_binary() {
        return Err(Error::Parameter("binary EVCS needs a two-variant gray basis".into()));
    }
    let (k, n) = (basis.k, basis.n);
    let extension = build_extension(k, n, &vec![2; n])?;
    Scheme::new(
        Mode::BinaryEvcs,
        k,
        n,
        SymbolKind::Gray,
        extension,
        vec![single_block(basis)],
    )
}

/// `g`-level secret over a binary base, covers with `cover_levels[i]`
/// levels.
pub fn build_gray_evcs(base: &BasisSet, g: usize, cover_levels: &[usize]) -> Result<Scheme> {
    let ladder = gray_ladder(base, g)?;
    let (k, n) = (base.k, base.n);
    let extension = build_extension(k, n, cover_levels)?;
    Scheme::new(
        Mode::GrayEvcs,
        k,
        n,
        SymbolKind::Gray,
        extension,
        vec![single_block(ladder)],
    )
}

/// `c`-colour secret and `c`-colour covers; one star per row carries the
/// cover colour.
pub fn build_color_evcs(c: u16, base: &BasisSet) -> Result<Scheme> {
    let basis = color_basis(c, base)?;
    let (k, n) = (base.k, base.n);
    let extension = build_extension(k, n, &vec![2; n])?;
    Scheme::new(
        Mode::ColorEvcs,
        k,
        n,
        SymbolKind::Palette(c),
        extension,
        vec![single_block(basis)],
    )
}
