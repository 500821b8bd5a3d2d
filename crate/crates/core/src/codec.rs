//! Pixel-wise encoding of secret and cover images into share images, and
//! stacking of shares.
//!
//! Every pixel's `T` is column-permuted with its own ChaCha8 stream (stream
//! id `(y << 32) | x` of a generator keyed by the seed), so output depends
//! only on the seed and the inputs, never on iteration order.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::SymbolKind;
use crate::error::{Error, Result};
use crate::matrix::{Cell, WeightReport};
use crate::scheme::Scheme;

/// Image of symbol indices: gray levels (1 = lightest) or palette ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u16>,
}

impl IndexedImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u16>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Dimension(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(IndexedImage { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u16) -> Self {
        IndexedImage {
            width,
            height,
            pixels: alloc::vec![value; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }
}

/// Grid of subpixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellImage {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<Cell>,
}

impl CellImage {
    pub fn new(width: usize, height: usize, cells: Vec<Cell>) -> Result<Self> {
        if cells.len() != width * height {
            return Err(Error::Dimension(format!(
                "{} cells for a {width}x{height} image",
                cells.len()
            )));
        }
        Ok(CellImage { width, height, cells })
    }

    pub fn get(&self, x: usize, y: usize) -> Cell {
        self.cells[y * self.width + x]
    }
}

/// Near-square block holding one pixel's subpixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileShape {
    pub tile_h: usize,
    pub tile_w: usize,
    /// Trailing Black cells after the `m_E` real subpixels.
    pub pad_count: usize,
}

impl TileShape {
    pub fn area(&self) -> usize {
        self.tile_h * self.tile_w
    }
}

/// Tile for `m_E` subpixels: minimise padding plus side difference,
/// preferring less padding on ties; the taller side comes first.
///
/// Gives 5x2 for 10, 5x5 for 25 and 4x4 for 13.
pub fn plan_tile(m_e: usize) -> Result<TileShape> {
    if m_e == 0 {
        return Err(Error::Parameter("pixel expansion must be positive".into()));
    }
    let mut best: Option<(usize, usize, TileShape)> = None;
    for w in 1..=m_e {
        let h = m_e.div_ceil(w).max(w);
        if h < w {
            continue;
        }
        let pad = h * w - m_e;
        let cost = pad + (h - w);
        let candidate = (
            cost,
            pad,
            TileShape {
                tile_h: h,
                tile_w: w,
                pad_count: pad,
            },
        );
        if best.as_ref().is_none_or(|b| (cost, pad) < (b.0, b.1)) {
            best = Some(candidate);
        }
        if w * w > m_e {
            break;
        }
    }
    Ok(best.expect("m_e >= 1").2)
}

/// One participant's transparency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareImage {
    pub image: CellImage,
    pub tile: TileShape,
    pub scheme_id: String,
    /// 1-based participant index.
    pub share_index: usize,
    pub seed: u64,
}

fn pixel_rng(seed: u64, x: usize, y: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((y as u64) << 32) | x as u64);
    rng
}

/// Column order applied to pixel `(x, y)`: tile cell `j` shows column
/// `perm[j]` of `T`.
pub fn pixel_permutation(seed: u64, x: usize, y: usize, m_e: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..m_e).collect();
    perm.shuffle(&mut pixel_rng(seed, x, y));
    perm
}

fn check_images(scheme: &Scheme, secrets: &[IndexedImage], covers: &[IndexedImage]) -> Result<(usize, usize)> {
    if secrets.len() != scheme.secrets() {
        return Err(Error::Dimension(format!(
            "{} secret images for {} secrets",
            secrets.len(),
            scheme.secrets()
        )));
    }
    if covers.len() != scheme.n {
        return Err(Error::Dimension(format!(
            "{} cover images for {} shares",
            covers.len(),
            scheme.n
        )));
    }
    let (w, h) = (secrets[0].width, secrets[0].height);
    for (what, img) in secrets
        .iter()
        .map(|i| ("secret", i))
        .chain(covers.iter().map(|i| ("cover", i)))
    {
        if (img.width, img.height) != (w, h) {
            return Err(Error::Dimension(format!(
                "{what} image is {}x{}, expected {w}x{h}",
                img.width, img.height
            )));
        }
    }
    let symbol_domains = scheme.symbol_domains();
    for (i, img) in secrets.iter().enumerate() {
        check_range(img, symbol_domains[i], &format!("secret {}", i + 1))?;
    }
    let cover_domains = scheme.cover_domains();
    for (i, img) in covers.iter().enumerate() {
        check_range(img, cover_domains[i], &format!("cover {}", i + 1))?;
    }
    Ok((w, h))
}

fn check_range(img: &IndexedImage, domain: usize, what: &str) -> Result<()> {
    if let Some(pos) = img.pixels.iter().position(|&p| p == 0 || p as usize > domain) {
        return Err(Error::Symbol(format!(
            "{what}: value {} at ({}, {}) outside 1..={domain}",
            img.pixels[pos],
            pos % img.width,
            pos / img.width
        )));
    }
    Ok(())
}

/// Encode one pixel position: assemble `T`, permute its columns and write
/// row `i` into share `i`'s tile.
#[allow(clippy::too_many_arguments)]
fn encode_pixel(
    scheme: &Scheme,
    cover: &[u16],
    symbols: &[u16],
    perm: &[usize],
    tile: TileShape,
    shares: &mut [CellImage],
    x: usize,
    y: usize,
) -> Result<()> {
    let t = scheme.assemble(cover, symbols)?;
    for (r, share) in shares.iter_mut().enumerate() {
        let row = t.row(r);
        for j in 0..tile.area() {
            let cell = perm.get(j).map_or(Cell::Black, |&p| row[p]);
            let (ty, tx) = (j / tile.tile_w, j % tile.tile_w);
            let (px, py) = (x * tile.tile_w + tx, y * tile.tile_h + ty);
            share.cells[py * share.width + px] = cell;
        }
    }
    Ok(())
}

/// Encode secrets (one per scheme secret) and covers (one per share) into
/// `n` shares. The same seed always yields the same shares.
pub fn encode(
    scheme: &Scheme,
    secrets: &[IndexedImage],
    covers: &[IndexedImage],
    seed: u64,
) -> Result<Vec<ShareImage>> {
    let (w, h) = check_images(scheme, secrets, covers)?;
    let m_e = scheme.m_e();
    let tile = plan_tile(m_e)?;
    let (sw, sh) = (w * tile.tile_w, h * tile.tile_h);
    let mut images: Vec<CellImage> = (0..scheme.n)
        .map(|_| CellImage {
            width: sw,
            height: sh,
            cells: alloc::vec![Cell::Black; sw * sh],
        })
        .collect();
    let mut cover = alloc::vec![0u16; scheme.n];
    let mut symbols = alloc::vec![0u16; secrets.len()];
    for y in 0..h {
        for x in 0..w {
            for (c, img) in cover.iter_mut().zip(covers) {
                *c = img.get(x, y);
            }
            for (s, img) in symbols.iter_mut().zip(secrets) {
                *s = img.get(x, y);
            }
            let perm = pixel_permutation(seed, x, y, m_e);
            encode_pixel(scheme, &cover, &symbols, &perm, tile, &mut images, x, y)?;
        }
    }
    let id = scheme.id();
    Ok(images
        .into_iter()
        .enumerate()
        .map(|(i, image)| ShareImage {
            image,
            tile,
            scheme_id: id.clone(),
            share_index: i + 1,
            seed,
        })
        .collect())
}

/// Cellwise generalized OR of a non-empty set of equally sized images.
pub fn stack(images: &[&CellImage]) -> Result<CellImage> {
    let (first, rest) = images
        .split_first()
        .ok_or_else(|| Error::Parameter("nothing to stack".into()))?;
    let mut out = (*first).clone();
    for img in rest {
        if (img.width, img.height) != (out.width, out.height) {
            return Err(Error::Dimension(format!(
                "cannot stack {}x{} onto {}x{}",
                img.width, img.height, out.width, out.height
            )));
        }
        for (acc, &cell) in out.cells.iter_mut().zip(&img.cells) {
            *acc = acc.stack(cell);
        }
    }
    Ok(out)
}

/// Stack shares, checking they come from the same tiling.
pub fn stack_shares(shares: &[&ShareImage]) -> Result<CellImage> {
    if let Some(first) = shares.first() {
        if shares.iter().any(|s| s.tile != first.tile) {
            return Err(Error::Dimension("shares use different tile shapes".into()));
        }
    }
    let images: Vec<&CellImage> = shares.iter().map(|s| &s.image).collect();
    stack(&images)
}

/// Per-tile weight reports, row-major over tiles.
pub fn measure(image: &CellImage, tile: TileShape) -> Result<Vec<WeightReport>> {
    if !image.width.is_multiple_of(tile.tile_w) || !image.height.is_multiple_of(tile.tile_h) {
        return Err(Error::Dimension(format!(
            "{}x{} image is not a whole number of {}x{} tiles",
            image.width, image.height, tile.tile_h, tile.tile_w
        )));
    }
    let (tw, th) = (image.width / tile.tile_w, image.height / tile.tile_h);
    let mut reports = Vec::with_capacity(tw * th);
    let mut buf = Vec::with_capacity(tile.area());
    for ty in 0..th {
        for tx in 0..tw {
            buf.clear();
            for dy in 0..tile.tile_h {
                for dx in 0..tile.tile_w {
                    buf.push(image.get(tx * tile.tile_w + dx, ty * tile.tile_h + dy));
                }
            }
            reports.push(WeightReport::of(&buf));
        }
    }
    Ok(reports)
}

fn padded(mut report: WeightReport, pad: usize) -> WeightReport {
    report.black_count += pad;
    report.nonwhite_count += pad;
    report
}

/// Reads a secret symbol off a stacked tile using the scheme's thresholds.
///
/// Reference weights come from stacking `T` for every symbol of the target
/// secret with all other inputs held at symbol 1; the other secrets and the
/// covers contribute the same amount to a qualified stack whatever they are.
#[derive(Debug, Clone)]
pub struct SecretClassifier {
    kind: SymbolKind,
    alpha_m: usize,
    /// Per-symbol expected tile report, symbol `i + 1` at index `i`.
    reference: Vec<WeightReport>,
}

impl SecretClassifier {
    pub fn new(scheme: &Scheme, secret: usize, rows: &[usize]) -> Result<Self> {
        let block = scheme
            .blocks
            .get(secret)
            .ok_or_else(|| Error::Parameter(format!("no secret {}", secret + 1)))?;
        if rows.is_empty() || rows.iter().any(|&r| r >= scheme.n) {
            return Err(Error::Parameter(format!("bad share subset {rows:?}")));
        }
        let pad = plan_tile(scheme.m_e())?.pad_count;
        let cover = alloc::vec![1u16; scheme.n];
        let mut symbols = alloc::vec![1u16; scheme.secrets()];
        let mut reference = Vec::with_capacity(block.basis.symbols());
        for s in 1..=block.basis.symbols() as u16 {
            symbols[secret] = s;
            let t = scheme.assemble(&cover, &symbols)?;
            reference.push(padded(t.stack_weight(rows), pad));
        }
        Ok(SecretClassifier {
            kind: block.basis.kind,
            alpha_m: block.basis.alpha_m,
            reference,
        })
    }

    /// Expected report for each symbol.
    pub fn reference(&self) -> &[WeightReport] {
        &self.reference
    }

    /// Symbol shown by a stacked tile, or `None` when the tile falls between
    /// thresholds.
    pub fn classify(&self, tile: &WeightReport) -> Option<u16> {
        match self.kind {
            SymbolKind::Gray => {
                // level j is shown when the weight reaches level j's
                // threshold but stays a full gap below level j + 1's
                let w = tile.nonwhite_count;
                let level = self.reference.iter().rposition(|r| w >= r.nonwhite_count)?;
                match self.reference.get(level + 1) {
                    Some(next) if w + self.alpha_m > next.nonwhite_count => None,
                    _ => Some(level as u16 + 1),
                }
            }
            SymbolKind::Palette(c) => {
                let mut best: Option<(usize, u16)> = None;
                let mut tie = false;
                for color in 1..=c {
                    let base = (1..=c)
                        .filter(|&s| s != color)
                        .map(|s| self.reference[s as usize - 1].color(color))
                        .min()
                        .unwrap_or(0);
                    let score = tile.color(color).saturating_sub(base);
                    if score < self.alpha_m.max(1) {
                        continue;
                    }
                    match best {
                        Some((b, _)) if b == score => tie = true,
                        Some((b, _)) if b > score => {}
                        _ => {
                            best = Some((score, color));
                            tie = false;
                        }
                    }
                }
                if tie {
                    None
                } else {
                    best.map(|(_, color)| color)
                }
            }
        }
    }
}

/// Reads the cover value off a single share's tile.
#[derive(Debug, Clone)]
pub struct CoverClassifier {
    reference: Vec<WeightReport>,
}

impl CoverClassifier {
    pub fn new(scheme: &Scheme, row: usize) -> Result<Self> {
        if row >= scheme.n {
            return Err(Error::Parameter(format!("no share {}", row + 1)));
        }
        let pad = plan_tile(scheme.m_e())?.pad_count;
        let mut cover = alloc::vec![1u16; scheme.n];
        let symbols = alloc::vec![1u16; scheme.secrets()];
        let domain = scheme.cover_domains()[row];
        let reference = (1..=domain as u16)
            .map(|v| {
                cover[row] = v;
                let t = scheme.assemble(&cover, &symbols)?;
                Ok(padded(WeightReport::of(t.row(row)), pad))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CoverClassifier { reference })
    }

    /// Cover value whose expected report matches exactly.
    pub fn classify(&self, tile: &WeightReport) -> Option<u16> {
        let mut hits = self
            .reference
            .iter()
            .enumerate()
            .filter(|(_, r)| *r == tile)
            .map(|(i, _)| i as u16 + 1);
        let first = hits.next()?;
        hits.next().is_none().then_some(first)
    }
}

/// Uniform-bin quantiser from 8-bit intensity to `g` levels, level 1 being
/// the lightest: bin `b` covers `[⌊255b/g⌋, ⌊255(b+1)/g⌋)`, 255 falls in the
/// top bin and level = `g - b`. At most 255 levels, so no bin is empty.
pub fn quantize_gray(value: u8, g: usize) -> Result<u16> {
    if !(1..=255).contains(&g) {
        return Err(Error::Parameter(format!("{g} gray levels")));
    }
    let v = value as usize;
    let bin = (0..g).rev().find(|&b| 255 * b / g <= v).unwrap_or(0);
    Ok((g - bin) as u16)
}

/// Representative 8-bit intensity of a level; quantises back to the level.
pub fn gray_value(level: u16, g: usize) -> Result<u8> {
    if level == 0 || level as usize > g || g > 255 {
        return Err(Error::Symbol(format!("level {level} of {g}")));
    }
    let bin = g - level as usize;
    Ok(if bin + 1 == g { 255 } else { (255 * bin / g) as u8 })
}
