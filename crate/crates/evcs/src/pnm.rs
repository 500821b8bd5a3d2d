//! Plain PGM (P2) and PPM (P3) with maxval 255, and the mapping between
//! those files and symbol images, cell images and shares.

use std::fmt::Write as _;

use evcs_core::codec::{gray_value, quantize_gray, CellImage, IndexedImage, ShareImage, TileShape};
use evcs_core::matrix::Cell;

use crate::error::{CliError, Result};
use crate::palette::Palette;

const WHITE: [u8; 3] = [255, 255, 255];
const BLACK: [u8; 3] = [0, 0, 0];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pixels {
    Gray(Vec<u8>),
    Rgb(Vec<[u8; 3]>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pnm {
    pub width: usize,
    pub height: usize,
    pub pixels: Pixels,
    /// Comment lines without the leading `#`.
    pub comments: Vec<String>,
}

impl Pnm {
    pub fn rgb(&self, i: usize) -> [u8; 3] {
        match &self.pixels {
            Pixels::Gray(v) => [v[i]; 3],
            Pixels::Rgb(v) => v[i],
        }
    }

    /// First comment starting with `tag` followed by a space, minus the tag.
    pub fn tagged(&self, tag: &str) -> Option<&str> {
        self.comments
            .iter()
            .find_map(|c| c.strip_prefix(tag).and_then(|rest| rest.strip_prefix(' ')))
    }
}

pub fn parse_pnm(text: &str) -> Result<Pnm> {
    let mut comments = Vec::new();
    let mut tokens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let (body, comment) = match line.split_once('#') {
            Some((body, c)) => (body, Some(c)),
            None => (line, None),
        };
        tokens.extend(body.split_whitespace().map(|t| (i + 1, t)));
        comments.extend(comment.map(str::to_string));
    }
    let last_line = tokens.last().map_or(1, |&(l, _)| l);
    let mut it = tokens.into_iter();
    let channels = match it.next() {
        Some((_, "P2")) => 1,
        Some((_, "P3")) => 3,
        _ => return Err(CliError::parse(1, "expected plain PGM (P2) or PPM (P3)")),
    };
    let mut number = |what: &str| -> Result<(usize, usize)> {
        let (line, tok) = it
            .next()
            .ok_or_else(|| CliError::parse(last_line, format!("expected {what}, found end of file")))?;
        let v = tok
            .parse()
            .map_err(|_| CliError::parse(line, format!("expected {what}, found `{tok}`")))?;
        Ok((line, v))
    };
    let (_, width) = number("width")?;
    let (_, height) = number("height")?;
    let (line, maxval) = number("maxval")?;
    if maxval != 255 {
        return Err(CliError::parse(line, format!("maxval {maxval}, only 255 is supported")));
    }
    let mut samples = Vec::with_capacity(width * height * channels);
    for _ in 0..width * height * channels {
        let (line, v) = number("sample")?;
        let v = u8::try_from(v).map_err(|_| CliError::parse(line, format!("sample {v} above 255")))?;
        samples.push(v);
    }
    if let Some((line, tok)) = it.next() {
        return Err(CliError::parse(line, format!("unexpected trailing `{tok}`")));
    }
    let pixels = if channels == 1 {
        Pixels::Gray(samples)
    } else {
        Pixels::Rgb(samples.chunks(3).map(|c| [c[0], c[1], c[2]]).collect())
    };
    Ok(Pnm {
        width,
        height,
        pixels,
        comments,
    })
}

/// Canonical text: magic, comments, size, maxval, one image row per line.
pub fn print_pnm(p: &Pnm) -> String {
    let mut out = String::new();
    out.push_str(match p.pixels {
        Pixels::Gray(_) => "P2\n",
        Pixels::Rgb(_) => "P3\n",
    });
    for c in &p.comments {
        let _ = writeln!(out, "#{c}");
    }
    let _ = writeln!(out, "{} {}\n255", p.width, p.height);
    for y in 0..p.height {
        let row: Vec<String> = (0..p.width)
            .map(|x| {
                let i = y * p.width + x;
                match &p.pixels {
                    Pixels::Gray(v) => v[i].to_string(),
                    Pixels::Rgb(v) => format!("{} {} {}", v[i][0], v[i][1], v[i][2]),
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// How an input image's pixels become symbols.
#[derive(Debug, Clone, Copy)]
pub enum Expect<'a> {
    /// Quantise 8-bit gray to this many levels, 1 = lightest.
    Gray(usize),
    /// Exact RGB match against the palette.
    Palette(&'a Palette),
}

pub fn to_indexed(p: &Pnm, expect: Expect) -> Result<IndexedImage> {
    let mut pixels = Vec::with_capacity(p.width * p.height);
    for i in 0..p.width * p.height {
        let rgb = p.rgb(i);
        let (x, y) = (i % p.width.max(1), i / p.width.max(1));
        let symbol = match expect {
            Expect::Gray(g) => {
                if rgb[0] != rgb[1] || rgb[1] != rgb[2] {
                    return Err(CliError::Usage(format!("pixel ({x}, {y}) is not gray: {rgb:?}")));
                }
                quantize_gray(rgb[0], g)?
            }
            Expect::Palette(pal) => pal
                .lookup(rgb)
                .ok_or_else(|| CliError::Usage(format!("pixel ({x}, {y}) colour {rgb:?} is not in the palette")))?,
        };
        pixels.push(symbol);
    }
    Ok(IndexedImage::new(p.width, p.height, pixels)?)
}

/// Symbol image back to pixels: gray levels at their representative value,
/// palette colours at their RGB.
pub fn from_indexed(img: &IndexedImage, expect: Expect) -> Result<Pnm> {
    let pixels = match expect {
        Expect::Gray(g) => Pixels::Gray(img.pixels.iter().map(|&l| gray_value(l, g)).collect::<Result<_, _>>()?),
        Expect::Palette(pal) => Pixels::Rgb(
            img.pixels
                .iter()
                .map(|&c| {
                    pal.rgb(c)
                        .ok_or_else(|| CliError::Usage(format!("colour {c} is not in the palette")))
                })
                .collect::<Result<_>>()?,
        ),
    };
    Ok(Pnm {
        width: img.width,
        height: img.height,
        pixels,
        comments: Vec::new(),
    })
}

/// Black and White are fixed; colours need a palette. Without one the
/// output is PGM and coloured cells are an error.
pub fn from_cells(img: &CellImage, palette: Option<&Palette>) -> Result<Pnm> {
    let pixels = match palette {
        None => Pixels::Gray(
            img.cells
                .iter()
                .map(|&c| match c {
                    Cell::White => Ok(255),
                    Cell::Black => Ok(0),
                    Cell::Color(t) => Err(CliError::Usage(format!("colour {t} cell needs a palette"))),
                })
                .collect::<Result<_>>()?,
        ),
        Some(pal) => Pixels::Rgb(
            img.cells
                .iter()
                .map(|&c| match c {
                    Cell::White => Ok(WHITE),
                    Cell::Black => Ok(BLACK),
                    Cell::Color(t) => pal
                        .rgb(t)
                        .ok_or_else(|| CliError::Usage(format!("colour {t} is not in the palette"))),
                })
                .collect::<Result<_>>()?,
        ),
    };
    Ok(Pnm {
        width: img.width,
        height: img.height,
        pixels,
        comments: Vec::new(),
    })
}

/// Inverse of [`from_cells`]; pure black and white win over palette entries.
pub fn to_cells(p: &Pnm, palette: Option<&Palette>) -> Result<CellImage> {
    let mut cells = Vec::with_capacity(p.width * p.height);
    for i in 0..p.width * p.height {
        let cell = match p.rgb(i) {
            WHITE => Cell::White,
            BLACK => Cell::Black,
            rgb => palette
                .and_then(|pal| pal.lookup(rgb))
                .map(Cell::Color)
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "pixel ({}, {}) colour {rgb:?} is neither black, white nor a palette colour",
                        i % p.width,
                        i / p.width
                    ))
                })?,
        };
        cells.push(cell);
    }
    Ok(CellImage::new(p.width, p.height, cells)?)
}

fn tile_text(t: TileShape) -> String {
    format!("{}x{}", t.tile_h, t.tile_w)
}

/// `vcshare scheme=<id> share=<i> seed=<s> tile=<h>x<w>`.
pub fn share_comment(s: &ShareImage) -> String {
    format!(
        "vcshare scheme={} share={} seed={} tile={}",
        s.scheme_id,
        s.share_index,
        s.seed,
        tile_text(s.tile)
    )
}

pub fn share_to_pnm(s: &ShareImage, palette: Option<&Palette>) -> Result<Pnm> {
    let mut p = from_cells(&s.image, palette)?;
    p.comments.push(share_comment(s));
    Ok(p)
}

fn field<'a>(comment: &'a str, key: &str) -> Option<&'a str> {
    comment
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
}

fn parse_tile(text: &str, pad_from: Option<usize>) -> Option<TileShape> {
    let (h, w) = text.split_once('x')?;
    let (tile_h, tile_w) = (h.parse().ok()?, w.parse().ok()?);
    Some(TileShape {
        tile_h,
        tile_w,
        pad_count: pad_from.unwrap_or(0),
    })
}

/// Rebuild a share from its file; the tile's padding is unknown to the file
/// and left at 0.
pub fn pnm_to_share(p: &Pnm, palette: Option<&Palette>) -> Result<ShareImage> {
    let c = p
        .tagged("vcshare")
        .ok_or_else(|| CliError::Usage("not a share: no `#vcshare` comment".into()))?;
    let bad = |what: &str| CliError::Usage(format!("share comment has no valid {what}"));
    let tile = field(c, "tile")
        .and_then(|t| parse_tile(t, None))
        .ok_or_else(|| bad("tile"))?;
    let share_index = field(c, "share")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad("share"))?;
    let seed = field(c, "seed")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad("seed"))?;
    let scheme_id = field(c, "scheme").ok_or_else(|| bad("scheme"))?.to_string();
    Ok(ShareImage {
        image: to_cells(p, palette)?,
        tile,
        scheme_id,
        share_index,
        seed,
    })
}

/// `vcstack scheme=<id> shares=<i,j,..> tile=<h>x<w>`.
pub fn stack_comment(scheme_id: &str, shares: &[usize], tile: TileShape) -> String {
    let list: Vec<String> = shares.iter().map(|s| s.to_string()).collect();
    format!(
        "vcstack scheme={scheme_id} shares={} tile={}",
        list.join(","),
        tile_text(tile)
    )
}

/// Tile recorded in a share or stack comment.
pub fn recorded_tile(p: &Pnm) -> Option<TileShape> {
    ["vcshare", "vcstack"]
        .iter()
        .find_map(|tag| p.tagged(tag))
        .and_then(|c| field(c, "tile"))
        .and_then(|t| parse_tile(t, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_round_trip() {
        let text = "P2\n2 2\n255\n0 255\n255 0\n";
        let p = parse_pnm(text).unwrap();
        assert_eq!(p.pixels, Pixels::Gray(vec![0, 255, 255, 0]));
        assert_eq!(print_pnm(&p), text);
        let levels = to_indexed(&p, Expect::Gray(2)).unwrap();
        assert_eq!(levels.pixels, vec![2, 1, 1, 2]);
    }

    #[test]
    fn quantised_middle_gray() {
        let p = parse_pnm("P2\n1 1\n255\n128\n").unwrap();
        assert_eq!(to_indexed(&p, Expect::Gray(3)).unwrap().pixels, vec![2]);
    }

    #[test]
    fn ppm_palette_match() {
        let pal = Palette::default_for(3).unwrap();
        let p = parse_pnm("P3\n2 1\n255\n255 0 0 0 0 255\n").unwrap();
        assert_eq!(to_indexed(&p, Expect::Palette(&pal)).unwrap().pixels, vec![1, 3]);
        let off = parse_pnm("P3\n2 1\n255\n255 0 0 1 2 3\n").unwrap();
        let err = to_indexed(&off, Expect::Palette(&pal)).unwrap_err().to_string();
        assert!(err.contains("(1, 0)"), "{err}");
    }

    #[test]
    fn black_pixel_body() {
        let img = CellImage::new(1, 1, vec![Cell::Black]).unwrap();
        let pal = Palette::default_for(1).unwrap();
        let text = print_pnm(&from_cells(&img, Some(&pal)).unwrap());
        assert_eq!(text.lines().last(), Some("0 0 0"));
    }

    #[test]
    fn malformed_files() {
        assert!(parse_pnm("P5\n1 1\n255\n0\n").is_err());
        assert!(parse_pnm("P2\n1 1\n255\n0 0\n").is_err());
        assert!(parse_pnm("P2\n1 1\n15\n0\n").is_err());
        assert!(parse_pnm("P2\n2 1\n255\n0\n").is_err());
        assert!(parse_pnm("P2\n1 1\n255\n256\n").is_err());
    }

    #[test]
    fn comments_survive() {
        let text = "P2\n#vcshare scheme=binary-evcs-2-2 share=1 seed=5 tile=2x2\n2 2\n255\n0 255\n255 0\n";
        let p = parse_pnm(text).unwrap();
        assert_eq!(print_pnm(&p), text);
        let share = pnm_to_share(&p, None).unwrap();
        assert_eq!(
            (share.share_index, share.seed, share.tile.tile_h, share.tile.tile_w),
            (1, 5, 2, 2)
        );
        assert_eq!(share.scheme_id, "binary-evcs-2-2");
        assert_eq!(recorded_tile(&p).map(|t| t.tile_w), Some(2));
    }
}
