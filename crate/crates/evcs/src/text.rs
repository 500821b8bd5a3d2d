//! Plain-text formats for matrices, extension collections, basis sets and
//! whole schemes.
//!
//! Cells are written `0` (White), `k` (Black), `1..c` (palette colour) and
//! `*` (star, extension collections only). Lines starting with `#` are
//! comments. Printing is canonical: parsing a printed value and printing
//! it again gives the same bytes.

use std::fmt::Write as _;

use evcs_core::basis::{BasisSet, SymbolKind};
use evcs_core::extension::StarCollection;
use evcs_core::matrix::{Cell, SymbolMatrix};
use evcs_core::scheme::{Block, Mode, Reveal, Scheme};

use crate::error::{CliError, Result};

/// Whitespace-separated tokens with their line numbers.
pub struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    pub fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim_start().starts_with('#'))
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
            .collect();
        Tokens { items, pos: 0 }
    }

    fn line(&self) -> usize {
        self.items.get(self.pos).or(self.items.last()).map_or(1, |&(l, _)| l)
    }

    pub fn next(&mut self, what: &str) -> Result<&'a str> {
        let tok = self
            .items
            .get(self.pos)
            .map(|&(_, t)| t)
            .ok_or_else(|| CliError::parse(self.line(), format!("expected {what}, found end of input")))?;
        self.pos += 1;
        Ok(tok)
    }

    /// Tokens left on the line of the token just consumed.
    pub fn rest_of_line(&mut self) -> Vec<&'a str> {
        let Some(&(line, _)) = self.pos.checked_sub(1).and_then(|p| self.items.get(p)) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        while let Some(&(l, t)) = self.items.get(self.pos) {
            if l != line {
                break;
            }
            out.push(t);
            self.pos += 1;
        }
        out
    }

    pub fn peek(&self) -> Option<&'a str> {
        self.items.get(self.pos).map(|&(_, t)| t)
    }

    pub fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let line = self.line();
        let tok = self.next(what)?;
        tok.parse()
            .map_err(|_| CliError::parse(line, format!("expected {what}, found `{tok}`")))
    }

    pub fn expect(&mut self, word: &str) -> Result<()> {
        let line = self.line();
        let tok = self.next(&format!("`{word}`"))?;
        if tok != word {
            return Err(CliError::parse(line, format!("expected `{word}`, found `{tok}`")));
        }
        Ok(())
    }

    pub fn error(&self, msg: impl Into<String>) -> CliError {
        CliError::parse(self.line(), msg)
    }

    /// Reject anything left over.
    pub fn finish(&self) -> Result<()> {
        match self.items.get(self.pos) {
            Some(&(line, tok)) => Err(CliError::parse(line, format!("unexpected trailing `{tok}`"))),
            None => Ok(()),
        }
    }
}

/// A parsed cell token; `None` is a star.
fn parse_cell(tokens: &mut Tokens, palette: u16) -> Result<Option<Cell>> {
    let line = tokens.line();
    let tok = tokens.next("cell")?;
    match tok {
        "*" => Ok(None),
        "k" => Ok(Some(Cell::Black)),
        "0" => Ok(Some(Cell::White)),
        _ => match tok.parse::<u16>() {
            Ok(t) if t <= palette => Ok(Some(Cell::Color(t))),
            Ok(t) => Err(CliError::parse(
                line,
                format!("colour {t} outside palette of {palette}"),
            )),
            Err(_) => Err(CliError::parse(line, format!("bad cell `{tok}`"))),
        },
    }
}

fn cell_token(cell: Cell) -> String {
    match cell {
        Cell::White => "0".into(),
        Cell::Black => "k".into(),
        Cell::Color(t) => t.to_string(),
    }
}

fn write_rows(out: &mut String, rows: usize, cols: usize, token: impl Fn(usize, usize) -> String) {
    for r in 0..rows {
        let line: Vec<String> = (0..cols).map(|c| token(r, c)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

/// Matrix block: `rows cols palette` then the cells.
pub fn read_matrix(tokens: &mut Tokens) -> Result<SymbolMatrix> {
    let rows: usize = tokens.number("row count")?;
    let cols: usize = tokens.number("column count")?;
    let palette: u16 = tokens.number("palette size")?;
    let mut cells = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        match parse_cell(tokens, palette)? {
            Some(c) => cells.push(c),
            None => return Err(tokens.error("star outside an extension collection")),
        }
    }
    Ok(SymbolMatrix::new(rows, cols, cells)?)
}

pub fn write_matrix(out: &mut String, m: &SymbolMatrix, palette: u16) {
    let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), palette);
    write_rows(out, m.rows(), m.cols(), |r, c| cell_token(m.get(r, c)));
}

pub fn parse_matrix(text: &str) -> Result<SymbolMatrix> {
    let mut t = Tokens::new(text);
    let m = read_matrix(&mut t)?;
    t.finish()?;
    Ok(m)
}

pub fn print_matrix(m: &SymbolMatrix) -> String {
    let mut out = String::new();
    write_matrix(&mut out, m, m.max_color());
    out
}

/// Extension block: `k n m0`, the row levels, then an `n x m0` matrix of
/// `*` and `k`.
pub fn read_stars(tokens: &mut Tokens) -> Result<StarCollection> {
    let k: usize = tokens.number("threshold k")?;
    let n: usize = tokens.number("participant count n")?;
    let m0: usize = tokens.number("extension width")?;
    let levels = (0..n)
        .map(|_| tokens.number("row level"))
        .collect::<Result<Vec<usize>>>()?;
    let (rows, cols): (usize, usize) = (tokens.number("row count")?, tokens.number("column count")?);
    let _palette: u16 = tokens.number("palette size")?;
    if (rows, cols) != (n, m0) {
        return Err(tokens.error(format!("extension matrix is {rows}x{cols}, header says {n}x{m0}")));
    }
    let mut stars = Vec::with_capacity(n * m0);
    for _ in 0..n * m0 {
        match parse_cell(tokens, 0)? {
            None => stars.push(true),
            Some(Cell::Black) => stars.push(false),
            Some(_) => return Err(tokens.error("extension cells must be `*` or `k`")),
        }
    }
    Ok(StarCollection::new(k, n, m0, stars, levels)?)
}

pub fn write_stars(out: &mut String, a: &StarCollection) {
    let _ = writeln!(out, "{} {} {}", a.k(), a.rows(), a.cols());
    let levels: Vec<String> = a.row_levels().iter().map(|g| g.to_string()).collect();
    out.push_str(&levels.join(" "));
    out.push('\n');
    let _ = writeln!(out, "{} {} 0", a.rows(), a.cols());
    write_rows(out, a.rows(), a.cols(), |r, c| {
        if a.is_star(r, c) { "*" } else { "k" }.into()
    });
}

pub fn parse_stars(text: &str) -> Result<StarCollection> {
    let mut t = Tokens::new(text);
    let a = read_stars(&mut t)?;
    t.finish()?;
    Ok(a)
}

pub fn print_stars(a: &StarCollection) -> String {
    let mut out = String::new();
    write_stars(&mut out, a);
    out
}

/// Basis block: `k n variants m`, optionally `contrast <alpha_m> <d>`, then
/// one matrix per symbol. Without the contrast line both values are
/// measured from the matrices.
pub fn read_basis(tokens: &mut Tokens) -> Result<BasisSet> {
    let k: usize = tokens.number("threshold k")?;
    let n: usize = tokens.number("participant count n")?;
    let count: usize = tokens.number("variant count")?;
    let m: usize = tokens.number("pixel expansion m")?;
    let declared = if tokens.peek() == Some("contrast") {
        tokens.next("contrast")?;
        Some((tokens.number::<usize>("alpha_m")?, tokens.number::<usize>("d")?))
    } else {
        None
    };
    if count == 0 {
        return Err(tokens.error("a basis set needs at least one variant"));
    }
    let variants = (0..count).map(|_| read_matrix(tokens)).collect::<Result<Vec<_>>>()?;
    if let Some(v) = variants.iter().find(|v| v.cols() != m) {
        return Err(CliError::Core(evcs_core::Error::Dimension(format!(
            "variant has {} columns, header says {m}",
            v.cols()
        ))));
    }
    let mut basis = BasisSet::derive(k, n, variants)?;
    if let Some((alpha_m, d)) = declared {
        basis.alpha_m = alpha_m;
        basis.d = d;
    }
    Ok(basis)
}

fn palette_size(kind: SymbolKind) -> u16 {
    match kind {
        SymbolKind::Gray => 0,
        SymbolKind::Palette(c) => c,
    }
}

pub fn write_basis(out: &mut String, b: &BasisSet) {
    let _ = writeln!(out, "{} {} {} {}", b.k, b.n, b.variants.len(), b.m());
    let _ = writeln!(out, "contrast {} {}", b.alpha_m, b.d);
    let palette = palette_size(b.kind).max(b.variants.iter().map(SymbolMatrix::max_color).max().unwrap_or(0));
    for v in &b.variants {
        write_matrix(out, v, palette);
    }
}

pub fn parse_basis(text: &str) -> Result<BasisSet> {
    let mut t = Tokens::new(text);
    let b = read_basis(&mut t)?;
    t.finish()?;
    Ok(b)
}

pub fn print_basis(b: &BasisSet) -> String {
    let mut out = String::new();
    write_basis(&mut out, b);
    out
}

/// Scheme file:
///
/// ```text
/// vcscheme <mode>
/// <k> <n> <secrets> <m_E>
/// covers gray | covers palette <c>
/// qualified any | qualified <members...>     (one line per secret)
/// <extension block>
/// <basis block>                              (one per secret)
/// ```
///
/// Members are 1-based; `any` means every `k` of the `n` shares.
pub fn parse_scheme(text: &str) -> Result<Scheme> {
    let mut t = Tokens::new(text);
    t.expect("vcscheme")?;
    let mode_name = t.next("mode")?;
    let mode = Mode::parse(mode_name).ok_or_else(|| t.error(format!("unknown mode `{mode_name}`")))?;
    let k: usize = t.number("threshold k")?;
    let n: usize = t.number("participant count n")?;
    let s: usize = t.number("secret count")?;
    let m_e: usize = t.number("pixel expansion m_E")?;
    t.expect("covers")?;
    let cover_kind = match t.next("cover kind")? {
        "gray" => SymbolKind::Gray,
        "palette" => SymbolKind::Palette(t.number("palette size")?),
        other => return Err(t.error(format!("unknown cover kind `{other}`"))),
    };
    let mut reveals = Vec::with_capacity(s);
    for _ in 0..s {
        t.expect("qualified")?;
        let line = t.line();
        let words = t.rest_of_line();
        if words == ["any"] {
            reveals.push((Reveal::Threshold, (0..n).collect::<Vec<_>>()));
            continue;
        }
        let members = words
            .iter()
            .map(|w| match w.parse::<usize>() {
                Ok(m) if (1..=n).contains(&m) => Ok(m - 1),
                _ => Err(CliError::parse(
                    line,
                    format!("bad member `{w}`, expected 1..={n} or `any`"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        reveals.push((Reveal::Exact, members));
    }
    let extension = read_stars(&mut t)?;
    let blocks = reveals
        .into_iter()
        .map(|(reveal, members)| {
            Ok(Block {
                members,
                reveal,
                basis: read_basis(&mut t)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    t.finish()?;
    let scheme = Scheme::new(mode, k, n, cover_kind, extension, blocks)?;
    if scheme.m_e() != m_e {
        return Err(CliError::parse(
            2,
            format!("header says m_E={m_e}, blocks give {}", scheme.m_e()),
        ));
    }
    Ok(scheme)
}

pub fn print_scheme(s: &Scheme) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vcscheme {}", s.mode);
    let _ = writeln!(out, "{} {} {} {}", s.k, s.n, s.secrets(), s.m_e());
    match s.cover_kind {
        SymbolKind::Gray => out.push_str("covers gray\n"),
        SymbolKind::Palette(c) => {
            let _ = writeln!(out, "covers palette {c}");
        }
    }
    for b in &s.blocks {
        match b.reveal {
            Reveal::Threshold => out.push_str("qualified any\n"),
            Reveal::Exact => {
                let members: Vec<String> = b.members.iter().map(|m| (m + 1).to_string()).collect();
                let _ = writeln!(out, "qualified {}", members.join(" "));
            }
        }
    }
    write_stars(&mut out, &s.extension);
    for b in &s.blocks {
        write_basis(&mut out, &b.basis);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use evcs_core::basis::builtin;
    use evcs_core::build::build_binary_evcs;
    use evcs_core::extension::build_extension;

    #[test]
    fn matrix_round_trip() {
        let text = "2 3 2\n0 1 k\n2 k 0\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.get(0, 1), Cell::Color(1));
        assert_eq!(print_matrix(&m), text);
    }

    #[test]
    fn matrix_rejects_garbage() {
        assert!(parse_matrix("1 2 0\n0 k\nextra\n").is_err());
        assert!(parse_matrix("1 2 1\n0 2\n").is_err());
        assert!(parse_matrix("1 2 0\n0 *\n").is_err());
        assert!(parse_matrix("1 2 0\n0\n").is_err());
    }

    #[test]
    fn zero_columns() {
        let m = parse_matrix("2 0 0\n\n\n").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 0));
        assert_eq!(print_matrix(&m), "2 0 0\n\n\n");
    }

    #[test]
    fn stars_round_trip() {
        let a = build_extension(3, 5, &[2; 5]).unwrap();
        let text = print_stars(&a);
        assert!(text.starts_with("3 5 3\n2 2 2 2 2\n5 3 0\n"));
        assert_eq!(parse_stars(&text).unwrap(), a);
    }

    #[test]
    fn star_column_limit_enforced() {
        assert!(parse_stars("2 2 1\n2 2\n2 1 0\n*\n*\n").is_err());
    }

    #[test]
    fn basis_round_trip_and_derive() {
        let b = builtin("2-2").unwrap();
        let text = print_basis(&b);
        assert_eq!(text, "2 2 2 2\ncontrast 1 2\n2 2 0\nk 0\nk 0\n2 2 0\nk 0\n0 k\n");
        assert_eq!(parse_basis(&text).unwrap(), b);
        let bare = "2 2 2 2\n2 2 0\nk 0\nk 0\n2 2 0\nk 0\n0 k\n";
        assert_eq!(parse_basis(bare).unwrap().alpha_m, 1);
        assert!(parse_basis("2 2 2 2\n2 2 0\nk 0\nk 0\n2 3 0\nk 0 0\n0 k 0\n").is_err());
    }

    #[test]
    fn scheme_round_trip() {
        let s = build_binary_evcs(builtin("2-3").unwrap()).unwrap();
        let text = print_scheme(&s);
        assert!(text.starts_with("vcscheme binary-evcs\n2 3 1 6\ncovers gray\nqualified any\n"));
        assert_eq!(parse_scheme(&text).unwrap(), s);
        let bad = text.replacen("2 3 1 6", "2 3 1 7", 1);
        assert!(parse_scheme(&bad).is_err());
    }
}
