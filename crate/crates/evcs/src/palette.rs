//! Palette files: `id R G B` lines, ids dense from 1, plus an optional
//! `model additive|subtractive` line. Under the subtractive model the three
//! numbers are C M Y, i.e. `255 - R`, `255 - G`, `255 - B`.

use std::fmt::Write as _;

use evcs_core::extension::ColorModel;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    /// RGB of colour `i + 1`.
    pub entries: Vec<[u8; 3]>,
    pub model: ColorModel,
}

impl Palette {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rgb(&self, id: u16) -> Option<[u8; 3]> {
        id.checked_sub(1).and_then(|i| self.entries.get(i as usize)).copied()
    }

    /// Colour id with exactly this RGB value.
    pub fn lookup(&self, rgb: [u8; 3]) -> Option<u16> {
        self.entries.iter().position(|&e| e == rgb).map(|i| i as u16 + 1)
    }

    /// Red, green, blue, yellow, cyan, magenta, in that order.
    pub fn default_for(c: u16) -> Result<Palette> {
        const BASE: [[u8; 3]; 6] = [
            [255, 0, 0],
            [0, 255, 0],
            [0, 0, 255],
            [255, 255, 0],
            [0, 255, 255],
            [255, 0, 255],
        ];
        if c as usize > BASE.len() {
            return Err(CliError::Usage(format!(
                "no default palette for {c} colours; pass --palette"
            )));
        }
        Ok(Palette {
            entries: BASE[..c as usize].to_vec(),
            model: ColorModel::Additive,
        })
    }
}

fn to_model(v: [u8; 3]) -> [u8; 3] {
    v.map(|x| 255 - x)
}

pub fn parse_palette(text: &str) -> Result<Palette> {
    let mut model = ColorModel::Additive;
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            [w, ..] if w.starts_with('#') => {}
            ["model", "additive"] => model = ColorModel::Additive,
            ["model", "subtractive"] => model = ColorModel::Subtractive,
            [id, r, g, b] => {
                let num = |s: &str, what: &str| -> Result<u16> {
                    s.parse()
                        .map_err(|_| CliError::parse(line_no, format!("bad {what} `{s}`")))
                };
                let id = num(id, "colour id")?;
                if id as usize != raw.len() + 1 {
                    return Err(CliError::parse(
                        line_no,
                        format!("expected colour id {}, found {id}", raw.len() + 1),
                    ));
                }
                let mut v = [0u8; 3];
                for (slot, (s, what)) in v.iter_mut().zip([(r, "red"), (g, "green"), (b, "blue")]) {
                    *slot = u8::try_from(num(s, what)?)
                        .map_err(|_| CliError::parse(line_no, format!("{what} value {s} above 255")))?;
                }
                raw.push(v);
            }
            _ => return Err(CliError::parse(line_no, format!("cannot read `{line}`"))),
        }
    }
    if raw.is_empty() {
        return Err(CliError::parse(1, "palette has no colours"));
    }
    let entries = match model {
        ColorModel::Additive => raw,
        ColorModel::Subtractive => raw.into_iter().map(to_model).collect(),
    };
    Ok(Palette { entries, model })
}

pub fn print_palette(p: &Palette) -> String {
    let mut out = String::new();
    if p.model == ColorModel::Subtractive {
        out.push_str("model subtractive\n");
    }
    for (i, &e) in p.entries.iter().enumerate() {
        let v = match p.model {
            ColorModel::Additive => e,
            ColorModel::Subtractive => to_model(e),
        };
        let _ = writeln!(out, "{} {} {} {}", i + 1, v[0], v[1], v[2]);
    }
    out
}
