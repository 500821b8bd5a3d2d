//! Scheme configs: `key = value` lines, `#` comments.
//!
//! ```text
//! mode = gray-evcs
//! k = 2
//! n = 3
//! secret_levels = 3
//! cover_levels = 2 3 2
//! basis = builtin:2-3
//! ```
//!
//! Keys: `mode`, `k`, `n`, `colors`, `palette`, `secret_levels`,
//! `cover_levels`, `basis`, `seed`. A level list with one entry applies to
//! every share (or every qualified set). `basis` is `builtin:<name>`,
//! `naor-shamir`, `file:<path>` or `fixture:three-color-2-3`; paths are
//! relative to the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use evcs_core::basis::{builtin, naor_shamir_kk, BasisSet};
use evcs_core::build::{build_binary_evcs, build_color_evcs, build_gray_evcs, default_binary_base};
use evcs_core::mevcs::{
    build_mevcs, build_mevcs_with_bases, enumerate_qualified, three_color_2_3_bases, CoverDomain, SecretDomain,
};
use evcs_core::scheme::{Mode, Scheme};

use crate::error::{CliError, Result};
use crate::palette::{parse_palette, Palette};
use crate::text::parse_basis;

const KEYS: [&str; 9] = [
    "mode",
    "k",
    "n",
    "colors",
    "palette",
    "secret_levels",
    "cover_levels",
    "basis",
    "seed",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisSource {
    Builtin(String),
    NaorShamir,
    File(PathBuf),
    ThreeColorFixture,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeConfig {
    pub mode: Mode,
    pub k: usize,
    pub n: usize,
    pub colors: Option<u16>,
    pub palette: Option<PathBuf>,
    pub secret_levels: Vec<usize>,
    pub cover_levels: Vec<usize>,
    pub basis: Option<BasisSource>,
    /// Accepted for bookkeeping; `encode` always takes its seed from the
    /// command line.
    pub seed: Option<u64>,
}

fn numbers<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>> {
    value
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|w| !w.is_empty())
        .map(|w| {
            w.parse()
                .map_err(|_| CliError::parse(line, format!("{key}: bad number `{w}`")))
        })
        .collect()
}

fn single<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    let mut v = numbers(key, value, line)?;
    if v.len() != 1 {
        return Err(CliError::parse(line, format!("{key} takes one number")));
    }
    Ok(v.remove(0))
}

/// Parse a config; relative paths are resolved against `dir`.
pub fn parse_config(text: &str, dir: &Path) -> Result<SchemeConfig> {
    let mut seen: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::parse(i + 1, format!("expected `key = value`, found `{line}`")))?;
        let key = key.trim();
        let Some(&known) = KEYS.iter().find(|&&k| k == key) else {
            return Err(CliError::parse(i + 1, format!("unknown key `{key}`")));
        };
        if seen.insert(known, (i + 1, value.trim())).is_some() {
            return Err(CliError::parse(i + 1, format!("`{key}` given twice")));
        }
    }
    let get = |key: &str| seen.get(key).copied();
    let require = |key: &str| get(key).ok_or_else(|| CliError::parse(1, format!("missing `{key}`")));

    let (line, mode_name) = require("mode")?;
    let mode = Mode::parse(mode_name).ok_or_else(|| {
        let names: Vec<&str> = Mode::ALL.iter().map(|m| m.name()).collect();
        CliError::parse(
            line,
            format!("unknown mode `{mode_name}`, expected one of {}", names.join(", ")),
        )
    })?;
    let (line, v) = require("k")?;
    let k = single("k", v, line)?;
    let (line, v) = require("n")?;
    let n = single("n", v, line)?;
    let colors = get("colors").map(|(l, v)| single("colors", v, l)).transpose()?;
    let secret_levels = get("secret_levels")
        .map(|(l, v)| numbers("secret_levels", v, l))
        .transpose()?
        .unwrap_or_default();
    let cover_levels = get("cover_levels")
        .map(|(l, v)| numbers("cover_levels", v, l))
        .transpose()?
        .unwrap_or_default();
    let seed = get("seed").map(|(l, v)| single("seed", v, l)).transpose()?;
    let palette = get("palette").map(|(_, v)| dir.join(v));
    let basis = get("basis")
        .map(|(line, v)| match v.split_once(':') {
            Some(("builtin", name)) => Ok(BasisSource::Builtin(name.trim().to_string())),
            Some(("file", path)) => Ok(BasisSource::File(dir.join(path.trim()))),
            Some(("fixture", "three-color-2-3")) => Ok(BasisSource::ThreeColorFixture),
            None if v == "naor-shamir" => Ok(BasisSource::NaorShamir),
            _ => Err(CliError::parse(line, format!("unknown basis `{v}`"))),
        })
        .transpose()?;
    let config = SchemeConfig {
        mode,
        k,
        n,
        colors,
        palette,
        secret_levels,
        cover_levels,
        basis,
        seed,
    };
    config.validate()?;
    Ok(config)
}

pub fn read_config(path: &Path) -> Result<SchemeConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    parse_config(&text, dir).map_err(|e| e.in_file(path))
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Spread a one-entry list over `len` slots.
fn broadcast(levels: &[usize], len: usize, what: &str) -> Result<Vec<usize>> {
    match levels {
        [one] => Ok(vec![*one; len]),
        v if v.len() == len => Ok(v.to_vec()),
        v => Err(usage(format!("{what}: {} entries, expected 1 or {len}", v.len()))),
    }
}

impl SchemeConfig {
    /// Mode-consistency checks that need no files.
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.k > self.n {
            return Err(usage(format!("need 2 <= k <= n, got k={} n={}", self.k, self.n)));
        }
        let color = self.mode.is_color();
        if color && self.colors.is_none() {
            return Err(usage(format!("{} needs `colors`", self.mode)));
        }
        if !color && (self.colors.is_some() || self.palette.is_some()) {
            return Err(usage(format!("{} takes no `colors` or `palette`", self.mode)));
        }
        let gray_secret = matches!(self.mode, Mode::GrayEvcs | Mode::GrayMevcs);
        if gray_secret && self.secret_levels.is_empty() {
            return Err(usage(format!("{} needs `secret_levels`", self.mode)));
        }
        if !gray_secret && !self.secret_levels.is_empty() {
            return Err(usage(format!("{} takes no `secret_levels`", self.mode)));
        }
        if self.mode == Mode::GrayEvcs && self.secret_levels.len() != 1 {
            return Err(usage("gray-evcs takes one secret level count"));
        }
        if color && !self.cover_levels.is_empty() {
            return Err(usage(format!(
                "{} covers use the palette; drop `cover_levels`",
                self.mode
            )));
        }
        match (&self.basis, self.mode) {
            (Some(BasisSource::ThreeColorFixture), Mode::ColorMevcs) => {
                if (self.k, self.n, self.colors) != (2, 3, Some(3)) {
                    return Err(usage("the three-colour fixture is a (2,3) scheme with 3 colours"));
                }
            }
            (Some(BasisSource::ThreeColorFixture), m) => {
                return Err(usage(format!("the three-colour fixture is for color-mevcs, not {m}")));
            }
            (Some(_), Mode::GrayMevcs | Mode::ColorMevcs) => {
                return Err(usage(
                    "multi-secret bases are generated; only `fixture:three-color-2-3` may be named",
                ));
            }
            _ => {}
        }
        Ok(())
    }

    fn base(&self) -> Result<BasisSet> {
        let basis = match &self.basis {
            None => default_binary_base(self.k, self.n)?,
            Some(BasisSource::Builtin(name)) => builtin(name)?,
            Some(BasisSource::NaorShamir) => {
                if self.k != self.n {
                    return Err(usage("naor-shamir bases are (k,k); set n = k"));
                }
                naor_shamir_kk(self.k)?
            }
            Some(BasisSource::File(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                parse_basis(&text).map_err(|e| e.in_file(path))?
            }
            Some(BasisSource::ThreeColorFixture) => unreachable!("rejected by validate"),
        };
        if (basis.k, basis.n) != (self.k, self.n) {
            return Err(usage(format!(
                "basis is ({},{}), config asks for ({},{})",
                basis.k, basis.n, self.k, self.n
            )));
        }
        Ok(basis)
    }

    /// The configured palette, if any, checked against `colors`.
    pub fn load_palette(&self) -> Result<Option<Palette>> {
        let Some(path) = &self.palette else { return Ok(None) };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let palette = parse_palette(&text).map_err(|e| e.in_file(path))?;
        let c = self.colors.unwrap_or(0) as usize;
        if palette.len() != c {
            return Err(usage(format!("palette has {} colours, config says {c}", palette.len())));
        }
        Ok(Some(palette))
    }

    pub fn build(&self) -> Result<Scheme> {
        self.validate()?;
        self.load_palette()?;
        let n = self.n;
        let scheme = match self.mode {
            Mode::BinaryEvcs => {
                if !self.cover_levels.is_empty() && broadcast(&self.cover_levels, n, "cover_levels")? != vec![2; n] {
                    return Err(usage("binary-evcs covers have 2 levels; use gray-evcs"));
                }
                build_binary_evcs(self.base()?)?
            }
            Mode::GrayEvcs => {
                let covers = self.cover_levels_or_binary()?;
                build_gray_evcs(&self.base()?, self.secret_levels[0], &covers)?
            }
            Mode::ColorEvcs => build_color_evcs(self.colors.unwrap_or(0), &self.base()?)?,
            Mode::GrayMevcs => {
                let sets = enumerate_qualified(self.k, n)?.len();
                let secrets = broadcast(&self.secret_levels, sets, "secret_levels")?;
                let covers = self.cover_levels_or_binary()?;
                build_mevcs(self.k, n, &SecretDomain::Gray(secrets), &CoverDomain::Gray(covers))?
            }
            Mode::ColorMevcs => {
                let c = self.colors.unwrap_or(0);
                match self.basis {
                    Some(BasisSource::ThreeColorFixture) => {
                        build_mevcs_with_bases(2, 3, three_color_2_3_bases(), &CoverDomain::Palette(3))?
                    }
                    _ => build_mevcs(self.k, n, &SecretDomain::Palette(c), &CoverDomain::Palette(c))?,
                }
            }
        };
        Ok(scheme)
    }

    fn cover_levels_or_binary(&self) -> Result<Vec<usize>> {
        if self.cover_levels.is_empty() {
            Ok(vec![2; self.n])
        } else {
            broadcast(&self.cover_levels, self.n, "cover_levels")
        }
    }
}
