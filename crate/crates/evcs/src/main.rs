use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use evcs_core::basis::SymbolKind;
use evcs_core::codec::{encode, stack, CellImage};
use evcs_core::extension::ColorModel;
use evcs_core::matrix::Cell;
use evcs_core::scheme::Scheme;
use evcs_core::verify::{audit, AuditOptions, DEFAULT_CAP, DEFAULT_ORACLE_MAX_M, DEFAULT_SAMPLE};

use evcs::config::read_config;
use evcs::error::{CliError, Result};
use evcs::palette::{parse_palette, Palette};
use evcs::pnm::{
    from_cells, parse_pnm, print_pnm, recorded_tile, share_to_pnm, stack_comment, to_cells, to_indexed, Expect, Pixels,
    Pnm,
};
use evcs::report::{audit_text, build_summary, describe_scheme};
use evcs::text::{parse_scheme, print_scheme};

/// Extended visual cryptography: build schemes, encode meaningful shares,
/// stack them and audit contrast and security.
///
/// Exit status: 0 success, 1 invalid input, 2 verification failure, 3 I/O
/// error.
#[derive(Parser)]
#[command(name = "evcs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a scheme from a config file and write it out.
    Build {
        /// `key = value` scheme config.
        #[arg(long)]
        config: PathBuf,
        /// Scheme file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Encode secret and cover images into shares.
    Encode(EncodeArgs),
    /// Stack share images (or earlier stacks) into one image.
    Stack {
        /// Image to write.
        #[arg(long)]
        out: PathBuf,
        /// Share files, in any order.
        #[arg(required = true)]
        shares: Vec<PathBuf>,
    },
    /// Audit a scheme's contrast, security and size formulas.
    Verify(VerifyArgs),
    /// Describe a scheme file or a share/stack image.
    Info { file: PathBuf },
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    scheme: PathBuf,
    /// Secret image, once per secret in scheme order.
    #[arg(long = "secret", required = true)]
    secrets: Vec<PathBuf>,
    /// Cover image, once per share.
    #[arg(long = "cover", required = true)]
    covers: Vec<PathBuf>,
    /// Permutation seed; the same seed gives byte-identical shares.
    #[arg(long)]
    seed: u64,
    /// Directory for share1..shareN.
    #[arg(long)]
    out: PathBuf,
    /// Palette file for colour schemes (default: red, green, blue, ...).
    #[arg(long)]
    palette: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    scheme: PathBuf,
    /// Cross-check security with the column-permutation oracle.
    #[arg(long)]
    oracle: bool,
    /// Largest m_E the oracle will enumerate.
    #[arg(long, default_value_t = DEFAULT_ORACLE_MAX_M)]
    max_m: usize,
    /// Assignment spaces up to this size are checked exhaustively.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    sample_cap: usize,
    /// Fail instead of sampling spaces above the cap.
    #[arg(long)]
    no_sample: bool,
    /// Seed for sampled assignments.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn load_scheme(path: &Path) -> Result<Scheme> {
    parse_scheme(&read(path)?).map_err(|e| e.in_file(path))
}

fn load_pnm(path: &Path) -> Result<Pnm> {
    parse_pnm(&read(path)?).map_err(|e| e.in_file(path))
}

/// Palette size a scheme draws from, if it uses colours at all.
fn palette_size(s: &Scheme) -> Option<u16> {
    let kinds = std::iter::once(s.cover_kind).chain(s.blocks.iter().map(|b| b.basis.kind));
    kinds
        .filter_map(|k| match k {
            SymbolKind::Palette(c) => Some(c),
            SymbolKind::Gray => None,
        })
        .max()
}

fn cmd_build(config: &Path, out: &Path) -> Result<()> {
    let scheme = read_config(config)?.build().map_err(|e| e.in_file(config))?;
    write(out, &print_scheme(&scheme))?;
    print!("{}", build_summary(&scheme));
    Ok(())
}

fn cmd_encode(a: &EncodeArgs) -> Result<()> {
    let scheme = load_scheme(&a.scheme)?;
    if a.secrets.len() != scheme.secrets() {
        return Err(CliError::Usage(format!(
            "scheme has {} secrets, got {} --secret images",
            scheme.secrets(),
            a.secrets.len()
        )));
    }
    if a.covers.len() != scheme.n {
        return Err(CliError::Usage(format!(
            "scheme has {} shares, got {} --cover images",
            scheme.n,
            a.covers.len()
        )));
    }
    let palette = match (palette_size(&scheme), &a.palette) {
        (None, None) => None,
        (None, Some(_)) => return Err(CliError::Usage("--palette given for a gray scheme".into())),
        (Some(c), None) => Some(Palette::default_for(c)?),
        (Some(c), Some(path)) => {
            let p = parse_palette(&read(path)?).map_err(|e| e.in_file(path))?;
            if p.len() != c as usize {
                return Err(CliError::Usage(format!(
                    "scheme needs {c} colours, palette has {}",
                    p.len()
                )));
            }
            Some(p)
        }
    };
    let expect = |kind: SymbolKind, domain: usize| match (kind, &palette) {
        (SymbolKind::Palette(_), Some(p)) => Expect::Palette(p),
        _ => Expect::Gray(domain),
    };
    let load = |path: &PathBuf, e: Expect| to_indexed(&load_pnm(path)?, e).map_err(|err| err.in_file(path));
    let secrets = a
        .secrets
        .iter()
        .zip(&scheme.blocks)
        .map(|(path, b)| load(path, expect(b.basis.kind, b.basis.symbols())))
        .collect::<Result<Vec<_>>>()?;
    let covers = a
        .covers
        .iter()
        .zip(scheme.cover_domains())
        .map(|(path, d)| load(path, expect(scheme.cover_kind, d)))
        .collect::<Result<Vec<_>>>()?;
    let shares = encode(&scheme, &secrets, &covers, a.seed)?;
    fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let ext = if palette.is_some() { "ppm" } else { "pgm" };
    for share in &shares {
        let path = a.out.join(format!("share{}.{ext}", share.share_index));
        write(&path, &print_pnm(&share_to_pnm(share, palette.as_ref())?))?;
        println!("{}", path.display());
    }
    Ok(())
}

/// Colours in order of first appearance across all inputs.
fn palette_of(images: &[Pnm]) -> Palette {
    let mut entries: Vec<[u8; 3]> = Vec::new();
    for p in images {
        for i in 0..p.width * p.height {
            let rgb = p.rgb(i);
            if rgb != [0, 0, 0] && rgb != [255, 255, 255] && !entries.contains(&rgb) {
                entries.push(rgb);
            }
        }
    }
    Palette {
        entries,
        model: ColorModel::Additive,
    }
}

fn field<'a>(comment: &'a str, key: &str) -> Option<&'a str> {
    comment
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
}

/// Scheme id, seed and share indices recorded in a share or stack.
fn provenance(p: &Pnm) -> Result<(String, String, Vec<usize>)> {
    let (c, key) = match (p.tagged("vcshare"), p.tagged("vcstack")) {
        (Some(c), _) => (c, "share"),
        (None, Some(c)) => (c, "shares"),
        (None, None) => return Err(CliError::Usage("not a share or stack: no provenance comment".into())),
    };
    let shares = field(c, key)
        .map(|s| s.split(',').map(str::parse).collect::<Result<Vec<usize>, _>>())
        .and_then(|r| r.ok())
        .ok_or_else(|| CliError::Usage(format!("provenance comment has no valid `{key}`")))?;
    let scheme = field(c, "scheme").unwrap_or_default().to_string();
    let seed = field(c, "seed").unwrap_or_default().to_string();
    Ok((scheme, seed, shares))
}

fn cmd_stack(out: &Path, paths: &[PathBuf]) -> Result<()> {
    let images = paths.iter().map(|p| load_pnm(p)).collect::<Result<Vec<_>>>()?;
    let mut members = BTreeSet::new();
    let mut origin: Option<(String, String)> = None;
    let mut tile = None;
    for (p, path) in images.iter().zip(paths) {
        let (scheme, seed, shares) = provenance(p).map_err(|e| e.in_file(path))?;
        let t = recorded_tile(p).ok_or_else(|| CliError::Usage("no tile recorded".into()).in_file(path))?;
        if tile.is_some_and(|u| u != t) || origin.as_ref().is_some_and(|o| o != &(scheme.clone(), seed.clone())) {
            return Err(CliError::Usage(format!(
                "{} does not come from the same encoding as {}",
                path.display(),
                paths[0].display()
            )));
        }
        for s in shares {
            if !members.insert(s) {
                return Err(CliError::Usage(format!("share {s} is stacked twice")));
            }
        }
        tile = Some(t);
        origin = Some((scheme, seed));
    }
    let palette = palette_of(&images);
    let cells = images
        .iter()
        .zip(paths)
        .map(|(p, path)| to_cells(p, Some(&palette)).map_err(|e| e.in_file(path)))
        .collect::<Result<Vec<CellImage>>>()?;
    let stacked = stack(&cells.iter().collect::<Vec<_>>())?;
    let rgb = images.iter().any(|p| matches!(p.pixels, Pixels::Rgb(_)));
    let mut pnm = from_cells(&stacked, rgb.then_some(&palette))?;
    let (scheme, seed) = origin.unwrap_or_default();
    let members: Vec<usize> = members.into_iter().collect();
    let tile = tile.expect("at least one share");
    pnm.comments
        .push(format!("{} seed={seed}", stack_comment(&scheme, &members, tile)));
    write(out, &print_pnm(&pnm))?;
    let colors = stacked.cells.iter().filter(|c| matches!(c, Cell::Color(_))).count();
    println!(
        "stacked shares {} into {} ({} black, {} coloured subpixels)",
        members.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
        out.display(),
        stacked.cells.iter().filter(|&&c| c == Cell::Black).count(),
        colors
    );
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<()> {
    let scheme = load_scheme(&a.scheme)?;
    let mut note = None;
    let oracle = if !a.oracle {
        None
    } else if scheme.m_e() > a.max_m {
        note = Some(format!("m_E={} exceeds --max-m {}", scheme.m_e(), a.max_m));
        None
    } else {
        Some(a.max_m)
    };
    let opts = AuditOptions {
        cap: a.sample_cap,
        sampling: !a.no_sample,
        sample_size: DEFAULT_SAMPLE,
        seed: a.seed,
        oracle,
    };
    let report = audit(&scheme, &opts)?;
    let text = audit_text(&scheme, &report, note.as_deref());
    print!("{text}");
    if let Some(path) = &a.report {
        write(path, &text)?;
    }
    if report.pass() {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

fn cmd_info(path: &Path) -> Result<()> {
    let text = read(path)?;
    if text.trim_start().starts_with("vcscheme") {
        let scheme = parse_scheme(&text).map_err(|e| e.in_file(path))?;
        print!("{}", describe_scheme(&scheme));
        return Ok(());
    }
    let p = parse_pnm(&text).map_err(|e| e.in_file(path))?;
    let kind = match p.pixels {
        Pixels::Gray(_) => "PGM",
        Pixels::Rgb(_) => "PPM",
    };
    println!("{kind} {}x{}", p.width, p.height);
    for c in &p.comments {
        println!("#{c}");
    }
    if let Some(t) = recorded_tile(&p) {
        if t.tile_w > 0 && t.tile_h > 0 {
            println!(
                "pixels={}x{} tile={}x{}",
                p.width / t.tile_w,
                p.height / t.tile_h,
                t.tile_h,
                t.tile_w
            );
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build { config, out } => cmd_build(&config, &out),
        Command::Encode(a) => cmd_encode(&a),
        Command::Stack { out, shares } => cmd_stack(&out, &shares),
        Command::Verify(a) => cmd_verify(&a),
        Command::Info { file } => cmd_info(&file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
