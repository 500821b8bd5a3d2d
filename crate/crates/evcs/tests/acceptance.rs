//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary so the lines show up in `cargo test` output.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use evcs::palette::Palette;
use evcs::pnm::{from_indexed, parse_pnm, print_pnm, share_to_pnm, to_cells, Expect};
use evcs_core::basis::{builtin, color_basis, gray_ladder, naor_shamir_kk, SymbolKind};
use evcs_core::build::{build_binary_evcs, build_color_evcs, build_gray_evcs};
use evcs_core::codec::{encode, measure, plan_tile, stack, CoverClassifier, IndexedImage, SecretClassifier};
use evcs_core::extension::{build_extension, replicate_gray, StarCollection};
use evcs_core::matrix::{Cell, SymbolMatrix};
use evcs_core::mevcs::{
    build_binary_mevcs, build_mevcs, build_mevcs_with_bases, three_color_2_3_bases, CoverDomain, SecretDomain,
};
use evcs_core::scheme::Scheme;
use evcs_core::verify::{audit, brute_force_oracle, check_contrast, check_security, AuditOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// All `size`-subsets of `0..n`, lexicographic.
fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == size)
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    out.sort();
    out
}

/// Every vector with entries `1..=radix[i]`.
fn tuples(radices: &[usize]) -> Vec<Vec<u16>> {
    let mut out = vec![vec![]];
    for &r in radices {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=r as u16).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// `0` white, `1` black.
fn bits(rows: &[&str]) -> SymbolMatrix {
    SymbolMatrix::from_rows(
        rows.iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| if c == '1' { Cell::Black } else { Cell::White })
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

/// Palette rows: digits are colours, `k` is black.
fn colors(rows: &[&str]) -> SymbolMatrix {
    SymbolMatrix::from_rows(
        rows.iter()
            .map(|r| {
                r.split_whitespace()
                    .map(|w| {
                        if w == "k" {
                            Cell::Black
                        } else {
                            Cell::Color(w.parse().unwrap())
                        }
                    })
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

/// The matrix with its first `m0` columns moved to the end.
fn rotate(m: &SymbolMatrix, m0: usize) -> SymbolMatrix {
    let rows = (0..m.rows())
        .map(|r| {
            let mut row = m.row(r)[m0..].to_vec();
            row.extend_from_slice(&m.row(r)[..m0]);
            row
        })
        .collect();
    SymbolMatrix::from_rows(rows).unwrap()
}

/// Row has `stars` stars, columns at most `k - 1`.
fn star_conditions(a: &StarCollection, k: usize, stars: usize) -> Result<(), String> {
    for r in 0..a.rows() {
        let count = (0..a.cols()).filter(|&c| a.is_star(r, c)).count();
        ensure!(count == stars, "row {r} has {count} stars, expected {stars}");
    }
    for c in 0..a.cols() {
        let count = (0..a.rows()).filter(|&r| a.is_star(r, c)).count();
        ensure!(count < k, "column {c} has {count} stars");
    }
    Ok(())
}

/// Stacked weight of every `k` rows is the same for every cover.
fn cover_independent(a: &StarCollection, k: usize, levels: &[usize]) -> Result<usize, String> {
    let mut seen = None;
    for cover in tuples(levels) {
        let inst = a.instantiate(SymbolKind::Gray, &cover).map_err(|e| e.to_string())?;
        for rows in subsets(a.rows(), k) {
            let w = inst.stack_weight(&rows).nonwhite_count;
            ensure!(*seen.get_or_insert(w) == w, "stack {rows:?} under {cover:?} weighs {w}");
        }
    }
    seen.ok_or_else(|| "no stacks".to_string())
}

fn c1_worked_example() -> Outcome {
    let s = build_binary_evcs(builtin("2-2").unwrap()).unwrap();
    // printed with the secret block first; index [secret][cover1][cover2]
    let printed = [
        [
            [["1001", "1010"], ["1001", "1011"]],
            [["1011", "1010"], ["1011", "1011"]],
        ],
        [
            [["1001", "0110"], ["1001", "0111"]],
            [["1011", "0110"], ["1011", "0111"]],
        ],
    ];
    for (c, by_cover) in printed.iter().enumerate() {
        for (c1, row) in by_cover.iter().enumerate() {
            for (c2, rows) in row.iter().enumerate() {
                let t = s.assemble(&[c1 as u16 + 1, c2 as u16 + 1], &[c as u16 + 1]).unwrap();
                let want = bits(rows);
                ensure!(
                    rotate(&t, s.m0()) == want,
                    "T for secret {c} covers {c1}{c2} differs: {t:?}"
                );
            }
        }
    }
    ensure!(s.m_e() == 4, "m_E = {}", s.m_e());
    ensure!(s.alpha_e(0).to_string() == "1/4", "alpha_E = {}", s.alpha_e(0));
    Ok("8 matrices exact, m_E=4 alpha_E=1/4".into())
}

fn c2_extension_bound() -> Outcome {
    for (k, n) in [(2, 2), (2, 3), (2, 5), (3, 4), (3, 5), (4, 5)] {
        let a = build_extension(k, n, &vec![2; n]).map_err(|e| e.to_string())?;
        let bound = n.div_ceil(k - 1);
        ensure!(a.cols() == bound, "({k},{n}) m0={} bound={bound}", a.cols());
        star_conditions(&a, k, 1).map_err(|e| format!("({k},{n}): {e}"))?;
    }
    Ok("m0 = ceil(n/(k-1)) for all six (k,n)".into())
}

fn c3_instantiation_independence() -> Outcome {
    let a = build_extension(3, 5, &[2; 5]).unwrap();
    let w = cover_independent(&a, 3, &[2; 5])?;
    ensure!(w == 3, "stacked weight {w}");
    Ok("32 covers x 10 stacks all weigh 3".into())
}

fn c4_color_basis() -> Outcome {
    let b = color_basis(3, &builtin("2-3").unwrap()).map_err(|e| e.to_string())?;
    let printed = [
        colors(&["1 2 3 k k k k", "1 k k 2 3 k k", "1 k k k k 2 3"]),
        // first row read as 2 1 3: the literal 2 2 3 lets share 1 alone
        // tell colour 2 apart
        colors(&["2 1 3 k k k k", "2 k k 1 3 k k", "2 k k k k 1 3"]),
        colors(&["3 1 2 k k k k", "3 k k 1 2 k k", "3 k k k k 1 2"]),
    ];
    ensure!(b.variants == printed, "colour basis differs: {:?}", b.variants);
    let s = build_color_evcs(3, &builtin("2-3").unwrap()).unwrap();
    let tile = plan_tile(s.m_e()).unwrap();
    ensure!(s.m_e() == 10, "m_E = {}", s.m_e());
    ensure!((tile.tile_h, tile.tile_w, tile.pad_count) == (5, 2, 0), "tile {tile:?}");
    Ok("B_1..B_3 exact (B_2 first row 2 1 3), m_E=10 on 5x2 tiles".into())
}

fn c5_optimal_vs_replicated() -> Outcome {
    let levels = [3; 5];
    let optimal = build_extension(3, 5, &levels).map_err(|e| e.to_string())?;
    let replicated = replicate_gray(&build_extension(3, 5, &[2; 5]).unwrap(), 3).map_err(|e| e.to_string())?;
    let bound = levels.iter().map(|g| g - 1).sum::<usize>().div_ceil(2);
    ensure!(
        optimal.cols() == 5 && bound == 5,
        "optimal m0={} bound={bound}",
        optimal.cols()
    );
    ensure!(replicated.cols() == 6, "replicated m0={}", replicated.cols());
    for (name, a) in [("optimal", &optimal), ("replicated", &replicated)] {
        star_conditions(a, 3, 2).map_err(|e| format!("{name}: {e}"))?;
        cover_independent(a, 3, &levels).map_err(|e| format!("{name}: {e}"))?;
        for r in 0..5 {
            let w: Vec<usize> = (1..=3u16)
                .map(|l| {
                    let mut cover = vec![1u16; 5];
                    cover[r] = l;
                    a.instantiate(SymbolKind::Gray, &cover)
                        .unwrap()
                        .stack_weight(&[r])
                        .nonwhite_count
                })
                .collect();
            ensure!(w[0] < w[1] && w[1] < w[2], "{name} row {r} level weights {w:?}");
        }
    }
    Ok("optimal m0=5, replicated m0=6, both cover-independent".into())
}

fn c6_gray_ladder() -> Outcome {
    let ladder = gray_ladder(&naor_shamir_kk(2).unwrap(), 3).map_err(|e| e.to_string())?;
    ensure!(ladder.m() == (3 - 1) * 2, "m = {}", ladder.m());
    let w: Vec<usize> = ladder
        .variants
        .iter()
        .map(|v| v.stack_weight(&[0, 1]).nonwhite_count)
        .collect();
    ensure!(w == [2, 3, 4], "stacked weights {w:?}");
    Ok("m=4, stacked weights (2,3,4)".into())
}

fn fixture() -> Scheme {
    build_mevcs_with_bases(2, 3, three_color_2_3_bases(), &CoverDomain::Palette(3)).unwrap()
}

fn c7_fixture() -> Outcome {
    let s = fixture();
    ensure!(s.m_e() == 25, "m_E = {}", s.m_e());
    for i in 0..4 {
        ensure!(s.alpha_e(i).to_string() == "1/25", "alpha_{} = {}", i + 1, s.alpha_e(i));
    }
    let kkk = "k k k k k";
    let pair = |first: &str, a: &str, b: &str| [format!("{first} {a} k {b} k"), format!("{first} k {a} k {b}")];
    let b = |set: usize, sym: usize| -> SymbolMatrix {
        let (a, bb) = match sym {
            1 => ("2", "3"),
            2 => ("1", "3"),
            _ => ("1", "2"),
        };
        let first = sym.to_string();
        let rows: Vec<String> = match set {
            0..=2 => {
                let [x, y] = pair(&first, a, bb);
                let mut rows = vec![x, y];
                rows.insert(2 - set, kkk.to_string());
                rows
            }
            _ => vec![
                format!("{first} {a} k k {bb} k k"),
                format!("{first} k {a} k k {bb} k"),
                format!("{first} k k {a} k k {bb}"),
            ],
        };
        colors(&rows.iter().map(String::as_str).collect::<Vec<_>>())
    };
    for cover in tuples(&[3, 3, 3]) {
        let a: Vec<Vec<Cell>> = (0..3)
            .map(|r| {
                (0..3)
                    .map(|c| if c == r { Cell::Color(cover[r]) } else { Cell::Black })
                    .collect()
            })
            .collect();
        for t in tuples(&[3; 4]) {
            let got = s.assemble(&cover, &t).unwrap();
            let mut want = a.clone();
            for (set, &sym) in t.iter().enumerate() {
                let m = b(set, sym as usize);
                for (r, row) in want.iter_mut().enumerate() {
                    row.extend_from_slice(m.row(r));
                }
            }
            ensure!(
                got == SymbolMatrix::from_rows(want).unwrap(),
                "T differs at cover {cover:?} tuple {t:?}"
            );
        }
    }
    let (contrast, _, extension) = check_contrast(&s, &AuditOptions::default()).map_err(|e| e.to_string())?;
    ensure!(
        contrast.iter().all(|r| r.pass && r.contexts.exhaustive),
        "contrast fails"
    );
    ensure!(
        contrast.iter().all(|r| r.contexts.visited == 27 * 27),
        "contexts not exhaustive"
    );
    ensure!(extension.iter().all(|r| r.pass), "extension stack varies with covers");
    Ok("m_E=25, four alpha=1/25, T exact for 27x81, contrast exhaustive".into())
}

fn c8_corollary() -> Outcome {
    let s = build_binary_mevcs(2, 3).map_err(|e| e.to_string())?;
    let (k, n, g) = (2usize, 3usize, 2usize);
    let mut formula = n.div_ceil(k - 1);
    for p in k..=n {
        formula += subsets(n, p).len() * (g - 1) * (1 << (p - 1));
    }
    ensure!(formula == 13 && s.m_e() == formula, "m_E={} formula={formula}", s.m_e());
    Ok("m_E = 13 = 3 + 3*2 + 1*4".into())
}

fn c9_security() -> Outcome {
    let mut bad = builtin("2-2").unwrap();
    bad.variants[0].set(1, 1, Cell::Black);
    let schemes = [
        build_binary_evcs(builtin("2-2").unwrap()).unwrap(),
        build_binary_evcs(builtin("2-3").unwrap()).unwrap(),
        build_binary_evcs(naor_shamir_kk(3).unwrap()).unwrap(),
        build_gray_evcs(&builtin("2-2").unwrap(), 3, &[2, 2]).unwrap(),
        build_gray_evcs(&builtin("2-2").unwrap(), 2, &[3, 2]).unwrap(),
        build_color_evcs(2, &builtin("2-2").unwrap()).unwrap(),
        build_color_evcs(3, &builtin("2-3").unwrap()).unwrap(),
        build_binary_mevcs(3, 3).unwrap(),
        build_binary_evcs(bad).unwrap(),
    ];
    let mut checked = 0;
    for s in &schemes {
        ensure!(s.m_e() <= 10, "{} has m_E {}", s.id(), s.m_e());
        let security = check_security(s, &AuditOptions::default()).map_err(|e| e.to_string())?;
        let (oracle, _) = brute_force_oracle(s, 10).map_err(|e| e.to_string())?;
        let pass = security.iter().all(|r| r.pass);
        ensure!(pass == oracle, "{}: check_security {pass}, oracle {oracle}", s.id());
        checked += 1;
    }
    let rows = check_security(&fixture(), &AuditOptions::default()).map_err(|e| e.to_string())?;
    ensure!(
        rows.len() == 1 && rows[0].q == 1 && rows[0].pass,
        "fixture security {rows:?}"
    );
    let r = &rows[0];
    ensure!(
        r.covers.exhaustive && r.tuples.exhaustive && r.covers.visited == 27 && r.tuples.visited == 81,
        "fixture coverage {:?} {:?}",
        r.covers,
        r.tuples
    );
    Ok(format!(
        "oracle agrees on {checked} schemes (one broken); fixture q=1 secure over 27x81"
    ))
}

fn c10_mutations() -> Outcome {
    let base = builtin("2-2").unwrap();
    let mut caught = 0;
    for v in 0..2 {
        for r in 0..2 {
            for c in 0..2 {
                let mut b = base.clone();
                let cell = b.variants[v].get(r, c);
                b.variants[v].set(r, c, if cell == Cell::Black { Cell::White } else { Cell::Black });
                let s = build_binary_evcs(b).map_err(|e| e.to_string())?;
                let report = audit(&s, &AuditOptions::default()).map_err(|e| e.to_string())?;
                ensure!(!report.pass(), "flip of matrix {v} cell ({r},{c}) passes");
                caught += 1;
            }
        }
    }
    Ok(format!("{caught}/8 single-cell flips caught"))
}

fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize, domain: usize) -> IndexedImage {
    IndexedImage::new(w, h, (0..w * h).map(|_| rng.gen_range(1..=domain as u16)).collect()).unwrap()
}

/// Encode, write and reread every share, stack every qualified subset and
/// classify each tile. Returns (correct, total) over secrets and covers.
fn pipeline(s: &Scheme, size: usize, seed: u64) -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let secrets: Vec<_> = s
        .symbol_domains()
        .iter()
        .map(|&d| random_image(&mut rng, size, size, d))
        .collect();
    let covers: Vec<_> = s
        .cover_domains()
        .iter()
        .map(|&d| random_image(&mut rng, size, size, d))
        .collect();
    let shares = encode(s, &secrets, &covers, seed).map_err(|e| e.to_string())?;
    let palette = palette_size(s).map(|c| Palette::default_for(c).unwrap());
    let cells: Vec<_> = shares
        .iter()
        .map(|sh| {
            let text = print_pnm(&share_to_pnm(sh, palette.as_ref()).unwrap());
            to_cells(&parse_pnm(&text).unwrap(), palette.as_ref()).unwrap()
        })
        .collect();
    let tile = plan_tile(s.m_e()).unwrap();
    let (mut good, mut total) = (0, 0);
    for (i, secret) in secrets.iter().enumerate() {
        for rows in s.qualified_subsets(i) {
            let stacked = stack(&rows.iter().map(|&r| &cells[r]).collect::<Vec<_>>()).unwrap();
            let classifier = SecretClassifier::new(s, i, &rows).map_err(|e| e.to_string())?;
            for (p, report) in measure(&stacked, tile).unwrap().iter().enumerate() {
                total += 1;
                good += usize::from(classifier.classify(report) == Some(secret.pixels[p]));
            }
        }
    }
    for (r, cover) in covers.iter().enumerate() {
        let classifier = CoverClassifier::new(s, r).map_err(|e| e.to_string())?;
        for (p, report) in measure(&cells[r], tile).unwrap().iter().enumerate() {
            total += 1;
            good += usize::from(classifier.classify(report) == Some(cover.pixels[p]));
        }
    }
    Ok((good, total))
}

fn palette_size(s: &Scheme) -> Option<u16> {
    std::iter::once(s.cover_kind)
        .chain(s.blocks.iter().map(|b| b.basis.kind))
        .filter_map(|k| match k {
            SymbolKind::Palette(c) => Some(c),
            SymbolKind::Gray => None,
        })
        .max()
}

fn c11_pipeline() -> Outcome {
    let start = Instant::now();
    let two_three = builtin("2-3").unwrap();
    let schemes = [
        build_binary_evcs(builtin("2-2").unwrap()).unwrap(),
        build_binary_evcs(two_three.clone()).unwrap(),
        build_binary_evcs(naor_shamir_kk(3).unwrap()).unwrap(),
        build_gray_evcs(&two_three, 4, &[2, 3, 4]).unwrap(),
        build_color_evcs(3, &two_three).unwrap(),
        build_binary_mevcs(2, 3).unwrap(),
        build_mevcs(
            2,
            3,
            &SecretDomain::Gray(vec![3, 2, 3, 2]),
            &CoverDomain::Gray(vec![2, 3, 2]),
        )
        .unwrap(),
        build_mevcs(2, 3, &SecretDomain::Palette(3), &CoverDomain::Palette(3)).unwrap(),
    ];
    let mut pixels = 0;
    for (j, s) in schemes.iter().enumerate() {
        let (good, total) = pipeline(s, 48, 100 + j as u64)?;
        ensure!(good == total, "{}: {good}/{total} pixels classified", s.id());
        pixels += total;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!(
        "{} schemes, {pixels} pixels 100% correct in {:.1}s",
        schemes.len(),
        elapsed.as_secs_f64()
    ))
}

fn run(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_evcs"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "evcs {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(())
}

fn classify_stack(path: &Path, s: &Scheme, secret: usize, rows: &[usize]) -> Vec<Option<u16>> {
    let pal = Palette::default_for(3).unwrap();
    let cells = to_cells(&parse_pnm(&std::fs::read_to_string(path).unwrap()).unwrap(), Some(&pal)).unwrap();
    let classifier = SecretClassifier::new(s, secret, rows).unwrap();
    measure(&cells, plan_tile(s.m_e()).unwrap())
        .unwrap()
        .iter()
        .map(|r| classifier.classify(r))
        .collect()
}

fn c12_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let p = |name: &str| d.join(name).to_string_lossy().into_owned();
    std::fs::write(d.join("c.cfg"), "mode = color-evcs\nk = 2\nn = 3\ncolors = 3\n").unwrap();
    run(&["build", "--config", &p("c.cfg"), "--out", &p("s.txt")])?;
    let s = build_color_evcs(3, &builtin("2-3").unwrap()).unwrap();
    let pal = Palette::default_for(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let write = |name: &str, img: &IndexedImage| {
        std::fs::write(
            d.join(name),
            print_pnm(&from_indexed(img, Expect::Palette(&pal)).unwrap()),
        )
        .unwrap();
    };
    let secret = random_image(&mut rng, 16, 16, 3);
    write("secret.ppm", &secret);
    for i in 1..=3 {
        write(&format!("cover{i}.ppm"), &random_image(&mut rng, 16, 16, 3));
    }
    let encode_to = |seed: &str, out: &str| {
        run(&[
            "encode",
            "--scheme",
            &p("s.txt"),
            "--secret",
            &p("secret.ppm"),
            "--cover",
            &p("cover1.ppm"),
            "--cover",
            &p("cover2.ppm"),
            "--cover",
            &p("cover3.ppm"),
            "--seed",
            seed,
            "--out",
            &p(out),
        ])
    };
    encode_to("7", "a")?;
    encode_to("7", "b")?;
    encode_to("8", "c")?;
    let read = |dir: &str, i: usize| std::fs::read(d.join(dir).join(format!("share{i}.ppm"))).unwrap();
    for i in 1..=3 {
        ensure!(read("a", i) == read("b", i), "share {i} differs between equal seeds");
        ensure!(read("a", i) != read("c", i), "share {i} identical across seeds");
    }
    for rows in s.qualified_subsets(0) {
        let mut results = Vec::new();
        for dir in ["a", "c"] {
            let out = p(&format!("{dir}-stack.ppm"));
            let mut args = vec!["stack".to_string(), "--out".to_string(), out.clone()];
            args.extend(rows.iter().map(|r| p(&format!("{dir}/share{}.ppm", r + 1))));
            run(&args.iter().map(String::as_str).collect::<Vec<_>>())?;
            results.push(classify_stack(Path::new(&out), &s, 0, &rows));
        }
        ensure!(
            results[0] == results[1],
            "stack {rows:?} classifies differently across seeds"
        );
        let expected: Vec<Option<u16>> = secret.pixels.iter().map(|&v| Some(v)).collect();
        ensure!(results[0] == expected, "stack {rows:?} does not recover the secret");
    }
    Ok("equal seeds byte-identical, other seed differs but classifies identically".into())
}

/// The fixture's fourth secret is readable on two-share stacks too, which
/// makes the pair secrets ambiguous per stack; report how far off they are.
fn fixture_note() -> String {
    let s = fixture();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let secrets: Vec<_> = (0..4).map(|_| random_image(&mut rng, 48, 48, 3)).collect();
    let covers: Vec<_> = (0..3).map(|_| random_image(&mut rng, 48, 48, 3)).collect();
    let shares = encode(&s, &secrets, &covers, 41).unwrap();
    let tile = plan_tile(s.m_e()).unwrap();
    let mut parts = Vec::new();
    for (i, secret) in secrets.iter().enumerate() {
        let rows = &s.qualified_subsets(i)[0];
        let stacked = stack(&rows.iter().map(|&r| &shares[r].image).collect::<Vec<_>>()).unwrap();
        let classifier = SecretClassifier::new(&s, i, rows).unwrap();
        let reports = measure(&stacked, tile).unwrap();
        let good = reports
            .iter()
            .zip(&secret.pixels)
            .filter(|(r, &v)| classifier.classify(r) == Some(v))
            .count();
        parts.push(format!(
            "secret {} {:.0}%",
            i + 1,
            100.0 * good as f64 / reports.len() as f64
        ));
    }
    parts.join(", ")
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("(2,2) worked example", c1_worked_example),
        ("extension width bound", c2_extension_bound),
        ("instantiation independence", c3_instantiation_independence),
        ("three-colour basis", c4_color_basis),
        ("optimal vs replicated gray extension", c5_optimal_vs_replicated),
        ("gray ladder", c6_gray_ladder),
        ("three-colour (2,3) multi-secret fixture", c7_fixture),
        ("binary multi-secret expansion", c8_corollary),
        ("security and oracle agreement", c9_security),
        ("mutation detection", c10_mutations),
        ("end-to-end pipeline", c11_pipeline),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} ({secs:.2}s)", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} ({secs:.2}s)", n + 1);
            }
        }
    }
    println!(
        "INFO fixture stacks classified per stack without context: {}",
        fixture_note()
    );
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
