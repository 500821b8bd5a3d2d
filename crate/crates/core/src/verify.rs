//! Machine checks for constructed schemes: contrast, security, closed-form
//! widths, plus an exhaustive permutation oracle for small expansions.
//!
//! Everything is checked on the assembled per-pixel matrix `T`, so a scheme
//! loaded from a file is audited exactly like a built one.
//!
//! Security is conditional on the covers. Covers are public (they are what
//! each share visibly shows), so for every fixed cover assignment the
//! restricted `T` of any `q < k` rows must have the same column multiset for
//! every secret tuple. Equal column multisets are exactly equal frequency
//! tables over all column permutations; [`brute_force_oracle`] checks that
//! claim the slow way.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::SymbolKind;
use crate::combin::{ceil_div, combinations, mixed_radix, space_size};
use crate::error::{Error, Result};
use crate::matrix::{Cell, SymbolMatrix, WeightReport};
use crate::scheme::{Mode, Scheme};

/// Default bound on exhaustive enumeration of a cover or tuple space.
pub const DEFAULT_CAP: usize = 4096;
/// Assignments drawn when a space is above the cap.
pub const DEFAULT_SAMPLE: usize = 256;
/// Largest `m_E` the permutation oracle accepts by default.
pub const DEFAULT_ORACLE_MAX_M: usize = 10;
/// Hard limit for the oracle's arrangement encoding.
pub const ORACLE_LIMIT_M: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditOptions {
    /// Spaces up to this size are enumerated exhaustively.
    pub cap: usize,
    /// Sample larger spaces instead of failing.
    pub sampling: bool,
    pub sample_size: usize,
    pub seed: u64,
    /// Also run the permutation oracle with this `max_m`.
    pub oracle: Option<usize>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            cap: DEFAULT_CAP,
            sampling: true,
            sample_size: DEFAULT_SAMPLE,
            seed: 0,
            oracle: None,
        }
    }
}

/// How much of an assignment space was visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coverage {
    pub visited: usize,
    /// Saturates at `usize::MAX`.
    pub total: usize,
    pub exhaustive: bool,
}

/// Digit vectors (0-based) of a mixed-radix space, all of them or a seeded
/// sample.
fn assignments(radices: &[usize], opts: &AuditOptions, what: &str, salt: u64) -> Result<(Vec<Vec<usize>>, Coverage)> {
    let total = space_size(radices);
    if total <= opts.cap {
        let all: Vec<_> = (0..total).map(|i| mixed_radix(i, radices)).collect();
        return Ok((
            all,
            Coverage {
                visited: total,
                total,
                exhaustive: true,
            },
        ));
    }
    if !opts.sampling {
        return Err(Error::Resource(format!(
            "{what} space has {total} assignments, cap is {}",
            opts.cap
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ salt);
    let sample: Vec<Vec<usize>> = (0..opts.sample_size)
        .map(|_| radices.iter().map(|&r| rng.gen_range(0..r)).collect())
        .collect();
    let visited = sample.len();
    Ok((
        sample,
        Coverage {
            visited,
            total,
            exhaustive: false,
        },
    ))
}

fn to_symbols(digits: &[usize]) -> Vec<u16> {
    digits.iter().map(|&d| d as u16 + 1).collect()
}

/// Smallest per-context gap for one qualified stack and one symbol pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContrastRow {
    /// 0-based secret.
    pub secret: usize,
    /// 0-based stacked rows.
    pub subset: Vec<usize>,
    /// Gray: the lighter level; palette: the colour being measured.
    pub symbol: u16,
    /// Gray: the next level; palette: the competing symbol.
    pub other: u16,
    pub gap: i64,
    pub alpha_m: usize,
    pub contexts: Coverage,
    pub pass: bool,
}

/// Gray secrets: one global threshold separates adjacent levels on a stack
/// whatever the covers and other secrets are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdRow {
    pub secret: usize,
    pub subset: Vec<usize>,
    pub level: u16,
    pub lighter_max: usize,
    /// Blackness threshold of the darker level on this stack.
    pub darker_min: usize,
    pub alpha_m: usize,
    pub pass: bool,
}

/// The instantiated extension stacks to the same report on a qualified
/// stack for every cover assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionRow {
    pub subset: Vec<usize>,
    pub report: WeightReport,
    pub covers: Coverage,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecurityFailure {
    pub subset: Vec<usize>,
    pub cover: Vec<u16>,
    pub tuple: Vec<u16>,
    pub reference_tuple: Vec<u16>,
}

/// Verdict for all forbidden stacks of `q` rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecurityRow {
    pub q: usize,
    pub subsets: usize,
    pub covers: Coverage,
    pub tuples: Coverage,
    /// (subset, cover) pairs with differing multisets.
    pub failures: usize,
    pub first_failure: Option<SecurityFailure>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    /// Actual at least expected.
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Ge => ">=",
        }
    }

    fn holds(self, actual: usize, expected: usize) -> bool {
        match self {
            Relation::Eq => actual == expected,
            Relation::Ge => actual >= expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaRow {
    pub name: &'static str,
    pub secret: Option<usize>,
    pub expected: usize,
    pub actual: usize,
    pub relation: Relation,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCheck {
    pub max_m: usize,
    pub oracle_pass: bool,
    pub security_pass: bool,
    pub arrangements: u64,
}

impl OracleCheck {
    pub fn agrees(&self) -> bool {
        self.oracle_pass == self.security_pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub contrast: Vec<ContrastRow>,
    pub thresholds: Vec<ThresholdRow>,
    pub extension: Vec<ExtensionRow>,
    pub security: Vec<SecurityRow>,
    pub formulas: Vec<FormulaRow>,
    pub oracle: Option<OracleCheck>,
}

impl AuditReport {
    pub fn contrast_pass(&self) -> bool {
        self.contrast.iter().all(|r| r.pass)
            && self.thresholds.iter().all(|r| r.pass)
            && self.extension.iter().all(|r| r.pass)
    }

    pub fn security_pass(&self) -> bool {
        self.security.iter().all(|r| r.pass)
    }

    pub fn formulas_pass(&self) -> bool {
        self.formulas.iter().all(|r| r.pass)
    }

    /// Every row passes and, if run, the oracle agrees.
    pub fn pass(&self) -> bool {
        self.contrast_pass()
            && self.security_pass()
            && self.formulas_pass()
            && self.oracle.is_none_or(|o| o.agrees() && o.oracle_pass)
    }
}

/// Full audit.
pub fn audit(scheme: &Scheme, opts: &AuditOptions) -> Result<AuditReport> {
    let (contrast, thresholds, extension) = check_contrast(scheme, opts)?;
    let security = check_security(scheme, opts)?;
    let formulas = check_formulas(scheme)?;
    let oracle = match opts.oracle {
        Some(max_m) => {
            let (oracle_pass, arrangements) = brute_force_oracle(scheme, max_m)?;
            Some(OracleCheck {
                max_m,
                oracle_pass,
                security_pass: security.iter().all(|r| r.pass),
                arrangements,
            })
        }
        None => None,
    };
    Ok(AuditReport {
        contrast,
        thresholds,
        extension,
        security,
        formulas,
        oracle,
    })
}

/// Per-symbol stack reports of secret `i` in one context: `cover` plus the
/// other secrets' symbols (`others`, in secret order skipping `i`).
fn symbol_stacks(
    scheme: &Scheme,
    i: usize,
    cover: &[u16],
    others: &[u16],
    subset: &[usize],
) -> Result<Vec<WeightReport>> {
    let mut symbols: Vec<u16> = others.to_vec();
    symbols.insert(i, 1);
    (1..=scheme.blocks[i].basis.symbols() as u16)
        .map(|s| {
            symbols[i] = s;
            Ok(scheme.assemble(cover, &symbols)?.stack_weight(subset))
        })
        .collect()
}

type ContrastSections = (Vec<ContrastRow>, Vec<ThresholdRow>, Vec<ExtensionRow>);

/// Contrast on every qualified stack of every secret.
///
/// Gaps are taken per context (fixed covers and other secrets), as a stack
/// may legitimately show another secret too. Gray secrets additionally get a
/// context-free threshold check, and the extension's stacked contribution
/// must not depend on the covers.
pub fn check_contrast(scheme: &Scheme, opts: &AuditOptions) -> Result<ContrastSections> {
    let cover_domains = scheme.cover_domains();
    let symbol_domains = scheme.symbol_domains();
    let mut contrast = Vec::new();
    let mut thresholds = Vec::new();

    for (i, block) in scheme.blocks.iter().enumerate() {
        let mut radices = cover_domains.clone();
        radices.extend(
            symbol_domains
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &d)| d),
        );
        let (contexts, coverage) = assignments(&radices, opts, "contrast context", i as u64)?;
        let alpha_m = block.basis.alpha_m;
        let g = block.basis.symbols();

        for subset in scheme.qualified_subsets(i) {
            // gaps[(a, b)] is the smallest seen value of the measured gap
            let mut gaps: BTreeMap<(u16, u16), i64> = BTreeMap::new();
            let mut lighter_max = alloc::vec![0usize; g];
            let mut darker_min = alloc::vec![usize::MAX; g];
            for ctx in &contexts {
                let (cover, others) = ctx.split_at(scheme.n);
                let stacks = symbol_stacks(scheme, i, &to_symbols(cover), &to_symbols(others), &subset)?;
                let mut record = |a: u16, b: u16, gap: i64| {
                    let slot = gaps.entry((a, b)).or_insert(i64::MAX);
                    *slot = (*slot).min(gap);
                };
                match block.basis.kind {
                    SymbolKind::Gray => {
                        for (j, pair) in stacks.windows(2).enumerate() {
                            let (w0, w1) = (pair[0].nonwhite_count, pair[1].nonwhite_count);
                            record(j as u16 + 1, j as u16 + 2, w1 as i64 - w0 as i64);
                        }
                        for (j, s) in stacks.iter().enumerate() {
                            lighter_max[j] = lighter_max[j].max(s.nonwhite_count);
                            darker_min[j] = darker_min[j].min(s.nonwhite_count);
                        }
                    }
                    SymbolKind::Palette(_) => {
                        for (a, own) in stacks.iter().enumerate() {
                            let color = a as u16 + 1;
                            for (b, other) in stacks.iter().enumerate().filter(|&(b, _)| b != a) {
                                record(color, b as u16 + 1, own.color(color) as i64 - other.color(color) as i64);
                            }
                        }
                    }
                }
            }
            for ((symbol, other), gap) in gaps {
                contrast.push(ContrastRow {
                    secret: i,
                    subset: subset.clone(),
                    symbol,
                    other,
                    gap,
                    alpha_m,
                    contexts: coverage,
                    pass: alpha_m >= 1 && gap >= alpha_m as i64,
                });
            }
            if block.basis.kind == SymbolKind::Gray {
                for level in 1..g {
                    let (lo, hi) = (lighter_max[level - 1], darker_min[level]);
                    thresholds.push(ThresholdRow {
                        secret: i,
                        subset: subset.clone(),
                        level: level as u16,
                        lighter_max: lo,
                        darker_min: hi,
                        alpha_m,
                        pass: alpha_m >= 1 && lo + alpha_m <= hi,
                    });
                }
            }
        }
    }

    let mut stacks: Vec<Vec<usize>> = (0..scheme.secrets())
        .flat_map(|i| scheme.qualified_subsets(i))
        .collect();
    stacks.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    stacks.dedup();
    let (covers, coverage) = assignments(&cover_domains, opts, "cover", 0x5eed)?;
    let mut extension = Vec::with_capacity(stacks.len());
    for subset in stacks {
        let mut first: Option<WeightReport> = None;
        let mut pass = true;
        for cover in &covers {
            let a = scheme.extension.instantiate(scheme.cover_kind, &to_symbols(cover))?;
            let w = a.stack_weight(&subset);
            match &first {
                None => first = Some(w),
                Some(f) => pass &= *f == w,
            }
        }
        extension.push(ExtensionRow {
            subset,
            report: first.unwrap_or_default(),
            covers: coverage,
            pass,
        });
    }
    Ok((contrast, thresholds, extension))
}

/// Forbidden stacks of `q = 1..k-1` rows reveal nothing about the secret
/// tuple once the covers are fixed.
pub fn check_security(scheme: &Scheme, opts: &AuditOptions) -> Result<Vec<SecurityRow>> {
    let (covers, cover_cov) = assignments(&scheme.cover_domains(), opts, "cover", 0xc0)?;
    let (tuples, tuple_cov) = assignments(&scheme.symbol_domains(), opts, "secret tuple", 0x7e)?;
    let by_q: Vec<Vec<Vec<usize>>> = (1..scheme.k).map(|q| combinations(scheme.n, q)).collect();
    let mut failures = alloc::vec![0usize; by_q.len()];
    let mut first: Vec<Option<SecurityFailure>> = alloc::vec![None; by_q.len()];

    for cover in &covers {
        let cover = to_symbols(cover);
        let matrices: Vec<SymbolMatrix> = tuples
            .iter()
            .map(|t| scheme.assemble(&cover, &to_symbols(t)))
            .collect::<Result<_>>()?;
        for (qi, subsets) in by_q.iter().enumerate() {
            for subset in subsets {
                let reference = matrices[0].restrict_rows(subset).column_multiset();
                let bad = matrices
                    .iter()
                    .position(|t| t.restrict_rows(subset).column_multiset() != reference);
                if let Some(b) = bad {
                    failures[qi] += 1;
                    first[qi].get_or_insert_with(|| SecurityFailure {
                        subset: subset.clone(),
                        cover: cover.clone(),
                        tuple: to_symbols(&tuples[b]),
                        reference_tuple: to_symbols(&tuples[0]),
                    });
                }
            }
        }
    }

    Ok(by_q
        .iter()
        .enumerate()
        .map(|(qi, subsets)| SecurityRow {
            q: qi + 1,
            subsets: subsets.len(),
            covers: cover_cov,
            tuples: tuple_cov,
            failures: failures[qi],
            first_failure: first[qi].take(),
            pass: failures[qi] == 0,
        })
        .collect())
}

/// In-place lexicographic successor; false once the sequence is the last.
fn next_permutation(seq: &mut [u8]) -> bool {
    let Some(i) = (1..seq.len()).rev().find(|&i| seq[i - 1] < seq[i]) else {
        return false;
    };
    let j = (i..seq.len())
        .rev()
        .find(|&j| seq[j] > seq[i - 1])
        .expect("pivot has a successor");
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Frequency table of all `m!` column orders of `ids`: each distinct
/// arrangement (packed 4 bits per column, first column most significant)
/// with the number of orders producing it. Sorted by arrangement.
fn frequency_table(ids: &[u8]) -> Vec<(u64, u64)> {
    let mut seq = ids.to_vec();
    seq.sort_unstable();
    let mut mult: BTreeMap<u8, usize> = BTreeMap::new();
    for &id in &seq {
        *mult.entry(id).or_default() += 1;
    }
    let weight: u64 = mult.values().map(|&c| factorial(c)).product();
    let mut table = Vec::new();
    loop {
        let code = seq.iter().fold(0u64, |acc, &id| acc << 4 | id as u64);
        table.push((code, weight));
        if !next_permutation(&mut seq) {
            return table;
        }
    }
}

/// Materialise every column permutation of `T` for every cover and secret
/// tuple, restrict to every `q < k` row subset and compare frequency tables
/// across tuples. Returns the verdict and the number of distinct
/// arrangements generated.
pub fn brute_force_oracle(scheme: &Scheme, max_m: usize) -> Result<(bool, u64)> {
    let m = scheme.m_e();
    if m > max_m.min(ORACLE_LIMIT_M) {
        return Err(Error::Resource(format!(
            "oracle needs m_E <= {}, scheme has {m}",
            max_m.min(ORACLE_LIMIT_M)
        )));
    }
    let strict = AuditOptions {
        sampling: false,
        ..AuditOptions::default()
    };
    let (covers, _) = assignments(&scheme.cover_domains(), &strict, "cover", 0)?;
    let (tuples, _) = assignments(&scheme.symbol_domains(), &strict, "secret tuple", 0)?;
    let mut pass = true;
    let mut arrangements = 0u64;
    for cover in &covers {
        let cover = to_symbols(cover);
        let matrices: Vec<SymbolMatrix> = tuples
            .iter()
            .map(|t| scheme.assemble(&cover, &to_symbols(t)))
            .collect::<Result<_>>()?;
        for q in 1..scheme.k {
            for subset in combinations(scheme.n, q) {
                // column ids shared by all tuples of this cover and subset
                let mut intern: BTreeMap<Vec<Cell>, u8> = BTreeMap::new();
                let mut reference: Option<Vec<(u64, u64)>> = None;
                for t in &matrices {
                    let r = t.restrict_rows(&subset);
                    let ids: Vec<u8> = (0..m)
                        .map(|c| {
                            let next = intern.len() as u8;
                            *intern.entry(r.column(c)).or_insert(next)
                        })
                        .collect();
                    let table = frequency_table(&ids);
                    arrangements += table.len() as u64;
                    debug_assert_eq!(table.iter().map(|e| e.1).sum::<u64>(), factorial(m));
                    match &reference {
                        None => reference = Some(table),
                        Some(rt) => pass &= *rt == table,
                    }
                }
            }
        }
    }
    Ok((pass, arrangements))
}

/// Lower bound `⌈Σ (g_i - 1) / (k - 1)⌉` on the extension width.
fn extension_bound(scheme: &Scheme) -> usize {
    let stars: usize = scheme.extension.row_levels().iter().map(|g| g - 1).sum();
    ceil_div(stars, scheme.k - 1)
}

/// Smallest measured gap of secret `i` on its qualified stacks, with every
/// other input at symbol 1.
fn measured_gap(scheme: &Scheme, i: usize) -> Result<usize> {
    let cover = alloc::vec![1u16; scheme.n];
    let others = alloc::vec![1u16; scheme.secrets() - 1];
    let mut best = i64::MAX;
    for subset in scheme.qualified_subsets(i) {
        let stacks = symbol_stacks(scheme, i, &cover, &others, &subset)?;
        match scheme.blocks[i].basis.kind {
            SymbolKind::Gray => {
                for p in stacks.windows(2) {
                    best = best.min(p[1].nonwhite_count as i64 - p[0].nonwhite_count as i64);
                }
            }
            SymbolKind::Palette(_) => {
                for (a, own) in stacks.iter().enumerate() {
                    let c = a as u16 + 1;
                    for other in stacks.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, o)| o) {
                        best = best.min(own.color(c) as i64 - other.color(c) as i64);
                    }
                }
            }
        }
    }
    Ok(if best == i64::MAX { 0 } else { best.max(0) as usize })
}

/// Closed forms for widths and contrast evaluated against the scheme.
pub fn check_formulas(scheme: &Scheme) -> Result<Vec<FormulaRow>> {
    let mut rows = Vec::new();
    let mut push = |name, secret, expected, actual, relation: Relation| {
        rows.push(FormulaRow {
            name,
            secret,
            expected,
            actual,
            relation,
            pass: relation.holds(actual, expected),
        })
    };

    let m_e = scheme.m_e();
    let t = scheme.assemble(&alloc::vec![1; scheme.n], &alloc::vec![1; scheme.secrets()])?;
    push(
        "pixel_expansion",
        None,
        scheme.m0() + scheme.basis_width(),
        t.cols(),
        Relation::Eq,
    );
    let bound = extension_bound(scheme);
    push("extension_min_width", None, bound, scheme.m0(), Relation::Ge);

    for (i, block) in scheme.blocks.iter().enumerate() {
        // α_E · m_E recovered from the reduced ratio must be the basis gap
        let alpha = scheme.alpha_e(i);
        let scaled = (alpha.num * m_e as u64 / alpha.den) as usize;
        push(
            "contrast_preserved",
            Some(i),
            scaled,
            measured_gap(scheme, i)?,
            Relation::Eq,
        );
        if block.basis.kind == SymbolKind::Gray && block.basis.k < usize::BITS as usize {
            let g = block.basis.symbols();
            let lower = (g - 1) << (block.basis.k - 1);
            push("gray_block_min_width", Some(i), lower, block.basis.m(), Relation::Ge);
        }
    }

    if scheme.mode == Mode::GrayMevcs {
        let blocks: usize = scheme
            .blocks
            .iter()
            .map(|b| (b.basis.symbols() - 1) << (b.basis.k - 1))
            .sum();
        push("mevcs_min_expansion", None, bound + blocks, m_e, Relation::Ge);
    }
    Ok(rows)
}
