//! Human-readable output: build summaries and audit reports. Every report
//! line is `<section> key=value ... PASS|FAIL` so it greps well.

use std::fmt::Write as _;

use evcs_core::codec::plan_tile;
use evcs_core::matrix::WeightReport;
use evcs_core::scheme::{Reveal, Scheme};
use evcs_core::verify::{AuditReport, Coverage};

fn one_based(rows: &[usize]) -> String {
    let v: Vec<String> = rows.iter().map(|r| (r + 1).to_string()).collect();
    v.join(",")
}

fn symbols(v: &[u16]) -> String {
    let v: Vec<String> = v.iter().map(u16::to_string).collect();
    v.join(",")
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn coverage(c: Coverage) -> String {
    if c.exhaustive {
        format!("{}/{}", c.visited, c.total)
    } else {
        format!("{}/{}(sampled)", c.visited, c.total)
    }
}

fn weights(r: &WeightReport) -> String {
    let mut out = format!("black={} nonwhite={}", r.black_count, r.nonwhite_count);
    for (id, count) in &r.per_color_count {
        let _ = write!(out, " c{id}={count}");
    }
    out
}

/// `m_E=.. alpha_E=..` for one secret, or `m_E` plus one alpha line per
/// secret with its qualified set.
pub fn build_summary(s: &Scheme) -> String {
    let mut out = String::new();
    if s.secrets() == 1 {
        let _ = writeln!(out, "m_E={} alpha_E={}", s.m_e(), s.alpha_e(0));
    } else {
        let _ = writeln!(out, "m_E={}", s.m_e());
        for (i, b) in s.blocks.iter().enumerate() {
            let set = match b.reveal {
                Reveal::Threshold => "any".to_string(),
                Reveal::Exact => one_based(&b.members),
            };
            let _ = writeln!(out, "alpha_{}={} set={set}", i + 1, s.alpha_e(i));
        }
    }
    out
}

/// Scheme facts for `info`.
pub fn describe_scheme(s: &Scheme) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scheme {} k={} n={} secrets={}", s.mode, s.k, s.n, s.secrets());
    let _ = writeln!(out, "m0={} m={} m_E={}", s.m0(), s.basis_width(), s.m_e());
    if let Ok(t) = plan_tile(s.m_e()) {
        let _ = writeln!(out, "tile={}x{} pad={}", t.tile_h, t.tile_w, t.pad_count);
    }
    let _ = writeln!(
        out,
        "cover_levels={}",
        symbols(&s.cover_domains().iter().map(|&d| d as u16).collect::<Vec<_>>())
    );
    for (i, b) in s.blocks.iter().enumerate() {
        let set = match b.reveal {
            Reveal::Threshold => format!("any {} of {}", s.k, s.n),
            Reveal::Exact => one_based(&b.members),
        };
        let _ = writeln!(
            out,
            "secret {} set={set} symbols={} width={} alpha_E={}",
            i + 1,
            b.basis.symbols(),
            b.basis.m(),
            s.alpha_e(i)
        );
    }
    out
}

/// Full audit text. `oracle_note` explains a skipped oracle run.
pub fn audit_text(s: &Scheme, r: &AuditReport, oracle_note: Option<&str>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "audit {} m_E={}", s.id(), s.m_e());
    for c in &r.contrast {
        let _ = writeln!(
            out,
            "contrast secret={} stack={} symbol={} other={} gap={} alpha_m={} contexts={} {}",
            c.secret + 1,
            one_based(&c.subset),
            c.symbol,
            c.other,
            c.gap,
            c.alpha_m,
            coverage(c.contexts),
            verdict(c.pass)
        );
    }
    for t in &r.thresholds {
        let _ = writeln!(
            out,
            "threshold secret={} stack={} level={} lighter_max={} darker_min={} alpha_m={} {}",
            t.secret + 1,
            one_based(&t.subset),
            t.level,
            t.lighter_max,
            t.darker_min,
            t.alpha_m,
            verdict(t.pass)
        );
    }
    for e in &r.extension {
        let _ = writeln!(
            out,
            "extension stack={} {} covers={} {}",
            one_based(&e.subset),
            weights(&e.report),
            coverage(e.covers),
            verdict(e.pass)
        );
    }
    for row in &r.security {
        let _ = writeln!(
            out,
            "security q={} subsets={} covers={} tuples={} failures={} {}",
            row.q,
            row.subsets,
            coverage(row.covers),
            coverage(row.tuples),
            row.failures,
            verdict(row.pass)
        );
        if let Some(f) = &row.first_failure {
            let _ = writeln!(
                out,
                "  failing subset={} cover={} tuple={} differs from tuple={}",
                one_based(&f.subset),
                symbols(&f.cover),
                symbols(&f.tuple),
                symbols(&f.reference_tuple)
            );
        }
    }
    for f in &r.formulas {
        let secret = f.secret.map(|i| format!(" secret={}", i + 1)).unwrap_or_default();
        let _ = writeln!(
            out,
            "formula {}{secret} actual={} {} expected={} {}",
            f.name,
            f.actual,
            f.relation.symbol(),
            f.expected,
            verdict(f.pass)
        );
    }
    match (&r.oracle, oracle_note) {
        (Some(o), _) => {
            let _ = writeln!(
                out,
                "oracle max_m={} arrangements={} oracle={} check_security={} agreement={}",
                o.max_m,
                o.arrangements,
                verdict(o.oracle_pass),
                verdict(o.security_pass),
                if o.agrees() { "yes" } else { "NO" }
            );
        }
        (None, Some(note)) => {
            let _ = writeln!(out, "oracle skipped: {note}");
        }
        (None, None) => {}
    }
    let _ = writeln!(out, "verdict {}", verdict(r.pass()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use evcs_core::basis::builtin;
    use evcs_core::build::build_binary_evcs;
    use evcs_core::verify::{audit, AuditOptions};

    #[test]
    fn summary_of_the_smallest_scheme() {
        let s = build_binary_evcs(builtin("2-2").unwrap()).unwrap();
        assert_eq!(build_summary(&s), "m_E=4 alpha_E=1/4\n");
    }

    #[test]
    fn audit_lines() {
        let s = build_binary_evcs(builtin("2-2").unwrap()).unwrap();
        let opts = AuditOptions {
            oracle: Some(10),
            ..AuditOptions::default()
        };
        let text = audit_text(&s, &audit(&s, &opts).unwrap(), None);
        assert!(text.contains("agreement=yes"));
        assert!(text.ends_with("verdict PASS\n"));
        assert!(text
            .lines()
            .filter(|l| l.starts_with("security"))
            .all(|l| l.ends_with("PASS")));
    }
}
