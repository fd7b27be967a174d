//! Text, JSON and CSV renderings of results.

use std::fmt::Write as _;

use bogomolov::corpus::{self, CorpusEntry, FamilyCheck};
use bogomolov::engine::TailedPresentation;
use bogomolov::pipeline::{group_name, B0Result, Mode, Quotient, SchurResult, SearchRegime};
use bogomolov::presentation::{PcGroup, PcPresentation, Relation, ValidationReport};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::Format;

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(BigInt::to_string).collect()
}

fn joined(v: &[BigInt], sep: &str) -> String {
    strings(v).join(sep)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn lhs(r: Relation, orders: &[u32]) -> String {
    match r {
        Relation::Power(i) => format!("g{}^{}", i + 1, orders[i]),
        Relation::Comm(i, j) => format!("[g{},g{}]", i + 1, j + 1),
    }
}

pub fn failures_text(rep: &ValidationReport) -> String {
    let mut out = String::new();
    for f in &rep.failures {
        let _ = writeln!(out, "  {}: {} vs {}", f.check, f.left, f.right);
    }
    out
}

pub fn check(p: &PcPresentation, rep: &ValidationReport, format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({
            "name": p.name(),
            "n": p.len(),
            "ok": rep.ok,
            "checksRun": rep.checks_run,
            "failures": rep.failures,
        })),
        Format::Csv => format!(
            "name,n,ok,checks_run,failures\n{},{},{},{},{}\n",
            p.name(),
            p.len(),
            rep.ok,
            rep.checks_run,
            rep.failures.len()
        ),
        Format::Text => {
            let mut out = format!(
                "{}: {} generators, order {}\n",
                display_name(p),
                p.len(),
                order_text(p)
            );
            if rep.ok {
                let _ = writeln!(out, "consistent ({} checks)", rep.checks_run);
            } else {
                let _ = writeln!(
                    out,
                    "inconsistent ({} of {} checks fail)",
                    rep.failures.len(),
                    rep.checks_run
                );
                out.push_str(&failures_text(rep));
            }
            out
        }
    }
}

fn display_name(p: &PcPresentation) -> &str {
    if p.name().is_empty() {
        "(unnamed)"
    } else {
        p.name()
    }
}

fn order_text(p: &PcPresentation) -> String {
    p.group_order()
        .map_or_else(|| "> 2^64".to_string(), |o| o.to_string())
}

fn expansion_text(r: &B0Result) -> Vec<String> {
    let labels = r.torsion_labels();
    r.expansions
        .iter()
        .map(|e| {
            let terms: Vec<String> = e
                .terms
                .iter()
                .map(|(k, c)| {
                    if c.is_one() {
                        labels[*k].clone()
                    } else {
                        format!("{}^{c}", labels[*k])
                    }
                })
                .collect();
            format!("t{} = {}", e.tail + 1, terms.join("*"))
        })
        .collect()
}

fn regime_text(r: SearchRegime) -> &'static str {
    match r {
        SearchRegime::GeneratorPairs => "generator pairs",
        SearchRegime::ElementPairs => "element pairs",
    }
}

fn schur_divides(r: &B0Result) -> bool {
    let schur: BigInt = r.schur.invariants.iter().product();
    schur.mod_floor(&r.b0_order()).is_zero()
}

fn b0_text(r: &B0Result, g: &PcPresentation, entry: Option<&CorpusEntry>) -> String {
    let p = r.cp_extension.presentation();
    let mut out = String::new();
    if let Some(f) = r.family {
        let _ = write!(out, "Family {f}");
        if let Some(id) = entry.and_then(|e| e.gap_id) {
            let _ = write!(out, " (GAP id {id})");
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "Group {}: {} generators, order {}",
        display_name(g),
        r.n,
        order_text(g)
    );

    out.push_str("\nTailed presentation:\n");
    let tp = TailedPresentation::new(g);
    for rel in g.relations() {
        let rhs = g.rhs(rel).filter(|w| !w.is_identity());
        let t = tp.tail_of(rel).expect("every printed relation has a tail") + 1;
        let rhs = rhs.map_or(format!("t{t}"), |w| format!("{w}*t{t}"));
        let _ = writeln!(out, "  {} = {}", lhs(rel, g.orders()), rhs);
    }
    let q = &r.quotient;
    let _ = writeln!(out, "\nWe add {} tails.", q.m);

    let (cons, comm): (Vec<_>, Vec<_>) = q.rows.iter().partition(|row| {
        matches!(
            row.provenance,
            bogomolov::pipeline::Provenance::Consistency { .. }
        )
    });
    out.push_str("\nConsistency relations:\n");
    if cons.is_empty() {
        out.push_str("  none\n");
    }
    for row in cons {
        let _ = writeln!(
            out,
            "  {} = 1    from {}",
            row.relation_text(),
            row.provenance
        );
    }
    out.push_str("\nCommuting relations:\n");
    if comm.is_empty() {
        out.push_str("  none\n");
    }
    for row in comm {
        let _ = writeln!(
            out,
            "  {} = 1    from {}",
            row.relation_text(),
            row.provenance
        );
    }

    out.push_str("\nRelation matrix T (Hermite normal form):\n");
    if q.hnf.rows() == 0 {
        out.push_str("  empty\n");
    }
    for line in q.hnf.to_string().lines() {
        let _ = writeln!(out, "  {line}");
    }
    let divisors = if q.divisors.is_empty() {
        "none".to_string()
    } else {
        joined(&q.divisors, ", ")
    };
    let _ = writeln!(out, "\nElementary divisors: {divisors}");
    let _ = writeln!(out, "Free rank: {}", q.free_rank);

    if !q.torsion.is_empty() {
        out.push_str("\nTorsion generators:");
        for t in &q.torsion {
            let _ = write!(out, " {} (order {})", t.label(), t.order);
        }
        out.push_str("\n\nExpansions:\n");
        for line in expansion_text(r) {
            let _ = writeln!(out, "  {line}");
        }
        let names: Vec<String> = r
            .torsion_labels()
            .iter()
            .enumerate()
            .map(|(k, l)| format!("g{} = {l}", r.n + k + 1))
            .collect();
        let _ = writeln!(
            out,
            "\nCommutativity-preserving extension ({}):",
            names.join(", ")
        );
        for line in p.to_text().lines() {
            let _ = writeln!(out, "  {line}");
        }
        out.push_str("\nNonuniversal commutator relations:\n");
        for w in &r.generator_words {
            let _ = writeln!(
                out,
                "  {} = {}    ({})",
                w.target,
                w.expression,
                regime_text(w.regime)
            );
        }
    }

    let es = &r.exterior_square;
    out.push('\n');
    let _ = writeln!(
        out,
        "Commutativity preserving: {}",
        if r.cp_ok { "yes" } else { "NO" }
    );
    let _ = writeln!(
        out,
        "|[E,E]| = {}, |[G,G]| * |B0| = {} * {}: {}",
        es.order,
        es.derived_order,
        es.b0_order,
        if es.ok { "ok" } else { "MISMATCH" }
    );
    let _ = writeln!(
        out,
        "M(G) = {}; |B0| {} |M(G)|",
        group_name(&r.schur.invariants),
        if schur_divides(r) {
            "divides"
        } else {
            "does NOT divide"
        }
    );
    let _ = writeln!(out, "\nB0(G) = {}", r.b0_name());
    out
}

const B0_CSV_HEADER: &str = "family,name,n,m,divisors,free_rank,b0,schur,cp,ext_square";

fn b0_csv_row(r: &B0Result) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.family.map_or(String::new(), |f| f.to_string()),
        r.name,
        r.n,
        r.m(),
        joined(&r.quotient.divisors, " "),
        r.quotient.free_rank,
        joined(&r.b0(), " "),
        joined(&r.schur.invariants, " "),
        r.cp_ok,
        r.exterior_square.ok
    )
}

pub fn b0(r: &B0Result, g: &PcGroup, entry: Option<&CorpusEntry>, format: Format) -> String {
    match format {
        Format::Json => r.to_json() + "\n",
        Format::Csv => format!("{B0_CSV_HEADER}\n{}\n", b0_csv_row(r)),
        Format::Text => b0_text(r, g, entry),
    }
}

pub fn schur(
    g: &PcGroup,
    family: Option<u32>,
    s: &SchurResult,
    b0: &Quotient,
    format: Format,
) -> String {
    let b0_order = b0.torsion_order();
    let schur_order: BigInt = s.invariants.iter().product();
    let divides = schur_order.mod_floor(&b0_order).is_zero();
    match format {
        Format::Json => pretty(&json!({
            "family": family,
            "name": g.name(),
            "n": g.len(),
            "divisors": strings(&s.divisors),
            "freeRank": s.free_rank,
            "schur": strings(&s.invariants),
            "b0": strings(&b0.invariants()),
            "b0DividesSchur": divides,
        })),
        Format::Csv => format!(
            "family,name,n,divisors,free_rank,schur,b0,b0_divides_schur\n{},{},{},{},{},{},{},{}\n",
            family.map_or(String::new(), |f| f.to_string()),
            g.name(),
            g.len(),
            joined(&s.divisors, " "),
            s.free_rank,
            joined(&s.invariants, " "),
            joined(&b0.invariants(), " "),
            divides
        ),
        Format::Text => {
            let mut out = String::new();
            if let Some(f) = family {
                let _ = writeln!(out, "Family {f}");
            }
            let _ = writeln!(out, "Group {}: {} generators", display_name(g), g.len());
            let divisors = if s.divisors.is_empty() {
                "none".to_string()
            } else {
                joined(&s.divisors, ", ")
            };
            let _ = writeln!(
                out,
                "Elementary divisors (consistency relations only): {divisors}"
            );
            let _ = writeln!(out, "Free rank: {}", s.free_rank);
            let _ = writeln!(
                out,
                "B0(G) = {}; |B0| {} |M(G)|",
                group_name(&b0.invariants()),
                if divides {
                    "divides"
                } else {
                    "does NOT divide"
                }
            );
            let _ = writeln!(out, "\nM(G) = {}", group_name(&s.invariants));
            out
        }
    }
}

fn family_json(c: &FamilyCheck) -> Value {
    let entry = corpus::expected_result(c.family).expect("corpus family");
    let mut v = json!({
        "family": c.family,
        "gapId": entry.gap_id,
        "expectedB0": entry.expected_b0.iter().map(u64::to_string).collect::<Vec<_>>(),
        "pass": c.passed(),
        "mismatches": c.mismatches,
    });
    if let Ok(r) = &c.result {
        let obj = v.as_object_mut().expect("object");
        obj.insert("m".into(), json!(r.m()));
        obj.insert("b0".into(), json!(strings(&r.b0())));
        obj.insert("divisors".into(), json!(strings(&r.quotient.divisors)));
        obj.insert("freeRank".into(), json!(r.quotient.free_rank));
        obj.insert("schur".into(), json!(strings(&r.schur.invariants)));
        obj.insert("cp".into(), json!(r.cp_ok));
        obj.insert("extSquare".into(), json!(r.exterior_square.ok));
    }
    v
}

pub fn corpus(checks: &[FamilyCheck], mode: Mode, format: Format) -> String {
    let passed = checks.iter().filter(|c| c.passed()).count();
    let meta = corpus::metadata();
    match format {
        Format::Json => pretty(&json!({
            "mode": mode.to_string(),
            "total": checks.len(),
            "passed": passed,
            "metadata": {
                "order": meta.order,
                "nontrivialGroups": meta.nontrivial_groups,
                "totalGroups": meta.total_groups,
            },
            "families": checks.iter().map(family_json).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from(
                "family,gap_id,m,b0,expected_b0,divisors,free_rank,schur,cp,ext_square,pass\n",
            );
            for c in checks {
                let entry = corpus::expected_result(c.family).expect("corpus family");
                let expected: Vec<String> = entry.expected_b0.iter().map(u64::to_string).collect();
                let gap = entry.gap_id.map_or(String::new(), |g| g.to_string());
                match &c.result {
                    Ok(r) => {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{},{},{},{},{},{}",
                            c.family,
                            gap,
                            r.m(),
                            joined(&r.b0(), " "),
                            expected.join(" "),
                            joined(&r.quotient.divisors, " "),
                            r.quotient.free_rank,
                            joined(&r.schur.invariants, " "),
                            r.cp_ok,
                            r.exterior_square.ok,
                            c.passed()
                        );
                    }
                    Err(_) => {
                        let _ = writeln!(
                            out,
                            "{},{},,,{},,,,,,false",
                            c.family,
                            gap,
                            expected.join(" ")
                        );
                    }
                }
            }
            out
        }
        Format::Text => {
            let mut out = format!("mode: {mode}\n\nfamily  gap id  tails  B0          status\n");
            for c in checks {
                let entry = corpus::expected_result(c.family).expect("corpus family");
                let gap = entry.gap_id.map_or("-".to_string(), |g| g.to_string());
                let (m, b0) = match &c.result {
                    Ok(r) => (r.m().to_string(), r.b0_name()),
                    Err(_) => ("-".to_string(), "error".to_string()),
                };
                let status = if c.passed() {
                    "ok".to_string()
                } else {
                    format!("FAIL: {}", c.mismatches.join("; "))
                };
                let _ = writeln!(
                    out,
                    "{:>6}  {:>6}  {:>5}  {:<10}  {}",
                    c.family, gap, m, b0, status
                );
            }
            out.push_str("\nFamilies with nontrivial Bogomolov multiplier:\nfamily  gap id  B0\n");
            let mut nontrivial = 0;
            for c in checks {
                if let Ok(r) = &c.result {
                    if !r.b0().is_empty() {
                        nontrivial += 1;
                        let gap = corpus::expected_result(c.family)
                            .ok()
                            .and_then(|e| e.gap_id)
                            .map_or("-".to_string(), |g| g.to_string());
                        let _ = writeln!(out, "{:>6}  {:>6}  {}", c.family, gap, r.b0_name());
                    }
                }
            }
            let _ = writeln!(
                out,
                "\n{passed}/{} families match; {nontrivial} with nontrivial B0",
                checks.len()
            );
            let _ = writeln!(
                out,
                "recorded, not recomputed: {} of the {} groups of order {} have nontrivial B0",
                meta.nontrivial_groups, meta.total_groups, meta.order
            );
            out
        }
    }
}
