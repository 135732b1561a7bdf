//! `verify --all`: every figure, then the twist-knot sweeps.

use serde_json::{json, Map, Value};

use khwidth::khovanov::kh_reduced_with;
use khwidth::twistlab::{ell, finite_filling_report, tau, verify_figure, width_profile, FigureId, INCONCLUSIVE, NO_FINITE_FILLINGS};

pub use khwidth::twistlab::half;

use crate::{emit, emit_json, Settings};

struct Line {
    name: String,
    passed: bool,
    detail: String,
}

fn determinant_sweep(s: &Settings) -> anyhow::Result<Line> {
    let mut bad = Vec::new();
    for t in 0..=2 {
        for n in -5..=3 {
            let det = kh_reduced_with(&tau(t, n), &s.engine)?.determinant()?;
            if det != n.abs() {
                bad.push(format!("t={t} n={n}: {det}"));
            }
        }
    }
    Ok(Line {
        name: "det(τ_t(n)) = |n|".into(),
        passed: bad.is_empty(),
        detail: if bad.is_empty() { "t ≤ 2, -5 ≤ n ≤ 3".into() } else { bad.join("; ") },
    })
}

fn width_lines(ts: &[u32], s: &Settings) -> anyhow::Result<Vec<Line>> {
    let mut out = Vec::new();
    for &t in ts {
        let l = ell(t);
        let p = width_profile(t, l - 1, l + 2, &s.engine)?;
        let want = t as usize + 1;
        let passed = p.w_k == want && p.jump_framing == Some(l) && p.two_valued();
        out.push(Line {
            name: format!("widths t={t}"),
            passed,
            detail: format!("{:?}, jump at {:?}", p.entries, p.jump_framing),
        });
    }
    Ok(out)
}

fn verdict_lines(s: &Settings) -> anyhow::Result<Vec<Line>> {
    let mut out = Vec::new();
    for (t, want) in [(0, INCONCLUSIVE), (1, NO_FINITE_FILLINGS), (2, NO_FINITE_FILLINGS)] {
        let r = finite_filling_report(t, &s.engine)?;
        out.push(Line { name: format!("verdict t={t}"), passed: r.verdict == want, detail: r.verdict });
    }
    Ok(out)
}

pub fn run_all(extended: bool, s: &Settings) -> anyhow::Result<bool> {
    let mut ids = FigureId::all();
    if extended {
        ids.extend([FigureId::Fig7(3), FigureId::Fig8(3), FigureId::Claims(3)]);
    }
    let mut lines = Vec::new();
    for id in ids {
        let r = verify_figure(id, &s.engine)?;
        let failing: Vec<String> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        let mismatched = r.panels.iter().filter(|p| !p.matches()).count();
        lines.push(Line {
            name: id.to_string(),
            passed: r.passed(),
            detail: format!("{} panels, {mismatched} mismatched, {} failing checks", r.panels.len(), failing.len()),
        });
    }
    lines.push(determinant_sweep(s)?);
    lines.extend(width_lines(if extended { &[0, 1, 2, 3] } else { &[0, 1, 2] }, s)?);
    lines.extend(verdict_lines(s)?);

    let passed = lines.iter().all(|l| l.passed);
    if s.json {
        let mut m = Map::new();
        for l in &lines {
            m.insert(l.name.clone(), json!({ "passed": l.passed, "detail": l.detail }));
        }
        emit_json(&json!({ "passed": passed, "checks": Value::Object(m) }))?;
    } else {
        let mut text = String::new();
        for l in &lines {
            text.push_str(&format!("{} {}: {}\n", if l.passed { "PASS" } else { "FAIL" }, l.name, l.detail));
        }
        emit(&text)?;
    }
    Ok(passed)
}
