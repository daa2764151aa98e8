//! Library side of the CLI: corpus checking, output shaping, exit codes.

use std::fmt::Write as _;
use std::path::Path;

use germ_core::report::{AnalyzeOptions, GermSpec, Report};
use germ_core::{analyze_with, Error};

/// Exit codes: 0 ok, 1 invariant or golden failure, 2 input error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Classify an error as input-shaped (2) or invariant-shaped (1).
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::UnknownVariable { .. }
        | Error::ZeroGerm
        | Error::InvalidGerm(_)
        | Error::NotZeroDimensional(_)
        | Error::NotIsolatedAtOrigin(_)
        | Error::NotQuasiHomogeneous => EXIT_INPUT,
        _ => EXIT_INVARIANT,
    }
}

/// JSON error envelope with the machine-readable code.
pub fn error_json(err: &Error) -> String {
    serde_json::to_string_pretty(&serde_json::json!({
        "error": { "code": err.code(), "message": err.to_string() }
    }))
    .expect("error envelope serializes")
}

/// Outcome of checking one corpus entry.
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

/// Run every corpus file in `dir` (sorted by name) and compare against its
/// expectations and invariant suite.
pub fn run_check(dir: &Path, options: &AnalyzeOptions) -> Result<Vec<CheckOutcome>, String> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| format!("cannot read corpus directory {}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(format!("no corpus files in {}", dir.display()));
    }
    let mut outcomes = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let spec: GermSpec = serde_json::from_str(&text)
            .map_err(|e| format!("bad corpus entry {}: {e}", path.display()))?;
        let name = spec
            .name
            .clone()
            .unwrap_or_else(|| path.file_stem().unwrap_or_default().to_string_lossy().to_string());
        outcomes.push(check_one(name, &spec, options));
    }
    Ok(outcomes)
}

fn check_one(name: String, spec: &GermSpec, options: &AnalyzeOptions) -> CheckOutcome {
    let mut details = Vec::new();
    let expect = spec.expect.clone().unwrap_or_default();
    let result = analyze_with(spec, options);
    match result {
        Err(err) => match &expect.error {
            Some(code) if code == err.code() => {
                details.push(format!("expected error `{code}` raised"));
                CheckOutcome { name, passed: true, details }
            }
            Some(code) => {
                details.push(format!("expected error `{code}`, got `{}`: {err}", err.code()));
                CheckOutcome { name, passed: false, details }
            }
            None => {
                details.push(format!("unexpected error `{}`: {err}", err.code()));
                CheckOutcome { name, passed: false, details }
            }
        },
        Ok(report) => {
            if let Some(code) = &expect.error {
                details.push(format!("expected error `{code}` but the analysis succeeded"));
                return CheckOutcome { name, passed: false, details };
            }
            let mut passed = true;
            {
                let mut expect_eq = |label: &str, ok: bool, got: String| {
                    if !ok {
                        passed = false;
                        details.push(format!("{label}: mismatch, got {got}"));
                    }
                };
                if let Some(mu) = expect.mu {
                    expect_eq("mu", report.mu == mu, report.mu.to_string());
                }
                if let Some(basis) = &expect.basis {
                    expect_eq("basis", &report.basis == basis, format!("{:?}", report.basis));
                }
                if let Some(w) = &expect.qh_weights {
                    expect_eq(
                        "qh_weights",
                        report.qh_weights.as_ref() == Some(w),
                        format!("{:?}", report.qh_weights),
                    );
                }
                if let Some(levels) = &expect.levels {
                    let got: Option<Vec<String>> = report
                        .spectrum
                        .as_ref()
                        .map(|rows| rows.iter().map(|r| r.level.clone()).collect());
                    expect_eq("levels", got.as_ref() == Some(levels), format!("{got:?}"));
                }
                if let Some(partition) = &expect.jordan_partition {
                    expect_eq(
                        "jordan_partition",
                        &report.jordan_partition == partition,
                        format!("{:?}", report.jordan_partition),
                    );
                }
                if let Some(sigma) = expect.sigma_formula {
                    let got = report.signature.as_ref().map(|s| s.sigma_formula);
                    expect_eq("sigma_formula", got == Some(sigma), format!("{got:?}"));
                }
                if let Some(sigma) = expect.sigma_direct {
                    let got = report.signature.as_ref().map(|s| s.sigma_direct);
                    expect_eq("sigma_direct", got == Some(sigma), format!("{got:?}"));
                }
                if let Some(h) = &expect.hessian_residue {
                    expect_eq(
                        "hessian_residue",
                        &report.hessian_residue == h,
                        report.hessian_residue.clone(),
                    );
                }
            }
            // Invariant suite baked into every successful run.
            if !report.bilinear_checks.all_passed {
                passed = false;
                details.push("bilinear relation findings failed".to_string());
            }
            if !report.weight_filtration.axioms_verified
                || !report.weight_filtration.partition_matches_primitives
                || !report.weight_filtration.lefschetz_consistent
            {
                passed = false;
                details.push("weight filtration invariants failed".to_string());
            }
            if let Some(sig) = &report.signature {
                if !sig.agree {
                    passed = false;
                    details.push(format!(
                        "signature pipelines disagree: {} vs {}",
                        sig.sigma_formula, sig.sigma_direct
                    ));
                }
            }
            if report.opposite_filtrations == Some(false) {
                passed = false;
                details.push("opposite filtration split failed".to_string());
            }
            if passed && details.is_empty() {
                details.push(format!("mu = {}", report.mu));
            }
            CheckOutcome { name, passed, details }
        }
    }
}

/// Human-readable rendering of a report.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "germ       {}  in  {:?}  ({} order)",
        r.germ.polynomial, r.germ.variables, r.germ.order
    );
    let _ = writeln!(out, "mu         {}", r.mu);
    if r.localized {
        let _ = writeln!(out, "localized  yes (global quotient dimension {})", r.global_dimension);
    }
    let _ = writeln!(out, "basis      {}", r.basis.join(", "));
    match &r.qh_weights {
        Some(w) => {
            let _ = writeln!(out, "weights    {}", w.join(", "));
        }
        None => {
            let _ = writeln!(out, "weights    none (not quasi-homogeneous)");
        }
    }
    if let Some(rows) = &r.spectrum {
        let _ = writeln!(out, "spectrum   level  beta  eigenvalue-exp  (p,q)  weight  ctilde");
        for row in rows {
            let _ = writeln!(
                out,
                "  {:<8} {:>6} {:>6} {:>8}        ({},{})    {}      {:+}",
                row.monomial,
                row.level,
                row.beta,
                row.eigenvalue_exponent,
                row.p,
                row.q,
                row.weight,
                row.ctilde
            );
        }
    }
    if let Some(h) = &r.hodge_numbers {
        let fmt_map = |m: &std::collections::BTreeMap<String, usize>| {
            m.iter().map(|(k, v)| format!("h[{k}]={v}")).collect::<Vec<_>>().join("  ")
        };
        let _ = writeln!(out, "hodge      non-unipotent: {}", fmt_map(&h.non_unipotent));
        if !h.unipotent.is_empty() {
            let _ = writeln!(out, "           unipotent:     {}", fmt_map(&h.unipotent));
        }
    }
    let _ = writeln!(out, "gram");
    for row in &r.gram {
        let _ = writeln!(out, "  [{}]", row.join(", "));
    }
    let _ = writeln!(out, "l(Hess f)  {}   (equals mu)", r.hessian_residue);
    let _ = writeln!(out, "partition  {:?}", r.jordan_partition);
    let _ = writeln!(
        out,
        "weights W  gr dims {:?}   primitive dims {:?}",
        r.weight_filtration.gr_dims, r.weight_filtration.primitive_dims
    );
    for f in &r.level_forms {
        let _ = writeln!(out, "level {}  ctilde applied: {}", f.level, f.ctilde_applied);
        for row in &f.matrix {
            let _ = writeln!(out, "  [{}]", row.join(", "));
        }
    }
    let _ = writeln!(out, "checks");
    for f in &r.bilinear_checks.findings {
        let _ = writeln!(out, "  [{}] {}: {}", if f.passed { "ok" } else { "FAIL" }, f.name, f.detail);
    }
    for s in &r.bilinear_checks.skipped {
        let _ = writeln!(out, "  [--] {s}");
    }
    if let Some(sig) = &r.signature {
        let _ = writeln!(
            out,
            "signature  formula {}  direct {}  (calibration {:+}, {})",
            sig.sigma_formula,
            sig.sigma_direct,
            sig.calibration_sign,
            if sig.agree { "agree" } else { "DISAGREE" }
        );
    }
    if let Some(o) = &r.oracle {
        let _ = writeln!(
            out,
            "oracle     eps {}  max |exact - float| = {:.3e} over {} entries",
            o.eps, o.max_abs_error, o.entries_checked
        );
    }
    for (section, why) in &r.sections_unavailable {
        let _ = writeln!(out, "note       {section}: {why}");
    }
    let _ = writeln!(out, "normalize  {}", r.normalization);
    out
}
