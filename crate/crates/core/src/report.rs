//! Full analysis pipeline and the serializable report schema.
//!
//! `analyze` runs every stage that applies to the input germ and degrades
//! gracefully: germs without detected weights keep their residue and weight
//! filtration sections while the spectrum, Hodge and signature sections are
//! marked unavailable. Rationals are serialized as canonical "p/q" strings
//! and maps use sorted keys, so two runs produce identical JSON apart from
//! the timings block.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hodge::{conjugation_map, hodge_bigrading, opposite_filtration_check, spectrum, weil_signs};
use crate::matrix::RatMatrix;
use crate::milnor::{milnor_algebra, QhWeights};
use crate::morse::morse_oracle;
use crate::parse::parse_polynomial;
use crate::poly::MonomialOrder;
use crate::rat::{rat_from_str, rat_to_f64, rat_to_string, Rat};
use crate::residue::{gram_matrix, hessian_residue_check};
use crate::signature::{calibration_sign, hodge_number_table, signature_direct, signature_formula};
use crate::weight::{
    bilinear_relation_check, level_forms, lefschetz_dims_consistent, nilpotent_weight_filtration,
    partition_matches_primitives, primitive_parts, HodgeContext,
};

/// Input germ description, also the corpus file format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GermSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub polynomial: String,
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<MonomialOrder>,
    /// Expected values for the corpus runner; ignored by `analyze`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectations>,
}

/// Expected values a corpus entry may pin down.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qh_weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jordan_partition: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_formula: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_direct: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hessian_residue: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    /// Run the floating-point Morse-sum cross-check at this perturbation
    /// scale (a rational like "1/1000").
    pub oracle_eps: Option<String>,
    /// Discard perturbed critical points beyond this max-norm radius.
    pub oracle_radius: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub germ: GermEcho,
    pub mu: usize,
    /// True when the critical locus had components away from the origin and
    /// the local algebra was split off the global quotient.
    pub localized: bool,
    pub global_dimension: usize,
    pub basis: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qh_weights: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<SpectrumRowJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hodge_numbers: Option<HodgeNumbersJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opposite_filtrations: Option<bool>,
    pub gram: Vec<Vec<String>>,
    pub residue_functional: Vec<String>,
    pub hessian_residue: String,
    pub jordan_partition: Vec<usize>,
    pub weight_filtration: WeightJson,
    pub level_forms: Vec<LevelFormJson>,
    pub bilinear_checks: BilinearJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<SignatureJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
    pub sections_unavailable: BTreeMap<String, String>,
    pub normalization: String,
    pub version: String,
    pub timings_ms: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GermEcho {
    pub polynomial: String,
    pub variables: Vec<String>,
    pub order: String,
    pub fiber_dimension: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumRowJson {
    pub monomial: String,
    pub level: String,
    pub beta: String,
    pub eigenvalue_exponent: String,
    pub unipotent: bool,
    pub p: i64,
    pub q: i64,
    pub weight: i64,
    pub ctilde: i64,
    pub weil_exponent: u8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HodgeNumbersJson {
    pub unipotent: BTreeMap<String, usize>,
    pub non_unipotent: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightJson {
    pub center: i64,
    pub gr_dims: BTreeMap<String, usize>,
    pub primitive_dims: BTreeMap<String, usize>,
    pub partition_matches_primitives: bool,
    pub lefschetz_consistent: bool,
    pub axioms_verified: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelFormJson {
    pub level: i64,
    pub ctilde_applied: bool,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BilinearJson {
    pub findings: Vec<FindingJson>,
    pub skipped: Vec<String>,
    pub all_passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FindingJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignatureJson {
    pub sigma_formula: i64,
    pub sigma_direct: i64,
    pub calibration_sign: i64,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleJson {
    pub eps: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    pub max_abs_error: f64,
    pub entries_checked: usize,
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| rat_to_string(&m[(i, j)])).collect())
        .collect()
}

/// Run the full pipeline on one germ.
pub fn analyze(spec: &GermSpec) -> Result<Report> {
    analyze_with(spec, &AnalyzeOptions::default())
}

pub fn analyze_with(spec: &GermSpec, options: &AnalyzeOptions) -> Result<Report> {
    let mut timings = BTreeMap::new();
    let clock = Instant::now();
    let vars = crate::poly::varset(spec.variables.clone());
    if vars.is_empty() {
        return Err(Error::InvalidGerm("variable list must not be empty".to_string()));
    }
    let order = spec.order.unwrap_or_default();
    let f = parse_polynomial(&spec.polynomial, &vars)?;
    let mark = |timings: &mut BTreeMap<String, f64>, name: &str, from: Instant| {
        timings.insert(name.to_string(), from.elapsed().as_secs_f64() * 1e3);
    };
    mark(&mut timings, "parse", clock);

    let t = Instant::now();
    let algebra = milnor_algebra(&f, order)?;
    mark(&mut timings, "milnor_algebra", t);

    let t = Instant::now();
    let residue = gram_matrix(&algebra)?;
    let hess_value = hessian_residue_check(&algebra, &residue)?;
    mark(&mut timings, "residue", t);

    let t = Instant::now();
    let nm = algebra.germ_matrix().clone();
    let filtration = nilpotent_weight_filtration(&nm, 0)?;
    let primitives = primitive_parts(&filtration, &nm);
    mark(&mut timings, "weight_filtration", t);

    let mut sections_unavailable = BTreeMap::new();
    let qh_data = match spectrum(&algebra) {
        Ok(table) => {
            let grading = hodge_bigrading(&table);
            let conj = conjugation_map(&table)?;
            let signs = weil_signs(&grading);
            Some((table, grading, conj, signs))
        }
        Err(Error::NotQuasiHomogeneous) => {
            for section in ["spectrum", "hodge_numbers", "conjugation", "signature"] {
                sections_unavailable
                    .insert(section.to_string(), "unavailable: not quasi-homogeneous".to_string());
            }
            None
        }
        Err(e) => return Err(e),
    };

    let t = Instant::now();
    let forms = level_forms(
        &residue,
        &filtration,
        &primitives,
        &nm,
        qh_data.as_ref().map(|(_, _, _, signs)| signs),
    )?;
    let bilinear = bilinear_relation_check(
        &forms,
        &residue,
        &filtration,
        &primitives,
        &nm,
        qh_data.as_ref().map(|(_, grading, conj, signs)| HodgeContext {
            grading,
            conjugation: conj,
            signs,
        }),
    );
    mark(&mut timings, "bilinear_checks", t);

    let t = Instant::now();
    let signature = match &qh_data {
        None => None,
        Some((_, grading, conj, signs)) => {
            let table = hodge_number_table(grading);
            let sigma_formula = signature_formula(&table, algebra.fiber_dimension());
            let sigma_direct =
                signature_direct(&residue, grading, conj, signs, &filtration, &primitives, &nm)?;
            Some(SignatureJson {
                sigma_formula,
                sigma_direct,
                calibration_sign: calibration_sign()?,
                agree: sigma_formula == sigma_direct,
            })
        }
    };
    mark(&mut timings, "signature", t);

    let oracle = match &options.oracle_eps {
        None => None,
        Some(eps_text) => {
            let t = Instant::now();
            let eps = rat_from_str(eps_text)
                .ok_or_else(|| Error::InvalidGerm(format!("bad oracle eps `{eps_text}`")))?;
            let s: Vec<Rat> = (0..vars.len())
                .map(|i| &eps * crate::rat::rat_int(i as i64 + 1))
                .collect();
            let values = morse_oracle(&algebra, &s, options.oracle_radius)?;
            let mut max_err = 0.0f64;
            for i in 0..algebra.mu {
                for j in 0..algebra.mu {
                    let exact = rat_to_f64(&residue.gram[(i, j)]);
                    max_err = max_err.max((values[i][j] - exact).abs());
                }
            }
            mark(&mut timings, "oracle", t);
            Some(OracleJson {
                eps: eps_text.clone(),
                radius: options.oracle_radius,
                max_abs_error: max_err,
                entries_checked: algebra.mu * algebra.mu,
            })
        }
    };

    let var_names: Vec<String> = vars.iter().cloned().collect();
    let n = algebra.fiber_dimension();
    let report = Report {
        germ: GermEcho {
            polynomial: f.render(),
            variables: var_names.clone(),
            order: order.to_string(),
            fiber_dimension: n,
        },
        mu: algebra.mu,
        localized: algebra.localized,
        global_dimension: algebra.global_basis.len(),
        basis: algebra.basis.iter().map(|m| m.render(&var_names)).collect(),
        qh_weights: algebra
            .weights
            .as_ref()
            .map(|QhWeights(w)| w.iter().map(rat_to_string).collect()),
        spectrum: qh_data.as_ref().map(|(table, grading, _, signs)| {
            table
                .rows
                .iter()
                .enumerate()
                .map(|(i, row)| SpectrumRowJson {
                    monomial: row.monomial.render(&var_names),
                    level: rat_to_string(&row.level),
                    beta: rat_to_string(&row.beta),
                    eigenvalue_exponent: rat_to_string(&row.eigenvalue_exponent),
                    unipotent: row.unipotent,
                    p: grading.entries[i].p,
                    q: grading.entries[i].q,
                    weight: grading.entries[i].weight,
                    ctilde: signs.ctilde[i],
                    weil_exponent: signs.weil_exponent[i],
                })
                .collect()
        }),
        hodge_numbers: qh_data.as_ref().map(|(_, grading, _, _)| {
            let table = hodge_number_table(grading);
            let to_map = |m: &BTreeMap<(i64, i64), usize>| {
                m.iter().map(|(&(p, q), &c)| (format!("{p},{q}"), c)).collect()
            };
            HodgeNumbersJson {
                unipotent: to_map(&table.unipotent),
                non_unipotent: to_map(&table.non_unipotent),
            }
        }),
        conjugation: qh_data.as_ref().map(|(_, _, conj, _)| conj.kappa.clone()),
        opposite_filtrations: qh_data
            .as_ref()
            .map(|(_, grading, _, _)| opposite_filtration_check(grading)),
        gram: matrix_strings(&residue.gram),
        residue_functional: residue.functional.iter().map(rat_to_string).collect(),
        hessian_residue: rat_to_string(&hess_value),
        jordan_partition: filtration.partition.0.clone(),
        weight_filtration: WeightJson {
            center: filtration.center,
            gr_dims: filtration
                .graded_dims()
                .into_iter()
                .map(|(l, d)| (l.to_string(), d))
                .collect(),
            primitive_dims: primitives.dims().into_iter().map(|(l, d)| (l.to_string(), d)).collect(),
            partition_matches_primitives: partition_matches_primitives(&filtration, &primitives),
            lefschetz_consistent: lefschetz_dims_consistent(&filtration, &primitives),
            axioms_verified: filtration.verify_axioms(&nm),
        },
        level_forms: forms
            .iter()
            .map(|f| LevelFormJson {
                level: f.level,
                ctilde_applied: f.ctilde_applied,
                matrix: matrix_strings(&f.matrix),
            })
            .collect(),
        bilinear_checks: BilinearJson {
            findings: bilinear
                .findings
                .iter()
                .map(|f| FindingJson { name: f.name.clone(), passed: f.passed, detail: f.detail.clone() })
                .collect(),
            skipped: bilinear.skipped.clone(),
            all_passed: bilinear.all_passed,
        },
        signature,
        oracle,
        sections_unavailable,
        normalization: normalization_record(n),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timings_ms: timings,
    };
    Ok(report)
}

/// The residue data is purely rational, normalized by l(Hess f) = mu; the
/// transcendental factor relating it to the oscillatory pairing is carried
/// symbolically and never mixed into the rational values.
pub fn normalization_record(n: usize) -> String {
    let exponent = n * (n + 1) / 2;
    format!(
        "rational residue with l(Hess f) = mu; presumed transcendental factor (-1)^{exponent} * (2*pi*i)^{}",
        n + 1
    )
}

impl Report {
    /// Deterministic JSON: object keys sorted, timings included.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value prints")
    }

    /// Canonical JSON with the timings block removed, for comparisons.
    pub fn to_comparable_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("timings_ms");
        }
        serde_json::to_string_pretty(&value).expect("value prints")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(poly: &str, vars: &[&str]) -> GermSpec {
        GermSpec {
            name: None,
            polynomial: poly.to_string(),
            variables: vars.iter().map(|s| s.to_string()).collect(),
            order: None,
            expect: None,
        }
    }

    #[test]
    fn cusp_quartic_report() {
        let r = analyze(&spec("x^3+y^4", &["x", "y"])).unwrap();
        assert_eq!(r.mu, 6);
        assert_eq!(r.basis, vec!["1", "y", "x", "y^2", "x*y", "x*y^2"]);
        assert_eq!(r.qh_weights.as_deref(), Some(&["1/3".to_string(), "1/4".to_string()][..]));
        let sig = r.signature.unwrap();
        assert_eq!(sig.sigma_formula, 0);
        assert_eq!(sig.sigma_direct, 0);
        assert!(sig.agree);
        assert!(r.bilinear_checks.all_passed);
        assert!(r.sections_unavailable.is_empty());
    }

    #[test]
    fn one_variable_square() {
        let r = analyze(&spec("x^2", &["x"])).unwrap();
        assert_eq!(r.mu, 1);
        assert_eq!(r.gram, vec![vec!["1/2".to_string()]]);
    }

    #[test]
    fn non_qh_germ_degrades() {
        let r = analyze(&spec("x^2*y^2+x^5+y^5", &["x", "y"])).unwrap();
        assert_eq!(r.mu, 11);
        assert!(r.localized);
        assert_eq!(r.global_dimension, 16);
        assert!(r.spectrum.is_none());
        assert!(r.signature.is_none());
        assert_eq!(r.sections_unavailable.len(), 4);
        assert!(r.bilinear_checks.all_passed);
        assert_eq!(r.bilinear_checks.skipped.len(), 1);
    }

    #[test]
    fn error_surfaces_with_code() {
        let err = analyze(&spec("x^2*y^2", &["x", "y"])).unwrap_err();
        assert_eq!(err.code(), "NotIsolatedAtOrigin");
        let err = analyze(&spec("x^2 +", &["x"])).unwrap_err();
        assert_eq!(err.code(), "ParseError");
    }

    #[test]
    fn deterministic_json() {
        let a = analyze(&spec("x^3+y^4", &["x", "y"])).unwrap();
        let b = analyze(&spec("x^3+y^4", &["x", "y"])).unwrap();
        assert_eq!(a.to_comparable_json(), b.to_comparable_json());
    }

    #[test]
    fn oracle_section() {
        let options = AnalyzeOptions { oracle_eps: Some("1/1000".to_string()), oracle_radius: None };
        let r = analyze_with(&spec("x^3", &["x"]), &options).unwrap();
        let o = r.oracle.unwrap();
        assert!(o.max_abs_error < 1e-6, "error {}", o.max_abs_error);
    }
}
