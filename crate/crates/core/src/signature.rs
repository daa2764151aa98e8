//! Signature of the twisted residue pairing, computed two independent ways:
//! a closed formula over the Hodge numbers, and summed inertias of the
//! hermitian level forms, with one global sign calibrated on the reference
//! germ x^2 + y^2 + z^2.
//!
//! The hermitian matrix of a level pairs each class against the conjugate
//! class through the sign twist; same-level classes share Hodge indices, so
//! the assembled blocks are real symmetric. Odd fiber dimensions always
//! yield zero.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hodge::{conjugation_map, hodge_bigrading, spectrum, weil_signs, Conjugation, HodgeGrading, WeilSigns};
use crate::matrix::{hermitian_signature, RatMatrix};
use crate::milnor::milnor_algebra;
use crate::parse::parse_polynomial;
use crate::poly::{varset, MonomialOrder};
use crate::rat::Rat;
use crate::residue::{gram_matrix, ResidueForm};
use crate::weight::{nilpotent_weight_filtration, primitive_parts, PrimitiveDecomposition, WeightFiltration};

/// Hodge numbers split by the unipotent flag, keyed by (p, q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeNumberTable {
    pub unipotent: BTreeMap<(i64, i64), usize>,
    pub non_unipotent: BTreeMap<(i64, i64), usize>,
    pub fiber_dim: usize,
}

/// Count basis classes per (p, q), split by the unipotent flag.
pub fn hodge_number_table(h: &HodgeGrading) -> HodgeNumberTable {
    let mut unipotent = BTreeMap::new();
    let mut non_unipotent = BTreeMap::new();
    for e in &h.entries {
        let map = if e.unipotent { &mut unipotent } else { &mut non_unipotent };
        *map.entry((e.p, e.q)).or_insert(0) += 1;
    }
    HodgeNumberTable { unipotent, non_unipotent, fiber_dim: h.fiber_dim }
}

impl HodgeNumberTable {
    pub fn total(&self) -> usize {
        self.unipotent.values().sum::<usize>() + self.non_unipotent.values().sum::<usize>()
    }
}

/// Closed signature formula over the Hodge numbers; zero for odd fiber
/// dimension.
pub fn signature_formula(t: &HodgeNumberTable, n: usize) -> i64 {
    if n % 2 == 1 {
        return 0;
    }
    let n = n as i64;
    let sign = |q: i64| if q % 2 == 0 { 1i64 } else { -1i64 };
    let mut sigma = 0i64;
    for (&(p, q), &h) in &t.unipotent {
        if p + q == n + 2 {
            sigma += sign(q) * h as i64;
        } else if p + q >= n + 3 {
            sigma += 2 * sign(q) * h as i64;
        }
    }
    for (&(p, q), &h) in &t.non_unipotent {
        let _ = p;
        sigma += sign(q) * h as i64;
    }
    sigma
}

/// Hermitian matrix of one level: entries res(u_i, Ct N^l conj(u_j)) with
/// the conjugate taken through the index involution. Representatives must be
/// basis classes, which holds for the trivial chain structure of
/// quasi-homogeneous germs.
fn hermitian_level_matrix(
    r: &ResidueForm,
    conj: &Conjugation,
    signs: &WeilSigns,
    reps: &[Vec<Rat>],
    npow: &RatMatrix,
) -> Result<RatMatrix> {
    let mu = r.gram.nrows();
    let classes: Vec<usize> = reps
        .iter()
        .map(|v| {
            let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
            match nz.as_slice() {
                [single] => Ok(*single),
                _ => Err(Error::NotQuasiHomogeneous),
            }
        })
        .collect::<Result<_>>()?;
    let m = RatMatrix::from_fn(reps.len(), reps.len(), |i, j| {
        let mut conj_v = vec![Rat::zero(); mu];
        conj_v[conj.kappa[classes[j]]] = reps[j][classes[j]].clone();
        let mut w = npow.mul_vec(&conj_v);
        for (idx, x) in w.iter_mut().enumerate() {
            if signs.ctilde[idx] < 0 {
                *x = -x.clone();
            }
        }
        crate::residue::residue_pair(r, &reps[i], &w)
    });
    if !m.is_symmetric() {
        return Err(Error::NotHermitian);
    }
    Ok(m)
}

/// Sum of hermitian level-form inertias before calibration.
fn direct_raw(
    r: &ResidueForm,
    conj: &Conjugation,
    signs: &WeilSigns,
    w: &WeightFiltration,
    p: &PrimitiveDecomposition,
    nm: &RatMatrix,
) -> Result<i64> {
    let mut sigma = 0i64;
    for (level, reps) in &p.parts {
        if reps.is_empty() {
            continue;
        }
        let k = level - w.center;
        let pow = nm.pow(k as u32);
        let m = hermitian_level_matrix(r, conj, signs, reps, &pow)?;
        let zero = RatMatrix::zero(m.nrows(), m.ncols());
        let (plus, minus, null) = hermitian_signature(&m, &zero)?;
        if null != 0 {
            return Err(Error::DegenerateLevelForm { level: *level });
        }
        sigma += plus as i64 - minus as i64;
    }
    Ok(sigma)
}

/// Global sign fixed on the reference germ so both signature pipelines
/// agree there. Computed once and cached.
pub fn calibration_sign() -> Result<i64> {
    static SIGN: OnceLock<std::result::Result<i64, Error>> = OnceLock::new();
    SIGN.get_or_init(|| {
        let vars = varset(vec!["x", "y", "z"]);
        let f = parse_polynomial("x^2 + y^2 + z^2", &vars)?;
        let a = milnor_algebra(&f, MonomialOrder::Grevlex)?;
        let r = gram_matrix(&a)?;
        let s = spectrum(&a)?;
        let h = hodge_bigrading(&s);
        let conj = conjugation_map(&s)?;
        let signs = weil_signs(&h);
        let nm = a.germ_matrix().clone();
        let w = nilpotent_weight_filtration(&nm, 0)?;
        let p = primitive_parts(&w, &nm);
        let formula = signature_formula(&hodge_number_table(&h), a.fiber_dimension());
        let raw = direct_raw(&r, &conj, &signs, &w, &p, &nm)?;
        if raw == 0 || formula.abs() != raw.abs() {
            return Err(Error::CalibrationFailure(format!(
                "reference germ pipelines give {formula} and {raw}"
            )));
        }
        Ok(formula / raw)
    })
    .clone()
}

/// Signature by summed hermitian inertias of the level forms, calibrated by
/// the reference germ. Zero for odd fiber dimension, matching the closed
/// formula's odd clause.
pub fn signature_direct(
    r: &ResidueForm,
    grading: &HodgeGrading,
    conj: &Conjugation,
    signs: &WeilSigns,
    w: &WeightFiltration,
    p: &PrimitiveDecomposition,
    nm: &RatMatrix,
) -> Result<i64> {
    let _ = grading;
    if grading.fiber_dim % 2 == 1 {
        return Ok(0);
    }
    let raw = direct_raw(r, conj, signs, w, p, nm)?;
    Ok(calibration_sign()? * raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::MilnorAlgebra;

    struct Ctx {
        a: MilnorAlgebra,
        r: ResidueForm,
        h: HodgeGrading,
        conj: Conjugation,
        signs: WeilSigns,
        w: WeightFiltration,
        p: PrimitiveDecomposition,
        nm: RatMatrix,
    }

    fn ctx(text: &str, vars: &[&str]) -> Ctx {
        let vs = varset(vars.to_vec());
        let f = parse_polynomial(text, &vs).unwrap();
        let a = milnor_algebra(&f, MonomialOrder::Grevlex).unwrap();
        let r = gram_matrix(&a).unwrap();
        let s = spectrum(&a).unwrap();
        let h = hodge_bigrading(&s);
        let conj = conjugation_map(&s).unwrap();
        let signs = weil_signs(&h);
        let nm = a.germ_matrix().clone();
        let w = nilpotent_weight_filtration(&nm, 0).unwrap();
        let p = primitive_parts(&w, &nm);
        Ctx { a, r, h, conj, signs, w, p, nm }
    }

    fn both(text: &str, vars: &[&str]) -> (i64, i64) {
        let c = ctx(text, vars);
        let formula = signature_formula(&hodge_number_table(&c.h), c.a.fiber_dimension());
        let direct =
            signature_direct(&c.r, &c.h, &c.conj, &c.signs, &c.w, &c.p, &c.nm).unwrap();
        (formula, direct)
    }

    #[test]
    fn hodge_numbers_of_cusp_quartic() {
        let c = ctx("x^3 + y^4", &["x", "y"]);
        let t = hodge_number_table(&c.h);
        assert!(t.unipotent.is_empty());
        assert_eq!(t.non_unipotent.get(&(1, 0)), Some(&3));
        assert_eq!(t.non_unipotent.get(&(0, 1)), Some(&3));
        assert_eq!(t.total(), 6);
    }

    #[test]
    fn hodge_numbers_of_three_cubes() {
        let c = ctx("x^3 + y^3 + z^3", &["x", "y", "z"]);
        let t = hodge_number_table(&c.h);
        assert_eq!(t.non_unipotent.get(&(1, 1)), Some(&6));
        assert_eq!(t.unipotent.get(&(2, 1)), Some(&1));
        assert_eq!(t.unipotent.get(&(1, 2)), Some(&1));
    }

    #[test]
    fn reference_germ_calibrates_to_minus_one() {
        let (formula, direct) = both("x^2 + y^2 + z^2", &["x", "y", "z"]);
        assert_eq!(formula, -1);
        assert_eq!(direct, -1);
    }

    #[test]
    fn three_cubes_agree_at_minus_six() {
        let (formula, direct) = both("x^3 + y^3 + z^3", &["x", "y", "z"]);
        assert_eq!(formula, -6);
        assert_eq!(direct, -6);
    }

    #[test]
    fn stabilized_a4_agrees() {
        let (formula, direct) = both("x^5 + y^2 + z^2", &["x", "y", "z"]);
        assert_eq!(formula, -4);
        assert_eq!(direct, -4);
    }

    #[test]
    fn odd_fiber_dimension_gives_zero() {
        for (text, vars) in [
            ("x^3 + y^4", vec!["x", "y"]),
            ("x^3 + y^3", vec!["x", "y"]),
            ("x^4 + y^4", vec!["x", "y"]),
        ] {
            let (formula, direct) = both(text, &vars);
            assert_eq!(formula, 0, "formula for {text}");
            assert_eq!(direct, 0, "direct for {text}");
        }
    }

    #[test]
    fn zero_fiber_dimension_counts_as_even() {
        assert_eq!(both("x^2", &["x"]), (1, 1));
        assert_eq!(both("x^3", &["x"]), (2, 2));
    }
}
