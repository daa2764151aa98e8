//! Weight filtration of a nilpotent operator, primitive decomposition,
//! level forms, and the bilinear-relation report.
//!
//! The filtration is built from an explicit Jordan chain basis: tops of
//! chains of length j are completed stage by stage against the kernels of
//! the powers, and a chain vector N^r v from a chain of length j sits in
//! level j - 1 - 2r. Spans of chain vectors by level realize the unique
//! filtration with N W_l inside W_{l-2} and N^l an isomorphism on graded
//! pieces, and chain tops of length l + 1 span the primitive parts.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hodge::{Conjugation, HodgeGrading, WeilSigns};
use crate::matrix::{jordan_partition_nilpotent, symmetric_signature, JordanPartition, RatMatrix};
use crate::rat::{rat_to_string, Rat};
use crate::residue::ResidueForm;

/// Jordan chains of a nilpotent operator: chain c is a list of vectors
/// v, Nv, ..., N^{len-1}v.
#[derive(Debug, Clone)]
pub struct WeightFiltration {
    pub center: i64,
    pub dim: usize,
    pub chains: Vec<Vec<Vec<Rat>>>,
    pub partition: JordanPartition,
}

/// Primitive subspaces per nonnegative level, in chain coordinates.
#[derive(Debug, Clone)]
pub struct PrimitiveDecomposition {
    /// (level, representative vectors) with level >= 0, descending dims sum
    /// to chain-top counts.
    pub parts: Vec<(i64, Vec<Vec<Rat>>)>,
}

/// Matrix of the twisted pairing res(u, Ct N^l v) on primitive
/// representatives of one level.
#[derive(Debug, Clone)]
pub struct LevelForm {
    pub level: i64,
    pub matrix: RatMatrix,
    pub ctilde_applied: bool,
}

/// One named exact check with outcome.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Finding {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the bilinear-relation suite.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BilinearReport {
    pub findings: Vec<Finding>,
    pub skipped: Vec<String>,
    pub all_passed: bool,
}

/// Weight filtration of the nilpotent matrix `nm`, centered at `center`.
pub fn nilpotent_weight_filtration(nm: &RatMatrix, center: i64) -> Result<WeightFiltration> {
    let partition = jordan_partition_nilpotent(nm)?;
    let dim = nm.nrows();
    if dim == 0 {
        return Ok(WeightFiltration { center, dim, chains: Vec::new(), partition });
    }
    // Kernels of successive powers.
    let mut kernels: Vec<Vec<Vec<Rat>>> = vec![Vec::new()];
    let mut power = RatMatrix::identity(dim);
    let max_len = *partition.0.first().unwrap_or(&1);
    for _ in 0..max_len {
        power = power.mul(nm);
        kernels.push(power.kernel_basis());
    }
    // Stage j from the top: tops of length j extend K_{j-1} plus the images
    // of longer chains inside K_j.
    let mut tops: Vec<(usize, Vec<Rat>)> = Vec::new();
    for j in (1..=max_len).rev() {
        let carried: Vec<Vec<Rat>> = tops
            .iter()
            .filter(|(len, _)| *len > j)
            .map(|(len, v)| {
                let mut w = v.clone();
                for _ in 0..(len - j) {
                    w = nm.mul_vec(&w);
                }
                w
            })
            .collect();
        let mut span: Vec<Vec<Rat>> = kernels[j - 1].clone();
        span.extend(carried);
        let mut span_rank = if span.is_empty() { 0 } else { RatMatrix::from_columns(&span).rank() };
        for cand in &kernels[j] {
            let mut trial = span.clone();
            trial.push(cand.clone());
            let r = RatMatrix::from_columns(&trial).rank();
            if r > span_rank {
                span = trial;
                span_rank = r;
                tops.push((j, cand.clone()));
            }
        }
    }
    let mut chains: Vec<Vec<Vec<Rat>>> = Vec::new();
    for (len, top) in &tops {
        let mut chain = Vec::with_capacity(*len);
        let mut v = top.clone();
        for _ in 0..*len {
            chain.push(v.clone());
            v = nm.mul_vec(&v);
        }
        debug_assert!(v.iter().all(|x| x.is_zero()), "chain length matches nilpotency");
        chains.push(chain);
    }
    // The chain vectors must form a basis.
    let all: Vec<Vec<Rat>> = chains.iter().flatten().cloned().collect();
    if all.len() != dim || RatMatrix::from_columns(&all).rank() != dim {
        return Err(Error::NotNilpotent);
    }
    let mut lengths: Vec<usize> = chains.iter().map(|c| c.len()).collect();
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(lengths, partition.0, "chain lengths reproduce the rank-sequence partition");
    Ok(WeightFiltration { center, dim, chains, partition })
}

impl WeightFiltration {
    /// Chain vectors of exact level `l` relative to the center.
    pub fn graded_reps(&self, l: i64) -> Vec<Vec<Rat>> {
        let mut out = Vec::new();
        for chain in &self.chains {
            let len = chain.len() as i64;
            for (r, v) in chain.iter().enumerate() {
                if self.center + len - 1 - 2 * (r as i64) == l {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    /// Basis of W_l: chain vectors of level <= l.
    pub fn stage_basis(&self, l: i64) -> Vec<Vec<Rat>> {
        let mut out = Vec::new();
        for level in self.levels_present() {
            if level <= l {
                out.extend(self.graded_reps(level));
            }
        }
        out
    }

    /// Distinct levels appearing, ascending.
    pub fn levels_present(&self) -> Vec<i64> {
        let mut levels: Vec<i64> = Vec::new();
        for chain in &self.chains {
            let len = chain.len() as i64;
            for r in 0..len {
                let l = self.center + len - 1 - 2 * r;
                if !levels.contains(&l) {
                    levels.push(l);
                }
            }
        }
        levels.sort_unstable();
        levels
    }

    /// Dimensions of the graded pieces, ascending by level.
    pub fn graded_dims(&self) -> Vec<(i64, usize)> {
        self.levels_present().into_iter().map(|l| (l, self.graded_reps(l).len())).collect()
    }

    /// Verify the two defining properties by rank computations: the operator
    /// lowers the filtration by two, and its l-th power maps the level-l
    /// piece isomorphically onto the level-(-l) piece.
    pub fn verify_axioms(&self, nm: &RatMatrix) -> bool {
        // N W_l inside W_{l-2}.
        for l in self.levels_present() {
            let target = self.stage_basis(l - 2);
            for v in self.stage_basis(l) {
                let img = nm.mul_vec(&v);
                if img.iter().all(|x| x.is_zero()) {
                    continue;
                }
                if target.is_empty() {
                    return false;
                }
                let mut cols = target.clone();
                let rank_before = RatMatrix::from_columns(&cols).rank();
                cols.push(img);
                if RatMatrix::from_columns(&cols).rank() != rank_before {
                    return false;
                }
            }
        }
        // N^l : Gr_{c+l} -> Gr_{c-l} bijective for l >= 0.
        for l in self.levels_present() {
            let k = l - self.center;
            if k < 0 {
                continue;
            }
            let ups = self.graded_reps(l);
            let downs_level = self.center - k;
            let low = self.stage_basis(downs_level - 1);
            let pow = nm.pow(k as u32);
            let mut cols = low.clone();
            let base_rank = if cols.is_empty() { 0 } else { RatMatrix::from_columns(&cols).rank() };
            for v in &ups {
                cols.push(pow.mul_vec(v));
            }
            let full_rank = RatMatrix::from_columns(&cols).rank();
            if full_rank != base_rank + ups.len() {
                return false;
            }
            if self.graded_reps(downs_level).len() != ups.len() {
                return false;
            }
        }
        true
    }
}

/// Primitive parts: spans of chain tops of length l + 1 inside level l.
pub fn primitive_parts(w: &WeightFiltration, nm: &RatMatrix) -> PrimitiveDecomposition {
    let mut parts: Vec<(i64, Vec<Vec<Rat>>)> = Vec::new();
    for chain in &w.chains {
        let len = chain.len() as i64;
        let level = w.center + len - 1;
        let top = chain[0].clone();
        debug_assert!({
            let img = nm.pow(len as u32).mul_vec(&top);
            img.iter().all(|x| x.is_zero())
        });
        match parts.iter_mut().find(|(l, _)| *l == level) {
            Some((_, vecs)) => vecs.push(top),
            None => parts.push((level, vec![top])),
        }
    }
    parts.sort_by_key(|(l, _)| *l);
    PrimitiveDecomposition { parts }
}

impl PrimitiveDecomposition {
    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.parts.iter().map(|(l, v)| (*l, v.len())).collect()
    }

    pub fn at_level(&self, l: i64) -> Option<&Vec<Vec<Rat>>> {
        self.parts.iter().find(|(pl, _)| *pl == l).map(|(_, v)| v)
    }
}

/// Twisted pairing value res(u, Ct N^pow v).
fn twisted_pair(
    r: &ResidueForm,
    ctilde: Option<&WeilSigns>,
    npow: &RatMatrix,
    u: &[Rat],
    v: &[Rat],
) -> Rat {
    let mut w = npow.mul_vec(v);
    if let Some(signs) = ctilde {
        for (i, x) in w.iter_mut().enumerate() {
            if signs.ctilde[i] < 0 {
                *x = -x.clone();
            }
        }
    }
    crate::residue::residue_pair(r, u, &w)
}

/// Level-form matrices on the primitive parts of `w` for the operator `nm`.
/// Errors with `DegenerateLevelForm` when some level matrix is singular.
pub fn level_forms(
    r: &ResidueForm,
    w: &WeightFiltration,
    p: &PrimitiveDecomposition,
    nm: &RatMatrix,
    signs: Option<&WeilSigns>,
) -> Result<Vec<LevelForm>> {
    let mut out = Vec::new();
    for (level, reps) in &p.parts {
        let k = level - w.center;
        debug_assert!(k >= 0);
        let pow = nm.pow(k as u32);
        let m = RatMatrix::from_fn(reps.len(), reps.len(), |i, j| {
            twisted_pair(r, signs, &pow, &reps[i], &reps[j])
        });
        if !reps.is_empty() && m.inverse().is_err() {
            return Err(Error::DegenerateLevelForm { level: *level });
        }
        out.push(LevelForm { level: *level, matrix: m, ctilde_applied: signs.is_some() });
    }
    Ok(out)
}

/// Data needed for the positivity clause on quasi-homogeneous germs.
pub struct HodgeContext<'a> {
    pub grading: &'a HodgeGrading,
    pub conjugation: &'a Conjugation,
    pub signs: &'a WeilSigns,
}

/// Run the bilinear-relation checks and collect findings. Cross-primitive
/// orthogonality, nondegeneracy, representative well-definedness, and
/// self-adjointness are exact for every germ; the positivity clause needs
/// the Hodge context and is skipped (and recorded) without it.
pub fn bilinear_relation_check(
    forms: &[LevelForm],
    r: &ResidueForm,
    w: &WeightFiltration,
    p: &PrimitiveDecomposition,
    nm: &RatMatrix,
    hodge: Option<HodgeContext<'_>>,
) -> BilinearReport {
    let mut findings = Vec::new();
    let mut skipped = Vec::new();
    let signs = hodge.as_ref().map(|h| h.signs);

    // Multiplication is self-adjoint for the pairing.
    let gn = r.gram.mul(nm);
    findings.push(Finding {
        name: "multiplication_self_adjoint".to_string(),
        passed: gn.is_symmetric(),
        detail: "res(f u, v) = res(u, f v)".to_string(),
    });

    // Cross-primitive orthogonality under the higher-level matched power.
    let mut ortho_ok = true;
    let mut ortho_detail = String::new();
    for (la, reps_a) in &p.parts {
        for (lb, reps_b) in &p.parts {
            if la >= lb {
                continue;
            }
            let k = (lb - w.center).max(la - w.center);
            let pow = nm.pow(k as u32);
            for u in reps_a {
                for v in reps_b {
                    let x = twisted_pair(r, signs, &pow, u, v);
                    let y = twisted_pair(r, signs, &pow, v, u);
                    if !x.is_zero() || !y.is_zero() {
                        ortho_ok = false;
                        ortho_detail =
                            format!("levels {la} and {lb} pair to {} / {}", rat_to_string(&x), rat_to_string(&y));
                    }
                }
            }
        }
    }
    findings.push(Finding {
        name: "cross_primitive_orthogonality".to_string(),
        passed: ortho_ok,
        detail: if ortho_ok { "exact zero on all mixed primitive pairs".to_string() } else { ortho_detail },
    });

    // Nondegeneracy of every level form.
    let mut nondeg_ok = true;
    let mut nondeg_detail = String::new();
    for f in forms {
        if f.matrix.nrows() > 0 && f.matrix.inverse().is_err() {
            nondeg_ok = false;
            nondeg_detail = format!("level {} form is singular", f.level);
        }
    }
    findings.push(Finding {
        name: "level_form_nondegenerate".to_string(),
        passed: nondeg_ok,
        detail: if nondeg_ok { "every level form has nonzero determinant".to_string() } else { nondeg_detail },
    });

    // Values are blind to the representative modulo lower filtration stages.
    let mut repr_ok = true;
    for (level, reps) in &p.parts {
        let k = level - w.center;
        let pow = nm.pow(k as u32);
        for u in w.stage_basis(level - 1) {
            for v in reps {
                if !twisted_pair(r, signs, &pow, &u, v).is_zero() {
                    repr_ok = false;
                }
            }
        }
    }
    findings.push(Finding {
        name: "representative_independence".to_string(),
        passed: repr_ok,
        detail: "lower filtration stages pair to zero against primitives".to_string(),
    });

    match hodge {
        None => {
            skipped.push(
                "positivity of the hermitian level forms: skipped, needs the Hodge bigrading of a quasi-homogeneous germ"
                    .to_string(),
            );
        }
        Some(ctx) => {
            let (ok, detail) = positivity_check(forms, r, w, p, nm, &ctx);
            findings.push(Finding { name: "hermitian_level_positivity".to_string(), passed: ok, detail });
        }
    }

    let all_passed = findings.iter().all(|f| f.passed);
    BilinearReport { findings, skipped, all_passed }
}

/// Positive definiteness of every weight-normalized hermitian level block:
/// the matrix (-1)^{q_a} res(u_a, Ct N^l conj(u_b)) must be symmetric
/// positive definite with the single global sign convention.
fn positivity_check(
    forms: &[LevelForm],
    r: &ResidueForm,
    w: &WeightFiltration,
    p: &PrimitiveDecomposition,
    nm: &RatMatrix,
    ctx: &HodgeContext<'_>,
) -> (bool, String) {
    let _ = forms;
    let kappa = &ctx.conjugation.kappa;
    for (level, reps) in &p.parts {
        let k = level - w.center;
        let pow = nm.pow(k as u32);
        let dim = reps.len();
        // Quasi-homogeneous germs have the trivial chain structure, so
        // primitive representatives are unit vectors on basis classes.
        let class_of = |v: &Vec<Rat>| -> Option<usize> {
            let mut idx = None;
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    if idx.is_some() {
                        return None;
                    }
                    idx = Some(i);
                }
            }
            idx
        };
        let Some(classes) = reps.iter().map(class_of).collect::<Option<Vec<usize>>>() else {
            return (false, format!("level {level} representatives are not basis classes"), );
        };
        let m = RatMatrix::from_fn(dim, dim, |i, j| {
            let conj_j = unit(r.gram.nrows(), kappa[classes[j]]);
            let val = twisted_pair(r, Some(ctx.signs), &pow, &reps[i], &conj_j);
            let qa = ctx.grading.entries[classes[i]].q;
            if qa % 2 == 0 {
                val
            } else {
                -val
            }
        });
        if !m.is_symmetric() {
            return (false, format!("level {level} hermitian block is not symmetric"));
        }
        match symmetric_signature(&m) {
            Ok((plus, _minus, zero)) if plus == dim && zero == 0 => {}
            Ok(inertia) => {
                return (
                    false,
                    format!("level {level} hermitian block has inertia {:?}, expected positive definite", inertia),
                )
            }
            Err(_) => return (false, format!("level {level} hermitian block is not symmetric")),
        }
    }
    (true, "all hermitian level blocks positive definite under the global sign".to_string())
}

fn unit(len: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); len];
    v[i] = Rat::one();
    v
}

/// Check that the chain-top counts reproduce the partition bookkeeping:
/// the number of blocks of size s equals dim P_{s-1}.
pub fn partition_matches_primitives(w: &WeightFiltration, p: &PrimitiveDecomposition) -> bool {
    let max = w.partition.0.first().copied().unwrap_or(0);
    for s in 1..=max {
        let level = w.center + s as i64 - 1;
        let dim_p = p.at_level(level).map_or(0, |v| v.len());
        if w.partition.blocks_of_size(s) != dim_p {
            return false;
        }
    }
    true
}

/// Lefschetz bookkeeping: dim Gr_l = sum over r >= 0 of dim P_{l + 2r}.
pub fn lefschetz_dims_consistent(w: &WeightFiltration, p: &PrimitiveDecomposition) -> bool {
    for (l, dim) in w.graded_dims() {
        let mut acc = 0usize;
        let mut level = l.max(2 * w.center - l);
        // Primitive levels at or above |l - center| with matching parity.
        while level <= w.center + w.dim as i64 {
            acc += p.at_level(level).map_or(0, |v| v.len());
            level += 2;
        }
        if acc != dim {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::nilpotent_from_partition;
    use crate::rat::rat_int;

    #[test]
    fn zero_operator_sits_in_one_level() {
        let n = RatMatrix::zero(6, 6);
        let w = nilpotent_weight_filtration(&n, 0).unwrap();
        assert_eq!(w.graded_dims(), vec![(0, 6)]);
        assert!(w.verify_axioms(&n));
    }

    #[test]
    fn single_two_block() {
        let n = nilpotent_from_partition(&[2, 1]);
        let w = nilpotent_weight_filtration(&n, 0).unwrap();
        assert_eq!(w.graded_dims(), vec![(-1, 1), (0, 1), (1, 1)]);
        assert!(w.verify_axioms(&n));
        let p = primitive_parts(&w, &n);
        assert_eq!(p.dims(), vec![(0, 1), (1, 1)]);
        assert!(partition_matches_primitives(&w, &p));
        assert!(lefschetz_dims_consistent(&w, &p));
    }

    #[test]
    fn centered_filtration_shifts_levels() {
        let n = nilpotent_from_partition(&[3]);
        let w = nilpotent_weight_filtration(&n, 2).unwrap();
        assert_eq!(w.graded_dims(), vec![(0, 1), (2, 1), (4, 1)]);
    }

    #[test]
    fn random_conjugation_preserves_graded_dims() {
        // A fixed unimodular change of basis must leave all dimensions alone.
        let n = nilpotent_from_partition(&[3, 2, 2, 1]);
        let dim = 8;
        let mut u = RatMatrix::identity(dim);
        // Deterministic shear pattern.
        for i in 0..dim {
            for j in 0..dim {
                if i < j {
                    u[(i, j)] = rat_int(((i * 7 + j * 3) % 5) as i64 - 2);
                }
            }
        }
        let u_inv = u.inverse().unwrap();
        let conj = u.mul(&n).mul(&u_inv);
        let w1 = nilpotent_weight_filtration(&n, 0).unwrap();
        let w2 = nilpotent_weight_filtration(&conj, 0).unwrap();
        assert_eq!(w1.graded_dims(), w2.graded_dims());
        assert_eq!(w1.partition, w2.partition);
        assert!(w2.verify_axioms(&conj));
    }

    #[test]
    fn toy_level_form_from_gram() {
        // Two-dimensional toy: N = [[0,0],[1,0]] (chain e1 -> e2) with the
        // gram of the one-variable cubic.
        let mut n = RatMatrix::zero(2, 2);
        n[(1, 0)] = rat_int(1);
        let gram = RatMatrix::from_rows(vec![
            vec![Rat::zero(), crate::rat::rat(1, 3)],
            vec![crate::rat::rat(1, 3), Rat::zero()],
        ]);
        let r = ResidueForm {
            functional: vec![gram[(0, 0)].clone(), gram[(1, 0)].clone()],
            bezout_coeffs: gram.inverse().unwrap(),
            gram,
        };
        let w = nilpotent_weight_filtration(&n, 0).unwrap();
        let p = primitive_parts(&w, &n);
        let forms = level_forms(&r, &w, &p, &n, None).unwrap();
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].level, 1);
        assert_eq!(forms[0].matrix[(0, 0)], crate::rat::rat(1, 3));
        let report = bilinear_relation_check(&forms, &r, &w, &p, &n, None);
        assert!(report.all_passed, "{:?}", report.findings);
        assert_eq!(report.skipped.len(), 1);
    }
}
