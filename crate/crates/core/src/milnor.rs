//! The Milnor algebra of a germ: quotient by the Jacobian ideal, its
//! monomial basis, multiplication operators, and quasi-homogeneous weight
//! detection.
//!
//! The polynomial quotient by the Jacobian ideal sees every critical point
//! of the polynomial, not just the origin. When some variable fails to act
//! nilpotently, the algebra is localized at the origin by splitting off the
//! joint generalized 0-eigenspace of the variable multiplication operators;
//! that subspace is exactly the local algebra of the germ, and the reported
//! basis consists of monomials whose local classes stay independent.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::groebner::{buchberger, normal_form, quotient_basis, GroebnerBasis};
use crate::matrix::RatMatrix;
use crate::poly::{Monomial, MonomialOrder, Polynomial, VarSet};
use crate::rat::{rat_int, Rat};

pub use crate::groebner::Ideal;

/// Strictly positive weights making every monomial of f weighted degree 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QhWeights(pub Vec<Rat>);

/// Finite-dimensional local algebra of a germ with a fixed monomial basis.
/// For quasi-homogeneous germs the basis is sorted by ascending form level
/// with grevlex tie-break, so spectrum tables read straight off the basis.
#[derive(Debug, Clone)]
pub struct MilnorAlgebra {
    pub germ: Polynomial,
    pub vars: VarSet,
    pub groebner: GroebnerBasis,
    /// Standard monomials of the global quotient.
    pub global_basis: Vec<Monomial>,
    /// Monomials whose local classes form the working basis, length mu.
    pub basis: Vec<Monomial>,
    pub mu: usize,
    pub weights: Option<QhWeights>,
    /// True when the critical locus had points away from the origin and the
    /// local component was split off.
    pub localized: bool,
    /// Columns are the local basis classes written in global coordinates.
    embed: RatMatrix,
    /// Extracts local coordinates from global ones (mu x N).
    restrict: RatMatrix,
    variable_matrices: Vec<RatMatrix>,
    germ_matrix: RatMatrix,
    global_index: BTreeMap<Monomial, usize>,
}

/// Ideal generated by all first partials of `f`.
pub fn jacobian_ideal(f: &Polynomial) -> Result<Ideal> {
    if f.is_constant() {
        return Err(Error::ZeroGerm);
    }
    let gens: Vec<Polynomial> = (0..f.nvars()).map(|i| f.partial_derivative(i)).collect();
    Ok(Ideal::new(f.vars().clone(), gens))
}

/// Solve for weights giving every monomial of `f` weighted degree 1.
/// Returns `None` when the system is infeasible, underdetermined, or admits
/// no strictly positive solution.
pub fn detect_qh_weights(f: &Polynomial) -> Option<QhWeights> {
    if f.is_zero() {
        return None;
    }
    let n = f.nvars();
    let rows: Vec<Vec<Rat>> = f
        .terms()
        .map(|(m, _)| m.0.iter().map(|&e| rat_int(e as i64)).collect())
        .collect();
    let mat = RatMatrix::from_rows(rows);
    let rhs = vec![Rat::one(); mat.nrows()];
    let w = mat.solve_unique(&rhs)?;
    if w.iter().all(|wi| wi.is_positive()) && w.len() == n {
        Some(QhWeights(w))
    } else {
        None
    }
}

/// Build the Milnor algebra of `f` under `ord`.
pub fn milnor_algebra(f: &Polynomial, ord: MonomialOrder) -> Result<MilnorAlgebra> {
    if f.is_constant() {
        return Err(Error::ZeroGerm);
    }
    if !f.constant_part().is_zero() {
        return Err(Error::InvalidGerm("germ must vanish at the origin".to_string()));
    }
    let ideal = jacobian_ideal(f)?;
    let gb = buchberger(&ideal, ord);
    let global_basis = match quotient_basis(&gb) {
        Ok(b) => b,
        Err(Error::NotZeroDimensional(v)) => {
            return Err(Error::NotIsolatedAtOrigin(format!(
                "the Jacobian ideal is not zero-dimensional (no pure power of `{v}`)"
            )))
        }
        Err(e) => return Err(e),
    };
    if global_basis.is_empty() {
        return Err(Error::NotIsolatedAtOrigin(
            "the Jacobian ideal is the unit ideal; the origin is a regular point".to_string(),
        ));
    }
    let n_glob = global_basis.len();
    let nvars = gb.vars.len();
    let global_var_mats: Vec<RatMatrix> =
        (0..nvars).map(|i| crate::groebner::multiplication_matrix_on(&gb, &global_basis, i)).collect();
    let all_nilpotent = global_var_mats.iter().all(crate::groebner::is_nilpotent);

    let (basis, embed, restrict, localized) = if all_nilpotent {
        let id = RatMatrix::identity(n_glob);
        (global_basis.clone(), id.clone(), id, false)
    } else {
        local_split(&global_basis, &global_var_mats)?
    };

    let weights = detect_qh_weights(f);
    let mut basis = basis;
    let mut embed = embed;
    let mut restrict = restrict;
    if let Some(QhWeights(w)) = &weights {
        // Quasi-homogeneous germs have their critical locus pinned at the
        // origin, so the global quotient is already local here.
        debug_assert!(!localized);
        let mut perm: Vec<usize> = (0..basis.len()).collect();
        perm.sort_by(|&a, &b| {
            basis[a]
                .form_level(w)
                .cmp(&basis[b].form_level(w))
                .then_with(|| MonomialOrder::Grevlex.cmp(&basis[a], &basis[b]))
        });
        basis = perm.iter().map(|&i| basis[i].clone()).collect();
        let mu = perm.len();
        embed = RatMatrix::from_fn(n_glob, mu, |i, j| embed[(i, perm[j])].clone());
        restrict = RatMatrix::from_fn(mu, n_glob, |i, j| restrict[(perm[i], j)].clone());
    }

    let global_index: BTreeMap<Monomial, usize> =
        global_basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mu = basis.len();
    let mut algebra = MilnorAlgebra {
        germ: f.clone(),
        vars: gb.vars.clone(),
        groebner: gb,
        global_basis,
        basis,
        mu,
        weights,
        localized,
        embed,
        restrict,
        variable_matrices: Vec::new(),
        germ_matrix: RatMatrix::zero(mu, mu),
        global_index,
    };
    algebra.variable_matrices = (0..nvars)
        .map(|i| algebra.restrict.mul(&global_var_mats[i]).mul(&algebra.embed))
        .collect();
    algebra.germ_matrix = algebra.multiplication_matrix(f);
    if !crate::groebner::is_nilpotent(&algebra.germ_matrix) {
        return Err(Error::NotIsolatedAtOrigin(
            "multiplication by the germ is not nilpotent on the local algebra".to_string(),
        ));
    }
    Ok(algebra)
}

/// Split the joint generalized 0-eigenspace of the commuting variable
/// operators and pick monomial representatives for its basis.
fn local_split(
    global_basis: &[Monomial],
    var_mats: &[RatMatrix],
) -> Result<(Vec<Monomial>, RatMatrix, RatMatrix, bool)> {
    let n = global_basis.len();
    let powers: Vec<RatMatrix> = var_mats.iter().map(|m| m.pow(n as u32)).collect();
    // Kernel of the vertical stack is the intersection of the kernels.
    let mut stacked = powers[0].clone();
    for p in &powers[1..] {
        stacked = stacked.vstack(p);
    }
    let kernel = stacked.kernel_basis();
    let mu = kernel.len();
    if mu == 0 {
        return Err(Error::NotIsolatedAtOrigin(
            "the origin is not a critical point of the germ".to_string(),
        ));
    }
    let k_mat = RatMatrix::from_columns(&kernel);
    // Complement: columns spanning the generalized eigenspaces away from 0.
    let mut wide = powers[0].clone();
    for p in &powers[1..] {
        wide = wide.hstack(p);
    }
    let mut complement: Vec<Vec<Rat>> = Vec::new();
    for j in 0..wide.ncols() {
        if complement.len() == n - mu {
            break;
        }
        let col = wide.column(j);
        if col.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut cand = complement.clone();
        cand.push(col);
        if RatMatrix::from_columns(&cand).rank() == cand.len() {
            complement = cand;
        }
    }
    if complement.len() != n - mu {
        return Err(Error::NotIsolatedAtOrigin(
            "failed to split the local component of the Jacobian quotient".to_string(),
        ));
    }
    let full = k_mat.hstack(&RatMatrix::from_columns(&complement));
    let full_inv = full.inverse().map_err(|_| {
        Error::NotIsolatedAtOrigin("failed to split the local component of the Jacobian quotient".to_string())
    })?;
    // Local component of a global vector v: first mu entries of full_inv * v,
    // as coordinates in the kernel basis.
    let to_kernel_coords = RatMatrix::from_fn(mu, n, |i, j| full_inv[(i, j)].clone());

    // Greedy monomial selection: keep global staircase monomials whose local
    // components stay independent.
    let mut selected: Vec<usize> = Vec::new();
    let mut sel_coords: Vec<Vec<Rat>> = Vec::new();
    for (idx, _m) in global_basis.iter().enumerate() {
        if selected.len() == mu {
            break;
        }
        let coords = to_kernel_coords.column(idx);
        if coords.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut cand = sel_coords.clone();
        cand.push(coords.clone());
        if RatMatrix::from_columns(&cand).rank() == cand.len() {
            sel_coords = cand;
            selected.push(idx);
        }
    }
    assert_eq!(selected.len(), mu, "local classes of standard monomials span the local algebra");
    let a_mat = RatMatrix::from_columns(&sel_coords);
    let a_inv = a_mat.inverse().expect("selected local classes are independent");
    let embed = k_mat.mul(&a_mat);
    let restrict = a_inv.mul(&to_kernel_coords);
    let basis: Vec<Monomial> = selected.iter().map(|&i| global_basis[i].clone()).collect();
    Ok((basis, embed, restrict, true))
}

impl MilnorAlgebra {
    pub fn fiber_dimension(&self) -> usize {
        self.vars.len() - 1
    }

    /// Coordinates of the class of `p` in the local monomial basis.
    pub fn nf_coords(&self, p: &Polynomial) -> Vec<Rat> {
        let nf = normal_form(p, &self.groebner);
        let mut v = vec![Rat::zero(); self.global_basis.len()];
        for (m, c) in nf.terms() {
            let idx = *self.global_index.get(m).expect("normal form lands in the staircase span");
            v[idx] = c.clone();
        }
        self.restrict.mul_vec(&v)
    }

    /// Global staircase coordinates of the local basis class `a`.
    pub fn class_in_global(&self, a: usize) -> Vec<Rat> {
        self.embed.column(a)
    }

    pub fn embedding(&self) -> &RatMatrix {
        &self.embed
    }

    pub fn basis_index_of(&self, m: &Monomial) -> Option<usize> {
        self.basis.iter().position(|b| b == m)
    }

    /// Index of the class of 1 in the local basis.
    pub fn unit_index(&self) -> usize {
        self.basis_index_of(&Monomial::one(self.vars.len()))
            .expect("the monomial 1 is always selected first")
    }

    /// Matrix of v -> class(g*v) in the local basis.
    pub fn multiplication_matrix(&self, g: &Polynomial) -> RatMatrix {
        let n_glob = self.global_basis.len();
        let mut global = RatMatrix::zero(n_glob, n_glob);
        for (col, mono) in self.global_basis.iter().enumerate() {
            let prod = g.mul_term(mono, &Rat::one());
            let nf = normal_form(&prod, &self.groebner);
            for (m, c) in nf.terms() {
                let row = *self.global_index.get(m).expect("normal form lands in the staircase span");
                global[(row, col)] = c.clone();
            }
        }
        self.restrict.mul(&global).mul(&self.embed)
    }

    /// Cached matrix of multiplication by variable `i`.
    pub fn variable_matrix(&self, i: usize) -> &RatMatrix {
        &self.variable_matrices[i]
    }

    /// Cached matrix of multiplication by the germ itself.
    pub fn germ_matrix(&self) -> &RatMatrix {
        &self.germ_matrix
    }

    /// Form levels of the basis monomials for a quasi-homogeneous germ.
    pub fn levels(&self) -> Option<Vec<Rat>> {
        self.weights
            .as_ref()
            .map(|QhWeights(w)| self.basis.iter().map(|m| m.form_level(w)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::varset;
    use crate::rat::rat;

    fn algebra(text: &str, vars: &[&str]) -> MilnorAlgebra {
        let vs = varset(vars.to_vec());
        let f = parse_polynomial(text, &vs).unwrap();
        milnor_algebra(&f, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn jacobian_generators() {
        let vs = varset(vec!["x", "y"]);
        let f = parse_polynomial("x^3 + y^4", &vs).unwrap();
        let ideal = jacobian_ideal(&f).unwrap();
        let rendered: Vec<String> = ideal.gens.iter().map(|g| g.render()).collect();
        assert_eq!(rendered, vec!["3*x^2", "4*y^3"]);
        let t = parse_polynomial("x^2*y^2 + x^5 + y^5", &vs).unwrap();
        let jt = jacobian_ideal(&t).unwrap();
        let rendered: Vec<String> = jt.gens.iter().map(|g| g.render()).collect();
        assert_eq!(rendered, vec!["5*x^4 + 2*x*y^2", "5*y^4 + 2*x^2*y"]);
        let c = parse_polynomial("7", &vs).unwrap();
        assert!(matches!(jacobian_ideal(&c), Err(Error::ZeroGerm)));
    }

    #[test]
    fn basis_and_mu_of_the_plane_cusp_quartic() {
        let a = algebra("x^3 + y^4", &["x", "y"]);
        assert_eq!(a.mu, 6);
        assert!(!a.localized);
        let names: Vec<String> =
            a.basis.iter().map(|m| m.render(&["x".into(), "y".into()])).collect();
        assert_eq!(names, vec!["1", "y", "x", "y^2", "x*y", "x*y^2"]);
    }

    #[test]
    fn morse_point_has_trivial_algebra() {
        let a = algebra("x^2 + y^2", &["x", "y"]);
        assert_eq!(a.mu, 1);
        assert!(a.basis[0].is_one());
    }

    #[test]
    fn weights_detected() {
        let vs = varset(vec!["x", "y"]);
        let f = parse_polynomial("x^3 + y^4", &vs).unwrap();
        assert_eq!(detect_qh_weights(&f).unwrap().0, vec![rat(1, 3), rat(1, 4)]);
        let t = parse_polynomial("x^2*y^2 + x^5 + y^5", &vs).unwrap();
        assert!(detect_qh_weights(&t).is_none());
        let vs1 = varset(vec!["x"]);
        let sq = parse_polynomial("x^2", &vs1).unwrap();
        assert_eq!(detect_qh_weights(&sq).unwrap().0, vec![rat(1, 2)]);
        // Underdetermined system: ambiguity is flagged by absence.
        let amb = parse_polynomial("x*y", &vs).unwrap();
        assert!(detect_qh_weights(&amb).is_none());
    }

    #[test]
    fn quasi_homogeneous_germ_multiplies_to_zero() {
        let a = algebra("x^3 + y^4", &["x", "y"]);
        assert!(a.germ_matrix().is_zero());
        let one = Polynomial::constant(a.vars.clone(), Rat::one());
        assert_eq!(a.multiplication_matrix(&one), RatMatrix::identity(6));
    }

    #[test]
    fn t_series_germ_localizes_to_dimension_eleven() {
        let a = algebra("x^2*y^2 + x^5 + y^5", &["x", "y"]);
        assert!(a.localized);
        assert_eq!(a.global_basis.len(), 16);
        assert_eq!(a.mu, 11);
        assert_eq!(a.basis[0], Monomial::one(2));
        let m = a.germ_matrix();
        assert!(!m.is_zero());
        assert!(crate::groebner::is_nilpotent(m));
        for i in 0..2 {
            assert!(crate::groebner::is_nilpotent(a.variable_matrix(i)));
        }
        // Multiplication respects the local ring structure: x*y classes agree.
        let vs = a.vars.clone();
        let x = Polynomial::variable(vs.clone(), 0);
        let y = Polynomial::variable(vs.clone(), 1);
        let xy = x.mul(&y);
        let via_product = a.multiplication_matrix(&xy);
        let via_factors = a.variable_matrix(0).mul(a.variable_matrix(1));
        assert_eq!(via_product, via_factors);
    }

    #[test]
    fn variable_matrices_commute() {
        let a = algebra("x^3 + x*y^3", &["x", "y"]);
        let mx = a.variable_matrix(0);
        let my = a.variable_matrix(1);
        assert_eq!(mx.mul(my), my.mul(mx));
    }

    #[test]
    fn non_isolated_inputs_rejected() {
        let vs = varset(vec!["x", "y"]);
        let f = parse_polynomial("x^2*y^2", &vs).unwrap();
        assert!(matches!(
            milnor_algebra(&f, MonomialOrder::Grevlex),
            Err(Error::NotIsolatedAtOrigin(_))
        ));
        // Critical point away from the origin only.
        let g = parse_polynomial("x^2 - x", &varset(vec!["x"])).unwrap();
        assert!(matches!(
            milnor_algebra(&g, MonomialOrder::Grevlex),
            Err(Error::NotIsolatedAtOrigin(_))
        ));
        // Variable missing from the germ.
        let h = parse_polynomial("x^2", &vs).unwrap();
        assert!(matches!(
            milnor_algebra(&h, MonomialOrder::Grevlex),
            Err(Error::NotIsolatedAtOrigin(_))
        ));
        // Smooth point.
        let s = parse_polynomial("x", &varset(vec!["x"])).unwrap();
        assert!(matches!(
            milnor_algebra(&s, MonomialOrder::Grevlex),
            Err(Error::NotIsolatedAtOrigin(_))
        ));
        // Nonzero value at the origin.
        let c = parse_polynomial("x^2 + 1", &varset(vec!["x"])).unwrap();
        assert!(matches!(milnor_algebra(&c, MonomialOrder::Grevlex), Err(Error::InvalidGerm(_))));
    }

    #[test]
    fn milnor_number_matches_weight_product() {
        // mu = prod(1/w_i - 1) for quasi-homogeneous germs.
        for (text, vars) in [
            ("x^3 + y^4", vec!["x", "y"]),
            ("x^3 + x*y^3", vec!["x", "y"]),
            ("x^3 + y^3 + z^3", vec!["x", "y", "z"]),
            ("x^5 + y^2 + z^2", vec!["x", "y", "z"]),
        ] {
            let a = algebra(text, &vars);
            let QhWeights(w) = a.weights.clone().unwrap();
            let mut prod = Rat::one();
            for wi in &w {
                prod *= wi.recip() - Rat::one();
            }
            assert_eq!(prod, rat_int(a.mu as i64), "germ {text}");
        }
    }

    #[test]
    fn d_series_germ_golden_basis() {
        let a = algebra("x^3 + x*y^3", &["x", "y"]);
        assert_eq!(a.mu, 7);
        let names: Vec<String> =
            a.basis.iter().map(|m| m.render(&["x".into(), "y".into()])).collect();
        assert_eq!(names, vec!["1", "y", "x", "y^2", "x*y", "x^2", "x^2*y"]);
        assert_eq!(a.weights.unwrap().0, vec![rat(1, 3), rat(2, 9)]);
    }
}
