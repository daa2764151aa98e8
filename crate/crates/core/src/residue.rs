//! The residue pairing on the Milnor algebra via the Bezoutian dual basis.
//!
//! The Bezoutian of the partials is the determinant of their finite
//! difference matrix in doubled variables. Reducing it modulo the Jacobian
//! ideal in both variable blocks writes it as sum C_ab e_a(x) e_b(y); the
//! inverse of C is then the Gram matrix of the residue pairing in the
//! monomial basis, normalized so the Hessian class pairs to mu with 1.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::milnor::MilnorAlgebra;
use crate::poly::{hessian_determinant, poly_matrix_determinant, varset, Monomial, Polynomial, VarSet};
use crate::rat::{rat_int, rat_to_string, Rat};

/// Bezoutian of the partials of a germ, a polynomial in doubled variables:
/// the original block first, then a primed copy.
#[derive(Debug, Clone)]
pub struct Bezoutian {
    pub delta: Polynomial,
    pub doubled_vars: VarSet,
    pub nvars: usize,
}

/// Gram matrix of the residue pairing plus the residue functional values on
/// the basis classes.
#[derive(Debug, Clone)]
pub struct ResidueForm {
    pub gram: RatMatrix,
    pub functional: Vec<Rat>,
    /// Double reduction of the Bezoutian; inverse of `gram`.
    pub bezout_coeffs: RatMatrix,
}

/// Doubled variable ring for `vars`: the second block gets primed names.
pub fn doubled_ring(vars: &VarSet) -> VarSet {
    let mut names: Vec<String> = vars.iter().cloned().collect();
    names.extend(vars.iter().map(|v| format!("{v}~")));
    varset(names)
}

/// Finite-difference Bezoutian determinant of the partials of `f`.
pub fn bezoutian(f: &Polynomial) -> Bezoutian {
    let n = f.nvars();
    let big = doubled_ring(f.vars());
    let partials: Vec<Polynomial> = (0..n).map(|i| f.partial_derivative(i)).collect();
    // lift_k maps the first k variables into the primed block.
    let lift = |g: &Polynomial, k: usize| -> Polynomial {
        let map: Vec<usize> = (0..n).map(|i| if i < k { n + i } else { i }).collect();
        g.relabel(big.clone(), &map)
    };
    let mut entries = Vec::with_capacity(n);
    for gi in &partials {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let num = lift(gi, j).sub(&lift(gi, j + 1));
            let q = num
                .div_exact_var_difference(j, n + j)
                .expect("finite difference is divisible by the variable difference");
            row.push(q);
        }
        entries.push(row);
    }
    let delta = poly_matrix_determinant(&entries, big.clone());
    Bezoutian { delta, doubled_vars: big, nvars: n }
}

impl Bezoutian {
    /// Collapse the primed block onto the original variables; equals the
    /// Hessian determinant of the germ.
    pub fn diagonal_restriction(&self, vars: &VarSet) -> Polynomial {
        let n = self.nvars;
        let map: Vec<usize> = (0..2 * n).map(|i| i % n).collect();
        self.delta.relabel(vars.clone(), &map)
    }
}

/// Split a doubled-ring monomial into its two blocks.
fn split_monomial(m: &Monomial, n: usize) -> (Monomial, Monomial) {
    (Monomial(m.0[..n].to_vec()), Monomial(m.0[n..].to_vec()))
}

/// Reduce the Bezoutian modulo the Jacobian ideal in both blocks and return
/// the coefficient matrix on basis x basis.
fn double_reduce(a: &MilnorAlgebra, bez: &Bezoutian) -> RatMatrix {
    let n = bez.nvars;
    let mu = a.mu;
    let mut cache: BTreeMap<Monomial, Vec<Rat>> = BTreeMap::new();
    let mut coords_of = |m: &Monomial| -> Vec<Rat> {
        if let Some(v) = cache.get(m) {
            return v.clone();
        }
        let poly = Polynomial::monomial(a.vars.clone(), m.clone(), rat_int(1));
        let v = a.nf_coords(&poly);
        cache.insert(m.clone(), v.clone());
        v
    };
    let mut c = RatMatrix::zero(mu, mu);
    for (m, coeff) in bez.delta.terms() {
        let (mx, my) = split_monomial(m, n);
        let u = coords_of(&mx);
        let v = coords_of(&my);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    let add = coeff * ui * vj;
                    c[(i, j)] += add;
                }
            }
        }
    }
    c
}

/// Reduce one block of a doubled-ring polynomial to basis classes, leaving
/// the other block untouched. Exposed for the reduction-order test.
pub fn reduce_block(a: &MilnorAlgebra, p: &Polynomial, primed_block: bool) -> Polynomial {
    let n = a.vars.len();
    let big = p.vars().clone();
    let mut out = Polynomial::zero(big.clone());
    for (m, coeff) in p.terms() {
        let (mx, my) = split_monomial(m, n);
        let (target, keep) = if primed_block { (my, mx) } else { (mx, my) };
        let poly = Polynomial::monomial(a.vars.clone(), target, rat_int(1));
        let coords = a.nf_coords(&poly);
        for (idx, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis_m = &a.basis[idx];
            let mut exps = vec![0u32; 2 * n];
            for i in 0..n {
                if primed_block {
                    exps[i] = keep.0[i];
                    exps[n + i] = basis_m.0[i];
                } else {
                    exps[i] = basis_m.0[i];
                    exps[n + i] = keep.0[i];
                }
            }
            out.add_term(Monomial(exps), coeff * c);
        }
    }
    out
}

/// Gram matrix of the residue pairing on the basis of `a`.
pub fn gram_matrix(a: &MilnorAlgebra) -> Result<ResidueForm> {
    let bez = bezoutian(&a.germ);
    let c = double_reduce(a, &bez);
    let gram = c.inverse().map_err(|_| Error::SingularBezoutian)?;
    let unit = a.unit_index();
    let functional: Vec<Rat> = (0..a.mu).map(|i| gram[(i, unit)].clone()).collect();
    Ok(ResidueForm { gram, functional, bezout_coeffs: c })
}

impl ResidueForm {
    /// Residue of an algebra element given in basis coordinates.
    pub fn functional_value(&self, coords: &[Rat]) -> Rat {
        coords
            .iter()
            .zip(&self.functional)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| c * l)
            .sum()
    }
}

/// Pairing value of two elements in basis coordinates.
pub fn residue_pair(r: &ResidueForm, a: &[Rat], b: &[Rat]) -> Rat {
    let gb = r.gram.mul_vec(b);
    a.iter().zip(&gb).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum()
}

/// Residue of the Hessian class; always equals mu for the correctly
/// normalized pairing.
pub fn hessian_residue_check(a: &MilnorAlgebra, r: &ResidueForm) -> Result<Rat> {
    let hess = hessian_determinant(&a.germ);
    let coords = a.nf_coords(&hess);
    let value = r.functional_value(&coords);
    if value != rat_int(a.mu as i64) {
        return Err(Error::NormalizationFailure { got: rat_to_string(&value), mu: a.mu });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::milnor_algebra;
    use crate::parse::parse_polynomial;
    use crate::poly::MonomialOrder;
    use crate::rat::rat;

    fn algebra(text: &str, vars: &[&str]) -> MilnorAlgebra {
        let vs = varset(vars.to_vec());
        let f = parse_polynomial(text, &vs).unwrap();
        milnor_algebra(&f, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn bezoutian_hand_cases() {
        let vs1 = varset(vec!["x"]);
        let sq = parse_polynomial("x^2", &vs1).unwrap();
        assert_eq!(bezoutian(&sq).delta.render(), "2");
        let cube = parse_polynomial("x^3", &vs1).unwrap();
        let b = bezoutian(&cube);
        assert_eq!(b.delta.render(), "3*x + 3*x~");
        let vs2 = varset(vec!["x", "y"]);
        let pair = parse_polynomial("x^2 + y^2", &vs2).unwrap();
        assert_eq!(bezoutian(&pair).delta.render(), "4");
    }

    #[test]
    fn diagonal_restriction_is_the_hessian() {
        for (text, vars) in [
            ("x^3 + y^4", vec!["x", "y"]),
            ("x^3 + x*y^3", vec!["x", "y"]),
            ("x^2*y^2 + x^5 + y^5", vec!["x", "y"]),
            ("x^3 + y^3 + z^3", vec!["x", "y", "z"]),
        ] {
            let vs = varset(vars);
            let f = parse_polynomial(text, &vs).unwrap();
            let b = bezoutian(&f);
            assert_eq!(b.diagonal_restriction(&vs), hessian_determinant(&f), "germ {text}");
        }
    }

    #[test]
    fn hessian_of_cusp_quartic() {
        let vs = varset(vec!["x", "y"]);
        let f = parse_polynomial("x^3 + y^4", &vs).unwrap();
        assert_eq!(hessian_determinant(&f).render(), "72*x*y^2");
    }

    #[test]
    fn gram_one_variable() {
        let a = algebra("x^2", &["x"]);
        let r = gram_matrix(&a).unwrap();
        assert_eq!(r.gram[(0, 0)], rat(1, 2));
        let a3 = algebra("x^3", &["x"]);
        let r3 = gram_matrix(&a3).unwrap();
        assert!(r3.gram[(0, 0)].is_zero());
        assert_eq!(r3.gram[(0, 1)], rat(1, 3));
        assert_eq!(r3.gram[(1, 0)], rat(1, 3));
        assert!(r3.gram[(1, 1)].is_zero());
    }

    #[test]
    fn gram_matches_bezout_inverse() {
        let a = algebra("x^3 + y^4", &["x", "y"]);
        let r = gram_matrix(&a).unwrap();
        assert_eq!(r.gram.mul(&r.bezout_coeffs), RatMatrix::identity(a.mu));
        assert!(r.bezout_coeffs.is_symmetric());
        assert!(r.gram.is_symmetric());
    }

    #[test]
    fn cusp_quartic_vanishing_pair() {
        // res(x, x*y) = l(x^2*y) = 0.
        let a = algebra("x^3 + y^4", &["x", "y"]);
        let r = gram_matrix(&a).unwrap();
        let ix = a.basis_index_of(&Monomial(vec![1, 0])).unwrap();
        let ixy = a.basis_index_of(&Monomial(vec![1, 1])).unwrap();
        assert!(r.gram[(ix, ixy)].is_zero());
        // And the socle value forced by the Hessian: l(x*y^2) = 1/12.
        let isocle = a.basis_index_of(&Monomial(vec![1, 2])).unwrap();
        assert_eq!(r.functional[isocle], rat(1, 12));
    }

    #[test]
    fn residue_pair_examples() {
        let a = algebra("x^2", &["x"]);
        let r = gram_matrix(&a).unwrap();
        assert_eq!(residue_pair(&r, &[rat_int(1)], &[rat_int(1)]), rat(1, 2));
        let a3 = algebra("x^3", &["x"]);
        let r3 = gram_matrix(&a3).unwrap();
        let one = [rat_int(1), rat_int(0)];
        let x = [rat_int(0), rat_int(1)];
        assert_eq!(residue_pair(&r3, &one, &x), rat(1, 3));
        assert_eq!(residue_pair(&r3, &x, &one), rat(1, 3));
    }

    #[test]
    fn hessian_normalization() {
        for (text, vars, mu) in [
            ("x^2", vec!["x"], 1usize),
            ("x^3", vec!["x"], 2),
            ("x^3 + y^4", vec!["x", "y"], 6),
            ("x^2*y^2 + x^5 + y^5", vec!["x", "y"], 11),
        ] {
            let a = algebra(text, &vars);
            assert_eq!(a.mu, mu);
            let r = gram_matrix(&a).unwrap();
            assert_eq!(hessian_residue_check(&a, &r).unwrap(), rat_int(mu as i64), "germ {text}");
        }
    }

    #[test]
    fn reduction_order_is_immaterial() {
        for (text, vars) in [("x^3 + y^4", vec!["x", "y"]), ("x^3 + x*y^3", vec!["x", "y"])] {
            let vs = varset(vars);
            let f = parse_polynomial(text, &vs).unwrap();
            let a = milnor_algebra(&f, MonomialOrder::Grevlex).unwrap();
            let b = bezoutian(&f);
            let xy = reduce_block(&a, &reduce_block(&a, &b.delta, false), true);
            let yx = reduce_block(&a, &reduce_block(&a, &b.delta, true), false);
            assert_eq!(xy, yx, "germ {text}");
        }
    }

    #[test]
    fn functional_kills_the_jacobian_ideal() {
        let a = algebra("x^3 + y^4", &["x", "y"]);
        let r = gram_matrix(&a).unwrap();
        let vs = a.vars.clone();
        let fx = a.germ.partial_derivative(0);
        for h in ["1", "x", "y", "x*y^2 + 2*y"] {
            let hp = parse_polynomial(h, &vs).unwrap();
            let coords = a.nf_coords(&fx.mul(&hp));
            assert!(r.functional_value(&coords).is_zero(), "multiplier {h}");
        }
    }
}
