//! Floating-point cross-check of the residue pairing by Morse-point sums.
//!
//! Perturbing the germ by a generic linear form spreads the critical point
//! into distinct nondegenerate ones. Their coordinates are recovered as
//! joint eigenvalues of the multiplication matrices of the perturbed
//! quotient (eigenvalues from a random combination, common eigenvectors by
//! inverse iteration, then Newton polishing on the gradient system), and
//! the sum of e_i(s_r) e_j(s_r) / Hess(s_r) over the critical points s_r
//! approaches the exact Gram entry for the basis monomials e_i, e_j as the
//! perturbation goes to zero.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, quotient_basis};
use crate::matrix::RatMatrix;
use crate::milnor::{jacobian_ideal, MilnorAlgebra};
use crate::poly::{hessian_determinant, Monomial, Polynomial};
use crate::rat::{rat_to_f64, Rat};

/// Fixed mixing coefficients for the generic matrix combination; a second
/// attempt with the alternate set runs when eigenvalues collide.
const MIX: [&[f64]; 2] = [&[3.0, 7.0, 13.0, 29.0, 53.0, 97.0], &[5.0, 11.0, 23.0, 41.0, 71.0, 113.0]];

/// Full matrix of Morse-sum values over the basis of `a` at perturbation `s`.
/// Critical points with max-norm beyond `radius` are discarded, which
/// restricts the sum to the cluster degenerating to the origin.
pub fn morse_oracle(a: &MilnorAlgebra, s: &[Rat], radius: Option<f64>) -> Result<Vec<Vec<f64>>> {
    assert_eq!(s.len(), a.vars.len(), "one perturbation entry per variable");
    let points = critical_points(a, s)?;
    let points: Vec<Vec<Complex64>> = match radius {
        None => points,
        Some(r) => points
            .into_iter()
            .filter(|p| p.iter().map(|c| c.norm()).fold(0.0, f64::max) <= r)
            .collect(),
    };
    if points.is_empty() {
        return Err(Error::NotMorse("no critical points left after the radius cut".to_string()));
    }
    let hess = hessian_determinant(&a.germ);
    let mu = a.mu;
    let mut values = Vec::with_capacity(points.len());
    for p in &points {
        let h = eval_complex(&hess, p);
        if h.norm() < 1e-12 {
            return Err(Error::NotMorse(format!("degenerate critical point (|Hess| = {:.3e})", h.norm())));
        }
        let basis_vals: Vec<Complex64> = a.basis.iter().map(|m| eval_monomial(m, p)).collect();
        values.push((basis_vals, h));
    }
    let mut out = vec![vec![0.0f64; mu]; mu];
    let mut max_imag = 0.0f64;
    for i in 0..mu {
        for j in 0..mu {
            let mut acc = Complex64::zero();
            for (vals, h) in &values {
                acc += vals[i] * vals[j] / h;
            }
            max_imag = max_imag.max(acc.im.abs());
            out[i][j] = acc.re;
        }
    }
    if max_imag > 1e-6 {
        return Err(Error::NoConvergence(format!(
            "imaginary parts did not cancel (max {max_imag:.3e})"
        )));
    }
    Ok(out)
}

/// Morse-sum values for selected index pairs.
pub fn morse_oracle_pairs(
    a: &MilnorAlgebra,
    s: &[Rat],
    pairs: &[(usize, usize)],
    radius: Option<f64>,
) -> Result<Vec<((usize, usize), f64)>> {
    let full = morse_oracle(a, s, radius)?;
    Ok(pairs.iter().map(|&(i, j)| ((i, j), full[i][j])).collect())
}

/// All critical points of the perturbed germ as complex coordinate vectors.
fn critical_points(a: &MilnorAlgebra, s: &[Rat]) -> Result<Vec<Vec<Complex64>>> {
    let nvars = a.vars.len();
    let mut perturbed = a.germ.clone();
    for (i, si) in s.iter().enumerate() {
        let lin = Polynomial::variable(a.vars.clone(), i).scale(si);
        perturbed = perturbed.add(&lin);
    }
    let ideal = jacobian_ideal(&perturbed)?;
    let gb = buchberger(&ideal, a.groebner.order);
    let basis = quotient_basis(&gb)
        .map_err(|_| Error::NotMorse("perturbed critical points escaped to infinity".to_string()))?;
    let dim = basis.len();
    if dim == 0 {
        return Err(Error::NotMorse("perturbed germ has no critical points".to_string()));
    }
    let mats: Vec<DMatrix<f64>> = (0..nvars)
        .map(|i| to_f64(&crate::groebner::multiplication_matrix_on(&gb, &basis, i)))
        .collect();
    let grads: Vec<Polynomial> = (0..nvars).map(|i| perturbed.partial_derivative(i)).collect();
    let hess_rows: Vec<Vec<Polynomial>> =
        grads.iter().map(|g| (0..nvars).map(|j| g.partial_derivative(j)).collect()).collect();

    'attempt: for mix in MIX {
        let mut t = DMatrix::<f64>::zeros(dim, dim);
        for (i, m) in mats.iter().enumerate() {
            t += m * mix[i % mix.len()];
        }
        let eigen = t.clone().complex_eigenvalues();
        let scale = eigen.iter().map(|e| e.norm()).fold(1.0, f64::max);
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (eigen[i] - eigen[j]).norm() < 1e-9 * scale {
                    continue 'attempt;
                }
            }
        }
        let tc = t.map(Complex64::from);
        let mut points = Vec::with_capacity(dim);
        for r in 0..dim {
            let v = inverse_iteration(&tc, eigen[r], scale)?;
            let k = arg_max_norm(&v);
            let mut point = Vec::with_capacity(nvars);
            for m in &mats {
                let mv = m.map(Complex64::from) * &v;
                point.push(mv[k] / v[k]);
            }
            let point = newton_polish(point, &grads, &hess_rows)?;
            let residual: f64 = grads.iter().map(|g| eval_complex(g, &point).norm()).fold(0.0, f64::max);
            if residual > 1e-7 * (1.0 + scale) {
                return Err(Error::NoConvergence(format!(
                    "gradient residual {residual:.3e} at a recovered critical point"
                )));
            }
            points.push(point);
        }
        return Ok(points);
    }
    Err(Error::NotMorse("joint eigenvalues collide for every mixing choice".to_string()))
}

fn to_f64(m: &RatMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| rat_to_f64(&m[(i, j)]))
}

fn arg_max_norm(v: &nalgebra::DVector<Complex64>) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].norm() > v[best].norm() {
            best = i;
        }
    }
    best
}

/// Two rounds of inverse iteration around a slightly shifted eigenvalue.
fn inverse_iteration(
    t: &DMatrix<Complex64>,
    lambda: Complex64,
    scale: f64,
) -> Result<nalgebra::DVector<Complex64>> {
    let dim = t.nrows();
    let shift = lambda + Complex64::new(1e-11 * (1.0 + scale), 1e-12 * (1.0 + scale));
    let shifted = t - DMatrix::<Complex64>::identity(dim, dim) * shift;
    let lu = shifted.lu();
    let mut v = nalgebra::DVector::<Complex64>::from_fn(dim, |i, _| {
        Complex64::new(1.0 + (i as f64) * 0.381966, 0.618034 - (i as f64) * 0.1)
    });
    v /= Complex64::new(v.norm(), 0.0);
    for _ in 0..3 {
        let solved = lu
            .solve(&v)
            .ok_or_else(|| Error::NoConvergence("singular shift in inverse iteration".to_string()))?;
        let norm = solved.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NoConvergence("inverse iteration produced a degenerate vector".to_string()));
        }
        v = solved / Complex64::new(norm, 0.0);
    }
    Ok(v)
}

/// A few Newton steps on the gradient system to sharpen a critical point.
fn newton_polish(
    mut point: Vec<Complex64>,
    grads: &[Polynomial],
    hess_rows: &[Vec<Polynomial>],
) -> Result<Vec<Complex64>> {
    let n = point.len();
    for _ in 0..3 {
        let g = nalgebra::DVector::from_iterator(n, grads.iter().map(|p| eval_complex(p, &point)));
        if g.norm() < 1e-14 {
            break;
        }
        let h = DMatrix::from_fn(n, n, |i, j| eval_complex(&hess_rows[i][j], &point));
        let Some(step) = h.lu().solve(&g) else { break };
        for i in 0..n {
            point[i] -= step[i];
        }
    }
    Ok(point)
}

fn eval_monomial(m: &Monomial, point: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (i, &e) in m.0.iter().enumerate() {
        acc *= point[i].powu(e);
    }
    acc
}

fn eval_complex(p: &Polynomial, point: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::zero();
    for (m, c) in p.terms() {
        acc += eval_monomial(m, point) * rat_to_f64(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::milnor_algebra;
    use crate::parse::parse_polynomial;
    use crate::poly::{varset, MonomialOrder};
    use crate::rat::{rat, rat_int};
    use crate::residue::gram_matrix;

    fn algebra(text: &str, vars: &[&str]) -> MilnorAlgebra {
        let vs = varset(vars.to_vec());
        let f = parse_polynomial(text, &vs).unwrap();
        milnor_algebra(&f, MonomialOrder::Grevlex).unwrap()
    }

    fn max_error(a: &MilnorAlgebra, s: &[Rat]) -> f64 {
        let r = gram_matrix(a).unwrap();
        let oracle = morse_oracle(a, s, None).unwrap();
        let mut err = 0.0f64;
        for i in 0..a.mu {
            for j in 0..a.mu {
                err = err.max((oracle[i][j] - rat_to_f64(&r.gram[(i, j)])).abs());
            }
        }
        err
    }

    #[test]
    fn unperturbed_morse_point() {
        let a = algebra("x^2", &["x"]);
        let oracle = morse_oracle(&a, &[rat_int(0)], None).unwrap();
        assert!((oracle[0][0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cubic_matches_gram() {
        let a = algebra("x^3", &["x"]);
        let err = max_error(&a, &[rat(1, 1000)]);
        assert!(err < 1e-6, "error {err}");
    }

    #[test]
    fn cusp_quartic_matches_gram() {
        let a = algebra("x^3 + y^4", &["x", "y"]);
        let err = max_error(&a, &[rat(1, 1000), rat(1, 500)]);
        assert!(err < 1e-6, "error {err}");
    }

    #[test]
    fn pair_selection() {
        let a = algebra("x^3", &["x"]);
        let got = morse_oracle_pairs(&a, &[rat(1, 1000)], &[(0, 1)], None).unwrap();
        assert_eq!(got[0].0, (0, 1));
        assert!((got[0].1 - 1.0 / 3.0).abs() < 1e-9);
    }
}
