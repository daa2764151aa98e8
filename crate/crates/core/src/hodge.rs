//! Spectrum, Hodge bigrading, conjugation, and sign operators for
//! quasi-homogeneous germs.
//!
//! Each basis monomial carries the form level l = sum w_i (a_i + 1). The
//! exponent beta = l - 1 determines the monodromy eigenvalue exp(-2 pi i l)
//! and the Hodge indices: p = ceil(beta) with q = n - p off the integers,
//! and p = n - beta with q = n + 1 - p on them, the integral classes making
//! up the unipotent part of weight n + 1.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::milnor::{MilnorAlgebra, QhWeights};
use crate::poly::Monomial;
use crate::rat::{rat_ceil_int, rat_frac, rat_int, rat_is_integer, Rat};

/// Per-basis-monomial spectral data, sorted ascending by level.
#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
    /// Fiber dimension n (one less than the number of variables).
    pub fiber_dim: usize,
}

#[derive(Debug, Clone)]
pub struct SpectrumRow {
    pub monomial: Monomial,
    /// Form level l.
    pub level: Rat,
    /// Spectral number l - 1.
    pub beta: Rat,
    /// The class's monodromy eigenvalue is exp(-2 pi i t) for this t in [0,1).
    pub eigenvalue_exponent: Rat,
    pub unipotent: bool,
}

/// Hodge indices per basis class, parallel to the spectrum rows.
#[derive(Debug, Clone)]
pub struct HodgeGrading {
    pub entries: Vec<HodgeEntry>,
    pub fiber_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HodgeEntry {
    pub p: i64,
    pub q: i64,
    pub weight: i64,
    pub unipotent: bool,
}

/// Index involution realizing the real structure on basis classes;
/// all conjugation coefficients are 1.
#[derive(Debug, Clone)]
pub struct Conjugation {
    pub kappa: Vec<usize>,
}

/// Diagonal sign data attached to the bigrading.
#[derive(Debug, Clone)]
pub struct WeilSigns {
    /// Sign (-1)^p per basis class.
    pub ctilde: Vec<i64>,
    /// Exponent (p - q) mod 4 of the i-power tag per basis class.
    pub weil_exponent: Vec<u8>,
}

/// Spectrum of a quasi-homogeneous algebra; requires detected weights.
pub fn spectrum(a: &MilnorAlgebra) -> Result<SpectrumTable> {
    let Some(QhWeights(w)) = &a.weights else {
        return Err(Error::NotQuasiHomogeneous);
    };
    let n = a.fiber_dimension();
    let one = Rat::one();
    let rows: Vec<SpectrumRow> = a
        .basis
        .iter()
        .map(|m| {
            let level = m.form_level(w);
            let beta = &level - &one;
            SpectrumRow {
                monomial: m.clone(),
                eigenvalue_exponent: rat_frac(&level),
                unipotent: rat_is_integer(&beta),
                level,
                beta,
            }
        })
        .collect();
    debug_assert!(rows.windows(2).all(|p| p[0].level <= p[1].level), "basis sorted by level");
    debug_assert!(rows.iter().all(|r| r.beta > rat_int(-1) && r.beta < rat_int(n as i64)));
    Ok(SpectrumTable { rows, fiber_dim: n })
}

/// Hodge indices from the spectrum.
pub fn hodge_bigrading(s: &SpectrumTable) -> HodgeGrading {
    let n = s.fiber_dim as i64;
    let entries = s
        .rows
        .iter()
        .map(|row| {
            if row.unipotent {
                let beta = num_traits::ToPrimitive::to_i64(&row.beta.to_integer())
                    .expect("spectral numbers are small");
                let p = n - beta;
                let q = n + 1 - p;
                HodgeEntry { p, q, weight: n + 1, unipotent: true }
            } else {
                let p = rat_ceil_int(&row.beta);
                let q = n - p;
                HodgeEntry { p, q, weight: n, unipotent: false }
            }
        })
        .collect();
    HodgeGrading { entries, fiber_dim: s.fiber_dim }
}

/// Level-reversing index involution. Errors when the level multiset is not
/// symmetric about (n+1)/2, which signals an upstream bug.
pub fn conjugation_map(s: &SpectrumTable) -> Result<Conjugation> {
    let mu = s.rows.len();
    let target: Rat = rat_int(s.fiber_dim as i64 + 1);
    for i in 0..mu {
        let sum = &s.rows[i].level + &s.rows[mu - 1 - i].level;
        if sum != target {
            return Err(Error::AsymmetricSpectrum);
        }
    }
    Ok(Conjugation { kappa: (0..mu).map(|i| mu - 1 - i).collect() })
}

/// Diagonal sign operators read off the bigrading.
pub fn weil_signs(h: &HodgeGrading) -> WeilSigns {
    let ctilde = h.entries.iter().map(|e| if e.p % 2 == 0 { 1 } else { -1 }).collect();
    let weil_exponent = h.entries.iter().map(|e| (e.p - e.q).rem_euclid(4) as u8).collect();
    WeilSigns { ctilde, weil_exponent }
}

/// Check that the span filtration F^p (classes with index >= p) and the
/// increasing span filtration U_q (classes with index <= q) decompose the
/// whole space at every p: dim F^p + dim U_{p-1} = mu with zero overlap.
pub fn opposite_filtration_check(h: &HodgeGrading) -> bool {
    let mu = h.entries.len();
    if mu == 0 {
        return true;
    }
    let ps: Vec<i64> = h.entries.iter().map(|e| e.p).collect();
    let min_p = *ps.iter().min().unwrap();
    let max_p = *ps.iter().max().unwrap();
    for p in min_p..=(max_p + 1) {
        let f_cols: Vec<Vec<Rat>> = (0..mu)
            .filter(|&i| ps[i] >= p)
            .map(|i| unit_vector(mu, i))
            .collect();
        let u_cols: Vec<Vec<Rat>> = (0..mu)
            .filter(|&i| ps[i] <= p - 1)
            .map(|i| unit_vector(mu, i))
            .collect();
        if f_cols.len() + u_cols.len() != mu {
            return false;
        }
        let mut all = f_cols.clone();
        all.extend(u_cols.clone());
        let stacked = RatMatrix::from_columns(&all);
        // Full rank of the union certifies trivial intersection.
        if stacked.rank() != mu {
            return false;
        }
    }
    true
}

fn unit_vector(len: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); len];
    v[i] = Rat::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::milnor_algebra;
    use crate::parse::parse_polynomial;
    use crate::poly::{varset, MonomialOrder};
    use crate::rat::rat;

    fn table(text: &str, vars: &[&str]) -> SpectrumTable {
        let vs = varset(vars.to_vec());
        let f = parse_polynomial(text, &vs).unwrap();
        let a = milnor_algebra(&f, MonomialOrder::Grevlex).unwrap();
        spectrum(&a).unwrap()
    }

    #[test]
    fn cusp_quartic_levels() {
        let s = table("x^3 + y^4", &["x", "y"]);
        let levels: Vec<Rat> = s.rows.iter().map(|r| r.level.clone()).collect();
        let expected: Vec<Rat> =
            [(7, 12), (10, 12), (11, 12), (13, 12), (14, 12), (17, 12)]
                .into_iter()
                .map(|(p, q)| rat(p, q))
                .collect();
        assert_eq!(levels, expected);
        assert!(s.rows.iter().all(|r| !r.unipotent));
    }

    #[test]
    fn morse_point_spectrum() {
        let s = table("x^2 + y^2", &["x", "y"]);
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.rows[0].level, rat_int(1));
        assert!(s.rows[0].beta.is_zero());
        assert!(s.rows[0].unipotent);
    }

    #[test]
    fn three_cubes_levels() {
        let s = table("x^3 + y^3 + z^3", &["x", "y", "z"]);
        let levels: Vec<Rat> = s.rows.iter().map(|r| r.level.clone()).collect();
        let mut expected = vec![rat_int(1)];
        expected.extend(std::iter::repeat(rat(4, 3)).take(3));
        expected.extend(std::iter::repeat(rat(5, 3)).take(3));
        expected.push(rat_int(2));
        assert_eq!(levels, expected);
    }

    #[test]
    fn non_qh_germ_is_rejected() {
        let vs = varset(vec!["x", "y"]);
        let f = parse_polynomial("x^2*y^2 + x^5 + y^5", &vs).unwrap();
        let a = milnor_algebra(&f, MonomialOrder::Grevlex).unwrap();
        assert!(matches!(spectrum(&a), Err(Error::NotQuasiHomogeneous)));
    }

    #[test]
    fn cusp_quartic_bigrading() {
        let s = table("x^3 + y^4", &["x", "y"]);
        let h = hodge_bigrading(&s);
        let pq: Vec<(i64, i64)> = h.entries.iter().map(|e| (e.p, e.q)).collect();
        assert_eq!(pq, vec![(0, 1), (0, 1), (0, 1), (1, 0), (1, 0), (1, 0)]);
        assert!(h.entries.iter().all(|e| e.weight == 1));
    }

    #[test]
    fn integer_beta_rule() {
        let s = table("x^2 + y^2", &["x", "y"]);
        let h = hodge_bigrading(&s);
        assert_eq!((h.entries[0].p, h.entries[0].q), (1, 1));
        assert_eq!(h.entries[0].weight, 2);
    }

    #[test]
    fn three_cubes_bigrading() {
        let s = table("x^3 + y^3 + z^3", &["x", "y", "z"]);
        let h = hodge_bigrading(&s);
        assert_eq!((h.entries[0].p, h.entries[0].q), (2, 1)); // beta = 0
        assert_eq!((h.entries[1].p, h.entries[1].q), (1, 1)); // beta = 1/3
        assert_eq!((h.entries[7].p, h.entries[7].q), (1, 2)); // beta = 1
        let h11 = h.entries.iter().filter(|e| (e.p, e.q) == (1, 1)).count();
        assert_eq!(h11, 6);
    }

    #[test]
    fn conjugation_reverses_the_basis() {
        let s = table("x^3 + y^4", &["x", "y"]);
        let k = conjugation_map(&s).unwrap();
        assert_eq!(k.kappa, vec![5, 4, 3, 2, 1, 0]);
        // Class of 1 pairs with the socle class x*y^2.
        assert_eq!(s.rows[k.kappa[0]].monomial, crate::poly::Monomial(vec![1, 2]));
        let single = table("x^2 + y^2", &["x", "y"]);
        assert_eq!(conjugation_map(&single).unwrap().kappa, vec![0]);
    }

    #[test]
    fn conjugation_is_an_involution_pairing_levels() {
        for (text, vars) in [
            ("x^3 + y^4", vec!["x", "y"]),
            ("x^3 + y^3 + z^3", vec!["x", "y", "z"]),
            ("x^3 + x*y^3", vec!["x", "y"]),
        ] {
            let s = table(text, &vars);
            let k = conjugation_map(&s).unwrap();
            let n1 = rat_int(s.fiber_dim as i64 + 1);
            for (i, &ki) in k.kappa.iter().enumerate() {
                assert_eq!(k.kappa[ki], i);
                assert_eq!(&s.rows[i].level + &s.rows[ki].level, n1);
            }
        }
    }

    #[test]
    fn weil_sign_values() {
        let s = table("x^3 + y^4", &["x", "y"]);
        let h = hodge_bigrading(&s);
        let w = weil_signs(&h);
        assert_eq!(w.ctilde, vec![1, 1, 1, -1, -1, -1]);
        assert_eq!(w.weil_exponent, vec![3, 3, 3, 1, 1, 1]);
        let s2 = table("x^2 + y^2", &["x", "y"]);
        let w2 = weil_signs(&hodge_bigrading(&s2));
        assert_eq!(w2.ctilde, vec![-1]);
        assert_eq!(w2.weil_exponent, vec![0]);
    }

    #[test]
    fn opposite_filtrations_split() {
        for (text, vars) in [
            ("x^3 + y^4", vec!["x", "y"]),
            ("x^3 + y^3 + z^3", vec!["x", "y", "z"]),
            ("x^2 + y^2", vec!["x", "y"]),
        ] {
            let s = table(text, &vars);
            let h = hodge_bigrading(&s);
            assert!(opposite_filtration_check(&h), "germ {text}");
        }
    }

    #[test]
    fn spectrum_symmetry() {
        for (text, vars) in [
            ("x^3 + y^4", vec!["x", "y"]),
            ("x^3 + x*y^3", vec!["x", "y"]),
            ("x^5 + y^2 + z^2", vec!["x", "y", "z"]),
        ] {
            let s = table(text, &vars);
            let n1 = rat_int(s.fiber_dim as i64 - 1);
            let mut betas: Vec<Rat> = s.rows.iter().map(|r| r.beta.clone()).collect();
            let mut mirrored: Vec<Rat> = betas.iter().map(|b| &n1 - b).collect();
            betas.sort();
            mirrored.sort();
            assert_eq!(betas, mirrored, "germ {text}");
        }
    }
}
