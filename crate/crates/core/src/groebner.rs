//! Buchberger's algorithm, normal forms, and standard monomial bases of
//! zero-dimensional quotients.
//!
//! Pairs are processed in (lcm degree, first index, second index) order with
//! the coprimality and chain criteria, and the final basis is interreduced
//! and made monic, so the output is deterministic for a fixed generator
//! sequence and order.

use std::collections::BTreeSet;

use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Polynomial, VarSet};
use crate::rat::Rat;

/// Generator list of an ideal in an ambient ring.
#[derive(Debug, Clone)]
pub struct Ideal {
    pub gens: Vec<Polynomial>,
    pub vars: VarSet,
}

impl Ideal {
    /// Keeps only nonzero generators.
    pub fn new(vars: VarSet, gens: Vec<Polynomial>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { gens, vars }
    }
}

/// Reduced Groebner basis: monic elements, no leading monomial divides any
/// term of another element, sorted ascending by leading monomial.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub polys: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub leading: Vec<Monomial>,
    pub vars: VarSet,
}

impl GroebnerBasis {
    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }
}

/// Compute the reduced Groebner basis of `ideal` under `ord`.
pub fn buchberger(ideal: &Ideal, ord: MonomialOrder) -> GroebnerBasis {
    let vars = ideal.vars.clone();
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in &ideal.gens {
        if !g.is_zero() {
            basis.push(make_monic(g, ord));
        }
    }

    // Pair queue keyed by (lcm total degree, i, j); processed set feeds the
    // chain criterion.
    let mut queue: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let enqueue_pairs = |queue: &mut BTreeSet<(u32, usize, usize)>, basis: &[Polynomial], new_idx: usize| {
        let lm_new = basis[new_idx].leading_term(ord).unwrap().0.clone();
        for i in 0..new_idx {
            let lm_i = basis[i].leading_term(ord).unwrap().0;
            let lcm = lm_i.lcm(&lm_new);
            queue.insert((lcm.total_degree(), i, new_idx));
        }
    };
    for idx in 0..basis.len() {
        enqueue_pairs(&mut queue, &basis, idx);
    }
    let mut processed: BTreeSet<(usize, usize)> = BTreeSet::new();

    while let Some(&(deg, i, j)) = queue.iter().next() {
        queue.remove(&(deg, i, j));
        processed.insert((i, j));
        let lm_i = basis[i].leading_term(ord).unwrap().0.clone();
        let lm_j = basis[j].leading_term(ord).unwrap().0.clone();
        // First criterion: coprime leading monomials reduce to zero.
        if lm_i.coprime(&lm_j) {
            continue;
        }
        // Chain criterion: some k whose leading monomial divides the lcm and
        // whose pairs with i and j are both settled.
        let lcm = lm_i.lcm(&lm_j);
        let mut skip = false;
        for k in 0..basis.len() {
            if k == i || k == j {
                continue;
            }
            let lm_k = basis[k].leading_term(ord).unwrap().0;
            if !lm_k.divides(&lcm) {
                continue;
            }
            let pair_ik = (i.min(k), i.max(k));
            let pair_jk = (j.min(k), j.max(k));
            if processed.contains(&pair_ik) && processed.contains(&pair_jk) {
                skip = true;
                break;
            }
        }
        if skip {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], ord);
        let reduced = reduce_full(&s, &basis, ord);
        if !reduced.is_zero() {
            basis.push(make_monic(&reduced, ord));
            enqueue_pairs(&mut queue, &basis, basis.len() - 1);
        }
    }

    // Interreduce: drop elements whose leading monomial is divisible by
    // another element's, then reduce every tail modulo the rest.
    let mut keep: Vec<Polynomial> = Vec::new();
    'outer: for (idx, g) in basis.iter().enumerate() {
        let lm = g.leading_term(ord).unwrap().0;
        for (jdx, h) in basis.iter().enumerate() {
            if idx == jdx {
                continue;
            }
            let lm_h = h.leading_term(ord).unwrap().0;
            if lm_h.divides(lm) && (lm_h != lm || jdx < idx) {
                continue 'outer;
            }
        }
        keep.push(g.clone());
    }
    let mut reduced_basis = Vec::with_capacity(keep.len());
    for idx in 0..keep.len() {
        let others: Vec<Polynomial> =
            keep.iter().enumerate().filter(|(j, _)| *j != idx).map(|(_, p)| p.clone()).collect();
        let r = reduce_full(&keep[idx], &others, ord);
        debug_assert!(!r.is_zero(), "basis element reduced to zero during interreduction");
        reduced_basis.push(make_monic(&r, ord));
    }
    reduced_basis.sort_by(|a, b| {
        let la = a.leading_term(ord).unwrap().0;
        let lb = b.leading_term(ord).unwrap().0;
        ord.cmp(la, lb)
    });
    let leading = reduced_basis.iter().map(|p| p.leading_term(ord).unwrap().0.clone()).collect();
    GroebnerBasis { polys: reduced_basis, order: ord, leading, vars }
}

fn make_monic(p: &Polynomial, ord: MonomialOrder) -> Polynomial {
    let lc = p.leading_term(ord).expect("nonzero").1.clone();
    if lc.is_one() {
        p.clone()
    } else {
        p.scale(&lc.recip())
    }
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, ord: MonomialOrder) -> Polynomial {
    let (lm_f, lc_f) = f.leading_term(ord).unwrap();
    let (lm_g, lc_g) = g.leading_term(ord).unwrap();
    let lcm = lm_f.lcm(lm_g);
    let mf = lm_f.div_into(&lcm);
    let mg = lm_g.div_into(&lcm);
    let a = f.mul_term(&mf, &lc_f.recip());
    let b = g.mul_term(&mg, &lc_g.recip());
    a.sub(&b)
}

/// Full reduction of `p` modulo `reducers`: repeatedly rewrites the largest
/// reducible term, always using the first applicable reducer.
fn reduce_full(p: &Polynomial, reducers: &[Polynomial], ord: MonomialOrder) -> Polynomial {
    let mut rem = Polynomial::zero(p.vars().clone());
    let mut work = p.clone();
    'next: while let Some((lm, lc)) = work.leading_term(ord).map(|(m, c)| (m.clone(), c.clone())) {
        for g in reducers {
            let (lm_g, lc_g) = g.leading_term(ord).unwrap();
            if lm_g.divides(&lm) {
                let quot_m = lm_g.div_into(&lm);
                let quot_c = &lc / lc_g;
                work = work.sub(&g.mul_term(&quot_m, &quot_c));
                continue 'next;
            }
        }
        // Leading term irreducible: move it to the remainder.
        rem.add_term(lm.clone(), lc.clone());
        let single = Polynomial::monomial(work.vars().clone(), lm, lc);
        work = work.sub(&single);
    }
    rem
}

/// Unique remainder of `p` modulo the reduced basis `g`.
pub fn normal_form(p: &Polynomial, g: &GroebnerBasis) -> Polynomial {
    reduce_full(p, &g.polys, g.order)
}

/// All monomials outside the leading ideal, sorted ascending under the basis
/// order. Errors when some variable has no pure power among the leading
/// monomials, which makes the staircase infinite.
pub fn quotient_basis(g: &GroebnerBasis) -> Result<Vec<Monomial>> {
    let n = g.vars.len();
    let mut bound = vec![0u32; n];
    for i in 0..n {
        let mut best: Option<u32> = None;
        for lm in &g.leading {
            if lm.0.iter().enumerate().all(|(j, &e)| j == i || e == 0) {
                let e = lm.0[i];
                best = Some(best.map_or(e, |b| b.min(e)));
            }
        }
        match best {
            Some(e) => bound[i] = e,
            None => return Err(Error::NotZeroDimensional(g.vars[i].clone())),
        }
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    loop {
        let m = Monomial(current.clone());
        if !g.leading.iter().any(|lm| lm.divides(&m)) {
            out.push(m);
        }
        // Odometer over the box below the pure-power bounds.
        let mut i = 0;
        loop {
            if i == n {
                out.sort_by(|a, b| g.order.cmp(a, b));
                return Ok(out);
            }
            current[i] += 1;
            if current[i] < bound[i] {
                break;
            }
            current[i] = 0;
            i += 1;
        }
    }
}

/// True when every variable acts nilpotently on the quotient, which pins
/// the whole critical locus of the generators at the origin.
pub fn variable_nilpotency_check(g: &GroebnerBasis) -> Result<bool> {
    let basis = quotient_basis(g)?;
    let n = g.vars.len();
    for i in 0..n {
        let m = multiplication_matrix_on(g, &basis, i);
        if !is_nilpotent(&m) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Matrix of multiplication by variable `i` on the span of `basis`.
pub(crate) fn multiplication_matrix_on(
    g: &GroebnerBasis,
    basis: &[Monomial],
    var: usize,
) -> crate::matrix::RatMatrix {
    use crate::matrix::RatMatrix;
    let mu = basis.len();
    let index: std::collections::BTreeMap<&Monomial, usize> =
        basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut out = RatMatrix::zero(mu, mu);
    let xi = Monomial::var(g.vars.len(), var);
    for (b, mono) in basis.iter().enumerate() {
        let prod = Polynomial::monomial(g.vars.clone(), mono.mul(&xi), Rat::one());
        let nf = normal_form(&prod, g);
        for (m, c) in nf.terms() {
            let row = *index.get(m).expect("normal form stays within the quotient basis");
            out[(row, b)] = c.clone();
        }
    }
    out
}

pub(crate) fn is_nilpotent(m: &crate::matrix::RatMatrix) -> bool {
    let dim = m.nrows();
    if dim == 0 {
        return true;
    }
    let mut p = m.clone();
    let mut e = 1usize;
    while e < dim {
        p = p.mul(&p);
        e *= 2;
    }
    p.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::varset;

    fn gb(texts: &[&str], vars: &[&str], ord: MonomialOrder) -> GroebnerBasis {
        let vs = varset(vars.to_vec());
        let gens = texts.iter().map(|t| parse_polynomial(t, &vs).unwrap()).collect();
        buchberger(&Ideal::new(vs, gens), ord)
    }

    #[test]
    fn monic_normalization() {
        let g = gb(&["2*x"], &["x"], MonomialOrder::Grevlex);
        assert_eq!(g.polys.len(), 1);
        assert_eq!(g.polys[0].render(), "x");
    }

    #[test]
    fn monomial_ideal_stays_put() {
        let g = gb(&["3*x^2", "4*y^3"], &["x", "y"], MonomialOrder::Grevlex);
        let rendered: Vec<String> = g.polys.iter().map(|p| p.render()).collect();
        assert_eq!(rendered, vec!["x^2", "y^3"]);
    }

    #[test]
    fn hand_checked_pair() {
        let g = gb(&["x - y", "y^2"], &["x", "y"], MonomialOrder::Grevlex);
        let rendered: Vec<String> = g.polys.iter().map(|p| p.render()).collect();
        assert_eq!(rendered, vec!["x - y", "y^2"]);
    }

    #[test]
    fn normal_form_examples() {
        let vs = varset(vec!["x", "y"]);
        let g = gb(&["3*x^2", "4*y^3"], &["x", "y"], MonomialOrder::Grevlex);
        let nf = |t: &str| normal_form(&parse_polynomial(t, &vs).unwrap(), &g).render();
        assert_eq!(nf("x^2"), "0");
        assert_eq!(nf("x*y^2"), "x*y^2");
        assert_eq!(nf("y^3 + y"), "y");
    }

    #[test]
    fn quotient_basis_of_cusp_times_quartic() {
        let g = gb(&["3*x^2", "4*y^3"], &["x", "y"], MonomialOrder::Grevlex);
        let basis = quotient_basis(&g).unwrap();
        let names: Vec<String> = basis.iter().map(|m| m.render(&["x".into(), "y".into()])).collect();
        assert_eq!(names, vec!["1", "y", "x", "y^2", "x*y", "x*y^2"]);
    }

    #[test]
    fn one_dimensional_quotient() {
        let g = gb(&["2*x", "2*y"], &["x", "y"], MonomialOrder::Grevlex);
        let basis = quotient_basis(&g).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].is_one());
    }

    #[test]
    fn infinite_staircase_detected() {
        let g = gb(&["2*x"], &["x", "y"], MonomialOrder::Grevlex);
        assert!(matches!(quotient_basis(&g), Err(Error::NotZeroDimensional(v)) if v == "y"));
    }

    #[test]
    fn nilpotency_check_examples() {
        let g = gb(&["3*x^2", "4*y^3"], &["x", "y"], MonomialOrder::Grevlex);
        assert!(variable_nilpotency_check(&g).unwrap());
        // Critical point away from the origin: x is invertible-ish on the quotient.
        let g2 = gb(&["2*x - 1"], &["x"], MonomialOrder::Grevlex);
        assert!(!variable_nilpotency_check(&g2).unwrap());
    }

    #[test]
    fn dimension_is_order_independent() {
        for gens in [vec!["3*x^2", "4*y^3"], vec!["2*x*y^2 + 5*x^4", "2*x^2*y + 5*y^4"]] {
            let a = gb(&gens, &["x", "y"], MonomialOrder::Grevlex);
            let b = gb(&gens, &["x", "y"], MonomialOrder::Lex);
            assert_eq!(quotient_basis(&a).unwrap().len(), quotient_basis(&b).unwrap().len());
        }
    }
}
