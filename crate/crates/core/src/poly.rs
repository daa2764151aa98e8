//! Exact multivariate polynomials, monomial orders, and calculus helpers.
//!
//! A polynomial is a finite map from exponent vectors to nonzero rational
//! coefficients together with its ambient ordered variable list. Zero
//! coefficients are never stored, so structural equality is semantic equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::rat::{rat_int, rat_to_string, Rat};

/// Shared ordered variable list of an ambient polynomial ring.
pub type VarSet = Arc<Vec<String>>;

pub fn varset<S: Into<String>>(names: Vec<S>) -> VarSet {
    Arc::new(names.into_iter().map(Into::into).collect())
}

/// Exponent vector; slot i is the power of variable i.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Weighted degree sum_i w_i * e_i.
    pub fn weighted_degree(&self, weights: &[Rat]) -> Rat {
        debug_assert_eq!(weights.len(), self.0.len());
        let mut acc = Rat::zero();
        for (e, w) in self.0.iter().zip(weights) {
            if *e > 0 {
                acc += w * rat_int(*e as i64);
            }
        }
        acc
    }

    /// Weighted degree of the associated top form: sum_i w_i * (e_i + 1).
    pub fn form_level(&self, weights: &[Rat]) -> Rat {
        debug_assert_eq!(weights.len(), self.0.len());
        let mut acc = Rat::zero();
        for (e, w) in self.0.iter().zip(weights) {
            acc += w * rat_int(*e as i64 + 1);
        }
        acc
    }

    pub fn render(&self, vars: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 1 {
                parts.push(vars[i].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", vars[i], e));
            }
        }
        parts.join("*")
    }
}

/// Supported monomial order kinds. Both are global well-orders compatible
/// with multiplication; the variable priority is the ambient list order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Graded reverse lexicographic (the default).
    Grevlex,
    /// Pure lexicographic.
    Lex,
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::Grevlex
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Grevlex => write!(f, "grevlex"),
            MonomialOrder::Lex => write!(f, "lex"),
        }
    }
}

impl MonomialOrder {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "grevlex" => Some(MonomialOrder::Grevlex),
            "lex" => Some(MonomialOrder::Lex),
            _ => None,
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.0.len(), b.0.len());
        match self {
            MonomialOrder::Lex => {
                for (x, y) in a.0.iter().zip(&b.0) {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Grevlex => {
                match a.total_degree().cmp(&b.total_degree()) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                // Equal degree: the monomial whose last nonzero entry of a-b
                // is negative is the larger one.
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Exact multivariate polynomial over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(vars: VarSet) -> Self {
        Polynomial { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: VarSet, c: Rat) -> Self {
        let mut p = Polynomial::zero(vars);
        if !c.is_zero() {
            let one = Monomial::one(p.nvars());
            p.terms.insert(one, c);
        }
        p
    }

    pub fn variable(vars: VarSet, i: usize) -> Self {
        let n = vars.len();
        let mut p = Polynomial::zero(vars);
        p.terms.insert(Monomial::var(n, i), Rat::one());
        p
    }

    pub fn monomial(vars: VarSet, m: Monomial, c: Rat) -> Self {
        let mut p = Polynomial::zero(vars);
        if !c.is_zero() {
            debug_assert_eq!(m.nvars(), p.nvars());
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(vars: VarSet, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Polynomial::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_part(&self) -> Rat {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// True when the variable at `i` occurs in some term.
    pub fn uses_variable(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.vars.clone());
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c;
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.vars, other.vars);
        let mut out = Polynomial::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Polynomial {
        let mut out = Polynomial::zero(self.vars.clone());
        if c.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            out.add_term(ma.mul(m), ca * c);
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(self.vars.clone(), Rat::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact formal partial derivative in variable `i`.
    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        assert!(i < self.nvars(), "variable index out of range");
        let mut out = Polynomial::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut me = m.clone();
                me.0[i] = e - 1;
                out.add_term(me, c * rat_int(e as i64));
            }
        }
        out
    }

    /// Leading term under `ord`, if any.
    pub fn leading_term(&self, ord: MonomialOrder) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    /// Terms sorted descending under `ord`.
    pub fn sorted_terms(&self, ord: MonomialOrder) -> Vec<(&Monomial, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    /// Move this polynomial into the ring `target`, sending the variable in
    /// slot i to slot `slot_map[i]` of the target ring.
    pub fn relabel(&self, target: VarSet, slot_map: &[usize]) -> Polynomial {
        debug_assert_eq!(slot_map.len(), self.nvars());
        let n = target.len();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; n];
            for (i, &exp) in m.0.iter().enumerate() {
                e[slot_map[i]] += exp;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Evaluate at a point given per-variable, exactly.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        debug_assert_eq!(point.len(), self.nvars());
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Divide exactly by (v_a - v_b), both plain variables of this ring.
    /// Returns None when the division leaves a remainder.
    pub fn div_exact_var_difference(&self, a: usize, b: usize) -> Option<Polynomial> {
        // Collect coefficients of powers of v_a; each coefficient lives in
        // the same ring with slot a zeroed.
        let mut by_deg: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.0[a];
            let mut me = m.clone();
            me.0[a] = 0;
            by_deg
                .entry(d)
                .or_insert_with(|| Polynomial::zero(self.vars.clone()))
                .add_term(me, c.clone());
        }
        let dmax = *by_deg.keys().last().unwrap_or(&0);
        if dmax == 0 {
            return if self.is_zero() { Some(Polynomial::zero(self.vars.clone())) } else { None };
        }
        let zero = Polynomial::zero(self.vars.clone());
        let vb = Monomial::var(self.nvars(), b);
        let one = Rat::one();
        // Synthetic division: q_{k-1} = p_k + v_b * q_k, remainder p_0 + v_b * q_0.
        let mut quotient = Polynomial::zero(self.vars.clone());
        let mut carry = zero.clone();
        for k in (1..=dmax).rev() {
            let pk = by_deg.get(&k).unwrap_or(&zero);
            carry = pk.add(&carry.mul_term(&vb, &one));
            let mut shifted = Polynomial::zero(self.vars.clone());
            for (m, c) in carry.terms() {
                let mut me = m.clone();
                me.0[a] += k - 1;
                shifted.add_term(me, c.clone());
            }
            quotient = quotient.add(&shifted);
        }
        let remainder = by_deg.get(&0).unwrap_or(&zero).add(&carry.mul_term(&vb, &one));
        if remainder.is_zero() {
            Some(quotient)
        } else {
            None
        }
    }

    /// Canonical text form: terms descending in grevlex, coefficient 1 elided,
    /// negative coefficients rendered as subtraction.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.sorted_terms(MonomialOrder::Grevlex).into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_is_one = abs.is_one();
            if m.is_one() {
                out.push_str(&rat_to_string(&abs));
            } else if coeff_is_one {
                out.push_str(&m.render(&self.vars));
            } else {
                out.push_str(&rat_to_string(&abs));
                out.push('*');
                out.push_str(&m.render(&self.vars));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Weighted degree of a monomial under strictly positive weights.
pub fn weighted_degree(m: &Monomial, weights: &[Rat]) -> Rat {
    m.weighted_degree(weights)
}

/// Determinant of the matrix of second partials, expanded exactly.
pub fn hessian_determinant(f: &Polynomial) -> Polynomial {
    let n = f.nvars();
    let mut entries = Vec::with_capacity(n);
    let firsts: Vec<Polynomial> = (0..n).map(|i| f.partial_derivative(i)).collect();
    for fi in &firsts {
        let row: Vec<Polynomial> = (0..n).map(|j| fi.partial_derivative(j)).collect();
        entries.push(row);
    }
    poly_matrix_determinant(&entries, f.vars().clone())
}

/// Determinant of a square polynomial matrix by cofactor expansion.
pub fn poly_matrix_determinant(m: &[Vec<Polynomial>], vars: VarSet) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::constant(vars, Rat::one());
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    det_rec(m, &(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>(), &vars)
}

fn det_rec(m: &[Vec<Polynomial>], rows: &[usize], cols: &[usize], vars: &VarSet) -> Polynomial {
    let k = rows.len();
    if k == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    let mut acc = Polynomial::zero(vars.clone());
    let sub_rows: Vec<usize> = rows[1..].to_vec();
    for (j, &c) in cols.iter().enumerate() {
        let entry = &m[rows[0]][c];
        if entry.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = cols.iter().enumerate().filter(|(jj, _)| *jj != j).map(|(_, &cc)| cc).collect();
        let minor = det_rec(m, &sub_rows, &sub_cols, vars);
        let signed = if j % 2 == 0 { entry.mul(&minor) } else { entry.neg().mul(&minor) };
        acc = acc.add(&signed);
    }
    acc
}
