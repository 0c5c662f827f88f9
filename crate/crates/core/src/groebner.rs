//! Gröbner-basis route to the solution-space dimension.
//!
//! The unfolded system is encoded as an ideal in the polynomial ring
//! Q[t1, tm, x0, ..., x_{H-1}] (tm plays the role of t^-1):
//!
//! - the relation t1*tm - 1,
//! - the H linear forms, the rows of (A0 + t1*A1) * (x0, ..., x_{H-1})^T,
//! - all products x_i * x_j.
//!
//! The sought dimension is the number of monomials divisible by some x_i but
//! by no leading monomial of a Gröbner basis of the ideal. All generators
//! are homogeneous in total x-degree, so every basis element is too; the
//! relevant standard monomials therefore have x-degree exactly one and a
//! pure t-part (anything containing t1*tm is already non-standard). Per
//! variable x_i that leaves the two ladders t1^k * x_i and tm^m * x_i, and
//! the count reduces to locating the first rung of each ladder inside the
//! leading-term ideal.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::pencil::Dimension;
use crate::rat::Rat;
use crate::unfold::UnfoldedSystem;

/// Variable indices: 0 is t1, 1 is tm, 2 + i is x_i.
const VAR_T1: usize = 0;
const VAR_TM: usize = 1;

fn var_x(i: usize) -> usize {
    2 + i
}

/// A power product of the H + 2 variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[v] = 1;
        m
    }

    pub fn exp(&self, v: usize) -> u32 {
        self.exps[v]
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Total degree in the x variables only.
    pub fn x_degree(&self) -> u32 {
        self.exps[2..].iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Quotient, assuming divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn is_coprime_with(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Graded reverse lexicographic order with t1 > tm > x_0 > ... > x_{H-1}.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (da, db) = (self.total_degree(), other.total_degree());
        if da != db {
            return da.cmp(&db);
        }
        for i in (0..self.exps.len()).rev() {
            if self.exps[i] != other.exps[i] {
                // in the last position where they differ, the smaller
                // exponent wins
                return other.exps[i].cmp(&self.exps[i]);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial: monomial -> nonzero coefficient, canonically
/// ordered by the fixed monomial order.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.last_key_value()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.leading().map(|(m, _)| m)
    }

    /// self -= c * m * g
    fn sub_scaled(&mut self, c: &Rat, m: &Monomial, g: &MultiPoly) {
        for (gm, gc) in &g.terms {
            self.add_term(gm.mul(m), -(c * gc));
        }
    }

    /// Divide by the leading coefficient.
    fn make_monic(&mut self) {
        if let Some((_, lc)) = self.leading() {
            let lc = lc.clone();
            if !lc.is_one() {
                for c in self.terms.values_mut() {
                    *c /= lc.clone();
                }
            }
        }
    }

    /// True when every term has the same total x-degree. The ideal is
    /// x-graded, so everything produced during the Gröbner run must satisfy
    /// this.
    pub fn is_x_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::x_degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }
}

/// The ideal presentation of an unfolded system.
#[derive(Debug, Clone)]
pub struct GroebnerInstance {
    pub h: usize,
    pub generators: Vec<MultiPoly>,
}

/// Build the generators: the t1*tm - 1 relation, the nonzero rows of
/// (A0 + t1*A1) * x, and all quadratic products x_i * x_j.
pub fn build_ideal(sys: &UnfoldedSystem) -> GroebnerInstance {
    let h = sys.h;
    let nvars = h + 2;
    let mut generators = Vec::with_capacity(1 + h + h * (h + 1) / 2);

    let relation = MultiPoly::from_terms(
        nvars,
        [
            (
                Monomial::var(nvars, VAR_T1).mul(&Monomial::var(nvars, VAR_TM)),
                Rat::one(),
            ),
            (Monomial::one(nvars), -Rat::one()),
        ],
    );
    generators.push(relation);

    for i in 0..h {
        let mut row = MultiPoly::zero(nvars);
        for j in 0..h {
            row.add_term(Monomial::var(nvars, var_x(j)), sys.a0.at(i, j).clone());
            row.add_term(
                Monomial::var(nvars, VAR_T1).mul(&Monomial::var(nvars, var_x(j))),
                sys.a1.at(i, j).clone(),
            );
        }
        if !row.is_zero() {
            generators.push(row);
        }
    }

    for i in 0..h {
        for j in i..h {
            let m = Monomial::var(nvars, var_x(i)).mul(&Monomial::var(nvars, var_x(j)));
            generators.push(MultiPoly::from_terms(nvars, [(m, Rat::one())]));
        }
    }

    GroebnerInstance { h, generators }
}

/// A reduced Gröbner basis (monic elements, minimal leading terms, fully
/// tail-reduced).
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub h: usize,
    pub elements: Vec<MultiPoly>,
}

impl GroebnerBasis {
    /// Full normal form of f: no term of the result is divisible by any
    /// leading monomial of the basis.
    pub fn normal_form(&self, f: &MultiPoly) -> MultiPoly {
        normal_form(f, &self.elements)
    }

    /// Buchberger's criterion as a self-check: true iff every S-polynomial
    /// of a basis pair reduces to zero.
    pub fn verify(&self) -> bool {
        for i in 0..self.elements.len() {
            for j in i + 1..self.elements.len() {
                let s = s_polynomial(&self.elements[i], &self.elements[j]);
                if !self.normal_form(&s).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

fn normal_form(f: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let mut work = f.clone();
    let mut rem = MultiPoly::zero(f.nvars());
    while let Some((lm, lc)) = work.leading() {
        let lm = lm.clone();
        let lc = lc.clone();
        let reducer = basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|gm| gm.divides(&lm)));
        match reducer {
            Some(g) => {
                let (gm, gc) = g.leading().unwrap();
                let shift = lm.div(gm);
                let c = &lc / gc;
                work.sub_scaled(&c, &shift, g);
            }
            None => {
                rem.add_term(lm.clone(), lc.clone());
                work.add_term(lm, -lc);
            }
        }
    }
    rem
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fm, fc) = f.leading().expect("s-polynomial of zero");
    let (gm, gc) = g.leading().expect("s-polynomial of zero");
    let lcm = fm.lcm(gm);
    let mut s = MultiPoly::zero(f.nvars());
    s.sub_scaled(&(-Rat::one() / fc), &lcm.div(fm), f);
    s.sub_scaled(&(Rat::one() / gc), &lcm.div(gm), g);
    s
}

/// Buchberger's algorithm with the coprime-leading-term and chain criteria,
/// normal (smallest-lcm) pair selection, and a reduced output basis.
pub fn buchberger(instance: &GroebnerInstance) -> GroebnerBasis {
    let mut basis: Vec<MultiPoly> = Vec::new();
    for g in &instance.generators {
        if !g.is_zero() {
            let mut g = g.clone();
            g.make_monic();
            basis.push(g);
        }
    }

    // Pending S-pairs with cached lcm of the leading monomials.
    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    let add_pairs = |pairs: &mut Vec<(usize, usize, Monomial)>, basis: &[MultiPoly], k: usize| {
        for i in 0..k {
            let lcm = basis[i]
                .leading_monomial()
                .unwrap()
                .lcm(basis[k].leading_monomial().unwrap());
            pairs.push((i, k, lcm));
        }
    };
    for k in 0..basis.len() {
        add_pairs(&mut pairs, &basis, k);
    }

    while !pairs.is_empty() {
        // normal selection: smallest lcm in the monomial order
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.2.cmp(&b.2))
            .map(|(idx, _)| idx)
            .unwrap();
        let (i, j, lcm) = pairs.swap_remove(best);

        let lm_i = basis[i].leading_monomial().unwrap();
        let lm_j = basis[j].leading_monomial().unwrap();

        // first criterion: coprime leading terms reduce to zero
        if lm_i.is_coprime_with(lm_j) {
            continue;
        }
        // chain criterion: some k with LM(k) | lcm(i,j) whose pairs with i
        // and j are both already dispatched
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&lcm)
                && !pairs
                    .iter()
                    .any(|&(a, b, _)| (a, b) == (k.min(i), k.max(i)))
                && !pairs
                    .iter()
                    .any(|&(a, b, _)| (a, b) == (k.min(j), k.max(j)))
        });
        if chained {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j]);
        let mut r = normal_form(&s, &basis);
        if r.is_zero() {
            continue;
        }
        debug_assert!(
            r.is_x_homogeneous(),
            "x-grading violated by an S-polynomial"
        );
        r.make_monic();
        basis.push(r);
        add_pairs(&mut pairs, &basis, basis.len() - 1);
    }

    // minimize: drop elements whose leading monomial another one divides
    let mut keep = vec![true; basis.len()];
    for a in 0..basis.len() {
        if !keep[a] {
            continue;
        }
        for b in 0..basis.len() {
            if a != b
                && keep[b]
                && basis[b]
                    .leading_monomial()
                    .unwrap()
                    .divides(basis[a].leading_monomial().unwrap())
                && !(basis[a].leading_monomial() == basis[b].leading_monomial() && b > a)
            {
                keep[a] = false;
                break;
            }
        }
    }
    let minimal: Vec<MultiPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();

    // inter-reduce tails
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MultiPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _g)| j != i)
            .map(|(_j, g)| g.clone())
            .collect();
        let mut r = normal_form(&minimal[i], &others);
        debug_assert!(!r.is_zero());
        r.make_monic();
        reduced.push(r);
    }
    reduced.sort_by(|a, b| {
        a.leading_monomial()
            .unwrap()
            .cmp(b.leading_monomial().unwrap())
    });

    GroebnerBasis {
        h: instance.h,
        elements: reduced,
    }
}

/// Dimension of the solution space via the Gröbner route.
///
/// For each x_i, find the first rungs of the two ladders inside the
/// leading-term ideal: k_i = min { k : t1^k x_i in LT(I) } and
/// m_i = min { m >= 1 : tm^m x_i in LT(I) }. If either ladder never enters,
/// infinitely many standard monomials involve x_i and the dimension is
/// infinite; otherwise it is the sum over i of (k_i + m_i - 1).
pub fn dimension_via_module(sys: &UnfoldedSystem) -> Dimension {
    let instance = build_ideal(sys);
    let gb = buchberger(&instance);
    dimension_from_basis(&gb)
}

fn dimension_from_basis(gb: &GroebnerBasis) -> Dimension {
    let h = gb.h;
    let mut total = 0usize;
    for i in 0..h {
        let mut k_i: Option<u32> = None;
        let mut m_i: Option<u32> = None;
        for g in &gb.elements {
            let lm = g.leading_monomial().unwrap();
            if lm.x_degree() != 1 || lm.exp(var_x(i)) != 1 {
                continue;
            }
            let (t1, tm) = (lm.exp(VAR_T1), lm.exp(VAR_TM));
            if tm == 0 {
                k_i = Some(k_i.map_or(t1, |k| k.min(t1)));
            }
            if t1 == 0 && tm >= 1 {
                m_i = Some(m_i.map_or(tm, |m| m.min(tm)));
            }
        }
        // x_i itself in the leading-term ideal kills the tm ladder at rung 1
        if k_i == Some(0) {
            m_i = Some(1);
        }
        match (k_i, m_i) {
            (Some(k), Some(m)) => total += k as usize + m as usize - 1,
            _ => return Dimension::Infinite,
        }
    }
    Dimension::Finite(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::DifferenceEquation;
    use crate::rat::rat;
    use crate::sequence::Sequence;
    use crate::unfold::unfold_minimal;

    fn constant_shift_eq() -> UnfoldedSystem {
        // y(n+1) - y(n) = 0, unfolded at H = 2
        let e = DifferenceEquation::from_constants(vec![rat(-1), rat(1)]);
        crate::unfold::unfold(&e, 2).unwrap()
    }

    #[test]
    fn generator_count_matches_construction() {
        let sys = constant_shift_eq();
        let instance = build_ideal(&sys);
        let h = sys.h;
        assert_eq!(instance.generators.len(), 1 + h + h * (h + 1) / 2);
        assert!(instance.generators.iter().all(MultiPoly::is_x_homogeneous));
    }

    #[test]
    fn zero_rows_are_dropped() {
        // w(n) y(n) = 0 with w of period (1, 0): one linear row is zero
        let e = DifferenceEquation::new(vec![Sequence::periodic(vec![rat(1), rat(0)])]);
        let sys = unfold_minimal(&e).unwrap();
        let instance = build_ideal(&sys);
        assert_eq!(instance.generators.len(), 1 + 1 + 3);
    }

    #[test]
    fn grevlex_order_sanity() {
        let nv = 4;
        let t1 = Monomial::var(nv, VAR_T1);
        let tm = Monomial::var(nv, VAR_TM);
        let x0 = Monomial::var(nv, var_x(0));
        let x1 = Monomial::var(nv, var_x(1));
        assert!(t1 > tm);
        assert!(tm > x0);
        assert!(x0 > x1);
        assert!(t1.mul(&tm) > x0); // degree dominates
        assert!(t1.mul(&t1) > t1.mul(&tm));
    }

    #[test]
    fn degenerate_single_generator() {
        let nv = 3;
        let x0 = MultiPoly::from_terms(nv, [(Monomial::var(nv, var_x(0)), rat(1))]);
        let gb = buchberger(&GroebnerInstance {
            h: 1,
            generators: vec![x0.clone()],
        });
        assert_eq!(gb.elements.len(), 1);
        assert_eq!(gb.elements[0], x0);
    }

    #[test]
    fn constant_equation_normal_forms_agree() {
        // x1 and x0 must have equal normal forms modulo the basis: the row
        // -x0 + x1 identifies them.
        let sys = constant_shift_eq();
        let gb = buchberger(&build_ideal(&sys));
        let nv = sys.h + 2;
        let x0 = MultiPoly::from_terms(nv, [(Monomial::var(nv, var_x(0)), rat(1))]);
        let x1 = MultiPoly::from_terms(nv, [(Monomial::var(nv, var_x(1)), rat(1))]);
        assert_eq!(gb.normal_form(&x0), gb.normal_form(&x1));
        assert!(!gb.normal_form(&x0).is_zero());
    }

    #[test]
    fn every_basis_element_is_x_homogeneous() {
        let sys = constant_shift_eq();
        let gb = buchberger(&build_ideal(&sys));
        assert!(gb.elements.iter().all(MultiPoly::is_x_homogeneous));
    }

    #[test]
    fn all_s_polynomials_of_basis_reduce_to_zero() {
        let sys = constant_shift_eq();
        let gb = buchberger(&build_ideal(&sys));
        assert!(gb.verify());
    }

    #[test]
    fn constant_equation_dimension_is_one() {
        let sys = constant_shift_eq();
        assert_eq!(dimension_via_module(&sys), Dimension::Finite(1));
    }

    #[test]
    fn half_zero_weight_is_infinite() {
        let e = DifferenceEquation::new(vec![Sequence::periodic(vec![rat(1), rat(0)])]);
        let sys = unfold_minimal(&e).unwrap();
        assert_eq!(dimension_via_module(&sys), Dimension::Infinite);
    }

    #[test]
    fn fibonacci_dimension_matches_pencil_route() {
        let e = DifferenceEquation::from_constants(vec![rat(-1), rat(-1), rat(1)]);
        let sys = unfold_minimal(&e).unwrap();
        assert_eq!(dimension_via_module(&sys), Dimension::Finite(2));
        let p = crate::pencil::pencil_from_unfolded(&sys);
        assert_eq!(
            crate::pencil::dimension_via_determinant(&p),
            dimension_via_module(&sys)
        );
    }
}
