//! Differential forms on a chart of ℂⁿ with polynomial coefficients.
//!
//! A basis element is dz_I ∧ dz̄_J with I, J increasing; all dz factors come
//! before all dz̄ factors. Sorting signs are applied when terms are inserted,
//! so equal forms have equal maps.

use crate::coeff::Coeff;
use crate::scalar::{Mono, Scalar, Var, MAX_DIM};
use crate::vector::VectorField10;
use std::collections::{BTreeMap, BTreeSet};

/// dz_I ∧ dz̄_J encoded as two bitmasks (bit i ↔ index i+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Basis {
    pub dz: u8,
    pub dzb: u8,
}

impl Basis {
    pub const ONE: Basis = Basis { dz: 0, dzb: 0 };

    pub fn new(dz: u8, dzb: u8) -> Self {
        Basis { dz, dzb }
    }

    /// From 0-based index lists (any order); `None` on a repeated index.
    pub fn from_indices(dz: &[usize], dzb: &[usize]) -> Option<(bool, Basis)> {
        let mut acc = (false, Basis::ONE);
        for &i in dz {
            let (s, b) = wedge_basis(acc.1, Basis::new(1 << i, 0))?;
            acc = (acc.0 ^ s, b);
        }
        for &j in dzb {
            let (s, b) = wedge_basis(acc.1, Basis::new(0, 1 << j))?;
            acc = (acc.0 ^ s, b);
        }
        Some(acc)
    }

    pub fn p(&self) -> usize {
        self.dz.count_ones() as usize
    }

    pub fn q(&self) -> usize {
        self.dzb.count_ones() as usize
    }

    pub fn degree(&self) -> usize {
        self.p() + self.q()
    }

    pub fn dz_indices(&self) -> Vec<usize> {
        bits(self.dz)
    }

    pub fn dzb_indices(&self) -> Vec<usize> {
        bits(self.dzb)
    }

    pub fn max_index(&self) -> usize {
        let m = self.dz | self.dzb;
        (8 - m.leading_zeros()) as usize
    }
}

fn bits(m: u8) -> Vec<usize> {
    (0..8).filter(|&i| m & (1 << i) != 0).collect()
}

/// Parity of the number of pairs (x ∈ a, y ∈ b) with x > y.
fn merge_parity(a: u8, b: u8) -> bool {
    let mut odd = false;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        let above = if y >= 7 { 0 } else { a >> (y + 1) };
        odd ^= above.count_ones() & 1 == 1;
        rest &= rest - 1;
    }
    odd
}

/// x ∧ y = ±basis; the flag is true for a minus sign.
pub fn wedge_basis(x: Basis, y: Basis) -> Option<(bool, Basis)> {
    if x.dz & y.dz != 0 || x.dzb & y.dzb != 0 {
        return None;
    }
    let neg = ((x.q() * y.p()) % 2 == 1) ^ merge_parity(x.dz, y.dz) ^ merge_parity(x.dzb, y.dzb);
    Some((neg, Basis::new(x.dz | y.dz, x.dzb | y.dzb)))
}

fn contract_dz_basis(b: Basis, i: usize) -> Option<(bool, Basis)> {
    let bit = 1u8 << i;
    if b.dz & bit == 0 {
        return None;
    }
    let below = (b.dz & (bit - 1)).count_ones();
    Some((below % 2 == 1, Basis::new(b.dz & !bit, b.dzb)))
}

fn contract_dzb_basis(b: Basis, i: usize) -> Option<(bool, Basis)> {
    let bit = 1u8 << i;
    if b.dzb & bit == 0 {
        return None;
    }
    let below = b.dz.count_ones() + (b.dzb & (bit - 1)).count_ones();
    Some((below % 2 == 1, Basis::new(b.dz, b.dzb & !bit)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Form {
    terms: BTreeMap<(Basis, Mono), Coeff>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn one() -> Self {
        Form::scalar(&Scalar::one())
    }

    pub fn scalar(s: &Scalar) -> Self {
        Form::with_basis(Basis::ONE, s)
    }

    pub fn constant(c: Coeff) -> Self {
        Form::scalar(&Scalar::constant(c))
    }

    pub fn with_basis(b: Basis, s: &Scalar) -> Self {
        let mut f = Form::zero();
        for (m, c) in s.terms() {
            f.add_term(b, *m, c.clone());
        }
        f
    }

    /// dz_{i+1}
    pub fn dz(i: usize) -> Self {
        Form::with_basis(Basis::new(1 << i, 0), &Scalar::one())
    }

    /// dz̄_{i+1}
    pub fn dzb(i: usize) -> Self {
        Form::with_basis(Basis::new(0, 1 << i), &Scalar::one())
    }

    pub fn add_term(&mut self, b: Basis, m: Mono, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((b, m)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn add_signed(&mut self, neg: bool, b: Basis, m: Mono, c: Coeff) {
        self.add_term(b, m, if neg { -c } else { c });
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Basis, Mono, Coeff)>) -> Form {
        let mut f = Form::zero();
        for (b, m, c) in it {
            f.add_term(b, m, c);
        }
        f
    }

    pub fn terms(&self) -> impl Iterator<Item = (Basis, Mono, &Coeff)> + '_ {
        self.terms.iter().map(|((b, m), c)| (*b, *m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut r = self.clone();
        for ((b, m), c) in &o.terms {
            r.add_term(*b, *m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Form) -> Form {
        let mut r = self.clone();
        for ((b, m), c) in &o.terms {
            r.add_term(*b, *m, -c);
        }
        r
    }

    pub fn neg(&self) -> Form {
        Form { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn scale(&self, c: &Coeff) -> Form {
        if c.is_zero() {
            return Form::zero();
        }
        Form { terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Form {
        self.scale(&Coeff::int(k))
    }

    pub fn mul_scalar(&self, s: &Scalar) -> Form {
        let mut r = Form::zero();
        for ((b, m), c) in &self.terms {
            for (m2, c2) in s.terms() {
                r.add_term(*b, m.mul(m2), c * c2);
            }
        }
        r
    }

    pub fn wedge(&self, o: &Form) -> Form {
        let mut r = Form::zero();
        for ((b1, m1), c1) in &self.terms {
            for ((b2, m2), c2) in &o.terms {
                if let Some((neg, b)) = wedge_basis(*b1, *b2) {
                    r.add_signed(neg, b, m1.mul(m2), c1 * c2);
                }
            }
        }
        r
    }

    pub fn del(&self) -> Form {
        let mut r = Form::zero();
        for ((b, m), c) in &self.terms {
            for (v, _) in m.vars() {
                if let Var::Z(i) = v {
                    let (e, m2) = m.diff(v).unwrap();
                    if let Some((neg, b2)) = wedge_basis(Basis::new(1 << i, 0), *b) {
                        r.add_signed(neg, b2, m2, c.scale_int(e as i64));
                    }
                }
            }
        }
        r
    }

    pub fn delbar(&self) -> Form {
        let mut r = Form::zero();
        for ((b, m), c) in &self.terms {
            for (v, _) in m.vars() {
                if let Var::Zb(i) = v {
                    let (e, m2) = m.diff(v).unwrap();
                    if let Some((neg, b2)) = wedge_basis(Basis::new(0, 1 << i), *b) {
                        r.add_signed(neg, b2, m2, c.scale_int(e as i64));
                    }
                }
            }
        }
        r
    }

    pub fn d(&self) -> Form {
        self.del().add(&self.delbar())
    }

    /// Contraction with ∂/∂z_{i+1}.
    pub fn contract_dz(&self, i: usize) -> Form {
        let mut r = Form::zero();
        for ((b, m), c) in &self.terms {
            if let Some((neg, b2)) = contract_dz_basis(*b, i) {
                r.add_signed(neg, b2, *m, c.clone());
            }
        }
        r
    }

    /// Contraction with ∂/∂z̄_{i+1}.
    pub fn contract_dzb(&self, i: usize) -> Form {
        let mut r = Form::zero();
        for ((b, m), c) in &self.terms {
            if let Some((neg, b2)) = contract_dzb_basis(*b, i) {
                r.add_signed(neg, b2, *m, c.clone());
            }
        }
        r
    }

    /// i_V for a (1,0) vector field.
    pub fn contract(&self, v: &VectorField10) -> Form {
        let mut r = Form::zero();
        for (i, vi) in v.components().iter().enumerate() {
            if !vi.is_zero() {
                r = r.add(&self.contract_dz(i).mul_scalar(vi));
            }
        }
        r
    }

    /// Σ vᵢ ∧ i_{∂ᵢ}(self) for form-valued coefficients vᵢ.
    pub fn contract_valued(&self, v: &[Form]) -> Form {
        let mut r = Form::zero();
        for (i, vi) in v.iter().enumerate() {
            if !vi.is_zero() {
                r = r.add(&vi.wedge(&self.contract_dz(i)));
            }
        }
        r
    }

    /// L_V = i_V d + d i_V.
    pub fn lie_derivative(&self, v: &VectorField10) -> Form {
        self.d().contract(v).add(&self.contract(v).d())
    }

    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms.keys().map(|(b, _)| (b.p(), b.q())).collect()
    }

    /// Some((p,q)) when every term has bidegree (p,q); `None` for mixed or zero forms.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let s = self.bidegrees();
        if s.len() == 1 {
            s.into_iter().next()
        } else {
            None
        }
    }

    pub fn degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|(b, _)| b.degree()).collect()
    }

    /// True when zero or every term has total degree k.
    pub fn has_degree(&self, k: usize) -> bool {
        self.terms.keys().all(|(b, _)| b.degree() == k)
    }

    /// True when zero or every term has bidegree (p,q).
    pub fn has_bidegree(&self, p: usize, q: usize) -> bool {
        self.terms.keys().all(|(b, _)| b.p() == p && b.q() == q)
    }

    pub fn filter(&self, keep: impl Fn(Basis, &Mono) -> bool) -> Form {
        Form { terms: self.terms.iter().filter(|((b, m), _)| keep(*b, m)).map(|(k, c)| (*k, c.clone())).collect() }
    }

    /// The (p,q) component.
    pub fn component(&self, p: usize, q: usize) -> Form {
        self.filter(|b, _| b.p() == p && b.q() == q)
    }

    /// The part of total degree k.
    pub fn degree_part(&self, k: usize) -> Form {
        self.filter(|b, _| b.degree() == k)
    }

    /// Split by type.
    pub fn components(&self) -> BTreeMap<(usize, usize), Form> {
        let mut out: BTreeMap<(usize, usize), Form> = BTreeMap::new();
        for ((b, m), c) in &self.terms {
            out.entry((b.p(), b.q())).or_default().terms.insert((*b, *m), c.clone());
        }
        out
    }

    /// Coefficient of a basis element.
    pub fn coefficient(&self, b: Basis) -> Scalar {
        Scalar::from_terms(self.terms.iter().filter(|((bb, _), _)| *bb == b).map(|((_, m), c)| (*m, c.clone())))
    }

    pub fn bases(&self) -> BTreeSet<Basis> {
        self.terms.keys().map(|(b, _)| *b).collect()
    }

    /// The 0-form part as a polynomial.
    pub fn to_scalar(&self) -> Scalar {
        self.coefficient(Basis::ONE)
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().map(|(b, m)| b.max_index().max(m.max_index())).max().unwrap_or(0)
    }

    pub fn poly_degree(&self) -> u32 {
        self.terms.keys().map(|(_, m)| m.degree()).max().unwrap_or(0)
    }

    pub fn truncate_t(&self, order: u32) -> Form {
        self.filter(|_, m| m.t_degree() <= order)
    }

    /// Coefficient of t^k with t removed.
    pub fn t_coeff(&self, k: u32) -> Form {
        let mut r = Form::zero();
        for ((b, m), c) in &self.terms {
            if m.t_degree() == k {
                r.add_term(*b, m.with_exp(Var::T, 0), c.clone());
            }
        }
        r
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|(_, m)| m.zb_degree() == 0)
    }
}

/// 1-forms dz_i, dz̄_i for i < n, useful for iteration.
pub fn coordinate_one_forms(n: usize) -> Vec<Form> {
    assert!(n <= MAX_DIM);
    (0..n).map(Form::dz).chain((0..n).map(Form::dzb)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize) -> Form {
        Form::scalar(&Scalar::z(i))
    }
    fn zb(i: usize) -> Form {
        Form::scalar(&Scalar::zb(i))
    }

    #[test]
    fn wedge_examples() {
        assert!(Form::dz(0).wedge(&Form::dz(0)).is_zero());
        let a = Form::dz(0).wedge(&Form::dzb(0));
        assert_eq!(a.len(), 1);
        assert_eq!(a.bidegree(), Some((1, 1)));
        let lhs = z(0).wedge(&Form::dzb(0)).wedge(&Form::dz(0));
        assert_eq!(lhs, z(0).wedge(&a).neg());
    }

    #[test]
    fn d_examples() {
        let f = Form::scalar(&Scalar::z(0).mul(&Scalar::zb(0)));
        assert_eq!(f.d(), zb(0).wedge(&Form::dz(0)).add(&z(0).wedge(&Form::dzb(0))));
        let g = Form::scalar(&Scalar::z(0).pow(2)).wedge(&Form::dz(1));
        assert!(g.delbar().is_zero());
    }

    #[test]
    fn contraction_examples() {
        let e1 = VectorField10::coordinate(2, 0);
        assert_eq!(Form::dz(0).wedge(&Form::dz(1)).contract(&e1), Form::dz(1));
        assert!(Form::dzb(0).contract(&e1).is_zero());
        let v = VectorField10::new(vec![Scalar::z(1), Scalar::zero()]);
        assert_eq!(Form::dz(0).contract(&v), z(1));
    }

    #[test]
    fn lie_derivative_examples() {
        let e1 = VectorField10::coordinate(2, 0);
        assert_eq!(z(0).wedge(&Form::dz(1)).lie_derivative(&e1), Form::dz(1));
        let euler1 = VectorField10::new(vec![Scalar::z(0), Scalar::zero()]);
        assert_eq!(Form::dz(0).lie_derivative(&euler1), Form::dz(0));
        assert!(Form::constant(Coeff::int(3)).lie_derivative(&e1).is_zero());
    }

    #[test]
    fn overflow_degree_is_zero() {
        let a = Form::dz(0).wedge(&Form::dz(1));
        assert!(a.wedge(&Form::dz(0)).is_zero());
    }

    #[test]
    fn contract_dzb_sign() {
        // i_{∂̄1}(dz1 ∧ dz̄1) = -dz1
        let a = Form::dz(0).wedge(&Form::dzb(0));
        assert_eq!(a.contract_dzb(0), Form::dz(0).neg());
    }
}
