//! Sparse polynomials in z₁..zₙ, z̄₁..z̄ₙ and an auxiliary parameter t.
//!
//! The parameter t is never differentiated by d, ∂ or ∂̄; it carries the
//! first-order (dual number) expansions used by the infinitesimal checks.

use crate::coeff::Coeff;
use std::collections::BTreeMap;

/// Largest supported chart dimension.
pub const MAX_DIM: usize = 6;
const NV: usize = 2 * MAX_DIM + 1;
const T_SLOT: usize = 2 * MAX_DIM;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Z(usize),
    Zb(usize),
    T,
}

impl Var {
    fn slot(self) -> usize {
        match self {
            Var::Z(i) => i,
            Var::Zb(i) => MAX_DIM + i,
            Var::T => T_SLOT,
        }
    }
}

/// Exponent vector: z exponents, then z̄ exponents, then t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(pub [u8; NV]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; NV])
    }

    pub fn var(v: Var) -> Self {
        let mut m = Mono::one();
        m.0[v.slot()] = 1;
        m
    }

    pub fn exp(&self, v: Var) -> u8 {
        self.0[v.slot()]
    }

    pub fn with_exp(mut self, v: Var, e: u8) -> Self {
        self.0[v.slot()] = e;
        self
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono(std::array::from_fn(|k| self.0[k].checked_add(o.0[k]).expect("monomial exponent overflow")))
    }

    pub fn z_degree(&self) -> u32 {
        self.0[..MAX_DIM].iter().map(|&e| e as u32).sum()
    }

    pub fn zb_degree(&self) -> u32 {
        self.0[MAX_DIM..T_SLOT].iter().map(|&e| e as u32).sum()
    }

    pub fn t_degree(&self) -> u32 {
        self.0[T_SLOT] as u32
    }

    pub fn degree(&self) -> u32 {
        self.z_degree() + self.zb_degree()
    }

    /// Largest chart index (1-based) mentioned, 0 if none.
    pub fn max_index(&self) -> usize {
        (0..MAX_DIM).rev().find(|&i| self.0[i] > 0 || self.0[MAX_DIM + i] > 0).map_or(0, |i| i + 1)
    }

    /// Partial derivative: (exponent, lowered monomial), or `None` when it vanishes.
    pub fn diff(&self, v: Var) -> Option<(u8, Mono)> {
        let s = v.slot();
        let e = self.0[s];
        if e == 0 {
            return None;
        }
        let mut m = *self;
        m.0[s] -= 1;
        Some((e, m))
    }

    /// Variables with nonzero exponent, in slot order.
    pub fn vars(&self) -> impl Iterator<Item = (Var, u8)> + '_ {
        (0..NV).filter(move |&k| self.0[k] > 0).map(move |k| {
            let v = if k < MAX_DIM {
                Var::Z(k)
            } else if k < T_SLOT {
                Var::Zb(k - MAX_DIM)
            } else {
                Var::T
            };
            (v, self.0[k])
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Mono, Coeff>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Scalar::term(Mono::one(), c)
    }

    pub fn int(v: i64) -> Self {
        Scalar::constant(Coeff::int(v))
    }

    pub fn var(v: Var) -> Self {
        Scalar::term(Mono::var(v), Coeff::one())
    }

    pub fn z(i: usize) -> Self {
        Scalar::var(Var::Z(i))
    }

    pub fn zb(i: usize) -> Self {
        Scalar::var(Var::Zb(i))
    }

    pub fn t() -> Self {
        Scalar::var(Var::T)
    }

    pub fn term(m: Mono, c: Coeff) -> Self {
        let mut s = Scalar::zero();
        s.add_term(m, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant term, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Mono, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add(&self, o: &Scalar) -> Scalar {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c);
        }
        r
    }

    pub fn neg(&self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        let mut r = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &Coeff) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut r = Scalar::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn diff(&self, v: Var) -> Scalar {
        let mut r = Scalar::zero();
        for (m, c) in &self.terms {
            if let Some((e, m2)) = m.diff(v) {
                r.add_term(m2, c.scale_int(e as i64));
            }
        }
        r
    }

    /// True when no z̄ appears, i.e. ∂̄ of the polynomial vanishes.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.zb_degree() == 0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().map(|m| m.max_index()).max().unwrap_or(0)
    }

    /// Drops every term whose t-degree exceeds `order`.
    pub fn truncate_t(&self, order: u32) -> Scalar {
        Scalar {
            terms: self.terms.iter().filter(|(m, _)| m.t_degree() <= order).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Coefficient of t^k, as a polynomial free of t.
    pub fn t_coeff(&self, k: u32) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.t_degree() == k)
                .map(|(m, c)| (m.with_exp(Var::T, 0), c.clone()))
                .collect(),
        }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, Coeff)>) -> Scalar {
        let mut r = Scalar::zero();
        for (m, c) in it {
            r.add_term(m, c);
        }
        r
    }
}
