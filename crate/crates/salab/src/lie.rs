//! Matrix-Lie-algebra-valued forms, connections, curvature, Chern–Simons forms
//! and polynomial gauge maps.
//!
//! Conventions: F = dθ + ½[θ,θ], d^θ a = da + [θ,a], and a gauge map g acts on
//! connections by gθ = gθg⁻¹ − dg·g⁻¹ (so g⁻¹θ = g⁻¹θg + g⁻¹dg).

use crate::coeff::Coeff;
use crate::error::{type_err, Error, Result};
use crate::form::Form;
use crate::scalar::Scalar;
use crate::vector::VectorField10;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// 0-based matrix indices.
    pub indices: Vec<usize>,
    pub mu: Coeff,
}

/// gl_k restricted to the block-diagonal subalgebra of its blocks, with
/// c(x,y) = Σ μ_j tr(x y restricted to block j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraSpec {
    k: usize,
    blocks: Vec<Block>,
    block_of: Vec<usize>,
}

impl LieAlgebraSpec {
    pub fn new(k: usize, blocks: Vec<Block>) -> Result<Self> {
        if k == 0 {
            return type_err("matrix size must be positive");
        }
        let mut block_of = vec![usize::MAX; k];
        for (bi, b) in blocks.iter().enumerate() {
            if b.indices.is_empty() {
                return type_err("empty block in pairing spec");
            }
            for &i in &b.indices {
                if i >= k {
                    return type_err(format!("block index {} exceeds matrix size {k}", i + 1));
                }
                if block_of[i] != usize::MAX {
                    return type_err(format!("index {} appears in two blocks", i + 1));
                }
                block_of[i] = bi;
            }
        }
        if let Some(i) = block_of.iter().position(|&b| b == usize::MAX) {
            return type_err(format!("index {} is not covered by any block", i + 1));
        }
        if blocks.iter().all(|b| b.mu.is_zero()) {
            return type_err("all pairing weights are zero");
        }
        Ok(LieAlgebraSpec { k, blocks, block_of })
    }

    /// gl_k with the trace pairing.
    pub fn gl(k: usize) -> Self {
        LieAlgebraSpec::new(k, vec![Block { indices: (0..k).collect(), mu: Coeff::one() }]).unwrap()
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Whether entry (i,j) lies inside a diagonal block.
    pub fn allows(&self, i: usize, j: usize) -> bool {
        self.block_of[i] == self.block_of[j]
    }

    pub fn check(&self, a: &LieForm) -> Result<()> {
        if a.size() != self.k {
            return Err(Error::Dimension(format!("matrix size {} vs algebra size {}", a.size(), self.k)));
        }
        for i in 0..self.k {
            for j in 0..self.k {
                if !self.allows(i, j) && !a.get(i, j).is_zero() {
                    return type_err(format!("entry ({},{}) lies outside the block structure", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    /// Σ μ_j tr_j(m).
    pub fn trace(&self, m: &LieForm) -> Form {
        let mut r = Form::zero();
        for b in &self.blocks {
            let mut t = Form::zero();
            for &i in &b.indices {
                t = t.add(m.get(i, i));
            }
            r = r.add(&t.scale(&b.mu));
        }
        r
    }

    /// c(a ∧ b).
    pub fn pairing(&self, a: &LieForm, b: &LieForm) -> Form {
        let mut r = Form::zero();
        for blk in &self.blocks {
            let mut t = Form::zero();
            for &i in &blk.indices {
                for l in 0..self.k {
                    let x = a.get(i, l);
                    let y = b.get(l, i);
                    if !x.is_zero() && !y.is_zero() {
                        t = t.add(&x.wedge(y));
                    }
                }
            }
            r = r.add(&t.scale(&blk.mu));
        }
        r
    }
}

/// k×k matrix of forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieForm {
    k: usize,
    e: Vec<Form>,
}

impl LieForm {
    pub fn new(k: usize, e: Vec<Form>) -> Self {
        assert_eq!(e.len(), k * k, "matrix needs k*k entries");
        LieForm { k, e }
    }

    pub fn zero(k: usize) -> Self {
        LieForm { k, e: vec![Form::zero(); k * k] }
    }

    pub fn identity(k: usize) -> Self {
        LieForm::diag(k, &Form::one())
    }

    pub fn diag(k: usize, f: &Form) -> Self {
        let mut m = LieForm::zero(k);
        for i in 0..k {
            m.e[i * k + i] = f.clone();
        }
        m
    }

    /// f·E_ij
    pub fn elementary(k: usize, i: usize, j: usize, f: Form) -> Self {
        let mut m = LieForm::zero(k);
        m.e[i * k + j] = f;
        m
    }

    pub fn from_scalars(k: usize, s: &[Scalar]) -> Self {
        LieForm::new(k, s.iter().map(Form::scalar).collect())
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.e[i * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) {
        self.e[i * self.k + j] = f;
    }

    pub fn entries(&self) -> &[Form] {
        &self.e
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(Form::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> LieForm {
        LieForm { k: self.k, e: self.e.iter().map(f).collect() }
    }

    fn zip(&self, o: &LieForm, f: impl Fn(&Form, &Form) -> Form) -> LieForm {
        assert_eq!(self.k, o.k, "matrix size mismatch");
        LieForm { k: self.k, e: self.e.iter().zip(&o.e).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &LieForm) -> LieForm {
        self.zip(o, Form::add)
    }

    pub fn sub(&self, o: &LieForm) -> LieForm {
        self.zip(o, Form::sub)
    }

    pub fn neg(&self) -> LieForm {
        self.map(Form::neg)
    }

    pub fn scale(&self, c: &Coeff) -> LieForm {
        self.map(|f| f.scale(c))
    }

    pub fn scale_int(&self, c: i64) -> LieForm {
        self.map(|f| f.scale_int(c))
    }

    /// f ∧ M, entrywise.
    pub fn wedge_left(&self, f: &Form) -> LieForm {
        self.map(|x| f.wedge(x))
    }

    /// Matrix product with entrywise wedge.
    pub fn mul(&self, o: &LieForm) -> LieForm {
        assert_eq!(self.k, o.k, "matrix size mismatch");
        let k = self.k;
        let mut r = LieForm::zero(k);
        for i in 0..k {
            for l in 0..k {
                let a = &self.e[i * k + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..k {
                    let b = &o.e[l * k + j];
                    if !b.is_zero() {
                        r.e[i * k + j] = r.e[i * k + j].add(&a.wedge(b));
                    }
                }
            }
        }
        r
    }

    pub fn d(&self) -> LieForm {
        self.map(Form::d)
    }

    pub fn del(&self) -> LieForm {
        self.map(Form::del)
    }

    pub fn delbar(&self) -> LieForm {
        self.map(Form::delbar)
    }

    pub fn component(&self, p: usize, q: usize) -> LieForm {
        self.map(|f| f.component(p, q))
    }

    pub fn degree_part(&self, k: usize) -> LieForm {
        self.map(|f| f.degree_part(k))
    }

    pub fn contract(&self, v: &VectorField10) -> LieForm {
        self.map(|f| f.contract(v))
    }

    pub fn contract_valued(&self, v: &[Form]) -> LieForm {
        self.map(|f| f.contract_valued(v))
    }

    pub fn truncate_t(&self, order: u32) -> LieForm {
        self.map(|f| f.truncate_t(order))
    }

    pub fn t_coeff(&self, k: u32) -> LieForm {
        self.map(|f| f.t_coeff(k))
    }

    pub fn degrees(&self) -> BTreeSet<usize> {
        self.e.iter().flat_map(|f| f.degrees()).collect()
    }

    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.e.iter().flat_map(|f| f.bidegrees()).collect()
    }

    pub fn has_degree(&self, k: usize) -> bool {
        self.e.iter().all(|f| f.has_degree(k))
    }

    pub fn has_bidegree(&self, p: usize, q: usize) -> bool {
        self.e.iter().all(|f| f.has_bidegree(p, q))
    }

    pub fn is_holomorphic(&self) -> bool {
        self.e.iter().all(Form::is_holomorphic)
    }

    pub fn max_index(&self) -> usize {
        self.e.iter().map(Form::max_index).max().unwrap_or(0)
    }

    /// Homogeneous parts by total degree.
    pub fn degree_parts(&self) -> Vec<(usize, LieForm)> {
        self.degrees().into_iter().map(|k| (k, self.degree_part(k))).collect()
    }

    /// Graded bracket [a,b] = a∧b − (−1)^{|a||b|} b∧a, extended bilinearly over degrees.
    pub fn bracket(&self, o: &LieForm) -> LieForm {
        let mut r = LieForm::zero(self.k);
        let op = o.degree_parts();
        for (k, a) in self.degree_parts() {
            for (l, b) in &op {
                let ab = a.mul(b);
                let ba = b.mul(&a);
                r = if (k * l) % 2 == 0 { r.add(&ab.sub(&ba)) } else { r.add(&ab.add(&ba)) };
            }
        }
        r
    }
}

/// θ = θ^{1,0} + θ^{0,1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub theta10: LieForm,
    pub theta01: LieForm,
}

impl Connection {
    pub fn new(theta10: LieForm, theta01: LieForm) -> Result<Self> {
        if theta10.size() != theta01.size() {
            return Err(Error::Dimension("theta10 and theta01 sizes differ".into()));
        }
        if !theta10.has_bidegree(1, 0) {
            return type_err("theta10 must be of type (1,0)");
        }
        if !theta01.has_bidegree(0, 1) {
            return type_err("theta01 must be of type (0,1)");
        }
        Ok(Connection { theta10, theta01 })
    }

    pub fn trivial(k: usize) -> Self {
        Connection { theta10: LieForm::zero(k), theta01: LieForm::zero(k) }
    }

    /// Split a matrix-valued 1-form by type.
    pub fn from_form(theta: &LieForm) -> Result<Self> {
        if !theta.has_degree(1) {
            return type_err("a connection must be a matrix of 1-forms");
        }
        Ok(Connection { theta10: theta.component(1, 0), theta01: theta.component(0, 1) })
    }

    pub fn size(&self) -> usize {
        self.theta10.size()
    }

    pub fn full(&self) -> LieForm {
        self.theta10.add(&self.theta01)
    }

    /// θ + a for a matrix of 1-forms a.
    pub fn shift(&self, a: &LieForm) -> Result<Connection> {
        Connection::from_form(&self.full().add(a))
    }

    /// F = dθ + ½[θ,θ] = dθ + θ∧θ.
    pub fn curvature(&self) -> LieForm {
        let t = self.full();
        t.d().add(&t.mul(&t))
    }

    pub fn is_integrable(&self) -> bool {
        self.curvature().component(0, 2).is_zero()
    }

    /// d^θ a = da + [θ,a].
    pub fn cov_d(&self, a: &LieForm) -> LieForm {
        a.d().add(&self.full().bracket(a))
    }

    /// ∂^θ a = ∂a + [θ^{1,0},a].
    pub fn del_theta(&self, a: &LieForm) -> LieForm {
        a.del().add(&self.theta10.bracket(a))
    }

    /// ∂̄^θ a = ∂̄a + [θ^{0,1},a].
    pub fn delbar_theta(&self, a: &LieForm) -> LieForm {
        a.delbar().add(&self.theta01.bracket(a))
    }

    /// gθ = gθg⁻¹ − dg·g⁻¹.
    pub fn gauge(&self, g: &GaugeMap) -> Connection {
        Connection::from_form(&g.act(&self.full())).expect("gauge action keeps 1-forms")
    }

    /// g⁻¹θ = g⁻¹θg + g⁻¹dg.
    pub fn gauge_inv(&self, g: &GaugeMap) -> Connection {
        Connection::from_form(&g.act_inv(&self.full())).expect("gauge action keeps 1-forms")
    }

    pub fn truncate_t(&self, order: u32) -> Connection {
        Connection { theta10: self.theta10.truncate_t(order), theta01: self.theta01.truncate_t(order) }
    }
}

/// CS(θ) = −⅙c(θ,[θ,θ]) + c(F_θ,θ).
pub fn chern_simons(alg: &LieAlgebraSpec, theta: &Connection) -> Form {
    let t = theta.full();
    let cubic = alg.pairing(&t, &t.bracket(&t)).scale(&Coeff::ratio(-1, 6));
    cubic.add(&alg.pairing(&theta.curvature(), &t))
}

/// 2c(a∧F) + c(a∧d^θa) + ⅓c(a,[a,a]).
pub fn cs_difference(alg: &LieAlgebraSpec, theta: &Connection, a: &LieForm) -> Form {
    let f = theta.curvature();
    alg.pairing(a, &f)
        .scale_int(2)
        .add(&alg.pairing(a, &theta.cov_d(a)))
        .add(&alg.pairing(a, &a.bracket(a)).scale(&Coeff::ratio(1, 3)))
}

/// σ^θ(g) = CS(gθ) − CS(θ) − dc(gθ∧θ).
pub fn sigma_rep(alg: &LieAlgebraSpec, g: &GaugeMap, theta: &Connection) -> Result<Form> {
    if !g.is_holomorphic() {
        return Err(Error::NotHolomorphic);
    }
    if !theta.is_integrable() {
        return Err(Error::NonIntegrableConnection);
    }
    let gt = theta.gauge(g);
    Ok(chern_simons(alg, &gt).sub(&chern_simons(alg, theta)).sub(&alg.pairing(&gt.full(), &theta.full()).d()))
}

/// Polynomial gauge map with an explicit polynomial inverse.
#[derive(Clone, Debug)]
pub struct GaugeMap {
    g: LieForm,
    g_inv: LieForm,
    holomorphic: bool,
}

impl PartialEq for GaugeMap {
    fn eq(&self, o: &Self) -> bool {
        self.g == o.g
    }
}

impl Eq for GaugeMap {}

impl GaugeMap {
    /// Checks g·g_inv = g_inv·g = I exactly, and ∂̄g = 0 when flagged holomorphic.
    pub fn new(g: LieForm, g_inv: LieForm, holomorphic: bool) -> Result<Self> {
        Self::checked(g, g_inv, holomorphic, None)
    }

    /// As `new`, with the inverse identities checked modulo t^{order+1}.
    pub fn new_mod_t(g: LieForm, g_inv: LieForm, order: u32) -> Result<Self> {
        Self::checked(g, g_inv, false, Some(order))
    }

    fn checked(g: LieForm, g_inv: LieForm, holomorphic: bool, order: Option<u32>) -> Result<Self> {
        if g.size() != g_inv.size() {
            return Err(Error::Dimension("g and g_inv sizes differ".into()));
        }
        if !g.has_degree(0) || !g_inv.has_degree(0) {
            return type_err("gauge map entries must be functions");
        }
        let id = LieForm::identity(g.size());
        let tr = |m: LieForm| match order {
            Some(o) => m.truncate_t(o),
            None => m,
        };
        if tr(g.mul(&g_inv)) != id || tr(g_inv.mul(&g)) != id {
            return Err(Error::NotInvertible);
        }
        if holomorphic && !(g.is_holomorphic() && g_inv.is_holomorphic()) {
            return Err(Error::NotHolomorphic);
        }
        Ok(GaugeMap { g, g_inv, holomorphic })
    }

    pub fn identity(k: usize) -> Self {
        GaugeMap { g: LieForm::identity(k), g_inv: LieForm::identity(k), holomorphic: true }
    }

    /// I + p·E_ij (i ≠ j), inverse I − p·E_ij.
    pub fn elementary(k: usize, i: usize, j: usize, p: &Scalar) -> Self {
        assert_ne!(i, j, "elementary unipotent needs i != j");
        let id = LieForm::identity(k);
        let n = LieForm::elementary(k, i, j, Form::scalar(p));
        GaugeMap { g: id.add(&n), g_inv: id.sub(&n), holomorphic: p.is_holomorphic() }
    }

    /// Constant invertible matrix.
    pub fn constant(g: &[Coeff], g_inv: &[Coeff]) -> Result<Self> {
        let k = (g.len() as f64).sqrt() as usize;
        let m = |v: &[Coeff]| LieForm::new(k, v.iter().map(|c| Form::constant(c.clone())).collect());
        GaugeMap::new(m(g), m(g_inv), true)
    }

    pub fn size(&self) -> usize {
        self.g.size()
    }

    pub fn g(&self) -> &LieForm {
        &self.g
    }

    pub fn g_inv(&self) -> &LieForm {
        &self.g_inv
    }

    pub fn holomorphic_flag(&self) -> bool {
        self.holomorphic
    }

    /// Whether ∂̄g = 0 holds (regardless of the flag).
    pub fn is_holomorphic(&self) -> bool {
        self.g.is_holomorphic()
    }

    pub fn inverse(&self) -> GaugeMap {
        GaugeMap { g: self.g_inv.clone(), g_inv: self.g.clone(), holomorphic: self.holomorphic }
    }

    /// g·h.
    pub fn compose(&self, h: &GaugeMap) -> GaugeMap {
        GaugeMap {
            g: self.g.mul(&h.g),
            g_inv: h.g_inv.mul(&self.g_inv),
            holomorphic: self.holomorphic && h.holomorphic,
        }
    }

    pub fn truncate_t(&self, order: u32) -> GaugeMap {
        GaugeMap { g: self.g.truncate_t(order), g_inv: self.g_inv.truncate_t(order), holomorphic: self.holomorphic }
    }

    /// g x g⁻¹.
    pub fn conj(&self, x: &LieForm) -> LieForm {
        self.g.mul(x).mul(&self.g_inv)
    }

    /// g⁻¹ x g.
    pub fn conj_inv(&self, x: &LieForm) -> LieForm {
        self.g_inv.mul(x).mul(&self.g)
    }

    /// gθg⁻¹ − dg·g⁻¹.
    pub fn act(&self, theta: &LieForm) -> LieForm {
        self.conj(theta).sub(&self.g.d().mul(&self.g_inv))
    }

    /// g⁻¹θg + g⁻¹dg.
    pub fn act_inv(&self, theta: &LieForm) -> LieForm {
        self.conj_inv(theta).add(&self.g_inv.mul(&self.g.d()))
    }

    /// a^g = g⁻¹dg for holomorphic g.
    pub fn mc_form(&self) -> Result<LieForm> {
        if !self.is_holomorphic() {
            return Err(Error::NotHolomorphic);
        }
        Ok(self.g_inv.mul(&self.g.d()))
    }

    /// a_of(g,θ) = g⁻¹θ − θ.
    pub fn a_of(&self, theta: &Connection) -> LieForm {
        let t = theta.full();
        self.act_inv(&t).sub(&t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(k: usize, i: usize, j: usize) -> LieForm {
        LieForm::elementary(k, i, j, Form::one())
    }

    #[test]
    fn bracket_examples() {
        let a = e(2, 0, 1);
        assert!(a.bracket(&a).is_zero());
        let d1 = LieForm::diag(2, &Form::dz(0));
        let d2 = LieForm::elementary(2, 0, 0, Form::dz(1));
        assert!(d1.bracket(&d2).is_zero());
    }

    #[test]
    fn pairing_examples() {
        let alg = LieAlgebraSpec::gl(2);
        assert!(alg.pairing(&e(2, 0, 1), &e(2, 0, 1)).is_zero());
        assert_eq!(alg.pairing(&e(2, 0, 1), &e(2, 1, 0)), Form::one());
    }

    #[test]
    fn weighted_blocks() {
        let alg = LieAlgebraSpec::new(
            3,
            vec![Block { indices: vec![0, 1], mu: Coeff::int(1) }, Block { indices: vec![2], mu: Coeff::int(-2) }],
        )
        .unwrap();
        assert_eq!(alg.trace(&LieForm::identity(3)), Form::zero());
        assert!(alg.check(&e(3, 0, 2)).is_err());
        assert!(LieAlgebraSpec::new(2, vec![Block { indices: vec![0], mu: Coeff::one() }]).is_err());
    }

    #[test]
    fn curvature_examples() {
        assert!(Connection::trivial(2).curvature().is_zero());
        let zb = Form::scalar(&Scalar::zb(0));
        let th = Connection::from_form(&LieForm::diag(2, &zb.wedge(&Form::dz(0)))).unwrap();
        let expect = LieForm::diag(2, &Form::dz(0).wedge(&Form::dzb(0)).neg());
        assert_eq!(th.curvature(), expect);
        let nil = Connection::from_form(&LieForm::elementary(2, 0, 1, zb.wedge(&Form::dz(0)))).unwrap();
        assert_eq!(nil.curvature(), nil.full().d());
    }

    #[test]
    fn unipotent_mc_form() {
        let p = Scalar::z(0).mul(&Scalar::z(1)).add(&Scalar::z(1));
        let g = GaugeMap::elementary(2, 0, 1, &p);
        let expect = LieForm::elementary(2, 0, 1, Form::scalar(&p).d());
        assert_eq!(g.mc_form().unwrap(), expect);
        assert!(GaugeMap::identity(2).mc_form().unwrap().is_zero());
    }

    #[test]
    fn non_invertible_rejected() {
        let g = LieForm::identity(2);
        let bad = LieForm::diag(2, &Form::constant(Coeff::int(2)));
        assert_eq!(GaugeMap::new(g, bad, true), Err(Error::NotInvertible));
        let gz = GaugeMap::elementary(2, 0, 1, &Scalar::zb(0));
        assert_eq!(GaugeMap::new(gz.g().clone(), gz.g_inv().clone(), true), Err(Error::NotHolomorphic));
    }

    #[test]
    fn cs_trivial_and_abelian() {
        let alg = LieAlgebraSpec::gl(1);
        assert!(chern_simons(&alg, &Connection::trivial(1)).is_zero());
        let th = LieForm::new(1, vec![Form::scalar(&Scalar::zb(0)).wedge(&Form::dz(1))]);
        let c = Connection::from_form(&th).unwrap();
        assert_eq!(chern_simons(&alg, &c), alg.pairing(&th.d(), &th));
    }
}
