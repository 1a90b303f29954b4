//! The split-model string algebroid Q₀ = T^{1,0} ⊕ ad P ⊕ (T^{1,0})* built
//! from (H, θ): pairing, anchor, Dolbeault operator, Dorfman bracket, the
//! Courant axioms and the integrability equations.

use crate::coeff::Coeff;
use crate::error::{type_err, Error, Result};
use crate::form::Form;
use crate::lie::{Connection, LieAlgebraSpec, LieForm};
use crate::mutation::{DorfmanTerm, Mutation};
use crate::scalar::Scalar;
use crate::vector::VectorField10;

/// (H, θ) with H = H^{3,0} + H^{2,1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringData {
    pub n: usize,
    pub alg: LieAlgebraSpec,
    pub theta: Connection,
    pub h30: Form,
    pub h21: Form,
    curv: LieForm,
}

impl StringData {
    pub fn new(n: usize, alg: LieAlgebraSpec, theta: Connection, h30: Form, h21: Form) -> Result<Self> {
        if !h30.has_bidegree(3, 0) {
            return type_err("H30 must be of type (3,0)");
        }
        if !h21.has_bidegree(2, 1) {
            return type_err("H21 must be of type (2,1)");
        }
        alg.check(&theta.theta10)?;
        alg.check(&theta.theta01)?;
        let curv = theta.curvature();
        Ok(StringData { n, alg, theta, h30, h21, curv })
    }

    /// Splits a 3-form in Ω^{≤1} into H^{3,0} + H^{2,1}.
    pub fn from_h(n: usize, alg: LieAlgebraSpec, theta: Connection, h: &Form) -> Result<Self> {
        let rest = h.sub(&h.component(3, 0)).sub(&h.component(2, 1));
        if !rest.is_zero() {
            return type_err("H must lie in (3,0) + (2,1)");
        }
        StringData::new(n, alg, theta, h.component(3, 0), h.component(2, 1))
    }

    pub fn trivial(n: usize, alg: LieAlgebraSpec) -> Self {
        let k = alg.size();
        StringData::new(n, alg, Connection::trivial(k), Form::zero(), Form::zero()).unwrap()
    }

    pub fn h(&self) -> Form {
        self.h30.add(&self.h21)
    }

    pub fn curvature(&self) -> &LieForm {
        &self.curv
    }

    pub fn k(&self) -> usize {
        self.alg.size()
    }

    pub fn with(&self, theta: Connection, h: &Form) -> Result<StringData> {
        StringData::from_h(self.n, self.alg.clone(), theta, h)
    }
}

/// The three type components of dH + c(F∧F).
pub fn integrability_residual(d: &StringData) -> Result<[Form; 3]> {
    let f = d.curvature();
    if !f.component(0, 2).is_zero() {
        return Err(Error::NonIntegrableConnection);
    }
    let f20 = f.component(2, 0);
    let f11 = f.component(1, 1);
    let c = |a: &LieForm, b: &LieForm| d.alg.pairing(a, b);
    Ok([
        d.h30.del().add(&c(&f20, &f20)),
        d.h30.delbar().add(&d.h21.del()).add(&c(&f20, &f11).scale_int(2)),
        d.h21.delbar().add(&c(&f11, &f11)),
    ])
}

/// F^{0,2} = 0 and dH + c(F∧F) = 0.
pub fn is_integrable(d: &StringData) -> bool {
    matches!(integrability_residual(d), Ok(r) if r.iter().all(Form::is_zero))
}

/// A section V + r + ξ of Q₀.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionQ {
    pub v: VectorField10,
    pub r: LieForm,
    pub xi: Form,
}

impl SectionQ {
    pub fn new(v: VectorField10, r: LieForm, xi: Form) -> Result<Self> {
        if !r.has_degree(0) {
            return type_err("r must be a matrix of functions");
        }
        if !xi.has_bidegree(1, 0) {
            return type_err("xi must be of type (1,0)");
        }
        Ok(SectionQ { v, r, xi })
    }

    pub fn zero(n: usize, k: usize) -> Self {
        SectionQ { v: VectorField10::zero(n), r: LieForm::zero(k), xi: Form::zero() }
    }

    pub fn cotangent(n: usize, k: usize, xi: Form) -> Self {
        SectionQ { xi, ..SectionQ::zero(n, k) }
    }

    pub fn add(&self, o: &SectionQ) -> SectionQ {
        SectionQ { v: self.v.add(&o.v), r: self.r.add(&o.r), xi: self.xi.add(&o.xi) }
    }

    pub fn sub(&self, o: &SectionQ) -> SectionQ {
        SectionQ { v: self.v.sub(&o.v), r: self.r.sub(&o.r), xi: self.xi.sub(&o.xi) }
    }

    pub fn neg(&self) -> SectionQ {
        SectionQ { v: self.v.neg(), r: self.r.neg(), xi: self.xi.neg() }
    }

    pub fn mul_scalar(&self, f: &Scalar) -> SectionQ {
        let ff = Form::scalar(f);
        SectionQ { v: self.v.mul_scalar(f), r: self.r.wedge_left(&ff), xi: self.xi.mul_scalar(f) }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero() && self.r.is_zero() && self.xi.is_zero()
    }

    pub fn to_qform(&self) -> QForm {
        QForm {
            q: 0,
            v: self.v.components().iter().map(Form::scalar).collect(),
            r: self.r.clone(),
            xi: self.xi.clone(),
        }
    }
}

/// A Q₀-valued (0,q)-form: V with (0,q)-form coefficients, r a matrix of
/// (0,q)-forms and ξ a (1,q)-form (ξ = Σ ωⱼ ∧ dzⱼ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QForm {
    pub q: usize,
    pub v: Vec<Form>,
    pub r: LieForm,
    pub xi: Form,
}

impl QForm {
    pub fn add(&self, o: &QForm) -> QForm {
        QForm {
            q: self.q,
            v: self.v.iter().zip(&o.v).map(|(a, b)| a.add(b)).collect(),
            r: self.r.add(&o.r),
            xi: self.xi.add(&o.xi),
        }
    }

    pub fn sub(&self, o: &QForm) -> QForm {
        QForm {
            q: self.q,
            v: self.v.iter().zip(&o.v).map(|(a, b)| a.sub(b)).collect(),
            r: self.r.sub(&o.r),
            xi: self.xi.sub(&o.xi),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(Form::is_zero) && self.r.is_zero() && self.xi.is_zero()
    }
}

fn sgn(q: usize) -> i64 {
    if q.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Polarized pairing ½(ξ₁(V₂) + ξ₂(V₁)) + c(r₁,r₂).
pub fn pairing_q(alg: &LieAlgebraSpec, s1: &SectionQ, s2: &SectionQ) -> Scalar {
    let half = Coeff::ratio(1, 2);
    let x = s1.xi.contract(&s2.v).add(&s2.xi.contract(&s1.v)).scale(&half);
    x.add(&alg.pairing(&s1.r, &s2.r)).to_scalar()
}

/// ⟨x, s⟩ for a Q₀-valued (0,q)-form x and a section s.
pub fn pairing_qform(alg: &LieAlgebraSpec, x: &QForm, s: &SectionQ) -> Form {
    let half = Coeff::ratio(1, 2);
    let a = x.xi.contract(&s.v).scale_int(sgn(x.q));
    let b = s.xi.contract_valued(&x.v);
    a.add(&b).scale(&half).add(&alg.pairing(&x.r, &s.r))
}

pub fn anchor(s: &SectionQ) -> VectorField10 {
    s.v.clone()
}

/// The Atiyah-algebroid image (V, r) in the θ-splitting.
pub fn rho0(s: &SectionQ) -> (VectorField10, LieForm) {
    (s.v.clone(), s.r.clone())
}

/// ∂̄_Q on Q₀-valued (0,q)-forms:
/// (∂̄V, ∂̄^θ r + (−1)^q ι_V F^{1,1}, ∂̄ξ + (−1)^q ι_V H^{2,1} + (−1)^q 2c(r∧F^{1,1})).
pub fn dolbeault_q(d: &StringData, x: &QForm) -> QForm {
    let s = sgn(x.q);
    let f11 = d.curvature().component(1, 1);
    let v = x.v.iter().map(Form::delbar).collect();
    let r = d.theta.delbar_theta(&x.r).add(&f11.contract_valued(&x.v).scale_int(s));
    let xi =
        x.xi.delbar().add(&d.h21.contract_valued(&x.v).scale_int(s)).add(&d.alg.pairing(&x.r, &f11).scale_int(2 * s));
    QForm { q: x.q + 1, v, r, xi }
}

/// Dolbeault operator on sections.
pub fn dolbeault_section(d: &StringData, s: &SectionQ) -> QForm {
    dolbeault_q(d, &s.to_qform())
}

/// The Dorfman bracket of the split model.
pub fn dorfman(d: &StringData, s1: &SectionQ, s2: &SectionQ) -> SectionQ {
    dorfman_with(d, s1, s2, Mutation::None)
}

pub fn dorfman_with(d: &StringData, s1: &SectionQ, s2: &SectionQ, m: Mutation) -> SectionQ {
    use DorfmanTerm as T;
    let (vv, r, xi) = (&s1.v, &s1.r, &s1.xi);
    let (w, t, eta) = (&s2.v, &s2.r, &s2.xi);
    let f20 = d.curvature().component(2, 0);
    let c = |a: &LieForm, b: &LieForm| d.alg.pairing(a, b);
    let del_r = d.theta.del_theta(r);
    let del_t = d.theta.del_theta(t);
    let ivf = f20.contract(vv);
    let iwf = f20.contract(w);

    let v_part = vv.bracket(w).scale(&Coeff::int(m.sign(T::VectorBracket)));

    let r_part = ivf
        .contract(w)
        .scale_int(-m.sign(T::Curvature))
        .add(&del_t.contract(vv).scale_int(m.sign(T::CovV)))
        .add(&del_r.contract(w).scale_int(-m.sign(T::CovW)))
        .add(&r.bracket(t).scale_int(-m.sign(T::AdBracket)));

    let xi_part = eta
        .del()
        .contract(vv)
        .scale_int(m.sign(T::ContractDelEta))
        .add(&eta.contract(vv).del().scale_int(m.sign(T::DelEtaV)))
        .add(&xi.del().contract(w).scale_int(-m.sign(T::ContractDelXi)))
        .add(&d.h30.contract(w).contract(vv).scale_int(m.sign(T::H)))
        .add(&c(&del_r, t).scale_int(2 * m.sign(T::PairDelR)))
        .add(&c(&ivf, t).scale_int(2 * m.sign(T::PairFV)))
        .add(&c(&iwf, r).scale_int(-2 * m.sign(T::PairFW)));

    SectionQ { v: v_part, r: r_part, xi: xi_part }
}

/// Residuals of the Courant axioms D1–D5.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CourantResiduals {
    /// [u,[v,w]] − [[u,v],w] − [v,[u,w]]
    pub d1: SectionQ,
    /// π[u,v] − [πu, πv]
    pub d2: VectorField10,
    /// [u,φv] − π(u)(φ)v − φ[u,v]
    pub d3: SectionQ,
    /// π(u)⟨v,w⟩ − ⟨[u,v],w⟩ − ⟨v,[u,w]⟩
    pub d4: Scalar,
    /// [u,v] + [v,u] − 2(0,0,∂⟨u,v⟩)
    pub d5: SectionQ,
}

impl CourantResiduals {
    pub fn all_zero(&self) -> bool {
        self.d1.is_zero() && self.d2.is_zero() && self.d3.is_zero() && self.d4.is_zero() && self.d5.is_zero()
    }

    /// Names of the axioms with nonzero residual.
    pub fn failing(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.d1.is_zero() {
            v.push("D1");
        }
        if !self.d2.is_zero() {
            v.push("D2");
        }
        if !self.d3.is_zero() {
            v.push("D3");
        }
        if !self.d4.is_zero() {
            v.push("D4");
        }
        if !self.d5.is_zero() {
            v.push("D5");
        }
        v
    }
}

pub fn courant_axioms_residual(
    d: &StringData,
    u: &SectionQ,
    v: &SectionQ,
    w: &SectionQ,
    phi: &Scalar,
) -> CourantResiduals {
    courant_axioms_residual_with(d, u, v, w, phi, Mutation::None)
}

pub fn courant_axioms_residual_with(
    d: &StringData,
    u: &SectionQ,
    v: &SectionQ,
    w: &SectionQ,
    phi: &Scalar,
    m: Mutation,
) -> CourantResiduals {
    let br = |a: &SectionQ, b: &SectionQ| dorfman_with(d, a, b, m);
    let uv = br(u, v);
    let uw = br(u, w);
    let d1 = br(u, &br(v, w)).sub(&br(&uv, w)).sub(&br(v, &uw));
    let d2 = anchor(&uv).sub(&u.v.bracket(&v.v));
    let d3 = br(u, &v.mul_scalar(phi)).sub(&v.mul_scalar(&u.v.apply(phi))).sub(&uv.mul_scalar(phi));
    let d4 = u.v.apply(&pairing_q(&d.alg, v, w)).sub(&pairing_q(&d.alg, &uv, w)).sub(&pairing_q(&d.alg, v, &uw));
    let duv = Form::scalar(&pairing_q(&d.alg, u, v)).del().scale_int(2);
    let d5 = uv.add(&br(v, u)).sub(&SectionQ::cotangent(d.n, d.k(), duv));
    CourantResiduals { d1, d2, d3, d4, d5 }
}
