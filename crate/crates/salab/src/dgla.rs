//! The deformation complex L_Q = Ω^{0,•}(ad P) × Ω^{≤•}, its bracket and
//! Maurer–Cartan equation, and the gauge group 𝒢 acting on pairs (H, θ).

use crate::algebroid::{integrability_residual, StringData};
use crate::coeff::Coeff;
use crate::error::{type_err, Error, Result};
use crate::form::Form;
use crate::lie::{cs_difference, Connection, GaugeMap, LieForm};
use crate::mutation::Mutation;
use crate::scalar::{Scalar, Var};

/// Whether every component of `b` has holomorphic degree ≥ 2 and total degree k+2.
pub fn in_omega_leq(b: &Form, k: usize) -> bool {
    b.bidegrees().iter().all(|&(p, q)| p >= 2 && p + q == k + 2)
}

/// (α, b) ∈ Ω^{0,k}(ad P) × Ω^{≤k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LElement {
    pub degree: usize,
    pub alpha: LieForm,
    pub b: Form,
}

impl LElement {
    pub fn new(degree: usize, alpha: LieForm, b: Form) -> Result<Self> {
        if !alpha.has_bidegree(0, degree) {
            return type_err(format!("alpha must be of type (0,{degree})"));
        }
        if !in_omega_leq(&b, degree) {
            return type_err(format!("b must lie in Ω^≤{degree}"));
        }
        Ok(LElement { degree, alpha, b })
    }

    pub fn zero(degree: usize, k: usize) -> Self {
        LElement { degree, alpha: LieForm::zero(k), b: Form::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.b.is_zero()
    }

    fn same_degree(&self, o: &LElement) -> Result<()> {
        if self.degree != o.degree {
            return Err(Error::Dimension(format!("degrees {} and {} differ", self.degree, o.degree)));
        }
        Ok(())
    }

    pub fn add(&self, o: &LElement) -> Result<LElement> {
        self.same_degree(o)?;
        Ok(LElement { degree: self.degree, alpha: self.alpha.add(&o.alpha), b: self.b.add(&o.b) })
    }

    pub fn sub(&self, o: &LElement) -> Result<LElement> {
        self.add(&o.scale(&Coeff::int(-1)))
    }

    pub fn scale(&self, c: &Coeff) -> LElement {
        LElement { degree: self.degree, alpha: self.alpha.scale(c), b: self.b.scale(c) }
    }
}

fn check_base(base: &StringData) -> Result<()> {
    let f = base.curvature();
    if !f.component(0, 2).is_zero() {
        return Err(Error::BadCurvatureType("F^{0,2}"));
    }
    if !f.component(2, 0).is_zero() {
        return Err(Error::BadCurvatureType("F^{2,0}"));
    }
    Ok(())
}

/// (∂̄^θα, db − 2c(∂^θα∧F)).
pub fn d_q(base: &StringData, x: &LElement) -> Result<LElement> {
    check_base(base)?;
    let th = &base.theta;
    let b = x.b.d().sub(&base.alg.pairing(&th.del_theta(&x.alpha), base.curvature()).scale_int(2));
    Ok(LElement { degree: x.degree + 1, alpha: th.delbar_theta(&x.alpha), b })
}

/// ([α,α′], (−1)^k 2c(∂^θα∧∂^θα′)).
pub fn dgla_bracket(base: &StringData, x: &LElement, y: &LElement) -> Result<LElement> {
    dgla_bracket_with(base, x, y, Mutation::None)
}

pub fn dgla_bracket_with(base: &StringData, x: &LElement, y: &LElement, m: Mutation) -> Result<LElement> {
    check_base(base)?;
    let th = &base.theta;
    let mut sign = if x.degree.is_multiple_of(2) || m == Mutation::DglaBracketParity { 2 } else { -2 };
    if m == Mutation::DglaBracket {
        sign = -sign;
    }
    let b = base.alg.pairing(&th.del_theta(&x.alpha), &th.del_theta(&y.alpha)).scale_int(sign);
    Ok(LElement { degree: x.degree + y.degree, alpha: x.alpha.bracket(&y.alpha), b })
}

/// d_Q x + ½[x,x] for x of degree 1.
pub fn mc_residual(base: &StringData, x: &LElement) -> Result<LElement> {
    mc_residual_with(base, x, Mutation::None)
}

pub fn mc_residual_with(base: &StringData, x: &LElement, m: Mutation) -> Result<LElement> {
    if x.degree != 1 {
        return type_err("Maurer–Cartan elements have degree 1");
    }
    let br = dgla_bracket_with(base, x, x, m)?.scale(&Coeff::ratio(1, 2));
    d_q(base, x)?.add(&br)
}

/// (θ+α, H−b), without checking the Maurer–Cartan equation.
pub fn hat_epsilon(base: &StringData, x: &LElement) -> Result<StringData> {
    if x.degree != 1 {
        return type_err("the ε̂ chart takes degree-1 elements");
    }
    base.with(base.theta.shift(&x.alpha)?, &base.h().sub(&x.b))
}

/// (θ+α, H−b) for a Maurer–Cartan element.
pub fn deformed_data(base: &StringData, x: &LElement) -> Result<StringData> {
    if !mc_residual(base, x)?.is_zero() {
        return Err(Error::MCViolated);
    }
    hat_epsilon(base, x)
}

/// F_{θ+α} − F − ∂^θα.
pub fn deformed_curvature_residual(base: &StringData, x: &LElement) -> Result<LieForm> {
    let th2 = base.theta.shift(&x.alpha)?;
    Ok(th2.curvature().sub(base.curvature()).sub(&base.theta.del_theta(&x.alpha)))
}

/// 2c(∂^θα∧F) for a ∂̄^θ-closed α ∈ Ω^{0,1}(ad P).
pub fn obstruction_rep(base: &StringData, alpha: &LieForm) -> Result<Form> {
    check_base(base)?;
    if !alpha.has_bidegree(0, 1) {
        return type_err("alpha must be of type (0,1)");
    }
    if !base.theta.delbar_theta(alpha).is_zero() {
        return Err(Error::NotACocycle);
    }
    Ok(base.alg.pairing(&base.theta.del_theta(alpha), base.curvature()).scale_int(2))
}

/// Residuals of the DGLA axioms on x, y, z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DglaResiduals {
    /// [x,y] + (−1)^{kl}[y,x]
    pub skew: LElement,
    /// (−1)^{km}[x,[y,z]] + (−1)^{lk}[y,[z,x]] + (−1)^{ml}[z,[x,y]]
    pub jacobi: LElement,
    /// d_Q d_Q x
    pub dq2: LElement,
    /// d_Q[x,y] − [d_Qx,y] − (−1)^k[x,d_Qy]
    pub derivation: LElement,
}

impl DglaResiduals {
    pub fn all_zero(&self) -> bool {
        self.failing().is_empty()
    }

    pub fn failing(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        for (name, r) in
            [("skew", &self.skew), ("jacobi", &self.jacobi), ("dq2", &self.dq2), ("derivation", &self.derivation)]
        {
            if !r.is_zero() {
                v.push(name);
            }
        }
        v
    }
}

fn sgn(e: usize) -> Coeff {
    Coeff::int(if e.is_multiple_of(2) { 1 } else { -1 })
}

pub fn dgla_axioms_residual(base: &StringData, x: &LElement, y: &LElement, z: &LElement) -> Result<DglaResiduals> {
    dgla_axioms_residual_with(base, x, y, z, Mutation::None)
}

pub fn dgla_axioms_residual_with(
    base: &StringData,
    x: &LElement,
    y: &LElement,
    z: &LElement,
    m: Mutation,
) -> Result<DglaResiduals> {
    let br = |a: &LElement, b: &LElement| dgla_bracket_with(base, a, b, m);
    let (k, l, n) = (x.degree, y.degree, z.degree);
    let skew = br(x, y)?.add(&br(y, x)?.scale(&sgn(k * l)))?;
    let jacobi = br(x, &br(y, z)?)?
        .scale(&sgn(k * n))
        .add(&br(y, &br(z, x)?)?.scale(&sgn(l * k)))?
        .add(&br(z, &br(x, y)?)?.scale(&sgn(n * l)))?;
    let dq2 = d_q(base, &d_q(base, x)?)?;
    let derivation =
        d_q(base, &br(x, y)?)?.sub(&br(&d_q(base, x)?, y)?)?.sub(&br(x, &d_q(base, y)?)?.scale(&sgn(k)))?;
    Ok(DglaResiduals { skew, jacobi, dq2, derivation })
}

/// (g, a, B) ∈ 𝒢 with g any invertible polynomial gauge map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeElement {
    pub g: GaugeMap,
    pub a: LieForm,
    pub b: Form,
}

impl GaugeElement {
    pub fn new(g: GaugeMap, a: LieForm, b: Form) -> Result<Self> {
        if !a.has_bidegree(1, 0) {
            return type_err("gauge a must be of type (1,0)");
        }
        if !b.has_bidegree(2, 0) {
            return type_err("gauge B must be of type (2,0)");
        }
        Ok(GaugeElement { g, a, b })
    }

    pub fn identity(k: usize) -> Self {
        GaugeElement { g: GaugeMap::identity(k), a: LieForm::zero(k), b: Form::zero() }
    }

    /// (g⁻¹, −gag⁻¹, −B).
    pub fn inverse(&self) -> Self {
        GaugeElement { g: self.g.inverse(), a: self.g.conj(&self.a).neg(), b: self.b.neg() }
    }

    pub fn difference(&self, o: &GaugeElement) -> (LieForm, LieForm, Form) {
        (self.g.g().sub(o.g.g()), self.a.sub(&o.a), self.b.sub(&o.b))
    }
}

/// (gg′, B + B′ + c(g′⁻¹ag′ ∧ a′), g′⁻¹ag′ + a′).
pub fn gauge_product(x: &GaugeElement, y: &GaugeElement, alg: &crate::lie::LieAlgebraSpec) -> GaugeElement {
    let ca = y.g.conj_inv(&x.a);
    GaugeElement { g: x.g.compose(&y.g), a: ca.add(&y.a), b: x.b.add(&y.b).add(&alg.pairing(&ca, &y.a)) }
}

/// (H + dB − cs_difference(θ, a), g(θ + a)).
pub fn gauge_act(x: &GaugeElement, p: &StringData) -> Result<StringData> {
    let h = p.h().add(&x.b.d()).sub(&cs_difference(&p.alg, &p.theta, &x.a));
    let th = Connection::from_form(&x.g.act(&p.theta.full().add(&x.a)))?;
    p.with(th, &h)
}

/// A tangent vector (Ḣ, θ̇) at a pair (H, θ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentPair {
    pub hdot: Form,
    pub thetadot: LieForm,
}

impl TangentPair {
    pub fn sub(&self, o: &TangentPair) -> TangentPair {
        TangentPair { hdot: self.hdot.sub(&o.hdot), thetadot: self.thetadot.sub(&o.thetadot) }
    }

    pub fn is_zero(&self) -> bool {
        self.hdot.is_zero() && self.thetadot.is_zero()
    }
}

/// L(α, a, b) = (db − 2c(a∧F), −d^θα + a).
pub fn infinitesimal_action(base: &StringData, alpha: &LieForm, a: &LieForm, b: &Form) -> Result<TangentPair> {
    if !alpha.has_degree(0) && !alpha.is_zero() {
        return type_err("alpha must be a matrix of functions");
    }
    if !a.has_bidegree(1, 0) {
        return type_err("a must be of type (1,0)");
    }
    if !b.has_bidegree(2, 0) {
        return type_err("b must be of type (2,0)");
    }
    let hdot = b.d().sub(&base.alg.pairing(a, base.curvature()).scale_int(2));
    Ok(TangentPair { hdot, thetadot: base.theta.cov_d(alpha).neg().add(a) })
}

/// The t-linear part of (I + tα, ta, tb)·(H, θ), computed with t² = 0.
pub fn first_order_gauge(base: &StringData, alpha: &LieForm, a: &LieForm, b: &Form) -> Result<TangentPair> {
    let k = base.k();
    let t = Scalar::var(Var::T);
    let ta = alpha.map(|f| f.mul_scalar(&t));
    let id = LieForm::identity(k);
    let g = GaugeMap::new_mod_t(id.add(&ta), id.sub(&ta), 1)?;
    let x = GaugeElement::new(g, a.map(|f| f.mul_scalar(&t)), b.mul_scalar(&t))?;
    let p = gauge_act(&x, base)?;
    Ok(TangentPair { hdot: p.h().t_coeff(1), thetadot: p.theta.full().t_coeff(1) })
}

/// dε̂₀(α, b) = (−b, α).
pub fn d_hat_epsilon0(x: &LElement) -> TangentPair {
    TangentPair { hdot: x.b.neg(), thetadot: x.alpha.clone() }
}

/// φ(Ḣ, θ̇) = (θ̇^{0,1}, −Ḣ − 2c(θ̇^{1,0}∧F)).
pub fn phi_map(base: &StringData, t: &TangentPair) -> Result<LElement> {
    let b = t.hdot.neg().sub(&base.alg.pairing(&t.thetadot.component(1, 0), base.curvature()).scale_int(2));
    LElement::new(1, t.thetadot.component(0, 1), b)
}

/// (∂̄^θθ̇^{0,1}, d(Ḣ + 2c(θ̇∧F))): zero exactly on integrable tangents.
pub fn tangent_integrability_residual(base: &StringData, t: &TangentPair) -> (LieForm, Form) {
    let a = base.theta.delbar_theta(&t.thetadot.component(0, 1));
    let h = t.hdot.add(&base.alg.pairing(&t.thetadot, base.curvature()).scale_int(2)).d();
    (a, h)
}

/// For (H′, θ′) with θ′ − θ of type (1,0)+(0,1): the degree-1 element (α, b)
/// and a-field (0, a, 0) with (0, a, 0)·(H′, θ′) = ε̂(α, b), where
/// α = (θ′−θ)^{0,1}, a = (θ−θ′)^{1,0}, b = H − H′ + cs_difference(θ′, a).
pub fn epsilon_chart(base: &StringData, target: &StringData) -> Result<(LElement, GaugeElement)> {
    let diff = target.theta.full().sub(&base.theta.full());
    let alpha = diff.component(0, 1);
    let a = diff.component(1, 0).neg();
    let b = base.h().sub(&target.h()).add(&cs_difference(&base.alg, &target.theta, &a));
    let x = LElement::new(1, alpha, b)?;
    Ok((x, GaugeElement::new(GaugeMap::identity(base.k()), a, Form::zero())?))
}

/// dH + c(F∧F) of the deformed pair, or the (0,2) curvature if that is nonzero.
pub fn deformed_integrability(base: &StringData, x: &LElement) -> Result<[Form; 3]> {
    integrability_residual(&hat_epsilon(base, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraSpec;
    use crate::text::parse_form;

    fn base() -> StringData {
        // θ = z̄1 dz2 e12 has F = dz̄1∧dz2 e12 of type (1,1).
        let th =
            Connection::new(LieForm::elementary(2, 0, 1, parse_form("zb1*dz2", 2).unwrap()), LieForm::zero(2)).unwrap();
        StringData::new(2, LieAlgebraSpec::gl(2), th, Form::zero(), Form::zero()).unwrap()
    }

    fn lf(i: usize, j: usize, s: &str) -> LieForm {
        LieForm::elementary(2, i, j, parse_form(s, 2).unwrap())
    }

    #[test]
    fn omega_leq_membership() {
        assert!(in_omega_leq(&parse_form("dz1^dz2", 2).unwrap(), 0));
        assert!(!in_omega_leq(&parse_form("dz1^dzb2", 2).unwrap(), 0));
        assert!(in_omega_leq(&parse_form("dz1^dz2^dzb2", 2).unwrap(), 1));
        assert!(LElement::new(1, LieForm::zero(2), parse_form("dz1^dzb1^dzb2", 2).unwrap()).is_err());
    }

    #[test]
    fn d_q_of_pure_b() {
        let b = parse_form("zb1*dz1^dz2", 2).unwrap();
        let x = LElement::new(0, LieForm::zero(2), b.clone()).unwrap();
        let out = d_q(&base(), &x).unwrap();
        assert!(out.alpha.is_zero());
        assert_eq!(out.b, b.d());
    }

    #[test]
    fn d_q_rejects_20_curvature() {
        let th = Connection::new(lf(0, 1, "z1*dz2"), LieForm::zero(2)).unwrap();
        let d = StringData::new(2, LieAlgebraSpec::gl(2), th, Form::zero(), Form::zero()).unwrap();
        assert!(matches!(d_q(&d, &LElement::zero(0, 2)), Err(Error::BadCurvatureType(_))));
    }

    #[test]
    fn degree_zero_self_bracket_vanishes() {
        let x = LElement::new(0, lf(0, 1, "z1*zb2").add(&lf(1, 0, "zb1")), Form::zero()).unwrap();
        assert!(dgla_bracket(&base(), &x, &x).unwrap().is_zero());
    }

    #[test]
    fn axioms_on_fixed_elements() {
        let x = LElement::new(0, lf(0, 1, "z1*zb2").add(&lf(1, 0, "zb1")), parse_form("dz1^dz2", 2).unwrap()).unwrap();
        let y = LElement::new(1, lf(1, 0, "z2*dzb1").add(&lf(0, 0, "zb2*dzb2")), Form::zero()).unwrap();
        let z = LElement::new(1, lf(1, 1, "z1*dzb2"), parse_form("zb1*dz1^dz2^dzb2", 2).unwrap()).unwrap();
        let r = dgla_axioms_residual(&base(), &x, &y, &z).unwrap();
        assert!(r.all_zero(), "{:?}", r.failing());
        let r = dgla_axioms_residual(&base(), &y, &z, &x).unwrap();
        assert!(r.all_zero(), "{:?}", r.failing());
    }

    #[test]
    fn parity_mutation_breaks_skew() {
        let x = LElement::new(0, lf(0, 1, "zb1*z1"), Form::zero()).unwrap();
        let y = LElement::new(1, lf(1, 0, "z2*dzb2"), Form::zero()).unwrap();
        let r = dgla_axioms_residual_with(&base(), &x, &y, &x, Mutation::DglaBracketParity).unwrap();
        assert!(!r.skew.is_zero());
    }

    #[test]
    fn trivial_mc_elements() {
        let d = base();
        assert!(mc_residual(&d, &LElement::zero(1, 2)).unwrap().is_zero());
        let b = parse_form("z1*dz1^dz2^dzb1", 2).unwrap().d().add(&parse_form("dz1^dz2^dzb1", 2).unwrap());
        let x = LElement::new(1, LieForm::zero(2), b.clone()).unwrap();
        assert!(mc_residual(&d, &x).unwrap().is_zero());
        let out = deformed_data(&d, &x).unwrap();
        assert_eq!(out.h(), d.h().sub(&b));
        let bad = LElement::new(1, LieForm::zero(2), parse_form("zb2*dz1^dz2^dzb1", 2).unwrap()).unwrap();
        assert_eq!(deformed_data(&d, &bad), Err(Error::MCViolated));
    }

    #[test]
    fn obstruction_examples() {
        let flat = StringData::trivial(2, LieAlgebraSpec::gl(2));
        let a = lf(0, 1, "z1*dzb1");
        assert!(obstruction_rep(&flat, &a).unwrap().is_zero());
        assert_eq!(obstruction_rep(&base(), &lf(0, 1, "zb2*dzb1")), Err(Error::NotACocycle));
        // α = ∂̄^θ(z1 z̄2 e21) is a cocycle with nonzero obstruction.
        let d = base();
        let alpha = d.theta.delbar_theta(&lf(1, 0, "z1*zb2"));
        let ob = obstruction_rep(&d, &alpha).unwrap();
        assert!(!ob.is_zero());
        assert!(ob.d().is_zero());
    }

    #[test]
    fn gauge_identity_and_b_shift() {
        let d = base();
        let id = GaugeElement::identity(2);
        assert_eq!(gauge_act(&id, &d).unwrap(), d);
        let b = parse_form("zb1*dz1^dz2", 2).unwrap();
        let x = GaugeElement::new(GaugeMap::identity(2), LieForm::zero(2), b.clone()).unwrap();
        assert_eq!(gauge_act(&x, &d).unwrap().h(), d.h().add(&b.d()));
    }

    #[test]
    fn infinitesimal_examples() {
        let flat = StringData::trivial(2, LieAlgebraSpec::gl(2));
        let b = parse_form("zb1*dz1^dz2", 2).unwrap();
        let t = infinitesimal_action(&flat, &LieForm::zero(2), &LieForm::zero(2), &b).unwrap();
        assert_eq!(t, TangentPair { hdot: b.d(), thetadot: LieForm::zero(2) });
        let al = lf(0, 1, "z1*zb2");
        let t = infinitesimal_action(&flat, &al, &LieForm::zero(2), &Form::zero()).unwrap();
        assert_eq!(t.thetadot, al.d().neg());
        let d = base();
        let a = lf(1, 0, "z2*dz1");
        assert_eq!(first_order_gauge(&d, &al, &a, &b).unwrap(), infinitesimal_action(&d, &al, &a, &b).unwrap());
    }

    #[test]
    fn phi_retracts_d_hat_epsilon() {
        let x = LElement::new(1, lf(1, 0, "z1*dzb2"), parse_form("zb1*dz1^dz2^dzb2", 2).unwrap()).unwrap();
        assert_eq!(phi_map(&base(), &d_hat_epsilon0(&x)).unwrap(), x);
    }
}
