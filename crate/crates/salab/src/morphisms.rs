//! Morphisms f_g(B,a) between split models, isomorphism certificates and the
//! automorphism sheaf 𝒮 of pairs (g, B).

use crate::algebroid::{QForm, SectionQ, StringData};
use crate::error::{type_err, Result};
use crate::form::Form;
use crate::lie::{cs_difference, Connection, GaugeMap, LieAlgebraSpec, LieForm};
use crate::mutation::Mutation;

/// (g, a, B): conjugation by g, a ∈ Ω^{1,0}(ad P), B ∈ Ω^{2,0}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismData {
    pub g: GaugeMap,
    pub a: LieForm,
    pub b: Form,
}

impl MorphismData {
    pub fn new(g: GaugeMap, a: LieForm, b: Form) -> Result<Self> {
        if !a.has_bidegree(1, 0) {
            return type_err("morphism a must be of type (1,0)");
        }
        if !b.has_bidegree(2, 0) {
            return type_err("morphism B must be of type (2,0)");
        }
        Ok(MorphismData { g, a, b })
    }

    pub fn identity(k: usize) -> Self {
        MorphismData { g: GaugeMap::identity(k), a: LieForm::zero(k), b: Form::zero() }
    }

    /// The morphism Q_d → Q_{d′} certified by (g, B) with `iso_residual` zero:
    /// a = g⁻¹θ′ − θ and the B-field acts as ξ ↦ ξ − i_V B.
    pub fn from_certificate(d: &StringData, d2: &StringData, g: &GaugeMap, b: &Form) -> Result<Self> {
        let a = connecting_form(d, d2, g)?;
        MorphismData::new(g.clone(), a, b.neg())
    }

    /// The B of the certificate (g, B) for which `iso_residual` vanishes.
    pub fn certificate_b(&self) -> Form {
        self.b.neg()
    }
}

fn connecting_form(d: &StringData, d2: &StringData, g: &GaugeMap) -> Result<LieForm> {
    let a = g.act_inv(&d2.theta.full()).sub(&d.theta.full());
    if !a.component(0, 1).is_zero() {
        return type_err("g⁻¹θ′ − θ has a (0,1) part: g does not map θ^{0,1} to θ′^{0,1}");
    }
    Ok(a)
}

/// (V, g(r + ι_V a)g⁻¹, ξ + ι_V B − c(ι_V a ∧ a) − 2c(r∧a)) on Q₀-valued forms.
pub fn apply_morphism_qform(alg: &LieAlgebraSpec, m: &MorphismData, x: &QForm) -> QForm {
    let iva = m.a.contract_valued(&x.v);
    let r = m.g.conj(&x.r.add(&iva));
    let xi =
        x.xi.add(&m.b.contract_valued(&x.v)).sub(&alg.pairing(&iva, &m.a)).sub(&alg.pairing(&x.r, &m.a).scale_int(2));
    QForm { q: x.q, v: x.v.clone(), r, xi }
}

pub fn apply_morphism(alg: &LieAlgebraSpec, m: &MorphismData, s: &SectionQ) -> SectionQ {
    let x = apply_morphism_qform(alg, m, &s.to_qform());
    SectionQ { v: s.v.clone(), r: x.r, xi: x.xi }
}

/// H′ − H + 2c(a∧F) + c(a∧d^θa) + ⅓c(a,[a,a]) + dB with a = g⁻¹θ′ − θ.
pub fn iso_residual(d: &StringData, d2: &StringData, g: &GaugeMap, b: &Form) -> Result<Form> {
    if !b.has_bidegree(2, 0) {
        return type_err("B must be of type (2,0)");
    }
    let a = connecting_form(d, d2, g)?;
    Ok(d2.h().sub(&d.h()).add(&cs_difference(&d.alg, &d.theta, &a)).add(&b.d()))
}

/// A pair (g, B) with g holomorphic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutElement {
    pub g: GaugeMap,
    pub b: Form,
}

impl AutElement {
    pub fn new(g: GaugeMap, b: Form) -> Result<Self> {
        if !g.is_holomorphic() {
            return Err(crate::Error::NotHolomorphic);
        }
        if !b.has_bidegree(2, 0) {
            return type_err("B must be of type (2,0)");
        }
        Ok(AutElement { g, b })
    }

    pub fn identity(k: usize) -> Self {
        AutElement { g: GaugeMap::identity(k), b: Form::zero() }
    }

    /// (g⁻¹, −B).
    pub fn inverse(&self) -> AutElement {
        AutElement { g: self.g.inverse(), b: self.b.neg() }
    }

    pub fn to_morphism(&self, theta: &Connection) -> MorphismData {
        MorphismData { g: self.g.clone(), a: self.g.a_of(theta), b: self.b.clone() }
    }
}

/// dB − 2c(a^g∧F) − c(a^g∧d^θa^g) − ⅓c(a^g,[a^g,a^g]) with a^g = g⁻¹θ − θ.
pub fn aut_condition_residual(alg: &LieAlgebraSpec, theta: &Connection, x: &AutElement) -> Form {
    let a = x.g.a_of(theta);
    x.b.d().sub(&cs_difference(alg, theta, &a))
}

/// (g₁g₂, B₁ + B₂ + c(g₂⁻¹a^{g₁}g₂ ∧ a^{g₂})) with a^g taken relative to θ.
pub fn s_product(alg: &LieAlgebraSpec, theta: &Connection, x: &AutElement, y: &AutElement) -> AutElement {
    s_product_with(alg, theta, x, y, Mutation::None)
}

pub fn s_product_with(
    alg: &LieAlgebraSpec,
    theta: &Connection,
    x: &AutElement,
    y: &AutElement,
    m: Mutation,
) -> AutElement {
    let a1 = x.g.a_of(theta);
    let a2 = y.g.a_of(theta);
    let corr = alg.pairing(&y.g.conj_inv(&a1), &a2);
    let sign = if m == Mutation::GroupProduct { -1 } else { 1 };
    AutElement { g: x.g.compose(&y.g), b: x.b.add(&y.b).add(&corr.scale_int(sign)) }
}

/// Difference of two elements, as (g-part, B-part) residuals.
pub fn aut_difference(x: &AutElement, y: &AutElement) -> (LieForm, Form) {
    (x.g.g().sub(y.g.g()), x.b.sub(&y.b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::pairing_q;
    use crate::scalar::Scalar;
    use crate::text::parse_form;
    use crate::vector::VectorField10;

    fn alg() -> LieAlgebraSpec {
        LieAlgebraSpec::gl(2)
    }

    fn section() -> SectionQ {
        SectionQ::new(
            VectorField10::new(vec![Scalar::z(1), Scalar::one()]),
            LieForm::elementary(2, 0, 1, Form::scalar(&Scalar::zb(0))),
            parse_form("z1*dz2", 2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_morphism() {
        let s = section();
        assert_eq!(apply_morphism(&alg(), &MorphismData::identity(2), &s), s);
    }

    #[test]
    fn b_field_morphism() {
        let b = parse_form("z1*dz1^dz2", 2).unwrap();
        let m = MorphismData::new(GaugeMap::identity(2), LieForm::zero(2), b.clone()).unwrap();
        let s = section();
        let out = apply_morphism(&alg(), &m, &s);
        assert_eq!(out.xi, s.xi.add(&b.contract(&s.v)));
        assert_eq!(out.r, s.r);
    }

    #[test]
    fn morphism_preserves_pairing() {
        let a = LieForm::elementary(2, 1, 0, parse_form("z2*dz1 + dz2", 2).unwrap());
        let g = GaugeMap::elementary(2, 0, 1, &Scalar::z(0));
        let m = MorphismData::new(g, a, parse_form("dz1^dz2", 2).unwrap()).unwrap();
        let s = section();
        let t = SectionQ::new(VectorField10::coordinate(2, 0), LieForm::identity(2), Form::dz(1)).unwrap();
        let ps = apply_morphism(&alg(), &m, &s);
        let pt = apply_morphism(&alg(), &m, &t);
        assert_eq!(pairing_q(&alg(), &ps, &pt), pairing_q(&alg(), &s, &t));
    }

    #[test]
    fn exact_shift_is_isomorphic() {
        let th =
            Connection::new(LieForm::elementary(2, 0, 1, parse_form("zb1*dz1", 2).unwrap()), LieForm::zero(2)).unwrap();
        let d = StringData::new(2, alg(), th.clone(), Form::zero(), Form::zero()).unwrap();
        let b = parse_form("zb2*dz1^dz2", 2).unwrap();
        let d2 = d.with(th, &d.h().sub(&b.d())).unwrap();
        assert!(iso_residual(&d, &d2, &GaugeMap::identity(2), &b).unwrap().is_zero());
        assert!(iso_residual(&d, &d, &GaugeMap::identity(2), &Form::zero()).unwrap().is_zero());
    }

    #[test]
    fn unipotent_aut_element() {
        let g = GaugeMap::elementary(2, 0, 1, &Scalar::z(0).mul(&Scalar::z(1)));
        let x = AutElement::new(g, Form::zero()).unwrap();
        assert!(aut_condition_residual(&alg(), &Connection::trivial(2), &x).is_zero());
        let id = AutElement::identity(2);
        let th = Connection::trivial(2);
        assert_eq!(s_product(&alg(), &th, &x, &id), x);
        assert_eq!(s_product(&alg(), &th, &id, &x), x);
        assert_eq!(s_product(&alg(), &th, &x, &x.inverse()).b, Form::zero());
    }
}
