//! Čech data for 𝒮 on a combinatorial cover whose charts share one
//! coordinate algebra. The reference connection θ₀ is the trivial one, so
//! a^g = g⁻¹dg and CS(θ₀) = 0.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::form::Form;
use crate::lie::{chern_simons, cs_difference, Connection, GaugeMap, LieAlgebraSpec, LieForm};
use crate::morphisms::{s_product, s_product_with, AutElement};
use crate::mutation::Mutation;

/// Index set 0..m with marked overlaps (i<j) and triple overlaps (i<j<k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub m: usize,
    pub pairs: Vec<(usize, usize)>,
    pub triples: Vec<(usize, usize, usize)>,
}

impl Cover {
    pub fn new(m: usize, pairs: Vec<(usize, usize)>, triples: Vec<(usize, usize, usize)>) -> Result<Self> {
        let bad = |s: String| Err(Error::Type(s));
        for &(i, j) in &pairs {
            if !(i < j && j < m) {
                return bad(format!("overlap ({},{}) must satisfy i<j<=m", i + 1, j + 1));
            }
        }
        for &(i, j, k) in &triples {
            if !(i < j && j < k && k < m) {
                return bad(format!("triple ({},{},{}) must be increasing", i + 1, j + 1, k + 1));
            }
            for p in [(i, j), (j, k), (i, k)] {
                if !pairs.contains(&p) {
                    return bad(format!(
                        "triple ({},{},{}) needs overlap ({},{})",
                        i + 1,
                        j + 1,
                        k + 1,
                        p.0 + 1,
                        p.1 + 1
                    ));
                }
            }
        }
        Ok(Cover { m, pairs, triples })
    }

    /// All pairs and the triple of a three-chart cover.
    pub fn full(m: usize) -> Self {
        let pairs = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        let triples = (0..m).flat_map(|i| (i + 1..m).flat_map(move |j| (j + 1..m).map(move |k| (i, j, k)))).collect();
        Cover { m, pairs, triples }
    }
}

fn theta0(k: usize) -> Connection {
    Connection::trivial(k)
}

/// (g_ij, B_ij) on the marked overlaps i<j; the reverse orientation is the
/// 𝒮-inverse (g_ij⁻¹, −B_ij).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    pub k: usize,
    pub entries: BTreeMap<(usize, usize), AutElement>,
}

impl Cochain1 {
    pub fn new(k: usize, cov: &Cover, entries: BTreeMap<(usize, usize), AutElement>) -> Result<Self> {
        for key in entries.keys() {
            if !cov.pairs.contains(key) {
                return Err(Error::Type(format!("cochain entry on unmarked overlap ({},{})", key.0 + 1, key.1 + 1)));
            }
        }
        for p in &cov.pairs {
            if !entries.contains_key(p) {
                return Err(Error::Type(format!("cochain missing overlap ({},{})", p.0 + 1, p.1 + 1)));
            }
        }
        Ok(Cochain1 { k, entries })
    }

    pub fn trivial(k: usize, cov: &Cover) -> Self {
        Cochain1 { k, entries: cov.pairs.iter().map(|&p| (p, AutElement::identity(k))).collect() }
    }

    /// (g_ij, B_ij) for either orientation.
    pub fn get(&self, i: usize, j: usize) -> AutElement {
        if i < j {
            self.entries[&(i, j)].clone()
        } else {
            self.entries[&(j, i)].inverse()
        }
    }

    pub fn g(&self, i: usize, j: usize) -> GaugeMap {
        self.get(i, j).g
    }

    /// a_ij = a^{g_ij} = g_ij⁻¹ dg_ij.
    pub fn a(&self, i: usize, j: usize) -> LieForm {
        self.g(i, j).a_of(&theta0(self.k))
    }
}

/// (h_i, B_i) per chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain0 {
    pub elems: Vec<AutElement>,
}

impl Cochain0 {
    /// Pointwise product in 𝒮.
    pub fn product(&self, alg: &LieAlgebraSpec, o: &Cochain0) -> Cochain0 {
        let th = theta0(alg.size());
        Cochain0 { elems: self.elems.iter().zip(&o.elems).map(|(x, y)| s_product(alg, &th, x, y)).collect() }
    }
}

/// θ_i per chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionFamily {
    pub thetas: Vec<Connection>,
}

impl ConnectionFamily {
    /// θ_i − g_ij θ_j.
    pub fn compatibility_residual(&self, c: &Cochain1, i: usize, j: usize) -> LieForm {
        self.thetas[i].full().sub(&self.thetas[j].gauge(&c.g(i, j)).full())
    }
}

/// Per-triple residual of the cocycle condition (g-part, B-part).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleResidual {
    pub triple: (usize, usize, usize),
    pub g: LieForm,
    pub b: Form,
}

impl TripleResidual {
    pub fn is_zero(&self) -> bool {
        self.g.is_zero() && self.b.is_zero()
    }
}

/// (g_ij,B_ij)(g_jk,B_jk) − (g_ik,B_ik) per marked triple.
pub fn cocycle_residual(alg: &LieAlgebraSpec, c: &Cochain1, cov: &Cover) -> Vec<TripleResidual> {
    cocycle_residual_with(alg, c, cov, Mutation::None)
}

pub fn cocycle_residual_with(alg: &LieAlgebraSpec, c: &Cochain1, cov: &Cover, m: Mutation) -> Vec<TripleResidual> {
    let th = theta0(c.k);
    cov.triples
        .iter()
        .map(|&(i, j, k)| {
            let p = s_product_with(alg, &th, &c.get(i, j), &c.get(j, k), m);
            let ik = c.get(i, k);
            TripleResidual { triple: (i, j, k), g: p.g.g().sub(ik.g.g()), b: p.b.sub(&ik.b) }
        })
        .collect()
}

/// d_ijk = B_ij + B_jk + B_ki + c(g_kj a_ij ∧ a_jk).
pub fn d_ijk(alg: &LieAlgebraSpec, c: &Cochain1, (i, j, k): (usize, usize, usize)) -> Form {
    let ad = c.g(k, j).conj(&c.a(i, j));
    c.get(i, j).b.add(&c.get(j, k).b).add(&c.get(k, i).b).add(&alg.pairing(&ad, &c.a(j, k)))
}

/// x_ij = B_ij − c(a_i ∧ a_ji) with a_i = θ_i − θ₀.
pub fn cech_potential(alg: &LieAlgebraSpec, c: &Cochain1, fam: &ConnectionFamily, i: usize, j: usize) -> Form {
    c.get(i, j).b.sub(&alg.pairing(&fam.thetas[i].full(), &c.a(j, i)))
}

/// d_ijk − (x_ij + x_jk + x_ki) per marked triple.
pub fn dijk_coboundary_residual(
    alg: &LieAlgebraSpec,
    c: &Cochain1,
    fam: &ConnectionFamily,
    cov: &Cover,
) -> Vec<((usize, usize, usize), Form)> {
    cov.triples
        .iter()
        .map(|&(i, j, k)| {
            let x = |a, b| cech_potential(alg, c, fam, a, b);
            let delta = x(i, j).add(&x(j, k)).add(&x(k, i));
            ((i, j, k), d_ijk(alg, c, (i, j, k)).sub(&delta))
        })
        .collect()
}

/// (h_i,B_i)(g_ij,B_ij)(h_j,B_j)⁻¹ on every overlap.
pub fn coboundary_act(alg: &LieAlgebraSpec, h: &Cochain0, c: &Cochain1) -> Cochain1 {
    let th = theta0(c.k);
    let entries = c
        .entries
        .iter()
        .map(|(&(i, j), gij)| {
            let left = s_product(alg, &th, &h.elems[i], gij);
            ((i, j), s_product(alg, &th, &left, &h.elems[j].inverse()))
        })
        .collect();
    Cochain1 { k: c.k, entries }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssembledH {
    /// H_i per chart.
    pub h: Vec<Form>,
    /// B_ij − c(a_i∧a_ji) − (C_j − C_i) per overlap.
    pub potential: BTreeMap<(usize, usize), Form>,
    /// H_i − H_j per overlap.
    pub globality: BTreeMap<(usize, usize), Form>,
    /// dH_i + c(F_i∧F_i) per chart.
    pub integrability: Vec<Form>,
}

impl AssembledH {
    pub fn all_zero(&self) -> bool {
        self.potential.values().all(Form::is_zero)
            && self.globality.values().all(Form::is_zero)
            && self.integrability.iter().all(Form::is_zero)
    }
}

/// H_i = dC_i − CS(θ_i) + CS(θ₀) + dc(θ_i∧θ₀), with all consistency residuals.
pub fn assemble_h(
    alg: &LieAlgebraSpec,
    c: &Cochain1,
    fam: &ConnectionFamily,
    cs: &[Form],
    cov: &Cover,
) -> Result<AssembledH> {
    if fam.thetas.len() != cov.m || cs.len() != cov.m {
        return Err(Error::Dimension(format!("cover has {} charts", cov.m)));
    }
    for &(i, j) in &cov.pairs {
        if !fam.compatibility_residual(c, i, j).is_zero() {
            return Err(Error::IncompatibleFamily(i + 1, j + 1));
        }
    }
    let t0 = theta0(c.k);
    let h: Vec<Form> = fam
        .thetas
        .iter()
        .zip(cs)
        .map(|(th, ci)| {
            ci.d()
                .sub(&chern_simons(alg, th))
                .add(&chern_simons(alg, &t0))
                .add(&alg.pairing(&th.full(), &t0.full()).d())
        })
        .collect();
    let mut potential = BTreeMap::new();
    let mut globality = BTreeMap::new();
    for &(i, j) in &cov.pairs {
        potential.insert((i, j), cech_potential(alg, c, fam, i, j).sub(&cs[j].sub(&cs[i])));
        globality.insert((i, j), h[i].sub(&h[j]));
    }
    let integrability = fam
        .thetas
        .iter()
        .zip(&h)
        .map(|(th, hi)| {
            let f = th.curvature();
            hi.d().add(&alg.pairing(&f, &f))
        })
        .collect();
    Ok(AssembledH { h, potential, globality, integrability })
}

/// Transported assembly data under h ∈ C⁰(𝒮): the cocycle h·c, the family
/// θ̃_i = h_iθ_i and C̃_i = C_i − B_i − c(a_i∧a^{h_i}).
pub fn gauge_transport(
    alg: &LieAlgebraSpec,
    h: &Cochain0,
    c: &Cochain1,
    fam: &ConnectionFamily,
    cs: &[Form],
) -> (Cochain1, ConnectionFamily, Vec<Form>) {
    let t0 = theta0(c.k);
    let thetas = fam.thetas.iter().zip(&h.elems).map(|(th, x)| th.gauge(&x.g)).collect();
    let cs2 = fam
        .thetas
        .iter()
        .zip(&h.elems)
        .zip(cs)
        .map(|((th, x), ci)| ci.sub(&x.b).sub(&alg.pairing(&th.full(), &x.g.a_of(&t0))))
        .collect();
    (coboundary_act(alg, h, c), ConnectionFamily { thetas }, cs2)
}

/// c(F∧F) for an integrable connection.
pub fn pontryagin_rep(alg: &LieAlgebraSpec, theta: &Connection) -> Result<Form> {
    let f = theta.curvature();
    if !f.component(0, 2).is_zero() {
        return Err(Error::NonIntegrableConnection);
    }
    Ok(alg.pairing(&f, &f))
}

/// cs_difference(θ, θ′ − θ), whose d is c(F′∧F′) − c(F∧F).
pub fn connection_change_potential(alg: &LieAlgebraSpec, theta: &Connection, theta2: &Connection) -> Form {
    cs_difference(alg, theta, &theta2.full().sub(&theta.full()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::text::parse_form;

    fn alg() -> LieAlgebraSpec {
        LieAlgebraSpec::gl(2)
    }

    fn two_chart_fixture() -> (Cover, Cochain1, ConnectionFamily, Vec<Form>) {
        let cov = Cover::new(2, vec![(0, 1)], vec![]).unwrap();
        let g12 = GaugeMap::elementary(2, 0, 1, &Scalar::z(0));
        let c = Cochain1::new(2, &cov, [((0, 1), AutElement::new(g12.clone(), Form::zero()).unwrap())].into()).unwrap();
        let th2 = Connection::from_form(&LieForm::elementary(2, 1, 0, parse_form("zb1*dz2", 2).unwrap())).unwrap();
        let th1 = th2.gauge(&g12);
        let cs = vec![Form::zero(), parse_form("-zb1*dz1^dz2", 2).unwrap()];
        (cov, c, ConnectionFamily { thetas: vec![th1, th2] }, cs)
    }

    #[test]
    fn hand_solved_two_chart_assembly() {
        let (cov, c, fam, cs) = two_chart_fixture();
        let out = assemble_h(&alg(), &c, &fam, &cs, &cov).unwrap();
        assert!(out.all_zero(), "{out:?}");
        assert_eq!(out.h[0], out.h[1]);
    }

    #[test]
    fn incompatible_family_rejected() {
        let (cov, c, mut fam, cs) = two_chart_fixture();
        fam.thetas[0] = Connection::trivial(2);
        assert_eq!(assemble_h(&alg(), &c, &fam, &cs, &cov), Err(Error::IncompatibleFamily(1, 2)));
    }

    #[test]
    fn single_chart() {
        let cov = Cover::new(1, vec![], vec![]).unwrap();
        let c = Cochain1::trivial(2, &cov);
        let fam = ConnectionFamily { thetas: vec![Connection::trivial(2)] };
        let c1 = parse_form("zb1*z2*dz1^dz2", 2).unwrap();
        let out = assemble_h(&alg(), &c, &fam, std::slice::from_ref(&c1), &cov).unwrap();
        assert!(out.all_zero());
        assert_eq!(out.h[0], c1.d());
    }

    #[test]
    fn trivial_and_broken_cocycles() {
        let cov = Cover::full(3);
        let c = Cochain1::trivial(2, &cov);
        assert!(cocycle_residual(&alg(), &c, &cov).iter().all(TripleResidual::is_zero));
        let swap =
            GaugeMap::constant(&[0, 1, 1, 0].map(crate::Coeff::int), &[0, 1, 1, 0].map(crate::Coeff::int)).unwrap();
        let mut e = c.entries.clone();
        e.insert((0, 1), AutElement::new(swap, Form::zero()).unwrap());
        let broken = Cochain1::new(2, &cov, e).unwrap();
        assert!(!cocycle_residual(&alg(), &broken, &cov)[0].g.is_zero());
    }

    #[test]
    fn pontryagin_of_nilpotent_is_zero() {
        let th =
            Connection::from_form(&LieForm::elementary(2, 0, 1, parse_form("zb1*dz1 + z2*dz2", 2).unwrap())).unwrap();
        assert!(pontryagin_rep(&alg(), &th).unwrap().is_zero());
    }
}
