//! Random generation of exact test objects.
//!
//! A [`Draw`] separates structural choices (which generator, how many terms)
//! from the polynomial "atoms" it produces. Atoms are recorded so that a
//! failing case can be replayed with simplified atoms, which is how the fuzz
//! driver shrinks counterexamples.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebroid::{SectionQ, StringData};
use crate::coeff::Coeff;
use crate::dgla::{GaugeElement, LElement};
use crate::form::{Basis, Form};
use crate::homotopy::primitive_20;
use crate::lie::{chern_simons, cs_difference, Connection, GaugeMap, LieAlgebraSpec, LieForm};
use crate::morphisms::{AutElement, MorphismData};
use crate::scalar::{Mono, Scalar, Var};
use crate::vector::VectorField10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub n: usize,
    pub deg: u32,
    pub terms: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { n: 2, deg: 2, terms: 3 }
    }
}

pub struct Draw {
    rng: ChaCha8Rng,
    atom_rng: ChaCha8Rng,
    atoms: Vec<Form>,
    replay: Option<Vec<Form>>,
}

impl Draw {
    pub fn new(seed: u64) -> Self {
        Draw {
            rng: ChaCha8Rng::seed_from_u64(seed),
            atom_rng: ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15),
            atoms: Vec::new(),
            replay: None,
        }
    }

    /// Same structural stream as `new(seed)`, with atoms taken from `atoms`.
    pub fn replay(seed: u64, atoms: Vec<Form>) -> Self {
        Draw { replay: Some(atoms), ..Draw::new(seed) }
    }

    pub fn atoms(&self) -> &[Form] {
        &self.atoms
    }

    pub fn below(&mut self, k: usize) -> usize {
        self.rng.gen_range(0..k.max(1))
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn atom(&mut self, make: impl FnOnce(&mut ChaCha8Rng) -> Form) -> Form {
        let fresh = make(&mut self.atom_rng);
        let f = match &self.replay {
            Some(r) => r.get(self.atoms.len()).cloned().unwrap_or_default(),
            None => fresh,
        };
        self.atoms.push(f.clone());
        f
    }

    /// Random (p,q)-form with polynomial coefficients.
    pub fn form(&mut self, cfg: &GenConfig, p: usize, q: usize, holomorphic: bool) -> Form {
        let cfg = *cfg;
        self.atom(|r| random_form(r, &cfg, p, q, holomorphic))
    }

    pub fn scalar(&mut self, cfg: &GenConfig, holomorphic: bool) -> Scalar {
        self.form(cfg, 0, 0, holomorphic).to_scalar()
    }

    /// Random Lie-algebra-valued (p,q)-form, zero outside the allowed blocks.
    pub fn lieform(&mut self, alg: &LieAlgebraSpec, cfg: &GenConfig, p: usize, q: usize, holomorphic: bool) -> LieForm {
        let k = alg.size();
        let mut m = LieForm::zero(k);
        for i in 0..k {
            for j in 0..k {
                if alg.allows(i, j) && self.chance(0.75) {
                    m.set(i, j, self.form(cfg, p, q, holomorphic));
                }
            }
        }
        m
    }

    /// A 1-form of mixed type (1,0) + (0,1).
    pub fn lieform1(&mut self, alg: &LieAlgebraSpec, cfg: &GenConfig) -> LieForm {
        self.lieform(alg, cfg, 1, 0, false).add(&self.lieform(alg, cfg, 0, 1, false))
    }

    pub fn vector(&mut self, cfg: &GenConfig) -> VectorField10 {
        VectorField10::new((0..cfg.n).map(|_| self.scalar(cfg, false)).collect())
    }

    pub fn section(&mut self, alg: &LieAlgebraSpec, cfg: &GenConfig) -> SectionQ {
        let v = self.vector(cfg);
        let r = self.lieform(alg, cfg, 0, 0, false);
        let xi = self.form(cfg, 1, 0, false);
        SectionQ::new(v, r, xi).unwrap()
    }

    pub fn holomorphic_section(&mut self, alg: &LieAlgebraSpec, cfg: &GenConfig) -> SectionQ {
        let v = VectorField10::new((0..cfg.n).map(|_| self.scalar(cfg, true)).collect());
        let r = self.lieform(alg, cfg, 0, 0, true);
        let xi = self.form(cfg, 1, 0, true);
        SectionQ::new(v, r, xi).unwrap()
    }

    /// Product of elementary unipotents and a constant diagonal factor.
    pub fn gauge(&mut self, alg: &LieAlgebraSpec, cfg: &GenConfig, holomorphic: bool) -> GaugeMap {
        let k = alg.size();
        let pairs: Vec<(usize, usize)> =
            (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|&(i, j)| i != j && alg.allows(i, j)).collect();
        let small = GenConfig { deg: cfg.deg.min(2), terms: 2, ..*cfg };
        let mut g = self.diagonal(k);
        if !pairs.is_empty() {
            for step in 0..1 + self.below(2) {
                let (i, j) = pairs[self.below(pairs.len())];
                let mut p = self.scalar(&small, holomorphic);
                if !holomorphic && step == 0 {
                    p = p.add(&Scalar::zb(self.below(cfg.n)));
                }
                g = g.compose(&GaugeMap::elementary(k, i, j, &p));
            }
        }
        g
    }

    fn diagonal(&mut self, k: usize) -> GaugeMap {
        const CHOICES: [(i64, i64, i64, i64); 4] = [(1, 1, 0, 1), (2, 1, 0, 1), (-1, 1, 0, 1), (0, 1, 1, 1)];
        let mut g = Vec::new();
        let mut gi = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    let (a, b, c, d) = CHOICES[self.below(CHOICES.len())];
                    let x = Coeff::complex(a, b, c, d);
                    gi.push(x.inv().expect("nonzero"));
                    g.push(x);
                } else {
                    g.push(Coeff::zero());
                    gi.push(Coeff::zero());
                }
            }
        }
        GaugeMap::constant(&g, &gi).unwrap()
    }

    /// Integrable (H, θ): θ = g·θ₁ for a (1,0) connection θ₁ and
    /// H = −CS(θ₁) + dB with B of type (2,0).
    pub fn integrable_data(&mut self, alg: &LieAlgebraSpec, cfg: &GenConfig) -> StringData {
        let small = GenConfig { deg: cfg.deg.min(2), ..*cfg };
        let th1 = Connection::new(self.lieform(alg, &small, 1, 0, false), LieForm::zero(alg.size())).unwrap();
        let holo = self.chance(0.3);
        let g = self.gauge(alg, cfg, holo);
        let b = self.form(cfg, 2, 0, false);
        let h = chern_simons(alg, &th1).neg().add(&b.d());
        let theta = th1.gauge(&g);
        StringData::from_h(cfg.n, alg.clone(), theta, &h).expect("generated H has type (3,0)+(2,1)")
    }

    /// Integrable data whose curvature is of pure type (1,1), as required
    /// by the deformation complex: θ₁ = u⁻¹∂u + ∂h·I, then θ = g·θ₁.
    pub fn flat10_data(&mut self, alg: &LieAlgebraSpec, cfg: &GenConfig) -> StringData {
        let k = alg.size();
        let u = self.gauge(alg, cfg, false);
        let mut th1 = u.g_inv().mul(&u.g().del());
        if self.chance(0.7) {
            let h = self.scalar(cfg, false);
            th1 = th1.add(&LieForm::diag(k, &Form::scalar(&h).del()));
        }
        let th1 = Connection::new(th1, LieForm::zero(k)).unwrap();
        let g = self.gauge(alg, cfg, false);
        let b = self.form(cfg, 2, 0, false);
        let h = chern_simons(alg, &th1).neg().add(&b.d());
        StringData::from_h(cfg.n, alg.clone(), th1.gauge(&g), &h).expect("generated H has type (3,0)+(2,1)")
    }

    /// A member (h, B) of 𝒮 relative to θ: h holomorphic and
    /// dB = cs_difference(θ, a^h), B = K(cs_difference) + ∂λ.
    pub fn aut_element(&mut self, alg: &LieAlgebraSpec, cfg: &GenConfig, theta: &Connection) -> AutElement {
        let h = self.gauge(alg, cfg, true);
        let rho = cs_difference(alg, theta, &h.a_of(theta));
        let lam = self.form(cfg, 1, 0, true);
        let b = primitive_20(&rho).expect("cs_difference of a holomorphic gauge is closed").add(&lam.del());
        AutElement::new(h, b).unwrap()
    }

    /// Random element of L_Q of degree k.
    pub fn lelement(&mut self, alg: &LieAlgebraSpec, cfg: &GenConfig, k: usize) -> LElement {
        let alpha = self.lieform(alg, cfg, 0, k, false);
        let mut b = Form::zero();
        for p in 2..=k + 2 {
            if self.chance(0.7) {
                b = b.add(&self.form(cfg, p, k + 2 - p, false));
            }
        }
        LElement::new(k, alpha, b).unwrap()
    }

    /// Random (g, a, B) ∈ 𝒢 with g not holomorphic.
    pub fn gauge_element(&mut self, alg: &LieAlgebraSpec, cfg: &GenConfig) -> GaugeElement {
        let g = self.gauge(alg, cfg, false);
        let small = GenConfig { deg: cfg.deg.min(1), terms: 2, ..*cfg };
        let a = self.lieform(alg, &small, 1, 0, false);
        let b = self.form(cfg, 2, 0, false);
        GaugeElement::new(g, a, b).unwrap()
    }

    /// A morphism out of `d`: returns (d′, m) with θ′ = g(θ + a) and
    /// H′ = H − cs_difference(θ, a) + dB, so that (g, −B) is an iso certificate.
    pub fn certificate(&mut self, d: &StringData, cfg: &GenConfig) -> (StringData, MorphismData) {
        let g = self.gauge(&d.alg, cfg, true);
        let small = GenConfig { deg: cfg.deg.min(1), terms: 2, ..*cfg };
        let a = self.lieform(&d.alg, &small, 1, 0, false);
        let b = self.form(cfg, 2, 0, false);
        let theta2 = Connection::from_form(&g.act(&d.theta.full().add(&a))).unwrap();
        let h2 = d.h().sub(&cs_difference(&d.alg, &d.theta, &a)).add(&b.d());
        let d2 = d.with(theta2, &h2).expect("certificate H has type (3,0)+(2,1)");
        (d2, MorphismData::new(g, a, b).unwrap())
    }
}

fn random_coeff(r: &mut ChaCha8Rng) -> Coeff {
    let num = |r: &mut ChaCha8Rng| {
        let v = r.gen_range(1..=3i64);
        if r.gen_bool(0.5) {
            -v
        } else {
            v
        }
    };
    let re = Coeff::ratio(num(r), r.gen_range(1..=2));
    if r.gen_bool(0.2) {
        &re + &Coeff::complex(0, 1, num(r), r.gen_range(1..=2))
    } else {
        re
    }
}

fn random_mono(r: &mut ChaCha8Rng, n: usize, deg: u32, holomorphic: bool) -> Mono {
    let d = r.gen_range(0..=deg);
    let mut m = Mono::one();
    for _ in 0..d {
        let i = r.gen_range(0..n);
        let v = if holomorphic || r.gen_bool(0.5) { Var::Z(i) } else { Var::Zb(i) };
        m = m.mul(&Mono::var(v));
    }
    m
}

fn random_subset(r: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    rand::seq::index::sample(r, n, k).into_vec()
}

pub(crate) fn random_form(r: &mut ChaCha8Rng, cfg: &GenConfig, p: usize, q: usize, holomorphic: bool) -> Form {
    if p > cfg.n || q > cfg.n {
        return Form::zero();
    }
    let mut f = Form::zero();
    for _ in 0..r.gen_range(1..=cfg.terms.max(1)) {
        let Some((neg, b)) = Basis::from_indices(&random_subset(r, cfg.n, p), &random_subset(r, cfg.n, q)) else {
            continue;
        };
        let c = random_coeff(r);
        let c = if neg { -&c } else { c };
        f.add_term(b, random_mono(r, cfg.n, cfg.deg, holomorphic), c);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::is_integrable;

    #[test]
    fn replay_reproduces_atoms() {
        let alg = LieAlgebraSpec::gl(2);
        let cfg = GenConfig::default();
        let mut d = Draw::new(7);
        let a = d.integrable_data(&alg, &cfg);
        let mut r = Draw::replay(7, d.atoms().to_vec());
        assert_eq!(r.integrable_data(&alg, &cfg), a);
    }

    #[test]
    fn generated_data_is_integrable() {
        let alg = LieAlgebraSpec::gl(2);
        let cfg = GenConfig::default();
        for seed in 0..5 {
            let mut d = Draw::new(seed);
            assert!(is_integrable(&d.integrable_data(&alg, &cfg)));
            let f = d.flat10_data(&alg, &cfg);
            assert!(is_integrable(&f));
            assert!(f.curvature().component(2, 0).is_zero());
        }
    }
}
