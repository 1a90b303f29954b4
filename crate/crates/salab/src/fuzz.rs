//! Randomized property suite with counterexample shrinking.
//!
//! Case i draws from its own seed, so a failing case is reproduced by
//! (seed, i) alone. Shrinking replays the structural choices of the case
//! with simplified atoms and keeps any simplification that still fails.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebroid::{
    courant_axioms_residual_with, dolbeault_section, dorfman_with, integrability_residual, is_integrable, pairing_q,
};
use crate::cech::{
    assemble_h, cocycle_residual, dijk_coboundary_residual, gauge_transport, Cochain0, Cochain1, ConnectionFamily,
    Cover,
};
use crate::dgla::{
    d_hat_epsilon0, d_q, dgla_axioms_residual_with, epsilon_chart, gauge_act, gauge_product, infinitesimal_action,
    mc_residual_with, obstruction_rep, phi_map, GaugeElement, LElement,
};
use crate::error::Result;
use crate::form::Form;
use crate::gen::{Draw, GenConfig};
use crate::lie::{chern_simons, cs_difference, Connection, LieAlgebraSpec, LieForm};
use crate::morphisms::{
    apply_morphism, apply_morphism_qform, aut_condition_residual, iso_residual, s_product_with, AutElement,
};
use crate::mutation::Mutation;
use crate::text::print_form;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Courant,
    ChernSimons,
    Morphism,
    AutGroup,
    GaugeGroup,
    Dgla,
    MaurerCartan,
    Cech,
    Tangent,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::Courant,
        Property::ChernSimons,
        Property::Morphism,
        Property::AutGroup,
        Property::GaugeGroup,
        Property::Dgla,
        Property::MaurerCartan,
        Property::Cech,
        Property::Tangent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Courant => "courant",
            Property::ChernSimons => "chern-simons",
            Property::Morphism => "morphism",
            Property::AutGroup => "aut-group",
            Property::GaugeGroup => "gauge-group",
            Property::Dgla => "dgla",
            Property::MaurerCartan => "maurer-cartan",
            Property::Cech => "cech",
            Property::Tangent => "tangent",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Property::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| format!("unknown property '{s}'"))
    }
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub seed: u64,
    pub cases: usize,
    pub gen: GenConfig,
    /// Matrix size of gl(k).
    pub k: usize,
    pub mutation: Mutation,
    pub properties: Vec<Property>,
    /// Upper bound on replays spent shrinking a counterexample.
    pub shrink_budget: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            cases: 100,
            gen: GenConfig::default(),
            k: 2,
            mutation: Mutation::None,
            properties: Property::ALL.to_vec(),
            shrink_budget: 150,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(crate::Error::Type(m.into()));
        if self.gen.n == 0 || self.gen.n > 3 {
            return bad("fuzz needs 1 <= n <= 3");
        }
        if self.k == 0 || self.k > 3 {
            return bad("fuzz needs matrix size 1..=3");
        }
        if self.gen.deg > 4 {
            return bad("fuzz needs polynomial degree <= 4");
        }
        if self.properties.is_empty() {
            return bad("no properties selected");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub case_seed: u64,
    pub property: Property,
    pub failing: Vec<String>,
    /// Failing checks of the shrunk witness.
    pub shrunk_failing: Vec<String>,
    pub atoms: usize,
    pub nonzero_atoms_before: usize,
    /// Nonzero atoms of the shrunk witness, as (index, form).
    pub witness: Vec<(usize, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub mutation: String,
    pub cases_run: usize,
    pub per_property: BTreeMap<String, usize>,
    pub counterexample: Option<Counterexample>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn case_seed(seed: u64, case: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(case as u64).rotate_left(17) ^ 0x5bd1_e995
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn flag(out: &mut Vec<String>, ok: bool, name: &str) {
    if !ok {
        out.push(name.to_string());
    }
}

/// Runs one property on a draw and returns the names of failing checks.
pub fn check_property(p: Property, dr: &mut Draw, cfg: &FuzzConfig) -> Result<Vec<String>> {
    let alg = LieAlgebraSpec::gl(cfg.k);
    let g = &cfg.gen;
    let m = cfg.mutation;
    let mut out = Vec::new();
    match p {
        Property::Courant => {
            let d = dr.integrable_data(&alg, g);
            let (u, v, w) = (dr.section(&alg, g), dr.section(&alg, g), dr.section(&alg, g));
            let phi = dr.scalar(g, false);
            out = names(&courant_axioms_residual_with(&d, &u, &v, &w, &phi, m).failing());
        }
        Property::ChernSimons => {
            let th = Connection::new(dr.lieform(&alg, g, 1, 0, false), dr.lieform(&alg, g, 0, 1, false))?;
            let f = th.curvature();
            flag(&mut out, chern_simons(&alg, &th).d() == alg.pairing(&f, &f), "dcs");
            let a = dr.lieform1(&alg, g);
            let th2 = th.shift(&a)?;
            let lhs =
                chern_simons(&alg, &th2).sub(&chern_simons(&alg, &th)).sub(&alg.pairing(&th2.full(), &th.full()).d());
            flag(&mut out, lhs == cs_difference(&alg, &th, &a), "cs-difference");
        }
        Property::Morphism => {
            let d = dr.integrable_data(&alg, g);
            let (d2, mo) = dr.certificate(&d, g);
            flag(&mut out, iso_residual(&d, &d2, &mo.g, &mo.certificate_b())?.is_zero(), "iso-residual");
            let (s, t) = (dr.section(&alg, g), dr.section(&alg, g));
            let f = |x| apply_morphism(&alg, &mo, x);
            flag(&mut out, pairing_q(&alg, &f(&s), &f(&t)) == pairing_q(&alg, &s, &t), "pairing");
            flag(
                &mut out,
                apply_morphism_qform(&alg, &mo, &dolbeault_section(&d, &s)) == dolbeault_section(&d2, &f(&s)),
                "dolbeault",
            );
            flag(&mut out, f(&dorfman_with(&d, &s, &t, m)) == dorfman_with(&d2, &f(&s), &f(&t), m), "bracket");
        }
        Property::AutGroup => {
            let th = Connection::trivial(cfg.k);
            let xs: Vec<AutElement> = (0..3).map(|_| dr.aut_element(&alg, g, &th)).collect();
            let pr = |a: &AutElement, b: &AutElement| s_product_with(&alg, &th, a, b, m);
            let l = pr(&pr(&xs[0], &xs[1]), &xs[2]);
            let r = pr(&xs[0], &pr(&xs[1], &xs[2]));
            flag(&mut out, l == r, "associativity");
            let id = AutElement::identity(cfg.k);
            flag(&mut out, pr(&xs[0], &id) == xs[0] && pr(&id, &xs[0]) == xs[0], "identity");
            flag(&mut out, pr(&xs[0], &xs[0].inverse()) == id && pr(&xs[0].inverse(), &xs[0]) == id, "inverse");
            flag(&mut out, aut_condition_residual(&alg, &th, &pr(&xs[0], &xs[1])).is_zero(), "closure");
            let s = dr.section(&alg, g);
            let act = |x: &AutElement, s| apply_morphism(&alg, &x.to_morphism(&th), s);
            flag(&mut out, act(&pr(&xs[0], &xs[1]), &s) == act(&xs[0], &act(&xs[1], &s)), "composition");
            let a = |x: &AutElement| x.g.a_of(&th);
            let afg = a(&pr(&xs[0], &xs[1]));
            flag(&mut out, afg == xs[1].g.conj_inv(&a(&xs[0])).add(&a(&xs[1])), "a-fg");
        }
        Property::GaugeGroup => {
            let xs: Vec<GaugeElement> = (0..3).map(|_| dr.gauge_element(&alg, g)).collect();
            let pr = |a: &GaugeElement, b: &GaugeElement| gauge_product(a, b, &alg);
            flag(&mut out, pr(&pr(&xs[0], &xs[1]), &xs[2]) == pr(&xs[0], &pr(&xs[1], &xs[2])), "associativity");
            let id = GaugeElement::identity(cfg.k);
            flag(&mut out, pr(&xs[0], &id) == xs[0] && pr(&id, &xs[0]) == xs[0], "identity");
            flag(&mut out, pr(&xs[0], &xs[0].inverse()) == id && pr(&xs[0].inverse(), &xs[0]) == id, "inverse");
            let d = dr.integrable_data(&alg, g);
            let l = gauge_act(&pr(&xs[0], &xs[1]), &d)?;
            flag(&mut out, l == gauge_act(&xs[0], &gauge_act(&xs[1], &d)?)?, "action");
            flag(&mut out, is_integrable(&l), "preserves-integrable");
        }
        Property::Dgla => {
            let d = dr.flat10_data(&alg, g);
            let degs = [dr.below(3), dr.below(3), dr.below(2)];
            let x = dr.lelement(&alg, g, degs[0]);
            let y = dr.lelement(&alg, g, degs[1]);
            let z = dr.lelement(&alg, g, degs[2]);
            out = names(&dgla_axioms_residual_with(&d, &x, &y, &z, m)?.failing());
        }
        Property::MaurerCartan => {
            let d = dr.flat10_data(&alg, g);
            let x = dr.gauge_element(&alg, g);
            let target = gauge_act(&x, &d)?;
            let (w, a) = epsilon_chart(&d, &target)?;
            flag(&mut out, mc_residual_with(&d, &w, m)?.is_zero(), "mc");
            let def = crate::dgla::hat_epsilon(&d, &w)?;
            flag(&mut out, def == gauge_act(&a, &target)?, "epsilon-chart");
            flag(&mut out, integrability_residual(&def)?.iter().all(Form::is_zero), "deformed-integrable");
            flag(&mut out, crate::dgla::deformed_curvature_residual(&d, &w)?.is_zero(), "deformed-curvature");
        }
        Property::Cech => {
            let cov = Cover::full(3);
            let t0 = Connection::trivial(cfg.k);
            let h: Vec<AutElement> = (0..3).map(|_| dr.aut_element(&alg, g, &t0)).collect();
            let th = Connection::new(dr.lieform(&alg, g, 1, 0, false), LieForm::zero(cfg.k))?;
            let fam = ConnectionFamily { thetas: vec![th; 3] };
            let (c, fam, cs) = gauge_transport(
                &alg,
                &Cochain0 { elems: h },
                &Cochain1::trivial(cfg.k, &cov),
                &fam,
                &vec![Form::zero(); 3],
            );
            flag(&mut out, cocycle_residual(&alg, &c, &cov).iter().all(|r| r.is_zero()), "cocycle");
            flag(&mut out, dijk_coboundary_residual(&alg, &c, &fam, &cov).iter().all(|r| r.1.is_zero()), "dijk");
            flag(&mut out, assemble_h(&alg, &c, &fam, &cs, &cov)?.all_zero(), "assemble-h");
        }
        Property::Tangent => {
            let d = dr.flat10_data(&alg, g);
            let x = dr.lelement(&alg, g, 1);
            flag(&mut out, phi_map(&d, &d_hat_epsilon0(&x))? == x, "phi-retraction");
            let al = dr.lieform(&alg, g, 0, 0, false);
            let a = dr.lieform(&alg, g, 1, 0, false);
            let b = dr.form(g, 2, 0, false);
            let l = infinitesimal_action(&d, &al, &a, &b)?;
            let y = LElement::new(0, al.clone(), b)?;
            flag(&mut out, phi_map(&d, &l)? == d_q(&d, &y)?.scale(&crate::Coeff::int(-1)), "phi-image-l");
            let alpha = d.theta.delbar_theta(&al);
            flag(&mut out, obstruction_rep(&d, &alpha)?.d().is_zero(), "obstruction-closed");
        }
    }
    Ok(out)
}

fn run_case(p: Property, cs: u64, atoms: Option<Vec<Form>>, cfg: &FuzzConfig) -> Option<Vec<String>> {
    let mut dr = match atoms {
        Some(a) => Draw::replay(cs, a),
        None => Draw::new(cs),
    };
    match check_property(p, &mut dr, cfg) {
        Ok(f) if !f.is_empty() => Some(f),
        _ => None,
    }
}

fn recorded_atoms(p: Property, cs: u64, cfg: &FuzzConfig) -> Vec<Form> {
    let mut dr = Draw::new(cs);
    let _ = check_property(p, &mut dr, cfg);
    dr.atoms().to_vec()
}

/// Candidate simplifications of one atom, simplest first.
fn simplifications(f: &Form) -> Vec<Form> {
    let terms: Vec<_> = f.terms().map(|(b, m, c)| (b, m, c.clone())).collect();
    let mut v = vec![Form::zero()];
    if terms.len() > 1 {
        for i in 0..terms.len() {
            v.push(Form::from_terms(terms.iter().cloned().enumerate().filter(|(j, _)| *j != i).map(|x| x.1)));
        }
    }
    for (b, m, c) in &terms {
        if !c.is_one() {
            v.push(f.sub(&Form::from_terms([(*b, *m, c.clone())])).add(&Form::from_terms([(
                *b,
                *m,
                crate::Coeff::one(),
            )])));
        }
    }
    v
}

fn shrink(p: Property, cs: u64, cfg: &FuzzConfig) -> (Vec<Form>, Vec<String>) {
    let mut atoms = recorded_atoms(p, cs, cfg);
    let mut failing = run_case(p, cs, Some(atoms.clone()), cfg).unwrap_or_default();
    let mut budget = cfg.shrink_budget;
    let mut progress = true;
    while progress && budget > 0 {
        progress = false;
        for i in 0..atoms.len() {
            if atoms[i].is_zero() {
                continue;
            }
            for cand in simplifications(&atoms[i]) {
                if budget == 0 {
                    break;
                }
                budget -= 1;
                let mut trial = atoms.clone();
                trial[i] = cand;
                if let Some(f) = run_case(p, cs, Some(trial.clone()), cfg) {
                    atoms = trial;
                    failing = f;
                    progress = true;
                    break;
                }
            }
        }
    }
    (atoms, failing)
}

pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzReport> {
    cfg.validate()?;
    let mut per: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..cfg.cases {
        let p = cfg.properties[i % cfg.properties.len()];
        let cs = case_seed(cfg.seed, i);
        *per.entry(p.name().to_string()).or_default() += 1;
        if let Some(failing) = run_case(p, cs, None, cfg) {
            let before = recorded_atoms(p, cs, cfg);
            let (atoms, shrunk_failing) = shrink(p, cs, cfg);
            let witness =
                atoms.iter().enumerate().filter(|(_, f)| !f.is_zero()).map(|(i, f)| (i, print_form(f))).collect();
            return Ok(FuzzReport {
                seed: cfg.seed,
                mutation: cfg.mutation.to_string(),
                cases_run: i + 1,
                per_property: per,
                counterexample: Some(Counterexample {
                    case: i,
                    case_seed: cs,
                    property: p,
                    failing,
                    shrunk_failing,
                    atoms: atoms.len(),
                    nonzero_atoms_before: before.iter().filter(|f| !f.is_zero()).count(),
                    witness,
                }),
            });
        }
    }
    Ok(FuzzReport {
        seed: cfg.seed,
        mutation: cfg.mutation.to_string(),
        cases_run: cfg.cases,
        per_property: per,
        counterexample: None,
    })
}
