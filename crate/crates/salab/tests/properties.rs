use proptest::prelude::*;

use salab::algebroid::{courant_axioms_residual, is_integrable, pairing_q};
use salab::cech::{cocycle_residual, gauge_transport, Cochain0, Cochain1, ConnectionFamily, Cover, TripleResidual};
use salab::dgla::{d_q, dgla_bracket, epsilon_chart, gauge_act, gauge_product, mc_residual};
use salab::gen::{Draw, GenConfig};
use salab::lie::{chern_simons, Connection, LieAlgebraSpec, LieForm};
use salab::morphisms::{aut_condition_residual, s_product};
use salab::text::{parse_form, parse_scalar, print_form, print_scalar};
use salab::{Basis, Coeff, Form, Mono, Scalar, Var};

const N: usize = 3;

fn coeff() -> impl Strategy<Value = Coeff> {
    let part = (-40i64..=40, 1i64..=12);
    (part.clone(), part, any::<bool>()).prop_map(
        |((a, b), (c, d), cplx)| {
            if cplx {
                Coeff::complex(a, b, c, d)
            } else {
                Coeff::ratio(a, b)
            }
        },
    )
}

fn big_coeff() -> impl Strategy<Value = Coeff> {
    (any::<i64>(), 1i64..=i64::MAX, any::<i64>(), 1i64..=i64::MAX).prop_map(|(a, b, c, d)| Coeff::complex(a, b, c, d))
}

fn mono() -> impl Strategy<Value = Mono> {
    proptest::collection::vec(0u8..3, 2 * N + 1).prop_map(|e| {
        let mut m = Mono::one();
        for i in 0..N {
            m = m.with_exp(Var::Z(i), e[i]).with_exp(Var::Zb(i), e[N + i]);
        }
        m.with_exp(Var::T, e[2 * N] % 2)
    })
}

fn basis() -> impl Strategy<Value = Basis> {
    (0u8..1 << N, 0u8..1 << N).prop_map(|(a, b)| Basis::new(a, b))
}

fn form() -> impl Strategy<Value = Form> {
    proptest::collection::vec((basis(), mono(), coeff()), 0..5).prop_map(Form::from_terms)
}

fn homogeneous(k: usize) -> impl Strategy<Value = Form> {
    form().prop_map(move |f| f.degree_part(k))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    proptest::collection::vec((mono(), coeff()), 0..5).prop_map(|ts| {
        let mut s = Scalar::zero();
        for (m, c) in ts {
            s.add_term(m, c);
        }
        s
    })
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn form_text_round_trip(f in form()) {
        let s = print_form(&f);
        prop_assert_eq!(parse_form(&s, N).unwrap(), f, "{}", s);
    }

    #[test]
    fn scalar_text_round_trip(x in scalar()) {
        let s = print_scalar(&x);
        prop_assert_eq!(parse_scalar(&s, N).unwrap(), x, "{}", s);
    }

    #[test]
    fn coefficient_field_laws(a in big_coeff(), b in big_coeff(), c in big_coeff()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn differentials_square_to_zero(f in form()) {
        prop_assert!(f.d().d().is_zero());
        prop_assert!(f.del().del().is_zero());
        prop_assert!(f.delbar().delbar().is_zero());
        prop_assert_eq!(f.d(), f.del().add(&f.delbar()));
        prop_assert!(f.del().delbar().add(&f.delbar().del()).is_zero());
    }

    #[test]
    fn wedge_is_graded_commutative_and_leibniz(k in 0usize..3, l in 0usize..3, a0 in form(), b0 in form(), c in form()) {
        let (a, b) = (a0.degree_part(k), b0.degree_part(l));
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale_int(sign(k * l)));
        prop_assert_eq!(a.wedge(&b).d(), a.d().wedge(&b).add(&a.wedge(&b.d()).scale_int(sign(k))));
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn one_forms_wedge_to_zero_with_themselves(a in homogeneous(1)) {
        prop_assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn t_truncation_splits_by_order(f in form()) {
        let low = f.truncate_t(0);
        let t = Form::scalar(&Scalar::t());
        prop_assert_eq!(low.add(&t.wedge(&f.t_coeff(1))), f.truncate_t(1));
        prop_assert_eq!(f.t_coeff(0), low);
    }
}

fn gl2() -> LieAlgebraSpec {
    LieAlgebraSpec::gl(2)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pairing_is_symmetric(seed in any::<u64>()) {
        let mut dr = Draw::new(seed);
        let cfg = GenConfig::default();
        let (u, v) = (dr.section(&gl2(), &cfg), dr.section(&gl2(), &cfg));
        prop_assert_eq!(pairing_q(&gl2(), &u, &v), pairing_q(&gl2(), &v, &u));
    }

    #[test]
    fn courant_axioms_hold(seed in any::<u64>()) {
        let mut dr = Draw::new(seed);
        let cfg = GenConfig::default();
        let d = dr.integrable_data(&gl2(), &cfg);
        prop_assert!(is_integrable(&d));
        let (u, v, w) = (dr.section(&gl2(), &cfg), dr.section(&gl2(), &cfg), dr.section(&gl2(), &cfg));
        let phi = dr.scalar(&cfg, false);
        let r = courant_axioms_residual(&d, &u, &v, &w, &phi);
        prop_assert!(r.all_zero(), "{:?}", r.failing());
    }

    #[test]
    fn chern_simons_is_a_transgression(seed in any::<u64>()) {
        let mut dr = Draw::new(seed);
        let th = Connection::from_form(&dr.lieform1(&gl2(), &GenConfig { terms: 2, ..GenConfig::default() })).unwrap();
        let f = th.curvature();
        prop_assert_eq!(chern_simons(&gl2(), &th).d(), gl2().pairing(&f, &f));
    }

    #[test]
    fn s_product_closes_and_associates(seed in any::<u64>()) {
        let mut dr = Draw::new(seed);
        let cfg = GenConfig::default();
        let th = Connection::new(dr.lieform(&gl2(), &GenConfig { deg: 1, ..cfg }, 1, 0, false), LieForm::zero(2)).unwrap();
        let (x, y, z) = (dr.aut_element(&gl2(), &cfg, &th), dr.aut_element(&gl2(), &cfg, &th), dr.aut_element(&gl2(), &cfg, &th));
        let p = |a, b| s_product(&gl2(), &th, a, b);
        prop_assert!(aut_condition_residual(&gl2(), &th, &p(&x, &y)).is_zero());
        let (xy, yz) = (p(&x, &y), p(&y, &z));
        prop_assert_eq!(p(&xy, &z), p(&x, &yz));
    }

    #[test]
    fn gauge_action_is_an_action(seed in any::<u64>()) {
        let mut dr = Draw::new(seed);
        let cfg = GenConfig::default();
        let d = dr.integrable_data(&gl2(), &cfg);
        let (x, y) = (dr.gauge_element(&gl2(), &cfg), dr.gauge_element(&gl2(), &cfg));
        let lhs = gauge_act(&gauge_product(&x, &y, &gl2()), &d).unwrap();
        prop_assert_eq!(lhs, gauge_act(&x, &gauge_act(&y, &d).unwrap()).unwrap());
    }

    #[test]
    fn dq_squares_to_zero_and_bracket_is_graded_skew(seed in any::<u64>(), k in 0usize..3, l in 0usize..2) {
        let mut dr = Draw::new(seed);
        let cfg = GenConfig::default();
        let base = dr.flat10_data(&gl2(), &cfg);
        let (x, y) = (dr.lelement(&gl2(), &cfg, k), dr.lelement(&gl2(), &cfg, l));
        prop_assert!(d_q(&base, &d_q(&base, &x).unwrap()).unwrap().is_zero());
        let xy = dgla_bracket(&base, &x, &y).unwrap();
        let yx = dgla_bracket(&base, &y, &x).unwrap();
        prop_assert_eq!(xy.add(&yx.scale(&Coeff::int(sign(k * l)))).unwrap(), xy.scale(&Coeff::zero()));
    }

    #[test]
    fn gauge_witnesses_are_maurer_cartan(seed in any::<u64>()) {
        let mut dr = Draw::new(seed);
        let cfg = GenConfig::default();
        let base = dr.flat10_data(&gl2(), &cfg);
        let target = gauge_act(&dr.gauge_element(&gl2(), &cfg), &base).unwrap();
        let (x, _) = epsilon_chart(&base, &target).unwrap();
        prop_assert!(mc_residual(&base, &x).unwrap().is_zero());
    }

    #[test]
    fn transported_cochains_are_cocycles(seed in any::<u64>()) {
        let mut dr = Draw::new(seed);
        let cfg = GenConfig::default();
        let cov = Cover::full(3);
        let t0 = Connection::trivial(2);
        let h = Cochain0 { elems: (0..3).map(|_| dr.aut_element(&gl2(), &cfg, &t0)).collect() };
        let th = Connection::new(dr.lieform(&gl2(), &cfg, 1, 0, false), LieForm::zero(2)).unwrap();
        let fam = ConnectionFamily { thetas: vec![th; 3] };
        let (c, _, _) = gauge_transport(&gl2(), &h, &Cochain1::trivial(2, &cov), &fam, &vec![Form::zero(); 3]);
        prop_assert!(cocycle_residual(&gl2(), &c, &cov).iter().all(TripleResidual::is_zero));
    }
}
