use salab::algebroid::*;
use salab::gen::{Draw, GenConfig};
use salab::morphisms::*;
use salab::LieAlgebraSpec;

#[test]
fn certificates_intertwine_structure() {
    let alg = LieAlgebraSpec::gl(2);
    let cfg = GenConfig::default();
    for seed in 0..6 {
        let mut d = Draw::new(seed);
        let data = d.integrable_data(&alg, &cfg);
        let (d2, m) = d.certificate(&data, &cfg);
        assert!(is_integrable(&d2));
        assert!(iso_residual(&data, &d2, &m.g, &m.certificate_b()).unwrap().is_zero());
        let (s, t) = (d.section(&alg, &cfg), d.section(&alg, &cfg));
        let f = |x: &SectionQ| apply_morphism(&alg, &m, x);
        assert_eq!(pairing_q(&alg, &f(&s), &f(&t)), pairing_q(&alg, &s, &t), "pairing seed {seed}");
        assert_eq!(
            apply_morphism_qform(&alg, &m, &dolbeault_section(&data, &s)),
            dolbeault_section(&d2, &f(&s)),
            "dolbeault seed {seed}"
        );
        assert_eq!(f(&dorfman(&data, &s, &t)), dorfman(&d2, &f(&s), &f(&t)), "bracket seed {seed}");
    }
}

#[test]
fn certificate_round_trip() {
    let alg = LieAlgebraSpec::gl(2);
    let cfg = GenConfig::default();
    let mut d = Draw::new(11);
    let data = d.integrable_data(&alg, &cfg);
    let (d2, m) = d.certificate(&data, &cfg);
    let m2 = MorphismData::from_certificate(&data, &d2, &m.g, &m.certificate_b()).unwrap();
    assert_eq!(m2, m);
}
