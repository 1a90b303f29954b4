use salab::algebroid::{courant_axioms_residual, is_integrable};
use salab::gen::{Draw, GenConfig};
use salab::LieAlgebraSpec;

#[test]
fn courant_axioms_on_random_integrable_data() {
    let alg = LieAlgebraSpec::gl(2);
    let cfg = GenConfig::default();
    let t0 = std::time::Instant::now();
    for seed in 0..6 {
        let mut d = Draw::new(seed);
        let data = d.integrable_data(&alg, &cfg);
        assert!(is_integrable(&data));
        for _ in 0..3 {
            let (u, v, w) = (d.section(&alg, &cfg), d.section(&alg, &cfg), d.section(&alg, &cfg));
            let phi = d.scalar(&cfg, false);
            let res = courant_axioms_residual(&data, &u, &v, &w, &phi);
            assert!(res.all_zero(), "seed {seed}: {:?}", res.failing());
        }
    }
    eprintln!("elapsed {:?}", t0.elapsed());
}
