use foxwright::functions::{bessel_norm, kummer_2f2_pair, mittag_leffler, wright, MittagLefflerParams};
use foxwright::{series, Config, Params};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mittag_leffler_is_one_psi(pairs in prop::collection::vec((0.05f64..=3.0, 0.1f64..=5.0), 1..=3), z in 0.0f64..=10.0) {
        let m = MittagLefflerParams::new(pairs.clone()).unwrap();
        let lower: Vec<_> = pairs.iter().map(|&(w, b)| (b, w)).collect();
        let p = Params::new(vec![(1.0, 1.0)], lower).unwrap();
        prop_assume!(p.epsilon() > 0.0);
        let (Ok(a), Ok(b)) = (mittag_leffler(&m, z, &Config::default()), series::eval(&p, z, &Config::default())) else {
            return Ok(());
        };
        prop_assert!(close(a.value, b.value, 1e-12));
    }

    #[test]
    fn bessel_hyperbolic_cases(z in 0.0f64..=5.0) {
        let cfg = Config::default();
        prop_assert!(close(bessel_norm(-0.5, z, &cfg).unwrap().value, z.cosh(), 1e-12));
        let sinhc = if z == 0.0 { 1.0 } else { z.sinh() / z };
        prop_assert!(close(bessel_norm(0.5, z, &cfg).unwrap().value, sinhc, 1e-12));
    }

    #[test]
    fn kummer_pair_components_agree(a in 0.1f64..=5.0, b in 0.1f64..=5.0, c in 0.1f64..=5.0, z in -2.0f64..2.0) {
        let Ok((l, r)) = kummer_2f2_pair(a, b, c, z, &Config::default()) else { return Ok(()) };
        prop_assert!(close(l.value, r.value, 1e-10), "{} vs {}", l.value, r.value);
    }

    #[test]
    fn wright_normalized_is_scaled(b1 in 0.0f64..=3.0, beta in 0.1f64..=5.0, z in 0.0f64..=10.0) {
        let cfg = Config::default();
        let (Ok(w), Ok(n)) = (wright(b1, beta, z, false, &cfg), wright(b1, beta, z, true, &cfg)) else { return Ok(()) };
        let g = foxwright::gammakit::log_gamma(beta).unwrap().exp();
        prop_assert!(close(n.value, g * w.value, 1e-13));
    }
}
