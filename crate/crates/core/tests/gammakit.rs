use foxwright::gammakit::{digamma, gamma_inequality_check, gamma_ratio, log_gamma};
use foxwright::inequalities::Tolerance;
use proptest::prelude::*;

const EPS: f64 = f64::EPSILON;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn digamma_recurrence(x in 0.1f64..100.0) {
        let lhs = digamma(x + 1.0).unwrap();
        let rhs = digamma(x).unwrap() + 1.0 / x;
        let scale = digamma(x).unwrap().abs().max(1.0 / x);
        prop_assert!((lhs - rhs).abs() <= 8.0 * EPS * scale, "x={x}: {lhs} vs {rhs}");
    }

    #[test]
    fn log_gamma_recurrence(x in 0.1f64..100.0) {
        let lg = log_gamma(x).unwrap();
        let ratio = (log_gamma(x + 1.0).unwrap() - lg).exp();
        // The difference of two logs carries eps·|ln Γ| absolute error.
        prop_assert!((ratio - x).abs() <= 8.0 * EPS * x * (1.0 + lg.abs()), "x={x}: {ratio}");
    }

    #[test]
    fn gamma_ratio_inequality(z in 1e-3f64..=50.0, a in 1e-3f64..=50.0, b in 1e-3f64..=50.0) {
        let r = gamma_inequality_check(z, a, b, &Tolerance::default()).unwrap();
        prop_assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn gamma_ratio_nondecreasing_in_z(a in 0.01f64..10.0, z0 in 0.01f64..20.0, steps in prop::collection::vec(1e-3f64..2.0, 1..20)) {
        let mut z = z0;
        let mut prev = gamma_ratio(z, a).unwrap();
        for s in steps {
            z += s;
            let next = gamma_ratio(z, a).unwrap();
            prop_assert!(next >= prev * (1.0 - 64.0 * EPS * (1.0 + z.ln().abs() * a)), "a={a} z={z}: {prev} -> {next}");
            prev = next;
        }
    }
}

#[test]
fn known_values() {
    assert!((log_gamma(0.5).unwrap() - std::f64::consts::PI.sqrt().ln()).abs() < 1e-15);
    assert!((digamma(1.0_f64).unwrap() + 0.577_215_664_901_532_9).abs() < 1e-15);
    assert!((gamma_ratio(3.0_f64, 2.0).unwrap() - 12.0).abs() < 1e-13);
    assert!(log_gamma(0.0_f64).is_err() && digamma(-1.0_f64).is_err() && gamma_ratio(1.0_f64, -1.0).is_err());
}
