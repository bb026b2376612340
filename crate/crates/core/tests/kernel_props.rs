use bstar::kernel::{
    hurwitz_zeta, k1_closed_form, quartic_main_bound, BoundCertificate, PiecewiseLinearKernel,
};
use proptest::prelude::*;

/// Direct summation with the Euler-Maclaurin remainder after `n` terms.
fn zeta_oracle(s: f64, a: f64, n: usize) -> f64 {
    let x = n as f64 + a;
    let mut sum = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s) + s / 12.0 * x.powf(-s - 1.0);
    for k in (0..n).rev() {
        sum += (k as f64 + a).powf(-s);
    }
    sum
}

#[test]
fn zeta_matches_summation() {
    let z = hurwitz_zeta(8.0 / 3.0, 1.0).unwrap();
    assert!((z - zeta_oracle(8.0 / 3.0, 1.0, 200_000)).abs() < 1e-13);
    for &(s, a) in &[(2.0, 0.1), (2.5, 0.75), (4.0, 1e-3), (3.1, 1.7), (4.0 / 3.0, 1.0)] {
        let o = zeta_oracle(s, a, 200_000);
        assert!(((hurwitz_zeta(s, a).unwrap() - o) / o).abs() < 1e-12, "s={s} a={a}");
    }
}

fn kernel() -> impl Strategy<Value = PiecewiseLinearKernel> {
    prop::collection::vec(-0.5f64..1.5, 4..60).prop_map(|mut y| {
        y[0] = 1.0;
        PiecewiseLinearKernel::new(y).unwrap()
    })
}

/// `∫ K²` over one period, exact for piecewise-linear K.
fn l2_squared(k: &PiecewiseLinearKernel) -> f64 {
    let w = 1.0 / (4.0 * k.t() as f64);
    let pieces: f64 = k.values().windows(2).map(|p| w * (p[0] * p[0] + p[0] * p[1] + p[1] * p[1]) / 3.0).sum();
    2.0 * (0.25 + pieces)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(k in kernel()) {
        let spectral = k.tail_pow(0, 2.0).unwrap();
        let direct = l2_squared(&k);
        prop_assert!((spectral - direct).abs() < 1e-6, "{} vs {}", spectral, direct);
    }

    #[test]
    fn tails_shrink_with_n(k in kernel(), n in 0usize..20) {
        let a = k.tail_norm(n, 4.0 / 3.0).unwrap().value;
        let b = k.tail_norm(n + 1, 4.0 / 3.0).unwrap().value;
        prop_assert!(b <= a * (1.0 + 1e-12), "n={}: {} > {}", n, b, a);
    }

    #[test]
    fn norms_decrease_in_p(k in kernel(), n in 0usize..5, p in 1.05f64..1.95) {
        let a = k.tail_norm(n, p).unwrap().value;
        let b = k.tail_norm(n, p + 0.05).unwrap().value;
        prop_assert!(b <= a * (1.0 + 1e-10));
    }

    #[test]
    fn c_has_period_4t(k in kernel(), j in 0usize..500) {
        let period = 4 * k.t();
        prop_assert_eq!(k.c_coeff(j), k.c_coeff(j + period));
        let v = k.values();
        let direct: f64 = (1..=k.t())
            .map(|t| {
                let c = |i: usize| (2.0 * std::f64::consts::PI * j as f64 * k.breakpoint(i)).cos();
                (v[t] - v[t - 1]) * (c(t) - c(t - 1))
            })
            .sum();
        prop_assert!((k.c_coeff(j) - direct).abs() < 1e-10);
    }

    #[test]
    fn quartic_never_below_its_minimum(x in -1.0f64..1.0) {
        let cert = BoundCertificate::from_constants(0.631932628, 0.270776892, 0.239175395, 1.14915);
        prop_assert!(quartic_main_bound(&cert, x) >= quartic_main_bound(&cert, cert.quartic_argmin()) - 1e-12);
    }
}

#[test]
fn step_kernel_discretizations_approach_closed_form() {
    let exact = k1_closed_form();
    assert!(exact > 1.074 && exact < 1.075);
    let mut prev = f64::INFINITY;
    for t in [10_000, 100_000, 1_000_000] {
        let k = PiecewiseLinearKernel::step_kernel(t).unwrap();
        let v = k.tail_norm(0, 4.0 / 3.0).unwrap().value.powi(-4);
        let gap = (v - exact).abs();
        assert!(gap < prev, "T={t}: gap {gap}");
        prev = gap;
    }
    assert!(prev < 1e-3, "T=10^6: gap {prev}");
}
