use briesz_core::field::{lp_norm, modulus_of_continuity, modulus_profile, Grid, GridFunction, TestFunction};
use briesz_core::gls::{gls_norm, nu_of, w_coeff, BoundParams, GeneratingFunction};
use briesz_core::kernel::{kernel_eval, KernelSpec};
use briesz_core::specfun::{bessel_j, gamma};
use briesz_core::spectral::{bochner_riesz_spectral, forward_ft, inverse_ft};
use briesz_core::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_function(dim: usize, points: usize, seed: u64, amp: f64) -> GridFunction<f64> {
    use rand::RngExt;
    let g = Grid::cube(dim, 3.0, points).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals = (0..g.len())
        .map(|_| Complex::new(rng.random_range(-amp..amp), rng.random_range(-amp..amp)))
        .collect();
    GridFunction::new(g, vals).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bessel_is_bounded_by_one(nu in 0.0f64..20.0, lx in -3.0f64..3.0) {
        let v = bessel_j(nu, 10f64.powf(lx)).unwrap();
        prop_assert!(v.abs() <= 1.0 + 1e-15);
    }

    #[test]
    fn bessel_three_term_recurrence(nu in 1.0f64..10.0, x in 0.1f64..100.0) {
        let a = bessel_j(nu - 1.0, x).unwrap();
        let b = bessel_j(nu + 1.0, x).unwrap();
        let m = 2.0 * nu / x * bessel_j(nu, x).unwrap();
        let scale = a.abs().max(b.abs()).max(m.abs());
        prop_assert!((a + b - m).abs() <= 1e-8 * scale, "nu={} x={} {} vs {}", nu, x, a + b, m);
    }

    #[test]
    fn gamma_recurrence(x in 1e-3f64..40.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs);
    }

    #[test]
    fn kernel_dilation(alpha in -0.4f64..3.0, n in 1usize..=3, r in 0.25f64..8.0, z in prop::collection::vec(-6.0f64..6.0, 3)) {
        let base = KernelSpec::new(alpha, n, 1.0).unwrap();
        let s = base.with_radius(r).unwrap();
        let z = &z[..n];
        let scaled: Vec<f64> = z.iter().map(|v| v * r).collect();
        let lhs = kernel_eval(&s, z);
        let rhs = r.powi(n as i32) * kernel_eval(&base, &scaled);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * kernel_eval(&s, &vec![0.0; n]).abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn triangle_inequality(seed in any::<u64>(), p in 1.0f64..12.0, dim in 1usize..=2) {
        let f = random_function(dim, 16, seed, 1.0);
        let g = random_function(dim, 16, seed ^ 0x9e37_79b9, 3.0);
        let lhs = lp_norm(&f.add(&g).unwrap(), p).unwrap();
        prop_assert!(lhs <= lp_norm(&f, p).unwrap() + lp_norm(&g, p).unwrap() + 1e-10);
        let lhs = lp_norm(&f.add(&g).unwrap(), f64::INFINITY).unwrap();
        prop_assert!(lhs <= f.max_abs() + g.max_abs() + 1e-12);
    }

    #[test]
    fn norms_nondecreasing_on_unit_volume_support(seed in any::<u64>(), p1 in 1.0f64..10.0, dp in 0.0f64..10.0) {
        use rand::RngExt;
        // h = 1/8, so 8 nodes span a set of measure 1.
        let g = Grid::cube(1, 4.0, 64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..64).map(|j| if (32..40).contains(&j) { rng.random_range(0.0..5.0) } else { 0.0 }).collect();
        let f = GridFunction::from_real(g.clone(), vals).unwrap();
        prop_assert!(lp_norm(&f, p1).unwrap() <= lp_norm(&f, p1 + dp).unwrap() * (1.0 + 1e-12));
        let boxf = TestFunction::BoxIndicator { corner: vec![0.0], side: 1.0 }.sample(&g).unwrap();
        prop_assert!((lp_norm(&boxf, p1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn modulus_bounds_and_monotonicity(seed in any::<u64>(), p in prop_oneof![Just(1.0f64), Just(2.0), Just(f64::INFINITY)], w in 0.3f64..1.0) {
        let g = Grid::cube(2, 4.0, 32).unwrap();
        let f = TestFunction::CosinePacket { frequency: 2.0, width: w }.sample(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deltas = [0.0, 0.05, 0.1, 0.3, 0.6, 1.0];
        let prof = modulus_profile(&f, p, &deltas, 4, &mut rng).unwrap();
        prop_assert_eq!(prof[0], 0.0);
        prop_assert!(prof.windows(2).all(|w| w[0] <= w[1]));
        let bound = 2.0 * lp_norm(&f, p).unwrap() * (1.0 + 1e-9);
        for &d in &deltas {
            prop_assert!(modulus_of_continuity(&f, p, d, 4, &mut rng).unwrap() <= bound);
        }
    }

    #[test]
    fn round_trip_and_plancherel(seed in any::<u64>(), dim in 1usize..=3) {
        let f = random_function(dim, if dim == 3 { 8 } else { 16 }, seed, 1.0);
        let s = forward_ft(&f).unwrap();
        let back = inverse_ft(&s).unwrap();
        let err = lp_norm(&back.sub(&f).unwrap(), 2.0).unwrap() / lp_norm(&f, 2.0).unwrap();
        prop_assert!(err <= 1e-10);
        let lhs = s.l2_norm_squared();
        let rhs = (2.0 * std::f64::consts::PI).powi(dim as i32) * lp_norm(&f, 2.0).unwrap().powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs);
    }

    #[test]
    fn spectral_operator_preserves_mean(alpha in -0.9f64..3.0, radius in 0.5f64..40.0) {
        let g = Grid::cube(1, 16.0, 512).unwrap();
        let f = TestFunction::CosinePacket { frequency: 1.5, width: 1.2 }.sample(&g).unwrap();
        let out = bochner_riesz_spectral(&f, alpha, radius).unwrap();
        let (a, b) = (out.integral(), f.integral());
        prop_assert!((a - b).norm() <= 1e-9 * b.norm().max(1e-3 * f.max_abs()));
    }

    #[test]
    fn real_even_input_gives_real_even_output(alpha in 0.0f64..2.0, radius in 1.0f64..7.5) {
        let g = Grid::cube(2, 6.0, 32).unwrap();
        let f = TestFunction::SmoothBump { radius: 3.0 }.sample(&g).unwrap();
        let out = bochner_riesz_spectral(&f, alpha, radius).unwrap();
        prop_assert!(out.max_imag() <= 1e-9 * out.max_abs());
        let m = 32;
        for i in 1..m {
            for j in 1..m {
                let a = out.values()[i * m + j];
                let b = out.values()[(m - i) * m + (m - j)];
                prop_assert!((a - b).norm() <= 1e-9 * out.max_abs());
            }
        }
    }

    #[test]
    fn gls_norm_dominates_samples(c2 in 0.2f64..3.0, m in 0.5f64..4.0) {
        let g = Grid::cube(1, 8.0, 256).unwrap();
        let f = TestFunction::Gaussian { c1: 1.0, c2 }.sample(&g).unwrap();
        for gf in [
            GeneratingFunction::Power { m },
            GeneratingFunction::IwaniecSbordone { a: 1.0, b: 3.0 + m, alpha: 0.5, beta: m / 4.0 },
        ] {
            // Off-grid exponents are only dominated up to the sampling error of the sup.
            let rep = gls_norm(&f, &gf, 64).unwrap();
            for &p in &[1.01, 1.5, 2.0, 2.9, 5.5] {
                let psi = gf.eval(p);
                if psi.is_finite() {
                    prop_assert!(rep.norm >= lp_norm(&f, p).unwrap() / psi * (1.0 - 1e-3));
                }
            }
            for &(p, v) in &rep.trace {
                prop_assert!(v <= rep.norm);
                prop_assert!((v - lp_norm(&f, p).unwrap() / gf.eval(p)).abs() <= 1e-12 * v.max(1e-300));
            }
        }
    }

    #[test]
    fn nu_is_dominated_by_every_sample(r in 3.2f64..12.0, radius in 0.5f64..6.0, ia in 0.0f64..1.5, ib in 0.0f64..1.5) {
        let gf = GeneratingFunction::IwaniecSbordone { a: 1.0, b: 3.0, alpha: ia, beta: ib };
        let nu = nu_of(&gf, 0.5, 2, radius, r).unwrap();
        for k in 1..50 {
            let p = nu.lo + (nu.hi - nu.lo) * k as f64 / 50.0;
            let v = w_coeff(0.5, 2, radius, p, r).unwrap() * gf.eval(p);
            prop_assert!(nu.value <= v * (1.0 + 1e-12));
        }
    }

    #[test]
    fn w_coeff_is_continuous(p in 1.1f64..3.0, dr in 0.2f64..6.0, radius in 0.5f64..10.0, alpha in 0.05f64..0.5) {
        let r = p + dr;
        if let Ok(w) = w_coeff(alpha, 2, radius, p, r) {
            // W has a (q - q0)^(negative) factor; stay away from that boundary.
            let bp = BoundParams::new(alpha, 2, p, r, f64::INFINITY);
            if bp.q - bp.q0 > 0.05 && w_coeff(alpha, 2, radius, p + 1e-4, r - 1e-4).is_ok() {
                let w2 = w_coeff(alpha, 2, radius, p + 1e-8, r - 1e-8).unwrap();
                prop_assert!((w2 - w).abs() <= 1e-6 * w);
            }
        }
    }
}

#[test]
fn recurrence_at_order_one_half() {
    // J_{-1/2}(x) = sqrt(2/(pi x)) cos x
    for i in 0..200 {
        let x = 0.1 + i as f64 * 0.5;
        let a = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.cos();
        let b = bessel_j(1.5, x).unwrap();
        let m = 1.0 / x * bessel_j(0.5, x).unwrap();
        let scale = a.abs().max(b.abs()).max(m.abs());
        assert!((a + b - m).abs() <= 1e-8 * scale, "x={x}");
    }
}

#[test]
fn single_and_double_precision_agree() {
    let s64 = KernelSpec::new(0.5_f64, 2, 2.0).unwrap();
    let s32 = KernelSpec::new(0.5_f32, 2, 2.0).unwrap();
    for &z in &[[0.0, 0.0], [0.3, 0.1], [1.0, 2.0], [5.0, -3.0]] {
        let a = kernel_eval(&s64, &z);
        let b = kernel_eval(&s32, &[z[0] as f32, z[1] as f32]) as f64;
        assert!((a - b).abs() <= 1e-5 * kernel_eval(&s64, &[0.0, 0.0]));
    }
}
