use std::f64::consts::PI;

use briesz_core::field::{convolve_direct, lp_norm, GridFunction, TestFunction};
use briesz_core::kernel::{blow_up_product, bochner_riesz_direct, kernel_from_symbol, kernel_lq_norm, kernel_sample};
use briesz_core::spectral::{bochner_riesz_spectral, convolve_spectral, gaussian_limit_operator, Symbol};
use briesz_core::{Complex, Grid64, GridFunction64, KernelSpec64};

fn rel_l2(a: &GridFunction<f64>, b: &GridFunction<f64>) -> f64 {
    lp_norm(&a.sub(b).unwrap(), 2.0).unwrap() / lp_norm(b, 2.0).unwrap()
}

#[test]
fn direct_and_spectral_operators_agree() {
    let g = Grid64::cube(1, 128.0, 2048).unwrap();
    let f = TestFunction::SmoothBump { radius: 2.0 }.sample(&g).unwrap();
    let spec = KernelSpec64::new(1.5, 1, 4.0).unwrap();
    let direct = bochner_riesz_direct(&f, &spec).unwrap();
    let spectral = bochner_riesz_spectral(&f, 1.5, 4.0).unwrap();
    let err = rel_l2(&direct, &spectral);
    assert!(err <= 1e-6, "relative L2 discrepancy {err}");
}

#[test]
fn direct_and_spectral_convolution_agree() {
    let g = Grid64::cube(2, 6.0, 48).unwrap();
    let f = TestFunction::SmoothBump { radius: 2.5 }.sample(&g).unwrap();
    let h = TestFunction::SmoothBump { radius: 1.5 }.sample(&g).unwrap();
    let a = convolve_direct(&f, &h).unwrap();
    let b = convolve_spectral(&f, &h).unwrap();
    assert!(rel_l2(&a, &b) <= 1e-6);
    let ba = convolve_direct(&h, &f).unwrap();
    assert!(lp_norm(&a.sub(&ba).unwrap(), f64::INFINITY).unwrap() <= 1e-10 * a.max_abs());
}

#[test]
fn standard_normal_self_convolution() {
    let g = Grid64::cube(1, 8.0, 512).unwrap();
    let f0 = TestFunction::standard_normal(1).sample(&g).unwrap();
    let conv = convolve_direct(&f0, &f0).unwrap();
    let exact = GridFunction64::from_fn(g, |t| Complex::new((4.0 * PI).powf(-0.5) * (-t[0] * t[0] / 4.0).exp(), 0.0)).unwrap();
    assert!(lp_norm(&conv.sub(&exact).unwrap(), f64::INFINITY).unwrap() <= 1e-4);
}

#[test]
fn integrable_kernel_operator_preserves_mass() {
    let g = Grid64::cube(1, 64.0, 2048).unwrap();
    let f = TestFunction::SmoothBump { radius: 2.0 }.sample(&g).unwrap();
    let spec = KernelSpec64::new(2.0, 1, 2.0).unwrap();
    let out = bochner_riesz_direct(&f, &spec).unwrap();
    let (a, b) = (out.integral().re, f.integral().re);
    assert!((a - b).abs() <= 1e-3 * b, "{a} vs {b}");
}

#[test]
fn closed_form_kernel_matches_symbol_inverse_in_two_dimensions() {
    let spec = KernelSpec64::new(0.5, 2, 4.0).unwrap();
    let g = Grid64::cube(2, 64.0 * PI, 1024).unwrap();
    let a = kernel_sample(&spec, &g).unwrap();
    let b = kernel_from_symbol(&spec, &g).unwrap();
    let peak = a.value_at_origin().re;
    let mut err: f64 = 0.0;
    for (i, (x, y)) in a.values().iter().zip(b.values()).enumerate() {
        let z = g.node(i);
        if z.iter().map(|v| v * v).sum::<f64>() <= 64.0 {
            err = err.max((x - y).norm());
        }
    }
    assert!(err / peak <= 1e-3, "{}", err / peak);
}

#[test]
fn lq_norm_scaling_law() {
    let base = KernelSpec64::new(0.5, 2, 1.0).unwrap();
    let k1 = kernel_lq_norm(&base, 2.0).unwrap().norm;
    for &r in &[0.5, 2.0, 4.0] {
        let kr = kernel_lq_norm(&base.with_radius(r).unwrap(), 2.0).unwrap().norm;
        let gap = kr.ln() - (2.0 - 1.0) * r.ln() - k1.ln();
        assert!(gap.abs() <= 1e-3, "R={r}: {gap}");
    }
    let s3 = KernelSpec64::new(1.2, 3, 1.0).unwrap();
    let k1 = kernel_lq_norm(&s3, 1.5).unwrap().norm;
    let k2 = kernel_lq_norm(&s3.with_radius(2.0).unwrap(), 1.5).unwrap().norm;
    assert!((k2.ln() - (3.0 - 2.0) * 2f64.ln() - k1.ln()).abs() <= 1e-3);
}

#[test]
fn lq_norm_blow_up_band() {
    let s = KernelSpec64::new(0.5, 2, 1.0).unwrap();
    let prods: Vec<f64> = [1.2, 1.5, 2.0, 3.0]
        .iter()
        .map(|&q| blow_up_product(&s, q).unwrap())
        .collect();
    let hi = prods.iter().cloned().fold(f64::MIN, f64::max);
    let lo = prods.iter().cloned().fold(f64::MAX, f64::min);
    assert!(hi / lo <= 10.0, "{prods:?}");
}

#[test]
fn gaussian_limit_symbol_converges() {
    let s = Symbol::GaussianLimit { radius: 50.0 };
    assert_eq!(s.eval(0.0), 1.0);
    assert!((s.eval(1.0) - (-0.5f64).exp()).abs() <= 1e-3);
    let g = Grid64::cube(1, 16.0, 1024).unwrap();
    let f0 = TestFunction::standard_normal(1).sample(&g).unwrap();
    let reference =
        GridFunction64::from_fn(g, |t| Complex::new((4.0 * PI).powf(-0.5) * (-t[0] * t[0] / 4.0).exp(), 0.0)).unwrap();
    let errs: Vec<f64> = [2.0, 4.0, 8.0]
        .iter()
        .map(|&r| {
            let out = gaussian_limit_operator(&f0, r).unwrap();
            lp_norm(&out.sub(&reference).unwrap(), f64::INFINITY).unwrap()
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2]);
    assert!(errs[2] <= 0.01 * reference.max_abs(), "{errs:?}");
}

#[test]
fn band_limited_function_is_fixed_for_large_radius() {
    let g = Grid64::cube(1, 16.0, 512).unwrap();
    let f = TestFunction::CosinePacket {
        frequency: 2.0,
        width: 1.0,
    }
    .sample(&g)
    .unwrap();
    let mut last = f64::INFINITY;
    for &r in &[10.0, 20.0, 40.0] {
        let err = rel_l2(&bochner_riesz_spectral(&f, 1.0, r).unwrap(), &f);
        assert!(err < last);
        last = err;
    }
    assert!(last < 0.02);
}
