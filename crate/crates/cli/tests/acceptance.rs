//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use astro_float::{BigFloat, Consts, RoundingMode};
use briesz_cli::runners::{nu_brute_force, run_converge, run_gaussian_limit, run_gls, run_lowerbound, run_uniform_converge, run_young};
use briesz_cli::{Experiment, ExperimentConfig, Overrides, Report};
use briesz_core::field::{modulus_of_continuity, modulus_profile, TestFunction};
use briesz_core::gls::{nu_of, q_of, theta, GeneratingFunction};
use briesz_core::kernel::{blow_up_product, kernel_from_symbol, kernel_lq_norm, kernel_sample};
use briesz_core::spectral::bochner_riesz_spectral;
use briesz_core::{Grid64, KernelSpec64};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cfg(e: Experiment, o: Overrides) -> ExperimentConfig {
    ExperimentConfig::build(e, None, &o).expect("valid config")
}

fn summary_f64(r: &Report, key: &str) -> f64 {
    r.summary[key].as_f64().unwrap_or(f64::INFINITY)
}

fn summary_bool(r: &Report, key: &str) -> bool {
    r.summary[key].as_bool().unwrap_or(false)
}

/// Max |closed form - inverse transform of symbol| on |z| <= 8, relative to the peak.
fn kernel_symbol_gap(dim: usize, alpha: f64, radius: f64) -> f64 {
    let (l, m) = match (dim, radius > 1.0) {
        (1, _) => (640.0 * PI, 2048 * radius as usize),
        (_, false) => (128.0 * PI, 512),
        (_, true) => (64.0 * PI, 1024),
    };
    let spec = KernelSpec64::new(alpha, dim, radius).unwrap();
    let g = Grid64::cube(dim, l, m).unwrap();
    let a = kernel_sample(&spec, &g).unwrap();
    let b = kernel_from_symbol(&spec, &g).unwrap();
    let peak = a.value_at_origin().re.abs();
    let mut err: f64 = 0.0;
    for (i, (x, y)) in a.values().iter().zip(b.values()).enumerate() {
        if g.node(i).iter().map(|v| v * v).sum::<f64>() <= 64.0 {
            err = err.max((x - y).norm());
        }
    }
    err / peak
}

fn c1_kernel_symbol() -> Outcome {
    let mut worst: f64 = 0.0;
    for dim in [1, 2] {
        for alpha in [0.0, 0.5, 1.5] {
            for radius in [1.0, 4.0] {
                let gap = kernel_symbol_gap(dim, alpha, radius);
                ensure(gap <= 1e-3, format!("n={dim} alpha={alpha} R={radius}: {gap:.3e}"))?;
                worst = worst.max(gap);
            }
        }
    }
    Ok(format!("max relative gap {worst:.2e} <= 1e-3"))
}

fn c2_normalization() -> Outcome {
    let spec = KernelSpec64::new(2.0, 1, 1.0).unwrap();
    let g = Grid64::cube(1, 400.0, 16384).unwrap();
    let mass = kernel_sample(&spec, &g).unwrap().integral().re;
    ensure((mass - 1.0).abs() <= 1e-2, format!("box quadrature of K = {mass}"))?;
    let grid = Grid64::cube(1, 16.0, 1024).unwrap();
    let f = TestFunction::SmoothBump { radius: 3.0 }.sample(&grid).unwrap();
    let mut worst: f64 = 0.0;
    for alpha in [0.0, 0.5, 1.5, 2.0] {
        for radius in [1.0, 2.0, 4.0, 8.0] {
            let out = bochner_riesz_spectral(&f, alpha, radius).unwrap();
            let gap = (out.integral() - f.integral()).norm() / f.integral().norm();
            worst = worst.max(gap);
        }
    }
    ensure(worst <= 1e-9, format!("spectral mean drift {worst:.2e}"))?;
    Ok(format!("int K = {mass:.6}, spectral mean drift {worst:.1e}"))
}

fn c3_scaling() -> Outcome {
    let base = KernelSpec64::new(0.5, 2, 1.0).unwrap();
    let k1 = kernel_lq_norm(&base, 2.0).unwrap().norm;
    let mut worst: f64 = 0.0;
    for r in [2.0_f64, 4.0] {
        let kr = kernel_lq_norm(&base.with_radius(r).unwrap(), 2.0).unwrap().norm;
        worst = worst.max((kr.ln() - (2.0 - 1.0) * r.ln() - k1.ln()).abs());
    }
    ensure(worst <= 1e-3, format!("log gap {worst:.2e}"))?;
    Ok(format!("log gap {worst:.2e} <= 1e-3"))
}

fn c4_blow_up() -> Outcome {
    let s = KernelSpec64::new(0.5, 2, 1.0).unwrap();
    let prods: Vec<f64> = [1.2, 1.5, 2.0, 3.0].iter().map(|&q| blow_up_product(&s, q).unwrap()).collect();
    let hi = prods.iter().cloned().fold(f64::MIN, f64::max);
    let lo = prods.iter().cloned().fold(f64::MAX, f64::min);
    ensure(hi / lo <= 10.0, format!("band {:.2} from {prods:?}", hi / lo))?;
    Ok(format!("band ratio {:.2} <= 10", hi / lo))
}

fn c5_young() -> Outcome {
    let rep = run_young(&cfg(Experiment::Young, Overrides::default())).unwrap();
    let slack = summary_f64(&rep, "max_slack");
    let gap = summary_f64(&rep, "max_equality_gap");
    let fubini = summary_f64(&rep, "fubini_gap");
    let trials = rep.rows.iter().filter(|r| r[1] == "random".into()).count();
    ensure(trials == 200, format!("{trials} trials"))?;
    ensure(slack <= 1e-6, format!("max slack {slack:.3e}"))?;
    ensure(gap <= 1e-3, format!("Gaussian equality gap {gap:.3e}"))?;
    ensure(fubini <= 1e-6, format!("L1 gap {fubini:.3e}"))?;
    Ok(format!("{trials} trials, max slack {slack:.2e}, equality gap {gap:.1e}"))
}

fn c6_gaussian_limit() -> Outcome {
    let rep = run_gaussian_limit(&cfg(Experiment::GaussLimit, Overrides::default())).unwrap();
    let rel = summary_f64(&rep, "final_relative_error");
    ensure(summary_bool(&rep, "strictly_decreasing"), format!("errors {:?}", rep.numbers("error_linf")))?;
    ensure(rel <= 0.01, format!("relative error at R=8: {rel:.3e}"))?;
    Ok(format!("strictly decreasing, relative error at R=8 {rel:.2e}"))
}

fn c7_convergence() -> Outcome {
    let mut notes = Vec::new();
    for (name, rep) in [
        ("p=2", run_converge(&cfg(Experiment::Converge, Overrides::default())).unwrap()),
        ("p=inf", run_uniform_converge(&cfg(Experiment::Uconverge, Overrides::default())).unwrap()),
    ] {
        let rel = summary_f64(&rep, "final_relative_error");
        let ratio = summary_f64(&rep, "max_ratio");
        ensure(summary_bool(&rep, "errors_nonincreasing_tail"), format!("{name}: errors {:?}", rep.numbers("error")))?;
        ensure(rel <= 0.05, format!("{name}: err(32)/||f|| = {rel:.3e}"))?;
        ensure(ratio <= 3.0, format!("{name}: ratio {ratio}"))?;
        notes.push(format!("{name} err(32) {rel:.1e} ratio {ratio:.3}"));
    }
    Ok(notes.join(", "))
}

fn c8_nu_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cases: Vec<(GeneratingFunction<f64>, f64, f64, f64)> = Vec::new();
    for _ in 0..7 {
        // q0 = 0.8 for alpha = 1, so nu is defined for r > 4.
        let gf = GeneratingFunction::Power { m: rng.random_range(0.5..3.0) };
        cases.push((gf, 1.0, rng.random_range(0.5..5.0), rng.random_range(4.5..14.0)));
    }
    for _ in 0..7 {
        let b = rng.random_range(2.5..4.0);
        let gf = GeneratingFunction::IwaniecSbordone {
            a: 1.0,
            b,
            alpha: rng.random_range(0.0..1.5),
            beta: rng.random_range(0.0..1.5),
        };
        cases.push((gf, 0.5, rng.random_range(0.5..5.0), b + rng.random_range(0.5..10.0)));
    }
    for _ in 0..6 {
        let p = rng.random_range(1.2..3.0);
        cases.push((GeneratingFunction::SinglePoint { r: p }, 0.5, rng.random_range(0.5..5.0), p + rng.random_range(1.0..6.0)));
    }
    let mut worst: f64 = 0.0;
    for (gf, alpha, radius, r) in &cases {
        let nu = nu_of(gf, *alpha, 2, *radius, *r).map_err(|e| format!("{gf:?} r={r}: {e}"))?;
        let (reference, _) = nu_brute_force(gf, *alpha, 2, *radius, *r).unwrap();
        let rel = (nu.value - reference).abs() / reference;
        ensure(rel <= 1e-6, format!("{gf:?} R={radius} r={r}: {} vs {reference} ({rel:.2e})", nu.value))?;
        worst = worst.max(rel);
    }
    Ok(format!("{} cases, max relative gap {worst:.2e}", cases.len()))
}

fn theta_extended(n: u32, p_num: i64, p_den: i64) -> f64 {
    let bits = 256;
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().unwrap();
    let big = |x: f64| BigFloat::from_f64(x, bits);
    let p = big(p_num as f64).div(&big(p_den as f64), bits, rm);
    let nn = big(n as f64);
    let two_p = p.mul(&big(2.0), bits, rm);
    let e1 = nn.mul(&big(1.0).sub(&p, bits, rm), bits, rm).div(&two_p, bits, rm);
    let e2 = nn.div(&two_p, bits, rm).neg();
    let tau = cc.pi(bits, rm).mul(&big(2.0), bits, rm);
    let v = tau.pow(&e1, bits, rm, &mut cc).mul(&p.pow(&e2, bits, rm, &mut cc), bits, rm);
    format!("{v}").parse().unwrap()
}

fn c9_lower_bound() -> Outcome {
    let rep = run_lowerbound(&cfg(Experiment::Lowerbound, Overrides::default())).unwrap();
    let max_w = rep.numbers("max_W")[0];
    let th = theta(2, q_of(2.0, 4.0)).unwrap();
    let th_big = theta_extended(2, 4, 3);
    ensure((th - th_big).abs() <= 1e-12 * th_big, format!("theta {th} vs extended {th_big}"))?;
    let reported = rep.numbers("theta_reference")[0];
    ensure((reported - th_big).abs() <= 1e-12 * th_big, format!("reported theta {reported}"))?;
    ensure(max_w >= th_big, format!("max W {max_w} < theta {th_big}"))?;
    Ok(format!("max W {max_w:.4} >= theta(2, 4/3) = {th_big:.6}"))
}

fn c10_modulus() -> Outcome {
    let g = Grid64::cube(1, 4.0, 4096).unwrap();
    let boxf = TestFunction::BoxIndicator { corner: vec![0.0], side: 1.0 }.sample(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for d in [0.01, 0.05, 0.1] {
        let w = modulus_of_continuity(&boxf, 1.0, d, 8, &mut rng).unwrap();
        let rel = (w / (2.0 * d) - 1.0).abs();
        ensure(rel <= 0.05, format!("delta={d}: {w} vs {}", 2.0 * d))?;
        worst = worst.max(rel);
    }
    let deltas = [0.0, 0.005, 0.01, 0.05, 0.1, 0.3, 1.0];
    let family = [
        boxf,
        TestFunction::SmoothBump { radius: 2.0 }.sample(&g).unwrap(),
        TestFunction::CosinePacket { frequency: 3.0, width: 0.7 }.sample(&g).unwrap(),
    ];
    for f in &family {
        for p in [1.0, 2.0, f64::INFINITY] {
            ensure(modulus_of_continuity(f, p, 0.0, 8, &mut rng).unwrap() == 0.0, "omega(0) != 0")?;
            let prof = modulus_profile(f, p, &deltas, 8, &mut rng).unwrap();
            ensure(prof.windows(2).all(|w| w[0] <= w[1]), format!("profile not monotone: {prof:?}"))?;
        }
    }
    Ok(format!("max |omega/(2 delta) - 1| = {worst:.1e}, omega(0) = 0, monotone"))
}

fn c11_gls_stability() -> Outcome {
    let coarse = run_gls(&cfg(Experiment::Gls, Overrides::default())).unwrap();
    let fine = run_gls(&cfg(
        Experiment::Gls,
        Overrides {
            points: Some(512),
            ..Default::default()
        },
    ))
    .unwrap();
    let (a, b) = (summary_f64(&coarse, "max_ratio"), summary_f64(&fine, "max_ratio"));
    ensure(a.is_finite() && b.is_finite() && a > 0.0, format!("max ratios {a}, {b}"))?;
    let change = (b - a).abs() / a;
    ensure(change <= 0.2, format!("max ratio {a} -> {b} ({change:.2e})"))?;
    Ok(format!("max ratio {a:.4} -> {b:.4}, change {:.2}%", 100.0 * change))
}

fn c12_reproducible() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for (sub, extra) in [("young", vec!["--trials", "40"]), ("norms", vec![]), ("converge", vec!["--R", "2,4,8"])] {
        let mut texts = Vec::new();
        // Same path both times: the header records the full config, output path included.
        let path = dir.path().join(format!("{sub}.csv"));
        for _ in 0..2 {
            let status = Command::new(env!("CARGO_BIN_EXE_briesz"))
                .arg(sub)
                .args(["--seed", "7", "--out"])
                .arg(&path)
                .args(&extra)
                .status()
                .unwrap();
            ensure(status.success(), format!("{sub} exited with {status}"))?;
            texts.push(std::fs::read(&path).unwrap());
        }
        ensure(texts[0] == texts[1], format!("{sub}: outputs differ"))?;
        outs.push(format!("{sub} {}B", texts[0].len()));
    }
    Ok(format!("byte-identical: {}", outs.join(", ")))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("kernel vs symbol inverse", c1_kernel_symbol),
        ("normalization", c2_normalization),
        ("scaling law", c3_scaling),
        ("blow-up band", c4_blow_up),
        ("sharp Young", c5_young),
        ("Gaussian limit", c6_gaussian_limit),
        ("Lp and uniform convergence", c7_convergence),
        ("nu brute-force oracle", c8_nu_oracle),
        ("lower bound", c9_lower_bound),
        ("modulus of continuity", c10_modulus),
        ("GLS stability", c11_gls_stability),
        ("reproducibility", c12_reproducible),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2}. {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2}. {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
