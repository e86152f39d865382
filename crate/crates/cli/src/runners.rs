//! One runner per subcommand; each turns a validated config into a [`Report`].

use std::f64::consts::PI;

use briesz_core::field::{lp_norm, modulus_profile, TestFunction};
use briesz_core::gls::{
    extremal_gaussian_widths, gls_norm, nu_interval, nu_of, qn_lower_search, young_bound, BoundParams,
    GeneratingFunction, NU_BRACKET_POINTS,
};
use briesz_core::kernel::{bochner_riesz_direct, kernel_eval, kernel_lq_norm, kernel_weighted_l1};
use briesz_core::spectral::{bochner_riesz_spectral, convolve_spectral, gaussian_limit_operator};
use briesz_core::{Complex, Error as CoreError, GridFunction64, KernelSpec64, TestFunction64};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{Experiment, ExperimentConfig, Method};
use crate::error::{CliError, Result};
use crate::report::{write_atomic, Cell, Report};

/// Points in the brute-force `nu` reference grid.
pub const NU_REFERENCE_POINTS: usize = 10_000;

/// Log-spaced shift lengths for the modulus profile used in bound terms.
const OMEGA_PROFILE_POINTS: usize = 24;

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    match cfg.experiment {
        Experiment::Kernel => run_kernel_table(cfg),
        Experiment::Apply => run_apply(cfg),
        Experiment::Norms => run_norms(cfg),
        Experiment::Young => run_young(cfg),
        Experiment::Converge => run_converge(cfg),
        Experiment::Uconverge => run_uniform_converge(cfg),
        Experiment::Gls => run_gls(cfg),
        Experiment::GaussLimit => run_gaussian_limit(cfg),
        Experiment::Bounds => run_bounds(cfg),
        Experiment::Lowerbound => run_lowerbound(cfg),
    }
}

fn ok_row() -> [Cell; 2] {
    [Cell::from("ok"), Cell::Empty]
}

fn rejected(e: &CoreError) -> [Cell; 2] {
    [Cell::from("rejected"), Cell::from(e.to_string())]
}

/// The configured input: a grid-function file if given, else the test function on the grid.
fn input_function(cfg: &ExperimentConfig) -> Result<GridFunction64> {
    match &cfg.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let f = GridFunction64::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            if f.grid().dim() != cfg.dim {
                return Err(CliError::Config(format!(
                    "input has dimension {}, config asks for {}",
                    f.grid().dim(),
                    cfg.dim
                )));
            }
            Ok(f)
        }
        None => Ok(cfg.test_function().sample(&cfg.grid()?)?),
    }
}

/// `K^R(z e_1)` at each configured distance and `||K^R||_q` for each `q`.
pub fn run_kernel_table(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = Report::new(cfg, &["kind", "R", "z", "q", "value", "error", "status", "reason"]);
    let base = KernelSpec64::new(cfg.alpha, cfg.dim, 1.0)?;
    for &radius in &cfg.radii {
        let spec = base.with_radius(radius)?;
        for &z in &cfg.z {
            let mut point = vec![0.0; cfg.dim];
            point[0] = z;
            let v = kernel_eval(&spec, &point);
            rep.push(vec!["kernel".into(), radius.into(), z.into(), Cell::Empty, v.into(), Cell::Empty, "ok".into(), Cell::Empty]);
        }
        for &q in &cfg.q {
            let mut row = vec!["lq_norm".into(), radius.into(), Cell::Empty, q.into()];
            match kernel_lq_norm(&spec, q) {
                Ok(n) => row.extend([n.norm.into(), n.error.into()].into_iter().chain(ok_row())),
                Err(e) => row.extend([Cell::Empty, Cell::Empty].into_iter().chain(rejected(&e))),
            }
            rep.push(row);
        }
    }
    rep.summarize_num("q0", base.q0());
    rep.summarize_num("critical_alpha", base.critical_alpha());
    rep.summarize("integrable", base.is_integrable());
    Ok(rep)
}

/// `B_R f` for each `R`, compared with `f`.
pub fn run_apply(cfg: &ExperimentConfig) -> Result<Report> {
    let p = cfg.p[0];
    let f = input_function(cfg)?;
    let fp = lp_norm(&f, p)?;
    let mut rep = Report::new(cfg, &["R", "p", "norm_f", "norm_bf", "error", "error_linf", "integral_gap", "max_imag"]);
    let mut last = None;
    for &radius in &cfg.radii {
        let out = match cfg.method {
            Method::Spectral => bochner_riesz_spectral(&f, cfg.alpha, radius)?,
            Method::Direct => bochner_riesz_direct(&f, &KernelSpec64::new(cfg.alpha, cfg.dim, radius)?)?,
        };
        let diff = out.sub(&f)?;
        rep.push(vec![
            radius.into(),
            p.into(),
            fp.into(),
            lp_norm(&out, p)?.into(),
            lp_norm(&diff, p)?.into(),
            diff.max_abs().into(),
            (out.integral() - f.integral()).norm().into(),
            out.max_imag().into(),
        ]);
        last = Some(out);
    }
    if let (Some(path), Some(out)) = (&cfg.save_field, last) {
        write_atomic(path, &out.to_json())?;
        rep.summarize("saved_field", path.display().to_string());
    }
    Ok(rep)
}

/// `||f||_p` and the sampled `omega_p[f](delta)` for every `(p, delta)`.
pub fn run_norms(cfg: &ExperimentConfig) -> Result<Report> {
    let f = input_function(cfg)?;
    let mut rep = Report::new(cfg, &["p", "delta", "norm", "omega"]);
    let mut deltas = cfg.deltas.clone();
    deltas.sort_by(f64::total_cmp);
    for &p in &cfg.p {
        let norm = lp_norm(&f, p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let omega = modulus_profile(&f, p, &deltas, cfg.directions, &mut rng)?;
        if deltas.is_empty() {
            rep.push(vec![p.into(), Cell::Empty, norm.into(), Cell::Empty]);
        }
        for (&d, &w) in deltas.iter().zip(&omega) {
            rep.push(vec![p.into(), d.into(), norm.into(), w.into()]);
        }
    }
    Ok(rep)
}

/// Random nonnegative Gaussian mixture on the grid.
fn random_mixture(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<GridFunction64> {
    let grid = cfg.grid()?;
    let reach = 0.25 * grid.min_half_extent();
    let terms = rng.random_range(1..=3usize);
    let parts: Vec<(f64, f64, Vec<f64>)> = (0..terms)
        .map(|_| {
            let amp = rng.random_range(0.2..1.0);
            let width = rng.random_range(0.5..4.0);
            let centre = (0..cfg.dim).map(|_| rng.random_range(-reach..reach)).collect();
            (amp, width, centre)
        })
        .collect();
    Ok(GridFunction64::from_fn(grid, |x| {
        let v: f64 = parts
            .iter()
            .map(|(a, w, c)| a * (-w * x.iter().zip(c).map(|(xi, ci)| (xi - ci).powi(2)).sum::<f64>()).exp())
            .sum();
        Complex::new(v, 0.0)
    })?)
}

fn young_row(
    rep: &mut Report,
    label: Cell,
    kind: &str,
    (p, q, r): (f64, f64, f64),
    f: &GridFunction64,
    g: &GridFunction64,
    n: usize,
) -> Result<f64> {
    let lhs = lp_norm(&convolve_spectral(f, g)?, r)?;
    let rhs = young_bound(p, q, r, n)? * lp_norm(f, p)? * lp_norm(g, q)?;
    let slack = lhs / rhs - 1.0;
    rep.push(vec![label, kind.into(), p.into(), q.into(), r.into(), lhs.into(), rhs.into(), slack.into()]);
    Ok(slack)
}

/// Sharp Young inequality on random trials, Gaussian equality pairs and the `L1` case.
pub fn run_young(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = Report::new(cfg, &["trial", "kind", "p", "q", "r", "lhs", "rhs", "slack"]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.dim;
    let mut max_slack = f64::NEG_INFINITY;
    for t in 0..cfg.trials {
        let inv_p: f64 = rng.random_range(0.35..1.0);
        let u: f64 = rng.random_range(0.05..1.0);
        let inv_r = u * inv_p;
        let inv_q = 1.0 - inv_p + inv_r;
        let f = random_mixture(cfg, &mut rng)?;
        let g = random_mixture(cfg, &mut rng)?;
        let s = young_row(&mut rep, t.into(), "random", (1.0 / inv_p, 1.0 / inv_q, 1.0 / inv_r), &f, &g, n)?;
        max_slack = max_slack.max(s);
    }
    let grid = cfg.grid()?;
    let gauss = |w: f64| -> Result<GridFunction64> {
        Ok(TestFunction::Gaussian { c1: 1.0, c2: w }.sample(&grid)?)
    };
    let mut max_gap: f64 = 0.0;
    for (p, q) in [(4.0 / 3.0, 4.0 / 3.0), (1.5, 1.2), (2.0, 1.25), (1.1, 3.0)] {
        let r = 1.0 / (1.0 / p + 1.0 / q - 1.0);
        let (a, b) = extremal_gaussian_widths(p, q, 2.0)?;
        let s = young_row(&mut rep, Cell::Empty, "gaussian", (p, q, r), &gauss(a)?, &gauss(b)?, n)?;
        max_gap = max_gap.max(s.abs());
    }
    let mut r2 = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5bd1_e995);
    let (f, g) = (random_mixture(cfg, &mut r2)?, random_mixture(cfg, &mut r2)?);
    let fubini = young_row(&mut rep, Cell::Empty, "fubini", (1.0, 1.0, 1.0), &f, &g, n)?;
    rep.summarize_num("max_slack", max_slack);
    rep.summarize_num("max_equality_gap", max_gap);
    rep.summarize_num("fubini_gap", fubini.abs());
    rep.summarize("inequality_holds", max_slack <= 1e-6);
    Ok(rep)
}

/// Piecewise-linear interpolation of a sampled modulus, capped by `cap` beyond the table.
struct OmegaTable {
    deltas: Vec<f64>,
    values: Vec<f64>,
    cap: f64,
}

impl OmegaTable {
    fn eval(&self, d: f64) -> f64 {
        let last = *self.deltas.last().expect("nonempty");
        if d >= last {
            return self.cap;
        }
        let i = self.deltas.partition_point(|&x| x <= d).max(1);
        let (x0, x1) = (self.deltas[i - 1], self.deltas[i]);
        let (y0, y1) = (self.values[i - 1], self.values[i]);
        y0 + (y1 - y0) * (d - x0) / (x1 - x0)
    }
}

fn omega_table(f: &GridFunction64, p: f64, directions: usize, seed: u64, norm: f64) -> Result<OmegaTable> {
    let g = f.grid();
    let h = g.spacings().into_iter().fold(f64::INFINITY, f64::min);
    let (lo, hi) = (0.5 * h, 0.45 * g.min_half_extent());
    let mut deltas = vec![0.0];
    let m = OMEGA_PROFILE_POINTS;
    deltas.extend((0..m).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (m - 1) as f64).exp()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = modulus_profile(f, p, &deltas, directions, &mut rng)?;
    Ok(OmegaTable {
        deltas,
        values,
        cap: 2.0 * norm,
    })
}

fn converge_common(cfg: &ExperimentConfig, p: f64) -> Result<Report> {
    let f = input_function(cfg)?;
    let fp = lp_norm(&f, p)?;
    let omega = omega_table(&f, p, cfg.directions, cfg.seed, fp)?;
    let unit = KernelSpec64::new(cfg.alpha, cfg.dim, 1.0)?;
    let mut rep = Report::new(cfg, &["R", "p", "error", "relative_error", "ratio", "omega_bound"]);
    let mut errors = Vec::new();
    let mut max_ratio: f64 = 0.0;
    for &radius in &cfg.radii {
        let out = bochner_riesz_spectral(&f, cfg.alpha, radius)?;
        let err = lp_norm(&out.sub(&f)?, p)?;
        let ratio = lp_norm(&out, p)? / fp;
        let bound = kernel_weighted_l1(&unit, |r| omega.eval(r / radius), omega.cap)?;
        rep.push(vec![radius.into(), p.into(), err.into(), (err / fp).into(), ratio.into(), bound.into()]);
        errors.push(err);
        max_ratio = max_ratio.max(ratio);
    }
    let tail_monotone = errors[errors.len() / 2..].windows(2).all(|w| w[1] <= w[0]);
    rep.summarize_num("norm_f", fp);
    rep.summarize("errors_nonincreasing_tail", tail_monotone);
    rep.summarize_num("final_relative_error", errors.last().copied().unwrap_or(f64::NAN) / fp);
    rep.summarize_num("max_ratio", max_ratio);
    rep.summarize("ratio_within_3", max_ratio <= 3.0);
    rep.summarize("kernel_integrable", unit.is_integrable());
    Ok(rep)
}

/// `||B_R f - f||_p` along the `R` list, for the first configured `p`.
pub fn run_converge(cfg: &ExperimentConfig) -> Result<Report> {
    converge_common(cfg, cfg.p[0])
}

/// As [`run_converge`] in the sup norm.
pub fn run_uniform_converge(cfg: &ExperimentConfig) -> Result<Report> {
    converge_common(cfg, f64::INFINITY)
}

/// The fixed family used by the GLS transfer experiment.
pub fn gls_family(dim: usize) -> Vec<(&'static str, TestFunction64)> {
    vec![
        ("standard_normal", TestFunction::standard_normal(dim)),
        ("gaussian", TestFunction::Gaussian { c1: 1.0, c2: 2.0 }),
        ("bump", TestFunction::SmoothBump { radius: 3.0 }),
        ("cosine_packet", TestFunction::CosinePacket { frequency: 2.0, width: 1.0 }),
        (
            "box",
            TestFunction::BoxIndicator {
                corner: vec![-1.0; dim],
                side: 2.0,
            },
        ),
    ]
}

/// `||B f||_{G nu} / ||f||_{G psi}` over the fixed family, with `G nu` sampled on the `r` list.
pub fn run_gls(cfg: &ExperimentConfig) -> Result<Report> {
    let gf = cfg
        .generating_function()?
        .ok_or_else(|| CliError::Config("gls needs a generating function".into()))?;
    let grid = cfg.grid()?;
    let mut rep = Report::new(
        cfg,
        &["R", "function", "r", "nu", "nu_argmin", "norm_bf_r", "gnu_norm_bf", "gpsi_norm_f", "ratio", "status", "reason"],
    );
    let family: Vec<(&str, GridFunction64)> = gls_family(cfg.dim)
        .into_iter()
        .map(|(name, t)| Ok((name, t.sample(&grid)?)))
        .collect::<Result<_>>()?;
    let mut max_ratio: f64 = 0.0;
    let mut all_stabilized = true;
    for &radius in &cfg.radii {
        let nus: Vec<std::result::Result<_, CoreError>> =
            cfg.r.iter().map(|&r| nu_of(&gf, cfg.alpha, cfg.dim, radius, r)).collect();
        for (name, f) in &family {
            let gpsi = gls_norm(f, &gf, cfg.p_samples)?;
            all_stabilized &= gpsi.stabilized;
            let bf = bochner_riesz_spectral(f, cfg.alpha, radius)?;
            let mut terms = Vec::new();
            for (&r, nu) in cfg.r.iter().zip(&nus) {
                match nu {
                    Ok(nu) => {
                        let lr = lp_norm(&bf, r)?;
                        terms.push((r, nu.value, nu.argmin, lr));
                    }
                    Err(e) => {
                        let mut row: Vec<Cell> = vec![radius.into(), (*name).into(), r.into()];
                        row.extend(std::iter::repeat_n(Cell::Empty, 6));
                        row.extend(rejected(e));
                        rep.push(row);
                    }
                }
            }
            let gnu = terms.iter().map(|t| t.3 / t.1).fold(0.0, f64::max);
            let ratio = gnu / gpsi.norm;
            if !terms.is_empty() {
                max_ratio = max_ratio.max(ratio);
            }
            for (r, nu, argmin, lr) in terms {
                let mut row: Vec<Cell> = vec![
                    radius.into(),
                    (*name).into(),
                    r.into(),
                    nu.into(),
                    argmin.into(),
                    lr.into(),
                    gnu.into(),
                    gpsi.norm.into(),
                    ratio.into(),
                ];
                row.extend(ok_row());
                rep.push(row);
            }
        }
    }
    rep.summarize_num("max_ratio", max_ratio);
    rep.summarize("finite", max_ratio.is_finite() && max_ratio > 0.0);
    rep.summarize("gpsi_stabilized", all_stabilized);
    Ok(rep)
}

/// `||B_R^{R^2/2} f - f * f0||_inf` with `f0` the standard normal density.
pub fn run_gaussian_limit(cfg: &ExperimentConfig) -> Result<Report> {
    let grid = cfg.grid()?;
    let f = input_function(cfg)?;
    let f0 = TestFunction::standard_normal(cfg.dim);
    let reference = if cfg.input.is_none() && cfg.test_function() == f0 {
        // Closed form: f0 * f0 = (4 pi)^{-n/2} exp(-|t|^2/4).
        let c = (4.0 * PI).powf(-(cfg.dim as f64) / 2.0);
        GridFunction64::from_fn(grid.clone(), |t| {
            Complex::new(c * (-t.iter().map(|x| x * x).sum::<f64>() / 4.0).exp(), 0.0)
        })?
    } else {
        convolve_spectral(&f, &f0.sample(&grid)?)?
    };
    let scale = reference.max_abs();
    let mut rep = Report::new(cfg, &["R", "error_linf", "relative_error"]);
    let mut errs = Vec::new();
    for &radius in &cfg.radii {
        let out = gaussian_limit_operator(&f, radius)?;
        let err = lp_norm(&out.sub(&reference)?, f64::INFINITY)?;
        rep.push(vec![radius.into(), err.into(), (err / scale).into()]);
        errs.push(err);
    }
    rep.summarize("strictly_decreasing", errs.windows(2).all(|w| w[1] < w[0]));
    rep.summarize_num("final_relative_error", errs.last().copied().unwrap_or(f64::NAN) / scale);
    Ok(rep)
}

/// Minimum of `W psi` on `NU_REFERENCE_POINTS` equispaced nodes of the `nu` interval.
pub fn nu_brute_force(gf: &GeneratingFunction<f64>, alpha: f64, n: usize, radius: f64, r: f64) -> briesz_core::Result<(f64, f64)> {
    if let GeneratingFunction::SinglePoint { r: p } = gf {
        return Ok((briesz_core::gls::w_coeff(alpha, n, radius, *p, r)?, *p));
    }
    let (lo, hi) = nu_interval(gf.support(), alpha, n, r)?;
    let m = NU_REFERENCE_POINTS;
    let mut best = (f64::INFINITY, lo);
    for i in 0..m {
        let p = lo + (hi - lo) * i as f64 / (m - 1) as f64;
        if let Ok(w) = briesz_core::gls::w_coeff(alpha, n, radius, p, r) {
            let v = w * gf.eval(p);
            if v < best.0 {
                best = (v, p);
            }
        }
    }
    Ok(best)
}

/// `W` over the `(p, r)` table; with a generating function also `nu(r)` against brute force.
pub fn run_bounds(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = Report::new(
        cfg,
        &["kind", "R", "p", "r", "q", "q0", "r0", "p0", "value", "reference", "status", "reason"],
    );
    let gf = cfg.generating_function()?;
    let (mut ok, mut bad) = (0usize, 0usize);
    for &radius in &cfg.radii {
        for &p in &cfg.p {
            for &r in &cfg.r {
                let bp = BoundParams::new(cfg.alpha, cfg.dim, p, r, f64::INFINITY);
                let mut row: Vec<Cell> = vec![
                    "W".into(),
                    radius.into(),
                    p.into(),
                    r.into(),
                    bp.q.into(),
                    bp.q0.into(),
                    bp.r0.into(),
                    bp.p0.into(),
                ];
                match briesz_core::gls::w_coeff(cfg.alpha, cfg.dim, radius, p, r) {
                    Ok(w) => {
                        ok += 1;
                        row.extend([w.into(), Cell::Empty]);
                        row.extend(ok_row());
                    }
                    Err(e) => {
                        bad += 1;
                        row.extend([Cell::Empty, Cell::Empty]);
                        row.extend(rejected(&e));
                    }
                }
                rep.push(row);
            }
        }
        if let Some(gf) = &gf {
            for &r in &cfg.r {
                let bp = BoundParams::new(cfg.alpha, cfg.dim, gf.support().0, r, gf.support().1);
                let mut row: Vec<Cell> = vec!["nu".into(), radius.into()];
                match nu_of(gf, cfg.alpha, cfg.dim, radius, r) {
                    Ok(nu) => {
                        let (reference, _) = nu_brute_force(gf, cfg.alpha, cfg.dim, radius, r)?;
                        let q = briesz_core::gls::q_of(nu.argmin, r);
                        row.extend([nu.argmin.into(), r.into(), q.into(), bp.q0.into(), bp.d.into(), Cell::Empty]);
                        row.extend([nu.value.into(), reference.into()]);
                        row.extend(ok_row());
                    }
                    Err(e) => {
                        row.extend([Cell::Empty, r.into(), Cell::Empty, bp.q0.into(), bp.d.into(), Cell::Empty]);
                        row.extend([Cell::Empty, Cell::Empty]);
                        row.extend(rejected(&e));
                    }
                }
                rep.push(row);
            }
        }
    }
    rep.summarize("admissible", ok);
    rep.summarize("rejected", bad);
    rep.summarize("nu_bracket_points", NU_BRACKET_POINTS);
    Ok(rep)
}

/// `alpha_k = k alpha_max / steps` for `k = 1..=steps`.
pub fn alpha_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    (1..=cfg.alpha_steps).map(|k| cfg.alpha_max * k as f64 / cfg.alpha_steps as f64).collect()
}

/// `r_steps` equispaced radii from `r_min` to `r_max` inclusive.
pub fn radius_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    if cfg.r_steps == 1 {
        return vec![cfg.r_min];
    }
    (0..cfg.r_steps)
        .map(|i| cfg.r_min + (cfg.r_max - cfg.r_min) * i as f64 / (cfg.r_steps - 1) as f64)
        .collect()
}

/// `max W` over the `(alpha, R)` grid for every `(p, r)`, compared with `Theta(n, q)`.
pub fn run_lowerbound(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = Report::new(
        cfg,
        &[
            "p",
            "r",
            "q",
            "max_W",
            "alpha",
            "R",
            "theta_reference",
            "exceeds_theta",
            "on_R_boundary",
            "admissible_cells",
            "rejected_cells",
            "status",
            "reason",
        ],
    );
    let (alphas, radii) = (alpha_grid(cfg), radius_grid(cfg));
    let mut all_exceed = true;
    for &p in &cfg.p {
        for &r in &cfg.r {
            let q = briesz_core::gls::q_of(p, r);
            let mut row: Vec<Cell> = vec![p.into(), r.into(), q.into()];
            match qn_lower_search(cfg.dim, p, r, &alphas, &radii) {
                Ok(lb) => {
                    all_exceed &= lb.exceeds_theta;
                    row.extend([
                        lb.max_w.into(),
                        lb.alpha.into(),
                        lb.radius.into(),
                        lb.theta_reference.into(),
                        lb.exceeds_theta.into(),
                        lb.on_r_boundary.into(),
                        lb.admissible_cells.into(),
                        lb.rejected_cells.into(),
                    ]);
                    row.extend(ok_row());
                }
                Err(e) => {
                    all_exceed = false;
                    row.extend(std::iter::repeat_n(Cell::Empty, 8));
                    row.extend(rejected(&e));
                }
            }
            rep.push(row);
        }
    }
    rep.summarize("all_exceed_theta", all_exceed);
    rep.summarize("grid", json!({"alpha": [alphas[0], alphas[alphas.len() - 1], alphas.len()], "R": [radii[0], radii[radii.len() - 1], radii.len()]}));
    Ok(rep)
}
