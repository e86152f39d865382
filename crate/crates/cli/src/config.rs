//! Experiment configuration: defaults per experiment, JSON overlay, flag overrides.

use std::path::{Path, PathBuf};

use briesz_core::field::{Grid, TestFunction};
use briesz_core::gls::GeneratingFunction;
use briesz_core::kernel::KernelSpec;
use briesz_core::spectral::DualGrid;
use briesz_core::{Grid64, TestFunction64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Kernel,
    Apply,
    Norms,
    Young,
    Converge,
    Uconverge,
    Gls,
    GaussLimit,
    Bounds,
    Lowerbound,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Kernel => "kernel",
            Experiment::Apply => "apply",
            Experiment::Norms => "norms",
            Experiment::Young => "young",
            Experiment::Converge => "converge",
            Experiment::Uconverge => "uconverge",
            Experiment::Gls => "gls",
            Experiment::GaussLimit => "gauss-limit",
            Experiment::Bounds => "bounds",
            Experiment::Lowerbound => "lowerbound",
        }
    }

    /// Whether the experiment applies a multiplier on the grid.
    fn uses_operator(self) -> bool {
        matches!(
            self,
            Experiment::Apply | Experiment::Converge | Experiment::Uconverge | Experiment::Gls | Experiment::GaussLimit
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Spectral,
    Direct,
}

/// Everything an experiment needs. Serialized in full into every report header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub dim: usize,
    pub half_extent: Option<f64>,
    pub points: Option<usize>,
    pub alpha: f64,
    /// Multiplier radii `R`.
    pub radii: Vec<f64>,
    #[serde(with = "exponents")]
    pub p: Vec<f64>,
    #[serde(with = "exponents")]
    pub r: Vec<f64>,
    /// Kernel norm exponents.
    #[serde(with = "exponents")]
    pub q: Vec<f64>,
    /// Radial distances for kernel tables.
    pub z: Vec<f64>,
    /// Shift lengths for modulus-of-continuity tables.
    pub deltas: Vec<f64>,
    /// `power:m=2`, `iwsb:a=1,b=3,alpha=1,beta=0` or `point:r=2`.
    pub psi: Option<String>,
    pub test_function: Option<TestFunction64>,
    pub trials: usize,
    pub directions: usize,
    pub p_samples: usize,
    pub alpha_max: f64,
    pub alpha_steps: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub method: Method,
    pub input: Option<PathBuf>,
    pub save_field: Option<PathBuf>,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let mut cfg = Self {
            experiment,
            dim: 1,
            half_extent: None,
            points: None,
            alpha: 0.5,
            radii: vec![2.0, 4.0, 8.0],
            p: vec![2.0],
            r: vec![],
            q: vec![],
            z: vec![],
            deltas: vec![],
            psi: None,
            test_function: None,
            trials: 200,
            directions: 8,
            p_samples: 32,
            alpha_max: 20.0,
            alpha_steps: 200,
            r_min: 1.0,
            r_max: 100.0,
            r_steps: 100,
            method: Method::Spectral,
            input: None,
            save_field: None,
            seed: 42,
            format: OutputFormat::Csv,
            out: None,
        };
        match experiment {
            Experiment::Kernel => {
                cfg.dim = 2;
                cfg.radii = vec![1.0];
                cfg.q = vec![1.2, 1.5, 2.0, 3.0, 50.0];
                cfg.z = vec![0.0, 0.5, 1.0, 2.0, 4.0, 8.0];
            }
            Experiment::Norms => {
                cfg.p = vec![1.0, 2.0, 4.0, f64::INFINITY];
                cfg.deltas = vec![0.0, 0.01, 0.05, 0.1];
            }
            Experiment::Converge => {
                cfg.dim = 2;
                cfg.radii = vec![2.0, 4.0, 8.0, 16.0, 32.0];
            }
            Experiment::Uconverge => {
                cfg.dim = 2;
                cfg.radii = vec![2.0, 4.0, 8.0, 16.0, 32.0];
                cfg.p = vec![f64::INFINITY];
            }
            Experiment::Gls => {
                cfg.dim = 2;
                cfg.radii = vec![4.0];
                cfg.r = vec![4.0, 6.0, 8.0, 12.0, 16.0];
                cfg.psi = Some("iwsb:a=1,b=3,alpha=0.5,beta=0.5".into());
            }
            Experiment::Bounds => {
                cfg.dim = 2;
                cfg.radii = vec![2.0];
                cfg.p = vec![1.5, 2.0, 3.0];
                cfg.r = vec![2.0, 3.0, 4.0, 6.0, 8.0];
            }
            Experiment::Lowerbound => {
                cfg.dim = 2;
                cfg.r = vec![4.0];
            }
            Experiment::Apply | Experiment::Young | Experiment::GaussLimit => {}
        }
        cfg
    }

    /// Defaults, then the JSON file, then flag overrides; grid and test
    /// function filled in from `dim` when still unset.
    pub fn build(experiment: Experiment, file: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut value = serde_json::to_value(Self::defaults(experiment))?;
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)?;
            let patch: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let serde_json::Value::Object(patch) = patch else {
                return Err(CliError::Config("config file must hold a JSON object".into()));
            };
            let obj = value.as_object_mut().expect("struct serializes to an object");
            for (k, v) in patch {
                obj.insert(k, v);
            }
        }
        let mut cfg: Self = serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?;
        // The subcommand decides the experiment.
        cfg.experiment = experiment;
        overrides.apply(&mut cfg);
        cfg.resolve();
        cfg.validate()?;
        Ok(cfg)
    }

    fn resolve(&mut self) {
        let (l, m) = default_grid(self.dim);
        self.half_extent.get_or_insert(l);
        self.points.get_or_insert(m);
        if self.test_function.is_none() {
            self.test_function = Some(match self.experiment {
                Experiment::GaussLimit => TestFunction::standard_normal(self.dim),
                _ => TestFunction::SmoothBump { radius: 3.0 },
            });
        }
    }

    pub fn grid(&self) -> Result<Grid64> {
        let (l, m) = default_grid(self.dim);
        Grid::cube(self.dim, self.half_extent.unwrap_or(l), self.points.unwrap_or(m))
            .map_err(CliError::validation)
    }

    pub fn test_function(&self) -> TestFunction64 {
        self.test_function
            .clone()
            .unwrap_or(TestFunction::SmoothBump { radius: 3.0 })
    }

    pub fn generating_function(&self) -> Result<Option<GeneratingFunction<f64>>> {
        self.psi.as_deref().map(parse_psi).transpose()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        let grid = self.grid()?;
        KernelSpec::new(self.alpha, self.dim, 1.0).map_err(CliError::validation)?;
        if self.radii.is_empty() || self.radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return bad(format!("radii must be a nonempty list of positive reals, got {:?}", self.radii));
        }
        if matches!(
            self.experiment,
            Experiment::Converge | Experiment::Uconverge | Experiment::GaussLimit
        ) && self.radii.windows(2).any(|w| w[1] <= w[0])
        {
            return bad("radii must be strictly increasing".into());
        }
        for (name, list) in [("p", &self.p), ("r", &self.r)] {
            if list.iter().any(|v| !(*v >= 1.0)) {
                return bad(format!("{name} values must be >= 1, got {list:?}"));
            }
        }
        // q <= q0 is reported per row by the kernel table.
        if self.q.iter().any(|v| !(*v > 0.0)) {
            return bad(format!("q values must be > 0, got {:?}", self.q));
        }
        if self.p.is_empty() {
            return bad("at least one p is required".into());
        }
        if matches!(self.experiment, Experiment::Gls | Experiment::Bounds | Experiment::Lowerbound) && self.r.is_empty() {
            return bad("at least one r is required".into());
        }
        if self.z.iter().chain(&self.deltas).any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return bad("z and delta values must be finite and >= 0".into());
        }
        if self.trials == 0 || self.directions == 0 {
            return bad("trials and directions must be >= 1".into());
        }
        if self.p_samples < 16 {
            return bad(format!("p_samples must be >= 16, got {}", self.p_samples));
        }
        if !(self.alpha_max > 0.0) || self.alpha_steps == 0 || !(self.r_min > 0.0) || !(self.r_max >= self.r_min) || self.r_steps == 0 {
            return bad("lower-bound grid needs alpha_max > 0, 0 < r_min <= r_max and positive step counts".into());
        }
        if let Some(gf) = self.generating_function()? {
            gf.validate().map_err(CliError::validation)?;
        }
        if self.experiment == Experiment::Gls && self.psi.is_none() {
            return bad("gls needs a generating function (--psi)".into());
        }
        if self.input.is_none() {
            self.test_function().validate(&grid).map_err(CliError::validation)?;
        }
        if self.experiment.uses_operator() {
            let dual = DualGrid::new(grid);
            let worst = self.radii.iter().cloned().fold(0.0, f64::max);
            dual.check_radius(worst).map_err(CliError::validation)?;
        }
        Ok(())
    }
}

/// `n = 1 -> (16, 1024)`, `n = 2 -> (8, 256)`, `n = 3 -> (8, 64)`.
pub fn default_grid(dim: usize) -> (f64, usize) {
    match dim {
        1 => (16.0, 1024),
        2 => (8.0, 256),
        _ => (8.0, 64),
    }
}

/// Command-line overrides; `None` leaves the configured value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub dim: Option<usize>,
    pub radii: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub r: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
    pub psi: Option<String>,
    pub half_extent: Option<f64>,
    pub points: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub save_field: Option<PathBuf>,
    pub method: Option<Method>,
}

impl Overrides {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(d) = self.dim {
            if d != cfg.dim {
                // A new dimension invalidates grid and test function defaults.
                cfg.half_extent = None;
                cfg.points = None;
                cfg.test_function = None;
            }
            cfg.dim = d;
        }
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = &self.$field {
                    cfg.$field = v.clone();
                }
            };
            ($field:ident, some) => {
                if let Some(v) = &self.$field {
                    cfg.$field = Some(v.clone());
                }
            };
        }
        set!(alpha);
        set!(radii);
        set!(p);
        set!(r);
        set!(q);
        set!(trials);
        set!(seed);
        set!(format);
        set!(method);
        set!(psi, some);
        set!(half_extent, some);
        set!(points, some);
        set!(out, some);
        set!(input, some);
        set!(save_field, some);
    }
}

/// Parse `power:m=2`, `iwsb:a=1,b=3,alpha=1,beta=0` or `point:r=2`.
pub fn parse_psi(text: &str) -> Result<GeneratingFunction<f64>> {
    let bad = |m: &str| CliError::Config(format!("bad --psi '{text}': {m}"));
    let (kind, rest) = text.split_once(':').ok_or_else(|| bad("expected kind:key=value,..."))?;
    let mut params = std::collections::BTreeMap::new();
    for pair in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = pair.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let v: f64 = v.trim().parse().map_err(|_| bad("value is not a number"))?;
        params.insert(k.trim().to_string(), v);
    }
    let mut take = |k: &str| params.remove(k).ok_or_else(|| bad(&format!("missing '{k}'")));
    let gf = match kind.trim() {
        "power" => GeneratingFunction::Power { m: take("m")? },
        "iwsb" => GeneratingFunction::IwaniecSbordone {
            a: take("a")?,
            b: take("b")?,
            alpha: take("alpha")?,
            beta: take("beta")?,
        },
        "point" => GeneratingFunction::SinglePoint { r: take("r")? },
        _ => return Err(bad("kind must be power, iwsb or point")),
    };
    if let Some(k) = params.keys().next() {
        return Err(bad(&format!("unknown key '{k}'")));
    }
    gf.validate().map_err(|e| bad(&e.to_string()))?;
    Ok(gf)
}

/// Exponent lists with `+inf` written as the string `"inf"`.
mod exponents {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Exp {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|&x| if x.is_infinite() { Exp::Text("inf".into()) } else { Exp::Num(x) })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Exp>::deserialize(d)?
            .into_iter()
            .map(|e| match e {
                Exp::Num(x) => Ok(x),
                Exp::Text(t) => t
                    .parse::<f64>()
                    .map_err(|_| serde::de::Error::custom(format!("bad exponent '{t}'"))),
            })
            .collect()
    }
}
