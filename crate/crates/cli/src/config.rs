//! Experiment configuration: flat key=value files with flag overrides.

use std::path::{Path, PathBuf};

use delone_ids::{Error, Result};

/// Everything a run needs. Defaults give the flagship decorated-lattice
/// experiment; a config file and command-line flags override (flags win).
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// square | triangular | ab | file
    pub generator: String,
    pub spacing: f64,
    /// Point-set file for `generator = file`.
    pub input: Option<PathBuf>,
    /// Window half-widths of the van Hove sequence.
    pub l_list: Vec<f64>,
    /// Decoration scale; absent means no decoration.
    pub decorate_r: Option<f64>,
    /// Radius of the decorated ball-pattern class.
    pub pattern_s: f64,
    /// nn | decorated
    pub rule: String,
    /// Hopping threshold (nn) or host threshold (decorated).
    pub theta: f64,
    /// Energies to inspect for jumps.
    pub e_targets: Vec<f64>,
    pub seed: u64,
    pub out: PathBuf,
    /// Eigenvalue clustering tolerance; absent means automatic.
    pub tol_cluster: Option<f64>,
    pub weight_floor: f64,
    /// Expected verdict for `verify`: true = jump present. Absent infers
    /// from the rule (decorated expects a jump, nn expects none).
    pub expect_jump: Option<bool>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            generator: "square".into(),
            spacing: 1.0,
            input: None,
            l_list: Vec::new(),
            decorate_r: None,
            pattern_s: 0.4,
            rule: "nn".into(),
            theta: 1.0,
            e_targets: vec![0.0],
            seed: 0,
            out: PathBuf::from("out"),
            tol_cluster: None,
            weight_floor: 0.5,
            expect_jump: None,
        }
    }
}

fn bad_config(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| bad_config(format!("bad number {t:?} in list")))
        })
        .collect()
}

impl ExperimentConfig {
    /// Loads a flat `key = value` file ('#' starts a comment).
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let text = std::fs::read_to_string(path)?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                msg: format!("expected key = value, found {line:?}"),
            })?;
            cfg.set(key.trim(), value.trim()).map_err(|e| Error::Parse {
                line: idx + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(cfg)
    }

    /// Applies one key. Shared by the file loader and flag overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "generator" => self.generator = value.into(),
            "spacing" => self.spacing = parse_num(key, value)?,
            "input" => self.input = Some(PathBuf::from(value)),
            "L" | "l" => self.l_list = parse_f64_list(value)?,
            "decorate_r" => self.decorate_r = Some(parse_num(key, value)?),
            "pattern_s" => self.pattern_s = parse_num(key, value)?,
            "rule" => self.rule = value.into(),
            "theta" => self.theta = parse_num(key, value)?,
            "E" | "e" => self.e_targets = parse_f64_list(value)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| bad_config(format!("bad seed {value:?}")))?
            }
            "out" => self.out = PathBuf::from(value),
            "tol_cluster" => {
                self.tol_cluster = if value == "auto" {
                    None
                } else {
                    Some(parse_num(key, value)?)
                }
            }
            "weight_floor" => self.weight_floor = parse_num(key, value)?,
            "expect" => {
                self.expect_jump = match value {
                    "jump" => Some(true),
                    "no-jump" => Some(false),
                    other => return Err(bad_config(format!("expect must be jump or no-jump, got {other:?}"))),
                }
            }
            other => return Err(bad_config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Consistency checks that need no generation: scale relations and
    /// required fields. Geometry-dependent checks (measured packing radius)
    /// happen again at build time, still before any eigensolve.
    pub fn validate(&self) -> Result<()> {
        if self.l_list.is_empty() {
            return Err(bad_config("no windows: give L = L1,L2,..."));
        }
        if self.l_list.iter().any(|l| *l <= 0.0)
            || self.l_list.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(bad_config("L list must be positive and strictly increasing"));
        }
        if self.spacing <= 0.0 {
            return Err(bad_config("spacing must be positive"));
        }
        if self.pattern_s <= 0.0 {
            return Err(bad_config("pattern_s must be positive"));
        }
        if self.weight_floor <= 0.0 {
            return Err(bad_config("weight_floor must be positive"));
        }
        match self.generator.as_str() {
            "square" | "triangular" | "ab" | "file" => {}
            other => return Err(Error::UnknownGenerator(other.into())),
        }
        if self.generator == "file" && self.input.is_none() {
            return Err(bad_config("generator = file needs input = <path>"));
        }
        match self.rule.as_str() {
            "nn" => {}
            "decorated" => {
                let r = self
                    .decorate_r
                    .ok_or_else(|| bad_config("rule = decorated needs decorate_r"))?;
                if self.theta < 2.0 * r {
                    return Err(bad_config(format!(
                        "theta = {} must be at least twice the decoration scale {r}",
                        self.theta
                    )));
                }
            }
            other => return Err(bad_config(format!("unknown rule {other:?}"))),
        }
        if let Some(r) = self.decorate_r {
            if r <= 0.0 {
                return Err(bad_config("decorate_r must be positive"));
            }
            // packing radii of the built-in lattices are known a priori
            let r_pack = match self.generator.as_str() {
                "square" | "triangular" => Some(self.spacing / 2.0),
                "ab" => Some(self.spacing * (std::f64::consts::PI / 8.0).sin()),
                _ => None,
            };
            if let Some(rp) = r_pack {
                if r >= rp {
                    return Err(Error::ScaleViolation { r, r_pack: rp });
                }
            }
            if self.pattern_s <= r / 21.0 {
                return Err(bad_config(
                    "pattern_s must exceed the decoration diameter r/21",
                ));
            }
        }
        Ok(())
    }

    /// Expected verify outcome: explicit key, else inferred from the rule.
    pub fn expects_jump(&self) -> bool {
        self.expect_jump.unwrap_or(self.rule == "decorated")
    }
}

fn parse_num(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| bad_config(format!("bad number {value:?} for {key}")))
}
