//! Run configuration: model references, grids and per-command sections.
//!
//! A config file is TOML. Every section is optional and each present one is
//! executed by [`crate::run::execute`]:
//!
//! ```toml
//! seed = 7
//! out = "results"
//! model = "gp"            # builtin name, model file path, or a [model] table
//!
//! [scan2d]
//! p = 1.0
//! lambda = "0.05:0.15:geometric:11"
//! nx = 513
//! ny = 32
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TwaveError};
use crate::nonlinearity::{builtin, ModelSpec, Nonlinearity};
use crate::waves::Branch;

/// A model given by builtin name or file path, or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelRef {
    Named(String),
    Inline(ModelSpec),
}

impl Default for ModelRef {
    fn default() -> Self {
        ModelRef::Named("gp".into())
    }
}

impl ModelRef {
    /// Resolves to a model. Names of builtins win over file paths; relative
    /// paths are taken relative to `base` when given.
    pub fn load(&self, base: Option<&Path>) -> Result<Nonlinearity> {
        match self {
            ModelRef::Inline(spec) => spec.build(),
            ModelRef::Named(name) => {
                if let Some(m) = builtin(name) {
                    return Ok(m);
                }
                let mut path = PathBuf::from(name);
                if path.is_relative() {
                    if let Some(b) = base {
                        path = b.join(path);
                    }
                }
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| TwaveError::Config(format!("model {}: {e}", path.display())))?;
                ModelSpec::from_toml(&text)?.build()
            }
        }
    }

    /// Inline form of a resolved model, so that config hashes do not
    /// depend on where a model file lives.
    pub fn resolved(model: &Nonlinearity) -> Self {
        match model.spec() {
            Some(spec) => ModelRef::Inline(spec.clone()),
            None => ModelRef::Named(model.name.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Geometric,
}

/// `n` points from `min` to `max` (both included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub spacing: Spacing,
    pub n: usize,
}

impl GridSpec {
    /// Parses `min:max:geometric|linear:n`; `min:max:n` is geometric.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let bad = |why: &str| TwaveError::Config(format!("grid {text:?}: {why} (expected min:max:geometric|linear:n)"));
        let (min, max, spacing, n) = match parts.as_slice() {
            [a, b, n] => (*a, *b, "geometric", *n),
            [a, b, s, n] => (*a, *b, *s, *n),
            _ => return Err(bad("wrong number of fields")),
        };
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("{s:?} is not a number")));
        let spacing = match spacing {
            "geometric" | "geom" | "log" => Spacing::Geometric,
            "linear" | "lin" => Spacing::Linear,
            other => return Err(bad(&format!("unknown spacing {other:?}"))),
        };
        let n = n.parse::<usize>().map_err(|_| bad(&format!("{n:?} is not a count")))?;
        let g = GridSpec {
            min: num(min)?,
            max: num(max)?,
            spacing,
            n,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let ok_bounds = self.min.is_finite() && self.max.is_finite() && (self.min < self.max || (self.n == 1 && self.min == self.max));
        if !ok_bounds || self.n == 0 {
            return Err(TwaveError::Config(format!(
                "grid needs min < max and n >= 1, got {}:{}:{}",
                self.min, self.max, self.n
            )));
        }
        if self.spacing == Spacing::Geometric && !(self.min > 0.0) {
            return Err(TwaveError::Config("geometric grid needs min > 0".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        let last = (self.n - 1) as f64;
        let mut v: Vec<f64> = (0..self.n)
            .map(|k| {
                let t = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Geometric => self.min * (self.max / self.min).powf(t),
                }
            })
            .collect();
        // Pin the ends against rounding in powf.
        v[0] = self.min;
        v[self.n - 1] = self.max;
        v
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self.spacing {
            Spacing::Linear => "linear",
            Spacing::Geometric => "geometric",
        };
        write!(f, "{}:{}:{}:{}", self.min, self.max, s, self.n)
    }
}

impl Serialize for LambdaGrid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LambdaGrid::Spec(g) => s.serialize_str(&g.to_string()),
            LambdaGrid::List(v) => v.serialize(s),
        }
    }
}

/// λ values, as a grid string or an explicit ascending list.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaGrid {
    Spec(GridSpec),
    List(Vec<f64>),
}

impl<'de> Deserialize<'de> for LambdaGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            List(Vec<f64>),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => GridSpec::parse(&t).map(LambdaGrid::Spec).map_err(serde::de::Error::custom),
            Raw::List(v) => Ok(LambdaGrid::List(v)),
        }
    }
}

impl LambdaGrid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            LambdaGrid::Spec(g) => g.points(),
            LambdaGrid::List(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSection {
    #[serde(default)]
    pub s_max: Option<f64>,
    #[serde(default)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub c: f64,
    #[serde(default = "lower")]
    pub branch: Branch,
    #[serde(default)]
    pub x_max: Option<f64>,
    #[serde(default = "profile_points")]
    pub points: usize,
}

fn lower() -> Branch {
    Branch::Lower
}

fn profile_points() -> usize {
    8001
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionSection {
    pub c_min: f64,
    pub c_max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Emin1Section {
    /// Number of envelope points on `[0, π]`.
    pub p_grid: usize,
    /// Speeds sampled to build the curve.
    #[serde(default = "emin1_c_min")]
    pub c_min: f64,
    #[serde(default = "emin1_c_max")]
    pub c_max: f64,
    #[serde(default = "emin1_speeds")]
    pub n_speeds: usize,
}

fn emin1_c_min() -> f64 {
    0.005
}

fn emin1_c_max() -> f64 {
    1.41
}

fn emin1_speeds() -> usize {
    400
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scan2dSection {
    pub p: f64,
    pub lambda: LambdaGrid,
    #[serde(default = "scan_nx")]
    pub nx: usize,
    #[serde(default = "scan_ny")]
    pub ny: usize,
    /// `None`: `max(12 / √(2 - c^2), 20)` for the speed of the 1D wave.
    #[serde(default)]
    pub x_max: Option<f64>,
    #[serde(default = "scan_perturbation")]
    pub perturbation: f64,
    #[serde(default = "scan_spread")]
    pub blend_spread: f64,
    #[serde(default = "scan_width")]
    pub bracket_rel_width: f64,
    #[serde(default = "scan_bisections")]
    pub max_bisections: usize,
    #[serde(default = "scan_tol_e")]
    pub tol_e: f64,
    #[serde(default = "scan_window")]
    pub window: usize,
    #[serde(default = "scan_max_iter")]
    pub max_iter: usize,
}

fn scan_nx() -> usize {
    2049
}
fn scan_ny() -> usize {
    64
}
fn scan_perturbation() -> f64 {
    1e-2
}
fn scan_spread() -> f64 {
    0.3
}
fn scan_width() -> f64 {
    0.05
}
fn scan_bisections() -> usize {
    8
}
fn scan_tol_e() -> f64 {
    1e-12
}
fn scan_window() -> usize {
    100
}
fn scan_max_iter() -> usize {
    20_000
}

impl Scan2dSection {
    pub fn new(p: f64, lambda: LambdaGrid) -> Self {
        Scan2dSection {
            p,
            lambda,
            nx: scan_nx(),
            ny: scan_ny(),
            x_max: None,
            perturbation: scan_perturbation(),
            blend_spread: scan_spread(),
            bracket_rel_width: scan_width(),
            max_bisections: scan_bisections(),
            tol_e: scan_tol_e(),
            window: scan_window(),
            max_iter: scan_max_iter(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: ModelRef,
    /// Output directory; `None` prints tables to stdout.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Drives the phase of the transverse perturbation of 2D starts.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub check: Option<CheckSection>,
    #[serde(default)]
    pub profile: Option<ProfileSection>,
    #[serde(default)]
    pub dispersion: Option<DispersionSection>,
    #[serde(default)]
    pub emin1: Option<Emin1Section>,
    #[serde(default)]
    pub scan2d: Option<Scan2dSection>,
}

impl RunConfig {
    pub fn new(model: ModelRef) -> Self {
        RunConfig {
            model,
            out: None,
            seed: 0,
            check: None,
            profile: None,
            dispersion: None,
            emin1: None,
            scan2d: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| TwaveError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| TwaveError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Tolerances positive, grids nonempty and sorted.
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(TwaveError::Config(m));
        if let Some(c) = &self.check {
            if c.s_max.is_some_and(|s| !(s > 0.0)) || c.n.is_some_and(|n| n < 10) {
                return err("check: need s_max > 0 and n >= 10".into());
            }
        }
        if let Some(p) = &self.profile {
            if !p.c.is_finite() || p.points < 5 || p.x_max.is_some_and(|x| !(x > 0.0)) {
                return err("profile: need finite c, points >= 5, x_max > 0".into());
            }
        }
        if let Some(d) = &self.dispersion {
            if !(d.c_min < d.c_max) || d.n < 2 {
                return err("dispersion: need c_min < c_max and n >= 2".into());
            }
        }
        if let Some(e) = &self.emin1 {
            if e.p_grid < 2 || !(e.c_min < e.c_max) || e.n_speeds < 10 {
                return err("emin1: need p_grid >= 2, c_min < c_max, n_speeds >= 10".into());
            }
        }
        if let Some(s) = &self.scan2d {
            let l = s.lambda.points();
            if l.is_empty() || !(l[0] > 0.0) || l.windows(2).any(|w| !(w[0] < w[1])) {
                return err("scan2d: λ grid must be positive, nonempty and strictly ascending".into());
            }
            if !(s.p > 0.0) || s.nx < 5 || s.ny < 1 || s.x_max.is_some_and(|x| !(x > 0.0)) {
                return err("scan2d: need p > 0, nx >= 5, ny >= 1, x_max > 0".into());
            }
            if !(s.tol_e > 0.0) || !(s.bracket_rel_width > 0.0) || s.window == 0 || s.max_iter == 0 {
                return err("scan2d: tolerances and iteration counts must be positive".into());
            }
        }
        Ok(())
    }

    /// Canonical JSON used for the config hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("configs serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_strings() {
        let g = GridSpec::parse("0.05:4:geometric:12").unwrap();
        let v = g.points();
        assert_eq!(v.len(), 12);
        assert_eq!(v[0], 0.05);
        assert_eq!(v[11], 4.0);
        let r = v[1] / v[0];
        assert!(v.windows(2).all(|w| (w[1] / w[0] - r).abs() < 1e-12));
        let l = GridSpec::parse("1:2:linear:3").unwrap().points();
        assert_eq!(l, vec![1.0, 1.5, 2.0]);
        assert_eq!(GridSpec::parse("0.1:1:5").unwrap().spacing, Spacing::Geometric);
        for bad in ["1:2", "a:2:3", "0:1:geometric:4", "2:1:linear:3", "1:2:cubic:3", "1:2:linear:x"] {
            assert!(matches!(GridSpec::parse(bad), Err(TwaveError::Config(_))), "{bad}");
        }
        assert_eq!(GridSpec::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn config_round_trip_and_validation() {
        let text = r#"
seed = 3
model = "gp"
[scan2d]
p = 1.0
lambda = "0.05:0.15:geometric:5"
nx = 257
ny = 8
[profile]
c = 1.0
"#;
        let cfg = RunConfig::from_toml(text).unwrap();
        let s = cfg.scan2d.as_ref().unwrap();
        assert_eq!(s.lambda.points().len(), 5);
        assert_eq!(s.window, 100);
        assert_eq!(cfg.profile.as_ref().unwrap().branch, Branch::Lower);
        let again: RunConfig = toml::from_str(&toml::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);

        let inline = "[model]\nkind = \"example55\"\n[dispersion]\nc_min = 0.1\nc_max = 1.3\nn = 5\n";
        let cfg = RunConfig::from_toml(inline).unwrap();
        assert_eq!(cfg.model.load(None).unwrap().name, "example55");

        for bad in [
            "[scan2d]\np = 1.0\nlambda = [0.2, 0.1]\n",
            "[scan2d]\np = 1.0\nlambda = \"0.1:1:4\"\ntol_e = 0.0\n",
            "[dispersion]\nc_min = 1.0\nc_max = 0.5\nn = 3\n",
            "unknown = 1\n",
            "[profile\n",
        ] {
            assert!(matches!(RunConfig::from_toml(bad), Err(TwaveError::Config(_))), "{bad}");
        }
        assert!(matches!(
            ModelRef::Named("/nonexistent/model.toml".into()).load(None),
            Err(TwaveError::Config(_))
        ));
    }
}
