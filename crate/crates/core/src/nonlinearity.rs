//! Nonlinearity models: `F`, the potential `V(s) = ∫_s^1 F`, and the
//! derived functions used by the wave constructions.
//!
//! Every model is normalized so that `F(1) = 0` and `F'(1) = -1`. Builtin
//! models provide `V` in closed form through [`Jet`] arithmetic, which also
//! yields `V' = -F` and `V'' = -F'` exactly.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TwaveError};
use crate::jet::{smoothstep, Jet};
use crate::numerics::interp::Pchip;
use crate::numerics::quad::{integrate, QuadTol};

/// Parameters of the cubic-contact model: `V` is Gross–Pitaevskii near and
/// above 1, and equals `(c0^2 (1-s)^2 + a^2 (s-s0)^3) / (4s)` around `s0`,
/// so that `g(., c0)` has a triple root at `s0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CubicContactParams {
    pub c0: f64,
    pub s0: f64,
    pub a: f64,
    /// Half-width of the interval around `s0` where the cubic form is exact.
    pub delta2: f64,
    /// The cubic form is blended into `½(1-s)^2` on `[blend_lo, blend_hi]`;
    /// `1 - blend_hi` plays the role of the GP neighbourhood half-width.
    pub blend_lo: f64,
    pub blend_hi: f64,
    /// Below `s0 - delta2`: if `None`, the quadratic Taylor polynomial of the
    /// cubic form; otherwise `V` is blended down to this constant level on
    /// `[plateau_lo, s0 - delta2]` and stays constant below.
    pub plateau_level: Option<f64>,
    pub plateau_lo: f64,
}

impl Default for CubicContactParams {
    fn default() -> Self {
        CubicContactParams {
            c0: 1.2,
            s0: 0.3,
            a: 1.0,
            delta2: 0.1,
            blend_lo: 0.75,
            blend_hi: 0.85,
            plateau_level: None,
            plateau_lo: 0.0,
        }
    }
}

impl CubicContactParams {
    /// Defaults for the two-speed variant: low plateau near 0 so that the
    /// black-soliton threshold is small, contact speed above `√2/2`.
    pub fn two_speed() -> Self {
        CubicContactParams {
            c0: 0.8,
            s0: 0.5,
            a: 1.0,
            delta2: 0.05,
            blend_lo: 0.55,
            blend_hi: 0.7,
            plateau_level: Some(0.01),
            plateau_lo: 0.35,
        }
    }

    fn validate(&self) -> Result<()> {
        let p = self;
        let lo = p.s0 - p.delta2;
        let mut bad = Vec::new();
        if !(p.c0 > 0.0 && p.c0 * p.c0 < 2.0) {
            bad.push("need 0 < c0 < sqrt(2)");
        }
        if !(p.s0 > 0.0 && p.s0 < 1.0 && p.a > 0.0 && p.delta2 > 0.0 && lo > 0.0) {
            bad.push("need 0 < s0 - delta2 < s0 < 1, a > 0");
        }
        if !(p.s0 + p.delta2 <= p.blend_lo && p.blend_lo < p.blend_hi && p.blend_hi < 1.0) {
            bad.push("need s0 + delta2 <= blend_lo < blend_hi < 1");
        }
        // On the GP side 4sV > c0^2 (1-s)^2 requires s > c0^2 / 2.
        if !(0.5 * p.c0 * p.c0 < p.blend_lo) {
            bad.push("need c0^2 / 2 < blend_lo");
        }
        if let Some(level) = p.plateau_level {
            if !(level > 0.0 && p.plateau_lo >= 0.0 && p.plateau_lo < lo) {
                bad.push("need plateau_level > 0 and 0 <= plateau_lo < s0 - delta2");
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(TwaveError::Config(format!("cubic contact model: {}", bad.join("; "))))
        }
    }

    fn cubic_form(&self, s: Jet) -> Jet {
        let c2 = self.c0 * self.c0;
        let a2 = self.a * self.a;
        (c2 * (1.0 - s).powi(2) + a2 * (s - self.s0).powi(3)) / (4.0 * s)
    }

    fn potential(&self, s: Jet) -> Jet {
        let lo = self.s0 - self.delta2;
        let x = s.v;
        if x >= self.blend_hi {
            return gp_potential(s);
        }
        if x >= self.blend_lo {
            let w = smoothstep((s - self.blend_lo) * (1.0 / (self.blend_hi - self.blend_lo)));
            return (1.0 - w) * self.cubic_form(s) + w * gp_potential(s);
        }
        if x >= lo {
            return self.cubic_form(s);
        }
        match self.plateau_level {
            None => {
                let at = self.cubic_form(Jet::var(lo));
                let d = s - lo;
                at.v + at.d1 * d + 0.5 * at.d2 * d * d
            }
            Some(level) => {
                if x <= self.plateau_lo {
                    return Jet::cst(level);
                }
                let w = smoothstep((s - self.plateau_lo) * (1.0 / (lo - self.plateau_lo)));
                (1.0 - w) * level + w * self.cubic_form(s)
            }
        }
    }
}

/// Parameters of the plateau model `V = ½(1-s)^2 + amplitude · φ(s)`, with
/// `φ = 1` on `[0, plateau_end]` decreasing smoothly to 0 at `decay_end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlateauParams {
    pub amplitude: f64,
    pub plateau_end: f64,
    pub decay_end: f64,
}

impl Default for PlateauParams {
    fn default() -> Self {
        PlateauParams {
            amplitude: 4.0,
            plateau_end: 0.5,
            decay_end: 0.85,
        }
    }
}

impl PlateauParams {
    fn validate(&self) -> Result<()> {
        if self.amplitude >= 0.0 && 0.0 < self.plateau_end && self.plateau_end < self.decay_end && self.decay_end < 1.0 {
            Ok(())
        } else {
            Err(TwaveError::Config(
                "plateau model: need amplitude >= 0 and 0 < plateau_end < decay_end < 1".into(),
            ))
        }
    }

    fn potential(&self, s: Jet) -> Jet {
        let base = gp_potential(s);
        if s.v >= self.decay_end {
            return base;
        }
        let w = smoothstep((s - self.plateau_end) * (1.0 / (self.decay_end - self.plateau_end)));
        base + self.amplitude * (1.0 - w)
    }
}

/// Tabulated `F` on sample points, interpolated by monotone cubics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableParams {
    pub s: Vec<f64>,
    pub f: Vec<f64>,
    #[serde(default)]
    pub growth_p0: Option<f64>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub s0: Option<f64>,
}

/// Serializable description of a model, as found in a model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelKind {
    Gp,
    Example43(CubicContactParams),
    Example55(PlateauParams),
    Example56(CubicContactParams),
    Table(TableParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(flatten)]
    pub kind: ModelKind,
}

#[derive(Deserialize)]
struct ModelFile {
    model: ModelSpec,
}

impl ModelSpec {
    /// Parses a `[model]` table from TOML text.
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ModelFile = toml::from_str(text).map_err(|e| TwaveError::Config(e.to_string()))?;
        Ok(file.model)
    }

    pub fn to_toml(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            model: &'a ModelSpec,
        }
        toml::to_string(&Out { model: self }).expect("model specs serialize")
    }

    pub fn build(&self) -> Result<Nonlinearity> {
        let mut model = match &self.kind {
            ModelKind::Gp => Nonlinearity::gp(),
            ModelKind::Example43(p) => Nonlinearity::cubic_contact("example43", *p)?,
            ModelKind::Example55(p) => Nonlinearity::plateau("example55", *p)?,
            ModelKind::Example56(p) => Nonlinearity::cubic_contact("example56", *p)?,
            ModelKind::Table(t) => Nonlinearity::table(t)?,
        };
        if let Some(name) = &self.name {
            model.name = name.clone();
        }
        model.spec = Some(self.clone());
        Ok(model)
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Gp,
    CubicContact(CubicContactParams),
    Plateau(PlateauParams),
    Table { f: Pchip, anti_at_one: f64 },
    Custom {
        f: ScalarFn,
        f_prime: Option<ScalarFn>,
        v: Option<ScalarFn>,
    },
}

/// How `V` is obtained for a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialSource {
    Analytic,
    Quadrature,
}

/// A nonlinearity `F` together with its potential and assumption metadata.
#[derive(Clone)]
pub struct Nonlinearity {
    pub name: String,
    repr: Repr,
    /// Growth exponent of `|F|` at infinity, when known.
    pub growth_p0: Option<f64>,
    /// `(gamma, s0)` such that `V(s) >= s^gamma` for `s >= s0`, when known.
    pub coercivity: Option<(f64, f64)>,
    spec: Option<ModelSpec>,
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("name", &self.name)
            .field("growth_p0", &self.growth_p0)
            .field("coercivity", &self.coercivity)
            .finish_non_exhaustive()
    }
}

fn gp_potential(s: Jet) -> Jet {
    0.5 * (1.0 - s).powi(2)
}

// All closed-form builtins coincide with GP for s >= 1.
const GP_GROWTH: Option<f64> = Some(1.0);
const GP_COERCIVITY: Option<(f64, f64)> = Some((1.0, 6.0));

impl Nonlinearity {
    /// `F(s) = 1 - s`, `V(s) = ½(1-s)^2`.
    pub fn gp() -> Self {
        Nonlinearity {
            name: "gp".into(),
            repr: Repr::Gp,
            growth_p0: GP_GROWTH,
            coercivity: GP_COERCIVITY,
            spec: Some(ModelSpec { name: None, kind: ModelKind::Gp }),
        }
    }

    pub fn cubic_contact(name: &str, params: CubicContactParams) -> Result<Self> {
        params.validate()?;
        let kind = if params.plateau_level.is_some() {
            ModelKind::Example56(params)
        } else {
            ModelKind::Example43(params)
        };
        Ok(Nonlinearity {
            name: name.into(),
            repr: Repr::CubicContact(params),
            growth_p0: GP_GROWTH,
            coercivity: GP_COERCIVITY,
            spec: Some(ModelSpec { name: None, kind }),
        })
    }

    pub fn plateau(name: &str, params: PlateauParams) -> Result<Self> {
        params.validate()?;
        Ok(Nonlinearity {
            name: name.into(),
            repr: Repr::Plateau(params),
            growth_p0: GP_GROWTH,
            coercivity: GP_COERCIVITY,
            spec: Some(ModelSpec {
                name: None,
                kind: ModelKind::Example55(params),
            }),
        })
    }

    pub fn table(t: &TableParams) -> Result<Self> {
        let f = Pchip::new(t.s.clone(), t.f.clone())?;
        if t.s[0] > 0.0 {
            return Err(TwaveError::Config("table must start at s = 0".into()));
        }
        let anti_at_one = f.antiderivative(1.0);
        let coercivity = match (t.gamma, t.s0) {
            (Some(g), Some(s0)) => Some((g, s0)),
            (None, None) => None,
            _ => return Err(TwaveError::Config("table: give both gamma and s0, or neither".into())),
        };
        Ok(Nonlinearity {
            name: "table".into(),
            repr: Repr::Table { f, anti_at_one },
            growth_p0: t.growth_p0,
            coercivity,
            spec: Some(ModelSpec {
                name: None,
                kind: ModelKind::Table(t.clone()),
            }),
        })
    }

    /// A model from closures. Missing `F'` falls back to central differences,
    /// a missing `V` to adaptive quadrature of `F`.
    pub fn custom(
        name: &str,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f_prime: Option<ScalarFn>,
        v: Option<ScalarFn>,
    ) -> Self {
        Nonlinearity {
            name: name.into(),
            repr: Repr::Custom {
                f: Arc::new(f),
                f_prime,
                v,
            },
            growth_p0: None,
            coercivity: None,
            spec: None,
        }
    }

    /// A model given by a closed-form potential in [`Jet`] arithmetic.
    pub fn from_potential(name: &str, v: impl Fn(Jet) -> Jet + Send + Sync + 'static) -> Self {
        let v = Arc::new(v);
        let (v1, v2, v3) = (v.clone(), v.clone(), v);
        Nonlinearity::custom(
            name,
            move |s| -v1(Jet::var(s)).d1,
            Some(Arc::new(move |s| -v2(Jet::var(s)).d2)),
            Some(Arc::new(move |s| v3(Jet::cst(s)).v)),
        )
    }

    pub fn with_metadata(mut self, growth_p0: Option<f64>, coercivity: Option<(f64, f64)>) -> Self {
        self.growth_p0 = growth_p0;
        self.coercivity = coercivity;
        self
    }

    pub fn spec(&self) -> Option<&ModelSpec> {
        self.spec.as_ref()
    }

    /// Canonical text identifying the model (used for output headers).
    pub fn fingerprint(&self) -> String {
        match &self.spec {
            Some(spec) => serde_json::to_string(spec).expect("model specs serialize"),
            None => format!("custom:{}", self.name),
        }
    }

    pub fn potential_source(&self) -> PotentialSource {
        match &self.repr {
            Repr::Custom { v: None, .. } => PotentialSource::Quadrature,
            _ => PotentialSource::Analytic,
        }
    }

    /// `(V(s), V'(s), V''(s)) = (V, -F, -F')`.
    pub fn jet(&self, s: f64) -> Jet {
        match &self.repr {
            Repr::Gp => gp_potential(Jet::var(s)),
            Repr::CubicContact(p) => p.potential(Jet::var(s)),
            Repr::Plateau(p) => p.potential(Jet::var(s)),
            Repr::Table { f, anti_at_one } => {
                let (fv, fd, anti) = f.eval_all(s);
                Jet {
                    v: anti_at_one - anti,
                    d1: -fv,
                    d2: -fd,
                }
            }
            Repr::Custom { .. } => Jet {
                v: self.v(s),
                d1: -self.f(s),
                d2: -self.f_prime(s),
            },
        }
    }

    pub fn f(&self, s: f64) -> f64 {
        match &self.repr {
            Repr::Custom { f, .. } => f(s),
            _ => -self.jet(s).d1,
        }
    }

    pub fn f_prime(&self, s: f64) -> f64 {
        match &self.repr {
            Repr::Custom { f, f_prime, .. } => match f_prime {
                Some(fp) => fp(s),
                None => {
                    let h = 1e-6f64.max(1e-6 * s.abs());
                    (f(s + h) - f(s - h)) / (2.0 * h)
                }
            },
            _ => -self.jet(s).d2,
        }
    }

    pub fn v(&self, s: f64) -> f64 {
        match &self.repr {
            Repr::Custom { f, v, .. } => match v {
                Some(v) => v(s),
                None => integrate(|t| f(t), s, 1.0, QuadTol::new(1e-10, 1e-12))
                    .map(|q| q.value)
                    .unwrap_or(f64::NAN),
            },
            _ => self.jet(s).v,
        }
    }

    /// `g(s, c) = 4 s V(s) - c^2 (s - 1)^2`.
    pub fn g(&self, s: f64, c: f64) -> f64 {
        4.0 * s * self.v(s) - c * c * (s - 1.0) * (s - 1.0)
    }

    /// `(g, ∂g/∂s, ∂²g/∂s²)` at `(s, c)`.
    pub fn g_jet(&self, s: f64, c: f64) -> Jet {
        let v = self.jet(s);
        let c2 = c * c;
        Jet {
            v: 4.0 * s * v.v - c2 * (s - 1.0) * (s - 1.0),
            d1: 4.0 * v.v + 4.0 * s * v.d1 - 2.0 * c2 * (s - 1.0),
            d2: 8.0 * v.d1 + 4.0 * s * v.d2 - 2.0 * c2,
        }
    }

    /// True when `V > 0` at every sample of `[0, 1)` (spacing 1e-3).
    pub fn v_positive_below_one(&self) -> bool {
        (0..1000).all(|i| self.v(i as f64 * 1e-3) > 0.0)
    }
}

/// The builtin models with default parameters.
pub fn builtin_models() -> Vec<Nonlinearity> {
    vec![
        Nonlinearity::gp(),
        Nonlinearity::cubic_contact("example43", CubicContactParams::default()).expect("valid defaults"),
        Nonlinearity::plateau("example55", PlateauParams::default()).expect("valid defaults"),
        Nonlinearity::cubic_contact("example56", CubicContactParams::two_speed()).expect("valid defaults"),
    ]
}

/// Looks up a builtin model by name.
pub fn builtin(name: &str) -> Option<Nonlinearity> {
    builtin_models().into_iter().find(|m| m.name == name)
}

/// `g(s, c) = 4 s V(s) - c^2 (s - 1)^2`.
pub fn discriminant_g(model: &Nonlinearity, s: f64, c: f64) -> f64 {
    model.g(s, c)
}

/// `H(s) = ∫_1^s |V(τ^2)|^{1/2} dτ`.
pub fn potential_h(model: &Nonlinearity, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(TwaveError::InvalidInput(format!("H(s) needs s >= 0, got {s}")));
    }
    // The integrand has a kink at τ = 1; keep it at an interval end.
    Ok(integrate(|t| model.v(t * t).abs().sqrt(), 1.0, s, QuadTol::new(1e-12, 1e-11))?.value)
}

/// `4 ∫_0^1 √V(s^2) ds`, the energy needed to reach `|ψ| = 0`.
pub fn black_soliton_threshold(model: &Nonlinearity) -> Result<f64> {
    Ok(4.0 * -potential_h(model, 0.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gp_values() {
        let m = Nonlinearity::gp();
        assert_eq!(m.f(0.5), 0.5);
        assert_eq!(m.v(0.5), 0.125);
        assert_eq!(m.f(1.0), 0.0);
        assert_eq!(m.f_prime(1.0), -1.0);
    }

    #[test]
    fn cubic_contact_has_triple_root_at_contact() {
        let m = builtin("example43").unwrap();
        let g = m.g_jet(0.3, 1.2);
        assert!(g.v.abs() < 1e-14 && g.d1.abs() < 1e-13 && g.d2.abs() < 1e-12, "{g:?}");
    }

    #[test]
    fn potential_is_c2_across_pieces() {
        for m in builtin_models() {
            let knots: Vec<f64> = match &m.repr {
                Repr::CubicContact(p) => {
                    let mut k = vec![p.s0 - p.delta2, p.blend_lo, p.blend_hi];
                    if p.plateau_level.is_some() {
                        k.push(p.plateau_lo);
                    }
                    k
                }
                Repr::Plateau(p) => vec![p.plateau_end, p.decay_end],
                _ => vec![],
            };
            for k in knots {
                let a = m.jet(k - 1e-10);
                let b = m.jet(k + 1e-10);
                assert!((a.v - b.v).abs() < 1e-8, "{} V at {k}", m.name);
                assert!((a.d1 - b.d1).abs() < 1e-7, "{} V' at {k}", m.name);
                assert!((a.d2 - b.d2).abs() < 1e-5, "{} V'' at {k}", m.name);
            }
        }
    }

    #[test]
    fn custom_quadrature_potential() {
        let m = Nonlinearity::custom("gp-quad", |s| 1.0 - s, None, None);
        assert_eq!(m.potential_source(), PotentialSource::Quadrature);
        assert!((m.v(0.2) - 0.32).abs() < 1e-12);
        assert!((m.f_prime(0.7) + 1.0).abs() < 1e-8);
    }

    #[test]
    fn spec_round_trip() {
        let text = "[model]\nname = \"mine\"\nkind = \"example43\"\nc0 = 1.1\n";
        let spec = ModelSpec::from_toml(text).unwrap();
        let m = spec.build().unwrap();
        assert_eq!(m.name, "mine");
        match &spec.kind {
            ModelKind::Example43(p) => {
                assert_eq!(p.c0, 1.1);
                assert_eq!(p.s0, 0.3);
            }
            other => panic!("{other:?}"),
        }
        let again = ModelSpec::from_toml(&spec.to_toml()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn malformed_specs_are_config_errors() {
        assert!(matches!(ModelSpec::from_toml("[model]\nkind = \"nope\""), Err(TwaveError::Config(_))));
        assert!(matches!(ModelSpec::from_toml("model = 3"), Err(TwaveError::Config(_))));
        let bad = ModelSpec::from_toml("[model]\nkind = \"example43\"\nc0 = 1.5\n").unwrap();
        assert!(matches!(bad.build(), Err(TwaveError::Config(_))));
    }

    #[test]
    fn table_model_reproduces_gp() {
        let s: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let f: Vec<f64> = s.iter().map(|v| 1.0 - v).collect();
        let m = Nonlinearity::table(&TableParams { s, f, growth_p0: None, gamma: None, s0: None }).unwrap();
        for x in [0.0, 0.4, 1.0, 3.3, 12.0] {
            assert!((m.v(x) - 0.5 * (1.0 - x) * (1.0 - x)).abs() < 1e-12, "{x}");
        }
    }
}
