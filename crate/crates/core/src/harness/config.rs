//! Flat dotted-key configuration: defaults, then a named preset, then the
//! config file, then `key=value` overrides.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use toml::Value;

use super::presets;
use crate::dg::Boundary;
use crate::error::{Error, Result};
use crate::pde::ProblemKind;

/// Flattened key/value table.
pub type FlatConfig = BTreeMap<String, Value>;

/// Every key the harness understands, with its default (`None` when unset
/// by default).
fn defaults() -> Vec<(&'static str, Option<Value>)> {
    use Value::*;
    vec![
        ("preset", None),
        ("problem.kind", Some(String("advection".into()))),
        ("problem.ic", Some(String("sine".into()))),
        ("problem.T", Some(Float(1.0))),
        ("problem.gamma", Some(Float(1.4))),
        ("problem.velocity", Some(Float(1.0))),
        ("problem.c", Some(Float(1.0))),
        ("ic.x0", None),
        ("ic.left", None),
        ("ic.right", None),
        ("ic.box", Some(arr(&[0.25, 0.75]))),
        ("ic.wavenumber", Some(Integer(1))),
        ("mesh.K", Some(Integer(20))),
        ("mesh.domain", Some(arr(&[0.0, 1.0]))),
        ("mesh.left_bc", Some(String("periodic".into()))),
        ("mesh.right_bc", Some(String("periodic".into()))),
        ("dg.N", Some(Integer(4))),
        ("viscosity.enable", Some(Boolean(true))),
        ("viscosity.c_nu", Some(Float(1.0))),
        ("viscosity.s_max", Some(Float(10.0))),
        ("viscosity.noise_floor", Some(Float(0.0))),
        ("viscosity.baseline", Some(Boolean(true))),
        ("viscosity.normalize_baseline", Some(Boolean(true))),
        ("viscosity.skyline", Some(Boolean(true))),
        ("time.rtol", Some(Float(1e-4))),
        ("time.atol", Some(Float(1e-8))),
        ("time.cfl", Some(Float(1.0))),
        ("time.dt_init", None),
        ("output.directory", Some(String("out".into()))),
        ("output.sample_points", Some(Integer(12))),
        ("output.viscosity_stride", Some(Integer(1))),
        ("convergence.N", None),
        ("convergence.K", None),
        ("convergence.reference", Some(String("exact".into()))),
        ("convergence.reference_K", None),
        ("convergence.reference_N", None),
        ("convergence.component", Some(Integer(0))),
        ("convergence.norm", Some(Integer(1))),
    ]
}

pub(crate) fn arr(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::Float(x)).collect())
}

pub(crate) fn iarr(xs: &[i64]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::Integer(x)).collect())
}

fn is_known(key: &str) -> bool {
    defaults().iter().any(|(k, _)| *k == key)
}

fn flatten_into(prefix: &str, table: &toml::Table, out: &mut FlatConfig) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten_into(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

/// Parses TOML text into dotted keys, rejecting keys the harness does not know.
pub fn parse_flat(text: &str) -> Result<FlatConfig> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::config("<file>", e.to_string()))?;
    let mut out = FlatConfig::new();
    flatten_into("", &table, &mut out);
    for key in out.keys() {
        if !is_known(key) {
            return Err(Error::config(key.clone(), "unknown key"));
        }
    }
    Ok(out)
}

/// Parses one `key=value` override; the value is read as TOML and falls back
/// to a bare string.
pub fn parse_override(text: &str) -> Result<(String, Value)> {
    let (key, raw) = text
        .split_once('=')
        .ok_or_else(|| Error::config(text, "override must have the form key=value"))?;
    let key = key.trim().to_string();
    if !is_known(&key) {
        return Err(Error::config(key, "unknown key"));
    }
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    Ok((key, value))
}

/// Layers defaults, preset, file contents and overrides into one table.
pub fn layer(file: Option<FlatConfig>, overrides: &[(String, Value)]) -> Result<FlatConfig> {
    let mut user = file.unwrap_or_default();
    for (k, v) in overrides {
        user.insert(k.clone(), v.clone());
    }
    let mut merged = FlatConfig::new();
    for (k, v) in defaults() {
        if let Some(v) = v {
            merged.insert(k.to_string(), v);
        }
    }
    if let Some(name) = user.get("preset") {
        let name = name.as_str().ok_or_else(|| Error::config("preset", "must be a string"))?;
        let preset = presets::preset(name).ok_or_else(|| Error::config("preset", format!("unknown preset `{name}`")))?;
        merged.extend(preset);
    }
    merged.extend(user);
    Ok(merged)
}

/// Convergence schedule.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub degrees: Vec<usize>,
    pub elements: Vec<usize>,
    pub reference: Reference,
    pub component: usize,
    pub norm: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reference {
    Exact,
    /// Fine-grid run with `(K, N)`.
    SelfConvergence { k: usize, n: usize },
}

/// Typed run configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub kind: ProblemKind,
    pub ic: String,
    pub final_time: f64,
    pub gamma: f64,
    pub velocity: f64,
    pub wave_speed: f64,
    pub ic_x0: Option<f64>,
    pub ic_left: Option<[f64; 3]>,
    pub ic_right: Option<[f64; 3]>,
    pub ic_box: [f64; 2],
    pub ic_wavenumber: i64,
    pub k: usize,
    pub domain: (f64, f64),
    pub left_bc: Boundary,
    pub right_bc: Boundary,
    pub n: usize,
    pub viscosity_enable: bool,
    pub c_nu: f64,
    pub s_max: f64,
    pub noise_floor: f64,
    pub baseline: bool,
    pub normalize_baseline: bool,
    pub skyline: bool,
    pub rtol: f64,
    pub atol: f64,
    pub cfl: f64,
    pub dt_init: Option<f64>,
    pub output_directory: String,
    pub sample_points: usize,
    pub viscosity_stride: usize,
    pub schedule: Option<Schedule>,
    /// The merged flat table this was built from.
    #[serde(skip)]
    pub flat: FlatConfig,
}

struct Reader<'a>(&'a FlatConfig);

impl Reader<'_> {
    fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    fn req(&self, key: &str) -> Result<&Value> {
        self.get(key).ok_or_else(|| Error::config(key, "missing"))
    }

    fn float_of(key: &str, v: &Value) -> Result<f64> {
        match v {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(Error::config(key, "expected a number")),
        }
    }

    fn float(&self, key: &str) -> Result<f64> {
        Self::float_of(key, self.req(key)?)
    }

    fn opt_float(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| Self::float_of(key, v)).transpose()
    }

    fn int(&self, key: &str) -> Result<i64> {
        self.req(key)?.as_integer().ok_or_else(|| Error::config(key, "expected an integer"))
    }

    fn count(&self, key: &str) -> Result<usize> {
        let i = self.int(key)?;
        usize::try_from(i).map_err(|_| Error::config(key, "must be non-negative"))
    }

    fn boolean(&self, key: &str) -> Result<bool> {
        self.req(key)?.as_bool().ok_or_else(|| Error::config(key, "expected true or false"))
    }

    fn string(&self, key: &str) -> Result<String> {
        self.req(key)?.as_str().map(str::to_string).ok_or_else(|| Error::config(key, "expected a string"))
    }

    fn floats(&self, key: &str, len: usize) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.get(key) else { return Ok(None) };
        let a = v.as_array().ok_or_else(|| Error::config(key, "expected an array"))?;
        if a.len() != len {
            return Err(Error::config(key, format!("expected {len} entries")));
        }
        a.iter().map(|x| Self::float_of(key, x)).collect::<Result<Vec<_>>>().map(Some)
    }

    fn counts(&self, key: &str) -> Result<Option<Vec<usize>>> {
        let Some(v) = self.get(key) else { return Ok(None) };
        let list = match v {
            Value::Array(a) => a.clone(),
            Value::Integer(_) => vec![v.clone()],
            _ => return Err(Error::config(key, "expected an integer list")),
        };
        list.iter()
            .map(|x| {
                x.as_integer()
                    .and_then(|i| usize::try_from(i).ok())
                    .ok_or_else(|| Error::config(key, "expected non-negative integers"))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

fn triple(v: Option<Vec<f64>>) -> Option<[f64; 3]> {
    v.map(|v| [v[0], v[1], v[2]])
}

impl RunConfig {
    /// Builds and validates a config from a merged flat table.
    pub fn from_flat(flat: FlatConfig) -> Result<Self> {
        let r = Reader(&flat);
        let kind_name = r.string("problem.kind")?;
        let kind = ProblemKind::parse(&kind_name)
            .ok_or_else(|| Error::config("problem.kind", format!("unknown problem `{kind_name}`")))?;
        let bc = |key: &str| -> Result<Boundary> {
            let s = r.string(key)?;
            Boundary::parse(&s).ok_or_else(|| Error::config(key, format!("unknown boundary `{s}`")))
        };
        let domain = r.floats("mesh.domain", 2)?.expect("defaulted");
        let ic_box = r.floats("ic.box", 2)?.expect("defaulted");

        let degrees = r.counts("convergence.N")?;
        let elements = r.counts("convergence.K")?;
        let schedule = match (degrees, elements) {
            (None, None) => None,
            (Some(_), None) => return Err(Error::config("convergence.K", "missing while convergence.N is set")),
            (None, Some(_)) => return Err(Error::config("convergence.N", "missing while convergence.K is set")),
            (Some(degrees), Some(elements)) => {
                let reference = match r.string("convergence.reference")?.as_str() {
                    "exact" => Reference::Exact,
                    "self" => Reference::SelfConvergence {
                        k: r.count("convergence.reference_K")?,
                        n: r.count("convergence.reference_N")?,
                    },
                    other => {
                        return Err(Error::config("convergence.reference", format!("unknown reference `{other}`")))
                    }
                };
                Some(Schedule {
                    degrees,
                    elements,
                    reference,
                    component: r.count("convergence.component")?,
                    norm: r.count("convergence.norm")? as u32,
                })
            }
        };

        let cfg = RunConfig {
            preset: r.get("preset").and_then(|v| v.as_str()).map(str::to_string),
            kind,
            ic: r.string("problem.ic")?,
            final_time: r.float("problem.T")?,
            gamma: r.float("problem.gamma")?,
            velocity: r.float("problem.velocity")?,
            wave_speed: r.float("problem.c")?,
            ic_x0: r.opt_float("ic.x0")?,
            ic_left: triple(r.floats("ic.left", 3)?),
            ic_right: triple(r.floats("ic.right", 3)?),
            ic_box: [ic_box[0], ic_box[1]],
            ic_wavenumber: r.int("ic.wavenumber")?,
            k: r.count("mesh.K")?,
            domain: (domain[0], domain[1]),
            left_bc: bc("mesh.left_bc")?,
            right_bc: bc("mesh.right_bc")?,
            n: r.count("dg.N")?,
            viscosity_enable: r.boolean("viscosity.enable")?,
            c_nu: r.float("viscosity.c_nu")?,
            s_max: r.float("viscosity.s_max")?,
            noise_floor: r.float("viscosity.noise_floor")?,
            baseline: r.boolean("viscosity.baseline")?,
            normalize_baseline: r.boolean("viscosity.normalize_baseline")?,
            skyline: r.boolean("viscosity.skyline")?,
            rtol: r.float("time.rtol")?,
            atol: r.float("time.atol")?,
            cfl: r.float("time.cfl")?,
            dt_init: r.opt_float("time.dt_init")?,
            output_directory: r.string("output.directory")?,
            sample_points: r.count("output.sample_points")?,
            viscosity_stride: r.count("output.viscosity_stride")?,
            schedule,
            flat: flat.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a config file (if any) and applies overrides.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::config("<file>", format!("cannot read {}: {e}", p.display())))?;
                Some(parse_flat(&text)?)
            }
            None => None,
        };
        let overrides = overrides.iter().map(|s| parse_override(s)).collect::<Result<Vec<_>>>()?;
        Self::from_flat(layer(file, &overrides)?)
    }

    /// A shipped preset with optional overrides.
    pub fn preset(name: &str, overrides: &[&str]) -> Result<Self> {
        let mut all = vec![format!("preset=\"{name}\"")];
        all.extend(overrides.iter().map(|s| s.to_string()));
        Self::load(None, &all)
    }

    fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: &str| Err(Error::config(key, msg));
        if self.n == 0 {
            return bad("dg.N", "polynomial degree must be at least 1");
        }
        if self.k == 0 {
            return bad("mesh.K", "need at least one element");
        }
        if !(self.domain.0 < self.domain.1) || !self.domain.0.is_finite() || !self.domain.1.is_finite() {
            return bad("mesh.domain", "need a < b");
        }
        if (self.left_bc == Boundary::Periodic) != (self.right_bc == Boundary::Periodic) {
            return bad("mesh.right_bc", "periodic boundaries must be paired");
        }
        if self.kind != ProblemKind::Wave
            && (self.left_bc == Boundary::NeumannWave || self.right_bc == Boundary::NeumannWave)
        {
            return bad("mesh.left_bc", "neumann walls are only defined for the wave system");
        }
        if !(self.final_time > 0.0) {
            return bad("problem.T", "final time must be positive");
        }
        if !(self.c_nu >= 0.0) {
            return bad("viscosity.c_nu", "must be non-negative");
        }
        if !(self.noise_floor >= 0.0 && self.noise_floor < 1.0) {
            return bad("viscosity.noise_floor", "must lie in [0, 1)");
        }
        if !(self.s_max > 0.0) {
            return bad("viscosity.s_max", "must be positive");
        }
        if self.sample_points == 0 {
            return bad("output.sample_points", "must be at least 1");
        }
        if self.viscosity_stride == 0 {
            return bad("output.viscosity_stride", "must be at least 1");
        }
        if let Some(s) = &self.schedule {
            if s.degrees.is_empty() || s.degrees.contains(&0) {
                return bad("convergence.N", "need a non-empty list of degrees >= 1");
            }
            if s.elements.is_empty() || s.elements.contains(&0) {
                return bad("convergence.K", "need a non-empty list of element counts >= 1");
            }
            if s.elements.windows(2).any(|w| w[1] <= w[0]) {
                return bad("convergence.K", "refinement schedule must be strictly increasing");
            }
            if !(s.norm == 1 || s.norm == 2) {
                return bad("convergence.norm", "must be 1 or 2");
            }
            if s.component >= self.kind.n_eq() {
                return bad("convergence.component", "component out of range for this problem");
            }
            if let Reference::SelfConvergence { k, n } = s.reference {
                if k == 0 || n == 0 {
                    return bad("convergence.reference_K", "reference mesh must be non-empty");
                }
            }
        }
        super::ic::InitialCondition::from_config(self).map(|_| ())
    }

    /// Flat table as plain JSON for the run summary.
    pub fn snapshot(&self) -> serde_json::Value {
        serde_json::to_value(&self.flat).unwrap_or(serde_json::Value::Null)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let cfg = RunConfig::load(None, &[]).unwrap();
        assert_eq!(cfg.n, 4);
        assert_eq!(cfg.sample_points, 12);
        assert!(cfg.schedule.is_none());
    }

    #[test]
    fn zero_degree_names_key() {
        let err = RunConfig::load(None, &["dg.N=0".into()]).unwrap_err();
        match err {
            Error::Config { key, .. } => assert_eq!(key, "dg.N"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn file_then_override_precedence() {
        let file = parse_flat("preset = \"sod\"\n[dg]\nN = 3\n[mesh]\nK = 50\n").unwrap();
        let cfg = RunConfig::from_flat(layer(Some(file), &[parse_override("mesh.K=60").unwrap()]).unwrap()).unwrap();
        assert_eq!(cfg.kind, ProblemKind::Euler);
        assert_eq!(cfg.n, 3);
        assert_eq!(cfg.k, 60);
        assert_eq!(cfg.final_time, 0.25);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(parse_flat("[mesh]\nelements = 3\n"), Err(Error::Config { key, .. }) if key == "mesh.elements"));
        assert!(parse_override("nonsense=1").is_err());
        assert!(parse_override("dg.N").is_err());
    }

    #[test]
    fn override_values_are_typed() {
        assert_eq!(parse_override("dg.N=5").unwrap().1, Value::Integer(5));
        assert_eq!(parse_override("viscosity.enable=false").unwrap().1, Value::Boolean(false));
        assert_eq!(parse_override("problem.kind=wave").unwrap().1, Value::String("wave".into()));
        assert_eq!(parse_override("mesh.domain=[-1, 1]").unwrap().1, iarr(&[-1, 1]));
    }

    #[test]
    fn schedule_must_increase() {
        let err = RunConfig::preset("sod", &["convergence.K=[40, 20]"]).unwrap_err();
        assert!(matches!(err, Error::Config { key, .. } if key == "convergence.K"));
    }

    #[test]
    fn noise_floor_range() {
        assert_eq!(RunConfig::preset("advection-box", &[]).unwrap().noise_floor, 0.0);
        assert_eq!(RunConfig::preset("advection-box", &["viscosity.noise_floor=1e-4"]).unwrap().noise_floor, 1e-4);
        let err = RunConfig::preset("advection-box", &["viscosity.noise_floor=1.0"]).unwrap_err();
        assert!(matches!(err, Error::Config { key, .. } if key == "viscosity.noise_floor"));
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(RunConfig::preset("nope", &[]), Err(Error::Config { key, .. }) if key == "preset"));
    }
}
