//! Flat `key = value` run configuration.
//!
//! ```text
//! # single atom
//! n_atoms = 1
//! g13 = 7.5
//! ...
//! grid = -9:9:97
//! ```
//!
//! Every physical parameter must be present; `n_max`, `grid` and `dim_cap`
//! are optional. Floats are written back with Rust's shortest round-trip
//! formatting, so an echoed config reloads bit-identically.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hilbert::{HilbertSpace, DEFAULT_DIM_CAP};
use crate::model::{default_n_max, ModelParams};

const REQUIRED: [&str; 11] = [
    "n_atoms", "g13", "g24", "omega", "kappa", "gamma31", "gamma32", "gamma4", "delta",
    "big_delta", "eps_p",
];
const OPTIONAL: [&str; 3] = ["n_max", "grid", "dim_cap"];

/// `lo:hi:steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        crate::sweeps::linspace(self.lo, self.hi, self.steps)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(format!("grid `{s}` is not of the form lo:hi:steps"));
        };
        let lo: f64 = lo.parse().map_err(|_| format!("grid start `{lo}` is not a number"))?;
        let hi: f64 = hi.parse().map_err(|_| format!("grid end `{hi}` is not a number"))?;
        let steps: usize = steps
            .parse()
            .map_err(|_| format!("grid steps `{steps}` is not a count"))?;
        if !lo.is_finite() || !hi.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        if steps < 2 || !(hi > lo) {
            return Err(format!("grid `{s}` needs hi > lo and at least 2 steps"));
        }
        Ok(GridSpec { lo, hi, steps })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.steps)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub grid: Option<GridSpec>,
    pub dim_cap: usize,
}

impl RunConfig {
    pub fn new(params: ModelParams) -> Self {
        RunConfig { params, grid: None, dim_cap: DEFAULT_DIM_CAP }
    }

    /// Checks parameter invariants and the dimension cap.
    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        p.validate_dissipative()?;
        if p.omega == 0.0 && p.g13 > 0.0 {
            return Err(Error::param("omega", "must be > 0 when g13 > 0 (alpha undefined)"));
        }
        HilbertSpace::with_cap(p.n_atoms, p.n_max, self.dim_cap)?;
        Ok(())
    }

    /// The config as `key = value` lines, loadable by [`parse_config`].
    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Effective key/value pairs in canonical order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let p = &self.params;
        let mut out = vec![
            ("n_atoms", p.n_atoms.to_string()),
            ("n_max", p.n_max.to_string()),
            ("g13", p.g13.to_string()),
            ("g24", p.g24.to_string()),
            ("omega", p.omega.to_string()),
            ("kappa", p.kappa.to_string()),
            ("gamma31", p.gamma31.to_string()),
            ("gamma32", p.gamma32.to_string()),
            ("gamma4", p.gamma4.to_string()),
            ("delta", p.delta.to_string()),
            ("big_delta", p.big_delta.to_string()),
            ("eps_p", p.eps_p.to_string()),
            ("dim_cap", self.dim_cap.to_string()),
        ];
        if let Some(g) = &self.grid {
            out.push(("grid", g.to_string()));
        }
        out
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str, line: usize) -> Result<T> {
    raw.parse().map_err(|_| Error::ConfigParse {
        line,
        reason: format!("value `{raw}` for `{key}` is not valid"),
    })
}

/// Parses configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut seen: BTreeMap<&str, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::ConfigParse {
            line,
            reason: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let known = REQUIRED.iter().chain(&OPTIONAL).find(|k| **k == key).ok_or_else(|| {
            Error::ConfigParse { line, reason: format!("unknown key `{key}`") }
        })?;
        if value.is_empty() {
            return Err(Error::ConfigParse { line, reason: format!("empty value for `{key}`") });
        }
        if seen.insert(known, (line, value.to_string())).is_some() {
            return Err(Error::ConfigParse { line, reason: format!("duplicate key `{key}`") });
        }
    }
    if let Some(missing) = REQUIRED.iter().find(|k| !seen.contains_key(*k)) {
        return Err(Error::Config(format!("missing required key `{missing}`")));
    }
    let float = |key: &str| -> Result<f64> {
        let (line, raw) = &seen[key];
        parse_value(key, raw, *line)
    };
    let count = |key: &str| -> Result<Option<usize>> {
        seen.get(key).map(|(line, raw)| parse_value(key, raw, *line)).transpose()
    };
    let n_atoms = count("n_atoms")?.expect("required key present");
    let params = ModelParams {
        n_atoms,
        n_max: count("n_max")?.unwrap_or_else(|| default_n_max(n_atoms)),
        g13: float("g13")?,
        g24: float("g24")?,
        omega: float("omega")?,
        kappa: float("kappa")?,
        gamma31: float("gamma31")?,
        gamma32: float("gamma32")?,
        gamma4: float("gamma4")?,
        delta: float("delta")?,
        big_delta: float("big_delta")?,
        eps_p: float("eps_p")?,
    };
    let grid = seen
        .get("grid")
        .map(|(line, raw)| raw.parse::<GridSpec>().map_err(|reason| Error::ConfigParse { line: *line, reason }))
        .transpose()?;
    let cfg = RunConfig {
        params,
        grid,
        dim_cap: count("dim_cap")?.unwrap_or(DEFAULT_DIM_CAP),
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = "\
# single atom
n_atoms = 1
g13 = 7.5
g24 = 7.5
omega = 0.8125   # 2.5 gamma31
kappa = 1
gamma31 = 0.325
gamma32 = 0.325
gamma4 = 0.325
delta = 0
big_delta = 0
eps_p = 0.1
";

    #[test]
    fn parses_values() {
        let cfg = parse_config(FIG2).unwrap();
        assert_eq!(cfg.params, ModelParams::fig2());
        assert_eq!(cfg.grid, None);
    }

    #[test]
    fn rejects_unknown_and_missing_keys() {
        let err = parse_config(&format!("{FIG2}colour = red\n")).unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 13, .. }), "{err}");
        assert!(err.to_string().contains("colour"));
        let err = parse_config(&FIG2.replace("g24 = 7.5\n", "")).unwrap_err();
        assert!(err.to_string().contains("`g24`"), "{err}");
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_config(&FIG2.replace("g13 = 7.5", "g13 = seven")).unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 3, .. }), "{err}");
        let err = parse_config(&FIG2.replace("g13 = 7.5", "g13 7.5")).unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 3, .. }), "{err}");
    }

    #[test]
    fn zero_omega_rejected() {
        let err = parse_config(&FIG2.replace("omega = 0.8125", "omega = 0")).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { key: "omega", .. }), "{err}");
    }

    #[test]
    fn echo_round_trips() {
        let mut cfg = parse_config(FIG2).unwrap();
        cfg.params.g13 = 0.1 + 0.2;
        cfg.grid = Some("-9.000000000000002:9:97".parse().unwrap());
        let again = parse_config(&cfg.to_text()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.params.g13.to_bits(), (0.1f64 + 0.2).to_bits());
    }

    #[test]
    fn grid_spec_validation() {
        assert!("0:1:1".parse::<GridSpec>().is_err());
        assert!("1:0:5".parse::<GridSpec>().is_err());
        assert!("0:1".parse::<GridSpec>().is_err());
        assert_eq!("0:2:3".parse::<GridSpec>().unwrap().points(), vec![0.0, 1.0, 2.0]);
    }
}
