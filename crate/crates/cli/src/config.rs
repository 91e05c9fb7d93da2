//! Sectioned `key = value` run configuration.
//!
//! ```text
//! [system]
//! potential = linear
//! a = 0.5
//!
//! [state]
//! quanta = 1 0; 0 0
//! l = 0
//!
//! [method]
//! phi = dos
//! ```

use std::collections::BTreeMap;

use envelope_core::model::{KineticLaw, PotentialLaw, StateSpec, SystemSpec, Term};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiMode {
    Fixed(f64),
    Dos,
    Calibrate(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format `{s}` (expected table or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    pub enabled: bool,
    pub qstar_max: Option<u32>,
    pub quad_order: usize,
    pub level: usize,
    pub z_search_qstar: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialDesc {
    pub name: String,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub kinetic_f: f64,
    pub kinetic_alpha: f64,
    pub potential: PotentialDesc,
    pub state: StateSpec,
    pub phi: PhiMode,
    pub oracle: OracleSettings,
    pub format: Format,
    pub precision: usize,
    pub observables: bool,
}

const KEYS: &[(&str, &[&str])] = &[
    ("system", &["potential", "a", "b", "gamma", "n", "d", "k", "kinetic_f", "kinetic_alpha"]),
    ("state", &["quanta", "l", "sigma"]),
    ("method", &["phi"]),
    ("oracle", &["enabled", "qstar_max", "quad_order", "level", "z_search_qstar"]),
    ("output", &["format", "precision", "observables"]),
];

struct Entry {
    line: usize,
    value: String,
}

fn err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

fn parse_sections(text: &str) -> CliResult<BTreeMap<(String, String), Entry>> {
    let mut out = BTreeMap::new();
    let mut section: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line, "unterminated section header"))?
                .trim()
                .to_string();
            if !KEYS.iter().any(|(s, _)| *s == name) {
                return Err(err(line, format!("unknown section `{name}`")));
            }
            section = Some(name);
            continue;
        }
        let (k, v) = t.split_once('=').ok_or_else(|| err(line, "expected `key = value`"))?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        let sec = section.clone().ok_or_else(|| err(line, "key outside of any section"))?;
        let allowed = KEYS.iter().find(|(s, _)| *s == sec).unwrap().1;
        if !allowed.contains(&k.as_str()) {
            return Err(err(line, format!("unknown key `{k}` in section [{sec}]")));
        }
        if v.is_empty() {
            return Err(err(line, format!("empty value for `{k}`")));
        }
        if out.insert((sec.clone(), k.clone()), Entry { line, value: v }).is_some() {
            return Err(err(line, format!("duplicate key `{k}` in section [{sec}]")));
        }
    }
    Ok(out)
}

struct Table(BTreeMap<(String, String), Entry>);

impl Table {
    fn get(&self, s: &str, k: &str) -> Option<&Entry> {
        self.0.get(&(s.to_string(), k.to_string()))
    }

    fn parse<T: std::str::FromStr>(&self, s: &str, k: &str) -> CliResult<Option<T>> {
        match self.get(s, k) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .map_err(|_| err(e.line, format!("cannot parse `{}` for `{k}`", e.value))),
        }
    }
}

fn parse_quanta(e: &Entry) -> CliResult<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    for pair in e.value.split(';') {
        let nums: Vec<&str> = pair.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(err(e.line, "quanta must be `n l` pairs separated by `;`"));
        }
        let n = nums[0].parse().map_err(|_| err(e.line, format!("bad radial number `{}`", nums[0])))?;
        let l = nums[1].parse().map_err(|_| err(e.line, format!("bad orbital number `{}`", nums[1])))?;
        out.push((n, l));
    }
    Ok(out)
}

fn parse_phi(e: &Entry) -> CliResult<PhiMode> {
    let v = e.value.as_str();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| err(e.line, format!("bad number `{s}`")));
    if v == "dos" {
        Ok(PhiMode::Dos)
    } else if let Some(x) = v.strip_prefix("fixed:") {
        Ok(PhiMode::Fixed(num(x)?))
    } else if let Some(x) = v.strip_prefix("calibrate:") {
        Ok(PhiMode::Calibrate(num(x)?))
    } else {
        Ok(PhiMode::Fixed(num(v)?))
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let t = Table(parse_sections(text)?);
        let pot = t
            .get("system", "potential")
            .ok_or_else(|| CliError::Config("[system] potential is required".into()))?;
        let potential = PotentialDesc {
            name: pot.value.clone(),
            a: t.parse("system", "a")?,
            b: t.parse("system", "b")?,
            gamma: t.parse("system", "gamma")?,
        };
        let allowed: &[&str] = match potential.name.as_str() {
            "linear" | "coulomb" | "harmonic" => &["a"],
            "gaussian" | "powerlaw" => &["a", "b"],
            "expwell" => &["a", "b", "gamma"],
            "custom" => {
                return Err(err(pot.line, "custom laws are only available through the library API"))
            }
            other => return Err(err(pot.line, format!("unknown potential `{other}`"))),
        };
        for key in ["a", "b", "gamma"] {
            let present = t.get("system", key);
            match (present, allowed.contains(&key)) {
                (Some(e), false) => {
                    return Err(err(e.line, format!("`{key}` does not apply to potential `{}`", potential.name)))
                }
                (None, true) => {
                    return Err(CliError::Config(format!("potential `{}` needs `{key}`", potential.name)))
                }
                _ => {}
            }
        }
        let quanta = match t.get("state", "quanta") {
            Some(e) => parse_quanta(e)?,
            None => vec![(0, 0), (0, 0)],
        };
        let sigma: i8 = t.parse("state", "sigma")?.unwrap_or(1);
        let l: u32 = t.parse("state", "l")?.unwrap_or(0);
        let state = StateSpec::new(quanta, sigma, l)?;
        let phi = match t.get("method", "phi") {
            Some(e) => parse_phi(e)?,
            None => PhiMode::Fixed(2.0),
        };
        let z_search_qstar = match t.get("oracle", "z_search_qstar") {
            None => Some(10),
            Some(e) if e.value == "none" => None,
            Some(e) => Some(e.value.parse().map_err(|_| err(e.line, "z_search_qstar must be an integer or `none`"))?),
        };
        let oracle = OracleSettings {
            enabled: t.parse("oracle", "enabled")?.unwrap_or(false),
            qstar_max: t.parse("oracle", "qstar_max")?,
            quad_order: t.parse("oracle", "quad_order")?.unwrap_or(80),
            level: t.parse("oracle", "level")?.unwrap_or(0),
            z_search_qstar,
        };
        let format = match t.get("output", "format") {
            Some(e) => e.value.parse().map_err(|m: String| err(e.line, m))?,
            None => Format::Table,
        };
        let cfg = RunConfig {
            n: t.parse("system", "n")?.unwrap_or(3),
            d: t.parse("system", "d")?.unwrap_or(3),
            k: t.parse("system", "k")?.unwrap_or(3),
            kinetic_f: t.parse("system", "kinetic_f")?.unwrap_or(0.5),
            kinetic_alpha: t.parse("system", "kinetic_alpha")?.unwrap_or(2.0),
            potential,
            state,
            phi,
            oracle,
            format,
            precision: t.parse("output", "precision")?.unwrap_or(4),
            observables: t.parse("output", "observables")?.unwrap_or(true),
        };
        if cfg.state.quanta.len() + 1 != cfg.n as usize {
            return Err(CliError::Config(format!(
                "state lists {} coordinates but N = {} needs {}",
                cfg.state.quanta.len(),
                cfg.n,
                cfg.n - 1
            )));
        }
        if cfg.precision == 0 || cfg.precision > 17 {
            return Err(CliError::Config("precision must lie in 1..=17".into()));
        }
        cfg.system()?;
        Ok(cfg)
    }

    pub fn potential_law(&self) -> PotentialLaw {
        let p = &self.potential;
        let a = p.a.unwrap_or(1.0);
        match p.name.as_str() {
            "linear" => PotentialLaw::linear(a),
            "coulomb" => PotentialLaw::coulomb(a),
            "harmonic" => PotentialLaw::harmonic(a),
            "gaussian" => PotentialLaw::gaussian(a, p.b.unwrap_or(1.0)),
            "powerlaw" => PotentialLaw::PowerLaw { a, b: p.b.unwrap_or(1.0) },
            _ => PotentialLaw::ExponentialWell { a, b: p.b.unwrap_or(1.0), gamma: p.gamma.unwrap_or(2.0) },
        }
    }

    pub fn system(&self) -> CliResult<SystemSpec> {
        Ok(SystemSpec::new(
            self.n,
            self.d,
            KineticLaw::PowerLaw { f: self.kinetic_f, alpha: self.kinetic_alpha },
            vec![Term { k: self.k, potential: self.potential_law() }],
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = RunConfig::parse("[system]\npotential = linear\na = 0.5\n").unwrap();
        assert_eq!(c.state.quanta, vec![(0, 0), (0, 0)]);
        assert_eq!(c.phi, PhiMode::Fixed(2.0));
        assert_eq!(c.format, Format::Table);
    }

    #[test]
    fn phi_modes() {
        let base = "[system]\npotential = coulomb\na = 3\n[method]\n";
        let p = |s: &str| RunConfig::parse(&format!("{base}phi = {s}\n")).unwrap().phi;
        assert_eq!(p("dos"), PhiMode::Dos);
        assert_eq!(p("fixed:1.5"), PhiMode::Fixed(1.5));
        assert_eq!(p("1.5"), PhiMode::Fixed(1.5));
        assert_eq!(p("calibrate:-0.24"), PhiMode::Calibrate(-0.24));
    }

    #[test]
    fn unknown_key_reports_line() {
        let e = RunConfig::parse("[system]\npotential = linear\na = 1\nbogus = 3\n").unwrap_err();
        match e {
            CliError::Parse { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("bogus"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inapplicable_and_missing_parameters() {
        assert!(matches!(
            RunConfig::parse("[system]\npotential = linear\na = 1\ngamma = 2\n"),
            Err(CliError::Parse { line: 4, .. })
        ));
        assert!(matches!(RunConfig::parse("[system]\npotential = gaussian\na = 1\n"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("[state]\nl = 0\n"), Err(CliError::Config(_))));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(RunConfig::parse("potential = linear\n"), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(RunConfig::parse("[system\n"), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(RunConfig::parse("[nope]\n"), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(
            RunConfig::parse("[system]\npotential = linear\na = 1\n[state]\nquanta = 1 0 0\n"),
            Err(CliError::Parse { line: 5, .. })
        ));
    }
}
