//! Sweep configuration: a flat JSON object with camelCase field names.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::Ratio;
use obdd_phase_core::obdd::Strategy;
use obdd_phase_core::random::{num_clauses, num_pairs, Distribution};
use serde_json::{Map, Value};

use crate::error::{LabError, Result};

/// Default cap on the matching subformula used for `certFloor`.
pub const DEFAULT_CERT_MAX_CLAUSES: usize = 12;

/// The optional per-trial measurements, named after their CSV columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Satisfiable,
    Simple,
    NonUniqueClauses,
    MaxDegree,
    OneCyclePerComponent,
    TwUpper,
    MmwLinearBest,
    CutPosition,
    MatchingSize,
    PrefixMatchingSize,
    PrefixIsMatching,
    ThetaPrefix,
    ObddSize,
    CertFloor,
    RuntimeMs,
}

impl Metric {
    pub const ALL: [Metric; 15] = [
        Metric::Satisfiable,
        Metric::Simple,
        Metric::NonUniqueClauses,
        Metric::MaxDegree,
        Metric::OneCyclePerComponent,
        Metric::TwUpper,
        Metric::MmwLinearBest,
        Metric::CutPosition,
        Metric::MatchingSize,
        Metric::PrefixMatchingSize,
        Metric::PrefixIsMatching,
        Metric::ThetaPrefix,
        Metric::ObddSize,
        Metric::CertFloor,
        Metric::RuntimeMs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Satisfiable => "satisfiable",
            Metric::Simple => "simple",
            Metric::NonUniqueClauses => "nonUniqueClauses",
            Metric::MaxDegree => "maxDegree",
            Metric::OneCyclePerComponent => "oneCyclePerComponent",
            Metric::TwUpper => "twUpper",
            Metric::MmwLinearBest => "mmwLinearBest",
            Metric::CutPosition => "cutPosition",
            Metric::MatchingSize => "matchingSize",
            Metric::PrefixMatchingSize => "prefixMatchingSize",
            Metric::PrefixIsMatching => "prefixIsMatching",
            Metric::ThetaPrefix => "thetaPrefix",
            Metric::ObddSize => "obddSize",
            Metric::CertFloor => "certFloor",
            Metric::RuntimeMs => "runtimeMs",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub distribution: Distribution,
    pub n_values: Vec<usize>,
    pub delta_values: Vec<Ratio<u64>>,
    pub trials: u64,
    pub master_seed: u64,
    pub metrics: BTreeSet<Metric>,
    pub node_capacity: usize,
    pub output_path: PathBuf,
    /// Ordering strategy for `obddSize`; the cut metrics use its static part.
    pub order: Strategy,
    pub cert_max_clauses: usize,
}

const FIELDS: [&str; 10] = [
    "distribution",
    "nValues",
    "deltaValues",
    "trials",
    "masterSeed",
    "metrics",
    "nodeCapacity",
    "outputPath",
    "order",
    "certMaxClauses",
];

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| LabError::config("(document)", e.to_string()))?;
        let Value::Object(map) = value else {
            return Err(LabError::config("(document)", "expected a JSON object"));
        };
        Self::from_map(&map)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::from_json(&text)
    }

    fn from_map(map: &Map<String, Value>) -> Result<Self> {
        if let Some(unknown) = map.keys().find(|k| !FIELDS.contains(&k.as_str())) {
            return Err(LabError::config(unknown, "unknown field"));
        }
        let get = |field: &str| map.get(field).ok_or_else(|| LabError::config(field, "missing"));

        let distribution = get("distribution")?
            .as_str()
            .ok_or_else(|| LabError::config("distribution", "expected a string"))?
            .parse::<Distribution>()
            .map_err(|e| LabError::config("distribution", e))?;

        let n_values: Vec<usize> = array(get("nValues")?, "nValues")?
            .iter()
            .map(|v| integer(v, "nValues").map(|x| x as usize))
            .collect::<Result<_>>()?;

        let delta_values: Vec<Ratio<u64>> = array(get("deltaValues")?, "deltaValues")?
            .iter()
            .map(|v| {
                let text = match v {
                    Value::Number(x) => x.to_string(),
                    Value::String(s) => s.clone(),
                    _ => return Err(LabError::config("deltaValues", "expected numbers or strings")),
                };
                parse_rational(&text).map_err(|e| LabError::config("deltaValues", e))
            })
            .collect::<Result<_>>()?;

        let trials = integer(get("trials")?, "trials")?;
        let master_seed = integer(get("masterSeed")?, "masterSeed")?;

        let mut metrics = BTreeSet::new();
        for v in array(get("metrics")?, "metrics")? {
            let name = v.as_str().ok_or_else(|| LabError::config("metrics", "expected strings"))?;
            if name == "all" {
                // Wall-clock time would make the CSV depend on the machine.
                metrics.extend(Metric::ALL.into_iter().filter(|&m| m != Metric::RuntimeMs));
            } else {
                metrics.insert(name.parse().map_err(|e: String| LabError::config("metrics", e))?);
            }
        }

        let node_capacity = integer(get("nodeCapacity")?, "nodeCapacity")? as usize;
        let output_path = PathBuf::from(
            get("outputPath")?.as_str().ok_or_else(|| LabError::config("outputPath", "expected a string"))?,
        );
        let order = match map.get("order") {
            None => Strategy::Sifting,
            Some(v) => v
                .as_str()
                .ok_or_else(|| LabError::config("order", "expected a string"))?
                .parse()
                .map_err(|e: obdd_phase_core::Error| LabError::config("order", e.to_string()))?,
        };
        let cert_max_clauses = match map.get("certMaxClauses") {
            None => DEFAULT_CERT_MAX_CLAUSES,
            Some(v) => integer(v, "certMaxClauses")? as usize,
        };

        let config = SweepConfig {
            distribution,
            n_values,
            delta_values,
            trials,
            master_seed,
            metrics,
            node_capacity,
            output_path,
            order,
            cert_max_clauses,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(LabError::config("trials", "must be at least 1"));
        }
        if self.n_values.is_empty() {
            return Err(LabError::config("nValues", "must not be empty"));
        }
        if self.n_values.contains(&0) {
            return Err(LabError::config("nValues", "n must be at least 1"));
        }
        if self.delta_values.is_empty() {
            return Err(LabError::config("deltaValues", "must not be empty"));
        }
        if self.node_capacity < 2 {
            return Err(LabError::config("nodeCapacity", "must be at least 2"));
        }
        if let obdd_phase_core::obdd::Strategy::Explicit(_) = self.order {
            return Err(LabError::config("order", "explicit orders do not apply to a sweep"));
        }
        for &n in &self.n_values {
            for &delta in &self.delta_values {
                let m = clause_count(n, delta);
                let available = match self.distribution {
                    Distribution::F2 => num_clauses(n),
                    Distribution::Monotone => num_pairs(n),
                    Distribution::H2 if n >= 2 => u64::MAX,
                    Distribution::H2 => 0,
                };
                if m > available {
                    return Err(LabError::config(
                        "deltaValues",
                        format!("δ = {} needs {m} clauses at n = {n}, only {available} exist", format_delta(delta)),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `(n, δ)` cells in ascending order, duplicates removed.
    pub fn cells(&self) -> Vec<(usize, Ratio<u64>)> {
        let ns: BTreeSet<usize> = self.n_values.iter().copied().collect();
        let ds: BTreeSet<Ratio<u64>> = self.delta_values.iter().copied().collect();
        ns.iter().flat_map(|&n| ds.iter().map(move |&d| (n, d))).collect()
    }

    pub fn wants(&self, metric: Metric) -> bool {
        self.metrics.contains(&metric)
    }
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| LabError::config(field, "expected an array"))
}

fn integer(v: &Value, field: &str) -> Result<u64> {
    match v {
        Value::Number(x) => x.as_u64().ok_or_else(|| LabError::config(field, format!("`{x}` is not a non-negative integer"))),
        Value::String(s) => s.parse().map_err(|_| LabError::config(field, format!("`{s}` is not a non-negative integer"))),
        _ => Err(LabError::config(field, "expected an integer")),
    }
}

/// `m = round(δ n)`, ties rounded up, computed exactly.
pub fn clause_count(n: usize, delta: Ratio<u64>) -> u64 {
    let num = *delta.numer() as u128 * n as u128;
    let den = *delta.denom() as u128;
    ((2 * num + den) / (2 * den)) as u64
}

/// Parses `a/b`, an integer, or a decimal with optional exponent into an
/// exact non-negative rational.
pub fn parse_rational(s: &str) -> std::result::Result<Ratio<u64>, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not a non-negative rational");
    if let Some((a, b)) = s.split_once('/') {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(format!("`{s}` has a zero denominator"));
        }
        return Ok(Ratio::new(a, b));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let mantissa = mantissa.strip_prefix('+').unwrap_or(mantissa);
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let mut num: u64 = digits.trim_start_matches('0').parse().unwrap_or(0);
    let scale = exp - frac.len() as i32;
    let overflow = || format!("`{s}` is out of range");
    let pow10 = |k: u32| 10u64.checked_pow(k).ok_or_else(overflow);
    let mut den = 1u64;
    if scale >= 0 {
        num = num.checked_mul(pow10(scale as u32)?).ok_or_else(overflow)?;
    } else {
        den = pow10(scale.unsigned_abs())?;
    }
    Ok(Ratio::new(num, den))
}

/// A terminating decimal when the denominator has only factors 2 and 5,
/// `a/b` otherwise.
pub fn format_delta(delta: Ratio<u64>) -> String {
    let (num, den) = (*delta.numer(), *delta.denom());
    let mut d = den;
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d != 1 {
        return format!("{num}/{den}");
    }
    let places = twos.max(fives);
    let scaled = num as u128 * 10u128.pow(places) / den as u128;
    if places == 0 {
        return scaled.to_string();
    }
    let unit = 10u128.pow(places);
    format!("{}.{:0width$}", scaled / unit, scaled % unit, width = places as usize)
}
