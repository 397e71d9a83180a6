//! Configuration files: anchors and constants as exact rationals.
//!
//! ```json
//! {
//!   "points": { "A": [-1, -1], "B": ["-1", 1], "C": [1, "-1"], "D": [1, 1] },
//!   "k": { "A": "11/10", "B": 1.1, "C": "1.1", "D": "11/10" },
//!   "tolerances": { "accept": 1e-8 },
//!   "seed": 7
//! }
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use fouranchor_core::{Configuration, Label, Point2, ToleranceSettings};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// Optional tolerance overrides read from the file.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub accept: Option<f64>,
    pub real: Option<f64>,
    pub dedupe: Option<f64>,
    pub max_newton_iters: Option<usize>,
}

impl ToleranceOverrides {
    pub fn apply(&self, t: &mut ToleranceSettings) {
        if let Some(v) = self.accept {
            t.accept = v;
        }
        if let Some(v) = self.real {
            t.real = v;
        }
        if let Some(v) = self.dedupe {
            t.dedupe = v;
        }
        if let Some(v) = self.max_newton_iters {
            t.max_newton_iters = v;
        }
    }
}

/// The parsed configuration in canonical form, echoed into reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub points: BTreeMap<String, [String; 2]>,
    pub k: BTreeMap<String, String>,
}

impl ConfigEcho {
    pub fn of(config: &Configuration) -> Self {
        let mut points = BTreeMap::new();
        let mut k = BTreeMap::new();
        for l in Label::ALL {
            let p = config.anchor(l);
            points.insert(l.name().to_string(), [p.x.to_string(), p.y.to_string()]);
            k.insert(l.name().to_string(), config.k(l).to_string());
        }
        Self { points, k }
    }
}

#[derive(Clone, Debug)]
pub struct ConfigFile {
    pub config: Configuration,
    pub tolerances: ToleranceOverrides,
    pub seed: Option<u64>,
}

/// Parses an exact rational from `"p/q"`, an integer or a decimal with an
/// optional exponent.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| format!("bad numerator in `{s}`"))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| format!("bad denominator in `{s}`"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| format!("bad exponent in `{s}`"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let valid = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if (int.is_empty() && frac.is_empty()) || !valid(int) || !valid(frac) {
        return Err(format!("`{s}` is not a number"));
    }
    if exp.unsigned_abs() > 10_000 {
        return Err(format!("exponent out of range in `{s}`"));
    }
    let all = format!("{int}{frac}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|e| e.to_string())?;
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    let mut r = if scale >= 0 {
        BigRational::from_integer(n * pow)
    } else {
        BigRational::new(n, pow)
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Field { field: field.into(), message: message.into() }
}

fn value_to_rational(v: &Value, field: &str) -> Result<BigRational, CliError> {
    match v {
        // Number text is kept verbatim, so "1.1" stays 11/10.
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(format!("expected a number or string, found {other}")),
    }
    .map_err(|m| field_err(field, m))
}

fn label_map<'a>(root: &'a serde_json::Map<String, Value>, key: &str) -> Result<[&'a Value; 4], CliError> {
    let obj = root
        .get(key)
        .ok_or_else(|| field_err(key, "missing"))?
        .as_object()
        .ok_or_else(|| field_err(key, "expected an object keyed by A, B, C, D"))?;
    if let Some(extra) = obj.keys().find(|k| !Label::ALL.iter().any(|l| l.name() == k.as_str())) {
        return Err(field_err(format!("{key}.{extra}"), "unknown label"));
    }
    let mut out = [&Value::Null; 4];
    for l in Label::ALL {
        out[l.index()] = obj.get(l.name()).ok_or_else(|| field_err(format!("{key}.{}", l.name()), "missing"))?;
    }
    Ok(out)
}

pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })?;
    let root = root.as_object().ok_or_else(|| field_err("<root>", "expected an object"))?;
    if let Some(extra) = root.keys().find(|k| !["points", "k", "tolerances", "seed"].contains(&k.as_str())) {
        return Err(field_err(extra.as_str(), "unknown field"));
    }
    let pts = label_map(root, "points")?;
    let ks = label_map(root, "k")?;
    let mut anchors: [Point2; 4] = std::array::from_fn(|_| Point2::origin());
    let mut k: [BigRational; 4] = std::array::from_fn(|_| BigRational::one());
    for l in Label::ALL {
        let i = l.index();
        let field = format!("points.{}", l.name());
        let pair = pts[i]
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| field_err(&field, "expected a pair [x, y]"))?;
        anchors[i] = Point2::new(
            value_to_rational(&pair[0], &format!("{field}[0]"))?,
            value_to_rational(&pair[1], &format!("{field}[1]"))?,
        );
        let kf = format!("k.{}", l.name());
        k[i] = value_to_rational(ks[i], &kf)?;
    }
    let tolerances = match root.get("tolerances") {
        None | Some(Value::Null) => ToleranceOverrides::default(),
        Some(v) => ToleranceOverrides::deserialize(v).map_err(|e| field_err("tolerances", e.to_string()))?,
    };
    let seed = match root.get("seed") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| field_err("seed", "expected a non-negative integer"))?),
    };
    Ok(ConfigFile { config: Configuration::new(anchors, k), tolerances, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1.1").unwrap(), q(11, 10));
        assert_eq!(parse_rational("-2/3").unwrap(), q(-2, 3));
        assert_eq!(parse_rational("4/-6").unwrap(), q(-2, 3));
        assert_eq!(parse_rational("12").unwrap(), q(12, 1));
        assert_eq!(parse_rational("-.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("2.5e-3").unwrap(), q(1, 400));
        assert_eq!(parse_rational("3E2").unwrap(), q(300, 1));
        for bad in ["", "1/0", "abc", "1.2.3", "--1", ".", "1e"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_numbers_are_exact() {
        let text = r#"{"points": {"A": [0, 0], "B": [1, 0], "C": [0, 1], "D": [0.1, 0.3]},
                       "k": {"A": 1.1, "B": "11/10", "C": "1.1", "D": 2}}"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.config.k, [q(11, 10), q(11, 10), q(11, 10), q(2, 1)]);
        assert_eq!(cfg.config.anchors[3], Point2::new(q(1, 10), q(3, 10)));
        assert_eq!(cfg.seed, None);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let missing = r#"{"points": {"A": [0, 0], "B": [1, 0], "C": [0, 1]}, "k": {}}"#;
        match parse_config(missing) {
            Err(CliError::Field { field, .. }) => assert_eq!(field, "points.D"),
            other => panic!("{other:?}"),
        }
        let bad = r#"{"points": {"A": [0, 0], "B": [1, 0], "C": [0, 1], "D": [1, "x"]},
                      "k": {"A": 1, "B": 1, "C": 1, "D": 1}}"#;
        match parse_config(bad) {
            Err(CliError::Field { field, .. }) => assert_eq!(field, "points.D[1]"),
            other => panic!("{other:?}"),
        }
        match parse_config("{\n  \"points\": [,\n}") {
            Err(CliError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
