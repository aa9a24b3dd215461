//! JSON configuration: one surface, optionally a transform and a wall block.
//! Every rational is a `"p/q"` string or a JSON integer.

use std::fmt;
use std::path::Path;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::check::Check;
use crate::error::{Error, Result};
use crate::fm::FmData;
use crate::lattice::{NsClass, SurfaceData};
use crate::linalg::Matrix;
use crate::rational::{format_rational, int, parse_rational, Rational};

const FLOAT_MSG: &str = "exact rationals required";

/// A rational read from a string or an integer literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Rational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

struct RatVisitor;

impl Visitor<'_> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as a \"p/q\" string or an integer")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
        Ok(Rat(int(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
        Ok(Rat(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Rat, E> {
        Err(E::custom(format!("{FLOAT_MSG} (got float {v})")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
        parse_rational(v).map(Rat).map_err(|e| E::custom(e.to_string()))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

/// An integer field; floats get the same message as in rational fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Int(pub i64);

struct IntVisitor;

impl Visitor<'_> for IntVisitor {
    type Value = Int;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Int, E> {
        Ok(Int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Int, E> {
        i64::try_from(v)
            .map(Int)
            .map_err(|_| E::custom("integer out of range"))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Int, E> {
        Err(E::custom(format!("{FLOAT_MSG} (got float {v})")))
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceBlock {
    pub name: String,
    pub chi: Int,
    pub ns_rank: Int,
    pub gram: Vec<Vec<Rat>>,
    pub f: Vec<Rat>,
    #[serde(rename = "H")]
    pub h: Vec<Rat>,
    #[serde(rename = "K")]
    pub k: Vec<Rat>,
    #[serde(default)]
    pub minus2_fiber_classes: Vec<Vec<Rat>>,
    pub integrality_scale_l: Int,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FmBlock {
    pub r0: Int,
    pub b: Rat,
    /// Solved along `H` from `β = 0` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<Rat>>,
    /// Defaults to the source surface.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SurfaceBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_prime: Option<Vec<Rat>>,
    /// Rows indexed by target NS coordinates; identity when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_map: Option<Vec<Vec<Rat>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallBlock {
    pub ell: Int,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_prime: Option<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_bound: Option<Int>,
    /// Falls back to `fm.r0`, then 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub surface: SurfaceBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fm: Option<FmBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall: Option<WallBlock>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

/// A loaded configuration with its library objects built.
#[derive(Clone, Debug)]
pub struct Config {
    pub file: ConfigFile,
    pub surface: SurfaceData,
    pub fm: Option<FmData>,
}

fn rats(v: &[Rat]) -> Vec<Rational> {
    v.iter().map(|r| r.0.clone()).collect()
}

fn class(v: &[Rat]) -> NsClass {
    NsClass::new(rats(v))
}

fn surface_from_block(b: &SurfaceBlock, path: &str, issues: &mut Vec<String>) -> Option<SurfaceData> {
    let before = issues.len();
    if b.ns_rank.0 <= 0 {
        issues.push(format!("{path}.ns_rank: must be positive"));
    } else if b.ns_rank.0 as usize != b.gram.len() {
        issues.push(format!(
            "{path}.ns_rank: is {} but gram has {} rows",
            b.ns_rank.0,
            b.gram.len()
        ));
    }
    if b.integrality_scale_l.0 <= 0 {
        issues.push(format!("{path}.integrality_scale_l: must be positive"));
    }
    if issues.len() > before {
        return None;
    }
    let s = SurfaceData {
        name: b.name.clone(),
        chi: b.chi.0,
        gram: b.gram.iter().map(|row| rats(row)).collect(),
        f: class(&b.f),
        h: class(&b.h),
        k: class(&b.k),
        minus2_fiber_classes: b.minus2_fiber_classes.iter().map(|d| class(d)).collect(),
        integrality_scale_l: b.integrality_scale_l.0 as u64,
    };
    let v = s.violations();
    if v.is_empty() {
        Some(s)
    } else {
        issues.extend(v.iter().map(|v| format!("{path}.{v}")));
        None
    }
}

/// Field path blamed for a failed transform check.
fn fm_check_field(name: &str) -> &'static str {
    if name.starts_with("pairing") || name.starts_with("Φ") {
        "fm"
    } else if name.contains("e^β'") {
        "fm.beta_prime"
    } else if name.contains("e^β") {
        "fm.beta"
    } else if name.contains("v0") && !name.contains("Φ") {
        "fm.b"
    } else if name.contains("d_map") {
        "fm.d_map"
    } else if name.contains("target") {
        "fm.target"
    } else {
        "fm"
    }
}

fn fm_from_block(
    b: &FmBlock,
    source: &SurfaceData,
    issues: &mut Vec<String>,
) -> Option<FmData> {
    if b.r0.0 <= 0 {
        issues.push("fm.r0: must be a positive integer".into());
        return None;
    }
    let target = match &b.target {
        Some(t) => surface_from_block(t, "fm.target", issues)?,
        None => source.clone(),
    };
    let r0 = b.r0.0 as u64;
    let beta = match &b.beta {
        Some(beta) => class(beta),
        None => {
            let eta = source.f.scale(&int(b.r0.0));
            match source.beta_solve(&eta, &b.b.0, &NsClass::zero(source.rank())) {
                Ok(beta) => beta,
                Err(e) => {
                    issues.push(format!("fm.beta: {e}"));
                    return None;
                }
            }
        }
    };
    let beta_prime = b
        .beta_prime
        .as_ref()
        .map(|c| class(c))
        .unwrap_or_else(|| NsClass::zero(target.rank()));
    let d_map = match &b.d_map {
        Some(rows) => match Matrix::from_rows(rows.iter().map(|r| rats(r)).collect()) {
            Ok(m) => Some(m),
            Err(e) => {
                issues.push(format!("fm.d_map: {e}"));
                return None;
            }
        },
        None => None,
    };
    match FmData::new(source.clone(), target, r0, b.b.0.clone(), beta, beta_prime, d_map) {
        Ok(fm) => Some(fm),
        Err(e) => {
            issues.push(format!("fm: {e}"));
            None
        }
    }
}

impl Config {
    /// Builds everything and rejects any violated invariant.
    pub fn from_file(file: ConfigFile) -> Result<Self> {
        let (config, checks) = Config::build(file);
        let failed: Vec<String> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.detail.clone())
            .collect();
        match config {
            Some(c) if failed.is_empty() => Ok(c),
            _ => Err(Error::Invalid(failed)),
        }
    }

    /// Builds what it can and reports every invariant as a check whose
    /// detail starts with the field path.
    pub fn build(file: ConfigFile) -> (Option<Self>, Vec<Check>) {
        let mut checks = Vec::new();
        let mut issues = Vec::new();
        let surface = surface_from_block(&file.surface, "surface", &mut issues);
        checks.push(Check::new(
            "surface invariants",
            issues.is_empty(),
            if issues.is_empty() {
                "surface: ok".to_string()
            } else {
                issues.join("; ")
            },
        ));
        let Some(surface) = surface else {
            return (None, checks);
        };
        let mut fm = None;
        if let Some(block) = &file.fm {
            let mut fm_issues = Vec::new();
            fm = fm_from_block(block, &surface, &mut fm_issues);
            if !fm_issues.is_empty() {
                checks.push(Check::new("fm construction", false, fm_issues.join("; ")));
                return (None, checks);
            }
            for c in fm.as_ref().expect("built").validate() {
                let detail = if c.detail.is_empty() {
                    format!("{}: {}", fm_check_field(&c.name), c.name)
                } else {
                    format!("{}: {} ({})", fm_check_field(&c.name), c.name, c.detail)
                };
                checks.push(Check::new(c.name, c.passed, detail));
            }
        }
        if let Some(w) = &file.wall {
            let ok = w.ell.0 > 0;
            checks.push(Check::new(
                "wall.ell > 0",
                ok,
                format!("wall.ell: {}", w.ell.0),
            ));
            if let Some(r0) = w.r0 {
                checks.push(Check::new(
                    "wall.r0 > 0",
                    r0.0 > 0,
                    format!("wall.r0: {}", r0.0),
                ));
            }
            if let Some(kb) = w.k_bound {
                checks.push(Check::new(
                    "wall.k_bound ≥ 0",
                    kb.0 >= 0,
                    format!("wall.k_bound: {}", kb.0),
                ));
            }
        }
        (Some(Config { file, surface, fm }), checks)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Config::from_file(ConfigFile::from_json(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Config::from_json(&read(path)?)
    }

    pub fn wall(&self) -> Option<&WallBlock> {
        self.file.wall.as_ref()
    }
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
