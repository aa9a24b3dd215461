//! Command dispatch shared by the binary and the C interface.

pub mod config;
pub mod report;
pub mod svg;

use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::charge::{lvl_check, z_geo, z_hat, StabilityParams};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::fm::FmData;
use crate::lattice::{CohVector, NsClass, SurfaceData};
use crate::rational::{abs, format_rational, int, parse_list, parse_rational, to_f64, Rational};
use crate::walls::{ScanParams, WallProblem};

pub use config::{Config, ConfigFile};
pub use report::{Outcome, Report, ScanPlot, Table};

use report::{class_value, float, gauss_value, int_list, q, tuple_text, vector_value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Pair,
    Charge,
    FmApply,
    FmStability,
    LvlCheck,
    WallsClassify,
    WallsScan,
    Chamber,
    Validate,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Pair,
        Command::Charge,
        Command::FmApply,
        Command::FmStability,
        Command::LvlCheck,
        Command::WallsClassify,
        Command::WallsScan,
        Command::Chamber,
        Command::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Pair => "pair",
            Command::Charge => "charge",
            Command::FmApply => "fm-apply",
            Command::FmStability => "fm-stability",
            Command::LvlCheck => "lvl-check",
            Command::WallsClassify => "walls-classify",
            Command::WallsScan => "walls-scan",
            Command::Chamber => "chamber",
            Command::Validate => "validate",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown command {s:?}")))
    }
}

/// Command flags. Vectors are comma-separated `r,ξ_1,…,ξ_n,s`; classes are
/// comma-separated NS coordinates; scalars are `p/q` rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, clap::Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CommandArgs {
    /// First vector for `pair`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    /// Vector operand.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    /// Polarization class for `lvl-check`.
    #[arg(long = "L", allow_hyphen_values = true)]
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l_class: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_bound: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_prime: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<String>,
    /// Read `--v` as a Chern character instead of a Mukai vector.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub chern: bool,
}

fn flag_err(flag: &str, e: Error) -> Error {
    Error::Parse(format!("--{flag}: {e}"))
}

fn need<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| Error::Parse(format!("missing --{flag}")))
}

fn rational_flag(value: &Option<String>, flag: &str) -> Result<Option<Rational>> {
    value
        .as_deref()
        .map(|t| parse_rational(t).map_err(|e| flag_err(flag, e)))
        .transpose()
}

fn positive_int_flag(value: &Option<String>, flag: &str) -> Result<Option<u64>> {
    let Some(q) = rational_flag(value, flag)? else {
        return Ok(None);
    };
    if !q.is_integer() || q.is_negative() {
        return Err(Error::Parse(format!("--{flag}: expected a non-negative integer, got {q}")));
    }
    q.to_integer()
        .to_u64()
        .map(Some)
        .ok_or_else(|| Error::Parse(format!("--{flag}: out of range")))
}

fn vector_flag(s: &SurfaceData, value: &Option<String>, flag: &str) -> Result<CohVector> {
    let coords = parse_list(need(value, flag)?).map_err(|e| flag_err(flag, e))?;
    if coords.len() != s.rank() + 2 {
        return Err(Error::Parse(format!(
            "--{flag}: expected {} entries (r, {} NS coordinates, s), got {}",
            s.rank() + 2,
            s.rank(),
            coords.len()
        )));
    }
    CohVector::from_coords(&coords)
}

fn class_flag(s: &SurfaceData, value: &Option<String>, flag: &str) -> Result<Option<NsClass>> {
    let Some(text) = value.as_deref() else {
        return Ok(None);
    };
    let coords = parse_list(text).map_err(|e| flag_err(flag, e))?;
    if coords.len() != s.rank() {
        return Err(Error::Parse(format!(
            "--{flag}: expected {} NS coordinates, got {}",
            s.rank(),
            coords.len()
        )));
    }
    Ok(Some(NsClass::new(coords)))
}

fn require_fm(config: &Config) -> Result<&FmData> {
    config
        .fm
        .as_ref()
        .ok_or_else(|| Error::Parse("this command needs an fm block in the config".into()))
}

/// Wall parameters with flags taking precedence over the wall block.
struct WallParams {
    ell: u64,
    k_bound: Option<u64>,
    beta_prime: Option<NsClass>,
    m: Option<Rational>,
    n: Option<Rational>,
    t_max: Option<Rational>,
    r0: u64,
}

impl WallParams {
    fn resolve(config: &Config, args: &CommandArgs, require_block: bool) -> Result<Self> {
        let block = config.wall();
        if require_block && block.is_none() {
            return Err(Error::Parse("this command needs a wall block in the config".into()));
        }
        let s = &config.surface;
        let ell = match positive_int_flag(&args.ell, "ell")? {
            Some(l) => l,
            None => match block {
                Some(b) => b.ell.0.try_into().map_err(|_| Error::Parse("wall.ell: must be positive".into()))?,
                None => return Err(Error::Parse("missing --ell (or a wall block)".into())),
            },
        };
        let k_bound = match positive_int_flag(&args.k_bound, "k-bound")? {
            Some(k) => Some(k),
            None => block
                .and_then(|b| b.k_bound)
                .map(|k| k.0.try_into().map_err(|_| Error::Parse("wall.k_bound: must be non-negative".into())))
                .transpose()?,
        };
        let beta_prime = match class_flag(s, &args.beta_prime, "beta-prime")? {
            Some(b) => Some(b),
            None => match block.and_then(|b| b.beta_prime.as_ref()) {
                Some(c) => {
                    let c = NsClass::new(c.iter().map(|r| r.0.clone()).collect());
                    s.check_class(&c).map_err(|e| Error::Parse(format!("wall.beta_prime: {e}")))?;
                    Some(c)
                }
                None => None,
            },
        };
        let pick = |flag: &Option<String>, name: &str, from_block: Option<&config::Rat>| -> Result<Option<Rational>> {
            Ok(rational_flag(flag, name)?.or_else(|| from_block.map(|r| r.0.clone())))
        };
        let m = pick(&args.m, "m", block.and_then(|b| b.m.as_ref()))?;
        let n = pick(&args.n, "n", block.and_then(|b| b.n.as_ref()))?;
        let t_max = pick(&args.t_max, "t-max", block.and_then(|b| b.t_max.as_ref()))?;
        let r0 = match positive_int_flag(&args.r0, "r0")? {
            Some(r) => r,
            None => block
                .and_then(|b| b.r0)
                .map(|r| r.0)
                .or_else(|| config.file.fm.as_ref().map(|f| f.r0.0))
                .unwrap_or(1)
                .try_into()
                .map_err(|_| Error::Parse("r0 must be positive".into()))?,
        };
        if r0 == 0 {
            return Err(Error::Parse("r0 must be positive".into()));
        }
        Ok(WallParams {
            ell,
            k_bound,
            beta_prime,
            m,
            n,
            t_max,
            r0,
        })
    }

    fn required<T: Clone>(value: &Option<T>, name: &str) -> Result<T> {
        value
            .clone()
            .ok_or_else(|| Error::Parse(format!("missing {name} (flag or wall block)")))
    }
}

/// Parses the config text and runs `command`. `validate` reports every
/// violated invariant instead of failing on the first.
pub fn execute(command: Command, config_text: &str, args: &CommandArgs) -> Result<Report> {
    let file = ConfigFile::from_json(config_text)?;
    if command == Command::Validate {
        return Ok(validate(file, args));
    }
    let config = Config::from_file(file)?;
    run(command, &config, args)
}

pub fn run(command: Command, config: &Config, args: &CommandArgs) -> Result<Report> {
    let mut report = Report::new(command.name());
    report.input("surface", json!(config.surface.name));
    if let Value::Object(flags) = serde_json::to_value(args).expect("flags serialize") {
        if !flags.is_empty() {
            report.input("flags", Value::Object(flags));
        }
    }
    match command {
        Command::Pair => pair(config, args, &mut report)?,
        Command::Charge => charge(config, args, &mut report)?,
        Command::FmApply => fm_apply(config, args, &mut report)?,
        Command::FmStability => fm_stability(config, args, &mut report)?,
        Command::LvlCheck => lvl(config, args, &mut report)?,
        Command::WallsClassify => walls_classify(config, args, &mut report)?,
        Command::WallsScan => walls_scan(config, args, &mut report)?,
        Command::Chamber => chamber(config, args, &mut report)?,
        Command::Validate => return Ok(validate(config.file.clone(), args)),
    }
    Ok(report)
}

fn validate(file: ConfigFile, args: &CommandArgs) -> Report {
    let mut report = Report::new(Command::Validate.name());
    report.input("surface", json!(file.surface.name));
    if let Value::Object(flags) = serde_json::to_value(args).expect("flags serialize") {
        if !flags.is_empty() {
            report.input("flags", Value::Object(flags));
        }
    }
    let (config, mut checks) = Config::build(file);
    if let Some(config) = &config {
        if let Some(w) = config.wall() {
            if let Ok(ell) = u64::try_from(w.ell.0) {
                let res = WallProblem::new(config.surface.clone(), ell);
                checks.push(Check::new(
                    "wall problem (K3: χ = 2, K = 0)",
                    res.is_ok(),
                    match res {
                        Ok(_) => "wall: ok".to_string(),
                        Err(e) => format!("wall: {e}"),
                    },
                ));
            }
        }
        if let Some(fm) = &config.fm {
            report.result("fm_beta", class_value(&fm.beta));
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    report.result("valid", json!(passed));
    report.table = Some(Table {
        header: vec!["check".into(), "passed".into(), "detail".into()],
        rows: checks
            .iter()
            .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
            .collect(),
    });
    report.checks = checks;
    if !passed {
        report.outcome = Outcome::Invalid;
    }
    report
}

fn pair(config: &Config, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let s = &config.surface;
    let u = vector_flag(s, &args.u, "u")?;
    let v = vector_flag(s, &args.v, "v")?;
    let value = s.pair(&u, &v)?;
    report.result("value", q(&value));
    report.table = Some(Table {
        header: vec!["u".into(), "v".into(), "pairing".into()],
        rows: vec![vec![tuple_text(&u.coords()), tuple_text(&v.coords()), format_rational(&value)]],
    });
    Ok(())
}

fn charge(config: &Config, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let s = &config.surface;
    let input = vector_flag(s, &args.v, "v")?;
    let beta = class_flag(s, &args.beta, "beta")?.unwrap_or_else(|| NsClass::zero(s.rank()));
    let omega = class_flag(s, &args.omega, "omega")?
        .ok_or_else(|| Error::Parse("missing --omega".into()))?;
    let params = StabilityParams::new(beta, omega);
    let mut rows = Vec::new();
    let mut charges = Vec::new();
    if args.chern {
        let mukai = s.mukai_vector(&input);
        report.result("mukai_vector", vector_value(&mukai));
        charges.push(("z_geo", z_geo(s, &params, &input)?));
        charges.push(("z_hat", z_hat(s, &params, &mukai)?));
    } else {
        charges.push(("z_hat", z_hat(s, &params, &input)?));
    }
    for (name, z) in &charges {
        report.result(name, gauss_value(z));
        let phase = to_f64(&z.im).atan2(to_f64(&z.re)) / std::f64::consts::PI;
        report.display(&format!("{name}_phase"), json!(phase));
        rows.push(vec![name.to_string(), format_rational(&z.re), format_rational(&z.im)]);
    }
    report.table = Some(Table {
        header: vec!["charge".into(), "re".into(), "im".into()],
        rows,
    });
    Ok(())
}

fn fm_apply(config: &Config, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let fm = require_fm(config)?;
    let v = vector_flag(&fm.source, &args.v, "v")?;
    let image = fm.apply(&v)?;
    report.result("image", vector_value(&image));
    let before = fm.source.pair(&v, &v)?;
    let after = fm.target.pair(&image, &image)?;
    report.check(Check::new(
        "⟨Φv, Φv⟩ = ⟨v, v⟩",
        before == after,
        format!("{before} vs {after}"),
    ));
    let m = rational_flag(&args.m, "m")?;
    let n = rational_flag(&args.n, "n")?;
    if let (Some(m), Some(n)) = (m, n) {
        let d = fm.dim1_image(&v, &m, &n)?;
        report.result(
            "dim1",
            json!({
                "image": vector_value(&d.image),
                "d": q(&d.d),
                "delta": q(&d.delta),
                "lhs": q(&d.lhs),
                "rhs": q(&d.rhs),
                "regime_ok": d.regime_ok,
            }),
        );
        let c = Check::new(
            "large volume regime on the target",
            d.regime_ok,
            format!("{} > {}", d.lhs, d.rhs),
        );
        report.require(std::slice::from_ref(&c));
        report.check(c);
    }
    Ok(())
}

fn fm_stability(config: &Config, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let fm = require_fm(config)?;
    let m = rational_flag(&args.m, "m")?.ok_or_else(|| Error::Parse("missing --m".into()))?;
    let n = rational_flag(&args.n, "n")?.ok_or_else(|| Error::Parse("missing --n".into()))?;
    let img = fm.stability_image(&m, &n)?;
    let r0 = int(fm.r0 as i64);
    let h_coeff = Rational::one() / (&r0 * &r0 * &m);
    let f_coeff = &m * &n;
    report.result(
        "alpha",
        json!({ "quarter_turns": img.alpha.quarter_turns.to_string(), "scale": q(&img.alpha.scale) }),
    );
    report.result("beta_prime", class_value(&img.beta_prime));
    report.result(
        "omega_prime",
        json!({ "h_coeff": q(&h_coeff), "f_coeff": q(&f_coeff), "ns": class_value(&img.omega_prime) }),
    );
    let mut hyps = Map::new();
    for c in &img.hypotheses {
        hyps.insert(c.name.clone(), json!(c.passed));
    }
    report.result("hypotheses", Value::Object(hyps));
    report.result("duality_condition", json!(img.duality_condition.passed));
    report.display(
        "omega_prime",
        json!(format!("{}·H' + {}·f'", format_rational(&h_coeff), format_rational(&f_coeff))),
    );
    report.require(&img.hypotheses);
    for c in img.hypotheses {
        report.check(c);
    }
    report.check(img.duality_condition);
    report.check(img.charge_identity);
    Ok(())
}

fn lvl(config: &Config, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let s = &config.surface;
    let v = vector_flag(s, &args.v, "v")?;
    let beta = class_flag(s, &args.beta, "beta")?.unwrap_or_else(|| NsClass::zero(s.rank()));
    let l = class_flag(s, &args.l_class, "L")?.ok_or_else(|| Error::Parse("missing --L".into()))?;
    let t = rational_flag(&args.t, "t")?.ok_or_else(|| Error::Parse("missing --t".into()))?;
    let r = lvl_check(s, &v, &beta, &l, &t)?;
    report.result("lhs", q(&r.lhs));
    report.result("rhs", q(&r.rhs));
    report.result("d", q(&r.d));
    report.result("delta", q(&r.delta));
    report.result("holds", json!(r.holds));
    let c = Check::new(
        "large volume inequality",
        r.holds,
        format!("{} > {}", r.lhs, r.rhs),
    );
    report.require(std::slice::from_ref(&c));
    report.check(c);
    Ok(())
}

fn walls_classify(config: &Config, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let p = WallParams::resolve(config, args, false)?;
    let k_bound = WallParams::required(&p.k_bound, "k_bound")?;
    let prob = WallProblem::new(config.surface.clone(), p.ell)?;
    let walls = prob.classify_f_walls(k_bound)?;
    report.result("ell", json!(p.ell.to_string()));
    report.result("k_bound", json!(k_bound.to_string()));
    report.result("count", json!(walls.len().to_string()));
    let s = &prob.surface;
    let mut list = Vec::new();
    let mut rows = Vec::new();
    for w in &walls {
        list.push(json!({
            "key": int_list(&w.key.0),
            "tag": w.tag.as_str(),
            "u": vector_value(&w.u),
            "u_squared": q(&s.pair(&w.u, &w.u)?),
            "v_dot_u": q(&s.pair(&prob.v, &w.u)?),
        }));
        rows.push(vec![w.key.to_string(), w.tag.as_str().to_string(), tuple_text(&w.u.coords())]);
    }
    report.result("walls", Value::Array(list));
    report.table = Some(Table {
        header: vec!["key".into(), "tag".into(), "u".into()],
        rows,
    });
    Ok(())
}

fn walls_scan(config: &Config, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let p = WallParams::resolve(config, args, true)?;
    let prob = WallProblem::new(config.surface.clone(), p.ell)?;
    let params = ScanParams {
        beta_prime: WallParams::required(&p.beta_prime, "beta_prime")?,
        r0: p.r0,
        m: WallParams::required(&p.m, "m")?,
        n: WallParams::required(&p.n, "n")?,
        t_max: WallParams::required(&p.t_max, "t_max")?,
    };
    let hits = prob.scan(&params)?;
    for c in prob.scan_preconditions(&params)? {
        report.check(c);
    }
    let k_bound = prob.derived_k_bound(&params.beta_prime)?;
    report.input("ell", json!(p.ell.to_string()));
    report.input("beta_prime", class_value(&params.beta_prime));
    report.input("r0", json!(p.r0.to_string()));
    report.input("m", q(&params.m));
    report.input("n", q(&params.n));
    report.input("t_max", q(&params.t_max));
    report.result("k_bound", json!(k_bound.to_string()));
    report.result("count", json!(hits.len().to_string()));
    let mut list = Vec::new();
    let mut rows = Vec::new();
    let mut t_values = Vec::new();
    for h in &hits {
        list.push(json!({
            "t2": q(&h.t2),
            "key": int_list(&h.wall.key.0),
            "tag": h.wall.tag.as_str(),
            "u": vector_value(&h.wall.u),
        }));
        rows.push(vec![
            format_rational(&h.t2),
            h.wall.key.to_string(),
            h.wall.tag.as_str().to_string(),
            tuple_text(&h.wall.u.coords()),
        ]);
        t_values.push(json!(to_f64(&h.t2).sqrt()));
    }
    report.result("hits", Value::Array(list));
    report.display("t", Value::Array(t_values));
    report.table = Some(Table {
        header: vec!["t2".into(), "key".into(), "tag".into(), "u".into()],
        rows,
    });
    report.plot = Some(ScanPlot {
        t_max_sq: &params.t_max * &params.t_max,
        hits: hits
            .iter()
            .map(|h| (h.t2.clone(), h.wall.key.to_string()))
            .collect(),
    });
    Ok(())
}

fn chamber(config: &Config, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let p = WallParams::resolve(config, args, false)?;
    let prob = WallProblem::new(config.surface.clone(), p.ell)?;
    let params = ScanParams {
        beta_prime: WallParams::required(&p.beta_prime, "beta_prime")?,
        r0: p.r0,
        m: WallParams::required(&p.m, "m")?,
        n: WallParams::required(&p.n, "n")?,
        t_max: p.t_max.clone().unwrap_or_else(Rational::one),
    };
    let pre = prob.scan_preconditions(&params)?;
    let failed: Vec<String> = pre.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    if !failed.is_empty() {
        return Err(Error::Regime(failed.join("; ")));
    }
    let sig = prob.chamber_signature(&params.beta_prime, p.r0, &params.m, &params.n)?;
    report.input("ell", json!(p.ell.to_string()));
    report.input("beta_prime", class_value(&params.beta_prime));
    report.input("r0", json!(p.r0.to_string()));
    report.input("m", q(&params.m));
    report.input("n", q(&params.n));
    report.result("nu_beta_coeff", q(&sig.nu_beta_coeff));
    report.result("h_coeff", q(&sig.h_coeff));
    report.result("f_coeff", q(&Rational::one()));
    report.result("vector", vector_value(&sig.vector));
    report.display("nu_beta_coeff_abs", float(&abs(&sig.nu_beta_coeff)));
    report.check(Check::new(
        "⟨signature, v⟩ = 0",
        prob.surface.pair(&sig.vector, &prob.v)?.is_zero(),
        String::new(),
    ));
    for c in pre {
        report.check(c);
    }
    Ok(())
}
