//! Config parsing and report assembly for the command-line front end.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::positivity::{
    antiample_check, canonical_ample, hasse_divisor_coeffs, weil_pullback_check, PositivityError, Verdict,
};
use crate::root_datum::{build_group, GroupSpec, NodeSet, RationalCharacter, RootDatumError};
use crate::weyl::{enumerate_weyl, DEFAULT_CAP};
use crate::zip::{build_zip_datum, classify_cocharacter, CocharClass, ZipDatum, ZipError, ZipInput};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid config: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub weyl_cap: Option<u64>,
    #[serde(default)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumConfig {
    pub q: u64,
    pub group: GroupSpec,
    #[serde(default)]
    pub cocharacter: Option<Vec<i64>>,
    /// 1-based node labels.
    #[serde(default)]
    pub parabolic_type: Option<Vec<usize>>,
    #[serde(default)]
    pub options: Option<Options>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Hasse,
    Orbits,
    Positivity,
    Picard,
    All,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Hasse => "hasse",
            Command::Orbits => "orbits",
            Command::Positivity => "positivity",
            Command::Picard => "picard",
            Command::All => "all",
        }
    }

    fn runs(self, section: Command) -> bool {
        self == Command::All || self == section
    }
}

pub fn parse_config(text: &str) -> Result<DatumConfig, ConfigError> {
    let cfg: DatumConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    match (&cfg.cocharacter, &cfg.parabolic_type) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::Validation("give exactly one of cocharacter and parabolic_type".into()))
        }
        (None, None) => return Err(ConfigError::Validation("one of cocharacter or parabolic_type is required".into())),
        _ => {}
    }
    if cfg.q < 2 {
        return Err(ConfigError::Validation(format!("q = {} must be at least 2", cfg.q)));
    }
    datum_of(&cfg)?;
    Ok(cfg)
}

/// Builds the zip datum described by a validated config.
pub fn datum_of(cfg: &DatumConfig) -> Result<ZipDatum, ConfigError> {
    let invalid = |e: &dyn std::fmt::Display| ConfigError::Validation(e.to_string());
    let (rd, frob) = build_group(&cfg.group, cfg.q).map_err(|e| invalid(&e))?;
    let input = match (&cfg.cocharacter, &cfg.parabolic_type) {
        (Some(chi), _) => ZipInput::Cocharacter(chi.clone()),
        (None, Some(j)) => {
            let mut set = NodeSet::new();
            for &x in j {
                if x == 0 || x > rd.node_count() {
                    return Err(invalid(&RootDatumError::NodeOutOfRange { node: x, count: rd.node_count() }));
                }
                set.insert(x - 1);
            }
            ZipInput::Parabolic(set)
        }
        (None, None) => return Err(ConfigError::Validation("missing parabolic data".into())),
    };
    build_zip_datum(&rd, &frob, input).map_err(|e| invalid(&e))
}

/// A finished report and whether a computation obstruction occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub obstructed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.obstructed {
            3
        } else {
            0
        }
    }
}

fn one_based(set: &NodeSet) -> Value {
    Value::from(set.iter().map(|x| x + 1).collect::<Vec<_>>())
}

fn strings<T: ToString>(xs: &[T]) -> Value {
    Value::from(xs.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn rational_vec(v: &[BigRational]) -> Value {
    strings(v)
}

fn class_name(c: CocharClass) -> &'static str {
    match c {
        CocharClass::Central => "central",
        CocharClass::Minuscule => "minuscule",
        CocharClass::SmallNotMinuscule => "small_not_minuscule",
        CocharClass::Neither => "neither",
    }
}

/// Runs `cmd` on `cfg`. `weyl_cap` overrides the config option.
pub fn run(cmd: Command, cfg: &DatumConfig, weyl_cap: Option<u64>) -> Result<Outcome, ConfigError> {
    let zd = datum_of(cfg)?;
    let mut out = Map::new();
    let mut warnings: Vec<String> = Vec::new();
    let mut obstructed = false;

    out.insert("command".into(), cmd.as_str().into());
    out.insert("q".into(), cfg.q.into());
    out.insert("group".into(), serde_json::to_value(&cfg.group).expect("group spec serializes"));
    out.insert("group_name".into(), zd.rd.builder().to_string().into());
    out.insert("J".into(), one_based(&zd.j));
    out.insert("K".into(), one_based(&zd.k));
    out.insert("J0".into(), one_based(&zd.j0));
    if let Some(chi) = &zd.cochar {
        out.insert("cocharacter".into(), Value::from(chi.clone()));
        out.insert("cocharacter_class".into(), class_name(classify_cocharacter(&zd.rd, chi)).into());
    }

    if cmd.runs(Command::Hasse) {
        let (rep, obstruction) = match zd.s0_characters() {
            Ok(r) => (r, None),
            Err(ZipError::PicObstruction { torsion, report }) => (*report, Some(torsion)),
            Err(e) => return Err(ConfigError::Validation(e.to_string())),
        };
        if let Some(t) = obstruction {
            obstructed = true;
            warnings.push(format!(
                "PicObstruction: derived group of L0 is not simply connected (torsion {}); coker(zeta) may differ from X*(S0)",
                t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            ));
        }
        out.insert("zeta".into(), serde_json::to_value(&rep.zeta).expect("matrix serializes"));
        out.insert("det_zeta".into(), rep.det_zeta.to_string().into());
        out.insert("invariant_factors".into(), strings(&rep.invariant_factors));
        out.insert("s0_order".into(), rep.s0_order.to_string().into());
        out.insert("hasse_number".into(), rep.hasse_number.to_string().into());
        out.insert("pic_L0_trivial".into(), rep.pic_l0_trivial.into());
    }

    if cmd.runs(Command::Orbits) {
        let cap = weyl_cap.or(cfg.options.as_ref().and_then(|o| o.weyl_cap)).map(u128::from).unwrap_or(DEFAULT_CAP);
        match enumerate_weyl(&zd.rd, cap) {
            Ok(w) => {
                let census = zd.orbit_census(&w);
                let word = |ws: &[usize]| Value::from(ws.iter().map(|x| x + 1).collect::<Vec<_>>());
                let orbits: Vec<Value> = census
                    .orbits
                    .iter()
                    .map(|o| {
                        json!({
                            "word": word(&o.word),
                            "length": o.length,
                            "dimension": o.dimension,
                            "codimension": o.codimension,
                        })
                    })
                    .collect();
                let codim1: Vec<Value> = census
                    .codim1
                    .iter()
                    .map(|&(s, k)| json!({ "node": s + 1, "orbit": k, "word": word(&census.orbits[k].word) }))
                    .collect();
                out.insert("orbits".into(), orbits.into());
                out.insert("codim1".into(), codim1.into());
                out.insert("eta_length".into(), census.eta_length.into());
                out.insert("dim_G".into(), census.dim_g.into());
                out.insert("dim_P".into(), census.dim_p.into());
                out.insert("pic_rank".into(), zd.pic_rank().count.into());
            }
            Err(e) => {
                obstructed = true;
                warnings.push(format!("WeylGroupTooLarge: {e}"));
            }
        }
    }

    if cmd.runs(Command::Positivity) {
        out.insert("positivity".into(), Value::from(vec![positivity_entry(&zd)]));
    }

    if cmd.runs(Command::Picard) {
        out.insert("picard".into(), strings(&zd.rd.picard_torsion()));
        let l0 = zd.l0_torsion();
        if !l0.is_empty() && !cmd.runs(Command::Hasse) {
            warnings.push(format!(
                "PicObstruction: derived group of L0 is not simply connected (torsion {})",
                l0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            ));
        }
    }

    out.insert("warnings".into(), Value::from(warnings));
    Ok(Outcome { report: Value::Object(out), obstructed })
}

/// Positivity data for the canonical ample character `-sum omega_i`.
fn positivity_entry(zd: &ZipDatum) -> Value {
    let lambda: RationalCharacter = canonical_ample(&zd.rd, &zd.parabolic());
    let mut e = Map::new();
    e.insert("character".into(), rational_vec(&lambda.0));
    match hasse_divisor_coeffs(zd, &lambda) {
        Ok(rep) => {
            e.insert("zeta_inverse_image".into(), rational_vec(&rep.zeta_inverse_image.0));
            e.insert("borel_coefficients".into(), rational_vec(&rep.borel_coefficients));
            e.insert("negative_count".into(), rep.negative_count.into());
            e.insert("verdict".into(), rep.verdict.as_str().into());
            e.insert("antiample_certified".into(), rep.antiample_certified.into());
            if let Ok(cert) = antiample_check(zd, &lambda) {
                e.insert("frobenius_ample".into(), cert.frobenius_ample.into());
            }
        }
        Err(PositivityError::NotRationalCase) => {
            e.insert("verdict".into(), Verdict::NotApplicable.as_str().into());
        }
        Err(err) => {
            e.insert("verdict".into(), Verdict::NotApplicable.as_str().into());
            e.insert("error".into(), err.to_string().into());
        }
    }
    match weil_pullback_check(zd, &lambda) {
        Ok(pb) => {
            let list: Vec<Value> = pb
                .pullbacks
                .iter()
                .map(|(chi, amp)| json!({ "character": rational_vec(&chi.0), "amplitude": amp.as_str() }))
                .collect();
            e.insert("weil_pullbacks".into(), list.into());
            e.insert("weil_pullback_ample".into(), pb.all_ample().into());
        }
        Err(PositivityError::NotWeilRestriction) => {}
        Err(err) => {
            e.insert("weil_pullback_error".into(), err.to_string().into());
        }
    }
    Value::Object(e)
}

/// Pretty, key-sorted JSON with a trailing newline.
pub fn render_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Line-oriented rendering carrying the same values as [`render_json`].
pub fn render_text(report: &Value) -> String {
    let mut s = String::new();
    let Value::Object(map) = report else { return scalar(report) };
    for (k, v) in map {
        match v {
            Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
                let _ = writeln!(s, "{k}:");
                for x in xs {
                    let _ = writeln!(s, "  {}", scalar(x));
                }
            }
            _ => {
                let _ = writeln!(s, "{k}: {}", scalar(v));
            }
        }
    }
    s
}
