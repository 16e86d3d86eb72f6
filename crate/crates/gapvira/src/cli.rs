//! Command-line front end: element parsing, computation dispatch,
//! verification suites, JSON reports.
//!
//! Every invocation prints exactly one JSON document:
//!
//! - success: `{verb, inputs, result}`, exit 0,
//! - rejected input or failed computation: `{error, detail}`, exit 1,
//! - `verify` with failing checks: the full report, exit 2.
//!
//! Documents are deterministic: maps keep a fixed key order (grade maps
//! ascend numerically), rationals print as `a/b` strings, cyclotomic
//! scalars as arrays of such strings, and randomized suites draw from
//! the seed in `GAPVIRA_SEED`.  `--pretty` switches to indented JSON
//! with the same content; `--config` names a TOML file supplying
//! default `p`, `l0`, and `d` for flags left unset.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num::BigRational;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraId, Family, Gen};
use crate::constructions::{
    check_whittaker_iso, induced_q, induced_r, pullback_module, r_key, validate_qspec,
    validate_whittaker, whittaker_universal, whittaker_vector_check, QSpec, RSpec,
    VirasoroTables, WhittakerType,
};
use crate::error::{Error, Result};
use crate::formal::{all_relations, verify_commutator_identity, window_labels};
use crate::modules::{
    extract_annihilation_profile, graded_dim_enumeration, graded_dim_genfunction, partitions,
    reduction_step, singular_vectors, vacuum_np, verma, BaseKey, InducedModule, ModuleVector,
    Snapshot,
};
use crate::parse::{
    parse_element, parse_phi, parse_scalar, parse_word, ratio_from_str, ratio_to_string,
    scalar_from_strings, scalar_to_strings, uea_to_json, vector_from_json, vector_to_json,
    VectorJson,
};
use crate::pbw::{normal_form, PbwMonomial};
use crate::rng::{seed_from_env, seeded_rng};
use crate::scalar::Cyclo;
use crate::suites::{run_suite, SuiteOptions, SUITE_NAMES};

// ---------------------------------------------------------------------
// argument surface
// ---------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "gapvira",
    version,
    about = "Exact calculator for the gap-p Virasoro algebra, its companion algebra, and their modules"
)]
struct Cli {
    /// Indent the JSON document for reading.
    #[arg(long, global = true)]
    pretty: bool,

    /// TOML file supplying default p, l0, d.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Lie bracket of two elements, e.g. `bracket --p 3 "L[3]" "L[-3]"`.
    Bracket {
        #[arg(long)]
        p: Option<u32>,
        /// Algebra family: "gap" or "np".
        #[arg(long, default_value = "gap")]
        family: String,
        /// Left element, in the text grammar.
        x: String,
        /// Right element, in the text grammar.
        y: String,
    },

    /// PBW normal form of a product of generators, e.g. `normal-form --p 2 "L[3]*L[-3]"`.
    #[command(name = "normal-form")]
    NormalForm {
        #[arg(long)]
        p: Option<u32>,
        /// Algebra family: "gap" or "np".
        #[arg(long, default_value = "gap")]
        family: String,
        /// Generator word, '*'-separated with optional '^' powers.
        word: String,
    },

    /// Apply an element to a module vector.
    Act {
        #[arg(long)]
        p: Option<u32>,
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        vector: VectorArgs,
        /// The acting element, in the text grammar.
        x: String,
    },

    /// Graded dimensions of the highest-weight module up to an integer grade.
    #[command(name = "graded-dim")]
    GradedDim {
        #[arg(long)]
        p: Option<u32>,
        /// Algebra family: "gap" or "np".
        #[arg(long, default_value = "gap")]
        family: String,
        /// Largest integer grade to report.
        #[arg(long)]
        upto: u64,
    },

    /// Singular vectors of a Verma module at one grade.
    Singular {
        #[arg(long)]
        p: Option<u32>,
        /// Level l0 (rational).
        #[arg(long)]
        l0: Option<String>,
        /// Highest weight h (rational).
        #[arg(long)]
        h: String,
        /// Grade to search, a positive multiple of 1/p.
        #[arg(long)]
        grade: String,
    },

    /// Reduce an induced-module vector to the base module, reporting the
    /// operator trace.
    Reduce {
        #[arg(long)]
        p: Option<u32>,
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        vector: VectorArgs,
    },

    /// Run verification suites; exits 2 when any check fails.
    Verify {
        /// Suite name or "all".
        suite: String,
        #[arg(long)]
        p: Option<u32>,
        /// Index window for exhaustive scans.
        #[arg(long)]
        window: Option<i64>,
        /// Level l0 (rational) where a suite samples levels.
        #[arg(long)]
        l0: Option<String>,
    },

    /// Validate a Whittaker character, certify its cyclic vector, and
    /// probe the matching polynomial realization.
    #[command(name = "whittaker-check")]
    WhittakerCheck {
        #[arg(long)]
        p: Option<u32>,
        /// Character values, e.g. "L[1]=1,L[2]=0,L[4]=3".
        #[arg(long)]
        phi: String,
        /// Central value of the character (rational, default 0).
        #[arg(long)]
        c0: Option<String>,
        /// Annihilation window and search depth for the probe.
        #[arg(long, default_value_t = 3)]
        window: i64,
    },

    /// Operations on polynomial-realization specs.
    Qmod {
        #[command(subcommand)]
        cmd: QmodCmd,
    },

    /// Recover annihilation thresholds and the vectors they cut out from
    /// a truncated module.
    #[command(name = "extract-n")]
    ExtractN {
        #[arg(long)]
        p: Option<u32>,
        /// Module family: "verma" or "ind-r".
        #[arg(long)]
        module: String,
        /// JSON spec file for ind-r.
        #[arg(long, value_name = "PATH")]
        spec: Option<PathBuf>,
        /// Level l0 (rational) for verma.
        #[arg(long)]
        l0: Option<String>,
        /// Highest weight h (rational) for verma.
        #[arg(long)]
        h: Option<String>,
        /// Truncation depth of the snapshot.
        #[arg(long, default_value_t = 3)]
        depth: u64,
        /// Generator-index bound for the annihilation conditions
        /// (default 4p).
        #[arg(long)]
        bound: Option<i64>,
        /// Smallest threshold tried per residue.
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        rmin: i64,
        /// Largest threshold tried per residue.
        #[arg(long, default_value_t = 2)]
        rmax: i64,
    },
}

#[derive(Debug, Subcommand)]
enum QmodCmd {
    /// Check the closure conditions of a polynomial-realization spec.
    Validate {
        /// JSON spec file.
        #[arg(long, value_name = "PATH")]
        spec: PathBuf,
        #[arg(long)]
        p: Option<u32>,
        /// Level l0 (rational) when the file leaves it out.
        #[arg(long)]
        l0: Option<String>,
    },
}

/// Flags that pick and parameterize a module.
#[derive(Debug, Args)]
struct ModuleArgs {
    /// Module family: verma, ind-r, ind-q, whittaker, np-vacuum, or
    /// pullback-trivial.
    #[arg(long)]
    module: String,

    /// JSON spec file for ind-r, ind-q, or whittaker.
    #[arg(long, value_name = "PATH")]
    spec: Option<PathBuf>,

    /// Level l0 (rational) for verma and np-vacuum, and the fallback
    /// when a spec file leaves it out.
    #[arg(long)]
    l0: Option<String>,

    /// Highest weight h (rational) for verma.
    #[arg(long)]
    h: Option<String>,

    /// Whittaker character, e.g. "L[1]=1,L[2]=0,L[4]=3".
    #[arg(long)]
    phi: Option<String>,

    /// Central value of the Whittaker character (rational, default 0).
    #[arg(long)]
    c0: Option<String>,
}

/// Flags that pick the target vector of a module verb.
#[derive(Debug, Args)]
struct VectorArgs {
    /// Vector as JSON: {"terms":[{"iexp":{...},"jexp":{...},"key":"1","coeff":["1"]}]}.
    #[arg(long)]
    vector: Option<String>,

    /// Path to a JSON file holding the vector.
    #[arg(long, value_name = "PATH")]
    vector_file: Option<PathBuf>,

    /// Vector as a generator word applied to the cyclic vector.
    #[arg(long)]
    word: Option<String>,
}

// ---------------------------------------------------------------------
// config file and common resolution
// ---------------------------------------------------------------------

/// Defaults read from the optional TOML config.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    p: Option<u32>,
    l0: Option<String>,
    d: Option<Vec<i64>>,
}

fn load_config(path: Option<&Path>) -> Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| Error::invalid(format!("bad config {}: {e}", path.display())))
}

fn need_p(flag: Option<u32>, cfg: &FileConfig) -> Result<u32> {
    flag.or(cfg.p)
        .ok_or_else(|| Error::invalid("p is required (pass --p or set it in the config file)"))
}

fn opt_l0(flag: Option<&str>, cfg: &FileConfig) -> Result<Option<BigRational>> {
    match flag.or(cfg.l0.as_deref()) {
        Some(text) => Ok(Some(ratio_from_str(text)?)),
        None => Ok(None),
    }
}

fn need_l0(flag: Option<&str>, cfg: &FileConfig) -> Result<BigRational> {
    opt_l0(flag, cfg)?
        .ok_or_else(|| Error::invalid("l0 is required (pass --l0 or set it in the config file)"))
}

fn family_of(name: &str) -> Result<Family> {
    match name {
        "gap" => Ok(Family::Gap),
        "np" => Ok(Family::Np),
        other => Err(Error::invalid(format!(
            "unknown family \"{other}\" (expected \"gap\" or \"np\")"
        ))),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::invalid(format!("bad JSON in {}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("plain data serializes")
}

// ---------------------------------------------------------------------
// spec files
// ---------------------------------------------------------------------

/// A scalar in a spec file: an integer, a string in the scalar grammar,
/// or an array of rationals in the cyclotomic basis.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ScalarJson {
    Int(i64),
    Text(String),
    Coeffs(Vec<String>),
}

fn scalar_from_json(p: u32, s: &ScalarJson) -> Result<Cyclo> {
    match s {
        ScalarJson::Int(n) => Ok(Cyclo::from_int(p, *n)),
        ScalarJson::Text(t) => parse_scalar(t, p),
        ScalarJson::Coeffs(parts) => scalar_from_strings(p, parts),
    }
}

/// On-disk form of a boundary-functional spec: `d` over residues
/// 1..p-1, `theta` on the residues with d_i <= 0, `eta` on the rest.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RSpecJson {
    p: Option<u32>,
    d: Option<Vec<i64>>,
    theta: BTreeMap<String, ScalarJson>,
    #[serde(default)]
    eta: BTreeMap<String, ScalarJson>,
    l0: Option<String>,
}

/// On-disk form of a polynomial-realization spec: cutoff `k`, tuning
/// vector `d`, evaluation sets `s` (S_0,...,S_{p-1}), constants `theta`
/// keyed "i,j".
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QSpecJson {
    p: Option<u32>,
    k: i64,
    d: Option<Vec<i64>>,
    s: Vec<Vec<i64>>,
    theta: BTreeMap<String, ScalarJson>,
    l0: Option<String>,
}

/// On-disk form of a Whittaker character: `phi` keyed by positive mode
/// index, central value `c0`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WhittakerJson {
    p: Option<u32>,
    phi: BTreeMap<String, ScalarJson>,
    c0: Option<String>,
}

fn spec_p(file_p: Option<u32>, flag_p: Option<u32>, cfg: &FileConfig) -> Result<u32> {
    match (file_p, flag_p.or(cfg.p)) {
        (Some(a), Some(b)) if a != b => Err(Error::invalid(format!(
            "the spec file sets p={a} but p={b} was supplied"
        ))),
        (Some(a), _) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(Error::invalid("the spec file gives no p and none was supplied")),
    }
}

fn spec_d(file_d: Option<&[i64]>, cfg: &FileConfig) -> Result<Vec<i64>> {
    file_d
        .map(<[i64]>::to_vec)
        .or_else(|| cfg.d.clone())
        .ok_or_else(|| Error::invalid("the spec file gives no d and the config has none"))
}

fn spec_l0(file_l0: Option<&str>, flag_l0: Option<&str>, cfg: &FileConfig) -> Result<BigRational> {
    match file_l0 {
        Some(text) => ratio_from_str(text),
        None => need_l0(flag_l0, cfg),
    }
}

fn rspec_from_json(
    j: &RSpecJson,
    flag_p: Option<u32>,
    flag_l0: Option<&str>,
    cfg: &FileConfig,
) -> Result<RSpec> {
    let p = spec_p(j.p, flag_p, cfg)?;
    let d = spec_d(j.d.as_deref(), cfg)?;
    let l0 = spec_l0(j.l0.as_deref(), flag_l0, cfg)?;
    let residue_map = |entries: &BTreeMap<String, ScalarJson>| -> Result<BTreeMap<u32, Cyclo>> {
        entries
            .iter()
            .map(|(key, val)| {
                let i: u32 = key.trim().parse().map_err(|_| {
                    Error::invalid(format!("residue key \"{key}\" must be an integer"))
                })?;
                Ok((i, scalar_from_json(p, val)?))
            })
            .collect()
    };
    RSpec::new(p, d, residue_map(&j.theta)?, residue_map(&j.eta)?, l0)
}

fn qspec_from_json(
    j: &QSpecJson,
    flag_p: Option<u32>,
    flag_l0: Option<&str>,
    cfg: &FileConfig,
) -> Result<QSpec> {
    let p = spec_p(j.p, flag_p, cfg)?;
    let d = spec_d(j.d.as_deref(), cfg)?;
    let l0 = spec_l0(j.l0.as_deref(), flag_l0, cfg)?;
    let s: Vec<BTreeSet<i64>> = j.s.iter().map(|set| set.iter().copied().collect()).collect();
    let theta = j
        .theta
        .iter()
        .map(|(key, val)| {
            let (i, jj) = key.split_once(',').ok_or_else(|| {
                Error::invalid(format!("theta key \"{key}\" must look like \"i,j\""))
            })?;
            let i: u32 = i.trim().parse().map_err(|_| {
                Error::invalid(format!("theta key \"{key}\" has a bad residue"))
            })?;
            let jj: i64 = jj.trim().parse().map_err(|_| {
                Error::invalid(format!("theta key \"{key}\" has a bad position"))
            })?;
            Ok(((i, jj), scalar_from_json(p, val)?))
        })
        .collect::<Result<BTreeMap<(u32, i64), Cyclo>>>()?;
    QSpec::new(p, j.k, d, s, theta, l0)
}

fn whittaker_from_json(j: &WhittakerJson, flag_p: Option<u32>, cfg: &FileConfig) -> Result<WhittakerType> {
    let p = spec_p(j.p, flag_p, cfg)?;
    let values = j
        .phi
        .iter()
        .map(|(key, val)| {
            let m: i64 = key.trim().parse().map_err(|_| {
                Error::invalid(format!("phi key \"{key}\" must be a mode index"))
            })?;
            Ok((m, scalar_from_json(p, val)?))
        })
        .collect::<Result<BTreeMap<i64, Cyclo>>>()?;
    let c0 = match &j.c0 {
        Some(text) => ratio_from_str(text)?,
        None => BigRational::from_integer(0.into()),
    };
    WhittakerType::new(p, values, c0)
}

// ---------------------------------------------------------------------
// module and vector resolution
// ---------------------------------------------------------------------

fn build_module(
    margs: &ModuleArgs,
    flag_p: Option<u32>,
    cfg: &FileConfig,
) -> Result<(InducedModule, Vec<(&'static str, Value)>)> {
    let mut echo: Vec<(&'static str, Value)> = vec![("module", json!(margs.module))];
    let spec_path = || -> Result<&PathBuf> {
        margs.spec.as_ref().ok_or_else(|| {
            Error::invalid(format!("--module {} needs --spec PATH", margs.module))
        })
    };
    let module = match margs.module.as_str() {
        "verma" => {
            let p = need_p(flag_p, cfg)?;
            let l0 = need_l0(margs.l0.as_deref(), cfg)?;
            let h = margs
                .h
                .as_deref()
                .ok_or_else(|| Error::invalid("--module verma needs --h"))
                .and_then(ratio_from_str)?;
            echo.push(("l0", json!(ratio_to_string(&l0))));
            echo.push(("h", json!(ratio_to_string(&h))));
            verma(p, l0, h)?
        }
        "np-vacuum" => {
            let p = need_p(flag_p, cfg)?;
            let l0 = need_l0(margs.l0.as_deref(), cfg)?;
            echo.push(("l0", json!(ratio_to_string(&l0))));
            vacuum_np(p, l0)?
        }
        "ind-r" => {
            let path = spec_path()?;
            let j: RSpecJson = read_json(path)?;
            echo.push(("spec", json!(path.display().to_string())));
            induced_r(&rspec_from_json(&j, flag_p, margs.l0.as_deref(), cfg)?)?
        }
        "ind-q" => {
            let path = spec_path()?;
            let j: QSpecJson = read_json(path)?;
            echo.push(("spec", json!(path.display().to_string())));
            induced_q(&qspec_from_json(&j, flag_p, margs.l0.as_deref(), cfg)?)?
        }
        "whittaker" => {
            let phi = match (&margs.spec, &margs.phi) {
                (Some(path), None) => {
                    let j: WhittakerJson = read_json(path)?;
                    echo.push(("spec", json!(path.display().to_string())));
                    whittaker_from_json(&j, flag_p, cfg)?
                }
                (None, Some(text)) => {
                    let p = need_p(flag_p, cfg)?;
                    let values = parse_phi(text, p)?;
                    let c0 = match margs.c0.as_deref() {
                        Some(t) => ratio_from_str(t)?,
                        None => BigRational::from_integer(0.into()),
                    };
                    echo.push(("phi", json!(text)));
                    echo.push(("c0", json!(ratio_to_string(&c0))));
                    WhittakerType::new(p, values, c0)?
                }
                _ => {
                    return Err(Error::invalid(
                        "--module whittaker needs exactly one of --spec or --phi",
                    ))
                }
            };
            whittaker_universal(&phi)?
        }
        "pullback-trivial" => {
            let p = need_p(flag_p, cfg)?;
            pullback_module(VirasoroTables::trivial(p))?
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown module family \"{other}\" (expected verma, ind-r, ind-q, whittaker, \
                 np-vacuum, or pullback-trivial)"
            )))
        }
    };
    Ok((module, echo))
}

fn resolve_vector(module: &InducedModule, vargs: &VectorArgs) -> Result<ModuleVector> {
    let given = [
        vargs.vector.is_some(),
        vargs.vector_file.is_some(),
        vargs.word.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if given > 1 {
        return Err(Error::invalid(
            "give at most one of --vector, --vector-file, --word",
        ));
    }
    let from_text = |text: &str| -> Result<ModuleVector> {
        if module.family() != Family::Gap {
            return Err(Error::invalid(
                "vector JSON applies to gap-side modules; use --word here",
            ));
        }
        let vj: VectorJson = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("bad vector JSON: {e}")))?;
        vector_from_json(module.p(), &vj)
    };
    if let Some(text) = &vargs.vector {
        return from_text(text);
    }
    if let Some(path) = &vargs.vector_file {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        return from_text(&text);
    }
    if let Some(wtext) = &vargs.word {
        let word = parse_word(wtext, module.alg())?;
        return module.apply_word(&word, &module.vacuum());
    }
    Ok(module.vacuum())
}

fn vector_value(v: &ModuleVector) -> Value {
    json!({
        "display": v.to_string(),
        "terms": to_value(&vector_to_json(v).terms),
    })
}

// ---------------------------------------------------------------------
// verb handlers
// ---------------------------------------------------------------------

struct Outcome {
    verb: &'static str,
    inputs: Value,
    result: Value,
    exit: u8,
}

fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

fn execute(cli: Cli) -> Result<Outcome> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.verb {
        Verb::Bracket { p, family, x, y } => {
            let p = need_p(p, &cfg)?;
            let alg = AlgebraId::new(p, family_of(&family)?)?;
            let ex = parse_element(&x, alg)?;
            let ey = parse_element(&y, alg)?;
            let z = ex.bracket(&ey)?;
            Ok(Outcome {
                verb: "bracket",
                inputs: json!({"p": p, "family": family, "x": x, "y": y}),
                result: json!(z.to_string()),
                exit: 0,
            })
        }

        Verb::NormalForm { p, family, word } => {
            let p = need_p(p, &cfg)?;
            let alg = AlgebraId::new(p, family_of(&family)?)?;
            let letters = parse_word(&word, alg)?;
            let nf = normal_form(alg, &letters)?;
            Ok(Outcome {
                verb: "normal-form",
                inputs: json!({"p": p, "family": family, "word": word}),
                result: json!({
                    "display": nf.to_string(),
                    "terms": to_value(&uea_to_json(&nf).terms),
                }),
                exit: 0,
            })
        }

        Verb::Act { p, module, vector, x } => {
            let (m, mecho) = build_module(&module, p, &cfg)?;
            let v = resolve_vector(&m, &vector)?;
            let ex = parse_element(&x, m.alg())?;
            let out = m.act(&ex, &v)?;
            let mut inputs = vec![("p", json!(m.p()))];
            inputs.extend(mecho);
            inputs.push(("x", json!(x)));
            inputs.push(("vector", json!(v.to_string())));
            Ok(Outcome {
                verb: "act",
                inputs: object(inputs),
                result: vector_value(&out),
                exit: 0,
            })
        }

        Verb::GradedDim { p, family, upto } => {
            let p = need_p(p, &cfg)?;
            let alg = AlgebraId::new(p, family_of(&family)?)?;
            let by_enum = graded_dim_enumeration(alg, upto);
            let by_gf = graded_dim_genfunction(alg, upto);
            if by_enum != by_gf {
                return Err(Error::internal(
                    "the enumeration and generating-function backends disagree",
                ));
            }
            let mut map = Map::new();
            for (grade, dim) in &by_enum {
                map.insert(ratio_to_string(grade), json!(dim));
            }
            Ok(Outcome {
                verb: "graded-dim",
                inputs: json!({"p": p, "family": family, "upto": upto}),
                result: Value::Object(map),
                exit: 0,
            })
        }

        Verb::Singular { p, l0, h, grade } => {
            let p = need_p(p, &cfg)?;
            let l0 = need_l0(l0.as_deref(), &cfg)?;
            let h = ratio_from_str(&h)?;
            let grade = ratio_from_str(&grade)?;
            let vs = singular_vectors(p, &l0, &h, &grade)?;
            Ok(Outcome {
                verb: "singular",
                inputs: json!({
                    "p": p,
                    "l0": ratio_to_string(&l0),
                    "h": ratio_to_string(&h),
                    "grade": ratio_to_string(&grade),
                }),
                result: json!({
                    "space_dim": vs.len(),
                    "vectors": vs.iter().map(vector_value).collect::<Vec<_>>(),
                }),
                exit: 0,
            })
        }

        Verb::Reduce { p, module, vector } => {
            let (m, mecho) = build_module(&module, p, &cfg)?;
            let v = resolve_vector(&m, &vector)?;
            if v.is_zero() {
                return Err(Error::ZeroVector);
            }
            let mut cur = v.clone();
            let mut trace: Vec<String> = Vec::new();
            let mut inexact = 0usize;
            loop {
                if trace.len() > 100_000 {
                    return Err(Error::internal("reduction did not reach the base in budget"));
                }
                if cur.terms().all(|((mono, _), _)| mono.is_one()) {
                    break;
                }
                let step = reduction_step(&m, &cur)?;
                if !step.exact {
                    inexact += 1;
                }
                trace.push(step.op.to_string());
                cur = step.next;
            }
            let mut inputs = vec![("p", json!(m.p()))];
            inputs.extend(mecho);
            inputs.push(("vector", json!(v.to_string())));
            Ok(Outcome {
                verb: "reduce",
                inputs: object(inputs),
                result: json!({
                    "steps": trace.len(),
                    "exact_steps": trace.len() - inexact,
                    "trace": trace,
                    "base": vector_value(&cur),
                }),
                exit: 0,
            })
        }

        Verb::Verify { suite, p, window, l0 } => {
            let opts = SuiteOptions {
                p: p.or(cfg.p),
                window,
                l0: opt_l0(l0.as_deref(), &cfg)?,
            };
            let seed = seed_from_env();
            let mut rng = seeded_rng();
            let names: Vec<String> = if suite == "all" {
                SUITE_NAMES.iter().map(|s| s.to_string()).collect()
            } else {
                vec![suite.clone()]
            };
            let mut checks = Vec::new();
            for name in &names {
                checks.extend(run_suite(name, &opts, &mut rng)?);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            let checks_json: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "status": if c.passed { "pass" } else { "fail" },
                        "detail": c.detail,
                    })
                })
                .collect();
            let mut result = vec![
                ("total", json!(checks.len())),
                ("passed", json!(checks.len() - failed)),
                ("failed", json!(failed)),
                ("checks", Value::Array(checks_json)),
            ];
            if suite == "formal" {
                let p = opts.p.unwrap_or(3);
                let w = opts.window.unwrap_or(6);
                result.push(("relations", formal_relation_rows(p, w, opts.l0.as_ref())?));
            }
            Ok(Outcome {
                verb: "verify",
                inputs: json!({
                    "suite": suite,
                    "p": opts.p,
                    "window": opts.window,
                    "l0": opts.l0.as_ref().map(ratio_to_string),
                    "seed": seed,
                }),
                result: object(result),
                exit: if failed > 0 { 2 } else { 0 },
            })
        }

        Verb::WhittakerCheck { p, phi, c0, window } => {
            let p = need_p(p, &cfg)?;
            let values = parse_phi(&phi, p)?;
            let c0 = match c0.as_deref() {
                Some(t) => ratio_from_str(t)?,
                None => BigRational::from_integer(0.into()),
            };
            let wt = WhittakerType::new(p, values, c0.clone())?;
            let report = validate_whittaker(&wt)?;
            if !report.valid {
                return Err(Error::invalid(format!(
                    "character rejected: {}",
                    report.violation.unwrap_or_else(|| "invalid".to_string())
                )));
            }
            if window < 0 {
                return Err(Error::invalid("the window must be nonnegative"));
            }
            let m = whittaker_universal(&wt)?;
            let vc = whittaker_vector_check(&m, &wt, &m.vacuum(), window)?;
            let probe = match check_whittaker_iso(&wt, window as u64) {
                Ok(r) => json!({
                    "ran": true,
                    "q_valid": r.q_valid,
                    "phi_at_p": scalar_to_strings(&r.phi_at_p),
                    "snapshot_dim": r.snapshot_dim,
                    "found": r.found,
                    "notes": r.notes,
                }),
                Err(Error::Invalid(msg)) => json!({"ran": false, "skipped": msg}),
                Err(e) => return Err(e),
            };
            Ok(Outcome {
                verb: "whittaker-check",
                inputs: json!({
                    "p": p,
                    "phi": phi,
                    "c0": ratio_to_string(&c0),
                    "window": window,
                }),
                result: json!({
                    "character": {"valid": true},
                    "cyclic_vector": {"holds": vc.holds, "witness": vc.witness},
                    "iso_probe": probe,
                }),
                exit: 0,
            })
        }

        Verb::Qmod { cmd } => match cmd {
            QmodCmd::Validate { spec, p, l0 } => {
                let j: QSpecJson = read_json(&spec)?;
                let qs = qspec_from_json(&j, p, l0.as_deref(), &cfg)?;
                let verdict = validate_qspec(&qs);
                Ok(Outcome {
                    verb: "qmod",
                    inputs: json!({
                        "cmd": "validate",
                        "spec": spec.display().to_string(),
                    }),
                    result: json!({
                        "p": qs.p(),
                        "k": qs.k(),
                        "valid": verdict.valid,
                        "violation": verdict.violation,
                    }),
                    exit: 0,
                })
            }
        },

        Verb::ExtractN { p, module, spec, l0, h, depth, bound, rmin, rmax } => {
            let margs = ModuleArgs { module, spec, l0, h, phi: None, c0: None };
            let (m, mecho) = build_module(&margs, p, &cfg)?;
            let basis: Vec<(PbwMonomial, BaseKey)> = match margs.module.as_str() {
                "verma" => {
                    let mut out = Vec::new();
                    for n in 0..=depth {
                        for parts in partitions(n) {
                            // parts come out descending, so the letters
                            // already ascend by index
                            let letters: Vec<Gen> =
                                parts.iter().map(|&q| Gen::L(-(q as i64))).collect();
                            out.push((
                                PbwMonomial::from_parts(letters, BTreeMap::new()),
                                BaseKey::unit(),
                            ));
                        }
                    }
                    out
                }
                "ind-r" => (0..=depth)
                    .map(|n| (PbwMonomial::one(), r_key(n)))
                    .collect(),
                other => {
                    return Err(Error::invalid(format!(
                        "extract-n supports module families verma and ind-r, not \"{other}\""
                    )))
                }
            };
            let snapshot_dim = basis.len();
            let snap = Snapshot::new(&m, basis)?;
            let bound = bound.unwrap_or(4 * m.p() as i64);
            let report = extract_annihilation_profile(&snap, bound, rmin, rmax)?;
            let result = match &report.profile {
                Some(f) => json!({
                    "found": true,
                    "searched": report.searched,
                    "thresholds": f.thresholds,
                    "space_dim": f.basis.len(),
                    "vectors": f.basis.iter().map(vector_value).collect::<Vec<_>>(),
                    "minimal": f.minimal,
                    "boundary": f
                        .boundary
                        .iter()
                        .map(|(i, inj)| json!({"index": i, "injective": inj}))
                        .collect::<Vec<_>>(),
                }),
                None => json!({"found": false, "searched": report.searched}),
            };
            let mut inputs = vec![("p", json!(m.p()))];
            inputs.extend(mecho);
            inputs.push(("depth", json!(depth)));
            inputs.push(("snapshot_dim", json!(snapshot_dim)));
            inputs.push(("bound", json!(bound)));
            inputs.push(("rmin", json!(rmin)));
            inputs.push(("rmax", json!(rmax)));
            Ok(Outcome {
                verb: "extract-n",
                inputs: object(inputs),
                result,
                exit: 0,
            })
        }
    }
}

/// Per-(relation, mode pair) rows behind `verify formal`: status of the
/// commutator identity at each mode pair in the window, with centrals
/// substituted when a level is given and kept symbolic otherwise.
fn formal_relation_rows(p: u32, window: i64, l0: Option<&BigRational>) -> Result<Value> {
    let mut rows = Vec::new();
    for family in [Family::Gap, Family::Np] {
        for relation in all_relations(p, family) {
            for (la, lb) in window_labels(p, relation, window) {
                let check = verify_commutator_identity(p, relation, &la, &lb, l0)?;
                rows.push(json!({
                    "relation": relation.to_string(),
                    "mode_pair": [ratio_to_string(&la), ratio_to_string(&lb)],
                    "status": if check.holds { "pass" } else { "fail" },
                }));
            }
        }
    }
    Ok(Value::Array(rows))
}

// ---------------------------------------------------------------------
// entry points
// ---------------------------------------------------------------------

/// Where a rendered document goes.
#[derive(Debug, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    Stderr,
}

fn error_class(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Invalid(_) => "invalid",
        Error::OutsideDomain(_) => "domain",
        Error::AlgebraMismatch(_) => "algebra-mismatch",
        Error::ZeroVector => "zero-vector",
        Error::Internal(_) => "internal",
    }
}

fn render_doc(doc: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(doc).expect("documents serialize")
    } else {
        serde_json::to_string(doc).expect("documents serialize")
    }
}

/// Runs one invocation and renders its output without printing;
/// returns the text, where it belongs, and the exit code.
pub fn render<I, T>(args: I) -> (String, Sink, u8)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    (e.to_string(), Sink::Stdout, 0)
                }
                _ => (e.to_string(), Sink::Stderr, 1),
            };
        }
    };
    let pretty = cli.pretty;
    match execute(cli) {
        Ok(out) => {
            let doc = json!({
                "verb": out.verb,
                "inputs": out.inputs,
                "result": out.result,
            });
            (render_doc(&doc, pretty), Sink::Stdout, out.exit)
        }
        Err(e) => {
            let doc = json!({
                "error": error_class(&e),
                "detail": e.to_string(),
            });
            (render_doc(&doc, pretty), Sink::Stdout, 1)
        }
    }
}

/// Runs one invocation, printing the document; returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (text, sink, code) = render(args);
    match sink {
        Sink::Stdout => println!("{}", text.trim_end()),
        Sink::Stderr => eprintln!("{}", text.trim_end()),
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invoke(args: &[&str]) -> (Value, u8) {
        let full: Vec<&str> = std::iter::once("gapvira").chain(args.iter().copied()).collect();
        let (text, sink, code) = render(full);
        assert_eq!(sink, Sink::Stdout, "expected a JSON document, got: {text}");
        (serde_json::from_str(&text).expect("output is JSON"), code)
    }

    #[test]
    fn bracket_matches_the_structure_constants() {
        let (doc, code) = invoke(&["bracket", "--p", "3", "L[3]", "L[-3]"]);
        assert_eq!(code, 0);
        assert_eq!(doc["verb"], "bracket");
        assert_eq!(doc["result"], "-6*L[0]");
    }

    #[test]
    fn graded_dim_lists_grades_in_numeric_order() {
        let (doc, code) = invoke(&["graded-dim", "--p", "2", "--upto", "2"]);
        assert_eq!(code, 0);
        let map = doc["result"].as_object().unwrap();
        let keys: Vec<&String> = map.keys().collect();
        assert_eq!(keys, ["0", "1/2", "1", "3/2", "2"]);
        let dims: Vec<u64> = map.values().map(|v| v.as_u64().unwrap()).collect();
        assert_eq!(dims, [1, 1, 2, 3, 5]);
    }

    #[test]
    fn domain_errors_exit_one_with_error_document() {
        let (doc, code) = invoke(&["bracket", "--p", "3", "C[5]", "L[0]"]);
        assert_eq!(code, 1);
        assert!(doc["error"].is_string());
        assert!(doc["detail"].is_string());
    }

    #[test]
    fn usage_errors_go_to_stderr() {
        let (_, sink, code) = render(["gapvira", "bracket", "--p", "3", "L[1]"]);
        assert_eq!(sink, Sink::Stderr);
        assert_eq!(code, 1);
    }

    #[test]
    fn identical_invocations_render_identical_bytes() {
        let args = ["gapvira", "singular", "--p", "2", "--l0", "1/2", "--h", "3", "--grade", "1/2"];
        let (a, _, _) = render(args);
        let (b, _, _) = render(args);
        assert_eq!(a, b);
    }

    #[test]
    fn verify_passes_one_suite() {
        let (doc, code) = invoke(&["verify", "jacobi", "--p", "2", "--window", "3"]);
        assert_eq!(code, 0);
        assert_eq!(doc["result"]["failed"], 0);
        assert!(doc["result"]["total"].as_u64().unwrap() > 0);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        let (doc, code) = invoke(&["verify", "nonsense"]);
        assert_eq!(code, 1);
        assert_eq!(doc["error"], "invalid");
    }

    #[test]
    fn config_file_supplies_p() {
        let dir = std::env::temp_dir().join("gapvira-cli-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("config.toml");
        fs::write(&path, "p = 3\nl0 = \"7/2\"\n").unwrap();
        let (doc, code) = invoke(&[
            "bracket",
            "--config",
            path.to_str().unwrap(),
            "L[3]",
            "L[-3]",
        ]);
        assert_eq!(code, 0, "doc: {doc}");
        assert_eq!(doc["result"], "-6*L[0]");
    }
}
