//! JSON encodings of matrices, groups, complexes, chain maps, posets,
//! supports and Grothendieck classes.
//!
//! Integers are written as bare JSON numbers of arbitrary length. Parse
//! errors carry a path such as `differentials[1][0][2]` locating the
//! offending value.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::complexes::{ChainMap, PerfectComplex};
use crate::error::{Error, Result};
use crate::ktheory::K0Class;
use crate::matrix::IntMatrix;
use crate::snf::SnfResult;
use crate::spectra::{FinPoset, Prime, SpectrumModel, ThickSupport};
use crate::zmodules::{from_presentation, FgAbGroup};

fn at(path: &str, msg: impl AsRef<str>) -> Error {
    Error::input(format!("{path}: {}", msg.as_ref()))
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    obj.as_object()
        .ok_or_else(|| at(path, "expected an object"))?
        .get(key)
        .ok_or_else(|| at(path, format!("missing field '{key}'")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| at(path, "expected an array"))
}

pub fn bigint_from_json(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| at(path, format!("{n} is not an integer"))),
        _ => Err(at(path, "expected an integer")),
    }
}

fn usize_from_json(v: &Value, path: &str) -> Result<usize> {
    let n = bigint_from_json(v, path)?;
    usize::try_from(n).map_err(|_| at(path, "expected a nonnegative integer"))
}

fn i64_from_json(v: &Value, path: &str) -> Result<i64> {
    let n = bigint_from_json(v, path)?;
    i64::try_from(n).map_err(|_| at(path, "integer out of range"))
}

pub fn bigint_to_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("decimal integers are JSON numbers"))
}

/// A matrix as a list of rows. The column count must be given when the row
/// list may be empty.
pub fn matrix_from_json(v: &Value, path: &str, cols: Option<usize>) -> Result<IntMatrix> {
    let rows = array(v, path)?;
    let width = match (cols, rows.first()) {
        (Some(c), _) => c,
        (None, Some(r)) => array(r, &format!("{path}[0]"))?.len(),
        (None, None) => 0,
    };
    let mut entries = Vec::with_capacity(rows.len() * width);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = array(row, &rp)?;
        if row.len() != width {
            return Err(at(&rp, format!("row has {} entries, expected {width}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            entries.push(bigint_from_json(e, &format!("{rp}[{j}]"))?);
        }
    }
    IntMatrix::from_entries(rows.len(), width, entries)
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(bigint_to_json).collect()))
            .collect(),
    )
}

pub fn snf_to_json(r: &SnfResult) -> Value {
    json!({
        "U": matrix_to_json(&r.u),
        "D": matrix_to_json(&r.d),
        "V": matrix_to_json(&r.v),
        "diagonal": r.diagonal().iter().map(bigint_to_json).collect::<Vec<_>>(),
    })
}

/// Accepts a bare list of rows or an object with a `matrix` field.
pub fn parse_matrix_file(v: &Value) -> Result<IntMatrix> {
    match v {
        Value::Object(_) => matrix_from_json(field(v, "matrix", "$")?, "matrix", None),
        _ => matrix_from_json(v, "$", None),
    }
}

/// `{ "generators": n, "relations": [[...], ...] }`
pub fn parse_module(v: &Value) -> Result<FgAbGroup> {
    let n = usize_from_json(field(v, "generators", "$")?, "generators")?;
    let rel = match v.get("relations") {
        Some(r) => matrix_from_json(r, "relations", Some(n))?,
        None => IntMatrix::zeros(0, n),
    };
    from_presentation(&rel, n)
}

pub fn module_to_presentation_json(m: &FgAbGroup) -> Value {
    let (rel, n) = m.canonical_presentation();
    json!({ "generators": n, "relations": matrix_to_json(&rel) })
}

/// `{ "rank": r, "invariant_factors": [d1, ...] }`
pub fn group_to_json(m: &FgAbGroup) -> Value {
    json!({
        "rank": m.free_rank(),
        "invariant_factors": m.invariant_factors().iter().map(bigint_to_json).collect::<Vec<_>>(),
    })
}

pub fn group_from_json(v: &Value) -> Result<FgAbGroup> {
    let rank = usize_from_json(field(v, "rank", "$")?, "rank")?;
    let factors = array(field(v, "invariant_factors", "$")?, "invariant_factors")?
        .iter()
        .enumerate()
        .map(|(i, d)| bigint_from_json(d, &format!("invariant_factors[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    FgAbGroup::from_invariants(rank, factors)
}

/// `{ "bottom_degree": b, "ranks": [...], "differentials": [[matrix], ...] }`
/// with differentials listed for degrees `b+1` upward.
pub fn parse_complex(v: &Value) -> Result<PerfectComplex> {
    parse_complex_at(v, "$")
}

fn parse_complex_at(v: &Value, path: &str) -> Result<PerfectComplex> {
    let sub = |k: &str| if path == "$" { k.to_string() } else { format!("{path}.{k}") };
    let bottom = i64_from_json(field(v, "bottom_degree", path)?, &sub("bottom_degree"))?;
    let ranks = array(field(v, "ranks", path)?, &sub("ranks"))?
        .iter()
        .enumerate()
        .map(|(i, r)| usize_from_json(r, &format!("{}[{i}]", sub("ranks"))))
        .collect::<Result<Vec<_>>>()?;
    let diffs_json = match v.get("differentials") {
        Some(d) => array(d, &sub("differentials"))?.clone(),
        None => Vec::new(),
    };
    let expected = ranks.len().saturating_sub(1);
    if diffs_json.len() != expected {
        return Err(at(
            &sub("differentials"),
            format!("{} degrees need {expected} differentials, got {}", ranks.len(), diffs_json.len()),
        ));
    }
    let mut diffs = Vec::with_capacity(expected);
    for (i, d) in diffs_json.iter().enumerate() {
        let p = format!("{}[{i}]", sub("differentials"));
        let m = matrix_from_json(d, &p, Some(ranks[i + 1]))?;
        if m.rows() != ranks[i] {
            return Err(at(&p, format!("expected {} rows, got {}", ranks[i], m.rows())));
        }
        diffs.push(m);
    }
    PerfectComplex::new(bottom, ranks, diffs).map_err(|e| match e {
        Error::Input(msg) => at(path, msg),
        other => other,
    })
}

pub fn complex_to_json(x: &PerfectComplex) -> Value {
    json!({
        "bottom_degree": x.bottom_degree(),
        "ranks": x.ranks(),
        "differentials": x.differentials().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

/// `{ "source": complex, "target": complex, "components": { "<degree>": matrix } }`
pub fn parse_chain_map(v: &Value) -> Result<ChainMap> {
    let source = parse_complex_at(field(v, "source", "$")?, "source")?;
    let target = parse_complex_at(field(v, "target", "$")?, "target")?;
    let mut comps = BTreeMap::new();
    if let Some(c) = v.get("components") {
        let obj = c.as_object().ok_or_else(|| at("components", "expected an object"))?;
        for (k, m) in obj {
            let p = format!("components.{k}");
            let n: i64 = k.parse().map_err(|_| at(&p, "degree keys must be integers"))?;
            comps.insert(n, matrix_from_json(m, &p, Some(source.rank_at(n)))?);
        }
    }
    ChainMap::new(source, target, comps)
}

pub fn chain_map_to_json(f: &ChainMap) -> Value {
    let comps: Map<String, Value> = f
        .components()
        .iter()
        .map(|(n, m)| (n.to_string(), matrix_to_json(m)))
        .collect();
    json!({
        "source": complex_to_json(f.source()),
        "target": complex_to_json(f.target()),
        "components": comps,
    })
}

/// `{ "points": [...], "covers": [[lower, upper], ...] }`
pub fn parse_poset(v: &Value) -> Result<FinPoset> {
    let points = array(field(v, "points", "$")?, "points")?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            p.as_str()
                .map(str::to_string)
                .ok_or_else(|| at(&format!("points[{i}]"), "expected a string"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut covers = Vec::new();
    if let Some(c) = v.get("covers") {
        for (i, pair) in array(c, "covers")?.iter().enumerate() {
            let p = format!("covers[{i}]");
            let pair = array(pair, &p)?;
            let name = |j: usize| {
                pair.get(j)
                    .and_then(Value::as_str)
                    .map(str::to_string)
                    .ok_or_else(|| at(&p, "expected a [lower, upper] pair of point names"))
            };
            if pair.len() != 2 {
                return Err(at(&p, "expected a [lower, upper] pair of point names"));
            }
            covers.push((name(0)?, name(1)?));
        }
    }
    FinPoset::from_covers(&points, &covers)
}

pub fn poset_to_json(p: &FinPoset) -> Value {
    let covers: Vec<Value> = p
        .covers()
        .into_iter()
        .map(|(a, b)| json!([p.names()[a], p.names()[b]]))
        .collect();
    json!({ "points": p.names(), "covers": covers })
}

/// Parses `full` or a comma-separated list: primes for the integer
/// spectrum, point names for a poset (where `all` is also accepted).
pub fn parse_support_arg(s: &str, model: &SpectrumModel) -> Result<ThickSupport> {
    let s = s.trim();
    match model {
        SpectrumModel::ZSpec => {
            if s.eq_ignore_ascii_case("full") {
                return Ok(ThickSupport::Full);
            }
            let primes = s
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(Prime::from_str)
                .collect::<Result<_>>()?;
            Ok(ThickSupport::Primes(primes))
        }
        SpectrumModel::FinPoset(p) => {
            if s.eq_ignore_ascii_case("all") || s.eq_ignore_ascii_case("full") {
                return Ok(ThickSupport::UpSet(p.all()));
            }
            let names: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
            p.support(p.set_of_names(&names)?)
        }
    }
}

pub fn support_to_json(s: &ThickSupport, model: &SpectrumModel) -> Value {
    match (s, model) {
        (ThickSupport::Full, _) => json!("full"),
        (ThickSupport::Primes(ps), _) => Value::Array(ps.iter().map(prime_to_json).collect()),
        (ThickSupport::UpSet(set), SpectrumModel::FinPoset(p)) => json!(p.describe(*set)),
        (ThickSupport::UpSet(set), SpectrumModel::ZSpec) => {
            json!(set.iter().collect::<Vec<_>>())
        }
    }
}

fn prime_to_json(p: &Prime) -> Value {
    Value::Number(Number::from_str(&p.to_string()).expect("primes are JSON numbers"))
}

/// `{ "support": "full" | [p1, ...], "coords": int | [int, ...] }`
pub fn class_to_json(c: &K0Class) -> Value {
    match c {
        K0Class::Full(r) => json!({ "support": "full", "coords": r }),
        K0Class::Primes { primes, coords } => json!({
            "support": primes.iter().map(prime_to_json).collect::<Vec<_>>(),
            "coords": coords,
        }),
    }
}

pub fn class_from_json(v: &Value) -> Result<K0Class> {
    let support = field(v, "support", "$")?;
    let coords = field(v, "coords", "$")?;
    if support.as_str() == Some("full") {
        return Ok(K0Class::Full(i64_from_json(coords, "coords")?));
    }
    let primes = array(support, "support")?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let n = bigint_from_json(p, &format!("support[{i}]"))?;
            Prime::from_str(&n.to_string())
        })
        .collect::<Result<Vec<_>>>()?;
    let coords = array(coords, "coords")?
        .iter()
        .enumerate()
        .map(|(i, c)| i64_from_json(c, &format!("coords[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != primes.len() {
        return Err(at("coords", "one coordinate per prime is required"));
    }
    Ok(K0Class::Primes { primes, coords })
}
