//! JSON encodings of matrices, states, subspaces, distributions and
//! relations.
//!
//! Matrices are `{"dim": d, "re": [[..]], "im": [[..]]}` (or `"rows"` and
//! `"cols"` for rectangular ones); a missing `"im"` means zero. Subspaces are
//! `{"projector": matrix}` or `{"span": [vector, ..]}`, where a vector is a
//! plain array of reals or `{"re": [..], "im": [..]}`.

use qlift_core::classical::{JointSubDistribution, Rational, Relation, SubDistribution, Weight};
use qlift_core::{Complex, ComplexMatrix, DensityOperator, HermitianOperator, Subspace};
use serde_json::{json, Map, Value};

use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn bad(ctx: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{ctx}: {msg}"))
}

/// Parses JSON text; syntax errors carry line and column.
pub fn parse_json(text: &str, ctx: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(ctx, format!("malformed JSON: {e}")))
}

fn object<'a>(v: &'a Value, ctx: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(ctx, "expected a JSON object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad(ctx, format!("missing field \"{key}\"")))
}

fn count(v: &Value, ctx: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| bad(ctx, "expected a nonnegative integer"))
}

fn number(v: &Value, ctx: &str) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| bad(ctx, format!("expected a number, got {v}")))?;
    if !x.is_finite() {
        return Err(bad(ctx, "entry is not finite"));
    }
    Ok(x)
}

fn numbers(v: &Value, ctx: &str) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| bad(ctx, "expected an array of numbers"))?;
    arr.iter().enumerate().map(|(k, x)| number(x, &format!("{ctx}[{k}]"))).collect()
}

fn rows_of(v: &Value, rows: usize, cols: usize, ctx: &str) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| bad(ctx, "expected an array of rows"))?;
    if arr.len() != rows {
        return Err(bad(ctx, format!("has {} rows, expected {rows}", arr.len())));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for (i, row) in arr.iter().enumerate() {
        let row = numbers(row, &format!("{ctx}[{i}]"))?;
        if row.len() != cols {
            return Err(bad(ctx, format!("row {i} has {} entries, expected {cols}", row.len())));
        }
        out.extend(row);
    }
    Ok(out)
}

pub fn matrix_from_json(v: &Value, ctx: &str) -> Result<ComplexMatrix> {
    let obj = object(v, ctx)?;
    let (rows, cols) = match obj.get("dim") {
        Some(d) => {
            let d = count(d, &format!("{ctx}.dim"))?;
            (d, d)
        }
        None => (
            count(field(obj, "rows", ctx)?, &format!("{ctx}.rows"))?,
            count(field(obj, "cols", ctx)?, &format!("{ctx}.cols"))?,
        ),
    };
    let re = rows_of(field(obj, "re", ctx)?, rows, cols, &format!("{ctx}.re"))?;
    let im = match obj.get("im") {
        Some(im) => rows_of(im, rows, cols, &format!("{ctx}.im"))?,
        None => vec![0.0; rows * cols],
    };
    ComplexMatrix::from_parts(rows, cols, &re, &im).map_err(|e| bad(ctx, e))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    // `+ 0.0` turns -0.0 into 0.0 and leaves every other value unchanged
    let grid = |f: fn(&Complex) -> f64| -> Vec<Vec<f64>> {
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| f(&m.get(i, j)) + 0.0).collect()).collect()
    };
    let mut obj = Map::new();
    if m.is_square() {
        obj.insert("dim".into(), json!(m.rows()));
    } else {
        obj.insert("rows".into(), json!(m.rows()));
        obj.insert("cols".into(), json!(m.cols()));
    }
    obj.insert("re".into(), json!(grid(|z| z.re)));
    obj.insert("im".into(), json!(grid(|z| z.im)));
    Value::Object(obj)
}

pub fn hermitian_from_json(v: &Value, ctx: &str) -> Result<HermitianOperator> {
    HermitianOperator::new(matrix_from_json(v, ctx)?).map_err(|e| bad(ctx, e))
}

/// A matrix object, optionally with `"trace_check": true` to demand trace one.
pub fn density_from_json(v: &Value, ctx: &str) -> Result<DensityOperator> {
    let op = hermitian_from_json(v, ctx)?;
    let check = object(v, ctx)?.get("trace_check").and_then(Value::as_bool).unwrap_or(false);
    let rho = if check { DensityOperator::normalized(op) } else { DensityOperator::new(op) };
    rho.map_err(|e| bad(ctx, e))
}

fn vector_from_json(v: &Value, ctx: &str) -> Result<Vec<Complex>> {
    match v {
        Value::Array(_) => Ok(numbers(v, ctx)?.into_iter().map(|x| Complex::new(x, 0.0)).collect()),
        Value::Object(obj) => {
            let re = numbers(field(obj, "re", ctx)?, &format!("{ctx}.re"))?;
            let im = match obj.get("im") {
                Some(im) => numbers(im, &format!("{ctx}.im"))?,
                None => vec![0.0; re.len()],
            };
            if im.len() != re.len() {
                return Err(bad(ctx, format!("re has {} entries, im has {}", re.len(), im.len())));
            }
            Ok(re.into_iter().zip(im).map(|(a, b)| Complex::new(a, b)).collect())
        }
        _ => Err(bad(ctx, "expected a vector")),
    }
}

pub fn subspace_from_json(v: &Value, ctx: &str) -> Result<Subspace> {
    let obj = object(v, ctx)?;
    if let Some(p) = obj.get("projector") {
        let p = hermitian_from_json(p, &format!("{ctx}.projector"))?;
        return Subspace::from_projector(p).map_err(|e| bad(ctx, e));
    }
    let span = field(obj, "span", ctx)?
        .as_array()
        .ok_or_else(|| bad(ctx, "\"span\" must be an array of vectors"))?;
    let vectors = span
        .iter()
        .enumerate()
        .map(|(k, x)| vector_from_json(x, &format!("{ctx}.span[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let dim = match obj.get("dim") {
        Some(d) => count(d, &format!("{ctx}.dim"))?,
        None => vectors.first().map(Vec::len).ok_or_else(|| bad(ctx, "empty span needs \"dim\""))?,
    };
    if let Some(k) = vectors.iter().position(|x| x.len() != dim) {
        return Err(bad(ctx, format!("span[{k}] has length {}, expected {dim}", vectors[k].len())));
    }
    Subspace::from_span(dim, &vectors).map_err(|e| bad(ctx, e))
}

pub fn subspace_to_json(x: &Subspace) -> Value {
    json!({ "rank": x.rank(), "projector": matrix_to_json(x.projector().matrix()) })
}

fn integers(v: &Value, ctx: &str) -> Result<Vec<i128>> {
    let arr = v.as_array().ok_or_else(|| bad(ctx, "expected an array of integers"))?;
    arr.iter()
        .enumerate()
        .map(|(k, x)| {
            x.as_i64()
                .map(i128::from)
                .ok_or_else(|| bad(&format!("{ctx}[{k}]"), format!("expected an integer, got {x}")))
        })
        .collect()
}

/// `{"num": [..], "den": [..]}` as exact fractions.
pub fn rational_distribution_from_json(v: &Value, ctx: &str) -> Result<SubDistribution<Rational>> {
    let obj = object(v, ctx)?;
    if !obj.contains_key("num") {
        return Err(bad(ctx, "exact mode needs \"num\" and \"den\" arrays"));
    }
    let num = integers(field(obj, "num", ctx)?, &format!("{ctx}.num"))?;
    let den = integers(field(obj, "den", ctx)?, &format!("{ctx}.den"))?;
    if num.len() != den.len() {
        return Err(bad(ctx, format!("num has {} entries, den has {}", num.len(), den.len())));
    }
    if let Some(k) = den.iter().position(|&d| d <= 0) {
        return Err(bad(ctx, format!("den[{k}] must be positive")));
    }
    let w = num.into_iter().zip(den).map(|(n, d)| Rational::new(n, d)).collect();
    SubDistribution::new(w).map_err(|e| bad(ctx, e))
}

/// `{"weights": [..]}`; fractions in `num`/`den` form are accepted too.
pub fn distribution_from_json(v: &Value, ctx: &str) -> Result<SubDistribution> {
    let obj = object(v, ctx)?;
    if obj.contains_key("num") {
        return Ok(rational_distribution_from_json(v, ctx)?.to_f64());
    }
    let w = numbers(field(obj, "weights", ctx)?, &format!("{ctx}.weights"))?;
    SubDistribution::new(w).map_err(|e| bad(ctx, e))
}

pub fn relation_from_json(v: &Value, ctx: &str) -> Result<Relation> {
    let obj = object(v, ctx)?;
    let m = count(field(obj, "m", ctx)?, &format!("{ctx}.m"))?;
    let n = count(field(obj, "n", ctx)?, &format!("{ctx}.n"))?;
    let arr = field(obj, "pairs", ctx)?
        .as_array()
        .ok_or_else(|| bad(ctx, "\"pairs\" must be an array"))?;
    let mut pairs = Vec::with_capacity(arr.len());
    for (k, p) in arr.iter().enumerate() {
        let pctx = format!("{ctx}.pairs[{k}]");
        match p.as_array().map(Vec::as_slice) {
            Some([i, j]) => pairs.push((count(i, &pctx)?, count(j, &pctx)?)),
            _ => return Err(bad(&pctx, "expected [i, j]")),
        }
    }
    Relation::new(m, n, &pairs).map_err(|e| bad(ctx, e))
}

pub fn joint_to_json(mu: &JointSubDistribution) -> Value {
    let rows: Vec<Vec<f64>> = (0..mu.rows()).map(|i| (0..mu.cols()).map(|j| mu.get(i, j)).collect()).collect();
    json!({ "m": mu.rows(), "n": mu.cols(), "weights": rows })
}

pub fn rational_joint_to_json(mu: &JointSubDistribution<Rational>) -> Value {
    // i128 only falls back to a string when it does not fit JSON integers
    let int = |x: i128| i64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::String(x.to_string()));
    let grid = |f: fn(&Rational) -> i128| -> Vec<Vec<Value>> {
        (0..mu.rows()).map(|i| (0..mu.cols()).map(|j| int(f(&mu.get(i, j)))).collect()).collect()
    };
    json!({
        "m": mu.rows(),
        "n": mu.cols(),
        "num": grid(|r| *r.numer()),
        "den": grid(|r| *r.denom()),
        "weights": joint_to_json(&mu.to_f64())["weights"],
    })
}

pub fn weight_sum<W: Weight>(mu: &SubDistribution<W>, set: &[usize]) -> f64 {
    mu.mass(set).to_f64()
}
