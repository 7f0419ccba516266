//! Canonical JSON documents for every object the command line consumes or
//! produces.
//!
//! The format is UTF-8 JSON. Scalars are canonical strings (`"4"`, `"-3/2"`,
//! residues for prime fields); the field is `"Q"` or `{"prime": p}`. Structure
//! tensors are sparse, `[[i, j, k, "c"], ...]` with zero entries omitted,
//! 0-based indices and entries sorted lexicographically; dendriform cocycle
//! maps carry a leading product slot, `[[slot, i, j, k, "c"], ...]` with slot
//! 1 or 2. Matrices are dense row-major lists of rows of scalar strings, with
//! `entry[r][c]` the coefficient of output basis `r` in the image of input
//! basis `c`. Extension documents embed their algebras inline. Emission is
//! canonical (sorted keys, sorted sparse entries, canonical scalars, trailing
//! newline), so `parse` then `emit` reproduces a canonical file byte for byte.

use serde_json::{json, Map, Value};

use crate::assoc::{Algebra, Bimodule};
use crate::dend::DendAlgebra;
use crate::dendext::{DendCocycle, DendExtension};
use crate::error::{Error, Result};
use crate::ext::{Extension, RBCocycle};
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Tensor3};
use crate::rb::{RBAlgebra, RBBimodule};

/// A parsed document: one of the object kinds understood by the tool.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Algebra(Algebra),
    RBAlgebra(RBAlgebra),
    RBBimodule {
        base: RBAlgebra,
        module: RBBimodule,
    },
    DendAlgebra(DendAlgebra),
    RBCocycle(RBCocycle),
    DendCocycle(DendCocycle),
    Extension(Extension),
    DendExtension(DendExtension),
    AutPair {
        field: Field,
        beta: Matrix,
        alpha: Matrix,
    },
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Algebra(_) => "algebra",
            Document::RBAlgebra(_) => "rb_algebra",
            Document::RBBimodule { .. } => "rb_bimodule",
            Document::DendAlgebra(_) => "dend_algebra",
            Document::RBCocycle(_) => "rb_cocycle",
            Document::DendCocycle(_) => "dend_cocycle",
            Document::Extension(_) => "extension",
            Document::DendExtension(_) => "dend_extension",
            Document::AutPair { .. } => "aut_pair",
        }
    }
}

fn field_value(f: &Field) -> Value {
    match f {
        Field::Rationals => json!("Q"),
        Field::Prime(p) => json!({ "prime": *p }),
    }
}

fn tensor_value(t: &Tensor3) -> Value {
    let (d0, d1, d2) = t.dims();
    let mut entries = Vec::new();
    for i in 0..d0 {
        for j in 0..d1 {
            for k in 0..d2 {
                let v = t.get(i, j, k);
                if !v.is_zero() {
                    entries.push(json!([i, j, k, v.to_string()]));
                }
            }
        }
    }
    Value::Array(entries)
}

fn slotted_tensor_value(ts: &[Tensor3; 2]) -> Value {
    let mut entries = Vec::new();
    for (s, t) in ts.iter().enumerate() {
        let (d0, d1, d2) = t.dims();
        for i in 0..d0 {
            for j in 0..d1 {
                for k in 0..d2 {
                    let v = t.get(i, j, k);
                    if !v.is_zero() {
                        entries.push(json!([s + 1, i, j, k, v.to_string()]));
                    }
                }
            }
        }
    }
    Value::Array(entries)
}

fn matrix_value(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| {
            Value::Array(
                (0..m.cols())
                    .map(|c| Value::String(m.get(r, c).to_string()))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

fn algebra_object(a: &Algebra) -> Value {
    json!({
        "kind": "algebra",
        "field": field_value(&a.field),
        "dim": a.dim,
        "mu": tensor_value(&a.mu),
    })
}

fn rb_algebra_object(a: &RBAlgebra) -> Value {
    json!({
        "kind": "rb_algebra",
        "field": field_value(&a.alg.field),
        "dim": a.dim(),
        "mu": tensor_value(&a.alg.mu),
        "r": matrix_value(&a.rb),
    })
}

fn dend_algebra_object(d: &DendAlgebra) -> Value {
    json!({
        "kind": "dend_algebra",
        "field": field_value(&d.field),
        "dim": d.dim,
        "prec": tensor_value(&d.prec),
        "succ": tensor_value(&d.succ),
    })
}

/// Serializes a document to its canonical textual form.
pub fn emit_document(doc: &Document) -> String {
    let value = match doc {
        Document::Algebra(a) => algebra_object(a),
        Document::RBAlgebra(a) => rb_algebra_object(a),
        Document::RBBimodule { base, module } => json!({
            "kind": "rb_bimodule",
            "base": rb_algebra_object(base),
            "dim": module.dim(),
            "l": tensor_value(&module.module.l),
            "r": tensor_value(&module.module.r),
            "s": matrix_value(&module.s),
        }),
        Document::DendAlgebra(d) => dend_algebra_object(d),
        Document::RBCocycle(c) => json!({
            "kind": "rb_cocycle",
            "a": rb_algebra_object(&c.a),
            "b": rb_algebra_object(&c.b),
            "chi": tensor_value(&c.chi),
            "psi_l": tensor_value(&c.psi_l),
            "psi_r": tensor_value(&c.psi_r),
            "Phi": matrix_value(&c.phi),
        }),
        Document::DendCocycle(c) => json!({
            "kind": "dend_cocycle",
            "a": dend_algebra_object(&c.a),
            "b": dend_algebra_object(&c.b),
            "chi": slotted_tensor_value(&c.chi),
            "psi_l": slotted_tensor_value(&c.psi_l),
            "psi_r": slotted_tensor_value(&c.psi_r),
        }),
        Document::Extension(x) => {
            let mut obj = Map::new();
            obj.insert("kind".into(), json!("extension"));
            obj.insert("a".into(), rb_algebra_object(&x.a));
            obj.insert("b".into(), rb_algebra_object(&x.b));
            obj.insert("e".into(), rb_algebra_object(&x.e));
            obj.insert("i".into(), matrix_value(&x.i));
            obj.insert("pi".into(), matrix_value(&x.pi));
            if let Some(s) = &x.section {
                obj.insert("section".into(), matrix_value(s));
            }
            Value::Object(obj)
        }
        Document::DendExtension(x) => {
            let mut obj = Map::new();
            obj.insert("kind".into(), json!("dend_extension"));
            obj.insert("a".into(), dend_algebra_object(&x.a));
            obj.insert("b".into(), dend_algebra_object(&x.b));
            obj.insert("e".into(), dend_algebra_object(&x.e));
            obj.insert("i".into(), matrix_value(&x.i));
            obj.insert("pi".into(), matrix_value(&x.pi));
            if let Some(s) = &x.section {
                obj.insert("section".into(), matrix_value(s));
            }
            Value::Object(obj)
        }
        Document::AutPair { field, beta, alpha } => json!({
            "kind": "aut_pair",
            "field": field_value(field),
            "beta": matrix_value(beta),
            "alpha": matrix_value(alpha),
        }),
    };
    let mut out = serde_json::to_string_pretty(&value).expect("serialization cannot fail");
    out.push('\n');
    out
}

/// Serializes a bare matrix (a section or an equivalence witness) as a
/// canonical JSON list of rows with a trailing newline.
pub fn emit_matrix(m: &Matrix) -> String {
    let mut out =
        serde_json::to_string_pretty(&matrix_value(m)).expect("serialization cannot fail");
    out.push('\n');
    out
}

/// Serializes a matrix on a single line (used for enumeration listings).
pub fn emit_matrix_compact(m: &Matrix) -> String {
    serde_json::to_string(&matrix_value(m)).expect("serialization cannot fail")
}

/// Parses a bare matrix file: a JSON list of rows of scalar strings.
pub fn parse_matrix_text(text: &str, field: &Field) -> Result<Matrix> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    parse_matrix(&value, field, "matrix")
}

fn obj<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{what} must be an object")))
}

fn get<'v>(m: &'v Map<String, Value>, key: &str, what: &str) -> Result<&'v Value> {
    m.get(key)
        .ok_or_else(|| Error::Parse(format!("{what} is missing key {key:?}")))
}

fn usize_of(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::Parse(format!("{what} must be a non-negative integer")))
}

fn parse_field(v: &Value) -> Result<Field> {
    match v {
        Value::String(s) if s == "Q" => Ok(Field::Rationals),
        Value::Object(m) => {
            let p = get(m, "prime", "field")?
                .as_u64()
                .ok_or_else(|| Error::Parse("prime must be an integer".into()))?;
            Field::prime(p)
        }
        _ => Err(Error::Parse(
            "field must be \"Q\" or {\"prime\": p}".into(),
        )),
    }
}

fn parse_scalar(v: &Value, field: &Field, what: &str) -> Result<Scalar> {
    let s = v
        .as_str()
        .ok_or_else(|| Error::Parse(format!("{what} entries must be scalar strings")))?;
    Scalar::parse(s, field)
}

fn parse_tensor(
    v: &Value,
    dims: (usize, usize, usize),
    field: &Field,
    what: &str,
) -> Result<Tensor3> {
    let entries = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be a list of entries")))?;
    let mut t = Tensor3::zero(dims.0, dims.1, dims.2, field);
    for e in entries {
        let tuple = e
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| Error::Parse(format!("{what} entries must be [i, j, k, \"c\"]")))?;
        let i = usize_of(&tuple[0], what)?;
        let j = usize_of(&tuple[1], what)?;
        let k = usize_of(&tuple[2], what)?;
        if i >= dims.0 || j >= dims.1 || k >= dims.2 {
            return Err(Error::IndexOutOfRange(format!(
                "{what} entry ({i}, {j}, {k}) outside {dims:?}"
            )));
        }
        if !t.get(i, j, k).is_zero() {
            return Err(Error::Validation(format!(
                "{what} repeats entry ({i}, {j}, {k})"
            )));
        }
        let c = parse_scalar(&tuple[3], field, what)?;
        if c.is_zero() {
            return Err(Error::Validation(format!(
                "{what} stores an explicit zero at ({i}, {j}, {k})"
            )));
        }
        t.set(i, j, k, c);
    }
    Ok(t)
}

fn parse_slotted_tensor(
    v: &Value,
    dims: (usize, usize, usize),
    field: &Field,
    what: &str,
) -> Result<[Tensor3; 2]> {
    let entries = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be a list of entries")))?;
    let mut ts = [
        Tensor3::zero(dims.0, dims.1, dims.2, field),
        Tensor3::zero(dims.0, dims.1, dims.2, field),
    ];
    for e in entries {
        let tuple = e
            .as_array()
            .filter(|a| a.len() == 5)
            .ok_or_else(|| {
                Error::Parse(format!("{what} entries must be [slot, i, j, k, \"c\"]"))
            })?;
        let slot = usize_of(&tuple[0], what)?;
        if slot < 1 || slot > 2 {
            return Err(Error::IndexOutOfRange(format!(
                "{what} slot {slot} must be 1 or 2"
            )));
        }
        let i = usize_of(&tuple[1], what)?;
        let j = usize_of(&tuple[2], what)?;
        let k = usize_of(&tuple[3], what)?;
        if i >= dims.0 || j >= dims.1 || k >= dims.2 {
            return Err(Error::IndexOutOfRange(format!(
                "{what} entry ({i}, {j}, {k}) outside {dims:?}"
            )));
        }
        let t = &mut ts[slot - 1];
        if !t.get(i, j, k).is_zero() {
            return Err(Error::Validation(format!(
                "{what} repeats entry ({slot}, {i}, {j}, {k})"
            )));
        }
        let c = parse_scalar(&tuple[4], field, what)?;
        if c.is_zero() {
            return Err(Error::Validation(format!(
                "{what} stores an explicit zero at ({slot}, {i}, {j}, {k})"
            )));
        }
        t.set(i, j, k, c);
    }
    Ok(ts)
}

fn parse_matrix(v: &Value, field: &Field, what: &str) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be a list of rows")))?;
    let mut data = Vec::with_capacity(rows.len());
    let mut width = None;
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("{what} rows must be lists")))?;
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(Error::Parse(format!("{what} rows have unequal lengths")))
            }
            _ => {}
        }
        let row: Result<Vec<Scalar>> = cells
            .iter()
            .map(|c| parse_scalar(c, field, what))
            .collect();
        data.push(row?);
    }
    if data.is_empty() {
        return Err(Error::Parse(format!("{what} must have at least one row")));
    }
    Matrix::from_rows(data, field)
}

fn parse_matrix_shaped(
    v: &Value,
    rows: usize,
    cols: usize,
    field: &Field,
    what: &str,
) -> Result<Matrix> {
    let m = parse_matrix(v, field, what)?;
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::ShapeMismatch(format!(
            "{what} must be {rows} x {cols}"
        )));
    }
    Ok(m)
}

fn parse_algebra(m: &Map<String, Value>) -> Result<Algebra> {
    let field = parse_field(get(m, "field", "algebra")?)?;
    let dim = usize_of(get(m, "dim", "algebra")?, "dim")?;
    let mu = parse_tensor(get(m, "mu", "algebra")?, (dim, dim, dim), &field, "mu")?;
    Algebra::new(field, dim, mu)
}

fn parse_rb_algebra(v: &Value) -> Result<RBAlgebra> {
    let m = obj(v, "rb_algebra")?;
    let field = parse_field(get(m, "field", "rb_algebra")?)?;
    let dim = usize_of(get(m, "dim", "rb_algebra")?, "dim")?;
    let mu = parse_tensor(get(m, "mu", "rb_algebra")?, (dim, dim, dim), &field, "mu")?;
    let r = parse_matrix_shaped(get(m, "r", "rb_algebra")?, dim, dim, &field, "r")?;
    RBAlgebra::new(Algebra::new(field, dim, mu)?, r)
}

fn parse_dend_algebra(v: &Value) -> Result<DendAlgebra> {
    let m = obj(v, "dend_algebra")?;
    let field = parse_field(get(m, "field", "dend_algebra")?)?;
    let dim = usize_of(get(m, "dim", "dend_algebra")?, "dim")?;
    let prec = parse_tensor(
        get(m, "prec", "dend_algebra")?,
        (dim, dim, dim),
        &field,
        "prec",
    )?;
    let succ = parse_tensor(
        get(m, "succ", "dend_algebra")?,
        (dim, dim, dim),
        &field,
        "succ",
    )?;
    DendAlgebra::new(field, dim, prec, succ)
}

/// Parses a document from its textual form.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let m = obj(&value, "document")?;
    let kind = get(m, "kind", "document")?
        .as_str()
        .ok_or_else(|| Error::Parse("kind must be a string".into()))?;
    match kind {
        "algebra" => Ok(Document::Algebra(parse_algebra(m)?)),
        "rb_algebra" => Ok(Document::RBAlgebra(parse_rb_algebra(&value)?)),
        "rb_bimodule" => {
            let base = parse_rb_algebra(get(m, "base", "rb_bimodule")?)?;
            let dim = usize_of(get(m, "dim", "rb_bimodule")?, "dim")?;
            let field = base.alg.field;
            let da = base.dim();
            let l = parse_tensor(get(m, "l", "rb_bimodule")?, (da, dim, dim), &field, "l")?;
            let r = parse_tensor(get(m, "r", "rb_bimodule")?, (dim, da, dim), &field, "r")?;
            let s = parse_matrix_shaped(get(m, "s", "rb_bimodule")?, dim, dim, &field, "s")?;
            let module = Bimodule::new(base.alg.clone(), dim, l, r)?;
            Ok(Document::RBBimodule {
                base,
                module: RBBimodule::new(module, s)?,
            })
        }
        "dend_algebra" => Ok(Document::DendAlgebra(parse_dend_algebra(&value)?)),
        "rb_cocycle" => {
            let a = parse_rb_algebra(get(m, "a", "rb_cocycle")?)?;
            let b = parse_rb_algebra(get(m, "b", "rb_cocycle")?)?;
            let field = a.alg.field;
            let (da, db) = (a.dim(), b.dim());
            let chi = parse_tensor(get(m, "chi", "rb_cocycle")?, (da, da, db), &field, "chi")?;
            let psi_l =
                parse_tensor(get(m, "psi_l", "rb_cocycle")?, (da, db, db), &field, "psi_l")?;
            let psi_r =
                parse_tensor(get(m, "psi_r", "rb_cocycle")?, (db, da, db), &field, "psi_r")?;
            let phi = parse_matrix_shaped(get(m, "Phi", "rb_cocycle")?, db, da, &field, "Phi")?;
            Ok(Document::RBCocycle(RBCocycle::new(
                a, b, chi, psi_l, psi_r, phi,
            )?))
        }
        "dend_cocycle" => {
            let a = parse_dend_algebra(get(m, "a", "dend_cocycle")?)?;
            let b = parse_dend_algebra(get(m, "b", "dend_cocycle")?)?;
            let field = a.field;
            let (da, db) = (a.dim, b.dim);
            let chi = parse_slotted_tensor(
                get(m, "chi", "dend_cocycle")?,
                (da, da, db),
                &field,
                "chi",
            )?;
            let psi_l = parse_slotted_tensor(
                get(m, "psi_l", "dend_cocycle")?,
                (da, db, db),
                &field,
                "psi_l",
            )?;
            let psi_r = parse_slotted_tensor(
                get(m, "psi_r", "dend_cocycle")?,
                (db, da, db),
                &field,
                "psi_r",
            )?;
            Ok(Document::DendCocycle(DendCocycle::new(
                a, b, chi, psi_l, psi_r,
            )?))
        }
        "extension" => {
            let a = parse_rb_algebra(get(m, "a", "extension")?)?;
            let b = parse_rb_algebra(get(m, "b", "extension")?)?;
            let e = parse_rb_algebra(get(m, "e", "extension")?)?;
            let field = a.alg.field;
            let (da, db, de) = (a.dim(), b.dim(), e.dim());
            let i = parse_matrix_shaped(get(m, "i", "extension")?, de, db, &field, "i")?;
            let pi = parse_matrix_shaped(get(m, "pi", "extension")?, da, de, &field, "pi")?;
            let section = match m.get("section") {
                Some(v) => Some(parse_matrix_shaped(v, de, da, &field, "section")?),
                None => None,
            };
            Ok(Document::Extension(Extension {
                a,
                b,
                e,
                i,
                pi,
                section,
            }))
        }
        "dend_extension" => {
            let a = parse_dend_algebra(get(m, "a", "dend_extension")?)?;
            let b = parse_dend_algebra(get(m, "b", "dend_extension")?)?;
            let e = parse_dend_algebra(get(m, "e", "dend_extension")?)?;
            let field = a.field;
            let (da, db, de) = (a.dim, b.dim, e.dim);
            let i = parse_matrix_shaped(get(m, "i", "dend_extension")?, de, db, &field, "i")?;
            let pi =
                parse_matrix_shaped(get(m, "pi", "dend_extension")?, da, de, &field, "pi")?;
            let section = match m.get("section") {
                Some(v) => Some(parse_matrix_shaped(v, de, da, &field, "section")?),
                None => None,
            };
            Ok(Document::DendExtension(DendExtension {
                a,
                b,
                e,
                i,
                pi,
                section,
            }))
        }
        "aut_pair" => {
            let field = parse_field(get(m, "field", "aut_pair")?)?;
            let beta = parse_matrix(get(m, "beta", "aut_pair")?, &field, "beta")?;
            let alpha = parse_matrix(get(m, "alpha", "aut_pair")?, &field, "alpha")?;
            Ok(Document::AutPair { field, beta, alpha })
        }
        other => Err(Error::Parse(format!("unknown document kind {other:?}"))),
    }
}
