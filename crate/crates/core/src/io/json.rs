//! Canonical JSON: keys sorted, elements referenced by label, tables as
//! (nested) arrays of labels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Const, Op};
use crate::congruence::ConLattice;
use crate::order::{Elem, Lattice, OrderError, Poset};
use crate::report::CheckReport;
use crate::twist::TwistAlgebra;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Serialize, Deserialize)]
struct AlgebraDoc {
    #[serde(default)]
    consts: BTreeMap<String, String>,
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
    #[serde(default)]
    ops: BTreeMap<String, TableDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum TableDoc {
    Unary(Vec<String>),
    Binary(Vec<Vec<String>>),
}

fn to_value<T: Serialize>(t: &T) -> Value {
    // Value's map is ordered, which is what makes the output canonical
    serde_json::to_value(t).expect("plain data serializes")
}

/// Every table and constant of `a`, derived ones included.
pub fn export_algebra(a: &Algebra) -> Value {
    let n = a.size();
    let l = |e: Elem| a.label(e).to_string();
    let ops = a
        .tables()
        .map(|(op, t)| {
            let doc = if op.arity() == 1 {
                TableDoc::Unary(t.iter().map(|&e| l(e)).collect())
            } else {
                TableDoc::Binary(
                    t.chunks(n)
                        .map(|row| row.iter().map(|&e| l(e)).collect())
                        .collect(),
                )
            };
            (op.name().to_string(), doc)
        })
        .collect();
    to_value(&AlgebraDoc {
        consts: a
            .constants()
            .map(|(c, e)| (c.name().to_string(), l(e)))
            .collect(),
        elements: a.names().to_vec(),
        leq: a.lattice().poset().leq_matrix(),
        ops,
    })
}

pub fn export_twist(tw: &TwistAlgebra) -> Value {
    let base = &tw.base;
    let pairs: Vec<[String; 2]> = tw
        .pairs
        .iter()
        .map(|&(a, b)| [base.label(a).to_string(), base.label(b).to_string()])
        .collect();
    let mut m = serde_json::Map::new();
    m.insert("algebra".into(), export_algebra(&tw.result));
    m.insert("base".into(), export_algebra(base));
    m.insert("pairs".into(), to_value(&pairs));
    Value::Object(m)
}

pub fn export_con_lattice(a: &Algebra, cl: &ConLattice) -> Value {
    let congruences: Vec<Value> = cl
        .congruences
        .iter()
        .map(|c| {
            let partition: Vec<Vec<String>> = c
                .partition()
                .into_iter()
                .map(|b| b.into_iter().map(|e| a.label(e).to_string()).collect())
                .collect();
            let mut m = serde_json::Map::new();
            m.insert("blocks".into(), to_value(&c.blocks));
            m.insert("partition".into(), to_value(&partition));
            Value::Object(m)
        })
        .collect();
    let mut m = serde_json::Map::new();
    m.insert("congruences".into(), Value::Array(congruences));
    m.insert("elements".into(), to_value(&a.names()));
    m.insert("leq".into(), to_value(&cl.leq));
    Value::Object(m)
}

pub fn export_report(r: &CheckReport) -> Value {
    to_value(r)
}

/// Pretty-printed, key-sorted text with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always print");
    s.push('\n');
    s
}

pub fn import_algebra(v: &Value) -> Result<Algebra, JsonError> {
    let doc: AlgebraDoc = serde_json::from_value(v.clone())?;
    let lattice = Lattice::from_poset(Poset::from_leq(doc.elements.clone(), &doc.leq)?)?;
    let n = lattice.size();
    let index = |l: &str| {
        lattice
            .poset()
            .index_of(l)
            .ok_or_else(|| JsonError::Shape(format!("unknown element label `{l}`")))
    };
    let mut ops = BTreeMap::new();
    for (name, table) in &doc.ops {
        let op: Op = name
            .parse()
            .map_err(|_| JsonError::Shape(format!("unknown operation `{name}`")))?;
        let flat: Vec<&String> = match table {
            TableDoc::Unary(t) if op.arity() == 1 => t.iter().collect(),
            TableDoc::Binary(rows) if op.arity() == 2 => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(JsonError::Shape(format!("table `{name}` is not {n}x{n}")));
                }
                rows.iter().flatten().collect()
            }
            _ => {
                return Err(JsonError::Shape(format!(
                    "table `{name}` has the wrong nesting for arity {}",
                    op.arity()
                )))
            }
        };
        let t = flat
            .into_iter()
            .map(|l| index(l))
            .collect::<Result<Vec<_>, _>>()?;
        ops.insert(op, t);
    }
    // derived tables supplied here are checked against their derivation
    build(lattice.clone(), &ops, &doc.consts, index)
}

fn build(
    lattice: Lattice,
    ops: &BTreeMap<Op, Vec<Elem>>,
    consts: &BTreeMap<String, String>,
    index: impl Fn(&str) -> Result<Elem, JsonError>,
) -> Result<Algebra, JsonError> {
    let mut cs = BTreeMap::new();
    for (name, l) in consts {
        let c: Const = name
            .parse()
            .map_err(|_| JsonError::Shape(format!("unknown constant `{name}`")))?;
        cs.insert(c, index(l)?);
    }
    Ok(Algebra::new(lattice, ops.clone(), cs)?)
}

/// Reads either an algebra document or a twist document (taking its
/// resulting algebra).
pub fn import_document(text: &str) -> Result<Algebra, JsonError> {
    let v: Value = serde_json::from_str(text)?;
    match v.get("algebra") {
        Some(inner) if v.get("pairs").is_some() => import_algebra(inner),
        _ => import_algebra(&v),
    }
}
