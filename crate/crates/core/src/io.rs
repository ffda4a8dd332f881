//! JSON payloads.
//!
//! Every payload is a JSON object with a fixed key set; unknown or missing keys
//! are schema violations. Integers are written as JSON numbers of any size.
//! Canonical text has sorted keys and no whitespace, and a payload's content
//! hash is the SHA-256 of its canonical text.
//!
//! | type | keys |
//! |---|---|
//! | complex | `ranks`, `diffs` (`d_1..d_T`), `truncation` |
//! | chain map | `source`, `target`, `components` (degrees `0..=T`) |
//! | simplicial group | `ranks`, `faces` (per level, level 0 empty), `degens` (levels `0..T`), `truncation` |
//! | simplicial map | `source`, `target`, `components` |
//! | DGA | complex keys, `mult` (`"p,q"` → matrix), `unit` |
//! | simplicial ring | simplicial keys, `mult` (`"n"` → matrix), `unit` (level 0) |
//! | DG module | complex keys, `action` (`"p,q"` → matrix), `ring` (content hash) |
//! | I-graph | `objects`, `entries` (`"i,j"` → complex) |
//! | I-category | graph keys, `comp` (`"i,j,k"` → matrices per degree), `units` (`"i"` → vector) |
//!
//! Matrices are lists of rows; their shapes always follow from the ranks.

use std::collections::BTreeMap;
use std::str::FromStr;

use dkforge_linalg::{Int, IntMatrix};
use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{DGAlgebra, SimplicialRing};
use crate::chain::{tensor, ChainComplex, ChainMap, HomologyTable};
use crate::enriched::{ICategory, IGraph};
use crate::error::{Error, Result};
use crate::modules_over::DGModule;
use crate::simplicial::{SimplicialAbGroup, SimplicialMap};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

pub fn canonical(v: &Value) -> String {
    // serde_json's map is ordered by key, and `to_string` emits no whitespace
    serde_json::to_string(v).expect("values always serialize")
}

pub fn content_hash(v: &Value) -> String {
    hex::encode(Sha256::digest(canonical(v).as_bytes()))
}

pub fn parse_value(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

fn int_value(x: &Int) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integers are valid JSON numbers"))
}

fn int_from(v: &Value, what: &str) -> Result<Int> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            Int::from_str_radix(&s, 10).map_err(|_| schema(format!("{what}: {s} is not an integer")))
        }
        _ => Err(schema(format!("{what}: expected an integer"))),
    }
}

fn usize_from(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(format!("{what}: expected a non-negative integer")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what}: expected an array")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(format!("{what}: expected an object")))
}

/// The object's fields, after checking that the key set is exactly `keys`.
fn fields<'a>(v: &'a Value, what: &str, keys: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = object(v, what)?;
    for k in keys {
        if !obj.contains_key(*k) {
            return Err(schema(format!("{what}: missing key '{k}'")));
        }
    }
    if let Some(extra) = obj.keys().find(|k| !keys.contains(&k.as_str())) {
        return Err(schema(format!("{what}: unknown key '{extra}'")));
    }
    Ok(obj)
}

fn vector_value(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

fn vector_from(v: &Value, len: usize, what: &str) -> Result<Vec<Int>> {
    let a = array(v, what)?;
    if a.len() != len {
        return Err(schema(format!("{what}: expected {len} entries, found {}", a.len())));
    }
    a.iter().map(|x| int_from(x, what)).collect()
}

pub fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_value(m.row(i))).collect())
}

pub fn matrix_from(v: &Value, rows: usize, cols: usize, what: &str) -> Result<IntMatrix> {
    let a = array(v, what)?;
    if a.len() != rows {
        return Err(schema(format!("{what}: expected {rows} rows, found {}", a.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in a.iter().enumerate() {
        data.extend(vector_from(row, cols, &format!("{what} row {i}"))?);
    }
    Ok(IntMatrix::from_vec(rows, cols, data))
}

fn ranks_from(obj: &Map<String, Value>, what: &str) -> Result<(Vec<usize>, usize)> {
    let ranks: Vec<usize> = array(&obj["ranks"], what)?
        .iter()
        .map(|x| usize_from(x, "ranks"))
        .collect::<Result<_>>()?;
    let t = usize_from(&obj["truncation"], "truncation")?;
    if ranks.len() != t + 1 {
        return Err(schema(format!("{what}: truncation {t} needs {} ranks", t + 1)));
    }
    Ok((ranks, t))
}

fn ranks_value(ranks: &[usize]) -> Value {
    Value::Array(ranks.iter().map(|&r| Value::from(r as u64)).collect())
}

fn with(mut base: Value, extra: Vec<(&str, Value)>) -> Value {
    let obj = base.as_object_mut().expect("payloads are objects");
    for (k, v) in extra {
        obj.insert(k.to_string(), v);
    }
    base
}

fn pair_key(p: usize, q: usize) -> String {
    format!("{p},{q}")
}

fn keyed<'a>(obj: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("{what}: missing entry '{key}'")))
}

fn exact_keys(obj: &Map<String, Value>, expected: usize, what: &str) -> Result<()> {
    if obj.len() != expected {
        return Err(schema(format!("{what}: expected {expected} entries, found {}", obj.len())));
    }
    Ok(())
}

const COMPLEX_KEYS: [&str; 3] = ["ranks", "diffs", "truncation"];
const SIMPLICIAL_KEYS: [&str; 4] = ["ranks", "faces", "degens", "truncation"];

pub fn complex_value(c: &ChainComplex) -> Value {
    serde_json::json!({
        "ranks": ranks_value(c.ranks()),
        "diffs": Value::Array(c.diffs().iter().map(matrix_value).collect()),
        "truncation": c.truncation(),
    })
}

fn complex_fields(obj: &Map<String, Value>) -> Result<ChainComplex> {
    let (ranks, t) = ranks_from(obj, "complex")?;
    let diffs = array(&obj["diffs"], "diffs")?;
    if diffs.len() != t {
        return Err(schema(format!("complex: truncation {t} needs {t} differentials")));
    }
    let diffs = diffs
        .iter()
        .enumerate()
        .map(|(k, d)| matrix_from(d, ranks[k], ranks[k + 1], &format!("d_{}", k + 1)))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::new(ranks, diffs)
}

pub fn complex_from(v: &Value) -> Result<ChainComplex> {
    complex_fields(fields(v, "complex", &COMPLEX_KEYS)?)
}

pub fn chain_map_value(f: &ChainMap) -> Value {
    serde_json::json!({
        "source": complex_value(f.source()),
        "target": complex_value(f.target()),
        "components": Value::Array(f.components().iter().map(matrix_value).collect()),
    })
}

pub fn chain_map_from(v: &Value) -> Result<ChainMap> {
    let obj = fields(v, "chain map", &["source", "target", "components"])?;
    let (src, tgt) = (complex_from(&obj["source"])?, complex_from(&obj["target"])?);
    let comps = array(&obj["components"], "components")?
        .iter()
        .enumerate()
        .map(|(n, m)| matrix_from(m, tgt.rank(n), src.rank(n), &format!("component {n}")))
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(src, tgt, comps)
}

pub fn simplicial_value(a: &SimplicialAbGroup) -> Value {
    let levels = |ms: &[Vec<IntMatrix>]| {
        Value::Array(ms.iter().map(|l| Value::Array(l.iter().map(matrix_value).collect())).collect())
    };
    serde_json::json!({
        "ranks": ranks_value(a.ranks()),
        "faces": levels(a.faces()),
        "degens": levels(a.degens()),
        "truncation": a.truncation(),
    })
}

fn simplicial_fields(obj: &Map<String, Value>) -> Result<SimplicialAbGroup> {
    let (ranks, t) = ranks_from(obj, "simplicial group")?;
    let faces = array(&obj["faces"], "faces")?;
    let degens = array(&obj["degens"], "degens")?;
    if faces.len() != t + 1 || degens.len() != t {
        return Err(schema(format!("simplicial group: truncation {t} needs {} face levels and {t} degeneracy levels", t + 1)));
    }
    let faces = faces
        .iter()
        .enumerate()
        .map(|(n, level)| {
            let maps = array(level, "faces")?;
            let expected = if n == 0 { 0 } else { n + 1 };
            if maps.len() != expected {
                return Err(schema(format!("level {n} needs {expected} faces")));
            }
            maps.iter()
                .enumerate()
                .map(|(i, m)| matrix_from(m, ranks[n - 1], ranks[n], &format!("d_{i} at level {n}")))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    let degens = degens
        .iter()
        .enumerate()
        .map(|(n, level)| {
            let maps = array(level, "degens")?;
            if maps.len() != n + 1 {
                return Err(schema(format!("level {n} needs {} degeneracies", n + 1)));
            }
            maps.iter()
                .enumerate()
                .map(|(i, m)| matrix_from(m, ranks[n + 1], ranks[n], &format!("s_{i} at level {n}")))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    SimplicialAbGroup::new(ranks, faces, degens)
}

pub fn simplicial_from(v: &Value) -> Result<SimplicialAbGroup> {
    simplicial_fields(fields(v, "simplicial group", &SIMPLICIAL_KEYS)?)
}

pub fn simplicial_map_value(f: &SimplicialMap) -> Value {
    serde_json::json!({
        "source": simplicial_value(f.source()),
        "target": simplicial_value(f.target()),
        "components": Value::Array(f.components().iter().map(matrix_value).collect()),
    })
}

pub fn simplicial_map_from(v: &Value) -> Result<SimplicialMap> {
    let obj = fields(v, "simplicial map", &["source", "target", "components"])?;
    let (src, tgt) = (simplicial_from(&obj["source"])?, simplicial_from(&obj["target"])?);
    let comps = array(&obj["components"], "components")?
        .iter()
        .enumerate()
        .map(|(n, m)| matrix_from(m, tgt.rank(n), src.rank(n), &format!("component {n}")))
        .collect::<Result<Vec<_>>>()?;
    SimplicialMap::new(src, tgt, comps)
}

pub fn dga_value(r: &DGAlgebra) -> Value {
    let t = r.truncation();
    let mut mult = Map::new();
    for p in 0..=t {
        for q in 0..=t - p {
            mult.insert(pair_key(p, q), matrix_value(r.mult(p, q)));
        }
    }
    with(complex_value(r.complex()), vec![("mult", Value::Object(mult)), ("unit", vector_value(r.unit()))])
}

pub fn dga_from(v: &Value) -> Result<DGAlgebra> {
    let obj = fields(v, "DGA", &["ranks", "diffs", "truncation", "mult", "unit"])?;
    let c = complex_fields(obj)?;
    let t = c.truncation();
    let table = object(&obj["mult"], "mult")?;
    exact_keys(table, (t + 1) * (t + 2) / 2, "mult")?;
    let mult = (0..=t)
        .map(|p| {
            (0..=t - p)
                .map(|q| {
                    let key = pair_key(p, q);
                    matrix_from(keyed(table, &key, "mult")?, c.rank(p + q), c.rank(p) * c.rank(q), &format!("mult {key}"))
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    let unit = vector_from(&obj["unit"], c.rank(0), "unit")?;
    DGAlgebra::new(c, mult, unit)
}

pub fn ring_value(a: &SimplicialRing) -> Value {
    let mult: Map<String, Value> = (0..=a.truncation()).map(|n| (n.to_string(), matrix_value(a.mult(n)))).collect();
    with(simplicial_value(a.group()), vec![("mult", Value::Object(mult)), ("unit", vector_value(a.unit()))])
}

pub fn ring_from(v: &Value) -> Result<SimplicialRing> {
    let obj = fields(v, "simplicial ring", &["ranks", "faces", "degens", "truncation", "mult", "unit"])?;
    let g = simplicial_fields(obj)?;
    let t = g.truncation();
    let table = object(&obj["mult"], "mult")?;
    exact_keys(table, t + 1, "mult")?;
    let mult = (0..=t)
        .map(|n| matrix_from(keyed(table, &n.to_string(), "mult")?, g.rank(n), g.rank(n) * g.rank(n), &format!("mult {n}")))
        .collect::<Result<Vec<_>>>()?;
    let unit = vector_from(&obj["unit"], g.rank(0), "unit")?;
    SimplicialRing::new(g, mult, unit)
}

pub fn dg_module_value(m: &DGModule) -> Value {
    let t = m.truncation();
    let mut action = Map::new();
    for p in 0..=t {
        for q in 0..=t - p {
            action.insert(pair_key(p, q), matrix_value(m.action(p, q)));
        }
    }
    with(
        complex_value(m.complex()),
        vec![("action", Value::Object(action)), ("ring", Value::String(content_hash(&dga_value(m.algebra()))))],
    )
}

/// The ring is looked up among `rings` by content hash.
pub fn dg_module_from(v: &Value, rings: &[DGAlgebra]) -> Result<DGModule> {
    let obj = fields(v, "DG module", &["ranks", "diffs", "truncation", "action", "ring"])?;
    let c = complex_fields(obj)?;
    let hash = obj["ring"].as_str().ok_or_else(|| schema("ring: expected a content hash"))?;
    let ring = rings
        .iter()
        .find(|r| content_hash(&dga_value(r)) == hash)
        .ok_or_else(|| schema(format!("ring {hash} was not supplied")))?;
    let r = ring.complex();
    let t = c.truncation();
    let table = object(&obj["action"], "action")?;
    exact_keys(table, (t + 1) * (t + 2) / 2, "action")?;
    let action = (0..=t)
        .map(|p| {
            (0..=t - p)
                .map(|q| {
                    let key = pair_key(p, q);
                    matrix_from(keyed(table, &key, "action")?, c.rank(p + q), c.rank(p) * r.rank(q), &format!("action {key}"))
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    DGModule::new(ring.clone(), c, action)
}

fn graph_fields(obj: &Map<String, Value>) -> Result<IGraph> {
    let objects: Vec<String> = array(&obj["objects"], "objects")?
        .iter()
        .map(|o| match o {
            Value::String(s) => Ok(s.clone()),
            other => Ok(canonical(other)),
        })
        .collect::<Result<_>>()?;
    let s = objects.len();
    let table = object(&obj["entries"], "entries")?;
    exact_keys(table, s * s, "entries")?;
    let entries = (0..s * s)
        .map(|x| complex_from(keyed(table, &pair_key(x / s, x % s), "entries")?))
        .collect::<Result<Vec<_>>>()?;
    IGraph::new(objects, entries)
}

pub fn graph_value(g: &IGraph) -> Value {
    let s = g.size();
    let entries: Map<String, Value> = (0..s * s)
        .map(|x| (pair_key(x / s, x % s), complex_value(g.entry(x / s, x % s))))
        .collect();
    serde_json::json!({
        "objects": g.objects(),
        "entries": Value::Object(entries),
    })
}

pub fn graph_from(v: &Value) -> Result<IGraph> {
    graph_fields(fields(v, "I-graph", &["objects", "entries"])?)
}

pub fn category_value(o: &ICategory) -> Value {
    let s = o.size();
    let mut comp = Map::new();
    for i in 0..s {
        for j in 0..s {
            for k in 0..s {
                let m = o.compose_map(i, j, k);
                comp.insert(format!("{i},{j},{k}"), Value::Array(m.components().iter().map(matrix_value).collect()));
            }
        }
    }
    let units: Map<String, Value> = (0..s).map(|i| (i.to_string(), vector_value(o.unit(i)))).collect();
    with(graph_value(o.graph()), vec![("comp", Value::Object(comp)), ("units", Value::Object(units))])
}

pub fn category_from(v: &Value) -> Result<ICategory> {
    let obj = fields(v, "I-category", &["objects", "entries", "comp", "units"])?;
    let g = graph_fields(obj)?;
    let s = g.size();
    let table = object(&obj["comp"], "comp")?;
    exact_keys(table, s * s * s, "comp")?;
    let mut comp = Vec::with_capacity(s * s * s);
    for i in 0..s {
        for j in 0..s {
            for k in 0..s {
                let key = format!("{i},{j},{k}");
                let src = tensor(g.entry(j, k), g.entry(i, j)).0;
                let tgt = g.entry(i, k);
                let comps = array(keyed(table, &key, "comp")?, "comp")?
                    .iter()
                    .enumerate()
                    .map(|(n, m)| matrix_from(m, tgt.rank(n), src.rank(n), &format!("comp {key} degree {n}")))
                    .collect::<Result<Vec<_>>>()?;
                comp.push(ChainMap::new(src, tgt.clone(), comps)?);
            }
        }
    }
    let table = object(&obj["units"], "units")?;
    exact_keys(table, s, "units")?;
    let units = (0..s)
        .map(|i| vector_from(keyed(table, &i.to_string(), "units")?, g.entry(i, i).rank(0), "unit"))
        .collect::<Result<Vec<_>>>()?;
    ICategory::new(g, comp, units)
}

pub fn homology_value(h: &HomologyTable) -> Value {
    Value::Array(
        h.groups
            .iter()
            .map(|g| {
                serde_json::json!({
                    "free_rank": g.free_rank,
                    "torsion": vector_value(&g.torsion),
                })
            })
            .collect(),
    )
}

/// Which payload type an object is, judged by its key set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Complex,
    ChainMap,
    Simplicial,
    SimplicialMap,
    Dga,
    Ring,
    DgModule,
    Graph,
    Category,
}

pub fn kind_of(v: &Value) -> Result<Kind> {
    let obj = object(v, "payload")?;
    let keys: BTreeMap<&str, ()> = obj.keys().map(|k| (k.as_str(), ())).collect();
    let has = |k: &str| keys.contains_key(k);
    Ok(if has("comp") {
        Kind::Category
    } else if has("entries") {
        Kind::Graph
    } else if has("action") {
        Kind::DgModule
    } else if has("components") {
        let src = object(&obj["source"], "source").map(|s| s.contains_key("faces")).unwrap_or(false);
        if src {
            Kind::SimplicialMap
        } else {
            Kind::ChainMap
        }
    } else if has("faces") {
        if has("mult") {
            Kind::Ring
        } else {
            Kind::Simplicial
        }
    } else if has("diffs") {
        if has("mult") {
            Kind::Dga
        } else {
            Kind::Complex
        }
    } else {
        return Err(schema("payload matches no known type"));
    })
}

/// `serialize(parse(text))` for any supported payload.
pub fn roundtrip(text: &str) -> Result<String> {
    let v = parse_value(text)?;
    let out = match kind_of(&v)? {
        Kind::Complex => complex_value(&complex_from(&v)?),
        Kind::ChainMap => chain_map_value(&chain_map_from(&v)?),
        Kind::Simplicial => simplicial_value(&simplicial_from(&v)?),
        Kind::SimplicialMap => simplicial_map_value(&simplicial_map_from(&v)?),
        Kind::Dga => dga_value(&dga_from(&v)?),
        Kind::Ring => ring_value(&ring_from(&v)?),
        Kind::Graph => graph_value(&graph_from(&v)?),
        Kind::Category => category_value(&category_from(&v)?),
        Kind::DgModule => return Err(schema("a DG module needs its ring supplied alongside")),
    };
    Ok(canonical(&out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::named_algebras;
    use crate::enriched::ICategory;
    use crate::simplicial::standard_simplex;

    #[test]
    fn roundtrips_are_canonical() {
        let c = ChainComplex::new(vec![1, 2, 0], vec![IntMatrix::from_rows_i64(2, &[vec![2, -4]]), IntMatrix::zeros(2, 0)]).unwrap();
        let text = canonical(&complex_value(&c));
        assert_eq!(text, r#"{"diffs":[[[2,-4]],[[],[]]],"ranks":[1,2,0],"truncation":2}"#);
        let spaced = "{ \"truncation\": 2, \"ranks\": [1, 2, 0],\n \"diffs\": [[[2, -4]], [[], []]] }";
        assert_eq!(roundtrip(spaced).unwrap(), text);
        assert_eq!(complex_from(&parse_value(&text).unwrap()).unwrap(), c);

        let a = standard_simplex(1, 2);
        assert_eq!(simplicial_from(&simplicial_value(&a)).unwrap(), a);
        for (_, r) in named_algebras(2) {
            assert_eq!(dga_from(&dga_value(&r)).unwrap(), r);
            let m = DGModule::regular(&r);
            assert_eq!(dg_module_from(&dg_module_value(&m), &[r.clone()]).unwrap(), m);
        }
        let ring = SimplicialRing::truncated_symmetric_algebra(&a, 2);
        assert_eq!(ring_from(&ring_value(&ring)).unwrap(), ring);
        let o = ICategory::arrow(&ChainComplex::sphere(1, 2)).unwrap();
        assert_eq!(category_from(&category_value(&o)).unwrap(), o);
        assert_eq!(graph_from(&graph_value(o.graph())).unwrap(), *o.graph());
    }

    #[test]
    fn big_integers_survive() {
        let big = Int::from_str_radix("123456789012345678901234567890", 10).unwrap();
        let c = ChainComplex::new(vec![1, 1], vec![IntMatrix::from_vec(1, 1, vec![big])]).unwrap();
        let text = canonical(&complex_value(&c));
        assert!(text.contains("123456789012345678901234567890"));
        assert_eq!(complex_from(&parse_value(&text).unwrap()).unwrap(), c);
    }

    #[test]
    fn invalid_payloads_are_named() {
        let bad = r#"{"ranks":[1,1,1],"diffs":[[[1]],[[1]]],"truncation":2}"#;
        let err = complex_from(&parse_value(bad).unwrap()).unwrap_err();
        assert!(matches!(err, Error::DiffSquareNonzero { degree: 1 }), "{err}");

        let mut a = simplicial_value(&standard_simplex(1, 2));
        a["faces"][1][0] = a["faces"][1][1].clone();
        let err = simplicial_from(&a).unwrap_err();
        assert!(matches!(err, Error::SimplicialIdentity { .. }), "{err}");

        let extra = r#"{"ranks":[1],"diffs":[],"truncation":0,"colour":1}"#;
        assert!(matches!(complex_from(&parse_value(extra).unwrap()), Err(Error::Schema(_))));
        let frac = r#"{"ranks":[1,1],"diffs":[[[1.5]]],"truncation":1}"#;
        assert!(matches!(complex_from(&parse_value(frac).unwrap()), Err(Error::Schema(_))));
        assert!(parse_value("{").is_err());
    }

    #[test]
    fn hashes_ignore_formatting() {
        let a = parse_value(r#"{"a": 1, "b": [1, 2]}"#).unwrap();
        let b = parse_value(r#"{"b":[1,2],"a":1}"#).unwrap();
        assert_eq!(content_hash(&a), content_hash(&b));
    }
}
