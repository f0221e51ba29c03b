//! JSON documents read and written by the command-line tool.
//!
//! Every document carries `"v": 1`. Parsing reports structural problems as a
//! [`SchemaError`] located by a JSON pointer. Mathematical problems, such as
//! a level that is not closed under subwords, are left to the library so that
//! `validate` and the other subcommands agree with it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use serde_json::{json, Map, Number, Value};
use wordsys_core::cartesian::NamedTables;
use wordsys_core::linalg::{format_rational, parse_rational};
use wordsys_core::words::{Letter, Level};
#[cfg(test)]
use wordsys_core::AbstractSubproduct;
use wordsys_core::{
    CartesianSystem, ExclusionSet, Graph, ProjectorFamily, QMatrix, Word, WordSystem,
};

pub const VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() {
            "/"
        } else {
            &self.pointer
        };
        write!(f, "{} (at {at})", self.message)
    }
}

impl std::error::Error for SchemaError {}

type Parsed<T> = Result<T, SchemaError>;

fn schema(pointer: &str, message: impl Into<String>) -> SchemaError {
    SchemaError {
        pointer: pointer.to_string(),
        message: message.into(),
    }
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

/// The kinds of document, told apart by their distinguishing field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    WordSystem,
    Exclusions,
    Graph,
    Cartesian,
    Projectors,
    Subproduct,
    Sequence,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::WordSystem => "word_system",
            Kind::Exclusions => "exclusions",
            Kind::Graph => "graph",
            Kind::Cartesian => "cartesian",
            Kind::Projectors => "projector_family",
            Kind::Subproduct => "subproduct",
            Kind::Sequence => "sequence",
        }
    }

    fn fields(self) -> &'static [&'static str] {
        match self {
            Kind::WordSystem => &["v", "alphabet", "horizon", "levels"],
            Kind::Exclusions => &["v", "alphabet", "words"],
            Kind::Graph => &["v", "vertices", "edges"],
            Kind::Cartesian => &["v", "horizon", "levels", "injections"],
            Kind::Projectors => &["v", "dim", "horizon", "projectors"],
            Kind::Subproduct => &["v", "dims", "products"],
            Kind::Sequence => &["v", "counts"],
        }
    }
}

/// A parsed top-level object with its version checked.
#[derive(Debug)]
pub struct Doc {
    kind: Kind,
    map: Map<String, Value>,
    pub warnings: Vec<String>,
}

pub fn parse(text: &str) -> Parsed<Doc> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    let Value::Object(map) = value else {
        return Err(schema("", "expected a JSON object"));
    };
    match map.get("v") {
        None => return Err(schema("/v", "missing schema version")),
        Some(v) if v.as_u64() == Some(VERSION) => {}
        Some(v) => return Err(schema("/v", format!("unsupported schema version {v}"))),
    }
    let kind = if map.contains_key("injections") {
        Kind::Cartesian
    } else if map.contains_key("projectors") {
        Kind::Projectors
    } else if map.contains_key("products") {
        Kind::Subproduct
    } else if map.contains_key("edges") {
        Kind::Graph
    } else if map.contains_key("levels") {
        Kind::WordSystem
    } else if map.contains_key("words") {
        Kind::Exclusions
    } else if map.contains_key("counts") {
        Kind::Sequence
    } else {
        return Err(schema("", "unrecognized document kind"));
    };
    let warnings = map
        .keys()
        .filter(|k| !kind.fields().contains(&k.as_str()))
        .map(|k| format!("ignoring unknown field /{}", escape(k)))
        .collect();
    Ok(Doc {
        kind,
        map,
        warnings,
    })
}

impl Doc {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn expect(&self, kinds: &[Kind]) -> Parsed<()> {
        if kinds.contains(&self.kind) {
            Ok(())
        } else {
            let wanted: Vec<_> = kinds.iter().map(|k| k.name()).collect();
            Err(schema(
                "",
                format!(
                    "expected a {} document, found {}",
                    wanted.join(" or "),
                    self.kind.name()
                ),
            ))
        }
    }

    fn field(&self, name: &str) -> Parsed<&Value> {
        self.map
            .get(name)
            .ok_or_else(|| schema(&format!("/{name}"), "missing field"))
    }

    fn count(&self, name: &str) -> Parsed<usize> {
        as_count(self.field(name)?, &format!("/{name}"))
    }
}

fn as_count(value: &Value, at: &str) -> Parsed<usize> {
    value
        .as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| schema(at, "expected a non-negative integer"))
}

fn as_array<'a>(value: &'a Value, at: &str) -> Parsed<&'a Vec<Value>> {
    value
        .as_array()
        .ok_or_else(|| schema(at, "expected an array"))
}

fn as_object<'a>(value: &'a Value, at: &str) -> Parsed<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| schema(at, "expected an object"))
}

fn as_str<'a>(value: &'a Value, at: &str) -> Parsed<&'a str> {
    value
        .as_str()
        .ok_or_else(|| schema(at, "expected a string"))
}

pub fn as_word(value: &Value, at: &str) -> Parsed<Word> {
    as_array(value, at)?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            a.as_u64()
                .and_then(|a| Letter::try_from(a).ok())
                .ok_or_else(|| schema(&format!("{at}/{i}"), "expected a letter"))
        })
        .collect::<Parsed<Vec<_>>>()
        .map(Word::new)
}

fn as_words(value: &Value, at: &str) -> Parsed<BTreeSet<Word>> {
    let mut out = BTreeSet::new();
    for (i, w) in as_array(value, at)?.iter().enumerate() {
        let here = format!("{at}/{i}");
        if !out.insert(as_word(w, &here)?) {
            return Err(schema(&here, "duplicate word"));
        }
    }
    Ok(out)
}

/// `"m,n"` with `m, n ≥ 1`.
fn as_pair(key: &str, at: &str) -> Parsed<(usize, usize)> {
    let bad = || schema(at, format!("expected a key \"m,n\", found {key:?}"));
    let (m, n) = key.split_once(',').ok_or_else(bad)?;
    let parse = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|&x| x >= 1 && s == x.to_string())
    };
    Ok((parse(m).ok_or_else(bad)?, parse(n).ok_or_else(bad)?))
}

fn as_matrix(value: &Value, rows: usize, cols: usize, at: &str) -> Parsed<QMatrix> {
    let array = as_array(value, at)?;
    if array.len() != rows {
        return Err(schema(
            at,
            format!("expected {rows} rows, found {}", array.len()),
        ));
    }
    let mut dense = Vec::with_capacity(rows);
    for (i, row) in array.iter().enumerate() {
        let here = format!("{at}/{i}");
        let row = as_array(row, &here)?;
        if row.len() != cols {
            return Err(schema(
                &here,
                format!("expected {cols} columns, found {}", row.len()),
            ));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, q)| {
                let here = format!("{at}/{i}/{j}");
                let text = as_str(q, &here)?;
                parse_rational(text).ok_or_else(|| {
                    schema(
                        &here,
                        format!("{text:?} is not a canonical fraction \"p\" or \"p/q\""),
                    )
                })
            })
            .collect::<Parsed<Vec<_>>>()?;
        dense.push(parsed);
    }
    Ok(QMatrix::from_dense(dense))
}

/// Word-system levels as written, before closure is checked.
pub struct RawWordSystem {
    pub alphabet: usize,
    pub levels: Vec<Level>,
}

impl RawWordSystem {
    pub fn into_system(self) -> wordsys_core::Result<WordSystem> {
        WordSystem::new(self.alphabet, self.levels)
    }
}

pub fn read_word_system(doc: &Doc) -> Parsed<RawWordSystem> {
    doc.expect(&[Kind::WordSystem])?;
    let alphabet = doc.count("alphabet")?;
    let horizon = doc.count("horizon")?;
    let levels = as_array(doc.field("levels")?, "/levels")?;
    if levels.len() != horizon + 1 {
        return Err(schema(
            "/levels",
            format!(
                "expected {} levels for horizon {horizon}, found {}",
                horizon + 1,
                levels.len()
            ),
        ));
    }
    let levels = levels
        .iter()
        .enumerate()
        .map(|(n, level)| as_words(level, &format!("/levels/{n}")))
        .collect::<Parsed<Vec<_>>>()?;
    Ok(RawWordSystem { alphabet, levels })
}

pub fn read_exclusions(doc: &Doc) -> Parsed<(usize, BTreeSet<Word>)> {
    doc.expect(&[Kind::Exclusions])?;
    Ok((
        doc.count("alphabet")?,
        as_words(doc.field("words")?, "/words")?,
    ))
}

pub fn read_graph(doc: &Doc) -> Parsed<(usize, Vec<(usize, usize)>)> {
    doc.expect(&[Kind::Graph])?;
    let vertices = doc.count("vertices")?;
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, e) in as_array(doc.field("edges")?, "/edges")?.iter().enumerate() {
        let at = format!("/edges/{i}");
        let pair = as_array(e, &at)?;
        if pair.len() != 2 {
            return Err(schema(&at, "expected a pair [i, j]"));
        }
        let edge = (
            as_count(&pair[0], &format!("{at}/0"))?,
            as_count(&pair[1], &format!("{at}/1"))?,
        );
        if !seen.insert(edge) {
            return Err(schema(&at, "duplicate edge"));
        }
        edges.push(edge);
    }
    Ok((vertices, edges))
}

/// Identifiers per level plus named injection tables.
pub fn read_cartesian(doc: &Doc) -> Parsed<(Vec<Vec<String>>, NamedTables)> {
    doc.expect(&[Kind::Cartesian])?;
    let horizon = doc.count("horizon")?;
    let raw_levels = as_array(doc.field("levels")?, "/levels")?;
    if raw_levels.len() != horizon + 1 {
        return Err(schema(
            "/levels",
            format!(
                "expected {} levels for horizon {horizon}, found {}",
                horizon + 1,
                raw_levels.len()
            ),
        ));
    }
    let mut levels = Vec::with_capacity(raw_levels.len());
    for (n, level) in raw_levels.iter().enumerate() {
        let at = format!("/levels/{n}");
        let ids = as_array(level, &at)?
            .iter()
            .enumerate()
            .map(|(i, id)| as_str(id, &format!("{at}/{i}")).map(str::to_string))
            .collect::<Parsed<Vec<_>>>()?;
        levels.push(ids);
    }
    let mut tables = NamedTables::new();
    for (key, table) in as_object(doc.field("injections")?, "/injections")? {
        let at = format!("/injections/{}", escape(key));
        let pair = as_pair(key, &at)?;
        let mut named = BTreeMap::new();
        for (x, image) in as_object(table, &at)? {
            let here = format!("{at}/{}", escape(x));
            let image = as_array(image, &here)?;
            if image.len() != 2 {
                return Err(schema(&here, "expected a pair [u, v]"));
            }
            let u = as_str(&image[0], &format!("{here}/0"))?;
            let v = as_str(&image[1], &format!("{here}/1"))?;
            named.insert(x.clone(), (u.to_string(), v.to_string()));
        }
        tables.insert(pair, named);
    }
    Ok((levels, tables))
}

pub fn read_projectors(doc: &Doc) -> Parsed<(usize, Vec<QMatrix>)> {
    doc.expect(&[Kind::Projectors])?;
    let dim = doc.count("dim")?;
    let horizon = doc.count("horizon")?;
    let raw = as_array(doc.field("projectors")?, "/projectors")?;
    if raw.len() != horizon {
        return Err(schema(
            "/projectors",
            format!("expected {horizon} projectors, found {}", raw.len()),
        ));
    }
    let mut projectors = Vec::with_capacity(horizon);
    let mut size = 1usize;
    for (i, p) in raw.iter().enumerate() {
        let at = format!("/projectors/{i}");
        size = size
            .checked_mul(dim)
            .filter(|&s| s <= wordsys_core::subproduct::MAX_COORDINATES)
            .ok_or_else(|| schema(&at, "projector too large"))?;
        projectors.push(as_matrix(p, size, size, &at)?);
    }
    Ok((dim, projectors))
}

pub type Products = BTreeMap<(usize, usize), QMatrix>;

pub fn read_subproduct(doc: &Doc) -> Parsed<(Vec<usize>, Products)> {
    doc.expect(&[Kind::Subproduct])?;
    let dims = as_array(doc.field("dims")?, "/dims")?
        .iter()
        .enumerate()
        .map(|(i, k)| as_count(k, &format!("/dims/{i}")))
        .collect::<Parsed<Vec<_>>>()?;
    let k = |n: usize| {
        if n == 0 {
            Some(1)
        } else {
            dims.get(n - 1).copied()
        }
    };
    let mut products = BTreeMap::new();
    for (key, matrix) in as_object(doc.field("products")?, "/products")? {
        let at = format!("/products/{}", escape(key));
        let (m, n) = as_pair(key, &at)?;
        let (Some(rows), Some(km), Some(kn)) = (k(m + n), k(m), k(n)) else {
            return Err(schema(
                &at,
                format!("product ({m},{n}) exceeds the horizon {}", dims.len()),
            ));
        };
        products.insert((m, n), as_matrix(matrix, rows, km * kn, &at)?);
    }
    Ok((dims, products))
}

pub fn read_sequence(doc: &Doc) -> Parsed<Vec<BigUint>> {
    doc.expect(&[Kind::Sequence])?;
    as_array(doc.field("counts")?, "/counts")?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let at = format!("/counts/{i}");
            match c {
                Value::Number(n) => n.to_string().parse::<BigUint>().ok(),
                _ => None,
            }
            .ok_or_else(|| schema(&at, "expected a non-negative integer"))
        })
        .collect()
}

fn word_json(word: &Word) -> Value {
    Value::from(word.letters().to_vec())
}

fn words_json<'a>(words: impl IntoIterator<Item = &'a Word>) -> Value {
    Value::Array(words.into_iter().map(word_json).collect())
}

pub fn big_json(n: &BigUint) -> Value {
    // arbitrary_precision keeps every digit
    Value::Number(n.to_string().parse::<Number>().expect("decimal integer"))
}

pub fn word_system_json(system: &WordSystem) -> Value {
    json!({
        "v": VERSION,
        "alphabet": system.alphabet(),
        "horizon": system.horizon(),
        "levels": system.levels().iter().map(words_json).collect::<Vec<_>>(),
    })
}

pub fn exclusions_json(excluded: &ExclusionSet) -> Value {
    json!({
        "v": VERSION,
        "alphabet": excluded.alphabet(),
        "words": words_json(excluded.words()),
    })
}

pub fn graph_json(graph: &Graph) -> Value {
    json!({
        "v": VERSION,
        "vertices": graph.vertices(),
        "edges": graph.edges().iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
    })
}

pub fn cartesian_json(system: &CartesianSystem) -> Value {
    let levels: Vec<Value> = (0..=system.horizon())
        .map(|n| Value::from(system.level(n).to_vec()))
        .collect();
    let mut injections = Map::new();
    for ((m, n), table) in system.named_tables() {
        let table: Map<String, Value> = table
            .into_iter()
            .map(|(x, (u, v))| (x, json!([u, v])))
            .collect();
        injections.insert(format!("{m},{n}"), Value::Object(table));
    }
    json!({
        "v": VERSION,
        "horizon": system.horizon(),
        "levels": levels,
        "injections": injections,
    })
}

fn matrix_json(matrix: &QMatrix) -> Value {
    Value::Array(
        matrix
            .to_dense()
            .iter()
            .map(|row| Value::from(row.iter().map(format_rational).collect::<Vec<_>>()))
            .collect(),
    )
}

pub fn projectors_json(family: &ProjectorFamily) -> Value {
    json!({
        "v": VERSION,
        "dim": family.dim(),
        "horizon": family.horizon(),
        "projectors": family.projectors().iter().map(matrix_json).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
pub fn subproduct_json(system: &AbstractSubproduct) -> Value {
    let products: Map<String, Value> = system
        .products()
        .iter()
        .map(|(&(m, n), w)| (format!("{m},{n}"), matrix_json(w)))
        .collect();
    json!({
        "v": VERSION,
        "dims": system.fiber_dims(),
        "products": products,
    })
}

pub fn sequence_json(counts: &[BigUint]) -> Value {
    json!({
        "v": VERSION,
        "counts": counts.iter().map(big_json).collect::<Vec<_>>(),
    })
}

pub fn sequence_csv(counts: &[BigUint]) -> String {
    let mut out = String::from("n,count\n");
    for (n, c) in counts.iter().enumerate() {
        out.push_str(&format!("{n},{c}\n"));
    }
    out
}
