//! Quivers, dimension vectors, Grothendieck classes and the Euler form.
//!
//! Quivers come in two textual forms. The line-oriented DSL:
//!
//! ```text
//! # A2
//! vertex 1
//! vertex 2
//! arrow a: 1 -> 2
//! ```
//!
//! and JSON: `{"vertices":["1","2"],"arrows":[{"name":"a","src":"1","tgt":"2"}]}`.
//! Vertex order is declaration order; every coordinate vector is indexed by it.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("arrow `{0}` is a loop")]
    LoopArrow(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("invalid quiver JSON: {0}")]
    Json(String),
    #[error("vector of length {got} does not match {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite loop-free quiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from vertex identifiers and `(name, source, target)` triples.
    pub fn new<V, A, N, S, T>(vertices: V, arrows: A) -> Result<Self, QuiverError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (N, S, T)>,
        N: Into<String>,
        S: Into<String>,
        T: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let mut names = HashSet::new();
        let mut out = Vec::new();
        for (name, src, tgt) in arrows {
            let (name, src, tgt): (String, String, String) = (name.into(), src.into(), tgt.into());
            let lookup = |v: &str| {
                vertices
                    .iter()
                    .position(|x| x == v)
                    .ok_or_else(|| QuiverError::UnknownVertex {
                        arrow: name.clone(),
                        vertex: v.to_string(),
                    })
            };
            let source = lookup(&src)?;
            let target = lookup(&tgt)?;
            if source == target {
                return Err(QuiverError::LoopArrow(name));
            }
            if !names.insert(name.clone()) {
                return Err(QuiverError::DuplicateArrow(name));
            }
            out.push(Arrow {
                name,
                source,
                target,
            });
        }
        Ok(Self {
            vertices,
            arrows: out,
        })
    }

    /// The equioriented quiver `1 -> 2 -> ... -> n` with arrows `a1, a2, ...`.
    pub fn linear(n: usize) -> Self {
        let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (1..n).map(|i| (format!("a{i}"), i.to_string(), (i + 1).to_string()));
        Self::new(vertices, arrows).expect("linear quiver is valid")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// True when the quiver has no oriented cycles (finite-dimensional path algebra).
    pub fn is_acyclic(&self) -> bool {
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut visited = 0;
        while let Some(v) = stack.pop() {
            visited += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        visited == n
    }

    /// Canonical DSL rendering; `parse_quiver(q.render()) == q`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            s.push_str("vertex ");
            s.push_str(v);
            s.push('\n');
        }
        for a in &self.arrows {
            s.push_str(&format!(
                "arrow {}: {} -> {}\n",
                a.name, self.vertices[a.source], self.vertices[a.target]
            ));
        }
        s
    }

    /// Short content digest of the canonical rendering.
    pub fn digest(&self) -> String {
        let h = Sha256::digest(self.render().as_bytes());
        hex::encode(&h[..8])
    }

    pub fn to_json(&self) -> QuiverJson {
        QuiverJson {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    name: a.name.clone(),
                    src: self.vertices[a.source].clone(),
                    tgt: self.vertices[a.target].clone(),
                })
                .collect(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, QuiverError> {
        let raw: QuiverJson =
            serde_json::from_str(text).map_err(|e| QuiverError::Json(e.to_string()))?;
        Self::new(
            raw.vertices,
            raw.arrows.into_iter().map(|a| (a.name, a.src, a.tgt)),
        )
    }

    pub fn check_len(&self, len: usize) -> Result<(), QuiverError> {
        if len == self.vertex_count() {
            Ok(())
        } else {
            Err(QuiverError::LengthMismatch {
                expected: self.vertex_count(),
                got: len,
            })
        }
    }

    /// Σ_i d_i e_i − Σ_{a: i→j} d_i e_j.
    pub fn euler_form(&self, d: &K0Class, e: &K0Class) -> Result<i64, QuiverError> {
        self.check_len(d.len())?;
        self.check_len(e.len())?;
        let diag: i64 = d.0.iter().zip(&e.0).map(|(a, b)| a * b).sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|a| d.0[a.source] * e.0[a.target])
            .sum();
        Ok(diag - off)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    #[serde(deserialize_with = "de_ids")]
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub name: String,
    #[serde(deserialize_with = "de_id")]
    pub src: String,
    #[serde(deserialize_with = "de_id")]
    pub tgt: String,
}

fn value_to_id<E: serde::de::Error>(v: serde_json::Value) -> Result<String, E> {
    match v {
        serde_json::Value::String(s) => Ok(s),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        other => Err(E::custom(format!("vertex id must be a string or number, got {other}"))),
    }
}

fn de_id<'de, D: serde::Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    value_to_id(serde_json::Value::deserialize(d)?)
}

fn de_ids<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    Vec::<serde_json::Value>::deserialize(d)?
        .into_iter()
        .map(value_to_id)
        .collect()
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'')
}

struct LineCursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> LineCursor<'a> {
    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn error(&self, message: impl Into<String>) -> QuiverError {
        QuiverError::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn ident(&mut self, what: &str) -> Result<&'a str, QuiverError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len: usize = rest
            .chars()
            .take_while(|&c| is_ident_char(c))
            .map(char::len_utf8)
            .sum();
        if len == 0 {
            return Err(self.error(format!("expected {what}")));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn expect(&mut self, token: &str) -> Result<(), QuiverError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }
}

/// Parses the quiver DSL.
pub fn parse_quiver(text: &str) -> Result<Quiver, QuiverError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut cur = LineCursor {
            text: line,
            pos: 0,
            line: lineno + 1,
        };
        if cur.at_end() {
            continue;
        }
        let keyword = cur.ident("`vertex` or `arrow`")?;
        match keyword {
            "vertex" => {
                let id = cur.ident("vertex identifier")?;
                if !cur.at_end() {
                    return Err(cur.error("unexpected trailing input"));
                }
                vertices.push(id.to_string());
            }
            "arrow" => {
                let name = cur.ident("arrow name")?;
                cur.expect(":")?;
                let src = cur.ident("source vertex")?;
                cur.expect("->")?;
                let tgt = cur.ident("target vertex")?;
                if !cur.at_end() {
                    return Err(cur.error("unexpected trailing input"));
                }
                arrows.push((name.to_string(), src.to_string(), tgt.to_string()));
            }
            other => {
                cur.pos = 0;
                cur.skip_ws();
                return Err(cur.error(format!("unknown statement `{other}`")));
            }
        }
    }
    Quiver::new(vertices, arrows)
}

/// Accepts either the DSL or JSON, detected by the first non-blank character.
pub fn parse_quiver_any(text: &str) -> Result<Quiver, QuiverError> {
    if text.trim_start().starts_with('{') {
        Quiver::from_json_str(text)
    } else {
        parse_quiver(text)
    }
}

/// A dimension vector: one nonnegative entry per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` if any entry would be negative.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    /// All dimension vectors `d` with `0 <= d <= self`, in lexicographic order.
    pub fn below(&self) -> Vec<DimVector> {
        let mut out = vec![Vec::new()];
        for &b in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=b).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(DimVector).collect()
    }

    pub fn to_k0(&self) -> K0Class {
        K0Class(self.0.iter().map(|&d| d as i64).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.0.iter())
    }
}

fn write_tuple<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    it: impl Iterator<Item = T>,
) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in it.enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// A class in K_0 = Z^{Q_0}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct K0Class(pub Vec<i64>);

impl K0Class {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &K0Class) -> K0Class {
        K0Class(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &K0Class) -> K0Class {
        K0Class(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i64) -> K0Class {
        K0Class(self.0.iter().map(|a| a * c).collect())
    }

    /// Index `i` if this class is the unit vector ε_i.
    pub fn simple_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, &x) in self.0.iter().enumerate() {
            match x {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.0.iter())
    }
}

/// Parses `1,2,0` or `(1,2,0)` into integers.
pub fn parse_int_list(text: &str) -> Result<Vec<i64>, String> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad integer `{}`: {e}", s.trim()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_a2() {
        let q = parse_quiver("vertex 1\nvertex 2\narrow a: 1 -> 2").unwrap();
        assert_eq!(q.vertices(), ["1", "2"]);
        assert_eq!(
            q.arrows(),
            [Arrow {
                name: "a".into(),
                source: 0,
                target: 1
            }]
        );
        assert_eq!(q, Quiver::linear(2).renamed_arrows_for_test(&["a"]));
    }

    impl Quiver {
        fn renamed_arrows_for_test(mut self, names: &[&str]) -> Self {
            for (a, n) in self.arrows.iter_mut().zip(names) {
                a.name = n.to_string();
            }
            self
        }
    }

    #[test]
    fn parse_a1_and_comments() {
        let q = parse_quiver("# just a point\n\nvertex 1   # trailing\n").unwrap();
        assert_eq!(q.vertex_count(), 1);
        assert!(q.arrows().is_empty());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_quiver("vertex 1\narrow a: 1 -> 1").unwrap_err(),
            QuiverError::LoopArrow("a".into())
        );
        assert_eq!(
            parse_quiver("vertex 1\nvertex 1").unwrap_err(),
            QuiverError::DuplicateVertex("1".into())
        );
        assert!(matches!(
            parse_quiver("vertex 1\narrow a: 1 -> 9").unwrap_err(),
            QuiverError::UnknownVertex { .. }
        ));
        assert!(matches!(
            parse_quiver("vertex 1\nvertex 2\narrow a: 1 -> 2\narrow a: 2 -> 1").unwrap_err(),
            QuiverError::DuplicateArrow(_)
        ));
        match parse_quiver("vertex 1\nvertex 2\narrow a 1 -> 2").unwrap_err() {
            QuiverError::Syntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, 9);
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(
            parse_quiver("  edge x").unwrap_err(),
            QuiverError::Syntax { line: 1, column: 3, .. }
        ));
    }

    #[test]
    fn json_roundtrip_and_numbers() {
        let q = Quiver::linear(3);
        let text = serde_json::to_string(&q.to_json()).unwrap();
        assert_eq!(Quiver::from_json_str(&text).unwrap(), q);
        let q2 = parse_quiver_any(
            r#"{"vertices":[1,2],"arrows":[{"name":"a1","src":1,"tgt":2}]}"#,
        )
        .unwrap();
        assert_eq!(q2, Quiver::linear(2));
    }

    #[test]
    fn acyclicity() {
        assert!(Quiver::linear(4).is_acyclic());
        let cyc = parse_quiver("vertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 2 -> 1").unwrap();
        assert!(!cyc.is_acyclic());
    }

    #[test]
    fn euler_form_examples() {
        let a2 = Quiver::linear(2);
        let s1 = K0Class(vec![1, 0]);
        let s2 = K0Class(vec![0, 1]);
        assert_eq!(a2.euler_form(&s1, &s2).unwrap(), -1);
        assert_eq!(a2.euler_form(&s2, &s1).unwrap(), 0);
        let a3 = Quiver::linear(3);
        // vertex 1 has no incoming arrows and a source-side loop-free arrow; <e1,e1> = 1
        assert_eq!(
            a3.euler_form(&K0Class(vec![1, 0, 0]), &K0Class(vec![1, 0, 0])).unwrap(),
            1
        );
        assert_eq!(a2.euler_form(&s1, &K0Class::zero(2)).unwrap(), 0);
        assert!(a2.euler_form(&s1, &K0Class(vec![1])).is_err());
    }

    #[test]
    fn dim_vectors_below() {
        let b = DimVector(vec![1, 2]);
        let all = b.below();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], DimVector(vec![0, 0]));
        assert_eq!(all[5], DimVector(vec![1, 2]));
    }

    fn arb_quiver() -> impl Strategy<Value = Quiver> {
        (1usize..5)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    prop::collection::vec((0..n, 0..n), 0..6),
                )
            })
            .prop_map(|(n, edges)| {
                let arrows = edges
                    .into_iter()
                    .filter(|(s, t)| s != t)
                    .enumerate()
                    .map(|(i, (s, t))| (format!("x{i}"), format!("v{s}"), format!("v{t}")));
                Quiver::new((0..n).map(|i| format!("v{i}")), arrows).unwrap()
            })
    }

    proptest! {
        #[test]
        fn render_roundtrip(q in arb_quiver()) {
            prop_assert_eq!(parse_quiver(&q.render()).unwrap(), q);
        }

        #[test]
        fn euler_form_bilinear(
            q in arb_quiver(),
            seed in prop::collection::vec(-3i64..4, 12),
            c in -3i64..4,
        ) {
            let n = q.vertex_count();
            let d = K0Class(seed[0..n].to_vec());
            let e = K0Class(seed[4..4 + n].to_vec());
            let f = K0Class(seed[8..8 + n].to_vec());
            let lhs = q.euler_form(&d.add(&e.scale(c)), &f).unwrap();
            prop_assert_eq!(lhs, q.euler_form(&d, &f).unwrap() + c * q.euler_form(&e, &f).unwrap());
            let rhs = q.euler_form(&f, &d.add(&e.scale(c))).unwrap();
            prop_assert_eq!(rhs, q.euler_form(&f, &d).unwrap() + c * q.euler_form(&f, &e).unwrap());
        }
    }
}
