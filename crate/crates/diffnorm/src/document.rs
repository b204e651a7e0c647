//! Structured result documents: a small nested key/value text format that is
//! deterministic to emit, diffable, and easy to parse back. Keys repeat when
//! a block is a list (for example one `step` entry per automorphism), values
//! hold everything after the first colon, and nesting uses two-space indents.
//!
//! The module also serializes a [`ChangeOfVariables`] into such a document
//! and reads one back, revalidating the automorphisms on the way in so a
//! hand-edited document cannot smuggle in a non-invertible substitution.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::BigRational;

use crate::error::{Error, Result};
use crate::parse::parse_diffpoly;
use crate::pipeline::{ChangeOfVariables, Eq1Table};
use crate::poly::{format_diffpoly, DiffPoly, VarNames};
use crate::transforms::Automorphism;

type QP = DiffPoly<BigRational>;

/// One node of a result document: either a value or an ordered list of
/// keyed children (keys may repeat).
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Leaf(String),
    List(Vec<(String, Node)>),
}

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document { msg: msg.into() }
}

impl Node {
    pub fn leaf(value: impl Into<String>) -> Node {
        Node::Leaf(value.into())
    }

    pub fn list() -> Node {
        Node::List(Vec::new())
    }

    /// Append a child; panics on leaves, which is always a programming error.
    pub fn push(&mut self, key: impl Into<String>, node: Node) {
        match self {
            Node::List(items) => items.push((key.into(), node)),
            Node::Leaf(_) => panic!("cannot push into a leaf node"),
        }
    }

    pub fn push_leaf(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.push(key, Node::leaf(value));
    }

    pub fn as_leaf(&self) -> Option<&str> {
        match self {
            Node::Leaf(v) => Some(v),
            Node::List(_) => None,
        }
    }

    pub fn children(&self) -> &[(String, Node)] {
        match self {
            Node::Leaf(_) => &[],
            Node::List(items) => items,
        }
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        self.children().iter().find(|(k, _)| k == key).map(|(_, n)| n)
    }

    pub fn get_all<'a>(&'a self, key: &str) -> Vec<&'a Node> {
        self.children()
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, n)| n)
            .collect()
    }

    /// Child leaf value, as an error-reporting convenience.
    pub fn expect_leaf(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| doc_err(format!("missing key '{key}'")))?
            .as_leaf()
            .ok_or_else(|| doc_err(format!("key '{key}' is not a value")))
    }

    pub fn expect_child(&self, key: &str) -> Result<&Node> {
        let node = self
            .get(key)
            .ok_or_else(|| doc_err(format!("missing block '{key}'")))?;
        match node {
            Node::List(_) => Ok(node),
            Node::Leaf(_) => Err(doc_err(format!("key '{key}' is not a block"))),
        }
    }

    /// Render the document with two-space indentation and a trailing newline.
    /// Only list nodes can be rendered at the top level.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        self.emit_into(&mut out, 0);
        out
    }

    fn emit_into(&self, out: &mut String, depth: usize) {
        for (key, node) in self.children() {
            match node {
                Node::Leaf(v) => {
                    let _ = writeln!(out, "{:indent$}{key}: {v}", "", indent = depth * 2);
                }
                Node::List(_) => {
                    let _ = writeln!(out, "{:indent$}{key}:", "", indent = depth * 2);
                    node.emit_into(out, depth + 1);
                }
            }
        }
    }

    /// Parse a document emitted by [`Node::emit`]. Blank lines are ignored;
    /// a key with nothing after the colon opens a nested block.
    pub fn parse(text: &str) -> Result<Node> {
        let mut lines: Vec<(usize, String, Option<String>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            if raw.contains('\t') {
                return Err(doc_err(format!("line {}: tabs are not allowed", lineno + 1)));
            }
            let spaces = raw.len() - raw.trim_start_matches(' ').len();
            if spaces % 2 != 0 {
                return Err(doc_err(format!("line {}: odd indentation", lineno + 1)));
            }
            let body = &raw[spaces..];
            let Some(colon) = body.find(':') else {
                return Err(doc_err(format!("line {}: missing ':'", lineno + 1)));
            };
            let key = body[..colon].trim();
            if key.is_empty() {
                return Err(doc_err(format!("line {}: empty key", lineno + 1)));
            }
            let rest = body[colon + 1..].trim();
            let value = if rest.is_empty() {
                None
            } else {
                Some(rest.to_string())
            };
            lines.push((spaces / 2, key.to_string(), value));
        }
        let mut pos = 0;
        let items = parse_block(&lines, &mut pos, 0)?;
        if pos != lines.len() {
            return Err(doc_err("inconsistent indentation"));
        }
        Ok(Node::List(items))
    }
}

fn parse_block(
    lines: &[(usize, String, Option<String>)],
    pos: &mut usize,
    depth: usize,
) -> Result<Vec<(String, Node)>> {
    let mut out = Vec::new();
    while *pos < lines.len() {
        let (d, key, value) = &lines[*pos];
        if *d < depth {
            break;
        }
        if *d > depth {
            return Err(doc_err(format!("unexpected indentation under '{key}'")));
        }
        *pos += 1;
        match value {
            Some(v) => out.push((key.clone(), Node::Leaf(v.clone()))),
            None => {
                let kids = parse_block(lines, pos, depth + 1)?;
                out.push((key.clone(), Node::List(kids)));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// ChangeOfVariables serialization.
// ---------------------------------------------------------------------------

fn automorphism_node(a: &Automorphism<BigRational>, names: &VarNames) -> Node {
    let mut node = Node::list();
    node.push_leaf("tag", a.tag());
    node.push_leaf("n", a.n().to_string());
    let mut fwd = Node::list();
    for (j, img) in a.forward_map() {
        fwd.push_leaf(names.name(*j), format_diffpoly(img, names));
    }
    node.push("forward", fwd);
    let mut inv = Node::list();
    for (j, img) in a.inverse_map() {
        inv.push_leaf(names.name(*j), format_diffpoly(img, names));
    }
    node.push("inverse", inv);
    node
}

fn automorphism_from_node(node: &Node, names: &VarNames) -> Result<Automorphism<BigRational>> {
    let tag = node.expect_leaf("tag")?;
    let n: u32 = node
        .expect_leaf("n")?
        .parse()
        .map_err(|_| doc_err("automorphism arity is not a number"))?;
    let read_map = |key: &str| -> Result<BTreeMap<u32, QP>> {
        let block = node.expect_child(key)?;
        let mut map = BTreeMap::new();
        for (name, img) in block.children() {
            let j = names
                .index(name)
                .ok_or_else(|| doc_err(format!("unknown indeterminate '{name}'")))?;
            let text = img
                .as_leaf()
                .ok_or_else(|| doc_err(format!("image of '{name}' is not a value")))?;
            map.insert(j, parse_diffpoly(text, names)?);
        }
        Ok(map)
    };
    Automorphism::new(n, read_map("forward")?, read_map("inverse")?, tag)
}

/// Serialize a change of variables under the given indeterminate names
/// (which must cover all `cv.n` indeterminates).
pub fn cv_to_node(cv: &ChangeOfVariables, names: &VarNames) -> Node {
    let mut node = Node::list();
    let all: Vec<String> = (1..=cv.n).map(|j| names.name(j)).collect();
    node.push_leaf("vars", all.join(", "));
    node.push_leaf("n", cv.n.to_string());
    node.push_leaf("d", cv.d.to_string());
    node.push_leaf("time", cv.time.to_string());
    if let Some(t) = cv.t_index {
        node.push_leaf("t-index", names.name(t));
    }
    node.push_leaf("p-star", format_diffpoly(&cv.p_star, names));
    node.push_leaf("guard-star", format_diffpoly(&cv.guard_star, names));
    let mut steps = Node::list();
    for step in &cv.steps {
        steps.push("step", automorphism_node(step, names));
    }
    node.push("steps", steps);
    node.push("hyper", automorphism_node(&cv.hyper, names));
    if let Some(eq1) = &cv.eq1 {
        let mut block = Node::list();
        block.push_leaf("q", format_diffpoly(&eq1.q, names));
        let mut table = Node::list();
        for (j, t_j) in &eq1.t {
            table.push_leaf(names.name(*j), format_diffpoly(t_j, names));
        }
        block.push("table", table);
        node.push("eq1", block);
    }
    node
}

/// Read back a change of variables document; returns the names it declared
/// alongside the reconstructed value. Automorphism round trips are
/// revalidated during reconstruction.
pub fn cv_from_node(node: &Node) -> Result<(ChangeOfVariables, VarNames)> {
    let vars = node.expect_leaf("vars")?;
    let names = VarNames::new(
        vars.split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
    )?;
    let n: u32 = node
        .expect_leaf("n")?
        .parse()
        .map_err(|_| doc_err("n is not a number"))?;
    let d: u32 = node
        .expect_leaf("d")?
        .parse()
        .map_err(|_| doc_err("d is not a number"))?;
    if names.len() != n {
        return Err(doc_err(format!(
            "document declares {} names for {} indeterminates",
            names.len(),
            n
        )));
    }
    if d >= n {
        return Err(doc_err("d must be smaller than n"));
    }
    let time: bool = node
        .expect_leaf("time")?
        .parse()
        .map_err(|_| doc_err("time is not a boolean"))?;
    let t_index = match node.get("t-index") {
        Some(t) => {
            let name = t
                .as_leaf()
                .ok_or_else(|| doc_err("t-index is not a value"))?;
            Some(
                names
                    .index(name)
                    .ok_or_else(|| doc_err(format!("unknown indeterminate '{name}'")))?,
            )
        }
        None => None,
    };
    let p_star = parse_diffpoly(node.expect_leaf("p-star")?, &names)?;
    let guard_star = parse_diffpoly(node.expect_leaf("guard-star")?, &names)?;
    let mut steps = Vec::new();
    for step in node.expect_child("steps")?.get_all("step") {
        steps.push(automorphism_from_node(step, &names)?);
    }
    let hyper = automorphism_from_node(node.expect_child("hyper")?, &names)?;
    let eq1 = match node.get("eq1") {
        Some(block) => {
            let q = parse_diffpoly(block.expect_leaf("q")?, &names)?;
            let mut t = BTreeMap::new();
            for (name, t_j) in block.expect_child("table")?.children() {
                let j = names
                    .index(name)
                    .ok_or_else(|| doc_err(format!("unknown indeterminate '{name}'")))?;
                let text = t_j
                    .as_leaf()
                    .ok_or_else(|| doc_err(format!("entry for '{name}' is not a value")))?;
                t.insert(j, parse_diffpoly(text, &names)?);
            }
            Some(Eq1Table { q, t })
        }
        None => None,
    };
    let cv = ChangeOfVariables {
        n,
        d,
        time,
        t_index,
        steps,
        hyper,
        p_star,
        guard_star,
        eq1,
    };
    Ok((cv, names))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{normalize, normalize_hypersurface, PipelineParams};
    use crate::poly::DerivVar;

    #[test]
    fn emit_and_parse_round_trip() {
        let mut doc = Node::list();
        doc.push_leaf("status", "ok");
        let mut inner = Node::list();
        inner.push_leaf("value", "x' + 1/2");
        inner.push_leaf("value", "second entry");
        doc.push("block", inner);
        let text = doc.emit();
        let back = Node::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.expect_leaf("status").unwrap(), "ok");
        assert_eq!(back.expect_child("block").unwrap().get_all("value").len(), 2);
    }

    #[test]
    fn parse_rejects_malformed_documents() {
        assert!(matches!(Node::parse("   key: odd"), Err(Error::Document { .. })));
        assert!(matches!(Node::parse("no colon here"), Err(Error::Document { .. })));
        assert!(matches!(
            Node::parse("a: 1\n    b: 2"),
            Err(Error::Document { .. })
        ));
    }

    #[test]
    fn change_of_variables_round_trip() {
        let p = QP::var(DerivVar::new(2, 1)).sub_ref(&QP::var(DerivVar::new(1, 0)));
        let cv = normalize_hypersurface(&p, &QP::one(), 1, &PipelineParams::default()).unwrap();
        let names = VarNames::new(vec!["x".into(), "y".into()]).unwrap();
        let node = cv_to_node(&cv, &names);
        let text = node.emit();
        let (back, back_names) = cv_from_node(&Node::parse(&text).unwrap()).unwrap();
        assert_eq!(back.p_star, cv.p_star);
        assert_eq!(back.guard_star, cv.guard_star);
        assert_eq!(back.steps.len(), cv.steps.len());
        assert_eq!(back_names.name(2), "y");
        // Emission is deterministic byte for byte.
        assert_eq!(cv_to_node(&back, &back_names).emit(), text);
    }

    #[test]
    fn eq1_table_survives_the_round_trip() {
        let rels = vec![
            QP::var(DerivVar::new(2, 0)).sub_ref(&QP::var(DerivVar::new(1, 1))),
            QP::var(DerivVar::new(3, 0)).sub_ref(&QP::var(DerivVar::new(1, 2))),
        ];
        let cv = normalize(&rels, &QP::one(), 3, 1, &PipelineParams::default()).unwrap();
        let names = VarNames::new(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let text = cv_to_node(&cv, &names).emit();
        let (back, _) = cv_from_node(&Node::parse(&text).unwrap()).unwrap();
        let eq1 = back.eq1.expect("table present");
        assert_eq!(eq1.q, cv.eq1.as_ref().unwrap().q);
        assert_eq!(eq1.t, cv.eq1.as_ref().unwrap().t);
    }
}
