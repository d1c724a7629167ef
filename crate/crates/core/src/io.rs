//! JSON documents for pomonoids, S-posets, tossing certificates, sentence
//! lists and reports.
//!
//! Elements are referred to by name throughout. Order relations are given by
//! generating pairs and closed reflexively and transitively on input; output
//! lists every strict pair, sorted.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::axioms::{parse_formula, Sentence};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::structures::{Pomonoid, RawPomonoid, RawSPoset, SPoset, Side};
use crate::tensor::{Skeleton, TossingCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PomonoidDoc {
    pub elements: Vec<String>,
    pub one: String,
    pub mul: Vec<Vec<String>>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

/// A pomonoid given inline or by a path relative to the referring document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MonoidRef {
    Path(String),
    Inline(Box<Document>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SPosetDoc {
    pub monoid: MonoidRef,
    pub side: Side,
    pub elements: Vec<String>,
    /// Rows indexed by monoid element, columns by carrier element.
    pub act: Vec<Vec<String>>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

/// A tossing between `from` and `to` in `A × B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TossingDoc {
    pub from: (String, String),
    pub to: (String, String),
    /// One half, or two for a double tossing.
    pub skeleton: Vec<Vec<String>>,
    /// Forward rows `(a_i, b_i)`, then backward rows `(c_j, d_j)`.
    pub rows: Vec<(String, String)>,
    pub doubled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SentenceDoc {
    pub label: String,
    pub formula: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub bound_relative: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SentencesDoc {
    pub monoid: MonoidRef,
    pub class: String,
    pub sentences: Vec<SentenceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub command: String,
    pub result: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    Pomonoid(PomonoidDoc),
    Sposet(SPosetDoc),
    Tossing(TossingDoc),
    Sentences(SentencesDoc),
    Report(ReportDoc),
}

impl Document {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialise");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(syntax)
    }
}

fn syntax(e: serde_json::Error) -> Error {
    Error::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}

fn index_map(names: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            return Err(Error::Malformed(format!("duplicate {what} name `{n}`")));
        }
    }
    Ok(map)
}

fn lookup(map: &HashMap<String, usize>, name: &str, what: &str) -> Result<usize> {
    map.get(name).copied().ok_or_else(|| Error::Malformed(format!("unknown {what} `{name}`")))
}

fn closed_order(map: &HashMap<String, usize>, n: usize, pairs: &[(String, String)], what: &str) -> Result<Relation> {
    let mut r = Relation::identity(n);
    for (a, b) in pairs {
        r.set(lookup(map, a, what)?, lookup(map, b, what)?);
    }
    r.close_transitive();
    Ok(r)
}

fn strict_pairs(names: &[String], r: &Relation) -> Vec<(String, String)> {
    r.strict_pairs().map(|(a, b)| (names[a].clone(), names[b].clone())).collect()
}

pub fn pomonoid_from_doc(doc: &PomonoidDoc) -> Result<Pomonoid> {
    let n = doc.elements.len();
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    let map = index_map(&doc.elements, "monoid element")?;
    if doc.mul.len() != n || doc.mul.iter().any(|r| r.len() != n) {
        return Err(Error::Malformed(format!("multiplication table is not {n}x{n}")));
    }
    let mul = doc
        .mul
        .iter()
        .map(|row| row.iter().map(|x| lookup(&map, x, "monoid element")).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let one = lookup(&map, &doc.one, "monoid element")?;
    let leq = closed_order(&map, n, &doc.leq, "monoid element")?;
    Pomonoid::new(RawPomonoid { mul, one, leq: leq.to_matrix(), names: Some(doc.elements.clone()) })
}

pub fn pomonoid_to_doc(m: &Pomonoid) -> PomonoidDoc {
    let names = m.names();
    PomonoidDoc {
        elements: names.to_vec(),
        one: names[m.one()].clone(),
        mul: m.elements().map(|a| m.elements().map(|b| names[m.mul(a, b)].clone()).collect()).collect(),
        leq: strict_pairs(names, m.order()),
    }
}

/// Resolves a monoid reference; paths are relative to `base`.
pub fn resolve_monoid(r: &MonoidRef, base: Option<&Path>) -> Result<Pomonoid> {
    match r {
        MonoidRef::Inline(doc) => match doc.as_ref() {
            Document::Pomonoid(p) => pomonoid_from_doc(p),
            _ => Err(Error::Malformed("inline monoid must be a pomonoid document".into())),
        },
        MonoidRef::Path(p) => {
            let path = base.map_or_else(|| PathBuf::from(p), |b| b.join(p));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
            let dir = path.parent().map(Path::to_path_buf);
            match parse_structure(&text, dir.as_deref())? {
                Structure::Pomonoid(m) => Ok(m),
                Structure::SPoset(_) => Err(Error::Malformed(format!("{} is not a pomonoid", path.display()))),
            }
        }
    }
}

pub fn sposet_from_doc(doc: &SPosetDoc, base: Option<&Path>) -> Result<SPoset> {
    let monoid = Arc::new(resolve_monoid(&doc.monoid, base)?);
    sposet_over(doc, monoid)
}

/// Builds the S-poset of `doc` over an already resolved pomonoid.
pub fn sposet_over(doc: &SPosetDoc, monoid: Arc<Pomonoid>) -> Result<SPoset> {
    let n = doc.elements.len();
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    let map = index_map(&doc.elements, "element")?;
    if doc.act.len() != monoid.size() || doc.act.iter().any(|r| r.len() != n) {
        return Err(Error::Malformed(format!("action table must be {}x{n}", monoid.size())));
    }
    let act = doc
        .act
        .iter()
        .map(|row| row.iter().map(|x| lookup(&map, x, "element")).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let leq = closed_order(&map, n, &doc.leq, "element")?;
    SPoset::new(monoid, RawSPoset { side: doc.side, act, leq: leq.to_matrix(), names: Some(doc.elements.clone()) })
}

pub fn sposet_to_doc(b: &SPoset, monoid: MonoidRef) -> SPosetDoc {
    let names = b.names();
    SPosetDoc {
        monoid,
        side: b.side(),
        elements: names.to_vec(),
        act: b.monoid().elements().map(|s| b.elements().map(|a| names[b.act(s, a)].clone()).collect()).collect(),
        leq: strict_pairs(names, b.order()),
    }
}

/// An S-poset document with its pomonoid inline.
pub fn sposet_document(b: &SPoset) -> Document {
    let inline = MonoidRef::Inline(Box::new(Document::Pomonoid(pomonoid_to_doc(b.monoid()))));
    Document::Sposet(sposet_to_doc(b, inline))
}

#[derive(Debug, Clone)]
pub enum Structure {
    Pomonoid(Pomonoid),
    SPoset(SPoset),
}

/// Parses and validates a pomonoid or S-poset document.
pub fn parse_structure(text: &str, base: Option<&Path>) -> Result<Structure> {
    match Document::from_json(text)? {
        Document::Pomonoid(p) => Ok(Structure::Pomonoid(pomonoid_from_doc(&p)?)),
        Document::Sposet(s) => Ok(Structure::SPoset(sposet_from_doc(&s, base)?)),
        _ => Err(Error::Malformed("expected a pomonoid or sposet document".into())),
    }
}

/// Reads a structure document from disk; monoid paths resolve against its
/// directory.
pub fn load_structure(path: &Path) -> Result<Structure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
    parse_structure(&text, path.parent())
}

pub fn tossing_to_doc(a: &SPoset, b: &SPoset, cert: &TossingCertificate) -> TossingDoc {
    let m = a.monoid();
    let elems = |v: &[usize]| v.iter().map(|&s| m.name(s).to_string()).collect::<Vec<_>>();
    let mut skeleton = vec![elems(&cert.skeleton.entries)];
    if let Some(second) = &cert.skeleton.doubled {
        skeleton.push(elems(second));
    }
    let pair = |(x, y): (usize, usize)| (a.name(x).to_string(), b.name(y).to_string());
    let rows = cert.forward_rows().into_iter().chain(cert.backward_rows()).map(pair).collect();
    TossingDoc { from: pair(cert.from), to: pair(cert.to), skeleton, rows, doubled: cert.skeleton.is_doubled() }
}

pub fn tossing_from_doc(a: &SPoset, b: &SPoset, doc: &TossingDoc) -> Result<TossingCertificate> {
    let m = a.monoid();
    let monoid_map = index_map(m.names(), "monoid element")?;
    let a_map = index_map(a.names(), "element")?;
    let b_map = index_map(b.names(), "element")?;
    let elems = |v: &[String]| v.iter().map(|s| lookup(&monoid_map, s, "monoid element")).collect::<Result<Vec<_>>>();
    let pair = |(x, y): &(String, String)| -> Result<(usize, usize)> {
        Ok((lookup(&a_map, x, "element")?, lookup(&b_map, y, "element")?))
    };
    let skeleton = match (doc.doubled, doc.skeleton.as_slice()) {
        (false, [first]) => Skeleton::single(elems(first)?)?,
        (true, [first, second]) => Skeleton::double(elems(first)?, elems(second)?)?,
        _ => return Err(Error::Malformed("skeleton must have one half, or two when doubled".into())),
    };
    let (mlen, nlen) = (skeleton.first_len(), skeleton.second_len());
    if doc.rows.len() != mlen + nlen {
        return Err(Error::Arity { expected: mlen + nlen, found: doc.rows.len() });
    }
    let rows = doc.rows.iter().map(pair).collect::<Result<Vec<_>>>()?;
    let (forward, backward) = rows.split_at(mlen);
    let from = pair(&doc.from)?;
    let to = pair(&doc.to)?;
    if forward.first().map(|r| r.0) != Some(from.0) || backward.first().is_some_and(|r| r.0 != to.0) {
        return Err(Error::Malformed("first row of each half must start at its endpoint".into()));
    }
    let mut a_chain: Vec<usize> = forward[1..].iter().map(|r| r.0).collect();
    let mut b_chain: Vec<usize> = forward.iter().map(|r| r.1).collect();
    if !backward.is_empty() {
        a_chain.extend(backward[1..].iter().map(|r| r.0));
        b_chain.extend(backward.iter().map(|r| r.1));
    }
    Ok(TossingCertificate { from, to, skeleton, a_chain, b_chain })
}

pub fn sentences_to_doc(monoid: MonoidRef, class: &str, sentences: &[Sentence], m: &Pomonoid) -> SentencesDoc {
    SentencesDoc {
        monoid,
        class: class.to_string(),
        sentences: sentences
            .iter()
            .map(|s| SentenceDoc { label: s.label.clone(), formula: s.formula.render(m), bound_relative: s.bound_relative })
            .collect(),
    }
}

pub fn sentences_from_doc(doc: &SentencesDoc, m: &Pomonoid) -> Result<Vec<Sentence>> {
    doc.sentences
        .iter()
        .map(|s| {
            let formula = parse_formula(&s.formula, m)?;
            Ok(Sentence { label: s.label.clone(), formula, bound_relative: s.bound_relative })
        })
        .collect()
}
