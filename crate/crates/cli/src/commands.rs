use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use sposet::axioms::{
    dominating_set, e_good_check, emit_axioms, fo_eval, relation_sets, render_sentences, star_condition, AxiomClass,
    DominationKind, Sentence,
};
use sposet::conditions::{check_condition, ConditionName, Counterexample};
use sposet::flatness::{check_flat_bounded, check_ideal_flatness, FlatFailure, FlatVariant};
use sposet::io::{
    load_structure, pomonoid_to_doc, sentences_from_doc, sentences_to_doc, sposet_document, tossing_from_doc,
    tossing_to_doc, Document, MonoidRef, ReportDoc, Structure,
};
use sposet::search::{audit_arrows, audit_family, counterexample_search, enumerate_left_family, enumerate_pomonoids, enumerate_sposets, ClassName};
use sposet::structure::{decompose, is_free};
use sposet::tensor::{extract_double_tossing, extract_tossing, tensor_product, verify_tossing, TensorPoset};
use sposet::{Error, Pomonoid, Result, SPoset, Side};

use crate::{Cli, Command, Domination, Format, SideArg};

pub struct Output {
    pub text: String,
    pub code: u8,
}

fn emit(cli: &Cli, doc: Document, text: impl FnOnce() -> String, code: u8) -> Output {
    let text = match cli.format {
        Format::Json => doc.to_json(),
        Format::Text => {
            let mut t = text();
            if !t.ends_with('\n') {
                t.push('\n');
            }
            t
        }
    };
    Output { text, code }
}

fn report(command: &str, result: Value) -> Document {
    Document::Report(ReportDoc { command: command.to_string(), result })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialise")
}

fn load_monoid(path: &Path) -> Result<Arc<Pomonoid>> {
    match load_structure(path)? {
        Structure::Pomonoid(m) => Ok(Arc::new(m)),
        Structure::SPoset(s) => Ok(s.monoid().clone()),
    }
}

fn load_sposet(path: &Path) -> Result<SPoset> {
    match load_structure(path)? {
        Structure::SPoset(s) => Ok(s),
        Structure::Pomonoid(_) => Err(Error::Malformed(format!("{} is not an S-poset", path.display()))),
    }
}

/// An S-poset on the given side; a pomonoid document gives the pomonoid
/// acting on itself.
fn load_factor(path: &Path, side: Side) -> Result<SPoset> {
    let s = match load_structure(path)? {
        Structure::SPoset(s) => s,
        Structure::Pomonoid(m) => SPoset::regular(Arc::new(m), side),
    };
    if s.side() != side {
        return Err(Error::WrongSide { expected: side, found: s.side() });
    }
    Ok(s)
}

fn element(m: &Pomonoid, name: &str) -> Result<usize> {
    m.index_of(name)
        .or_else(|| name.parse().ok().filter(|&i: &usize| i < m.size()))
        .ok_or_else(|| Error::Malformed(format!("unknown monoid element `{name}`")))
}

fn carrier(s: &SPoset, name: &str) -> Result<usize> {
    s.index_of(name)
        .or_else(|| name.parse().ok().filter(|&i: &usize| i < s.size()))
        .ok_or_else(|| Error::Malformed(format!("unknown element `{name}`")))
}

fn pair_arg(a: &SPoset, b: &SPoset, text: &str) -> Result<(usize, usize)> {
    let (x, y) = text.split_once(',').ok_or_else(|| Error::Malformed(format!("expected `a,b`, got `{text}`")))?;
    Ok((carrier(a, x.trim())?, carrier(b, y.trim())?))
}

fn inline(m: &Pomonoid) -> MonoidRef {
    MonoidRef::Inline(Box::new(Document::Pomonoid(pomonoid_to_doc(m))))
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Validate { file } => validate(cli, file),
        Command::Tensor { left, right, certify, double } => tensor(cli, left, right, certify.as_deref(), *double),
        Command::Verify { left, right, certificate } => verify(cli, left, right, certificate),
        Command::Check { condition, sposet } => check(cli, condition, sposet),
        Command::Flat { variant, sposet, bound } => flat(cli, variant, sposet, bound.unwrap_or(cli.skeleton_bound)),
        Command::Classify { sposet } => classify(cli, sposet),
        Command::Axioms { monoid, class, emit: _, eval, sentences } => axioms(cli, monoid, class, eval.as_deref(), sentences.as_deref()),
        Command::Relations { monoid, s, t, dominating } => relations(cli, monoid, s, t.as_deref(), *dominating),
        Command::Egood { monoid, a, x, y, e } => egood(cli, monoid, [a, x, y, e]),
        Command::Enumerate { pomonoids, monoid, size, side } => enumerate(cli, *pomonoids, monoid.as_deref(), *size, *side),
        Command::Audit { monoid, sample } => audit(cli, monoid, *sample),
        Command::Search { monoid, stronger, weaker } => search(cli, monoid, stronger, weaker),
    }
}

fn validate(cli: &Cli, file: &Path) -> Result<Output> {
    let (kind, size) = match load_structure(file) {
        Ok(Structure::Pomonoid(m)) => ("pomonoid", m.size()),
        Ok(Structure::SPoset(s)) => ("sposet", s.size()),
        Err(Error::Invalid(r)) => {
            let doc = report("validate", json!({ "valid": false, "report": to_value(&r) }));
            return Ok(emit(cli, doc, || format!("invalid: {r}"), 1));
        }
        Err(e) => return Err(e),
    };
    let doc = report("validate", json!({ "valid": true, "kind": kind, "size": size }));
    Ok(emit(cli, doc, || format!("valid {kind} with {size} elements"), 0))
}

fn class_names(t: &TensorPoset) -> Vec<String> {
    t.classes
        .iter()
        .map(|c| {
            let (a, b) = t.unpair(c[0]);
            format!("{}⊗{}", t.left_factor.name(a), t.right_factor.name(b))
        })
        .collect()
}

fn tensor(cli: &Cli, left: &Path, right: &Path, certify: Option<&[String]>, double: bool) -> Result<Output> {
    let a = load_factor(left, Side::Right)?;
    let b = load_factor(right, Side::Left)?;
    let t = tensor_product(&a, &b)?;
    let Some(ends) = certify else {
        let names = class_names(&t);
        let leq: Vec<(String, String)> = t.leq.strict_pairs().map(|(i, j)| (names[i].clone(), names[j].clone())).collect();
        let doc = report("tensor", json!({ "classes": names, "leq": leq }));
        let text = || {
            let mut s = format!("{} classes: {}\n", names.len(), names.join(" "));
            for (x, y) in &leq {
                let _ = writeln!(s, "{x} <= {y}");
            }
            s
        };
        return Ok(emit(cli, doc, text, 0));
    };
    let p = pair_arg(&a, &b, &ends[0])?;
    let q = pair_arg(&a, &b, &ends[1])?;
    let cert = if double { extract_double_tossing(&t, p, q)? } else { extract_tossing(&t, p, q)? };
    match cert {
        Some(cert) => {
            let doc = Document::Tossing(tossing_to_doc(&a, &b, &cert));
            let text = || {
                let rows: Vec<String> = cert.forward_rows().iter().chain(&cert.backward_rows()).map(|&(x, y)| format!("({}, {})", a.name(x), b.name(y))).collect();
                format!("tossing with skeleton {}: {}", cert.skeleton.display(a.monoid().names()), rows.join(" "))
            };
            Ok(emit(cli, doc, text, 0))
        }
        None => {
            let relation = if double { "equal" } else { "below" };
            let doc = report("tensor", json!({ "certified": false, "from": ends[0], "to": ends[1] }));
            Ok(emit(cli, doc, || format!("{} is not {relation} {}", ends[0], ends[1]), 1))
        }
    }
}

fn verify(cli: &Cli, left: &Path, right: &Path, certificate: &Path) -> Result<Output> {
    let a = load_factor(left, Side::Right)?;
    let b = load_factor(right, Side::Left)?;
    let text = std::fs::read_to_string(certificate)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", certificate.display())))?;
    let Document::Tossing(doc) = Document::from_json(&text)? else {
        return Err(Error::Malformed("expected a tossing document".into()));
    };
    let cert = tossing_from_doc(&a, &b, &doc)?;
    let ok = verify_tossing(&a, &b, &cert)?;
    let out = report("verify", json!({ "valid": ok }));
    Ok(emit(cli, out, || if ok { "certificate verifies".into() } else { "certificate does not verify".into() }, u8::from(!ok)))
}

/// Names the entries of a premise tuple.
fn premise_text(b: &SPoset, c: &Counterexample) -> String {
    let m = b.monoid();
    let kinds: &[bool] = match c.condition {
        // true marks a carrier element
        ConditionName::E | ConditionName::EP => &[true, false, false],
        ConditionName::PWP | ConditionName::PWPw => &[true, true, false],
        _ => &[true, true, false, false],
    };
    let parts: Vec<&str> = c.premise.iter().zip(kinds).map(|(&i, &is_b)| if is_b { b.name(i) } else { m.name(i) }).collect();
    format!("({})", parts.join(", "))
}

fn check(cli: &Cli, condition: &str, sposet: &Path) -> Result<Output> {
    let c: ConditionName = condition.parse()?;
    let b = load_sposet(sposet)?;
    let v = check_condition(&b, c)?;
    let premise = v.counterexample.as_ref().map(|ce| premise_text(&b, ce));
    let doc = report("check", json!({ "verdict": to_value(&v), "counterexample_names": premise }));
    let text = || match &premise {
        None => format!("{c} holds ({} premises witnessed)", v.witness_table.len()),
        Some(p) => format!("{c} fails at premise {p}"),
    };
    Ok(emit(cli, doc, text, u8::from(!v.holds)))
}

fn failure_value(b: &SPoset, f: &FlatFailure) -> Value {
    let certificate = f.certificate.as_ref().map(|c| {
        // the larger right factor: S for ideals, the standard quotient otherwise
        let big = match &f.skeleton {
            None => SPoset::regular(b.monoid().clone(), Side::Right),
            Some(sk) => sposet::flatness::build_standard_quotient(b.monoid(), sk).expect("built during the check").quotient.quotient.clone(),
        };
        json!({ "left": to_value(&sposet_document(&big)), "tossing": to_value(&Document::Tossing(tossing_to_doc(&big, b, c))) })
    });
    json!({ "failure": to_value(f), "certificate": certificate })
}

fn flat(cli: &Cli, variant: &str, sposet: &Path, bound: usize) -> Result<Output> {
    let b = load_sposet(sposet)?;
    let v = match variant.to_ascii_uppercase().as_str() {
        "F" => check_flat_bounded(&b, false, bound)?,
        "PF" => check_flat_bounded(&b, true, bound)?,
        _ => check_ideal_flatness(&b, variant.parse::<FlatVariant>()?)?,
    };
    let failure = v.failing_instance.as_ref().map(|f| failure_value(&b, f));
    let doc = report("flat", json!({ "variant": variant, "holds": to_value(&v.holds), "failing_instance": failure }));
    let text = || match &v.failing_instance {
        None => format!("{variant}: {}", to_value(&v.holds)),
        Some(f) => format!("{variant} fails at pairs {:?}", f.pairs),
    };
    Ok(emit(cli, doc, text, u8::from(!v.passes())))
}

fn classify(cli: &Cli, sposet: &Path) -> Result<Output> {
    let b = load_sposet(sposet)?;
    let d = decompose(&b)?;
    let free = is_free(&b)?;
    let projective = d.all_generated();
    let doc = report("classify", json!({ "free_rank": free, "projective": projective, "decomposition": to_value(&d) }));
    let text = || match (free, projective) {
        (Some(k), _) => format!("free of rank {k}"),
        (None, true) => format!("projective, not free ({} components)", d.components.len()),
        (None, false) => "not projective".to_string(),
    };
    Ok(emit(cli, doc, text, 0))
}

fn axioms(cli: &Cli, monoid: &Path, class: &str, eval: Option<&Path>, given: Option<&Path>) -> Result<Output> {
    let which: AxiomClass = class.parse()?;
    let Some(target) = eval else {
        let m = load_monoid(monoid)?;
        let sentences = emit_axioms(&m, which, cli.max_size)?;
        let doc = Document::Sentences(sentences_to_doc(inline(&m), &which.to_string(), &sentences, &m));
        return Ok(emit(cli, doc, || render_sentences(&sentences, &m), 0));
    };
    let b = load_sposet(target)?;
    let m = b.monoid().clone();
    if *load_monoid(monoid)? != *m {
        return Err(Error::MonoidMismatch);
    }
    let sentences: Vec<Sentence> = match given {
        None => emit_axioms(&m, which, cli.max_size)?,
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
            match Document::from_json(&text)? {
                Document::Sentences(doc) => sentences_from_doc(&doc, &m)?,
                _ => return Err(Error::Malformed("expected a sentences document".into())),
            }
        }
    };
    let results: Vec<(String, bool)> =
        sentences.iter().map(|s| Ok((s.label.clone(), fo_eval(&b, &s.formula)?))).collect::<Result<_>>()?;
    let all = results.iter().all(|r| r.1);
    let failing: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
    let doc = report(
        "axioms",
        json!({ "class": which.to_string(), "models": all, "results": results.iter().map(|(l, h)| json!({ "label": l, "holds": h })).collect::<Vec<_>>() }),
    );
    let text = || if all { format!("models all {} sentences", results.len()) } else { format!("fails {}", failing.join(" ")) };
    Ok(emit(cli, doc, text, u8::from(!all)))
}

fn relations(cli: &Cli, monoid: &Path, s: &str, t: Option<&str>, dominating: Option<Domination>) -> Result<Output> {
    let m = load_monoid(monoid)?;
    let s = element(&m, s)?;
    let t = t.map_or(Ok(s), |t| element(&m, t))?;
    let r = relation_sets(&m, s, t)?;
    let dom = dominating
        .map(|d| {
            let kind = match d {
                Domination::Pw => DominationKind::Pw { s, t },
                Domination::Pwpw => DominationKind::PWPw { s },
                Domination::W => DominationKind::W { s, t },
            };
            dominating_set(&m, kind)
        })
        .transpose()?;
    let doc = report("relations", json!({ "sets": to_value(&r), "dominating": dom.as_ref().map(to_value) }));
    let text = || {
        let pairs = |v: &[(usize, usize)]| v.iter().map(|&(u, w)| format!("({},{})", m.name(u), m.name(w))).collect::<Vec<_>>().join(" ");
        let elems = |v: &[usize]| v.iter().map(|&u| m.name(u).to_string()).collect::<Vec<_>>().join(" ");
        let mut out = format!(
            "R<=: {}\ngenerators: {}\nr<=: {}\ngenerators: {}\n",
            pairs(&r.pairs),
            pairs(&r.pair_generators),
            elems(&r.elements),
            elems(&r.element_generators)
        );
        if let Some(d) = &dom {
            let _ = writeln!(out, "dominating: {}", if d.empty { "empty".to_string() } else { pairs(&d.set) });
        }
        out
    };
    Ok(emit(cli, doc, text, 0))
}

fn egood(cli: &Cli, monoid: &Path, args: [&Option<String>; 4]) -> Result<Output> {
    let m = load_monoid(monoid)?;
    if let [Some(a), Some(x), Some(y), Some(e)] = args {
        let (a, x, y, e) = (element(&m, a)?, element(&m, x)?, element(&m, y)?, element(&m, e)?);
        let good = e_good_check(&m, a, x, y, e)?;
        let doc = report("egood", json!({ "good": good }));
        let text = || format!("{} = {}{} is {}e-good through {}", m.name(a), m.name(x), m.name(y), if good { "" } else { "not " }, m.name(x));
        return Ok(emit(cli, doc, text, u8::from(!good)));
    }
    let r = star_condition(&m);
    let doc = report("egood", to_value(&r));
    let text = || {
        let mut out = format!("condition {}\n", if r.holds { "holds" } else { "fails" });
        for entry in &r.entries {
            let cover = entry.cover.as_ref().map_or("none".to_string(), |f| f.iter().map(|&x| m.name(x)).collect::<Vec<_>>().join(" "));
            let _ = writeln!(out, "{}: cover {cover}", m.name(entry.idempotent));
        }
        out
    };
    Ok(emit(cli, doc, text, u8::from(!r.holds)))
}

fn enumerate(cli: &Cli, pomonoids: Option<usize>, monoid: Option<&Path>, size: Option<usize>, side: SideArg) -> Result<Output> {
    let docs: Vec<Document> = match (pomonoids, monoid, size) {
        (Some(n), None, _) => enumerate_pomonoids(n)?.iter().map(|m| Document::Pomonoid(pomonoid_to_doc(m))).collect(),
        (None, Some(path), Some(k)) => {
            let m = load_monoid(path)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            enumerate_sposets(&m, k, side)?.iter().map(sposet_document).collect()
        }
        _ => return Err(Error::Malformed("give --pomonoids N, or --monoid FILE with --size M".into())),
    };
    let count = docs.len();
    let doc = report("enumerate", json!({ "count": count, "items": docs.iter().map(to_value).collect::<Vec<_>>() }));
    Ok(emit(cli, doc, || format!("{count} structures"), 0))
}

fn audit(cli: &Cli, monoid: &Path, sample: Option<usize>) -> Result<Output> {
    let m = load_monoid(monoid)?;
    let mut family = enumerate_left_family(&m, cli.max_size)?;
    if let Some(k) = sample {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let mut picked: Vec<usize> = (0..family.len()).collect::<Vec<_>>().choose_multiple(&mut rng, k).copied().collect();
        picked.sort_unstable();
        family = picked.into_iter().map(|i| family[i].clone()).collect();
    }
    eprintln!(
        "auditing {} instances against {} arrows, skeleton bound {}",
        family.len(),
        audit_arrows().len(),
        cli.skeleton_bound
    );
    let mut r = audit_family(&family, cli.skeleton_bound)?;
    r.monoid_size = m.size();
    r.max_size = cli.max_size;
    let clean = r.violations.is_empty();
    let doc = report("audit", to_value(&r));
    let text = || {
        let mut out = format!("{} instances, {} violations\n", r.instances_checked, r.violations.len());
        for v in &r.violations {
            let _ = writeln!(out, "violated: {}", v.arrow);
        }
        for arrow in r.strictness_witnesses.keys() {
            let _ = writeln!(out, "strict: {arrow}");
        }
        out
    };
    Ok(emit(cli, doc, text, u8::from(!clean)))
}

fn search(cli: &Cli, monoid: &Path, stronger: &str, weaker: &str) -> Result<Output> {
    let m = load_monoid(monoid)?;
    let (s, w): (ClassName, ClassName) = (stronger.parse()?, weaker.parse()?);
    eprintln!(
        "searching up to {} S-posets of size at most {}",
        enumerate_left_family(&m, cli.max_size)?.len(),
        cli.max_size
    );
    let found = counterexample_search(&m, cli.max_size, s, w, cli.skeleton_bound)?;
    let code = u8::from(found.is_some());
    let doc = report(
        "search",
        json!({ "stronger": s.as_str(), "weaker": w.as_str(), "max_size": cli.max_size, "counterexample": found.as_ref().map(|b| to_value(&sposet_document(b))) }),
    );
    let text = || match &found {
        None => format!("no S-poset of size at most {} is in {w} but not {s}", cli.max_size),
        Some(b) => format!("{} is in {w} but not {s}", serde_json::to_string(&sposet_document(b)).expect("documents serialise")),
    };
    Ok(emit(cli, doc, text, code))
}
