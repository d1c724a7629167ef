//! Axiom schemes for classes of left S-posets over a finite pomonoid, and
//! the computations they are built from.

mod egood;
mod relations;
mod sentence;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use egood::{e_good_check, good_through, star_condition, StarEntry, StarReport};
pub use relations::{
    dominates, dominating_set, element_generators, pair_generators, r_leq_elements, r_leq_pairs, relation_sets,
    DominatingSet, DominationKind, RelationSets,
};
pub use sentence::{
    fo_eval, fo_eval_tables, parse_formula, parse_formula_at, parse_sentences, render_sentences, Formula, Sentence, Term,
};

use crate::conditions::{check_condition, ConditionName};
use crate::error::{Error, Result};
use crate::search::enumerate_sposets;
use crate::structures::{Pomonoid, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxiomClass {
    PiS,
    EP,
    Pw,
    PWP,
    PWPw,
    W,
}

impl AxiomClass {
    pub const ALL: [AxiomClass; 6] =
        [AxiomClass::PiS, AxiomClass::EP, AxiomClass::Pw, AxiomClass::PWP, AxiomClass::PWPw, AxiomClass::W];

    /// The condition the scheme axiomatises.
    pub fn condition(self) -> Option<ConditionName> {
        match self {
            AxiomClass::PiS => None,
            AxiomClass::EP => Some(ConditionName::EP),
            AxiomClass::Pw => Some(ConditionName::Pw),
            AxiomClass::PWP => Some(ConditionName::PWP),
            AxiomClass::PWPw => Some(ConditionName::PWPw),
            AxiomClass::W => Some(ConditionName::W),
        }
    }
}

impl fmt::Display for AxiomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for AxiomClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AxiomClass::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownClass(s.to_string()))
    }
}

fn x() -> Term {
    Term::var("x")
}

fn y() -> Term {
    Term::var("y")
}

fn sx(s: usize) -> Term {
    Term::act(s, "x")
}

fn sy(s: usize) -> Term {
    Term::act(s, "y")
}

fn sz(s: usize) -> Term {
    Term::act(s, "z")
}

fn label(m: &Pomonoid, class: &str, elems: &[usize]) -> String {
    format!("{class}[{}]", elems.iter().map(|&e| m.name(e)).collect::<Vec<_>>().join(","))
}

fn pi_s(m: &Pomonoid) -> Vec<Sentence> {
    let mut out = vec![Sentence::new("one", Formula::forall(&["x"], Formula::eq(sx(m.one()), x())))];
    for s in m.elements() {
        for t in m.elements() {
            let f = Formula::forall(&["x"], Formula::eq(Term::acts(vec![s, t], "x"), sx(m.mul(s, t))));
            out.push(Sentence::new(label(m, "phi", &[s, t]), f));
        }
    }
    for s in m.elements() {
        let f = Formula::forall(&["x", "y"], Formula::implies(Formula::leq(x(), y()), Formula::leq(sx(s), sy(s))));
        out.push(Sentence::new(label(m, "theta", &[s]), f));
    }
    for (u, v) in m.order().pairs() {
        out.push(Sentence::new(label(m, "psi", &[u, v]), Formula::forall(&["x"], Formula::leq(sx(u), sx(v)))));
    }
    out
}

/// `forall x y. exists z. (premise -> disjunction)`.
fn prenex2(premise: Formula, disjuncts: Vec<Formula>) -> Formula {
    Formula::forall(&["x", "y"], Formula::exists(&["z"], Formula::implies(premise, Formula::or(disjuncts))))
}

/// `(s, t)` pairs for which some left S-poset of size at most `bound`
/// satisfying (EP) has an element with `sa <= ta`.
fn ep_realised(monoid: &Arc<Pomonoid>, wanted: &[(usize, usize)], bound: usize) -> Result<Vec<bool>> {
    let mut found = vec![false; wanted.len()];
    for size in 1..=bound {
        if found.iter().all(|&f| f) {
            break;
        }
        for b in enumerate_sposets(monoid, size, Side::Left)? {
            let open: Vec<usize> = (0..wanted.len())
                .filter(|&i| !found[i])
                .filter(|&i| {
                    let (s, t) = wanted[i];
                    b.elements().any(|a| b.leq(b.act(s, a), b.act(t, a)))
                })
                .collect();
            if !open.is_empty() && check_condition(&b, ConditionName::EP)?.holds {
                for i in open {
                    found[i] = true;
                }
            }
        }
    }
    Ok(found)
}

/// The sentences of a scheme. `ep_bound` is the largest S-poset size
/// searched when deciding whether a pair `(s, t)` is realised in (EP).
pub fn emit_axioms(monoid: &Arc<Pomonoid>, which: AxiomClass, ep_bound: usize) -> Result<Vec<Sentence>> {
    let m = monoid.as_ref();
    let pairs: Vec<(usize, usize)> = m.elements().flat_map(|s| m.elements().map(move |t| (s, t))).collect();
    Ok(match which {
        AxiomClass::PiS => pi_s(m),
        AxiomClass::EP => {
            let undecided: Vec<(usize, usize)> = pairs
                .iter()
                .copied()
                .filter(|&(s, t)| r_leq_elements(m, s, t).is_empty() && !r_leq_pairs(m, s, t).is_empty())
                .collect();
            let realised = ep_realised(monoid, &undecided, ep_bound)?;
            pairs
                .iter()
                .map(|&(s, t)| {
                    let gens = pair_generators(m, &r_leq_pairs(m, s, t));
                    let searched = undecided.iter().position(|&p| p == (s, t));
                    let positive = !gens.is_empty() && searched.is_none_or(|i| realised[i]);
                    let premise = Formula::leq(sx(s), sx(t));
                    let formula = if positive {
                        let disjuncts = gens
                            .iter()
                            .map(|&(u, v)| Formula::And(vec![Formula::eq(x(), sz(u)), Formula::eq(x(), sz(v))]))
                            .collect();
                        Formula::forall(&["x"], Formula::exists(&["z"], Formula::implies(premise, Formula::or(disjuncts))))
                    } else {
                        Formula::forall(&["x"], Formula::not(premise))
                    };
                    Sentence { label: label(m, "EP", &[s, t]), formula, bound_relative: searched.is_some() && !positive }
                })
                .collect()
        }
        AxiomClass::Pw | AxiomClass::W => pairs
            .iter()
            .map(|&(s, t)| {
                let (kind, name) = if which == AxiomClass::Pw {
                    (DominationKind::Pw { s, t }, "Pw")
                } else {
                    (DominationKind::W { s, t }, "W")
                };
                let d = dominating_set(m, kind)?;
                let premise = Formula::leq(sx(s), sy(t));
                let formula = if d.empty {
                    Formula::forall(&["x", "y"], Formula::not(premise))
                } else {
                    let disjuncts = d
                        .set
                        .iter()
                        .map(|&(p, q)| {
                            if which == AxiomClass::Pw {
                                Formula::And(vec![Formula::leq(x(), sz(p)), Formula::leq(sz(q), y())])
                            } else {
                                Formula::And(vec![Formula::leq(sx(s), sz(p)), Formula::leq(sz(q), sy(t))])
                            }
                        })
                        .collect();
                    prenex2(premise, disjuncts)
                };
                Ok(Sentence::new(label(m, name, &[s, t]), formula))
            })
            .collect::<Result<_>>()?,
        AxiomClass::PWP => m
            .elements()
            .map(|s| {
                let gens = pair_generators(m, &r_leq_pairs(m, s, s));
                let disjuncts =
                    gens.iter().map(|&(u, v)| Formula::And(vec![Formula::eq(x(), sz(u)), Formula::eq(y(), sz(v))])).collect();
                Sentence::new(label(m, "PWP", &[s]), prenex2(Formula::leq(sx(s), sy(s)), disjuncts))
            })
            .collect(),
        AxiomClass::PWPw => m
            .elements()
            .map(|s| {
                let d = dominating_set(m, DominationKind::PWPw { s })?;
                let disjuncts =
                    d.set.iter().map(|&(u, v)| Formula::And(vec![Formula::leq(x(), sz(u)), Formula::leq(sz(v), y())])).collect();
                Ok(Sentence::new(label(m, "PWPw", &[s]), prenex2(Formula::leq(sx(s), sy(s)), disjuncts)))
            })
            .collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::Relation;
    use crate::structures::{RawSPoset, SPoset};

    #[test]
    fn pi_s_holds_on_valid_structures() {
        for m in [Pomonoid::trivial(), Pomonoid::u2(Some(true)), Pomonoid::cyclic_group(2)] {
            let m = Arc::new(m);
            let s = SPoset::regular(m.clone(), Side::Left);
            for sentence in emit_axioms(&m, AxiomClass::PiS, 1).unwrap() {
                assert!(fo_eval(&s, &sentence.formula).unwrap(), "{}", sentence.label);
            }
        }
        let t1 = Arc::new(Pomonoid::trivial());
        let chain = SPoset::with_trivial_action(t1.clone(), Side::Left, Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)])).unwrap();
        for sentence in emit_axioms(&t1, AxiomClass::PiS, 1).unwrap() {
            assert!(fo_eval(&chain, &sentence.formula).unwrap());
        }
    }

    #[test]
    fn non_monotone_action_falsifies_theta() {
        // over discrete U2, e swaps the two points of a 2-chain
        let m = Arc::new(Pomonoid::u2(None));
        let raw = RawSPoset {
            side: Side::Left,
            act: vec![vec![0, 1], vec![1, 1]],
            leq: vec![vec![true, true], vec![false, true]],
            names: None,
        };
        let raw_bad = RawSPoset { act: vec![vec![0, 1], vec![1, 0]], ..raw.clone() };
        let sentences = emit_axioms(&m, AxiomClass::PiS, 1).unwrap();
        let failing: Vec<_> = sentences.iter().filter(|s| !fo_eval_tables(&raw_bad, &s.formula).unwrap()).map(|s| s.label.as_str()).collect();
        assert!(failing.contains(&"theta[e]"));
        assert!(sentences.iter().all(|s| fo_eval_tables(&raw, &s.formula).unwrap()));
    }

    #[test]
    fn u2_pw_has_four_positive_sentences() {
        let m = Arc::new(Pomonoid::u2(Some(true)));
        let pw = emit_axioms(&m, AxiomClass::Pw, 1).unwrap();
        assert_eq!(pw.len(), 4);
        assert!(pw.iter().all(|s| matches!(s.formula, Formula::Forall(_, ref b) if matches!(**b, Formula::Exists(..)))));
        let text = render_sentences(&pw, &m);
        assert_eq!(parse_sentences(&text, &m).unwrap(), pw);
    }

    #[test]
    fn discrete_u2_pw_one_e_is_positive() {
        let m = Arc::new(Pomonoid::u2(None));
        let pw = emit_axioms(&m, AxiomClass::Pw, 1).unwrap();
        let s = pw.iter().find(|s| s.label == "Pw[1,e]").unwrap();
        assert_eq!(s.formula.render(&m), "forall x y. exists z. ((1*x <= e*y) -> ((x <= e*z) & (1*z <= y)))");
    }

    #[test]
    fn class_names() {
        assert_eq!("pws".parse::<AxiomClass>().ok(), None);
        assert_eq!("PWPw".parse::<AxiomClass>().unwrap(), AxiomClass::PWPw);
    }
}
