//! Non-linear structural pattern matching and hole instantiation.
//!
//! A hole matches any hole-free fragment; a hole name that appears twice
//! must bind structurally equal fragments. Substituting the returned
//! bindings back into the pattern reproduces the candidate exactly.

use std::collections::BTreeMap;

use super::ast::{Expr, Program};
use super::error::PatternError;

/// Hole-name to fragment map. Fragments never contain holes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings(pub BTreeMap<String, Expr>);

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, fragment: Expr) -> Result<(), PatternError> {
        let name = name.into();
        if fragment.contains_holes() {
            return Err(PatternError::HoleInBinding(name));
        }
        self.0.insert(name, fragment);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Expr> {
        self.0.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Expr)> {
        self.0.iter()
    }
}

/// Match `pattern` against a hole-free `candidate`. Returns the bindings on
/// success; `None` is a result, not an error.
pub fn match_expr(pattern: &Expr, candidate: &Expr) -> Option<Bindings> {
    let mut bindings = Bindings::new();
    if match_into(pattern, candidate, &mut bindings) {
        Some(bindings)
    } else {
        None
    }
}

/// Match a shape anywhere inside `candidate`: the root first, then every
/// subtree in pre-order. First match wins, which keeps results
/// deterministic.
pub fn match_anywhere(pattern: &Expr, candidate: &Expr) -> Option<Bindings> {
    candidate
        .subtrees()
        .into_iter()
        .find_map(|sub| match_expr(pattern, sub))
}

fn match_into(pattern: &Expr, candidate: &Expr, bindings: &mut Bindings) -> bool {
    match pattern {
        Expr::Hole(name) => {
            if candidate.contains_holes() {
                return false;
            }
            match bindings.get(name) {
                Some(existing) => existing == candidate,
                None => {
                    bindings.0.insert(name.clone(), candidate.clone());
                    true
                }
            }
        }
        Expr::Int(a) => matches!(candidate, Expr::Int(b) if a == b),
        Expr::Str(a) => matches!(candidate, Expr::Str(b) if a == b),
        Expr::Bool(a) => matches!(candidate, Expr::Bool(b) if a == b),
        Expr::Param(a) => matches!(candidate, Expr::Param(b) if a == b),
        Expr::Var(a) => matches!(candidate, Expr::Var(b) if a == b),
        Expr::Let {
            name: pn,
            bound: pb,
            body: pbody,
        } => match candidate {
            Expr::Let { name, bound, body } => {
                pn == name
                    && match_into(pb, bound, bindings)
                    && match_into(pbody, body, bindings)
            }
            _ => false,
        },
        Expr::If {
            cond: pc,
            then: pt,
            otherwise: pe,
        } => match candidate {
            Expr::If {
                cond,
                then,
                otherwise,
            } => {
                match_into(pc, cond, bindings)
                    && match_into(pt, then, bindings)
                    && match_into(pe, otherwise, bindings)
            }
            _ => false,
        },
        Expr::Bin {
            op: pop,
            left: pl,
            right: pr,
        } => match candidate {
            Expr::Bin { op, left, right } => {
                pop == op && match_into(pl, left, bindings) && match_into(pr, right, bindings)
            }
            _ => false,
        },
        Expr::Not(pi) => match candidate {
            Expr::Not(inner) => match_into(pi, inner, bindings),
            _ => false,
        },
    }
}

/// Substitute bindings into `pattern`, producing a hole-free expression.
/// Every hole must be covered; missing ones are reported by name.
pub fn instantiate(pattern: &Expr, bindings: &Bindings) -> Result<Expr, PatternError> {
    let missing: Vec<String> = pattern
        .holes()
        .into_iter()
        .filter(|h| bindings.get(h).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(PatternError::IncompleteBindings(missing));
    }
    Ok(substitute(pattern, bindings))
}

/// Instantiate a whole pattern program, keeping its header.
pub fn instantiate_program(
    pattern: &Program,
    bindings: &Bindings,
) -> Result<Program, PatternError> {
    Ok(Program {
        params: pattern.params.clone(),
        return_type: pattern.return_type,
        body: instantiate(&pattern.body, bindings)?,
    })
}

fn substitute(expr: &Expr, bindings: &Bindings) -> Expr {
    match expr {
        Expr::Hole(name) => bindings
            .get(name)
            .cloned()
            .expect("holes checked before substitution"),
        Expr::Let { name, bound, body } => Expr::Let {
            name: name.clone(),
            bound: Box::new(substitute(bound, bindings)),
            body: Box::new(substitute(body, bindings)),
        },
        Expr::If {
            cond,
            then,
            otherwise,
        } => Expr::If {
            cond: Box::new(substitute(cond, bindings)),
            then: Box::new(substitute(then, bindings)),
            otherwise: Box::new(substitute(otherwise, bindings)),
        },
        Expr::Bin { op, left, right } => Expr::Bin {
            op: *op,
            left: Box::new(substitute(left, bindings)),
            right: Box::new(substitute(right, bindings)),
        },
        Expr::Not(inner) => Expr::Not(Box::new(substitute(inner, bindings))),
        other => other.clone(),
    }
}
