//! AST for the sandbox expression language.
//!
//! A program is a typed function header plus one body expression. The
//! language is pure and loop-free, so evaluation always terminates within
//! a step budget proportional to the node count.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Base types of the language, also used by semantic signatures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BaseType {
    Int,
    Str,
    Bool,
}

impl std::fmt::Display for BaseType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BaseType::Int => "Int",
            BaseType::Str => "Str",
            BaseType::Bool => "Bool",
        })
    }
}

/// Runtime values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Str(String),
}

impl Value {
    pub fn base_type(&self) -> BaseType {
        match self {
            Value::Int(_) => BaseType::Int,
            Value::Str(_) => BaseType::Str,
            Value::Bool(_) => BaseType::Bool,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Str(s) => write!(f, "{}", crate::minilang::printer::quote_str(s)),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Infix operators. `concat` uses call syntax but is an ordinary binary op.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Concat,
}

impl BinOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "and",
            BinOp::Or => "or",
            BinOp::Concat => "concat",
        }
    }
}

/// Expression nodes. `Param` indexes the function header; `Var` always
/// refers to an enclosing `let`. `Hole` is a pattern metavariable and is
/// only legal in pattern assets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Str(String),
    Bool(bool),
    Param(usize),
    Var(String),
    Let {
        name: String,
        bound: Box<Expr>,
        body: Box<Expr>,
    },
    If {
        cond: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
    },
    Bin {
        op: BinOp,
        left: Box<Expr>,
        right: Box<Expr>,
    },
    Not(Box<Expr>),
    Hole(String),
}

impl Expr {
    /// Total number of nodes, which bounds evaluation steps.
    pub fn node_count(&self) -> u64 {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Names of all holes, deduplicated.
    pub fn holes(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Hole(name) = e {
                out.insert(name.clone());
            }
        });
        out
    }

    pub fn contains_holes(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= matches!(e, Expr::Hole(_)));
        found
    }

    /// Pre-order traversal over every subtree, including `self`.
    pub fn walk(&self, visit: &mut dyn FnMut(&Expr)) {
        visit(self);
        match self {
            Expr::Let { bound, body, .. } => {
                bound.walk(visit);
                body.walk(visit);
            }
            Expr::If {
                cond,
                then,
                otherwise,
            } => {
                cond.walk(visit);
                then.walk(visit);
                otherwise.walk(visit);
            }
            Expr::Bin { left, right, .. } => {
                left.walk(visit);
                right.walk(visit);
            }
            Expr::Not(inner) => inner.walk(visit),
            _ => {}
        }
    }

    /// All subtrees in pre-order. Used by the structural engine to match a
    /// shape anywhere inside a payload body.
    pub fn subtrees(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        self.collect_subtrees(&mut out);
        out
    }

    fn collect_subtrees<'a>(&'a self, out: &mut Vec<&'a Expr>) {
        out.push(self);
        match self {
            Expr::Let { bound, body, .. } => {
                bound.collect_subtrees(out);
                body.collect_subtrees(out);
            }
            Expr::If {
                cond,
                then,
                otherwise,
            } => {
                cond.collect_subtrees(out);
                then.collect_subtrees(out);
                otherwise.collect_subtrees(out);
            }
            Expr::Bin { left, right, .. } => {
                left.collect_subtrees(out);
                right.collect_subtrees(out);
            }
            Expr::Not(inner) => inner.collect_subtrees(out),
            _ => {}
        }
    }
}

/// A named, typed function parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: BaseType,
}

/// A parsed program: header plus body expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub params: Vec<Param>,
    pub return_type: BaseType,
    pub body: Expr,
}

impl Program {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn node_count(&self) -> u64 {
        self.body.node_count()
    }

    pub fn holes(&self) -> BTreeSet<String> {
        self.body.holes()
    }
}
