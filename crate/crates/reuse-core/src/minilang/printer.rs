//! Canonical formatter: single spaces around infix operators, no redundant
//! parentheses beyond precedence needs. `print(parse(s))` is the canonical
//! form of `s`, and `parse(print(ast)) == ast`.

use super::ast::{BinOp, Expr, Program};

// Precedence levels; parenthesise a child whenever its level is below the
// minimum its position requires.
const LVL_LOW: u8 = 0; // let / if
const LVL_OR: u8 = 1;
const LVL_AND: u8 = 2;
const LVL_NOT: u8 = 3;
const LVL_CMP: u8 = 4;
const LVL_ADD: u8 = 5;
const LVL_MUL: u8 = 6;
const LVL_ATOM: u8 = 7;

pub fn print_program(program: &Program) -> String {
    let params = program
        .params
        .iter()
        .map(|p| format!("{}: {}", p.name, p.ty))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "fn({params}) -> {} {{ {} }}",
        program.return_type,
        print_expr_with_names(&program.body, &param_names(program))
    )
}

pub fn print_expr(expr: &Expr) -> String {
    print_expr_with_names(expr, &[])
}

/// Render a fragment lifted out of `program`, so parameter references keep
/// their declared names.
pub fn print_fragment(expr: &Expr, program: &Program) -> String {
    print_expr_with_names(expr, &param_names(program))
}

fn param_names(program: &Program) -> Vec<String> {
    program.params.iter().map(|p| p.name.clone()).collect()
}

fn print_expr_with_names(expr: &Expr, params: &[String]) -> String {
    let mut out = String::new();
    write_expr(expr, params, LVL_LOW, &mut out);
    out
}

fn level(expr: &Expr) -> u8 {
    match expr {
        Expr::Let { .. } | Expr::If { .. } => LVL_LOW,
        Expr::Bin { op, .. } => match op {
            BinOp::Or => LVL_OR,
            BinOp::And => LVL_AND,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => LVL_CMP,
            BinOp::Add | BinOp::Sub => LVL_ADD,
            BinOp::Mul | BinOp::Div | BinOp::Rem => LVL_MUL,
            BinOp::Concat => LVL_ATOM,
        },
        Expr::Not(_) => LVL_NOT,
        _ => LVL_ATOM,
    }
}

fn write_expr(expr: &Expr, params: &[String], min: u8, out: &mut String) {
    let lvl = level(expr);
    if lvl < min {
        out.push('(');
        write_expr(expr, params, LVL_LOW, out);
        out.push(')');
        return;
    }
    match expr {
        Expr::Int(v) => out.push_str(&v.to_string()),
        Expr::Str(s) => out.push_str(&quote_str(s)),
        Expr::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Expr::Param(idx) => match params.get(*idx) {
            Some(name) => out.push_str(name),
            None => out.push_str(&format!("_p{idx}")),
        },
        Expr::Var(name) => out.push_str(name),
        Expr::Hole(name) => {
            out.push('?');
            out.push_str(name);
        }
        Expr::Let { name, bound, body } => {
            out.push_str("let ");
            out.push_str(name);
            out.push_str(" = ");
            write_expr(bound, params, LVL_LOW, out);
            out.push_str(" in ");
            write_expr(body, params, LVL_LOW, out);
        }
        Expr::If {
            cond,
            then,
            otherwise,
        } => {
            out.push_str("if ");
            write_expr(cond, params, LVL_LOW, out);
            out.push_str(" then ");
            write_expr(then, params, LVL_LOW, out);
            out.push_str(" else ");
            write_expr(otherwise, params, LVL_LOW, out);
        }
        Expr::Not(inner) => {
            out.push_str("not ");
            write_expr(inner, params, LVL_NOT, out);
        }
        Expr::Bin { op, left, right } => match op {
            BinOp::Concat => {
                out.push_str("concat(");
                write_expr(left, params, LVL_LOW, out);
                out.push_str(", ");
                write_expr(right, params, LVL_LOW, out);
                out.push(')');
            }
            BinOp::Or | BinOp::And => {
                let lvl = level(expr);
                write_expr(left, params, lvl, out);
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                write_expr(right, params, lvl + 1, out);
            }
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                // non-associative: nested comparisons always take parens
                write_expr(left, params, LVL_CMP + 1, out);
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                write_expr(right, params, LVL_CMP + 1, out);
            }
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Rem => {
                let lvl = level(expr);
                write_expr(left, params, lvl, out);
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                write_expr(right, params, lvl + 1, out);
            }
        },
    }
}

/// Quote and escape a string literal the way the lexer reads it back.
pub fn quote_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out.push('"');
    out
}
