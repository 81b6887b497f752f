//! Seeded construction of well-typed programs, patterns, and argument
//! vectors. Everything here is deterministic in the caller's RNG so corpus
//! builds and property tests replay exactly.

use rand::Rng;

use super::ast::{BaseType, BinOp, Expr, Param, Program, Value};
use super::pattern::Bindings;

/// Bounds for generated programs. Depth counts expression nesting, not
/// rendered length.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub max_params: usize,
    pub max_depth: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            max_params: 3,
            max_depth: 4,
        }
    }
}

// Params and let-bound names come from disjoint pools so a printed program
// reparses to the same AST (no cross-shadowing).
const PARAM_NAMES: [&str; 4] = ["a", "b", "c", "d"];
const LET_NAMES: [&str; 4] = ["t", "u", "v", "w"];
const WORDS: [&str; 6] = ["alpha", "beta", "unit", "sum", "text", "map"];

struct Ctx {
    params: Vec<Param>,
    lets: Vec<(String, BaseType)>,
}

impl Ctx {
    /// Let-bound names whose innermost binding has the wanted type.
    fn lets_of(&self, ty: BaseType) -> Vec<&str> {
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for (name, bound_ty) in self.lets.iter().rev() {
            if seen.iter().any(|s| s == name) {
                continue;
            }
            seen.push(name.clone());
            if *bound_ty == ty {
                out.push(name.as_str());
            }
        }
        out
    }

    fn params_of(&self, ty: BaseType) -> Vec<usize> {
        self.params
            .iter()
            .enumerate()
            .filter(|(_, p)| p.ty == ty)
            .map(|(i, _)| i)
            .collect()
    }
}

fn gen_type(rng: &mut impl Rng) -> BaseType {
    match rng.gen_range(0..3) {
        0 => BaseType::Int,
        1 => BaseType::Str,
        _ => BaseType::Bool,
    }
}

/// A literal value of the given type, kept small so arithmetic mostly stays
/// in range while overflow remains reachable.
pub fn gen_value(rng: &mut impl Rng, ty: BaseType) -> Value {
    match ty {
        BaseType::Int => Value::Int(rng.gen_range(-9..=9)),
        BaseType::Str => Value::Str(WORDS[rng.gen_range(0..WORDS.len())].to_string()),
        BaseType::Bool => Value::Bool(rng.gen_bool(0.5)),
    }
}

/// Argument vector matching a program's parameter types.
pub fn gen_args(rng: &mut impl Rng, program: &Program) -> Vec<Value> {
    program
        .params
        .iter()
        .map(|p| gen_value(rng, p.ty))
        .collect()
}

/// A closed, well-typed program. Every execution path type-checks; runtime
/// arithmetic errors (overflow, division by zero) remain possible and are
/// part of the intended behaviour space.
pub fn gen_program(rng: &mut impl Rng, cfg: &GenConfig) -> Program {
    let n_params = rng.gen_range(0..=cfg.max_params.min(PARAM_NAMES.len()));
    let params: Vec<Param> = (0..n_params)
        .map(|i| Param {
            name: PARAM_NAMES[i].to_string(),
            ty: gen_type(rng),
        })
        .collect();
    let return_type = gen_type(rng);
    let mut ctx = Ctx {
        params,
        lets: Vec::new(),
    };
    let body = gen_expr(rng, &mut ctx, return_type, cfg.max_depth);
    Program {
        params: ctx.params,
        return_type,
        body,
    }
}

fn gen_leaf(rng: &mut impl Rng, ctx: &Ctx, ty: BaseType) -> Expr {
    let lets = ctx.lets_of(ty);
    let params = ctx.params_of(ty);
    let mut picks: Vec<u8> = vec![0];
    if !lets.is_empty() {
        picks.push(1);
    }
    if !params.is_empty() {
        // Weight references over literals so parameters actually matter.
        picks.extend([2, 2]);
    }
    match picks[rng.gen_range(0..picks.len())] {
        1 => Expr::Var(lets[rng.gen_range(0..lets.len())].to_string()),
        2 => Expr::Param(params[rng.gen_range(0..params.len())]),
        _ => match gen_value(rng, ty) {
            Value::Int(v) => Expr::Int(v),
            Value::Str(v) => Expr::Str(v),
            Value::Bool(v) => Expr::Bool(v),
        },
    }
}

fn gen_expr(rng: &mut impl Rng, ctx: &mut Ctx, ty: BaseType, depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return gen_leaf(rng, ctx, ty);
    }
    let d = depth - 1;
    // Shared structural forms first, then type-specific operators.
    let roll = rng.gen_range(0..10);
    match roll {
        0 => {
            let bound_ty = gen_type(rng);
            let bound = gen_expr(rng, ctx, bound_ty, d);
            let name = LET_NAMES[rng.gen_range(0..LET_NAMES.len())].to_string();
            ctx.lets.push((name.clone(), bound_ty));
            let body = gen_expr(rng, ctx, ty, d);
            ctx.lets.pop();
            Expr::Let {
                name,
                bound: Box::new(bound),
                body: Box::new(body),
            }
        }
        1 => Expr::If {
            cond: Box::new(gen_expr(rng, ctx, BaseType::Bool, d)),
            then: Box::new(gen_expr(rng, ctx, ty, d)),
            otherwise: Box::new(gen_expr(rng, ctx, ty, d)),
        },
        _ => match ty {
            BaseType::Int => {
                let op = match rng.gen_range(0..10) {
                    0 => BinOp::Div,
                    1 => BinOp::Rem,
                    2..=4 => BinOp::Mul,
                    5..=6 => BinOp::Sub,
                    _ => BinOp::Add,
                };
                Expr::Bin {
                    op,
                    left: Box::new(gen_expr(rng, ctx, BaseType::Int, d)),
                    right: Box::new(gen_expr(rng, ctx, BaseType::Int, d)),
                }
            }
            BaseType::Str => Expr::Bin {
                op: BinOp::Concat,
                left: Box::new(gen_expr(rng, ctx, BaseType::Str, d)),
                right: Box::new(gen_expr(rng, ctx, BaseType::Str, d)),
            },
            BaseType::Bool => match rng.gen_range(0..5) {
                0 => Expr::Not(Box::new(gen_expr(rng, ctx, BaseType::Bool, d))),
                1 => {
                    let op = if rng.gen_bool(0.5) {
                        BinOp::And
                    } else {
                        BinOp::Or
                    };
                    Expr::Bin {
                        op,
                        left: Box::new(gen_expr(rng, ctx, BaseType::Bool, d)),
                        right: Box::new(gen_expr(rng, ctx, BaseType::Bool, d)),
                    }
                }
                2 => {
                    let operand_ty = gen_type(rng);
                    let op = if rng.gen_bool(0.5) {
                        BinOp::Eq
                    } else {
                        BinOp::Ne
                    };
                    Expr::Bin {
                        op,
                        left: Box::new(gen_expr(rng, ctx, operand_ty, d)),
                        right: Box::new(gen_expr(rng, ctx, operand_ty, d)),
                    }
                }
                _ => {
                    let op = match rng.gen_range(0..4) {
                        0 => BinOp::Lt,
                        1 => BinOp::Le,
                        2 => BinOp::Gt,
                        _ => BinOp::Ge,
                    };
                    Expr::Bin {
                        op,
                        left: Box::new(gen_expr(rng, ctx, BaseType::Int, d)),
                        right: Box::new(gen_expr(rng, ctx, BaseType::Int, d)),
                    }
                }
            },
        },
    }
}

/// Replace the subtree at pre-order index `target` (root is 0). Returns the
/// removed fragment alongside the rewritten expression.
fn replace_subtree(expr: &Expr, target: usize, replacement: Expr) -> (Expr, Option<Expr>) {
    fn go(
        expr: &Expr,
        counter: &mut usize,
        target: usize,
        replacement: &Expr,
        removed: &mut Option<Expr>,
    ) -> Expr {
        let here = *counter;
        *counter += 1;
        if here == target {
            *removed = Some(expr.clone());
            return replacement.clone();
        }
        match expr {
            Expr::Let { name, bound, body } => Expr::Let {
                name: name.clone(),
                bound: Box::new(go(bound, counter, target, replacement, removed)),
                body: Box::new(go(body, counter, target, replacement, removed)),
            },
            Expr::If {
                cond,
                then,
                otherwise,
            } => Expr::If {
                cond: Box::new(go(cond, counter, target, replacement, removed)),
                then: Box::new(go(then, counter, target, replacement, removed)),
                otherwise: Box::new(go(otherwise, counter, target, replacement, removed)),
            },
            Expr::Bin { op, left, right } => Expr::Bin {
                op: *op,
                left: Box::new(go(left, counter, target, replacement, removed)),
                right: Box::new(go(right, counter, target, replacement, removed)),
            },
            Expr::Not(inner) => Expr::Not(Box::new(go(inner, counter, target, replacement, removed))),
            other => other.clone(),
        }
    }
    let mut counter = 0;
    let mut removed = None;
    let out = go(expr, &mut counter, target, &replacement, &mut removed);
    (out, removed)
}

/// A pattern program plus the bindings that reconstruct the original: punch
/// up to `holes` holes into a generated program by replacing non-root,
/// hole-free subtrees. Instantiating the result with the returned bindings
/// yields the pre-punch program, so round-trips hold by construction.
pub fn gen_pattern(
    rng: &mut impl Rng,
    cfg: &GenConfig,
    holes: usize,
) -> (Program, Bindings) {
    let program = gen_program(rng, cfg);
    let mut body = program.body.clone();
    let mut bindings = Bindings::new();
    for i in 0..holes.max(1) {
        let positions: Vec<usize> = body
            .subtrees()
            .into_iter()
            .enumerate()
            .skip(1)
            .filter(|(_, sub)| !sub.contains_holes())
            .map(|(idx, _)| idx)
            .collect();
        if positions.is_empty() {
            break;
        }
        let target = positions[rng.gen_range(0..positions.len())];
        let name = format!("h{i}");
        let (next, removed) = replace_subtree(&body, target, Expr::Hole(name.clone()));
        let removed = removed.expect("pre-order index within bounds");
        bindings
            .insert(name, removed)
            .expect("punched fragments are hole-free");
        body = next;
    }
    (
        Program {
            params: program.params,
            return_type: program.return_type,
            body,
        },
        bindings,
    )
}
