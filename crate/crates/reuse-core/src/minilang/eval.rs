//! Strict left-to-right evaluator with a step budget.
//!
//! One step per visited node; `and`/`or` short-circuit and `if` evaluates a
//! single branch, so total steps never exceed the body's node count. All
//! arithmetic is checked: overflow and division by zero are errors, never
//! wrap-around values.

use super::ast::{BaseType, BinOp, Expr, Program, Value};
use super::error::EvalError;

/// Default step budget per evaluation. Far above any loop-free program's
/// node count; guards future language growth.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000;

pub fn evaluate(program: &Program, args: &[Value], budget: u64) -> Result<Value, EvalError> {
    if args.len() != program.params.len() {
        return Err(EvalError::Type(format!(
            "expected {} argument(s), got {}",
            program.params.len(),
            args.len()
        )));
    }
    for (param, arg) in program.params.iter().zip(args) {
        if arg.base_type() != param.ty {
            return Err(EvalError::Type(format!(
                "parameter `{}` expects {}, got {}",
                param.name,
                param.ty,
                arg.base_type()
            )));
        }
    }
    let mut machine = Machine {
        args,
        env: Vec::new(),
        steps: 0,
        budget,
    };
    let value = machine.eval(&program.body)?;
    if value.base_type() != program.return_type {
        return Err(EvalError::Type(format!(
            "declared return type {}, produced {}",
            program.return_type,
            value.base_type()
        )));
    }
    Ok(value)
}

struct Machine<'a> {
    args: &'a [Value],
    env: Vec<(String, Value)>,
    steps: u64,
    budget: u64,
}

impl Machine<'_> {
    fn tick(&mut self) -> Result<(), EvalError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(EvalError::BudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn eval(&mut self, expr: &Expr) -> Result<Value, EvalError> {
        self.tick()?;
        match expr {
            Expr::Int(v) => Ok(Value::Int(*v)),
            Expr::Str(s) => Ok(Value::Str(s.clone())),
            Expr::Bool(b) => Ok(Value::Bool(*b)),
            Expr::Param(idx) => Ok(self.args[*idx].clone()),
            Expr::Var(name) => self
                .env
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| EvalError::UnboundVar(name.clone())),
            Expr::Let { name, bound, body } => {
                let value = self.eval(bound)?;
                self.env.push((name.clone(), value));
                let out = self.eval(body);
                self.env.pop();
                out
            }
            Expr::If {
                cond,
                then,
                otherwise,
            } => match self.eval(cond)? {
                Value::Bool(true) => self.eval(then),
                Value::Bool(false) => self.eval(otherwise),
                other => Err(EvalError::Type(format!(
                    "if condition must be Bool, got {}",
                    other.base_type()
                ))),
            },
            Expr::Not(inner) => match self.eval(inner)? {
                Value::Bool(b) => Ok(Value::Bool(!b)),
                other => Err(EvalError::Type(format!(
                    "not requires Bool, got {}",
                    other.base_type()
                ))),
            },
            Expr::Hole(name) => Err(EvalError::Hole(name.clone())),
            Expr::Bin { op, left, right } => self.eval_bin(*op, left, right),
        }
    }

    fn eval_bin(&mut self, op: BinOp, left: &Expr, right: &Expr) -> Result<Value, EvalError> {
        // short-circuit forms first
        if matches!(op, BinOp::And | BinOp::Or) {
            let lhs = self.expect_bool(left, op)?;
            return match (op, lhs) {
                (BinOp::And, false) => Ok(Value::Bool(false)),
                (BinOp::Or, true) => Ok(Value::Bool(true)),
                _ => Ok(Value::Bool(self.expect_bool(right, op)?)),
            };
        }
        let lhs = self.eval(left)?;
        let rhs = self.eval(right)?;
        match op {
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Rem => {
                let (a, b) = int_pair(op, &lhs, &rhs)?;
                let result = match op {
                    BinOp::Add => a.checked_add(b).ok_or(EvalError::Arithmetic("overflow")),
                    BinOp::Sub => a.checked_sub(b).ok_or(EvalError::Arithmetic("overflow")),
                    BinOp::Mul => a.checked_mul(b).ok_or(EvalError::Arithmetic("overflow")),
                    BinOp::Div => {
                        if b == 0 {
                            Err(EvalError::Arithmetic("division by zero"))
                        } else {
                            a.checked_div(b).ok_or(EvalError::Arithmetic("overflow"))
                        }
                    }
                    BinOp::Rem => {
                        if b == 0 {
                            Err(EvalError::Arithmetic("modulo by zero"))
                        } else {
                            a.checked_rem(b).ok_or(EvalError::Arithmetic("overflow"))
                        }
                    }
                    _ => unreachable!(),
                }?;
                Ok(Value::Int(result))
            }
            BinOp::Eq | BinOp::Ne => {
                if lhs.base_type() != rhs.base_type() {
                    return Err(EvalError::Type(format!(
                        "`{}` requires operands of the same type, got {} and {}",
                        op.symbol(),
                        lhs.base_type(),
                        rhs.base_type()
                    )));
                }
                let eq = lhs == rhs;
                Ok(Value::Bool(if op == BinOp::Eq { eq } else { !eq }))
            }
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                let (a, b) = int_pair(op, &lhs, &rhs)?;
                Ok(Value::Bool(match op {
                    BinOp::Lt => a < b,
                    BinOp::Le => a <= b,
                    BinOp::Gt => a > b,
                    BinOp::Ge => a >= b,
                    _ => unreachable!(),
                }))
            }
            BinOp::Concat => match (lhs, rhs) {
                (Value::Str(a), Value::Str(b)) => Ok(Value::Str(a + &b)),
                (a, b) => Err(EvalError::Type(format!(
                    "concat requires Str operands, got {} and {}",
                    a.base_type(),
                    b.base_type()
                ))),
            },
            BinOp::And | BinOp::Or => unreachable!(),
        }
    }

    fn expect_bool(&mut self, expr: &Expr, op: BinOp) -> Result<bool, EvalError> {
        match self.eval(expr)? {
            Value::Bool(b) => Ok(b),
            other => Err(EvalError::Type(format!(
                "`{}` requires Bool operands, got {}",
                op.symbol(),
                other.base_type()
            ))),
        }
    }
}

fn int_pair(op: BinOp, lhs: &Value, rhs: &Value) -> Result<(i64, i64), EvalError> {
    match (lhs, rhs) {
        (Value::Int(a), Value::Int(b)) => Ok((*a, *b)),
        (a, b) => Err(EvalError::Type(format!(
            "`{}` requires Int operands, got {} and {}",
            op.symbol(),
            a.base_type(),
            b.base_type()
        ))),
    }
}

/// Convenience used by signatures: the header's type vector.
pub fn header_types(program: &Program) -> (Vec<BaseType>, BaseType) {
    (
        program.params.iter().map(|p| p.ty).collect(),
        program.return_type,
    )
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse_program, HoleMode};
    use super::*;

    fn run(src: &str, args: &[Value]) -> Result<Value, EvalError> {
        let p = parse_program(src, HoleMode::Forbid).unwrap();
        evaluate(&p, args, DEFAULT_STEP_BUDGET)
    }

    #[test]
    fn adds() {
        assert_eq!(
            run(
                "fn(a: Int, b: Int) -> Int { a + b }",
                &[Value::Int(2), Value::Int(3)]
            ),
            Ok(Value::Int(5))
        );
    }

    #[test]
    fn concat_doubles_string() {
        assert_eq!(
            run(
                "fn(s: Str) -> Str { concat(s, s) }",
                &[Value::Str("ab".into())]
            ),
            Ok(Value::Str("abab".into()))
        );
    }

    #[test]
    fn division_by_zero_and_overflow_are_errors() {
        assert_eq!(
            run("fn(a: Int) -> Int { 1 / a }", &[Value::Int(0)]),
            Err(EvalError::Arithmetic("division by zero"))
        );
        assert_eq!(
            run(
                "fn(a: Int) -> Int { a + 1 }",
                &[Value::Int(i64::MAX)]
            ),
            Err(EvalError::Arithmetic("overflow"))
        );
        assert_eq!(
            run("fn(a: Int) -> Int { a % 0 }", &[Value::Int(3)]),
            Err(EvalError::Arithmetic("modulo by zero"))
        );
    }

    #[test]
    fn short_circuit_skips_poison() {
        // division by zero on the right is never evaluated
        assert_eq!(
            run(
                "fn(a: Int) -> Bool { a == 0 or 1 / a > 0 }",
                &[Value::Int(0)]
            ),
            Ok(Value::Bool(true))
        );
        assert_eq!(
            run(
                "fn(a: Int) -> Bool { a != 0 and 1 / a > 0 }",
                &[Value::Int(0)]
            ),
            Ok(Value::Bool(false))
        );
    }

    #[test]
    fn argument_type_and_arity_checks() {
        assert!(matches!(
            run("fn(a: Int) -> Int { a }", &[Value::Str("x".into())]),
            Err(EvalError::Type(_))
        ));
        assert!(matches!(
            run("fn(a: Int) -> Int { a }", &[]),
            Err(EvalError::Type(_))
        ));
    }

    #[test]
    fn steps_bounded_by_node_count() {
        let p = parse_program(
            "fn(a: Int, b: Int) -> Int { if a < b then b - a else a - b }",
            HoleMode::Forbid,
        )
        .unwrap();
        let nodes = p.node_count();
        assert!(evaluate(&p, &[Value::Int(1), Value::Int(9)], nodes).is_ok());
        assert_eq!(
            evaluate(&p, &[Value::Int(1), Value::Int(9)], 2),
            Err(EvalError::BudgetExceeded { budget: 2 })
        );
    }

    #[test]
    fn let_scoping_at_runtime() {
        assert_eq!(
            run(
                "fn(x: Int) -> Int { let x = x + 1 in let x = x * 2 in x }",
                &[Value::Int(5)]
            ),
            Ok(Value::Int(12))
        );
    }
}
