//! Recursive-descent parser.
//!
//! Precedence, loosest to tightest: `or` < `and` < `not` < comparisons <
//! `+ -` < `* / %`. Comparisons do not chain. `let` and `if` only start at
//! expression level; as operands they need parentheses. Parameter names
//! resolve to `Param` indexes here, so the AST carries no free identifiers.

use super::ast::{BaseType, BinOp, Expr, Param, Program};
use super::error::ParseError;
use super::lexer::{lex, Tok, Token};

const MAX_DEPTH: usize = 200;

/// Whether `?hole` metavariables are legal in the source being parsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoleMode {
    Allow,
    Forbid,
}

/// Parse a full program. Executable payloads use [`HoleMode::Forbid`];
/// pattern payloads use [`HoleMode::Allow`].
pub fn parse_program(source: &str, holes: HoleMode) -> Result<Program, ParseError> {
    let mut parser = Parser::new(lex(source)?, holes);
    let program = parser.program()?;
    parser.expect_eof()?;
    Ok(program)
}

/// Parse a bare expression with no function header and no parameters.
pub fn parse_expr_source(source: &str, holes: HoleMode) -> Result<Expr, ParseError> {
    let mut parser = Parser::new(lex(source)?, holes);
    let expr = parser.expr()?;
    parser.expect_eof()?;
    Ok(expr)
}

/// Parse pattern source that may be either a full program or a bare
/// expression; returns the expression to match against (the body for
/// programs).
pub fn parse_pattern_source(source: &str) -> Result<Expr, ParseError> {
    if source.trim_start().starts_with("fn") {
        Ok(parse_program(source, HoleMode::Allow)?.body)
    } else {
        parse_expr_source(source, HoleMode::Allow)
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    holes: HoleMode,
    params: Vec<Param>,
    lets: Vec<String>,
}

impl Parser {
    fn new(tokens: Vec<Token>, holes: HoleMode) -> Self {
        Parser {
            tokens,
            pos: 0,
            depth: 0,
            holes,
            params: Vec::new(),
            lets: Vec::new(),
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            line: t.line,
            col: t.col,
            expected: expected.to_string(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            Err(self.error(expected))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::TooDeep { limit: MAX_DEPTH });
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn leave_n(&mut self, n: usize) {
        self.depth -= n;
    }

    fn ident(&mut self, expected: &str) -> Result<(String, u32, u32), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(name) => {
                self.advance();
                Ok((name, t.line, t.col))
            }
            _ => Err(self.error(expected)),
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        self.expect(Tok::Fn, "`fn`")?;
        self.expect(Tok::LParen, "`(`")?;
        if self.peek().tok != Tok::RParen {
            loop {
                let (name, line, col) = self.ident("parameter name")?;
                if self.params.iter().any(|p| p.name == name) {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        expected: "a distinct parameter name".into(),
                        found: format!("duplicate `{name}`"),
                    });
                }
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.base_type()?;
                self.params.push(Param { name, ty });
                if self.peek().tok == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Arrow, "`->`")?;
        let return_type = self.base_type()?;
        self.expect(Tok::LBrace, "`{`")?;
        let body = self.expr()?;
        self.expect(Tok::RBrace, "`}`")?;
        Ok(Program {
            params: std::mem::take(&mut self.params),
            return_type,
            body,
        })
    }

    fn base_type(&mut self) -> Result<BaseType, ParseError> {
        let ty = match self.peek().tok {
            Tok::TyInt => BaseType::Int,
            Tok::TyStr => BaseType::Str,
            Tok::TyBool => BaseType::Bool,
            _ => return Err(self.error("a type (`Int`, `Str`, or `Bool`)")),
        };
        self.advance();
        Ok(ty)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let out = match self.peek().tok {
            Tok::Let => self.let_expr(),
            Tok::If => self.if_expr(),
            _ => self.or_expr(),
        };
        self.leave();
        out
    }

    fn let_expr(&mut self) -> Result<Expr, ParseError> {
        self.expect(Tok::Let, "`let`")?;
        let (name, _, _) = self.ident("binding name")?;
        self.expect(Tok::Assign, "`=`")?;
        let bound = self.expr()?;
        self.expect(Tok::In, "`in`")?;
        self.lets.push(name.clone());
        let body = self.expr()?;
        self.lets.pop();
        Ok(Expr::Let {
            name,
            bound: Box::new(bound),
            body: Box::new(body),
        })
    }

    fn if_expr(&mut self) -> Result<Expr, ParseError> {
        self.expect(Tok::If, "`if`")?;
        let cond = self.expr()?;
        self.expect(Tok::Then, "`then`")?;
        let then = self.expr()?;
        self.expect(Tok::Else, "`else`")?;
        let otherwise = self.expr()?;
        Ok(Expr::If {
            cond: Box::new(cond),
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        })
    }

    fn or_expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.and_expr()?;
        let mut chained = 0;
        while self.peek().tok == Tok::Or {
            // each folded operator deepens the left spine by one node, so
            // it counts against the same limit as recursive nesting
            self.enter()?;
            chained += 1;
            self.advance();
            let right = self.and_expr()?;
            left = bin(BinOp::Or, left, right);
        }
        self.leave_n(chained);
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.not_expr()?;
        let mut chained = 0;
        while self.peek().tok == Tok::And {
            self.enter()?;
            chained += 1;
            self.advance();
            let right = self.not_expr()?;
            left = bin(BinOp::And, left, right);
        }
        self.leave_n(chained);
        Ok(left)
    }

    fn not_expr(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Not {
            self.enter()?;
            self.advance();
            let inner = self.not_expr()?;
            self.leave();
            Ok(Expr::Not(Box::new(inner)))
        } else {
            self.cmp_expr()
        }
    }

    fn cmp_expr(&mut self) -> Result<Expr, ParseError> {
        let left = self.add_expr()?;
        let op = match self.peek().tok {
            Tok::EqEq => BinOp::Eq,
            Tok::NotEq => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            _ => return Ok(left),
        };
        self.advance();
        let right = self.add_expr()?;
        Ok(bin(op, left, right))
    }

    fn add_expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.mul_expr()?;
        let mut chained = 0;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.enter()?;
            chained += 1;
            self.advance();
            let right = self.mul_expr()?;
            left = bin(op, left, right);
        }
        self.leave_n(chained);
        Ok(left)
    }

    fn mul_expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.atom()?;
        let mut chained = 0;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Percent => BinOp::Rem,
                _ => break,
            };
            self.enter()?;
            chained += 1;
            self.advance();
            let right = self.atom()?;
            left = bin(op, left, right);
        }
        self.leave_n(chained);
        Ok(left)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let out = self.atom_inner();
        self.leave();
        out
    }

    fn atom_inner(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(digits) => {
                self.advance();
                Ok(Expr::Int(parse_int(&digits, false, t.line, t.col)?))
            }
            Tok::Minus => {
                self.advance();
                let next = self.peek().clone();
                match next.tok {
                    Tok::Int(digits) => {
                        self.advance();
                        Ok(Expr::Int(parse_int(&digits, true, next.line, next.col)?))
                    }
                    _ => Err(self.error("an integer literal after `-`")),
                }
            }
            Tok::Str(text) => {
                self.advance();
                Ok(Expr::Str(text))
            }
            Tok::True => {
                self.advance();
                Ok(Expr::Bool(true))
            }
            Tok::False => {
                self.advance();
                Ok(Expr::Bool(false))
            }
            Tok::Question => {
                self.advance();
                let (name, line, col) = self.ident("hole name")?;
                if self.holes == HoleMode::Forbid {
                    return Err(ParseError::HoleNotAllowed { name, line, col });
                }
                Ok(Expr::Hole(name))
            }
            Tok::ConcatKw => {
                self.advance();
                self.expect(Tok::LParen, "`(`")?;
                let left = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let right = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(bin(BinOp::Concat, left, right))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.advance();
                // innermost let wins; otherwise a parameter; otherwise unbound
                if self.lets.iter().rev().any(|n| *n == name) {
                    Ok(Expr::Var(name))
                } else if let Some(idx) = self.params.iter().position(|p| p.name == name) {
                    Ok(Expr::Param(idx))
                } else {
                    Err(ParseError::Unbound {
                        name,
                        line: t.line,
                        col: t.col,
                    })
                }
            }
            _ => Err(self.error("an expression")),
        }
    }
}

fn bin(op: BinOp, left: Expr, right: Expr) -> Expr {
    Expr::Bin {
        op,
        left: Box::new(left),
        right: Box::new(right),
    }
}

fn parse_int(digits: &str, negative: bool, line: u32, col: u32) -> Result<i64, ParseError> {
    let magnitude: u128 = digits.parse().map_err(|_| ParseError::Syntax {
        line,
        col,
        expected: "an integer within 64 bits".into(),
        found: format!("`{digits}`"),
    })?;
    let limit = if negative {
        i64::MAX as u128 + 1
    } else {
        i64::MAX as u128
    };
    if magnitude > limit {
        return Err(ParseError::Syntax {
            line,
            col,
            expected: "an integer within 64 bits".into(),
            found: format!("`{digits}`"),
        });
    }
    Ok(if negative {
        (magnitude as i64).wrapping_neg()
    } else {
        magnitude as i64
    })
}
