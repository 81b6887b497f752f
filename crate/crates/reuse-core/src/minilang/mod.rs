//! A small pure expression language used as the executable payload format.
//!
//! Programs look like `fn(a: Int, b: Int) -> Int { a + b }`. The language is
//! total up to an explicit step budget: no loops, no recursion, no I/O.
//! Patterns are programs whose bodies may contain named holes (`?slot`)
//! standing for hole-free fragments.
//!
//! The canonical form of any payload is [`print_program`] output: single
//! spaces, minimal parentheses. Parsing then printing is idempotent.

mod ast;
mod error;
pub mod generate;
mod lexer;
mod parser;
mod pattern;
mod printer;

mod eval;

pub use ast::{BaseType, BinOp, Expr, Param, Program, Value};
pub use error::{EvalError, ParseError, PatternError};
pub use eval::{evaluate, header_types, DEFAULT_STEP_BUDGET};
pub use lexer::extract_comments;
pub use parser::{parse_expr_source, parse_pattern_source, parse_program, HoleMode};
pub use pattern::{
    instantiate, instantiate_program, match_anywhere, match_expr, Bindings,
};
pub use printer::{print_expr, print_fragment, print_program};

/// Parse, then render canonically. Convenience for store normalization.
pub fn canonical_program(source: &str, holes: HoleMode) -> Result<String, ParseError> {
    parse_program(source, holes).map(|p| print_program(&p))
}
