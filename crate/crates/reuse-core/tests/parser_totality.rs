//! The parser must be total: any input up to 64 KiB returns `Ok` or a
//! `ParseError`, never a panic, and anything it accepts reprints into a
//! canonical form that reparses to the same text.

use proptest::prelude::*;

use reuse_core::minilang::{parse_program, print_program, HoleMode};

fn assert_total(source: &str) {
    for mode in [HoleMode::Allow, HoleMode::Forbid] {
        if let Ok(program) = parse_program(source, mode) {
            let printed = print_program(&program);
            let reparsed = parse_program(&printed, HoleMode::Allow)
                .expect("canonical output must reparse");
            assert_eq!(
                print_program(&reparsed),
                printed,
                "printing is not idempotent for {source:?}"
            );
        }
    }
}

proptest! {
    #[test]
    fn arbitrary_unicode_never_panics(source in "\\PC{0,512}") {
        assert_total(&source);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..2048)) {
        assert_total(&String::from_utf8_lossy(&bytes));
    }

    // near-miss programs assembled from real tokens reach deeper into the
    // grammar than raw noise does
    #[test]
    fn token_soup_never_panics(
        tokens in proptest::collection::vec(
            prop_oneof![
                Just("fn"), Just("("), Just(")"), Just("{"), Just("}"),
                Just("->"), Just(":"), Just(","), Just("Int"), Just("Str"),
                Just("Bool"), Just("let"), Just("in"), Just("if"), Just("then"),
                Just("else"), Just("not"), Just("and"), Just("or"),
                Just("concat"), Just("?h"), Just("a"), Just("t"), Just("42"),
                Just("-9"), Just("\"s\""), Just("+"), Just("*"), Just("/"),
                Just("%"), Just("=="), Just("<="), Just("//c\n"),
            ],
            0..200,
        )
    ) {
        assert_total(&tokens.join(" "));
    }
}

#[test]
fn pathological_sizes_and_nesting_are_rejected_not_fatal() {
    // 64 KiB of opening parens: must hit the depth limit, not the stack
    let deep = format!("fn() -> Int {{ {}1", "(".repeat(64 * 1024));
    assert!(parse_program(&deep, HoleMode::Allow).is_err());

    // 64 KiB of flat tokens parses or errors without blowing up
    let mut wide = String::from("fn(a: Int) -> Int { a");
    while wide.len() < 64 * 1024 {
        wide.push_str(" + 1");
    }
    wide.push('}');
    assert_total(&wide);

    let unterminated = format!("fn(a: Int) -> Int {{ \"{}", "x".repeat(64 * 1024));
    assert!(parse_program(&unterminated, HoleMode::Allow).is_err());
}
