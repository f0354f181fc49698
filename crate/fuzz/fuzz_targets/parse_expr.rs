#![no_main]

//! Fuzzes the expression parser. The parser promises that accepted inputs
//! stay within its size budgets and that rendering is a faithful inverse,
//! so every successful parse must render into text that parses back to the
//! same canonical function.

use libfuzzer_sys::fuzz_target;

use dejonq::expr::{parse_ratfunc, render};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_ratfunc(text) {
        let rendered = render(&f);
        let reparsed = parse_ratfunc(&rendered).expect("rendered text parses");
        assert_eq!(reparsed, f, "round trip changed the function");
    }
});
