#![no_main]

use isolab::dimacs::{parse_dimacs, to_dimacs_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_dimacs(text) {
        assert!(g.check_invariants());
        assert_eq!(parse_dimacs(&to_dimacs_string(&g)).unwrap(), g);
    }
});
