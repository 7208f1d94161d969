#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(e) = lpa::dsl::parse_expr(text) {
        let printed = lpa::dsl::print_expr(&e);
        let back = lpa::dsl::parse_expr(&printed).expect("printed expression reparses");
        assert_eq!(back, e, "round trip changed the expression");
    }
});
