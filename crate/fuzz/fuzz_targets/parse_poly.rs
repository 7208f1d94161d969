#![no_main]

use libfuzzer_sys::fuzz_target;
use lpa::poly::parse_poly;
use lpa::Field;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for field in [Field::Q, Field::Fp(7)] {
        if let Ok(p) = parse_poly(field, text) {
            let printed = p.to_string();
            let back = parse_poly(field, &printed).expect("printed polynomial reparses");
            assert_eq!(back, p, "round trip changed the polynomial");
        }
    }
});
