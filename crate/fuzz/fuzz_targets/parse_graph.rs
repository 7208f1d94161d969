#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = lpa::dsl::parse_graph(text) {
        let printed = lpa::dsl::print_graph(&g);
        let back = lpa::dsl::parse_graph(&printed).expect("printed graph reparses");
        assert_eq!(back, g, "round trip changed the graph");
    }
});
