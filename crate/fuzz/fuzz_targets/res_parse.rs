#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = tql_cli::parse_res(s) {
            // the three forms are distinct, so the fourth is determined
            assert!(r.l1 != r.l2 && r.l2 != r.l3 && r.l1 != r.l3);
            let _ = r.l4();
        }
    }
});
