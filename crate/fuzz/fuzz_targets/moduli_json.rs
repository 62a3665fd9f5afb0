#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = tql_cli::parse_moduli_json(s) {
            assert!(p.a > 0.0 && p.lambda0 > p.a);
        }
    }
});
