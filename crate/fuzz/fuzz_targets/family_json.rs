#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(fam) = tql_cli::parse_family_json(s) {
            assert!([fam.a, fam.b, fam.c, fam.d].iter().all(|v| v.is_finite()));
            assert!(fam.a > 0.0);
        }
    }
});
