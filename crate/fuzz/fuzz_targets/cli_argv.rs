#![no_main]

use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated; anything after the first 0xFF byte is stdin.
fuzz_target!(|data: &[u8]| {
    let (args, stdin) = match data.iter().position(|&b| b == 0xFF) {
        Some(i) => (&data[..i], &data[i + 1..]),
        None => (data, &[][..]),
    };
    let Ok(args) = std::str::from_utf8(args) else { return };
    let mut argv = vec!["tql".to_string()];
    argv.extend(args.split('\0').map(String::from));
    // never write files from the fuzzer
    if argv.iter().any(|a| a.starts_with("--out") || a.starts_with("--csv")) {
        return;
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = tql_cli::run(&argv, &mut &stdin[..], &mut out, &mut err);
    assert!((0..=3).contains(&code), "exit code {code}");
});
