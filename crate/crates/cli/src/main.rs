use std::io::IsTerminal;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let stdin = std::io::stdin();
    let mut input: Box<dyn std::io::Read> = if stdin.is_terminal() {
        Box::new(std::io::empty())
    } else {
        Box::new(stdin.lock())
    };
    let code = tql_cli::run(
        &argv,
        &mut input,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
