use std::io::{stderr, stdout};

fn main() {
    let code = steinhaus_cli::run_cli(std::env::args_os(), &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
