use std::io::Write;

fn main() {
    let (stdout, stderr, code) = simpson_gibbs::cli::main_with_args(std::env::args_os());
    let _ = std::io::stdout().write_all(stdout.as_bytes());
    let _ = std::io::stderr().write_all(stderr.as_bytes());
    std::process::exit(code);
}
