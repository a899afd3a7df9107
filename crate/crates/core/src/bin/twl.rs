use std::io::Write;

fn main() {
    let (code, out, err) = twl_core::cli::run(std::env::args());
    print!("{out}");
    eprint!("{err}");
    std::io::stdout().flush().ok();
    std::process::exit(code);
}
