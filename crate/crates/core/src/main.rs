use std::io;

fn main() {
    let code = skewlab::cli::app::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
