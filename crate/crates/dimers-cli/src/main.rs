//! The `dimers` command-line tool.

fn main() {
    std::process::exit(dimers_cli::run(std::env::args_os()));
}
