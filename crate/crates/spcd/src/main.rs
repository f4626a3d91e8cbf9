use clap::Parser;

use spcd::cli::{run, Cli};
use spcd::Error;

fn main() {
    // clap exits with 2 on parse errors and 0 for --help/--version.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InvalidArgument(_) | Error::IndexOutOfRange(_) => 2,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}
