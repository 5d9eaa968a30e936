use clap::Parser;
use mates_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    if let Err(err) = run(cli, &mut stdout.lock()) {
        eprintln!("mates: {err}");
        std::process::exit(err.exit_code());
    }
}
