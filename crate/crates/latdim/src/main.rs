use clap::Parser;

mod cli;

fn main() {
    // clap exits 2 on usage errors and 0 for --help/--version.
    let parsed = cli::Cli::parse();
    if let Err(err) = parsed.run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
