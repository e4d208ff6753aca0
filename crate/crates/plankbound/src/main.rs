use clap::Parser;

fn main() {
    let cli = plankbound::cli::Cli::parse();
    std::process::exit(plankbound::cli::run(&cli));
}
