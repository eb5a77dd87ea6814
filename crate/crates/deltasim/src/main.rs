use clap::Parser;

fn main() {
    let cli = deltasim::cli::Cli::parse();
    std::process::exit(deltasim::cli::run(cli));
}
