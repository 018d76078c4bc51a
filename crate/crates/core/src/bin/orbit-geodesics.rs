use clap::Parser;
use orbit_geodesics::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
