use clap::Parser;

use flagsphere::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    if out.code == flagsphere::cli::EXIT_INPUT {
        eprint!("{}", out.report);
    } else {
        print!("{}", out.report);
    }
    std::process::exit(out.code);
}
