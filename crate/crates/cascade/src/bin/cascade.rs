use cascade::cli::run_cli;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(run_cli(&args));
}
