//! Command-line layer: configuration, the run dispatcher, CSV/manifest
//! output, and the canned figure recipes.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 I/O failure.

pub mod config;
pub mod output;
pub mod recipes;
pub mod runner;

pub use config::{parse_config, ConfigError, RunConfig, Task};
pub use output::{format_float, CsvTable, FileRecord, RunManifest};
pub use recipes::{figure_recipes, Recipe};
pub use runner::{run, RunError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

const USAGE: &str = "\
cascade — two-photon collective emission: closed forms + discrete-mode checks

USAGE:
    cascade <single | two-atom | small | continuum> [flags]
    cascade oracle-compare --regime <single | two-atom | small> [flags]
    cascade recipes [--name figN [--out FILE]]

FLAGS (all take a value; defaults in parentheses):
    --task        timeseries | spectrum | power | entropy | oracle-compare (timeseries)
    --omega       atomic transition frequency Ω (1)
    --gamma       single-atom decay rate Γ (0.1)
    --g           atom-field coupling (0.005)
    --omega-k1    incident photon frequency, single regime (Ω)
    --k0r         dimensionless separation, two-atom regime (1)
    --n           atom count, small/continuum regimes (10 / 100)
    --k0R         dimensionless sphere radius, continuum regime (4)
    --coeff       l,m,re,im initial coefficient, repeatable (0,0,1,0)
    --t-max       largest sampled time (50/Γ; oracle runs: regime default)
    --dt          oracle integrator step (0.9·0.1/(W + 2NΓ))
    --window      oracle frequency half-width W (20Γ)
    --dw          oracle mode spacing Δω (regime default)
    --lmax        partial-wave cutoff for the two-atom oracle (12)
    --grid        sample count: time points, spectral axis, entropy sweep
    --spectral-window  half-width of exported spectrum axes (10 linewidths)
    --out         output CSV path (cascade_out.csv); manifest lands next to it
    --config      flat key = value file with the same keys; flags override
    --regime      regime for the oracle-compare subcommand

ENVIRONMENT:
    CASCADE_THREADS   caps the worker threads used by the oracle sweeps
";

/// Entry point for the `cascade` binary: returns the process exit code.
pub fn run_cli(args: &[String]) -> i32 {
    if args.is_empty() || args[0] == "help" || args[0] == "--help" || args[0] == "-h" {
        print!("{USAGE}");
        return EXIT_OK;
    }
    if args[0] == "recipes" {
        return run_recipes(&args[1..]);
    }
    // `oracle-compare --regime X` is sugar for `X --task oracle-compare`.
    let mut argv: Vec<String> = args.to_vec();
    if argv[0] == "oracle-compare" {
        argv.remove(0);
        let mut rewritten = Vec::with_capacity(argv.len() + 2);
        let mut it = argv.into_iter().peekable();
        let mut regime: Option<String> = None;
        while let Some(a) = it.next() {
            if a == "--regime" {
                regime = it.next();
            } else {
                rewritten.push(a);
            }
        }
        let mut argv = vec![regime.unwrap_or_else(|| "two-atom".into())];
        argv.push("--task".into());
        argv.push("oracle-compare".into());
        argv.extend(rewritten);
        return execute(&argv);
    }
    execute(&argv)
}

fn execute(argv: &[String]) -> i32 {
    let config = match parse_config(argv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    match run(&config) {
        Ok(manifest) => {
            println!(
                "wrote {} rows ({} tasks) to {}",
                manifest.files.iter().map(|f| f.bytes).sum::<usize>(),
                manifest.task,
                manifest.files.first().map(|f| f.path.as_str()).unwrap_or("-")
            );
            println!(
                "manifest: {}",
                runner::manifest_path_for(std::path::Path::new(&config.out)).display()
            );
            EXIT_OK
        }
        Err(e) => report_error(e),
    }
}

fn report_error(e: RunError) -> i32 {
    eprintln!("error: {e}");
    match e {
        RunError::Config(_) => EXIT_CONFIG,
        RunError::Numerical(_) => EXIT_NUMERICAL,
        RunError::Io(_) => EXIT_IO,
    }
}

fn run_recipes(args: &[String]) -> i32 {
    let mut name: Option<String> = None;
    let mut out: Option<String> = None;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--name" => name = it.next().cloned(),
            "--out" => out = it.next().cloned(),
            other => {
                eprintln!("error: unknown flag for recipes: {other}");
                return EXIT_CONFIG;
            }
        }
    }
    match name {
        None => {
            for r in figure_recipes() {
                println!("{:8}  {}", r.name, r.description);
            }
            EXIT_OK
        }
        Some(name) => match recipes::find(&name) {
            None => {
                eprintln!("error: no recipe named {name}");
                EXIT_CONFIG
            }
            Some(mut recipe) => {
                if let Some(out) = out {
                    recipe.config.out = out;
                }
                match run(&recipe.config) {
                    Ok(_) => {
                        println!("wrote {}", recipe.config.out);
                        EXIT_OK
                    }
                    Err(e) => report_error(e),
                }
            }
        },
    }
}
