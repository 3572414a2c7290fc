//! Regenerate the canned figure datasets into ./figures/ (CSV + manifests).

use cascade::cli::{figure_recipes, run};

fn main() {
    let out_dir = std::path::Path::new("figures");
    std::fs::create_dir_all(out_dir).expect("create figures/");
    for mut recipe in figure_recipes() {
        recipe.config.out = out_dir.join(&recipe.config.out).to_string_lossy().into_owned();
        match run(&recipe.config) {
            Ok(manifest) => println!(
                "{:8} → {} ({} bytes, {} ms)",
                recipe.name,
                recipe.config.out,
                manifest.files[0].bytes,
                manifest.wall_ms
            ),
            Err(e) => {
                eprintln!("{:8} failed: {e}", recipe.name);
                std::process::exit(1);
            }
        }
    }
}
