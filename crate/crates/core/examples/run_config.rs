//! Runs one of the bundled configs through the experiment runner, as the
//! command-line tool does. Pass a path to run a different config.

use std::path::PathBuf;

use pullback::experiment::{list_experiments, run_file, RunOptions};

fn main() {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/hardy.toml")
    });
    print!("{}", list_experiments());
    let out = std::env::temp_dir().join("pullback-run-config");
    let opts = RunOptions { output_dir: Some(out), threads: Some(2), seed: None };
    match run_file(&path, &opts) {
        Ok(report) => {
            for line in &report.summary {
                println!("{line}");
            }
            println!("files in {}: {}", report.output_dir.display(), report.files.join(", "));
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}
