//! Parse a configuration file, print its diagnostics and the canonical
//! rendering.
//!
//! cargo run --example config_roundtrip -- [path]

use continuum_planner::{parse_config, render_config};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/cloud-10x40.ini").to_string());
    let text = std::fs::read_to_string(&path).expect("readable config");

    match parse_config(&text) {
        Ok(parsed) => {
            for w in &parsed.warnings {
                println!("{w}");
            }
            println!("--- canonical form ---");
            print!("{}", render_config(&parsed.config));
        }
        Err(e) => {
            for d in e.diagnostics() {
                println!("{d}");
            }
            std::process::exit(3);
        }
    }
}
