//! Checking the bundled golden corpus, or any directory of cases.
//!
//! ```text
//! cargo run --example golden_corpus [DIR]
//! ```

use std::path::PathBuf;

use hodge_lattice::corpus::{default_dir, verify_all};

fn main() {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(default_dir);
    match verify_all(&dir) {
        Ok(summary) => {
            println!("{summary}");
            if !summary.all_passed() {
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    }
}
