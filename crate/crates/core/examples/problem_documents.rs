//! Running TOML problem documents through the batch front end.
//!
//! ```text
//! cargo run --example problem_documents
//! ```

use hodge_lattice::cli::{embedded_input, run_document, Overrides};

const MULT_IDEAL: &str = r#"
version = 1
command = "mult-ideal"

[options]
degree_bound = 6

[payload]
divisor = [{ curve = { kind = "cusp", p = 2, q = 3 }, coefficient = [5, 6] }]
queries = [[{ exponent = [1, 0], coefficient = [1, 1] }]]
"#;

const BAD: &str = r#"
version = 1
command = "weightfilt"
[payload]
nilpotents = [[[[0, 1], [1, 1]], [[0, 1], [0, 1]]]]
colour = "red"
"#;

fn main() {
    let report = run_document(MULT_IDEAL, None, &Overrides::default()).expect("valid document");
    println!("{report}");

    // The embedded input replays to the same bytes.
    let again = run_document(&embedded_input(&report).unwrap(), None, &Overrides::default()).unwrap();
    println!("replay identical: {}", again == report);

    let err = run_document(BAD, None, &Overrides::default()).unwrap_err();
    println!("exit code {}", err.exit_code());
    print!("{}", err.to_document());
}
