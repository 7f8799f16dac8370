//! Generators of the twisted S-sheaf of a Tate-type variation.
//!
//! ```text
//! cargo run --example twisted_sheaf
//! ```

use hodge_lattice::algebra::{Rat, RatMatrix};
use hodge_lattice::prolongation::LocalMonodromy;
use hodge_lattice::ssheaf::{generator_report, r_lattice, validate_limit_positivity, HodgeFiberData, TwistSpec};

fn main() {
    // Weight-1 fiber of rank 2 with N e0 = e1. The top Hodge piece is
    // spanned by e0.
    let n = RatMatrix::from_ints(&[&[0, 0], &[1, 0]]);
    let m = LocalMonodromy::unipotent(vec![n]).unwrap();
    let h = HodgeFiberData {
        weight: 1,
        hodge_numbers: [((1, 0), 1), ((0, 1), 1)].into_iter().collect(),
        selector: vec![0],
    };
    println!("limit positivity holds: {}", validate_limit_positivity(&m, &h).unwrap());

    let lattice = r_lattice(&m, &h).unwrap();
    for r in [Rat::zero(), Rat::new(1, 2), Rat::one(), Rat::new(5, 2)] {
        let twist = TwistSpec { r: vec![r.clone()], m: 1 };
        let entries = generator_report(&lattice, &twist).unwrap();
        let shown: Vec<&str> = entries.iter().map(|e| e.display.as_str()).collect();
        println!("A = {r}·E: {}", shown.join(", "));
    }
}
