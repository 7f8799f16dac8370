//! Monodromy weight filtrations of a nilpotent and of a commuting pair.
//!
//! ```text
//! cargo run --example weight_filtration
//! ```

use hodge_lattice::algebra::RatMatrix;
use hodge_lattice::weight::{graded_dims, relative_weight_sequence, weight_filtration};

fn main() {
    // One Jordan block of size 3: weights -2, 0, 2.
    let n = RatMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    let w = weight_filtration(&n).expect("nilpotent");
    println!("W(N) for a 3x3 Jordan block");
    for level in w.describe() {
        println!("  W_{:<3} dim {}", level.level, level.dim);
    }
    println!("  graded pieces {:?}", graded_dims(&w));
    println!("  axioms hold: {}", w.check_weight_axioms(&n).is_ok());

    // Two commuting nilpotents on C^4 = C^2 ⊗ C^2. The sequence lists
    // W(N1), W(N1 + N2).
    let n1 = RatMatrix::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
    let n2 = RatMatrix::from_ints(&[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]]);
    let seq = relative_weight_sequence(&[n1, n2]).expect("commuting nilpotents");
    for (name, f) in ["N1", "N1 + N2"].iter().zip(&seq) {
        println!("W({name}): graded pieces {:?}", graded_dims(f));
    }
}
