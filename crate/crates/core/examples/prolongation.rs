//! Frames of the prolonged bundle for a non-unipotent local system.
//!
//! ```text
//! cargo run --example prolongation
//! ```

use hodge_lattice::algebra::{Rat, RatMatrix, Subspace};
use hodge_lattice::prolongation::{
    deligne_basis, monodromy_consistency, residue_spectrum, LocalMonodromy, MonodromyBlock,
};

fn unit(dim: usize, k: usize) -> Vec<Rat> {
    (0..dim).map(|i| if i == k { Rat::one() } else { Rat::zero() }).collect()
}

fn main() {
    // C^3 over one boundary divisor: e0 has eigenvalue exp(-2πi/3) scaled
    // to α = -1/3, the pair (e1, e2) is unipotent with N e1 = e2.
    let blocks = vec![
        MonodromyBlock {
            alpha: vec![Rat::new(-1, 3)],
            space: Subspace::span(3, &[unit(3, 0)]).unwrap(),
        },
        MonodromyBlock {
            alpha: vec![Rat::zero()],
            space: Subspace::span(3, &[unit(3, 1), unit(3, 2)]).unwrap(),
        },
    ];
    let n = RatMatrix::from_ints(&[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]);
    let m = LocalMonodromy::new(3, blocks, vec![n]).expect("valid monodromy");

    for a in [Rat::from_int(-1), Rat::new(-1, 2), Rat::zero()] {
        let b = deligne_basis(&m, std::slice::from_ref(&a)).unwrap();
        let spectrum: Vec<String> = residue_spectrum(&b, 0).iter().map(|r| r.to_string()).collect();
        println!("window ({a}, {}]", a.clone() + Rat::one());
        for g in &b.generators {
            let v: Vec<String> = g.vector.iter().map(|x| x.to_string()).collect();
            println!("  [{}] t^{}", v.join(", "), g.exponents[0]);
        }
        println!("  residue spectrum {{{}}}", spectrum.join(", "));
        println!("  monodromy consistent: {}", monodromy_consistency(&b, &m));
    }
}
