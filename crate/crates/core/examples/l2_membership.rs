//! Square integrability of Laurent sections, exact and by quadrature.
//!
//! ```text
//! cargo run --example l2_membership
//! ```

use hodge_lattice::algebra::Rat;
use hodge_lattice::l2::{
    is_integrable_1d, membership, membership_numeric, numeric_integral, LaurentSection, Monomial, SmoothFactor,
    WeightProfile,
};

fn main() {
    println!("|z|^(2v) |z|^(2a) near 0");
    for (v, a) in [(0, Rat::new(-1, 2)), (-1, Rat::new(1, 3)), (-1, Rat::new(-1, 4)), (0, Rat::from_int(-1))] {
        let exact = is_integrable_1d(v, &a);
        let numeric = match numeric_integral(v, &a) {
            Ok(n) if n.convergent => format!("converges to {:.9}", n.value.unwrap_or(f64::NAN)),
            Ok(_) => "diverges".to_string(),
            Err(e) => format!("no verdict ({e})"),
        };
        println!("  v = {v:>2}, a = {a:>4}: exact {exact:<5} quadrature {numeric}");
    }

    // f = e0 z^{-1} w + e1 w^{-1} on two boundary axes.
    let mut f = LaurentSection::zero(2, 0, 2);
    f.add_term(Monomial { boundary: vec![-1, 1], interior: vec![] }, vec![Rat::one(), Rat::zero()]).unwrap();
    f.add_term(Monomial { boundary: vec![0, -1], interior: vec![] }, vec![Rat::zero(), Rat::one()]).unwrap();
    let w = WeightProfile::new(vec![
        vec![Rat::new(1, 2), Rat::zero()],
        vec![Rat::zero(), Rat::new(3, 4)],
    ]);
    println!("section e0 z^-1 w + e1 w^-1 with weights [[1/2, 0], [0, 3/4]]");
    println!("  exact: {}", membership(&f, &w).unwrap());
    for phi in SmoothFactor::ALL {
        let numeric = membership_numeric(&f, &w, &|z| phi.eval(z)).unwrap();
        println!("  quadrature with factor {phi:?}: {:?}", numeric.verdict);
    }
}
