//! Log resolutions and multiplier ideals of plane curve germs.
//!
//! ```text
//! cargo run --example multiplier_ideals
//! ```

use hodge_lattice::algebra::Rat;
use hodge_lattice::resolution::{jumping_scan, log_resolve, pushforward_ideal, resolution_independence, CurveSpec, QDivisorGerm};

fn main() {
    let cusp = QDivisorGerm::from_specs(&[(CurveSpec::Cusp { p: 2, q: 3 }, Rat::one())]).unwrap();
    let seq = log_resolve(&cusp);
    println!("cusp z^2 = w^3 resolved by {} blowups", seq.len());
    for r in seq.records() {
        println!(
            "  {}: ord(z, w) = {:?}, curve order {:?}, discrepancy {}",
            r.id, r.monomial_valuation, r.curve_orders, r.discrepancy
        );
    }

    for c in [Rat::new(1, 2), Rat::new(5, 6), Rat::one()] {
        let ideal = pushforward_ideal(&seq, &cusp.scaled(&c), 8).unwrap();
        println!("J({c}·C): generators {:?}, unit {}", ideal.generators, ideal.is_unit());
    }

    // Blowing up one more point leaves the ideal unchanged.
    let mut more = seq.clone();
    let center = more.available_centers()[0].clone();
    more.blow_up(center).unwrap();
    let same = resolution_independence(&cusp.scaled(&Rat::new(5, 6)), &seq, &more, 8).unwrap();
    println!("same table after an extra blowup: {same}");

    let grid: Vec<Rat> = (1..=24).map(|k| Rat::new(k, 12)).collect();
    let scan = jumping_scan(&cusp, &grid, 8).unwrap();
    let jumps: Vec<String> = scan.changes.iter().map(|c| c.to_string()).collect();
    println!("jumps on the grid k/12: {}", jumps.join(", "));
}
