//! Hodge norm estimates and curvature on the built-in nilpotent orbit models.
//!
//! ```text
//! cargo run --example orbit_models
//! ```

use hodge_lattice::cks::{
    cks_ratio_scan, frame_vector, model_monodromy_consistent, nakano_check, nakano_grid, norm_lower_bound_check,
    OrbitModel, ScanOptions,
};

fn main() {
    for id in OrbitModel::BUILTIN {
        let model = OrbitModel::builtin(id).unwrap();
        println!("{id} (rank {}, {} boundary axes)", model.rank, model.boundary_count());
        println!("  monodromy consistent: {}", model_monodromy_consistent(&model));
        for k in 0..model.rank {
            let v = frame_vector(&model, k);
            let scan = cks_ratio_scan(&model, &v, &ScanOptions { samples: 2000, vary_angle: true, ..Default::default() })
                .unwrap();
            println!("  e{k}: levels {:?}, |v|² / prediction in [{:.4}, {:.4}]", scan.levels, scan.min, scan.max);
        }
        let tame = norm_lower_bound_check(&model, 16, 8);
        println!("  norm lower bound: tame {} (C = {:.3})", tame.tame, tame.constant);
        let grid = nakano_grid(&model, 5, 8);
        match nakano_check(&model, &grid, 1e-3) {
            Ok(r) => println!("  curvature: min eigenvalue {:.6}, extrapolated {:.6}", r.min_eigenvalue, r.extrapolated_min),
            Err(e) => println!("  curvature: {e}"),
        }
    }
}
