//! Shared fixtures for the benchmarks.

use cxtv_core::generate::{generic_points, rng};
use cxtv_core::geometry::MassCloud;
use cxtv_core::lp::{ExactLP, Relation};
use cxtv_core::scalar::q;

/// A seeded cloud of `n` generic points in `R^dim` with uniform weights.
pub fn cloud(n: usize, dim: usize, seed: u64) -> MassCloud {
    MassCloud::uniform(generic_points(&mut rng(seed), n, dim)).expect("nonempty cloud")
}

/// Minimize the coordinate sum over `x >= -4` cut by `rows` random halfspaces containing the origin.
pub fn random_lp(vars: usize, rows: usize, seed: u64) -> ExactLP {
    let pts = generic_points(&mut rng(seed), rows, vars);
    let mut lp = ExactLP::new(vars);
    for p in pts {
        lp.add(p, Relation::Le, q(1, 1));
    }
    for i in 0..vars {
        let mut e = vec![q(0, 1); vars];
        e[i] = q(1, 1);
        lp.add(e, Relation::Ge, q(-4, 1));
    }
    lp.objective = Some(vec![q(1, 1); vars]);
    lp
}
