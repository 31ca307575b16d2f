//! Shared helpers for the integration suites: seeded random Gaussian targets
//! and a single-mode truncated-Fock master-equation oracle.

pub mod fock;

use modecool::{beam_splitter, compose_maps, squeezer, GaussianMap64};
use rand::Rng;

/// Random valid Gaussian map built from a layered squeezer/beam-splitter
/// circuit. Squeezing parameters stay within |r| ≤ 1 so downstream
/// conditioning stays desk-friendly.
pub fn random_map<R: Rng>(rng: &mut R, n_modes: usize, layers: usize) -> GaussianMap64 {
    let mut map = GaussianMap64::identity(n_modes);
    for _ in 0..layers {
        for j in 0..n_modes {
            let r: f64 = rng.gen_range(-1.0..1.0);
            map = compose_maps(&squeezer(n_modes, j, r).unwrap(), &map).unwrap();
        }
        if n_modes > 1 {
            for _ in 0..n_modes {
                let j = rng.gen_range(0..n_modes);
                let mut l = rng.gen_range(0..n_modes);
                while l == j {
                    l = rng.gen_range(0..n_modes);
                }
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                map = compose_maps(&beam_splitter(n_modes, j, l, theta).unwrap(), &map).unwrap();
            }
        }
    }
    map
}
