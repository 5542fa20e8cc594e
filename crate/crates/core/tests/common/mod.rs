#![allow(dead_code)]

use dicke_core::*;

pub const OMEGA: f64 = 1.0;
pub const G: f64 = 0.05;
pub const WIDTH: f64 = 0.1;

/// Equally spaced band centred on the cavity, `g = 0.05`, `Ω = 0.1`.
pub fn band(l: usize) -> Params {
    let eps = build_epsilons(&DisorderSpec::equally_spaced(OMEGA, WIDTH), l).unwrap();
    ModelParams::new(OMEGA, G, eps).unwrap()
}

pub fn solution(params: &Params) -> Solution {
    SpectralSolution::solve(params, &SolverOptions::default()).unwrap()
}

pub fn spacing(params: &Params) -> f64 {
    params.mean_spacing().unwrap()
}

/// `steps` samples over `[0, 1.25·4π/d]`.
pub fn long_grid(params: &Params, steps: usize) -> Vec<f64> {
    uniform_times(1.25 * 4.0 * std::f64::consts::PI / spacing(params), steps)
}

pub fn oracle(params: &Params) -> Decomposition {
    diagonalize(&HamiltonianBlock::build(params), 1e-15).unwrap()
}
