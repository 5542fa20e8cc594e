//! Exact single-excitation dynamics of the inhomogeneous Dicke
//! (Tavis–Cummings) model.
//!
//! In the sector with one excitation shared between a cavity mode and `L`
//! two-level systems, the eigenstates are labelled by the `L + 1` real roots
//! of a single Bethe equation. This crate
//!
//! * solves that equation root by root ([`bethe`]),
//! * builds the normalized eigenstates ([`eigen`]),
//! * evolves spin, photon and Bell initial states spectrally ([`dynamics`]),
//! * evaluates the large-`L` closed forms for an equally spaced band
//!   ([`asymptotics`]),
//! * and cross-checks everything against a dense diagonalization of the
//!   explicit Hamiltonian block ([`oracle`]).
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the usual double-precision instantiations.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod asymptotics;
pub mod bethe;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod model;
pub mod oracle;
pub mod scalar;

pub use num_complex::Complex;

pub use asymptotics::{AsymptoticContext, BrightRoot, BrightRoots, SeriesMode};
pub use bethe::{residual, residual_derivative, solve_spectrum, BetheSpectrum, RootClass, SolverOptions};
pub use dynamics::{
    evolve, expand, make_initial, observe, photon_amplitude, spin_amplitude, survival_amplitude,
    uniform_times, BellSign, InitialCondition, Observable, ObservableTrace, SpectralSolution,
};
pub use eigen::{darkness, eigenstate, Eigenbasis, SectorState};
pub use error::{Error, Result};
pub use model::{build_epsilons, validate, DisorderKind, DisorderSpec, ModelParams, SpinIndex, Warning};
pub use oracle::{diagonalize, diagonalize_with, propagate, EigenDecomposition, EigenMethod, HamiltonianBlock};
pub use scalar::Real;

pub type Complex64 = Complex<f64>;
pub type Params = ModelParams<f64>;
pub type Params32 = ModelParams<f32>;
pub type Disorder = DisorderSpec<f64>;
pub type Spectrum = BetheSpectrum<f64>;
pub type Spectrum32 = BetheSpectrum<f32>;
pub type State = SectorState<f64>;
pub type State32 = SectorState<f32>;
pub type Solution = SpectralSolution<f64>;
pub type Trace = ObservableTrace<f64>;
pub type Asymptotics = AsymptoticContext<f64>;
pub type Block = HamiltonianBlock<f64>;
pub type Decomposition = EigenDecomposition<f64>;
