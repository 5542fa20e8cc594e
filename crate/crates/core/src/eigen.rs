//! Normalized Bethe eigenstates `|φ_α⟩ = S†(λ_α)|↓…↓,0⟩ / ‖·‖` in the
//! single-excitation basis.

use num_complex::Complex;

use crate::bethe::{residual, residual_derivative, BetheSpectrum};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::{compensated_sum, Real};

/// Amplitude vector on the single-excitation basis `(photon, spin_1, …, spin_L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorState<T> {
    pub photon: Complex<T>,
    pub spins: Vec<Complex<T>>,
}

impl<T: Real> SectorState<T> {
    pub fn zeros(spins: usize) -> Self {
        Self {
            photon: Complex::new(T::zero(), T::zero()),
            spins: vec![Complex::new(T::zero(), T::zero()); spins],
        }
    }

    /// State from basis-ordered amplitudes; `amps[0]` is the photon.
    pub fn from_components(amps: Vec<Complex<T>>) -> Self {
        let mut amps = amps;
        assert!(!amps.is_empty(), "sector state needs the photon slot");
        let photon = amps.remove(0);
        Self {
            photon,
            spins: amps,
        }
    }

    /// Real amplitudes in basis order.
    pub fn from_real(amps: &[T]) -> Self {
        Self::from_components(amps.iter().map(|&a| Complex::new(a, T::zero())).collect())
    }

    pub fn dim(&self) -> usize {
        self.spins.len() + 1
    }

    /// Amplitude in basis slot `slot` (0 = photon).
    pub fn component(&self, slot: usize) -> Complex<T> {
        if slot == 0 {
            self.photon
        } else {
            self.spins[slot - 1]
        }
    }

    pub fn components(&self) -> impl Iterator<Item = Complex<T>> + '_ {
        std::iter::once(self.photon).chain(self.spins.iter().copied())
    }

    pub fn to_components(&self) -> Vec<Complex<T>> {
        self.components().collect()
    }

    pub fn norm_sq(&self) -> T {
        compensated_sum(self.components().map(|c| c.norm_sqr()))
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.components()
            .zip(other.components())
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            })
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.components()
            .zip(other.components())
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sq().sqrt();
        Self {
            photon: self.photon / n,
            spins: self.spins.iter().map(|&c| c / n).collect(),
        }
    }
}

/// Photon weight `1/⟨Φ|Φ⟩` of a normalized Bethe state. Values far below one
/// mark dark states.
#[inline]
pub fn darkness<T: Real>(norm_sq: T) -> T {
    T::one() / norm_sq
}

/// Builds the normalized eigenstate for a solved rapidity `lambda`.
///
/// Fails with [`Error::NotARoot`] when the Newton distance `|f/f'|` to the
/// nearest root exceeds `max(1e-8, 100·ε_mach)·max(1, |λ|)`.
pub fn eigenstate<T: Real>(lambda: T, params: &ModelParams<T>) -> Result<(SectorState<T>, T)> {
    let f = residual(lambda, params)?;
    let df = residual_derivative(lambda, params)?;
    let distance = (f / df).abs();
    let limit = T::lit(1e-8).max(T::lit(100.0) * T::epsilon()) * lambda.abs().max(T::one());
    if !(distance <= limit) {
        return Err(Error::NotARoot {
            lambda: lambda.as_f64(),
            distance: distance.as_f64(),
        });
    }
    let g = params.g;
    let weights: Vec<T> = params.epsilons.iter().map(|&e| g / (lambda - e)).collect();
    let norm_sq = compensated_sum(std::iter::once(T::one()).chain(weights.iter().map(|&w| w * w)));
    let scale = T::one() / norm_sq.sqrt();
    let state = SectorState {
        photon: Complex::new(scale, T::zero()),
        spins: weights
            .iter()
            .map(|&w| Complex::new(w * scale, T::zero()))
            .collect(),
    };
    Ok((state, norm_sq))
}

/// Unnormalized overlap `⟨Φ_α|Φ_β⟩ = 1 + Σ_j g²/((λ_α - ε_j)(λ_β - ε_j))`.
pub fn unnormalized_overlap<T: Real>(spectrum: &BetheSpectrum<T>, alpha: usize, beta: usize) -> T {
    let g = spectrum.params().g;
    let l = spectrum.params().spins();
    compensated_sum(std::iter::once(T::one()).chain((0..l).map(|j| {
        g * g / (spectrum.pole_distance(alpha, j) * spectrum.pole_distance(beta, j))
    })))
}

/// All normalized eigenstates of a spectrum, stored as real rows
/// `φ_α = (1, g/(λ_α - ε_1), …) / √⟨Φ_α|Φ_α⟩` with the photon component positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenbasis<T> {
    dim: usize,
    rows: Vec<T>,
}

impl<T: Real> Eigenbasis<T> {
    pub fn new(spectrum: &BetheSpectrum<T>) -> Self {
        let dim = spectrum.len();
        let l = dim - 1;
        let mut rows = Vec::with_capacity(dim * dim);
        for alpha in 0..dim {
            let scale = T::one() / spectrum.norm_sq()[alpha].sqrt();
            rows.push(scale);
            rows.extend((0..l).map(|j| spectrum.spin_weight(alpha, j) * scale));
        }
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Basis-ordered real amplitudes of `φ_α`.
    pub fn row(&self, alpha: usize) -> &[T] {
        &self.rows[alpha * self.dim..(alpha + 1) * self.dim]
    }

    pub fn state(&self, alpha: usize) -> SectorState<T> {
        SectorState::from_real(self.row(alpha))
    }

    /// `⟨φ_α|ψ⟩`
    pub fn project(&self, alpha: usize, state: &SectorState<T>) -> Complex<T> {
        self.row(alpha)
            .iter()
            .zip(state.components())
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, c)| acc + c * a)
    }

    /// Photon weight `|⟨0|a|φ_α⟩|²`.
    pub fn darkness(&self, alpha: usize) -> T {
        let p = self.row(alpha)[0];
        p * p
    }
}
