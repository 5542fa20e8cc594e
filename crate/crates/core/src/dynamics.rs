//! Time evolution by spectral expansion.
//!
//! An initial state is projected onto the normalized Bethe eigenstates,
//! `C_α = ⟨φ_α|ψ(0)⟩`, and every observable amplitude becomes a finite sum
//! `Σ_α w_α e^{-iλ_α t}` with time-independent weights. There is no time
//! stepping, so any `t` (including negative) is evaluated exactly.

use num_complex::Complex;

use crate::bethe::{solve_spectrum, BetheSpectrum, SolverOptions};
use crate::eigen::{Eigenbasis, SectorState};
use crate::error::{Error, Result};
use crate::model::{ModelParams, SpinIndex};
use crate::scalar::Real;

/// Relative sign of the two spin amplitudes in a Bell state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellSign {
    Plus,
    Minus,
}

impl BellSign {
    pub fn factor<T: Real>(self) -> T {
        match self {
            BellSign::Plus => T::one(),
            BellSign::Minus => -T::one(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            BellSign::Plus => '+',
            BellSign::Minus => '-',
        }
    }
}

/// Initial states of the single-excitation sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialCondition {
    /// `σ⁺_A|↓…↓,0⟩`
    SingleSpin(SpinIndex),
    /// `a†|↓…↓,0⟩`
    SinglePhoton,
    /// `(σ⁺_A ± σ⁺_B)|↓…↓,0⟩ / √2`
    Bell {
        a: SpinIndex,
        b: SpinIndex,
        sign: BellSign,
    },
}

impl InitialCondition {
    pub fn bell(a: usize, b: usize, sign: BellSign) -> Self {
        InitialCondition::Bell {
            a: SpinIndex(a),
            b: SpinIndex(b),
            sign,
        }
    }

    pub fn single_spin(a: usize) -> Self {
        InitialCondition::SingleSpin(SpinIndex(a))
    }

    /// Checks spin labels against `spins`.
    pub fn validate(&self, spins: usize) -> Result<()> {
        match *self {
            InitialCondition::SinglePhoton => Ok(()),
            InitialCondition::SingleSpin(a) => a.checked(spins).map(|_| ()),
            InitialCondition::Bell { a, b, .. } => {
                a.checked(spins)?;
                b.checked(spins)?;
                if a == b {
                    Err(Error::CoincidentBellSpins(a.0))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl std::fmt::Display for InitialCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitialCondition::SingleSpin(a) => write!(f, "spin{a}"),
            InitialCondition::SinglePhoton => write!(f, "photon"),
            InitialCondition::Bell { a, b, sign } => write!(f, "bell{}_{a}_{b}", sign.symbol()),
        }
    }
}

/// Sampled complex amplitude of one observable.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableTrace<T> {
    pub label: String,
    pub times: Vec<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> ObservableTrace<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<T> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    pub fn min_abs(&self) -> T {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(T::infinity(), T::min)
    }
}

/// `steps` equally spaced samples covering `[0, t_max]`, endpoints included.
pub fn uniform_times<T: Real>(t_max: T, steps: usize) -> Vec<T> {
    assert!(steps >= 2, "a time grid needs at least two samples");
    let last = T::from_count(steps - 1);
    (0..steps)
        .map(|k| t_max * (T::from_count(k) / last))
        .collect()
}

/// Spectrum plus normalized eigenbasis: everything the evaluators need.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution<T> {
    pub spectrum: BetheSpectrum<T>,
    pub basis: Eigenbasis<T>,
}

impl<T: Real> SpectralSolution<T> {
    pub fn new(spectrum: BetheSpectrum<T>) -> Self {
        let basis = Eigenbasis::new(&spectrum);
        Self { spectrum, basis }
    }

    pub fn solve(params: &ModelParams<T>, opts: &SolverOptions<T>) -> Result<Self> {
        Ok(Self::new(solve_spectrum(params, opts)?))
    }

    pub fn params(&self) -> &ModelParams<T> {
        self.spectrum.params()
    }

    pub fn roots(&self) -> &[T] {
        self.spectrum.roots()
    }
}

/// Normalized initial state vector.
pub fn make_initial<T: Real>(
    cond: &InitialCondition,
    params: &ModelParams<T>,
) -> Result<SectorState<T>> {
    let l = params.spins();
    cond.validate(l)?;
    let mut state = SectorState::zeros(l);
    let one = Complex::new(T::one(), T::zero());
    match *cond {
        InitialCondition::SinglePhoton => state.photon = one,
        InitialCondition::SingleSpin(a) => state.spins[a.checked(l)?] = one,
        InitialCondition::Bell { a, b, sign } => {
            let h = T::FRAC_1_SQRT_2();
            state.spins[a.checked(l)?] = Complex::new(h, T::zero());
            state.spins[b.checked(l)?] = Complex::new(sign.factor::<T>() * h, T::zero());
        }
    }
    Ok(state)
}

/// Expansion coefficients `C_α(0) = ⟨φ_α|ψ(0)⟩`.
pub fn expand<T: Real>(state: &SectorState<T>, solution: &SpectralSolution<T>) -> Result<Vec<Complex<T>>> {
    let dim = solution.basis.dim();
    if state.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: state.dim(),
        });
    }
    Ok((0..dim).map(|alpha| solution.basis.project(alpha, state)).collect())
}

/// Closed-form coefficients for the named initial conditions, built from root
/// data alone (no projection).
pub fn initial_coefficients<T: Real>(
    cond: &InitialCondition,
    solution: &SpectralSolution<T>,
) -> Result<Vec<Complex<T>>> {
    let spectrum = &solution.spectrum;
    let l = spectrum.params().spins();
    cond.validate(l)?;
    let coeff = |alpha: usize| -> T {
        let scale = T::one() / spectrum.norm_sq()[alpha].sqrt();
        match *cond {
            InitialCondition::SinglePhoton => scale,
            InitialCondition::SingleSpin(a) => spectrum.spin_weight(alpha, a.0 - 1) * scale,
            InitialCondition::Bell { a, b, sign } => {
                (spectrum.spin_weight(alpha, a.0 - 1)
                    + sign.factor::<T>() * spectrum.spin_weight(alpha, b.0 - 1))
                    * scale
                    * T::FRAC_1_SQRT_2()
            }
        }
    };
    Ok((0..spectrum.len())
        .map(|alpha| Complex::new(coeff(alpha), T::zero()))
        .collect())
}

#[inline]
fn phase<T: Real>(lambda: T, t: T) -> Complex<T> {
    Complex::from_polar(T::one(), -(lambda * t))
}

/// `ψ(t) = Σ_α C_α e^{-iλ_α t} φ_α`
pub fn evolve<T: Real>(coeffs: &[Complex<T>], solution: &SpectralSolution<T>, t: T) -> SectorState<T> {
    let dim = solution.basis.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; dim];
    for (alpha, (&c, &lambda)) in coeffs.iter().zip(solution.roots()).enumerate() {
        let ct = c * phase(lambda, t);
        for (o, &a) in out.iter_mut().zip(solution.basis.row(alpha)) {
            *o = *o + ct * a;
        }
    }
    SectorState::from_components(out)
}

/// `Σ_α w_α e^{-iλ_α t}` sampled on `times`.
pub fn spectral_sum<T: Real>(weights: &[Complex<T>], roots: &[T], times: &[T]) -> Vec<Complex<T>> {
    times
        .iter()
        .map(|&t| {
            weights
                .iter()
                .zip(roots)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&w, &lambda)| {
                    acc + w * phase(lambda, t)
                })
        })
        .collect()
}

fn trace_from_weights<T: Real>(
    label: String,
    weights: &[Complex<T>],
    solution: &SpectralSolution<T>,
    times: &[T],
) -> ObservableTrace<T> {
    ObservableTrace {
        label,
        times: times.to_vec(),
        values: spectral_sum(weights, solution.roots(), times),
    }
}

/// `⟨ψ(0)|ψ(t)⟩ = Σ_α |C_α|² e^{-iλ_α t}`; the Bell fidelity amplitude for Bell states.
pub fn survival_amplitude<T: Real>(
    cond: &InitialCondition,
    solution: &SpectralSolution<T>,
    times: &[T],
) -> Result<ObservableTrace<T>> {
    let coeffs = initial_coefficients(cond, solution)?;
    let weights: Vec<Complex<T>> = coeffs
        .iter()
        .map(|c| Complex::new(c.norm_sqr(), T::zero()))
        .collect();
    Ok(trace_from_weights("survival".into(), &weights, solution, times))
}

/// `⟨0,↓…↓|a|ψ(t)⟩`
pub fn photon_amplitude<T: Real>(
    cond: &InitialCondition,
    solution: &SpectralSolution<T>,
    times: &[T],
) -> Result<ObservableTrace<T>> {
    component_amplitude("photon".into(), 0, cond, solution, times)
}

/// `⟨0,↓…↓|σ⁻_m|ψ(t)⟩`
pub fn spin_amplitude<T: Real>(
    m: SpinIndex,
    cond: &InitialCondition,
    solution: &SpectralSolution<T>,
    times: &[T],
) -> Result<ObservableTrace<T>> {
    let slot = m.basis_slot(solution.params().spins())?;
    component_amplitude(format!("spin:{m}"), slot, cond, solution, times)
}

fn component_amplitude<T: Real>(
    label: String,
    slot: usize,
    cond: &InitialCondition,
    solution: &SpectralSolution<T>,
    times: &[T],
) -> Result<ObservableTrace<T>> {
    let coeffs = initial_coefficients(cond, solution)?;
    let weights: Vec<Complex<T>> = coeffs
        .iter()
        .enumerate()
        .map(|(alpha, &c)| c * solution.basis.row(alpha)[slot])
        .collect();
    Ok(trace_from_weights(label, &weights, solution, times))
}

/// Split of a component amplitude into the confined (dark) and separated
/// (bright) root contributions.
pub fn photon_amplitude_split<T: Real>(
    cond: &InitialCondition,
    solution: &SpectralSolution<T>,
    times: &[T],
) -> Result<(ObservableTrace<T>, ObservableTrace<T>)> {
    let coeffs = initial_coefficients(cond, solution)?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut dark = vec![zero; coeffs.len()];
    let mut bright = vec![zero; coeffs.len()];
    for (alpha, &c) in coeffs.iter().enumerate() {
        let w = c * solution.basis.row(alpha)[0];
        if solution.spectrum.classes()[alpha].is_separated() {
            bright[alpha] = w;
        } else {
            dark[alpha] = w;
        }
    }
    Ok((
        trace_from_weights("photon:dark".into(), &dark, solution, times),
        trace_from_weights("photon:bright".into(), &bright, solution, times),
    ))
}

/// Observables a scenario can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    Survival,
    Photon,
    Spin(SpinIndex),
    /// Same amplitude as `Survival`; named for Bell initial states.
    Fidelity,
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Observable::Survival => "survival".into(),
            Observable::Photon => "photon".into(),
            Observable::Spin(m) => format!("spin:{m}"),
            Observable::Fidelity => "fidelity".into(),
        }
    }

    /// Basis slot read by this observable, if it is a component amplitude.
    pub fn slot(&self, spins: usize) -> Result<Option<usize>> {
        match self {
            Observable::Photon => Ok(Some(0)),
            Observable::Spin(m) => m.basis_slot(spins).map(Some),
            _ => Ok(None),
        }
    }
}

impl std::str::FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "survival" => Ok(Observable::Survival),
            "photon" => Ok(Observable::Photon),
            "fidelity" => Ok(Observable::Fidelity),
            other => match other.strip_prefix("spin:") {
                Some(m) => m
                    .parse::<usize>()
                    .map(|m| Observable::Spin(SpinIndex(m)))
                    .map_err(|e| format!("bad spin index in {other:?}: {e}")),
                None => Err(format!(
                    "unknown observable {other:?} (expected survival, photon, spin:<m>, fidelity)"
                )),
            },
        }
    }
}

/// Evaluates one observable on a time grid.
pub fn observe<T: Real>(
    observable: Observable,
    cond: &InitialCondition,
    solution: &SpectralSolution<T>,
    times: &[T],
) -> Result<ObservableTrace<T>> {
    let mut trace = match observable {
        Observable::Survival | Observable::Fidelity => survival_amplitude(cond, solution, times)?,
        Observable::Photon => photon_amplitude(cond, solution, times)?,
        Observable::Spin(m) => spin_amplitude(m, cond, solution, times)?,
    };
    trace.label = observable.name();
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn jc() -> SpectralSolution<f64> {
        let p = ModelParams::new(1.0, 0.05, vec![1.0]).unwrap();
        SpectralSolution::solve(&p, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn initial_states() {
        let p = ModelParams::new(1.0, 0.05, vec![0.95, 1.05]).unwrap();
        let s = make_initial(&InitialCondition::single_spin(1), &p).unwrap();
        assert_eq!(s, SectorState::from_real(&[0.0, 1.0, 0.0]));
        let s = make_initial(&InitialCondition::bell(1, 2, BellSign::Minus), &p).unwrap();
        let h = 0.5f64.sqrt();
        assert!(s.max_abs_diff(&SectorState::from_real(&[0.0, h, -h])) < 1e-16);
        let p3 = ModelParams::new(1.0, 0.05, vec![0.9, 1.0, 1.1]).unwrap();
        let s = make_initial(&InitialCondition::SinglePhoton, &p3).unwrap();
        assert_eq!(s, SectorState::from_real(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn index_errors() {
        let p = ModelParams::new(1.0, 0.05, vec![0.95, 1.05]).unwrap();
        assert!(matches!(
            make_initial(&InitialCondition::single_spin(3), &p),
            Err(Error::IndexOutOfRange { index: 3, spins: 2 })
        ));
        assert!(matches!(
            make_initial(&InitialCondition::bell(2, 2, BellSign::Plus), &p),
            Err(Error::CoincidentBellSpins(2))
        ));
        let sol = SpectralSolution::solve(&p, &SolverOptions::default()).unwrap();
        assert!(spin_amplitude(SpinIndex(0), &InitialCondition::SinglePhoton, &sol, &[0.0]).is_err());
    }

    #[test]
    fn jaynes_cummings_coefficients() {
        let sol = jc();
        let h = 0.5f64.sqrt();
        let c = initial_coefficients(&InitialCondition::SinglePhoton, &sol).unwrap();
        assert_relative_eq!(c[0].re, h, epsilon = 1e-14);
        assert_relative_eq!(c[1].re, h, epsilon = 1e-14);
        let c = initial_coefficients(&InitialCondition::single_spin(1), &sol).unwrap();
        assert_relative_eq!(c[0].re, -h, epsilon = 1e-12);
        assert_relative_eq!(c[1].re, h, epsilon = 1e-12);
    }

    #[test]
    fn rabi_oscillation() {
        let sol = jc();
        let g = 0.05;
        let cond = InitialCondition::single_spin(1);
        let psi0 = make_initial(&cond, sol.params()).unwrap();
        let coeffs = expand(&psi0, &sol).unwrap();
        for &t in &[0.0, 3.0, 17.0, 31.4, 100.0] {
            let psi = evolve(&coeffs, &sol, t);
            let expected = Complex::from_polar(1.0, -t) * (g * t).cos();
            assert!((psi.spins[0] - expected).norm() < 1e-12);
        }
        let times = [0.0, 10.0, std::f64::consts::PI / (2.0 * g)];
        let surv = survival_amplitude(&cond, &sol, &times).unwrap();
        let phot = photon_amplitude(&cond, &sol, &times).unwrap();
        for (k, &t) in times.iter().enumerate() {
            assert_relative_eq!(surv.values[k].norm(), (g * t).cos().abs(), epsilon = 1e-12);
            assert_relative_eq!(phot.values[k].norm(), (g * t).sin().abs(), epsilon = 1e-12);
        }
        assert!(surv.values[2].norm() < 1e-12);
    }

    #[test]
    fn observables_at_time_zero() {
        let p = ModelParams::new(1.0, 0.05, vec![0.95, 0.99, 1.0, 1.03]).unwrap();
        let sol = SpectralSolution::solve(&p, &SolverOptions::default()).unwrap();
        let t0 = [0.0];
        let spin = InitialCondition::single_spin(3);
        assert_relative_eq!(survival_amplitude(&spin, &sol, &t0).unwrap().values[0].re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(spin_amplitude(SpinIndex(3), &spin, &sol, &t0).unwrap().values[0].re, 1.0, epsilon = 1e-12);
        let photon = InitialCondition::SinglePhoton;
        assert_relative_eq!(photon_amplitude(&photon, &sol, &t0).unwrap().values[0].re, 1.0, epsilon = 1e-12);
        for m in 1..=4 {
            assert!(spin_amplitude(SpinIndex(m), &photon, &sol, &t0).unwrap().values[0].norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_projection() {
        let p = ModelParams::new(1.0, 0.05, vec![0.95, 0.99, 1.0, 1.03]).unwrap();
        let sol = SpectralSolution::solve(&p, &SolverOptions::default()).unwrap();
        for cond in [
            InitialCondition::SinglePhoton,
            InitialCondition::single_spin(2),
            InitialCondition::bell(1, 4, BellSign::Minus),
        ] {
            let a = initial_coefficients(&cond, &sol).unwrap();
            let b = expand(&make_initial(&cond, &p).unwrap(), &sol).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn observable_names_parse() {
        assert_eq!("spin:3".parse::<Observable>(), Ok(Observable::Spin(SpinIndex(3))));
        assert_eq!("fidelity".parse::<Observable>(), Ok(Observable::Fidelity));
        assert!("spin:x".parse::<Observable>().is_err());
        assert!("energy".parse::<Observable>().is_err());
    }

    #[test]
    fn time_grid() {
        let t = uniform_times(10.0, 11);
        assert_eq!(t.len(), 11);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[10], 10.0);
        assert_relative_eq!(t[3], 3.0, epsilon = 1e-15);
    }
}
