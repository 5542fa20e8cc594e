//! Model parameters, spin-energy disorder generators and the single-excitation
//! basis convention.
//!
//! The single-excitation sector has dimension `L + 1`. Basis slot 0 is the
//! photon `a†|↓…↓,0⟩`; slot `j` (1-based, `1..=L`) is the excited spin
//! `σ⁺_j|↓…↓,0⟩`. Energies are measured in units of the cavity frequency and
//! times in units of its inverse.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Maximum number of redraw rounds when random energies collide.
const MAX_RESAMPLE_ROUNDS: usize = 64;

/// Relative distinctness tolerance, scaled by the disorder center.
const DISTINCT_TOL: f64 = 1e-12;

/// Rotating-wave caution threshold on `max |ε_j - ω| / ω`.
const RWA_DETUNING_LIMIT: f64 = 0.5;

/// Hamiltonian parameters of the inhomogeneous Dicke model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<T> {
    /// Cavity frequency.
    pub omega: T,
    /// Spin–photon coupling.
    pub g: T,
    /// Spin excitation energies, strictly ascending.
    pub epsilons: Vec<T>,
}

impl<T: Real> ModelParams<T> {
    /// Builds and validates a parameter set. Warnings are logged.
    pub fn new(omega: T, g: T, epsilons: Vec<T>) -> Result<Self> {
        let params = Self { omega, g, epsilons };
        for w in validate(&params)? {
            log::warn!("{w}");
        }
        Ok(params)
    }

    /// Builds parameters whose energies come from a disorder generator.
    pub fn from_disorder(omega: T, g: T, spec: &DisorderSpec<T>, spins: usize) -> Result<Self> {
        Self::new(omega, g, build_epsilons(spec, spins)?)
    }

    /// Number of spins `L`.
    #[inline]
    pub fn spins(&self) -> usize {
        self.epsilons.len()
    }

    /// Dimension of the single-excitation sector, `L + 1`.
    #[inline]
    pub fn sector_dim(&self) -> usize {
        self.epsilons.len() + 1
    }

    /// Spin energy by 1-based label.
    pub fn epsilon(&self, spin: SpinIndex) -> Result<T> {
        Ok(self.epsilons[spin.checked(self.spins())?])
    }

    /// Band width `ε_L - ε_1`.
    pub fn band_width(&self) -> T {
        match (self.epsilons.first(), self.epsilons.last()) {
            (Some(&lo), Some(&hi)) => hi - lo,
            _ => T::zero(),
        }
    }

    /// Mean level spacing `(ε_L - ε_1) / (L - 1)`; `None` for a single spin.
    pub fn mean_spacing(&self) -> Option<T> {
        let l = self.spins();
        (l >= 2).then(|| self.band_width() / T::from_count(l - 1))
    }

    /// Trace of the single-excitation Hamiltonian block, `ω + Σ ε_j`.
    pub fn sector_trace(&self) -> T {
        self.omega + self.epsilons.iter().copied().sum::<T>()
    }

    /// 1-based label of the spin closest to the cavity frequency. Distances
    /// equal within `1e-12·ω` count as ties and go to the lower spin.
    pub fn most_resonant_spin(&self) -> SpinIndex {
        let tie = T::lit(DISTINCT_TOL) * self.omega;
        let mut best = 0;
        let mut best_dist = T::infinity();
        for (j, &e) in self.epsilons.iter().enumerate() {
            let dist = (e - self.omega).abs();
            if dist < best_dist - tie {
                best = j;
                best_dist = dist;
            }
        }
        SpinIndex(best + 1)
    }
}

/// 1-based spin label, matching the `ε_1 … ε_L` numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinIndex(pub usize);

impl SpinIndex {
    /// Zero-based position in `epsilons`, or an error when outside `1..=spins`.
    pub fn checked(self, spins: usize) -> Result<usize> {
        if self.0 >= 1 && self.0 <= spins {
            Ok(self.0 - 1)
        } else {
            Err(Error::IndexOutOfRange {
                index: self.0,
                spins,
            })
        }
    }

    /// Slot of this spin in the sector basis (photon occupies slot 0).
    pub fn basis_slot(self, spins: usize) -> Result<usize> {
        self.checked(spins).map(|j| j + 1)
    }
}

impl std::fmt::Display for SpinIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Non-fatal findings of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Warning<T> {
    /// Some spin is detuned by more than half the cavity frequency; the
    /// rotating-wave Hamiltonian is questionable there.
    LargeDetuning { max_detuning: T },
}

impl<T: Real> std::fmt::Display for Warning<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::LargeDetuning { max_detuning } => write!(
                f,
                "max |eps_j - omega| = {max_detuning} exceeds {RWA_DETUNING_LIMIT} omega; rotating-wave approximation may fail"
            ),
        }
    }
}

/// Checks every parameter invariant. Returns the warnings on success.
pub fn validate<T: Real>(params: &ModelParams<T>) -> Result<Vec<Warning<T>>> {
    if !(params.g > T::zero()) {
        return Err(Error::NonPositiveCoupling {
            g: params.g.as_f64(),
        });
    }
    if !(params.omega > T::zero()) || !params.omega.is_finite() || !params.g.is_finite() {
        return Err(Error::InvalidParams(format!(
            "omega must be positive and finite (omega = {}, g = {})",
            params.omega, params.g
        )));
    }
    if params.epsilons.is_empty() {
        return Err(Error::InvalidParams("at least one spin is required".into()));
    }
    if let Some(index) = params.epsilons.iter().position(|e| !e.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "epsilon_{} is not finite",
            index + 1
        )));
    }
    if let Some(index) = params.epsilons.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(Error::NonAscendingEnergies { index: index + 1 });
    }

    let mut warnings = Vec::new();
    let max_detuning = params
        .epsilons
        .iter()
        .map(|&e| (e - params.omega).abs())
        .fold(T::zero(), T::max);
    if max_detuning > T::lit(RWA_DETUNING_LIMIT) * params.omega {
        warnings.push(Warning::LargeDetuning { max_detuning });
    }
    Ok(warnings)
}

/// Shape of the spin-energy distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisorderKind {
    /// `L` energies on a uniform grid whose endpoints are `center ± width/2`.
    EquallySpaced,
    /// Independent uniform draws in `[center - width/2, center + width/2]`.
    UniformRandom,
    /// Independent normal draws with mean `center` and standard deviation `width`.
    Gaussian,
}

/// Recipe for generating spin energies.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderSpec<T> {
    pub kind: DisorderKind,
    pub center: T,
    /// Band width `Ω` (standard deviation for [`DisorderKind::Gaussian`]).
    pub width: T,
    /// PRNG seed; ignored by [`DisorderKind::EquallySpaced`].
    pub seed: u64,
    /// Force one energy to equal `center` exactly.
    pub pin_resonant: bool,
}

impl<T: Real> DisorderSpec<T> {
    pub fn equally_spaced(center: T, width: T) -> Self {
        Self {
            kind: DisorderKind::EquallySpaced,
            center,
            width,
            seed: 0,
            pin_resonant: false,
        }
    }

    pub fn uniform(center: T, width: T, seed: u64) -> Self {
        Self {
            kind: DisorderKind::UniformRandom,
            center,
            width,
            seed,
            pin_resonant: false,
        }
    }

    pub fn gaussian(center: T, sigma: T, seed: u64) -> Self {
        Self {
            kind: DisorderKind::Gaussian,
            center,
            width: sigma,
            seed,
            pin_resonant: false,
        }
    }

    pub fn pinned(mut self, pin: bool) -> Self {
        self.pin_resonant = pin;
        self
    }
}

/// Generates `spins` strictly ascending spin energies.
///
/// Random kinds draw from a ChaCha8 stream seeded with `spec.seed`, so the
/// output is reproducible across platforms. Values closer than
/// `1e-12·max(|center|, 1)` count as collisions and the later value of the
/// pair is redrawn.
pub fn build_epsilons<T: Real>(spec: &DisorderSpec<T>, spins: usize) -> Result<Vec<T>> {
    if spins == 0 {
        return Err(Error::InvalidSpec("spin count must be at least 1".into()));
    }
    if !(spec.width >= T::zero()) || !spec.width.is_finite() || !spec.center.is_finite() {
        return Err(Error::InvalidSpec(format!(
            "width must be finite and non-negative, got {}",
            spec.width
        )));
    }
    let tol = T::lit(DISTINCT_TOL) * spec.center.abs().max(T::one());

    let mut energies = match spec.kind {
        DisorderKind::EquallySpaced => {
            let values = equally_spaced(spec.center, spec.width, spins);
            if first_collision(&values, tol).is_some() {
                return Err(Error::DistinctnessViolation {
                    attempts: 0,
                    tolerance: tol.as_f64(),
                });
            }
            values
        }
        DisorderKind::UniformRandom | DisorderKind::Gaussian => sample_distinct(spec, spins, tol)?,
    };

    if spec.pin_resonant && !energies.contains(&spec.center) {
        let nearest = energies
            .iter()
            .enumerate()
            .fold((0, T::infinity()), |best, (j, &e)| {
                let dist = (e - spec.center).abs();
                if dist < best.1 {
                    (j, dist)
                } else {
                    best
                }
            })
            .0;
        energies[nearest] = spec.center;
        sort_ascending(&mut energies);
        if first_collision(&energies, tol).is_some() {
            return Err(Error::DistinctnessViolation {
                attempts: 0,
                tolerance: tol.as_f64(),
            });
        }
    }
    Ok(energies)
}

fn equally_spaced<T: Real>(center: T, width: T, spins: usize) -> Vec<T> {
    if spins == 1 {
        return vec![center];
    }
    let half = width / T::lit(2.0);
    let lo = center - half;
    let steps = T::from_count(spins - 1);
    (0..spins)
        .map(|j| {
            if j + 1 == spins {
                center + half
            } else {
                lo + width * (T::from_count(j) / steps)
            }
        })
        .collect()
}

fn sample_distinct<T: Real>(spec: &DisorderSpec<T>, spins: usize, tol: T) -> Result<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let center = spec.center.as_f64();
    let width = spec.width.as_f64();
    let normal = match spec.kind {
        DisorderKind::Gaussian => Some(
            Normal::new(center, width).map_err(|e| Error::InvalidSpec(format!("gaussian: {e}")))?,
        ),
        _ => None,
    };
    let draw = |rng: &mut ChaCha8Rng| -> T {
        let x = match &normal {
            Some(n) => n.sample(rng),
            None if width == 0.0 => center,
            None => rng.random_range(center - 0.5 * width..=center + 0.5 * width),
        };
        T::lit(x)
    };

    let mut energies: Vec<T> = (0..spins).map(|_| draw(&mut rng)).collect();
    sort_ascending(&mut energies);
    for round in 0..=MAX_RESAMPLE_ROUNDS {
        match first_collision(&energies, tol) {
            None => return Ok(energies),
            Some(_) if round == MAX_RESAMPLE_ROUNDS => break,
            Some(j) => {
                energies[j + 1] = draw(&mut rng);
                sort_ascending(&mut energies);
            }
        }
    }
    Err(Error::DistinctnessViolation {
        attempts: MAX_RESAMPLE_ROUNDS,
        tolerance: tol.as_f64(),
    })
}

fn sort_ascending<T: Real>(values: &mut [T]) {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
}

fn first_collision<T: Real>(sorted: &[T], tol: T) -> Option<usize> {
    sorted.windows(2).position(|w| w[1] - w[0] <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn equally_spaced_fig2_grid() {
        let spec = DisorderSpec::equally_spaced(1.0, 0.1);
        let e = build_epsilons(&spec, 20).unwrap();
        assert_eq!(e.len(), 20);
        assert_relative_eq!(e[0], 0.95, epsilon = 1e-15);
        assert_relative_eq!(e[19], 1.05, epsilon = 1e-15);
        for w in e.windows(2) {
            assert_relative_eq!(w[1] - w[0], 0.1 / 19.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn single_spin_grid_is_center() {
        let spec = DisorderSpec::equally_spaced(1.0, 0.1);
        assert_eq!(build_epsilons(&spec, 1).unwrap(), vec![1.0]);
    }

    // recorded once from the ChaCha8 stream
    #[test]
    fn uniform_seed_42_golden() {
        let spec = DisorderSpec::uniform(1.0_f64, 0.1, 42);
        let e = build_epsilons(&spec, 20).unwrap();
        let golden = UNIFORM_SEED42_L20;
        assert_eq!(e.len(), golden.len());
        for (x, y) in e.iter().zip(golden) {
            assert_eq!(x.to_bits(), y.to_bits(), "{x} vs {y}");
        }
    }

    pub(crate) const UNIFORM_SEED42_L20: [f64; 20] = [
        0.9576391004088587,
        0.9649958870290325,
        0.9671762290900625,
        0.9679136409263178,
        0.9738585264381339,
        0.9788593879141182,
        0.9808040559597909,
        0.992751640285652,
        0.9944052334920976,
        1.000686687034007,
        1.0075393146600706,
        1.0092978570324334,
        1.012736052119734,
        1.0181896192306672,
        1.0228798486500776,
        1.0271248780802857,
        1.0303872767175628,
        1.0401803172048774,
        1.0450275407672485,
        1.0456990268916142,
    ];

    #[test]
    fn random_kinds_ascend_and_stay_in_band() {
        for seed in 0..20 {
            let e = build_epsilons(&DisorderSpec::uniform(1.0, 0.1, seed), 32).unwrap();
            assert!(e.windows(2).all(|w| w[0] < w[1]));
            assert!(e.iter().all(|&x| (0.95..=1.05).contains(&x)));
            let e = build_epsilons(&DisorderSpec::gaussian(1.0, 0.05, seed), 32).unwrap();
            assert!(e.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn pin_resonant_inserts_center() {
        let spec = DisorderSpec::equally_spaced(1.0, 0.1).pinned(true);
        let e = build_epsilons(&spec, 20).unwrap();
        assert!(e.contains(&1.0));
        assert!(e.windows(2).all(|w| w[0] < w[1]));
        // odd grids already contain the center and stay untouched
        let plain = build_epsilons(&DisorderSpec::equally_spaced(1.0, 0.1), 21).unwrap();
        let pinned = build_epsilons(&DisorderSpec::equally_spaced(1.0, 0.1).pinned(true), 21).unwrap();
        assert_eq!(plain, pinned);
    }

    #[test]
    fn negative_width_is_invalid() {
        let spec = DisorderSpec::equally_spaced(1.0, -0.1);
        assert!(matches!(build_epsilons(&spec, 4), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn zero_width_collides() {
        let spec = DisorderSpec::equally_spaced(1.0, 0.0);
        assert!(matches!(
            build_epsilons(&spec, 3),
            Err(Error::DistinctnessViolation { .. })
        ));
        let spec = DisorderSpec::uniform(1.0, 0.0, 7);
        assert!(matches!(
            build_epsilons(&spec, 3),
            Err(Error::DistinctnessViolation { .. })
        ));
    }

    #[test]
    fn validate_examples() {
        let ok = ModelParams {
            omega: 1.0,
            g: 0.05,
            epsilons: vec![0.95, 1.05],
        };
        assert_eq!(validate(&ok).unwrap(), vec![]);

        let swapped = ModelParams {
            epsilons: vec![1.05, 0.95],
            ..ok.clone()
        };
        assert_eq!(
            validate(&swapped),
            Err(Error::NonAscendingEnergies { index: 1 })
        );

        let negative = ModelParams {
            omega: 1.0,
            g: -0.05,
            epsilons: vec![1.0],
        };
        assert!(matches!(
            validate(&negative),
            Err(Error::NonPositiveCoupling { .. })
        ));
    }

    #[test]
    fn large_detuning_warns() {
        let p = ModelParams {
            omega: 1.0,
            g: 0.05,
            epsilons: vec![0.2, 1.0],
        };
        let w = validate(&p).unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn spin_index_bounds() {
        assert_eq!(SpinIndex(1).checked(3), Ok(0));
        assert_eq!(SpinIndex(3).basis_slot(3), Ok(3));
        assert!(SpinIndex(0).checked(3).is_err());
        assert!(SpinIndex(4).checked(3).is_err());
    }

    #[test]
    fn most_resonant_prefers_lower_on_tie() {
        let p = ModelParams::new(1.0, 0.05, build_epsilons(&DisorderSpec::equally_spaced(1.0, 0.1), 20).unwrap()).unwrap();
        assert_eq!(p.most_resonant_spin(), SpinIndex(10));
    }
}
