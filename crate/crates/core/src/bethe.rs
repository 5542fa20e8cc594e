//! Single-rapidity Bethe equation
//!
//! ```text
//! f(λ) = (λ - ω)/g - Σ_j g/(λ - ε_j) = 0
//! ```
//!
//! `f` is strictly increasing between consecutive poles `ε_j`, running from
//! `-∞` to `+∞`, so each of the `L - 1` gaps holds exactly one root and one
//! more root lies on either side of the band. Every root is located inside
//! its own bracket by a safeguarded Newton iteration.
//!
//! Roots are stored relative to the nearest pole ("anchor"): `λ = ε_a + x`.
//! Distances `λ - ε_j` are then formed as `(ε_a - ε_j) + x`, which keeps full
//! relative precision for roots that hug a pole.

use crate::error::{Error, Result};
use crate::model::{validate, ModelParams};
use crate::scalar::{compensated_sum, Real};

/// Position of a root relative to the spin band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootClass {
    /// Below `ε_1` (bright).
    SeparatedLow,
    /// Between two neighbouring spin energies (dark).
    Confined,
    /// Above `ε_L` (bright).
    SeparatedHigh,
}

impl RootClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RootClass::SeparatedLow => "separated_low",
            RootClass::Confined => "confined",
            RootClass::SeparatedHigh => "separated_high",
        }
    }

    pub fn is_separated(self) -> bool {
        !matches!(self, RootClass::Confined)
    }
}

impl std::fmt::Display for RootClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Knobs of [`solve_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    /// Absolute root tolerance (units of ω).
    pub tol: T,
    /// Residual acceptance is `|f| < residual_scale / g`.
    pub residual_scale: T,
    pub max_iterations: usize,
    pub max_expansions: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-12),
            residual_scale: T::lit(1e-9),
            max_iterations: 200,
            max_expansions: 64,
        }
    }
}

impl<T: Real> SolverOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// All `L + 1` rapidities of the single-excitation sector, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheSpectrum<T> {
    params: ModelParams<T>,
    roots: Vec<T>,
    anchors: Vec<usize>,
    offsets: Vec<T>,
    classes: Vec<RootClass>,
    brackets: Vec<(T, T)>,
    norm_sq: Vec<T>,
    residuals: Vec<T>,
}

impl<T: Real> BetheSpectrum<T> {
    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    /// Number of roots, `L + 1`.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[T] {
        &self.roots
    }

    pub fn classes(&self) -> &[RootClass] {
        &self.classes
    }

    /// Initial search interval of each root, in λ.
    pub fn brackets(&self) -> &[(T, T)] {
        &self.brackets
    }

    /// Squared norm `⟨Φ_α|Φ_α⟩ = 1 + Σ_j g²/(λ_α - ε_j)²` of each unnormalized eigenstate.
    pub fn norm_sq(&self) -> &[T] {
        &self.norm_sq
    }

    /// `f(λ_α)` at the accepted roots.
    pub fn residuals(&self) -> &[T] {
        &self.residuals
    }

    /// Zero-based index of the pole nearest to root `alpha`.
    pub fn anchor(&self, alpha: usize) -> usize {
        self.anchors[alpha]
    }

    /// Offset of root `alpha` from its anchor pole.
    pub fn offset(&self, alpha: usize) -> T {
        self.offsets[alpha]
    }

    /// `λ_α - ε_j` for zero-based spin `j`, accurate even next to a pole.
    #[inline]
    pub fn pole_distance(&self, alpha: usize, j: usize) -> T {
        let eps = &self.params.epsilons;
        (eps[self.anchors[alpha]] - eps[j]) + self.offsets[alpha]
    }

    /// Unnormalized amplitude `g/(λ_α - ε_j)` of spin `j` (zero-based).
    #[inline]
    pub fn spin_weight(&self, alpha: usize, j: usize) -> T {
        self.params.g / self.pole_distance(alpha, j)
    }

    pub fn trace(&self) -> T {
        compensated_sum(self.roots.iter().copied())
    }

    pub fn second_moment(&self) -> T {
        compensated_sum(self.roots.iter().map(|&r| r * r))
    }
}

/// Bethe residual `f(λ) = (λ - ω)/g - Σ_j g/(λ - ε_j)`.
pub fn residual<T: Real>(lambda: T, params: &ModelParams<T>) -> Result<T> {
    let g = params.g;
    let mut sum = (lambda - params.omega) / g;
    for (j, &e) in params.epsilons.iter().enumerate() {
        let dist = lambda - e;
        check_pole(dist, j)?;
        sum = sum - g / dist;
    }
    Ok(sum)
}

/// `f'(λ) = 1/g + Σ_j g/(λ - ε_j)²`, strictly positive.
pub fn residual_derivative<T: Real>(lambda: T, params: &ModelParams<T>) -> Result<T> {
    let g = params.g;
    let mut sum = T::one() / g;
    for (j, &e) in params.epsilons.iter().enumerate() {
        let dist = lambda - e;
        check_pole(dist, j)?;
        sum = sum + g / (dist * dist);
    }
    Ok(sum)
}

fn pole_guard<T: Real>() -> T {
    T::min_positive_value().max(T::lit(1e-300))
}

fn check_pole<T: Real>(dist: T, index: usize) -> Result<()> {
    if dist.abs() < pole_guard() {
        Err(Error::PoleHit { index })
    } else {
        Ok(())
    }
}

/// Residual evaluated at `λ = ε_anchor + x`, with its derivative and a
/// rounding-error bound for the evaluation.
struct AnchoredResidual<'a, T> {
    params: &'a ModelParams<T>,
    anchor: usize,
    /// `ε_anchor - ε_j` for every spin.
    gaps: Vec<T>,
    /// `ε_anchor - ω`
    detuning: T,
}

struct Evaluation<T> {
    value: T,
    slope: T,
    noise: T,
}

impl<'a, T: Real> AnchoredResidual<'a, T> {
    fn new(params: &'a ModelParams<T>, anchor: usize) -> Self {
        let ea = params.epsilons[anchor];
        Self {
            params,
            anchor,
            gaps: params.epsilons.iter().map(|&e| ea - e).collect(),
            detuning: ea - params.omega,
        }
    }

    fn lambda(&self, x: T) -> T {
        self.params.epsilons[self.anchor] + x
    }

    fn value(&self, x: T) -> T {
        self.eval(x).value
    }

    fn eval(&self, x: T) -> Evaluation<T> {
        let g = self.params.g;
        let linear = (self.detuning + x) / g;
        let mut value = linear;
        let mut slope = T::one() / g;
        let mut magnitude = linear.abs();
        for &gap in &self.gaps {
            let dist = gap + x;
            let term = g / dist;
            value = value - term;
            slope = slope + term / dist;
            magnitude = magnitude + term.abs();
        }
        let noise = T::lit(8.0) * T::epsilon() * magnitude;
        Evaluation {
            value,
            slope,
            noise,
        }
    }
}

/// Solves for all `L + 1` roots and their eigenstate norms.
pub fn solve_spectrum<T: Real>(
    params: &ModelParams<T>,
    opts: &SolverOptions<T>,
) -> Result<BetheSpectrum<T>> {
    validate(params)?;
    if !(opts.tol > T::zero()) {
        return Err(Error::InvalidParams(format!(
            "solver tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let l = params.spins();
    let mut spectrum = BetheSpectrum {
        params: params.clone(),
        roots: Vec::with_capacity(l + 1),
        anchors: Vec::with_capacity(l + 1),
        offsets: Vec::with_capacity(l + 1),
        classes: Vec::with_capacity(l + 1),
        brackets: Vec::with_capacity(l + 1),
        norm_sq: Vec::with_capacity(l + 1),
        residuals: Vec::with_capacity(l + 1),
    };

    for alpha in 0..=l {
        let (class, search) = if alpha == 0 {
            (RootClass::SeparatedLow, bracket_outer(params, opts, alpha, false)?)
        } else if alpha == l {
            (RootClass::SeparatedHigh, bracket_outer(params, opts, alpha, true)?)
        } else {
            (RootClass::Confined, bracket_confined(params, opts, alpha)?)
        };
        let root = refine(params, opts, alpha, &search)?;
        let f = AnchoredResidual::new(params, search.anchor);
        let ea = params.epsilons[search.anchor];
        spectrum.roots.push(f.lambda(root.offset));
        spectrum.anchors.push(search.anchor);
        spectrum.offsets.push(root.offset);
        spectrum.classes.push(class);
        spectrum.brackets.push((ea + search.lo, ea + search.hi));
        spectrum.residuals.push(root.residual);
        spectrum.norm_sq.push(norm_sq_at(params, &f.gaps, root.offset));
    }
    Ok(spectrum)
}

fn norm_sq_at<T: Real>(params: &ModelParams<T>, gaps: &[T], x: T) -> T {
    let g = params.g;
    compensated_sum(std::iter::once(T::one()).chain(gaps.iter().map(|&gap| {
        let w = g / (gap + x);
        w * w
    })))
}

/// Offsets `lo < hi` around `anchor` with `f(lo) < 0 < f(hi)`.
struct Bracket<T> {
    anchor: usize,
    lo: T,
    hi: T,
}

/// Confined root `alpha` lies between `ε_alpha` and `ε_{alpha+1}` (1-based),
/// i.e. zero-based poles `alpha - 1` and `alpha`.
fn bracket_confined<T: Real>(
    params: &ModelParams<T>,
    opts: &SolverOptions<T>,
    alpha: usize,
) -> Result<Bracket<T>> {
    let left = alpha - 1;
    let right = alpha;
    let width = params.epsilons[right] - params.epsilons[left];
    let half = width / T::lit(2.0);
    let from_left = AnchoredResidual::new(params, left);
    let f_mid = from_left.value(half);
    if f_mid == T::zero() {
        return Ok(Bracket {
            anchor: left,
            lo: half,
            hi: half,
        });
    }

    // Anchor on the pole the root is closer to, then walk a guard towards it.
    let (anchor, outer, side) = if f_mid > T::zero() {
        (left, half, T::one())
    } else {
        (right, -half, -T::one())
    };
    let f = AnchoredResidual::new(params, anchor);
    let mut guard = T::lit(1e-3) * width;
    let mut inner_limit = outer;
    for _ in 0..opts.max_expansions {
        let x = side * guard;
        let v = f.value(x);
        // left anchor needs f < 0 near the pole, right anchor f > 0
        if v * side < T::zero() {
            let (lo, hi) = if side > T::zero() {
                (x, inner_limit)
            } else {
                (inner_limit, x)
            };
            return Ok(Bracket { anchor, lo, hi });
        }
        if v == T::zero() {
            return Ok(Bracket {
                anchor,
                lo: x,
                hi: x,
            });
        }
        inner_limit = x;
        guard = guard / T::lit(10.0);
    }
    Err(Error::BracketFailure {
        alpha,
        expansions: opts.max_expansions,
    })
}

/// Separated root below `ε_1` (`above == false`) or above `ε_L`.
fn bracket_outer<T: Real>(
    params: &ModelParams<T>,
    opts: &SolverOptions<T>,
    alpha: usize,
    above: bool,
) -> Result<Bracket<T>> {
    let l = params.spins();
    let anchor = if above { l - 1 } else { 0 };
    let side = if above { T::one() } else { -T::one() };
    let f = AnchoredResidual::new(params, anchor);
    let failure = Error::BracketFailure {
        alpha,
        expansions: opts.max_expansions,
    };

    // far end: f(ε_L + W) > 0 above the band, f(ε_1 - W) < 0 below it
    let start = (params.g * T::from_count(l).sqrt()).max(params.band_width());
    let mut far = start;
    let mut expanded = false;
    for _ in 0..opts.max_expansions {
        if f.value(side * far) * side > T::zero() {
            expanded = true;
            break;
        }
        far = far * T::lit(2.0);
    }
    if !expanded {
        return Err(failure);
    }

    // near end, next to the pole: opposite sign
    let mut guard = T::lit(1e-3) * start;
    let mut outer = far;
    for _ in 0..opts.max_expansions {
        let v = f.value(side * guard);
        if v * side < T::zero() {
            let (lo, hi) = if above {
                (guard, outer)
            } else {
                (-outer, -guard)
            };
            return Ok(Bracket { anchor, lo, hi });
        }
        if v == T::zero() {
            return Ok(Bracket {
                anchor,
                lo: side * guard,
                hi: side * guard,
            });
        }
        outer = guard;
        guard = guard / T::lit(10.0);
    }
    Err(failure)
}

struct Refined<T> {
    offset: T,
    residual: T,
}

/// Safeguarded Newton iteration inside `[lo, hi]`, falling back to bisection
/// whenever the Newton step leaves the bracket or fails to halve it.
fn refine<T: Real>(
    params: &ModelParams<T>,
    opts: &SolverOptions<T>,
    alpha: usize,
    bracket: &Bracket<T>,
) -> Result<Refined<T>> {
    let f = AnchoredResidual::new(params, bracket.anchor);
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let half = T::lit(0.5);
    let residual_tol = opts.residual_scale / params.g;

    let accept = |x: T, e: &Evaluation<T>| -> Option<Refined<T>> {
        (e.value.abs() <= residual_tol.max(e.noise)).then_some(Refined {
            offset: x,
            residual: e.value,
        })
    };

    if lo == hi {
        let e = f.eval(lo);
        return Ok(Refined {
            offset: lo,
            residual: e.value,
        });
    }

    let mut x = half * (lo + hi);
    let mut last_step = hi - lo;
    for _ in 0..opts.max_iterations {
        let e = f.eval(x);
        if e.value == T::zero() {
            return Ok(Refined {
                offset: x,
                residual: e.value,
            });
        }
        if e.value < T::zero() {
            lo = x;
        } else {
            hi = x;
        }

        let newton = x - e.value / e.slope;
        let use_newton = newton > lo && newton < hi && (newton - x).abs() * T::lit(2.0) <= last_step;
        let next = if use_newton { newton } else { half * (lo + hi) };
        let step = next - x;
        last_step = step.abs();

        let resolution = T::lit(2.0) * T::epsilon() * next.abs();
        let unsplittable = next == lo || next == hi;
        if step.abs() <= resolution || unsplittable || (hi - lo) <= resolution {
            let en = f.eval(next);
            if let Some(r) = accept(next, &en) {
                return Ok(r);
            }
            if let Some(r) = accept(x, &e) {
                return Ok(r);
            }
            return Err(Error::ConvergenceFailure {
                alpha,
                iterations: opts.max_iterations,
                width: (hi - lo).as_f64(),
            });
        }
        x = next;
    }

    let e = f.eval(x);
    if hi - lo <= opts.tol {
        if let Some(r) = accept(x, &e) {
            return Ok(r);
        }
    }
    Err(Error::ConvergenceFailure {
        alpha,
        iterations: opts.max_iterations,
        width: (hi - lo).as_f64(),
    })
}
