//! Large-`L` closed forms for the equally spaced band.
//!
//! With level spacing `d` and `d/g ≪ 1`, dark roots sit at `ε_α + δ_α`,
//! the survival amplitude of a resonant spin becomes a triangle wave of
//! period `4π/d`, and photon amplitudes follow the matching square wave.
//! Each Fourier series is available both truncated (as written) and in its
//! piecewise closed form.

use num_complex::Complex;

use crate::bethe::BetheSpectrum;
use crate::dynamics::{BellSign, InitialCondition};
use crate::error::{Error, Result};
use crate::model::{ModelParams, SpinIndex};
use crate::scalar::{arccot, Real};

/// How the Fourier series are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeriesMode {
    /// Piecewise-linear triangle and piecewise-constant square wave.
    #[default]
    Closed,
    /// Direct summation of `series_terms + 1` Fourier terms.
    Truncated,
}

/// Band data the asymptotic formulas depend on.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticContext<T> {
    /// Level spacing.
    pub d: T,
    pub g: T,
    pub omega: T,
    pub spins: usize,
    /// Spin energies of the band, ascending; `ε_1` first and `ε_L` last.
    pub epsilons: Vec<T>,
    /// Highest series index `N` in `Σ_{n=0}^{N}`.
    pub series_terms: usize,
    pub mode: SeriesMode,
}

pub const DEFAULT_SERIES_TERMS: usize = 10_000;

impl<T: Real> AsymptoticContext<T> {
    /// Context for a band with at least two spins; `d = (ε_L - ε_1)/(L - 1)`.
    pub fn from_params(params: &ModelParams<T>) -> Result<Self> {
        let d = params.mean_spacing().ok_or_else(|| {
            Error::InvalidParams("asymptotics need at least two spins".into())
        })?;
        Ok(Self {
            d,
            g: params.g,
            omega: params.omega,
            spins: params.spins(),
            epsilons: params.epsilons.clone(),
            series_terms: DEFAULT_SERIES_TERMS,
            mode: SeriesMode::Closed,
        })
    }

    pub fn with_series(mut self, terms: usize, mode: SeriesMode) -> Self {
        assert!(terms >= 1, "series needs at least one term");
        self.series_terms = terms;
        self.mode = mode;
        self
    }

    pub fn eps_first(&self) -> T {
        self.epsilons[0]
    }

    pub fn eps_last(&self) -> T {
        self.epsilons[self.spins - 1]
    }

    /// `Ω = ε_L - ε_1`
    pub fn band_width(&self) -> T {
        self.eps_last() - self.eps_first()
    }

    pub fn epsilon(&self, spin: SpinIndex) -> Result<T> {
        Ok(self.epsilons[spin.checked(self.spins)?])
    }

    /// Period of the triangle wave, `4π/d`.
    pub fn period(&self) -> T {
        T::lit(4.0) * T::PI() / self.d
    }

    fn check_interior(&self, eps: T) -> Result<()> {
        if eps > self.eps_first() && eps < self.eps_last() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                value: eps.as_f64(),
                lower: self.eps_first().as_f64(),
                upper: self.eps_last().as_f64(),
            })
        }
    }

    /// `ln((ε_L - ε)/(ε - ε_1))`
    fn band_log(&self, eps: T) -> T {
        ((self.eps_last() - eps) / (eps - self.eps_first())).ln()
    }
}

/// Offset `δ_α = λ_α - ε_α` of the dark root above `ε_α`:
/// `(d/π)·arccot((1/π)[(d/g²)(ε_α - ω) + ln((ε_L - ε_α)/(ε_α - ε_1))])`.
pub fn delta_alpha<T: Real>(eps_alpha: T, ctx: &AsymptoticContext<T>) -> Result<T> {
    ctx.check_interior(eps_alpha)?;
    let arg = (ctx.d / (ctx.g * ctx.g) * (eps_alpha - ctx.omega) + ctx.band_log(eps_alpha)) / T::PI();
    Ok(ctx.d / T::PI() * arccot(arg))
}

/// Dark-state norm `g²π²/d² · [1 + π⁻² ln²((ε_L - ε_α)/(ε_α - ε_1))]`.
pub fn dark_norm<T: Real>(eps_alpha: T, ctx: &AsymptoticContext<T>) -> Result<T> {
    ctx.check_interior(eps_alpha)?;
    let log = ctx.band_log(eps_alpha);
    let pi = T::PI();
    Ok(ctx.g * ctx.g * pi * pi / (ctx.d * ctx.d) * (T::one() + log * log / (pi * pi)))
}

/// Bright-state norm `1 + g²L/((λ - ε_1)(λ - ε_L))`.
pub fn bright_norm<T: Real>(lambda: T, ctx: &AsymptoticContext<T>) -> T {
    T::one()
        + ctx.g * ctx.g * T::from_count(ctx.spins)
            / ((lambda - ctx.eps_first()) * (lambda - ctx.eps_last()))
}

/// One separated root of the continuum equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrightRoot<T> {
    pub lambda: T,
    pub norm_sq: T,
    /// Distance to the band edge is at least [`BRIGHT_VALIDITY_SPACINGS`]·d.
    pub valid: bool,
}

/// The continuum approximation needs the root well outside the band; this
/// many level spacings is the threshold used for the validity flag.
pub const BRIGHT_VALIDITY_SPACINGS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrightRoots<T> {
    pub low: BrightRoot<T>,
    pub high: BrightRoot<T>,
}

impl<T: Real> BrightRoots<T> {
    /// Separated roots and exact norms taken from a solved spectrum.
    pub fn from_spectrum(spectrum: &BetheSpectrum<T>) -> Self {
        let last = spectrum.len() - 1;
        let root = |alpha: usize| BrightRoot {
            lambda: spectrum.roots()[alpha],
            norm_sq: spectrum.norm_sq()[alpha],
            valid: true,
        };
        Self {
            low: root(0),
            high: root(last),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &BrightRoot<T>> {
        [&self.low, &self.high].into_iter()
    }
}

/// Solves `λ - ω = (g²L/Ω)·ln((λ - ε_1)/(λ - ε_L))` below and above the band.
///
/// The left side minus the right side is strictly increasing outside the band,
/// so each side is solved by bisection on an expanding bracket.
pub fn bright_roots<T: Real>(ctx: &AsymptoticContext<T>, tol: T) -> Result<BrightRoots<T>> {
    let width = ctx.band_width();
    let coupling = ctx.g * ctx.g * T::from_count(ctx.spins) / width;
    let (e1, el) = (ctx.eps_first(), ctx.eps_last());
    let h = |lambda: T| lambda - ctx.omega - coupling * ((lambda - e1) / (lambda - el)).ln();
    let start = (ctx.g * T::from_count(ctx.spins).sqrt()).max(width);
    let validity = T::lit(BRIGHT_VALIDITY_SPACINGS) * ctx.d;

    let solve = |above: bool, alpha: usize| -> Result<BrightRoot<T>> {
        let edge = if above { el } else { e1 };
        let side = if above { T::one() } else { -T::one() };
        let failure = Error::BracketFailure {
            alpha,
            expansions: 64,
        };
        let mut far = start;
        let mut found = false;
        for _ in 0..64 {
            if h(edge + side * far) * side > T::zero() {
                found = true;
                break;
            }
            far = far * T::lit(2.0);
        }
        if !found {
            return Err(failure);
        }
        let mut near = start * T::lit(1e-3);
        found = false;
        for _ in 0..64 {
            if h(edge + side * near) * side < T::zero() {
                found = true;
                break;
            }
            near = near / T::lit(10.0);
        }
        if !found {
            return Err(failure);
        }
        // h(edge + side·near)·side < 0 < h(edge + side·far)·side
        let (mut a, mut b) = (near, far);
        for _ in 0..200 {
            let mid = T::lit(0.5) * (a + b);
            if b - a <= tol || mid == a || mid == b {
                break;
            }
            if h(edge + side * mid) * side > T::zero() {
                b = mid;
            } else {
                a = mid;
            }
        }
        let offset = T::lit(0.5) * (a + b);
        let lambda = edge + side * offset;
        Ok(BrightRoot {
            lambda,
            norm_sq: bright_norm(lambda, ctx),
            valid: offset >= validity,
        })
    };

    Ok(BrightRoots {
        low: solve(false, 0)?,
        high: solve(true, ctx.spins)?,
    })
}

/// Truncated `(8/π²) Σ_{n=0}^{N} cos[(2n+1)td/2]/(2n+1)²`.
pub fn triangle_series<T: Real>(t: T, ctx: &AsymptoticContext<T>) -> T {
    let x = t * ctx.d / T::lit(2.0);
    let sum = (0..=ctx.series_terms)
        .map(|n| {
            let k = T::from_count(2 * n + 1);
            (k * x).cos() / (k * k)
        })
        .fold(T::zero(), |a, b| a + b);
    T::lit(8.0) / (T::PI() * T::PI()) * sum
}

/// Triangle wave of period `4π/d`: `1` at `t = 0`, `-1` at `t = 2π/d`.
pub fn triangle_closed<T: Real>(t: T, d: T) -> T {
    let x = reduce_angle(t * d / T::lit(2.0));
    T::one() - T::lit(2.0) * x.abs() / T::PI()
}

/// Triangle wave via the context's [`SeriesMode`].
pub fn triangle<T: Real>(t: T, ctx: &AsymptoticContext<T>) -> T {
    match ctx.mode {
        SeriesMode::Closed => triangle_closed(t, ctx.d),
        SeriesMode::Truncated => triangle_series(t, ctx),
    }
}

/// Truncated `Σ_{n=0}^{N} sin[(2n+1)td/2]/(2n+1)`.
pub fn square_series<T: Real>(t: T, ctx: &AsymptoticContext<T>) -> T {
    let x = t * ctx.d / T::lit(2.0);
    (0..=ctx.series_terms)
        .map(|n| {
            let k = T::from_count(2 * n + 1);
            (k * x).sin() / k
        })
        .fold(T::zero(), |a, b| a + b)
}

/// `(π/4)·sign(sin(td/2))`, zero on the jumps.
pub fn square_closed<T: Real>(t: T, d: T) -> T {
    let x = reduce_angle(t * d / T::lit(2.0));
    if x == T::zero() || x.abs() == T::PI() {
        T::zero()
    } else {
        T::FRAC_PI_4() * x.signum()
    }
}

pub fn square<T: Real>(t: T, ctx: &AsymptoticContext<T>) -> T {
    match ctx.mode {
        SeriesMode::Closed => square_closed(t, ctx.d),
        SeriesMode::Truncated => square_series(t, ctx),
    }
}

/// Maps an angle into `[-π, π]`.
fn reduce_angle<T: Real>(x: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let r = x - two_pi * (x / two_pi).round();
    r.max(-T::PI()).min(T::PI())
}

#[inline]
fn cis<T: Real>(angle: T) -> Complex<T> {
    Complex::from_polar(T::one(), angle)
}

/// Leading-order survival (or Bell fidelity) amplitude.
///
/// Single spin: `e^{-iε_A t}·triangle(t)`, plus the separated-root correction
/// `(1/L) e^{-iε_A t} Σ_{α∈{0,L}} e^{-it(λ_α - ε_A)} g²L / ((λ_α - ε_A)² ⟨Φ_α|Φ_α⟩)`
/// when `bright` is given. Bell states follow the two-series form with the
/// relative sign of the state.
pub fn survival_asym<T: Real>(
    cond: &InitialCondition,
    t: T,
    ctx: &AsymptoticContext<T>,
    bright: Option<&BrightRoots<T>>,
) -> Result<Complex<T>> {
    match *cond {
        InitialCondition::SinglePhoton => Err(Error::UnsupportedCondition(
            "single photon survival uses photon_survival_asym",
        )),
        InitialCondition::SingleSpin(a) => {
            let ea = ctx.epsilon(a)?;
            let mut value = cis(-ea * t) * triangle(t, ctx);
            if let Some(bright) = bright {
                let l = T::from_count(ctx.spins);
                let g2l = ctx.g * ctx.g * l;
                for root in bright.iter() {
                    let det = root.lambda - ea;
                    let weight = g2l / (det * det) / root.norm_sq / l;
                    value = value + cis(-ea * t) * cis(-t * det) * weight;
                }
            }
            Ok(value)
        }
        InitialCondition::Bell { a, b, sign } => {
            let ea = ctx.epsilon(a)?;
            let eb = ctx.epsilon(b)?;
            Ok(bell_survival_asym(t, ctx, ea, eb, sign))
        }
    }
}

/// `(8/π²) e^{-i(ε_A+ε_B)t/2} [cos((ε_B-ε_A)t/2)·C(t) ± d/(ε_A-ε_B)·sin((ε_B-ε_A)t/2)·S(t)]`
/// with `C` the cosine series and `S` the sine series. Continuous at `ε_A = ε_B`.
pub fn bell_survival_asym<T: Real>(t: T, ctx: &AsymptoticContext<T>, ea: T, eb: T, sign: BellSign) -> Complex<T> {
    let two = T::lit(2.0);
    let pi2 = T::PI() * T::PI();
    let cos_series = pi2 / T::lit(8.0) * triangle(t, ctx);
    let sin_series = square(t, ctx);
    let u = (eb - ea) * t / two;
    // d/(ε_A-ε_B)·sin(u) = -(d t/2)·sin(u)/u
    let sinc = if u == T::zero() { T::one() } else { u.sin() / u };
    let cross = -(ctx.d * t / two) * sinc;
    let envelope = u.cos() * cos_series + sign.factor::<T>() * cross * sin_series;
    cis(-(ea + eb) * t / two) * (T::lit(8.0) / pi2 * envelope)
}

/// Photon amplitude for a single photon initially:
/// dark sum `(d²/π²g²) e^{-idt/2} Σ_{α=1}^{L-1} e^{-iε_α t}/(1 + π⁻² ln²(…))`
/// plus bright terms `Σ_{α∈{0,L}} e^{-iλ_α t}/(1 + g²L/((λ_α-ε_1)(λ_α-ε_L)))`.
pub fn photon_survival_asym<T: Real>(t: T, ctx: &AsymptoticContext<T>, bright: &BrightRoots<T>) -> Complex<T> {
    photon_survival_dark(t, ctx) + photon_survival_bright(t, ctx, bright)
}

/// Dark-state part of [`photon_survival_asym`].
pub fn photon_survival_dark<T: Real>(t: T, ctx: &AsymptoticContext<T>) -> Complex<T> {
    let pi = T::PI();
    let prefactor = ctx.d * ctx.d / (pi * pi * ctx.g * ctx.g);
    let sum = ctx.epsilons[..ctx.spins - 1]
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &e| {
            let log = ctx.band_log(e);
            acc + cis(-e * t) / (T::one() + log * log / (pi * pi))
        });
    cis(-ctx.d * t / T::lit(2.0)) * sum * prefactor
}

/// Bright-state part of [`photon_survival_asym`].
pub fn photon_survival_bright<T: Real>(t: T, ctx: &AsymptoticContext<T>, bright: &BrightRoots<T>) -> Complex<T> {
    bright
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, root| {
            acc + cis(-root.lambda * t) / bright_norm(root.lambda, ctx)
        })
}

/// Photon amplitude for a single excited spin `A`:
/// `(4d/(gπ²)) e^{-iε_A t}·S(t)`.
pub fn spin_photon_asym<T: Real>(t: T, ctx: &AsymptoticContext<T>, ea: T) -> Complex<T> {
    let pi = T::PI();
    cis(-ea * t) * (T::lit(4.0) * ctx.d / (ctx.g * pi * pi) * square(t, ctx))
}

/// Photon amplitude for a Bell initial state:
/// `(2√2/π²)(d/g)(e^{-iε_A t} ± e^{-iε_B t})·S(t)`.
pub fn bell_photon_asym<T: Real>(t: T, ctx: &AsymptoticContext<T>, ea: T, eb: T, sign: BellSign) -> Complex<T> {
    let pi = T::PI();
    let prefactor = T::lit(2.0) * T::SQRT_2() / (pi * pi) * (ctx.d / ctx.g);
    let pair = cis(-ea * t) + cis(-eb * t) * sign.factor::<T>();
    pair * (prefactor * square(t, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_epsilons, DisorderSpec};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn fig2(l: usize) -> AsymptoticContext<f64> {
        let eps = build_epsilons(&DisorderSpec::equally_spaced(1.0, 0.1), l).unwrap();
        AsymptoticContext::from_params(&ModelParams::new(1.0, 0.05, eps).unwrap()).unwrap()
    }

    #[test]
    fn delta_centered_is_half_spacing() {
        let ctx = fig2(21);
        let d = ctx.d;
        assert!((delta_alpha(1.0, &ctx).unwrap() - d / 2.0).abs() <= 1e-12 * d);
    }

    #[test]
    fn delta_limits_at_band_edges() {
        // near ε_1 the log term diverges to +∞ and the root hugs its left pole;
        // near ε_L it diverges to -∞ and the root approaches the next pole
        let ctx = fig2(20);
        let d = ctx.d;
        let low = delta_alpha(ctx.eps_first() + 1e-200, &ctx);
        assert_eq!(low, Err(Error::OutOfRange { value: ctx.eps_first(), lower: ctx.eps_first(), upper: ctx.eps_last() }));
        let low = delta_alpha(ctx.eps_first() * (1.0 + 1e-15), &ctx).unwrap();
        assert!(low > 0.0 && low < 0.1 * d);
        let high = delta_alpha(ctx.eps_last() * (1.0 - 1e-15), &ctx).unwrap();
        assert!(high < d && high > 0.9 * d);
        for k in 1..200 {
            let e = ctx.eps_first() + ctx.band_width() * k as f64 / 200.0;
            let delta = delta_alpha(e, &ctx).unwrap();
            assert!(delta > 0.0 && delta < d);
        }
        assert!(delta_alpha(ctx.eps_first(), &ctx).is_err());
        assert!(delta_alpha(ctx.eps_last(), &ctx).is_err());
    }

    #[test]
    fn dark_norm_centered_and_off_center() {
        let ctx = fig2(21);
        let centered = dark_norm(1.0, &ctx).unwrap();
        let expected = 0.05f64.powi(2) * PI * PI / (ctx.d * ctx.d);
        assert_relative_eq!(centered, expected, max_relative = 1e-14);
        assert!(dark_norm(1.025, &ctx).unwrap() > centered);
    }

    #[test]
    fn triangle_special_points() {
        let ctx = fig2(20);
        let d = ctx.d;
        assert_relative_eq!(triangle_closed(0.0, d), 1.0);
        assert_relative_eq!(triangle_closed(2.0 * PI / d, d), -1.0, epsilon = 1e-14);
        assert!(triangle_closed(PI / d, d).abs() < 1e-14);
        let trunc = 4.0 / (PI * PI * ctx.series_terms as f64);
        assert!((triangle_series(0.0, &ctx) - 1.0).abs() <= trunc);
        assert!((triangle_series(2.0 * PI / d, &ctx) + 1.0).abs() <= trunc);
    }

    #[test]
    fn square_special_points() {
        let ctx = fig2(20);
        let d = ctx.d;
        assert_eq!(square_closed(0.0, d), 0.0);
        assert_relative_eq!(square_closed(PI / d, d), PI / 4.0);
        assert_relative_eq!(square_closed(3.0 * PI / d, d), -PI / 4.0);
        assert!(square_series(0.0, &ctx).abs() < 1e-15);
        assert!((square_series(PI / d, &ctx) - PI / 4.0).abs() < 1.0 / ctx.series_terms as f64);
    }

    #[test]
    fn survival_asym_normalized_at_zero() {
        let ctx = fig2(21);
        let v = survival_asym(&InitialCondition::single_spin(11), 0.0, &ctx, None).unwrap();
        assert_eq!(v, Complex::new(1.0, 0.0));
        assert!(survival_asym(&InitialCondition::SinglePhoton, 0.0, &ctx, None).is_err());
    }

    #[test]
    fn bell_coincidence_limit_is_continuous() {
        let ctx = fig2(20);
        for sign in [BellSign::Plus, BellSign::Minus] {
            for &t in &[0.0, 50.0, 400.0, 900.0] {
                let at = bell_survival_asym(t, &ctx, 1.0, 1.0, sign);
                let near = bell_survival_asym(t, &ctx, 1.0, 1.0 + 1e-9, sign);
                assert!((at - near).norm() < 1e-6, "t={t}");
            }
        }
        // with ε_A = ε_B the cosine branch is the single-spin triangle wave
        let t = 300.0;
        let v = bell_survival_asym(t, &ctx, 1.0, 1.0, BellSign::Plus);
        let cross = -(ctx.d * t / 2.0) * square_closed(t, ctx.d) * 8.0 / (PI * PI);
        let expected = Complex::from_polar(1.0, -t) * (triangle_closed(t, ctx.d) + cross);
        assert!((v - expected).norm() < 1e-12);
    }

    #[test]
    fn bell_photon_cancels_for_minus() {
        let ctx = fig2(20);
        for &t in &[0.0, 10.0, 333.0] {
            assert_eq!(bell_photon_asym(t, &ctx, 1.0, 1.0, BellSign::Minus), Complex::new(0.0, 0.0));
            let plus = bell_photon_asym(t, &ctx, 1.0, 1.0, BellSign::Plus);
            let single = spin_photon_asym(t, &ctx, 1.0);
            // coherent doubling, 2√2/π² vs 4/π²: ratio √2
            assert!((plus - single * 2f64.sqrt()).norm() < 1e-14);
        }
    }

    #[test]
    fn bright_roots_in_degenerate_limit() {
        let l = 20;
        let g = 0.05;
        let eps = build_epsilons(&DisorderSpec::equally_spaced(1.0, 1e-6), l).unwrap();
        let ctx = AsymptoticContext::from_params(&ModelParams::new(1.0, g, eps).unwrap()).unwrap();
        let roots = bright_roots(&ctx, 1e-14).unwrap();
        let collective = g * (l as f64).sqrt();
        assert!((roots.low.lambda - (1.0 - collective)).abs() < 1e-3 * collective);
        assert!((roots.high.lambda - (1.0 + collective)).abs() < 1e-3 * collective);
        assert!(roots.low.valid && roots.high.valid);
    }

    #[test]
    fn reduce_angle_range() {
        for &x in &[-100.0, -PI, 0.0, 3.0, 7.0, 1e4] {
            let r = reduce_angle(x);
            assert!((-PI..=PI).contains(&r));
            assert!(((x - r) / (2.0 * PI)).fract().abs() < 1e-9 || ((x - r) / (2.0 * PI)).fract().abs() > 1.0 - 1e-9);
        }
    }
}
