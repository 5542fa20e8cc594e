//! Post-processing of sampled traces: revival peaks, envelopes, fits.

use crate::scalar::Real;

/// A sampled local maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak<T> {
    pub index: usize,
    pub time: T,
    pub height: T,
}

/// Highest sample with `lo ≤ t ≤ hi`. `None` if the window holds no samples
/// or the maximum sits on the window boundary while the signal keeps rising
/// past it (the true peak lies outside). A maximum on the first or last
/// sample counts as a peak only when the window stops there too.
pub fn peak_in_window<T: Real>(times: &[T], signal: &[T], lo: T, hi: T) -> Option<Peak<T>> {
    let mut best: Option<Peak<T>> = None;
    for (index, (&time, &height)) in times.iter().zip(signal).enumerate() {
        if time < lo || time > hi {
            continue;
        }
        if best.is_none_or(|b| height > b.height) {
            best = Some(Peak {
                index,
                time,
                height,
            });
        }
    }
    let peak = best?;
    let left_ok = match peak.index {
        0 => lo >= times[0],
        i => signal[i - 1] <= peak.height,
    };
    let right_ok = match signal.len() - peak.index {
        1 => hi <= times[peak.index],
        _ => signal[peak.index + 1] <= peak.height,
    };
    (left_ok && right_ok).then_some(peak)
}

/// Running maximum over `±half_width` samples.
pub fn upper_envelope<T: Real>(signal: &[T], half_width: usize) -> Vec<T> {
    let n = signal.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half_width);
            let hi = (i + half_width + 1).min(n);
            signal[lo..hi].iter().copied().fold(T::neg_infinity(), T::max)
        })
        .collect()
}

/// Median of the samples with `lo ≤ t ≤ hi`.
pub fn median_in_window<T: Real>(times: &[T], signal: &[T], lo: T, hi: T) -> Option<T> {
    let mut v: Vec<T> = times
        .iter()
        .zip(signal)
        .filter(|(&t, _)| t >= lo && t <= hi)
        .map(|(_, &s)| s)
        .collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / T::lit(2.0)
    })
}

/// Minimum of the samples with `lo ≤ t ≤ hi`.
pub fn min_in_window<T: Real>(times: &[T], signal: &[T], lo: T, hi: T) -> Option<T> {
    times
        .iter()
        .zip(signal)
        .filter(|(&t, _)| t >= lo && t <= hi)
        .map(|(_, &s)| s)
        .reduce(T::min)
}

/// First revival of a decaying signal with nominal period `nominal`:
/// the peak inside `[0.5, 1.5]·nominal`.
pub fn first_revival<T: Real>(times: &[T], signal: &[T], nominal: T) -> Option<Peak<T>> {
    peak_in_window(times, signal, T::lit(0.5) * nominal, T::lit(1.5) * nominal)
}

/// Revival seen through an envelope that hides fast oscillations of period
/// `fast_period`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeRevival<T> {
    pub peak: Peak<T>,
    /// Median envelope level over the quiet interval before the window.
    pub baseline: T,
}

impl<T: Real> EnvelopeRevival<T> {
    pub fn prominence(&self) -> T {
        self.peak.height - self.baseline
    }
}

/// Locates a revival of `signal` inside `window` after smoothing away
/// oscillations of period `fast_period` with an upper envelope. The baseline
/// is the median envelope over `baseline_window`.
pub fn envelope_revival<T: Real>(
    times: &[T],
    signal: &[T],
    fast_period: T,
    window: (T, T),
    baseline_window: (T, T),
) -> Option<EnvelopeRevival<T>> {
    if times.len() < 2 {
        return None;
    }
    let dt = times[1] - times[0];
    let half = (fast_period / dt / T::lit(2.0)).ceil().to_usize().unwrap_or(0).max(1);
    let env = upper_envelope(signal, half);
    let peak = peak_in_window(times, &env, window.0, window.1)?;
    let baseline = median_in_window(times, &env, baseline_window.0, baseline_window.1)?;
    Some(EnvelopeRevival { peak, baseline })
}

/// Least-squares line `y = slope·x + intercept` with coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Root-mean-square of `a - b`.
pub fn rms_diff<T: Real>(a: &[T], b: &[T]) -> T {
    assert_eq!(a.len(), b.len());
    let n = T::from_count(a.len());
    (a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum::<T>() / n).sqrt()
}
