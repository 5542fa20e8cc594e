//! Independent dense route through the single-excitation sector.
//!
//! The `(L+1)×(L+1)` Hamiltonian block is assembled explicitly and
//! diagonalized by a general dense symmetric eigensolver that knows nothing
//! about its arrow shape. Results from here are only used to cross-check the
//! Bethe path.

use num_complex::Complex;

use crate::eigen::SectorState;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Real;

/// Dense real symmetric matrix of the Hamiltonian in the basis
/// `(photon, spin_1, …, spin_L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianBlock<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Real> HamiltonianBlock<T> {
    /// Arrow matrix: `H₀₀ = ω`, `H_jj = ε_j`, `H₀ⱼ = H_j₀ = g`.
    pub fn build(params: &ModelParams<T>) -> Self {
        let dim = params.sector_dim();
        let mut entries = vec![T::zero(); dim * dim];
        entries[0] = params.omega;
        for (j, &e) in params.epsilons.iter().enumerate() {
            let k = j + 1;
            entries[k * dim + k] = e;
            entries[k] = params.g;
            entries[k * dim] = params.g;
        }
        Self { dim, entries }
    }

    /// Wraps a row-major symmetric matrix.
    pub fn from_row_major(dim: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> T {
        self.entries.iter().map(|&x| x * x).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `H·v` for a real vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| {
                self.entries[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Dense eigensolver choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    /// Cyclic Jacobi rotations.
    #[default]
    Jacobi,
    /// Householder tridiagonalization followed by implicit QL iteration.
    TridiagonalQl,
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
///
/// Each eigenvector is signed so its first nonzero component (the photon
/// slot, whenever it is nonzero) is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    dim: usize,
    values: Vec<T>,
    /// Row-major `dim × dim`; column `k` is the eigenvector of `values[k]`.
    vectors: Vec<T>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Component `i` of eigenvector `k`.
    #[inline]
    pub fn vector_component(&self, i: usize, k: usize) -> T {
        self.vectors[i * self.dim + k]
    }

    pub fn vector(&self, k: usize) -> Vec<T> {
        (0..self.dim).map(|i| self.vector_component(i, k)).collect()
    }

    /// Photon weight `|Q₀ₖ|²` of eigenvector `k`.
    pub fn darkness(&self, k: usize) -> T {
        let p = self.vector_component(0, k);
        p * p
    }

    /// `max |QᵀQ - I|`
    pub fn orthonormality_defect(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for a in 0..n {
            for b in a..n {
                let dot: T = (0..n)
                    .map(|i| self.vector_component(i, a) * self.vector_component(i, b))
                    .sum();
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Diagonalizes a symmetric block with the default method.
///
/// For Jacobi, sweeps stop once the off-diagonal Frobenius norm is at most
/// `tol·‖H‖_F`.
pub fn diagonalize<T: Real>(block: &HamiltonianBlock<T>, tol: T) -> Result<EigenDecomposition<T>> {
    diagonalize_with(block, tol, EigenMethod::Jacobi)
}

pub fn diagonalize_with<T: Real>(
    block: &HamiltonianBlock<T>,
    tol: T,
    method: EigenMethod,
) -> Result<EigenDecomposition<T>> {
    let (values, vectors) = match method {
        EigenMethod::Jacobi => jacobi(block, tol)?,
        EigenMethod::TridiagonalQl => tridiagonal_ql(block)?,
    };
    Ok(sorted_and_signed(block.dim, values, vectors))
}

const MAX_SWEEPS: usize = 100;

fn jacobi<T: Real>(block: &HamiltonianBlock<T>, tol: T) -> Result<(Vec<T>, Vec<T>)> {
    let n = block.dim;
    let mut a = block.entries.clone();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let threshold = tol * block.frobenius_sq().sqrt();
    let off_norm = |a: &[T]| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                s = s + a[i * n + j] * a[i * n + j];
            }
        }
        (s + s).sqrt()
    };

    let mut off = off_norm(&a);
    let mut sweeps = 0;
    while off > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenConvergence {
                sweeps,
                off: off.as_f64(),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (apq + apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let t = if theta == T::zero() { T::one() } else { t };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        off = off_norm(&a);
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok((values, v))
}

/// Householder reduction to tridiagonal form and implicit QL iteration with
/// accumulated transformations (the classic `tred2`/`tql2` pair).
fn tridiagonal_ql<T: Real>(block: &HamiltonianBlock<T>) -> Result<(Vec<T>, Vec<T>)> {
    let n = block.dim;
    let mut v = block.entries.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let idx = |i: usize, j: usize| i * n + j;
    let zero = T::zero();

    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = zero;
        let mut h = zero;
        for dk in &d[..i] {
            scale = scale + dk.abs();
        }
        if scale == zero {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = zero;
                v[idx(j, i)] = zero;
            }
        } else {
            for dk in &mut d[..i] {
                *dk = *dk / scale;
                h = h + *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > zero {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = zero;
            }
            for j in 0..i {
                f = d[j];
                v[idx(j, i)] = f;
                g = e[j] + v[idx(j, j)] * f;
                for k in (j + 1)..i {
                    g = g + v[idx(k, j)] * d[k];
                    e[k] = e[k] + v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = zero;
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[idx(k, j)] = v[idx(k, j)] - (f * e[k] + g * d[k]);
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = zero;
            }
        }
        d[i] = h;
    }
    for i in 0..n.saturating_sub(1) {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = T::one();
        let h = d[i + 1];
        if h != zero {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = zero;
                for k in 0..=i {
                    g = g + v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] = v[idx(k, j)] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = zero;
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = zero;
    }
    v[idx(n - 1, n - 1)] = T::one();
    e[0] = zero;

    // implicit QL
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = zero;
    let mut f = zero;
    let mut tst1 = zero;
    let eps = T::epsilon();
    const MAX_QL_ITER: usize = 60;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITER {
                    return Err(Error::EigenConvergence {
                        sweeps: iter,
                        off: e[l].as_f64(),
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (e[l] + e[l]);
                let mut r = p.hypot(T::one());
                if p < zero {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = zero;
                let mut s2 = zero;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[idx(k, i + 1)];
                        v[idx(k, i + 1)] = s * v[idx(k, i)] + c * h;
                        v[idx(k, i)] = c * v[idx(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = zero;
    }
    Ok((d, v))
}

fn sorted_and_signed<T: Real>(n: usize, values: Vec<T>, vectors: Vec<T>) -> EigenDecomposition<T> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite eigenvalues"));
    let mut sorted = vec![T::zero(); n * n];
    for (new_k, &old_k) in order.iter().enumerate() {
        let pivot = (0..n)
            .map(|i| vectors[i * n + old_k])
            .find(|&x| x != T::zero())
            .unwrap_or(T::one());
        let sign = if pivot < T::zero() { -T::one() } else { T::one() };
        for i in 0..n {
            sorted[i * n + new_k] = sign * vectors[i * n + old_k];
        }
    }
    EigenDecomposition {
        dim: n,
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: sorted,
    }
}

/// `U(t)ψ = Q e^{-iΛt} Qᵀ ψ`
pub fn propagate<T: Real>(
    eig: &EigenDecomposition<T>,
    state: &SectorState<T>,
    t: T,
) -> Result<SectorState<T>> {
    let n = eig.dim;
    if state.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: state.dim(),
        });
    }
    let psi = state.to_components();
    let zero = Complex::new(T::zero(), T::zero());
    let coeffs: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let c = (0..n).fold(zero, |acc, i| acc + psi[i] * eig.vector_component(i, k));
            c * Complex::from_polar(T::one(), -eig.values[k] * t)
        })
        .collect();
    let out = (0..n)
        .map(|i| {
            coeffs
                .iter()
                .enumerate()
                .fold(zero, |acc, (k, &c)| acc + c * eig.vector_component(i, k))
        })
        .collect();
    Ok(SectorState::from_components(out))
}
