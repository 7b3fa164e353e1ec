//! Random-matrix ensembles and Haar unit vectors.
//!
//! Every random draw comes from a [`Stream`], a ChaCha12 generator keyed by a
//! master seed with the stream counter set to a caller-chosen id. Matrix `k`
//! of a run always uses stream `k`, so output never depends on how matrices
//! are spread across workers.
//!
//! Normal deviates use the `rand_distr` ziggurat on `f64`, then convert to
//! the working scalar. The ziggurat touches `ln` only in its tail (about one
//! draw in 2^20), which keeps the byte-for-byte stream stable across
//! platforms in practice.
//!
//! Normalizations put the spectral edge at `|z| = √2` for every kind:
//!
//! | kind | entries |
//! |---|---|
//! | `AiGaussian` | `J = X + iY`, `X`, `Y` independent GOE with `⟨X_nm X_kl⟩ = (δ_nk δ_ml + δ_nl δ_mk)/N` |
//! | `AiBernoulli` | `Re J_ij`, `Im J_ij` independently `±1/√N` for `i ≤ j`, mirrored; the diagonal uses the same law |
//! | `GinibreComplex` | i.i.d. complex Gaussian, `E|J_ij|² = 2/N` |
//! | `GinibreReal` | i.i.d. real Gaussian, `E J_ij² = 2/N` |

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::{Complex, Real};

pub type Stream = ChaCha12Rng;

/// Independent, reproducible substream `id` of `master_seed`.
pub fn derive_stream(master_seed: u64, id: u64) -> Stream {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(id);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnsembleKind {
    AiGaussian,
    AiBernoulli,
    GinibreComplex,
    GinibreReal,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 4] = [
        EnsembleKind::AiGaussian,
        EnsembleKind::AiBernoulli,
        EnsembleKind::GinibreComplex,
        EnsembleKind::GinibreReal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::AiGaussian => "ai-gaussian",
            EnsembleKind::AiBernoulli => "ai-bernoulli",
            EnsembleKind::GinibreComplex => "ginibre-complex",
            EnsembleKind::GinibreReal => "ginibre-real",
        }
    }

    /// Complex symmetric (`J = Jᵀ`).
    pub fn is_symmetric(self) -> bool {
        matches!(self, EnsembleKind::AiGaussian | EnsembleKind::AiBernoulli)
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnsembleKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown ensemble '{s}' (expected ai-gaussian, ai-bernoulli, ginibre-real or ginibre-complex)"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub master_seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, master_seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("matrix size must be >= 2, got {n}")));
        }
        Ok(EnsembleSpec {
            kind,
            n,
            master_seed,
        })
    }

    /// Matrix number `index` of this run, drawn from stream `index`.
    pub fn matrix<T: Real>(&self, index: u64) -> ComplexMatrix<T> {
        sample(self, &mut derive_stream(self.master_seed, index))
    }
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> RealMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        RealMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    /// Builds from rows; every row must have the same length as the list.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("matrix rows must form a non-empty square"));
        }
        Ok(ComplexMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Bitwise `J = Jᵀ`.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `J x`.
    pub fn mul_vec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| *a * *b).sum())
            .collect()
    }

    /// `xᵀ J` (no conjugation).
    pub fn vec_mul(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.n];
        for (i, xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + *xi * *a;
            }
        }
        out
    }

    /// `J²` trace, `Σ_ij J_ij J_ji`.
    pub fn trace_of_square(&self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.n {
            for j in 0..self.n {
                acc = acc + self.get(i, j) * self.get(j, i);
            }
        }
        acc
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Real symmetric GOE matrix: off-diagonal variance `1/N`, diagonal `2/N`.
/// Draws the upper triangle row by row.
pub fn sample_goe<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix<T> {
    let off = (n as f64).recip().sqrt();
    let diag = (2.0 / n as f64).sqrt();
    let mut m = RealMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let sd = if i == j { diag } else { off };
            let v = T::lit(normal(rng) * sd);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

/// One matrix of the given kind; `spec.master_seed` is ignored here, the
/// stream already encodes it.
pub fn sample<T: Real, R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> ComplexMatrix<T> {
    let n = spec.n;
    let mut m = ComplexMatrix::zeros(n);
    match spec.kind {
        EnsembleKind::AiGaussian => {
            let x = sample_goe::<T, R>(n, rng);
            let y = sample_goe::<T, R>(n, rng);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, Complex::new(x.get(i, j), y.get(i, j)));
                }
            }
        }
        EnsembleKind::AiBernoulli => {
            let a = T::lit((n as f64).recip().sqrt());
            let sign = |b: bool| if b { a } else { -a };
            for i in 0..n {
                for j in i..n {
                    let re = sign(rng.random::<bool>());
                    let im = sign(rng.random::<bool>());
                    let z = Complex::new(re, im);
                    m.set(i, j, z);
                    m.set(j, i, z);
                }
            }
        }
        EnsembleKind::GinibreComplex => {
            let sd = (n as f64).recip().sqrt();
            for i in 0..n {
                for j in 0..n {
                    let re = T::lit(normal(rng) * sd);
                    let im = T::lit(normal(rng) * sd);
                    m.set(i, j, Complex::new(re, im));
                }
            }
        }
        EnsembleKind::GinibreReal => {
            let sd = (2.0 / n as f64).sqrt();
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, Complex::new(T::lit(normal(rng) * sd), T::zero()));
                }
            }
        }
    }
    m
}

/// Uniform point on the complex unit sphere in `C^n`.
pub fn sample_haar_unit_vector<T: Real, R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<Vec<Complex<T>>> {
    if n < 2 {
        return Err(Error::domain(format!("vector length must be >= 2, got {n}")));
    }
    let raw: Vec<(f64, f64)> = (0..n).map(|_| (normal(rng), normal(rng))).collect();
    let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
    Ok(raw
        .into_iter()
        .map(|(a, b)| Complex::new(T::lit(a / norm), T::lit(b / norm)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in EnsembleKind::ALL {
            assert_eq!(k.name().parse::<EnsembleKind>().unwrap(), k);
        }
        assert!("gue".parse::<EnsembleKind>().is_err());
    }

    #[test]
    fn spec_rejects_small_n() {
        assert!(EnsembleSpec::new(EnsembleKind::AiGaussian, 1, 0).is_err());
    }

    #[test]
    fn ai_kinds_are_symmetric() {
        for kind in [EnsembleKind::AiGaussian, EnsembleKind::AiBernoulli] {
            let spec = EnsembleSpec::new(kind, 17, 5).unwrap();
            assert!(spec.matrix::<f64>(3).is_symmetric());
        }
        let g = EnsembleSpec::new(EnsembleKind::GinibreComplex, 6, 5).unwrap();
        assert!(!g.matrix::<f64>(0).is_symmetric());
    }

    #[test]
    fn real_ginibre_has_zero_imaginary_part() {
        let spec = EnsembleSpec::new(EnsembleKind::GinibreReal, 8, 1).unwrap();
        assert!(spec.matrix::<f64>(0).as_slice().iter().all(|z| z.im == 0.0));
    }
}
