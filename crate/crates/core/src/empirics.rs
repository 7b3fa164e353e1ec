//! Empirical distributions, histograms, KS distances and the selections and
//! rescalings that turn spectral records into samples of a limit law.
//!
//! Intervals are half-open, `[lo, hi)`, for both histogram bins and annuli.

use rand::Rng;

use crate::ensembles::sample_haar_unit_vector;
use crate::error::{Error, Result};
use crate::spectra::SpectralRecord;
use crate::specfun::integrate;
use crate::{Complex, Real};

/// Sorted sample with a right-continuous ECDF.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDistribution<T> {
    sorted: Vec<T>,
}

impl<T: Real> EmpiricalDistribution<T> {
    pub fn new(mut samples: Vec<T>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("empirical distribution needs at least one sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::domain("empirical distribution got a NaN sample"));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(EmpiricalDistribution { sorted: samples })
    }

    pub fn count(&self) -> usize {
        self.sorted.len()
    }

    pub fn samples(&self) -> &[T] {
        &self.sorted
    }

    /// `#{x_i ≤ x} / M`.
    pub fn ecdf(&self, x: T) -> T {
        let k = self.sorted.partition_point(|&v| v <= x);
        T::from_usize_lossy(k) / T::from_usize_lossy(self.count())
    }

    pub fn mean(&self) -> T {
        self.sorted.iter().copied().sum::<T>() / T::from_usize_lossy(self.count())
    }

    /// Merges two sorted runs; the result does not depend on argument order.
    pub fn merge(&self, other: &Self) -> Self {
        let (a, b) = (&self.sorted, &other.sorted);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        EmpiricalDistribution { sorted: out }
    }

    /// Start and end (exclusive) index of each run of equal values.
    fn tie_groups(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.sorted.len();
        let mut i = 0;
        std::iter::from_fn(move || {
            if i >= n {
                return None;
            }
            let start = i;
            let x = self.sorted[i];
            while i < n && self.sorted[i] == x {
                i += 1;
            }
            Some((start, i))
        })
    }
}

fn just_below<T: Real>(x: T) -> T {
    let step = (x.abs() * T::epsilon()).max(T::min_positive_value());
    x - step
}

/// `sup_x |F_emp(x) − F(x)|`, checking both sides of every sample point.
/// The left side compares `F_emp(x⁻)` with `F` just below `x`, so a point
/// mass sitting exactly on a jump of `F` contributes zero.
pub fn ks_distance<T: Real>(emp: &EmpiricalDistribution<T>, cdf: impl Fn(T) -> T) -> T {
    let m = T::from_usize_lossy(emp.count());
    let mut d = T::zero();
    for (start, end) in emp.tie_groups() {
        let x = emp.sorted[start];
        let above = (T::from_usize_lossy(end) / m - cdf(x)).abs();
        let below = (T::from_usize_lossy(start) / m - cdf(just_below(x))).abs();
        d = d.max(above).max(below);
    }
    d.min(T::one())
}

/// KS distance against a continuous CDF already evaluated at each sorted
/// sample (`cdf_values[i] = F(samples()[i])`).
pub fn ks_distance_values<T: Real>(emp: &EmpiricalDistribution<T>, cdf_values: &[T]) -> Result<T> {
    if cdf_values.len() != emp.count() {
        return Err(Error::domain(format!(
            "need one CDF value per sample ({} != {})",
            cdf_values.len(),
            emp.count()
        )));
    }
    let m = T::from_usize_lossy(emp.count());
    let mut d = T::zero();
    for (start, end) in emp.tie_groups() {
        let f = cdf_values[start];
        d = d
            .max((T::from_usize_lossy(end) / m - f).abs())
            .max((T::from_usize_lossy(start) / m - f).abs());
    }
    Ok(d.min(T::one()))
}

/// Density-normalized histogram.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram<T> {
    pub edges: Vec<T>,
    pub counts: Vec<u64>,
    pub densities: Vec<T>,
    /// Number of samples that landed in a bin.
    pub total_weight: T,
    pub out_of_range: u64,
}

pub fn histogram<T: Real>(samples: &[T], edges: &[T]) -> Result<Histogram<T>> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("histogram edges must be strictly increasing, at least two"));
    }
    let bins = edges.len() - 1;
    let mut counts = vec![0u64; bins];
    let mut out_of_range = 0u64;
    let (lo, hi) = (edges[0], edges[bins]);
    for &x in samples {
        if x >= lo && x < hi {
            let b = edges.partition_point(|&e| e <= x) - 1;
            counts[b] += 1;
        } else {
            out_of_range += 1;
        }
    }
    let inside: u64 = counts.iter().sum();
    if inside == 0 {
        return Err(Error::domain("no samples fall inside the histogram range"));
    }
    let total = T::from_u64(inside).unwrap();
    let densities = counts
        .iter()
        .zip(edges.windows(2))
        .map(|(&c, w)| T::from_u64(c).unwrap() / (total * (w[1] - w[0])))
        .collect();
    Ok(Histogram {
        edges: edges.to_vec(),
        counts,
        densities,
        total_weight: total,
        out_of_range,
    })
}

/// `count + 1` equally spaced edges over `[lo, hi]`.
pub fn uniform_edges<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    let step = (hi - lo) / T::from_usize_lossy(count);
    (0..=count)
        .map(|k| if k == count { hi } else { lo + step * T::from_usize_lossy(k) })
        .collect()
}

/// Records with `lo ≤ |z| < hi`. All are kept, flags included;
/// `defective` counts the ones statistics must skip.
#[derive(Clone, Debug, PartialEq)]
pub struct Annulus<T> {
    pub lo: T,
    pub hi: T,
    pub records: Vec<SpectralRecord<T>>,
    pub defective: usize,
}

impl<T: Real> Annulus<T> {
    /// Midpoint radius `r̄`.
    pub fn mid(&self) -> T {
        (self.lo + self.hi) * T::lit(0.5)
    }

    pub fn usable(&self) -> impl Iterator<Item = &SpectralRecord<T>> {
        self.records.iter().filter(|r| !r.defective)
    }

    pub fn usable_t(&self) -> Vec<T> {
        self.usable().filter_map(|r| r.t).collect()
    }
}

pub fn annulus_filter<T: Real>(records: &[SpectralRecord<T>], lo: T, hi: T) -> Result<Annulus<T>> {
    if !(lo >= T::zero() && lo < hi) {
        return Err(Error::domain(format!("annulus needs 0 <= lo < hi, got [{lo}, {hi})")));
    }
    let records: Vec<_> = records
        .iter()
        .filter(|r| {
            let rad = r.radius();
            rad >= lo && rad < hi
        })
        .copied()
        .collect();
    let defective = records.iter().filter(|r| r.defective).count();
    Ok(Annulus {
        lo,
        hi,
        records,
        defective,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgePoint<T> {
    pub s: T,
    pub sigma: T,
}

/// Rescaled values plus the number of flagged records skipped.
#[derive(Clone, Debug, PartialEq)]
pub struct Rescaled<V> {
    pub values: Vec<V>,
    pub skipped: usize,
}

/// `s = √N(|z|²/2 − 1)`, `σ = t/√N` for every unflagged record.
pub fn edge_rescale<T: Real>(n: usize, records: &[SpectralRecord<T>]) -> Rescaled<EdgePoint<T>> {
    let sn = T::from_usize_lossy(n).sqrt();
    let mut skipped = 0;
    let values = records
        .iter()
        .filter_map(|r| match (r.defective, r.t) {
            (false, Some(t)) => Some(EdgePoint {
                s: sn * (r.z.norm_sqr() * T::lit(0.5) - T::one()),
                sigma: t / sn,
            }),
            _ => {
                skipped += 1;
                None
            }
        })
        .collect();
    Rescaled { values, skipped }
}

/// Inverse of [`edge_rescale`]: `(|z|, t)`.
pub fn edge_unscale<T: Real>(n: usize, p: EdgePoint<T>) -> (T, T) {
    let sn = T::from_usize_lossy(n).sqrt();
    let r = (T::lit(2.0) * (T::one() + p.s / sn)).sqrt();
    (r, p.sigma * sn)
}

/// `τ = t/N` for every unflagged record.
pub fn bulk_rescale<T: Real>(n: usize, records: &[SpectralRecord<T>]) -> Rescaled<T> {
    let nf = T::from_usize_lossy(n);
    let mut skipped = 0;
    let values = records
        .iter()
        .filter_map(|r| match (r.defective, r.t) {
            (false, Some(t)) => Some(t / nf),
            _ => {
                skipped += 1;
                None
            }
        })
        .collect();
    Rescaled { values, skipped }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaarCheck<T> {
    /// Monte-Carlo mean of `f(|vᵀv|²)`.
    pub mc: T,
    /// `(N−1) ∫₀¹ p^{N−2} f(1 − p²) dp`.
    pub quad: T,
    pub z_score: T,
}

/// Compares the Haar average of `f(|vᵀv|²)` with its one-dimensional
/// integral representation.
pub fn haar_lemma_check<T: Real, R: Rng + ?Sized>(
    n: usize,
    f: impl Fn(T) -> T,
    samples: usize,
    rng: &mut R,
) -> Result<HaarCheck<T>> {
    if n < 2 {
        return Err(Error::domain(format!("vector length must be >= 2, got {n}")));
    }
    if samples < 1000 {
        return Err(Error::domain(format!("need at least 1000 samples, got {samples}")));
    }
    let mut sum = T::zero();
    let mut sum_sq = T::zero();
    for _ in 0..samples {
        let v = sample_haar_unit_vector::<T, R>(n, rng)?;
        let vtv: Complex<T> = v.iter().map(|z| *z * *z).sum();
        let y = f(vtv.norm_sqr());
        sum = sum + y;
        sum_sq = sum_sq + y * y;
    }
    let m = T::from_usize_lossy(samples);
    let mc = sum / m;
    let var = ((sum_sq - m * mc * mc) / (m - T::one())).max(T::zero());
    let nf = T::from_usize_lossy(n);
    let quad = integrate(
        |p: T| {
            let w = if n == 2 { T::one() } else { p.powf(nf - T::lit(2.0)) };
            (nf - T::one()) * w * f(T::one() - p * p)
        },
        T::zero(),
        T::one(),
        T::lit(1e-12),
        T::lit(1e-14),
    )?
    .value;
    let se = (var / m).sqrt();
    let diff = mc - quad;
    let z_score = if se > T::zero() {
        diff / se
    } else if diff.abs() <= T::lit(1e-12) * quad.abs().max(T::one()) {
        T::zero()
    } else {
        T::infinity() * diff.signum()
    };
    Ok(HaarCheck { mc, quad, z_score })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ecdf_is_right_continuous() {
        let e = EmpiricalDistribution::new(vec![1.0, 2.0, 2.0, 3.0]).unwrap();
        assert_eq!(e.ecdf(0.5), 0.0);
        assert_eq!(e.ecdf(2.0), 0.75);
        assert_eq!(e.ecdf(1.999), 0.25);
        assert_eq!(e.ecdf(3.0), 1.0);
    }

    #[test]
    fn empty_and_nan_rejected() {
        assert!(EmpiricalDistribution::<f64>::new(vec![]).is_err());
        assert!(EmpiricalDistribution::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn point_mass_on_step() {
        let e = EmpiricalDistribution::new(vec![0.5; 10]).unwrap();
        let d = ks_distance(&e, |x: f64| if x >= 0.5 { 1.0 } else { 0.0 });
        assert_eq!(d, 0.0);
    }

    #[test]
    fn histogram_bookkeeping() {
        let h = histogram(&[0.1, 2.0], &[0.0, 1.0]).unwrap();
        assert_eq!(h.counts, vec![1]);
        assert_eq!(h.out_of_range, 1);
        assert_eq!(h.densities, vec![1.0]);
        assert!(histogram(&[5.0], &[0.0, 1.0]).is_err());
        assert!(histogram(&[0.5], &[1.0, 0.0]).is_err());
        let h = histogram(&[1.0], &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(h.counts, vec![0, 1]);
    }

    #[test]
    fn edge_rescale_arithmetic() {
        let rec = |r: f64, t: Option<f64>, defective| SpectralRecord {
            z: Complex::new(r, 0.0),
            t,
            residual: 0.0,
            matrix_index: 0,
            defective,
        };
        let out = edge_rescale(100, &[rec(2.2_f64.sqrt(), Some(30.0), false), rec(1.0, None, true)]);
        assert_eq!(out.skipped, 1);
        assert!((out.values[0].s - 1.0).abs() < 1e-12);
        assert!((out.values[0].sigma - 3.0).abs() < 1e-15);
        let b = bulk_rescale(50, &[rec(0.3, Some(25.0), false), rec(0.3, Some(1.0), true)]);
        assert_eq!(b.values, vec![0.5]);
        assert_eq!(b.skipped, 1);
    }

    #[test]
    fn annulus_is_half_open() {
        let rec = |r: f64, defective| SpectralRecord {
            z: Complex::new(0.0, r),
            t: Some(1.0),
            residual: 0.0,
            matrix_index: 0,
            defective,
        };
        let recs = [rec(0.5, false), rec(1.0, true), rec(0.7, true), rec(0.2, false)];
        let a = annulus_filter(&recs, 0.5, 1.0).unwrap();
        assert_eq!(a.records.len(), 2);
        assert_eq!(a.defective, 1);
        assert_eq!(a.usable_t(), vec![1.0]);
        assert!(annulus_filter(&recs, 1.0, 1.0).is_err());
        let empty = annulus_filter(&recs, 3.0, 4.0).unwrap();
        assert!(empty.records.is_empty() && empty.defective == 0);
    }
}
