//! Dense complex eigendecomposition and per-eigenvalue overlap factors.
//!
//! [`eig_right`] reduces `J` to Hessenberg form with Householder
//! reflectors, runs a single-shift complex QR iteration to a Schur form
//! `J = Z T Zᴴ`, and recovers right eigenvectors by back-substitution on
//! `T`. Internally all arrays are column-major.

use crate::ensembles::ComplexMatrix;
use crate::error::{Error, Result};
use crate::{Complex, Real};

/// `|vᵀv|²` below this is reported as an overflow of `t`.
pub const OVERFLOW_FLOOR: f64 = 1e-120;
/// Records with `‖Jv − zv‖/‖J‖_F` above this are flagged defective.
pub const RESIDUAL_THRESHOLD: f64 = 1e-10;

/// Defective when `t` overflowed, the residual is too large, or
/// `|vᵀv|² < ε`: past that point `vᵀv` is rounding noise and the matrix is
/// numerically a Jordan block at `z`.
pub fn is_defective<T: Real>(t: Option<T>, residual: T) -> bool {
    match t {
        None => true,
        Some(t) => !(residual <= T::lit(RESIDUAL_THRESHOLD)) || (T::one() + t).recip() < T::epsilon(),
    }
}

const EXCEPTIONAL_EVERY: usize = 10;
const EXCEPTIONAL_FACTOR: f64 = 0.75;

#[derive(Clone, Debug)]
pub struct EigenSystem<T> {
    pub eigenvalues: Vec<Complex<T>>,
    /// Unit 2-norm right eigenvectors, `right_vectors[k]` pairs with `eigenvalues[k]`.
    pub right_vectors: Vec<Vec<Complex<T>>>,
}

/// Nonorthogonality `t = 1/|vᵀv|² − 1`, or an overflow marker.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Overlap<T> {
    Finite(T),
    Overflow,
}

impl<T: Real> Overlap<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Overlap::Finite(t) => Some(t),
            Overlap::Overflow => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralRecord<T> {
    pub z: Complex<T>,
    /// `None` when `|vᵀv|²` fell below [`OVERFLOW_FLOOR`].
    pub t: Option<T>,
    pub residual: T,
    pub matrix_index: u64,
    pub defective: bool,
}

impl<T: Real> SpectralRecord<T> {
    pub fn radius(&self) -> T {
        self.z.norm()
    }
}

#[inline]
fn cabs1<T: Real>(z: Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

#[inline]
fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Column-major square workspace.
struct Dense<T> {
    n: usize,
    a: Vec<Complex<T>>,
}

impl<T: Real> Dense<T> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.a[i + j * self.n]
    }
    #[inline]
    fn put(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.a[i + j * self.n] = v;
    }
    #[inline]
    fn col(&self, j: usize) -> &[Complex<T>] {
        &self.a[j * self.n..(j + 1) * self.n]
    }
    fn two_cols(&mut self, j: usize, k: usize) -> (&mut [Complex<T>], &mut [Complex<T>]) {
        debug_assert!(j < k);
        let n = self.n;
        let (lo, hi) = self.a.split_at_mut(k * n);
        (&mut lo[j * n..(j + 1) * n], &mut hi[..n])
    }
}

/// Householder reflector `I − τ v vᴴ` with `v₀ = 1` mapping `(α, x)` onto
/// `(β, 0)` with real `β` under `Hᴴ`. Scales `x` into the tail of `v` in place.
fn householder<T: Real>(alpha: Complex<T>, x: &mut [Complex<T>]) -> (Complex<T>, T) {
    let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if xnorm == T::zero() && alpha.im == T::zero() {
        return (czero(), alpha.re);
    }
    let mut beta = alpha.norm().hypot(xnorm);
    if alpha.re >= T::zero() {
        beta = -beta;
    }
    let tau = Complex::new((beta - alpha.re) / beta, -alpha.im / beta);
    let scale = (alpha - beta).inv();
    for z in x.iter_mut() {
        *z = *z * scale;
    }
    (tau, beta)
}

/// Reduces `h` to upper Hessenberg form in place and returns `Q` with
/// `J = Q H Qᴴ`.
fn hessenberg<T: Real>(h: &mut Dense<T>) -> Dense<T> {
    let n = h.n;
    let mut reflectors: Vec<(Vec<Complex<T>>, Complex<T>)> = Vec::with_capacity(n);
    let mut w = vec![czero::<T>(); n];
    for k in 0..n.saturating_sub(2) {
        let alpha = h.at(k + 1, k);
        let mut x: Vec<Complex<T>> = (k + 2..n).map(|i| h.at(i, k)).collect();
        let (tau, beta) = householder(alpha, &mut x);
        let mut v = Vec::with_capacity(n - k - 1);
        v.push(Complex::new(T::one(), T::zero()));
        v.extend_from_slice(&x);
        h.put(k + 1, k, Complex::new(beta, T::zero()));
        for i in k + 2..n {
            h.put(i, k, czero());
        }
        if tau != czero() {
            let ctau = tau.conj();
            // H ← (I − τ̄ v vᴴ) H on rows k+1.., columns k+1..
            for j in k + 1..n {
                let col = &mut h.a[j * n + k + 1..(j + 1) * n];
                let s: Complex<T> = col.iter().zip(&v).map(|(a, vi)| vi.conj() * *a).sum();
                let s = ctau * s;
                for (a, vi) in col.iter_mut().zip(&v) {
                    *a = *a - *vi * s;
                }
            }
            // H ← H (I − τ v vᴴ) on all rows, columns k+1..
            w.iter_mut().for_each(|z| *z = czero());
            for (jj, vj) in v.iter().enumerate() {
                let col = h.col(k + 1 + jj);
                for (wi, a) in w.iter_mut().zip(col) {
                    *wi = *wi + *a * *vj;
                }
            }
            for (jj, vj) in v.iter().enumerate() {
                let f = tau * vj.conj();
                let j = k + 1 + jj;
                let col = &mut h.a[j * n..(j + 1) * n];
                for (a, wi) in col.iter_mut().zip(&w) {
                    *a = *a - *wi * f;
                }
            }
        }
        reflectors.push((v, tau));
    }
    // Q = H₀ H₁ ⋯, accumulated backwards
    let mut q = Dense {
        n,
        a: vec![czero(); n * n],
    };
    for i in 0..n {
        q.put(i, i, Complex::new(T::one(), T::zero()));
    }
    for (k, (v, tau)) in reflectors.iter().enumerate().rev() {
        if *tau == czero() {
            continue;
        }
        for j in k + 1..n {
            let col = &mut q.a[j * n + k + 1..(j + 1) * n];
            let s: Complex<T> = col.iter().zip(v).map(|(a, vi)| vi.conj() * *a).sum();
            let s = *tau * s;
            for (a, vi) in col.iter_mut().zip(v) {
                *a = *a - *vi * s;
            }
        }
    }
    q
}

/// Complex Schur form by single-shift QR on a Hessenberg `h`, updating `z`.
fn schur<T: Real>(h: &mut Dense<T>, z: &mut Dense<T>, matrix_index: u64) -> Result<()> {
    let n = h.n;
    if n == 0 {
        return Ok(());
    }
    let ulp = T::epsilon();
    let safmin = T::min_positive_value();
    let smlnum = safmin * (T::from_usize_lossy(n) / ulp);
    let half = T::lit(0.5);
    let itmax = 30 * n.max(10);
    let mut kdefl = 0usize;

    let mut i = n - 1;
    loop {
        // active block is l..=i
        let mut l = 0usize;
        let mut converged = false;
        for _ in 0..=itmax {
            // small subdiagonal search
            let mut k = i;
            while k > l {
                let sub = h.at(k, k - 1);
                if cabs1(sub) <= smlnum {
                    break;
                }
                let mut tst = cabs1(h.at(k - 1, k - 1)) + cabs1(h.at(k, k));
                if tst == T::zero() {
                    if k >= 2 {
                        tst = tst + cabs1(h.at(k - 1, k - 2));
                    }
                    if k + 1 < n {
                        tst = tst + cabs1(h.at(k + 1, k));
                    }
                }
                if cabs1(sub) <= ulp * tst {
                    let ab = cabs1(sub).max(cabs1(h.at(k - 1, k)));
                    let ba = cabs1(sub).min(cabs1(h.at(k - 1, k)));
                    let d = h.at(k - 1, k - 1) - h.at(k, k);
                    let aa = cabs1(h.at(k, k)).max(cabs1(d));
                    let bb = cabs1(h.at(k, k)).min(cabs1(d));
                    let s = aa + ab;
                    if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                        break;
                    }
                }
                k -= 1;
            }
            l = k;
            if l > 0 {
                h.put(l, l - 1, czero());
            }
            if l >= i {
                converged = true;
                break;
            }
            kdefl += 1;

            let shift = if kdefl % (2 * EXCEPTIONAL_EVERY) == 0 {
                h.at(i, i) + Complex::new(T::lit(EXCEPTIONAL_FACTOR) * cabs1(h.at(i, i - 1)), T::zero())
            } else if kdefl % EXCEPTIONAL_EVERY == 0 {
                h.at(l, l) + Complex::new(T::lit(EXCEPTIONAL_FACTOR) * cabs1(h.at(l + 1, l)), T::zero())
            } else {
                // Wilkinson shift
                let mut t = h.at(i, i);
                let u = h.at(i - 1, i).sqrt() * h.at(i, i - 1).sqrt();
                let mut s = cabs1(u);
                if s != T::zero() {
                    let x = (h.at(i - 1, i - 1) - t) * half;
                    let sx = cabs1(x);
                    s = s.max(sx);
                    let xs = x / s;
                    let us = u / s;
                    let mut y = (xs * xs + us * us).sqrt() * s;
                    if sx > T::zero() {
                        let xn = x / sx;
                        if xn.re * y.re + xn.im * y.im < T::zero() {
                            y = -y;
                        }
                    }
                    t = t - u * (u / (x + y));
                }
                t
            };

            // look for two consecutive small subdiagonals
            let mut m = i - 1;
            let mut v0;
            let mut v1;
            loop {
                let h11 = h.at(m, m);
                let h22 = h.at(m + 1, m + 1);
                let h11s = h11 - shift;
                let h21 = h.at(m + 1, m);
                let s = cabs1(h11s) + cabs1(h21);
                v0 = h11s / s;
                v1 = h21 / s;
                if m == l {
                    break;
                }
                let h10 = h.at(m, m - 1);
                if cabs1(h10) * cabs1(v1) <= ulp * (cabs1(v0) * (cabs1(h11) + cabs1(h22))) {
                    break;
                }
                m -= 1;
            }

            // single-shift QR sweep from m to i
            for k in m..i {
                if k > m {
                    v0 = h.at(k, k - 1);
                    v1 = h.at(k + 1, k - 1);
                }
                let mut tail = [v1];
                let (tau, beta) = householder(v0, &mut tail);
                let v2 = tail[0];
                if k > m {
                    h.put(k, k - 1, Complex::new(beta, T::zero()));
                    h.put(k + 1, k - 1, czero());
                } else if m > l {
                    // the reflector also scales the small coupling entry; its
                    // fill-in below is negligible by the choice of m
                    let a = h.at(m, m - 1);
                    h.put(m, m - 1, a * (Complex::new(T::one(), T::zero()) - tau.conj()));
                }
                if tau == czero() {
                    continue;
                }
                let ctau = tau.conj();
                let cv2 = v2.conj();
                // rows k, k+1 from the left by (I − τ̄ v vᴴ)
                for j in k..n {
                    let a = h.at(k, j);
                    let b = h.at(k + 1, j);
                    let s = ctau * (a + cv2 * b);
                    h.put(k, j, a - s);
                    h.put(k + 1, j, b - s * v2);
                }
                // columns k, k+1 from the right by (I − τ v vᴴ)
                let top = (k + 2).min(i);
                {
                    let (ck, ck1) = h.two_cols(k, k + 1);
                    for r in 0..=top {
                        let s = tau * (ck[r] + v2 * ck1[r]);
                        ck[r] = ck[r] - s;
                        ck1[r] = ck1[r] - s * cv2;
                    }
                }
                {
                    let (zk, zk1) = z.two_cols(k, k + 1);
                    for (a, b) in zk.iter_mut().zip(zk1.iter_mut()) {
                        let s = tau * (*a + v2 * *b);
                        *a = *a - s;
                        *b = *b - s * cv2;
                    }
                }
            }
        }
        if !converged {
            return Err(Error::Eigensolver {
                matrix_index,
                reason: format!("QR iteration did not converge for eigenvalue {i}"),
            });
        }
        kdefl = 0;
        if l == 0 {
            break;
        }
        i = l - 1;
    }
    Ok(())
}

/// Right eigenvectors of upper triangular `t`, mapped back through `z`.
fn schur_vectors<T: Real>(t: &Dense<T>, z: &Dense<T>) -> Vec<Vec<Complex<T>>> {
    let n = t.n;
    let ulp = T::epsilon();
    let smlnum = T::min_positive_value() * (T::from_usize_lossy(n) / ulp);
    let big = T::lit(1e100);
    let mut out = Vec::with_capacity(n);
    let mut x = vec![czero::<T>(); n];
    for k in 0..n {
        let tkk = t.at(k, k);
        let smin = (ulp * cabs1(tkk)).max(smlnum);
        for (xi, ti) in x[..k].iter_mut().zip(t.col(k)) {
            *xi = -*ti;
        }
        x[k] = Complex::new(T::one(), T::zero());
        for j in (0..k).rev() {
            let mut d = t.at(j, j) - tkk;
            if cabs1(d) < smin {
                d = Complex::new(smin, T::zero());
            }
            let xj = x[j] / d;
            x[j] = xj;
            if cabs1(xj) > big {
                let f = big.recip();
                for v in x[..=k].iter_mut() {
                    *v = *v * f;
                }
            }
            let xj = x[j];
            for (xi, ti) in x[..j].iter_mut().zip(t.col(j)) {
                *xi = *xi - xj * *ti;
            }
        }
        let mut v = vec![czero::<T>(); n];
        for (j, xj) in x[..=k].iter().enumerate() {
            for (vi, zi) in v.iter_mut().zip(z.col(j)) {
                *vi = *vi + *zi * *xj;
            }
        }
        let scale = v.iter().map(|c| cabs1(*c)).fold(T::zero(), T::max);
        if scale > T::zero() {
            for c in v.iter_mut() {
                *c = *c / scale;
            }
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
            for c in v.iter_mut() {
                *c = *c / norm;
            }
        }
        out.push(v);
    }
    out
}

/// All eigenvalues and unit right eigenvectors of `j`.
pub fn eig_right<T: Real>(j: &ComplexMatrix<T>) -> Result<EigenSystem<T>> {
    eig_right_indexed(j, 0)
}

/// As [`eig_right`], naming `matrix_index` in solver errors.
pub fn eig_right_indexed<T: Real>(j: &ComplexMatrix<T>, matrix_index: u64) -> Result<EigenSystem<T>> {
    if !j.is_finite() {
        return Err(Error::domain(format!(
            "matrix {matrix_index} has non-finite entries"
        )));
    }
    let n = j.n();
    let mut h = Dense {
        n,
        a: vec![czero(); n * n],
    };
    for r in 0..n {
        for c in 0..n {
            h.put(r, c, j.get(r, c));
        }
    }
    let mut z = hessenberg(&mut h);
    schur(&mut h, &mut z, matrix_index)?;
    let eigenvalues: Vec<Complex<T>> = (0..n).map(|k| h.at(k, k)).collect();
    let right_vectors = schur_vectors(&h, &z);
    Ok(EigenSystem {
        eigenvalues,
        right_vectors,
    })
}

/// `t = 1/|vᵀv|² − 1` for a unit vector `v`.
pub fn overlap_from_vector<T: Real>(v: &[Complex<T>]) -> Result<Overlap<T>> {
    let norm2: T = v.iter().map(|z| z.norm_sqr()).sum();
    if (norm2.sqrt() - T::one()).abs() > T::lit(1e-10) {
        return Err(Error::domain(format!(
            "overlap needs a unit vector, got norm {}",
            norm2.sqrt()
        )));
    }
    let vtv: Complex<T> = v.iter().map(|z| *z * *z).sum();
    let y = vtv.norm_sqr();
    if y < T::lit(OVERFLOW_FLOOR) {
        return Ok(Overlap::Overflow);
    }
    Ok(Overlap::Finite((T::one() / y - T::one()).max(T::zero())))
}

fn residual<T: Real>(j: &ComplexMatrix<T>, z: Complex<T>, v: &[Complex<T>], fro: T) -> T {
    let jv = j.mul_vec(v);
    let r: T = jv
        .iter()
        .zip(v)
        .map(|(a, b)| (*a - z * *b).norm_sqr())
        .sum();
    if fro > T::zero() {
        r.sqrt() / fro
    } else {
        r.sqrt()
    }
}

/// Records from an already computed decomposition of `j`.
pub fn records_from_system<T: Real>(
    j: &ComplexMatrix<T>,
    sys: &EigenSystem<T>,
    matrix_index: u64,
) -> Vec<SpectralRecord<T>> {
    let fro = j.frobenius_norm();
    sys.eigenvalues
        .iter()
        .zip(&sys.right_vectors)
        .map(|(&z, v)| {
            let res = residual(j, z, v, fro);
            let t = match overlap_from_vector(v) {
                Ok(Overlap::Finite(t)) => Some(t),
                _ => None,
            };
            SpectralRecord {
                z,
                t,
                residual: res,
                matrix_index,
                defective: is_defective(t, res),
            }
        })
        .collect()
}

/// One record per eigenvalue of `j`.
pub fn spectral_records<T: Real>(j: &ComplexMatrix<T>, matrix_index: u64) -> Result<Vec<SpectralRecord<T>>> {
    let sys = eig_right_indexed(j, matrix_index)?;
    Ok(records_from_system(j, &sys, matrix_index))
}

/// `max_i ‖v_iᵀ J − z_i v_iᵀ‖₂ / ‖J‖_F`: zero when `u_i = v_i*` are left
/// eigenvectors, which holds exactly for symmetric `J`.
pub fn left_right_check<T: Real>(j: &ComplexMatrix<T>, sys: &EigenSystem<T>) -> T {
    let fro = j.frobenius_norm();
    let fro = if fro > T::zero() { fro } else { T::one() };
    sys.eigenvalues
        .iter()
        .zip(&sys.right_vectors)
        .map(|(&z, v)| {
            let vj = j.vec_mul(v);
            vj.iter()
                .zip(v)
                .map(|(a, b)| (*a - z * *b).norm_sqr())
                .sum::<T>()
                .sqrt()
                / fro
        })
        .fold(T::zero(), T::max)
}

/// Eigensolver used for `f64` work.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Solver {
    /// The generic Hessenberg/QR/back-substitution solver of this module.
    Reference,
    /// faer's blocked dense solver; same algorithm class, several times faster.
    #[default]
    Faer,
}

fn faer_system(j: &ComplexMatrix<f64>, matrix_index: u64) -> Result<EigenSystem<f64>> {
    use faer::linalg::solvers::Eigen;
    use faer::Mat;

    let n = j.n();
    let real_input = j.as_slice().iter().all(|z| z.im == 0.0);
    let eig = if real_input {
        let a = Mat::<f64>::from_fn(n, n, |r, c| j.get(r, c).re);
        Eigen::new_from_real(a.as_ref())
    } else {
        let a = Mat::<Complex<f64>>::from_fn(n, n, |r, c| j.get(r, c));
        Eigen::new(a.as_ref())
    }
    .map_err(|e| Error::Eigensolver {
        matrix_index,
        reason: format!("{e:?}"),
    })?;
    let s = eig.S();
    let u = eig.U();
    let eigenvalues: Vec<Complex<f64>> = (0..n).map(|k| s[k]).collect();
    let right_vectors = (0..n)
        .map(|k| {
            let mut v: Vec<Complex<f64>> = (0..n).map(|r| u[(r, k)]).collect();
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.0 {
                v.iter_mut().for_each(|c| *c /= norm);
            }
            v
        })
        .collect();
    Ok(EigenSystem {
        eigenvalues,
        right_vectors,
    })
}

/// [`eig_right_indexed`] for `f64` with a choice of solver.
pub fn eig_right_with(j: &ComplexMatrix<f64>, matrix_index: u64, solver: Solver) -> Result<EigenSystem<f64>> {
    match solver {
        Solver::Reference => eig_right_indexed(j, matrix_index),
        Solver::Faer => {
            if !j.is_finite() {
                return Err(Error::domain(format!(
                    "matrix {matrix_index} has non-finite entries"
                )));
            }
            faer_system(j, matrix_index)
        }
    }
}

/// [`spectral_records`] for `f64` with a choice of solver. Residuals are
/// formed with one matrix product.
pub fn spectral_records_with(
    j: &ComplexMatrix<f64>,
    matrix_index: u64,
    solver: Solver,
) -> Result<Vec<SpectralRecord<f64>>> {
    use faer::Mat;

    let sys = eig_right_with(j, matrix_index, solver)?;
    let n = j.n();
    let a = Mat::<Complex<f64>>::from_fn(n, n, |r, c| j.get(r, c));
    let v = Mat::<Complex<f64>>::from_fn(n, n, |r, c| sys.right_vectors[c][r]);
    let av = &a * &v;
    let fro = j.frobenius_norm();
    let fro = if fro > 0.0 { fro } else { 1.0 };
    Ok((0..n)
        .map(|k| {
            let z = sys.eigenvalues[k];
            let res = (0..n)
                .map(|r| (av[(r, k)] - z * v[(r, k)]).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / fro;
            let t = overlap_from_vector(&sys.right_vectors[k])
                .ok()
                .and_then(Overlap::value);
            SpectralRecord {
                z,
                t,
                residual: res,
                matrix_index,
                defective: is_defective(t, res),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{EnsembleKind, EnsembleSpec};

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn householder_annihilates() {
        let alpha = c(0.3, -1.2);
        let orig = [c(2.0, 0.5), c(-0.7, 0.1)];
        let mut x = orig;
        let (tau, beta) = householder(alpha, &mut x);
        let v = [c(1.0, 0.0), x[0], x[1]];
        let full = [alpha, orig[0], orig[1]];
        let s: C = v.iter().zip(&full).map(|(a, b)| a.conj() * b).sum();
        let out: Vec<C> = full.iter().zip(&v).map(|(a, vi)| a - tau.conj() * vi * s).collect();
        assert!((out[0] - c(beta, 0.0)).norm() < 1e-14);
        assert!(out[1].norm() < 1e-14 && out[2].norm() < 1e-14);
    }

    #[test]
    fn one_by_one_and_zero_matrix() {
        let j = ComplexMatrix::from_rows(&[vec![c(2.0, -1.0)]]).unwrap();
        let sys = eig_right(&j).unwrap();
        assert_eq!(sys.eigenvalues, vec![c(2.0, -1.0)]);
        let z = ComplexMatrix::<f64>::zeros(4);
        let sys = eig_right(&z).unwrap();
        assert!(sys.eigenvalues.iter().all(|e| e.norm() == 0.0));
    }

    #[test]
    fn rejects_non_finite() {
        let j = ComplexMatrix::from_rows(&[vec![c(f64::NAN, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(eig_right(&j), Err(Error::Domain(_))));
    }

    #[test]
    fn random_matrix_residuals() {
        let spec = EnsembleSpec::new(EnsembleKind::GinibreComplex, 40, 11).unwrap();
        let j = spec.matrix::<f64>(0);
        let recs = spectral_records(&j, 0).unwrap();
        assert_eq!(recs.len(), 40);
        assert!(recs.iter().all(|r| r.residual < 1e-13 && !r.defective));
    }
}
