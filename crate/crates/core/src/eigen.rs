//! Hermitian eigendecomposition and the spectral matrix exponential.
//!
//! The solver reduces the (symmetrized) input to a complex tridiagonal matrix
//! with Householder reflections, rotates the off-diagonal to be real with a
//! diagonal phase transform, and finishes with the implicit QL iteration on
//! the real symmetric tridiagonal matrix. Eigenvectors are accumulated in
//! transposed form so every update walks contiguous memory.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::matrix::ComplexMatrix;
use crate::{Error, Result, HERMITIAN_TOL, MAX_DIMENSION};

/// Eigenvalues closer than this (relative to max(1, |λ|)) count as tied when
/// ordering the spectrum.
const TIE_TOL: f64 = 1e-12;

/// Components smaller than this are skipped when fixing eigenvector phases.
const PHASE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// Eigenvalues in descending order.
    pub fn values(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors stored as columns, in the order of
    /// [`Spectrum::values`].
    pub fn vectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut scaled = v.clone();
        for i in 0..n {
            for k in 0..n {
                scaled[(i, k)] *= weights[k];
            }
        }
        scaled.matmul(&v.adjoint()).expect("square factors")
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| Complex64::new(l, 0.0))
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must satisfy `max |m - m†| <= 1e-10`; it is symmetrized as
/// `(m + m†)/2` before decomposition. Eigenvalues come back in descending
/// order, each eigenvector phase-fixed so its first non-negligible component
/// is real and positive; near-equal eigenvalues are ordered by descending
/// lexicographic order of their eigenvectors.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    m.require_square()?;
    let n = m.rows();
    if n > MAX_DIMENSION {
        return Err(Error::DimensionTooLarge { dim: n, max: MAX_DIMENSION });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let deviation = m.hermitian_deviation()?;
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    if n == 0 {
        return Ok(Spectrum { eigenvalues: Vec::new(), eigenvectors: ComplexMatrix::zeros(0, 0) });
    }

    let mut a = m.hermitian_part()?.into_vec();
    let mut qt = ComplexMatrix::identity(n).into_vec();
    let (mut diag, off) = tridiagonalize(&mut a, &mut qt, n);

    // Rotate the complex off-diagonal onto the non-negative reals.
    let mut phase = Complex64::new(1.0, 0.0);
    let mut sub = Vec::with_capacity(n);
    for (i, e) in off.iter().enumerate() {
        let r = e.norm();
        if r > 0.0 {
            phase *= e / r;
        }
        sub.push(r);
        scale_row(&mut qt, n, i + 1, phase);
    }
    sub.push(0.0);

    implicit_ql(&mut diag, &mut sub, &mut qt, n)?;

    for i in 0..n {
        let row = &mut qt[i * n..(i + 1) * n];
        if let Some(z) = row.iter().find(|z| z.norm() > PHASE_TOL) {
            let fix = z.conj() / z.norm();
            row.iter_mut().for_each(|c| *c *= fix);
        }
    }

    let order = spectral_order(&diag, &qt, n);
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, col)] = qt[k * n + i];
        }
    }
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// `exp(-i h t / ħ)` through the eigendecomposition of `h`.
pub fn expm_propagator(h: &ComplexMatrix, t: f64, hbar: f64) -> Result<ComplexMatrix> {
    if hbar <= 0.0 || !hbar.is_finite() {
        return Err(Error::InvalidArgument("hbar must be positive and finite"));
    }
    let spectrum = hermitian_eig(h)?;
    Ok(spectrum.map(|l| phase_factor(l, t, hbar)))
}

#[inline]
pub(crate) fn phase_factor(energy: f64, t: f64, hbar: f64) -> Complex64 {
    let theta = -energy * t / hbar;
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

fn scale_row(m: &mut [Complex64], n: usize, row: usize, factor: Complex64) {
    m[row * n..(row + 1) * n].iter_mut().for_each(|z| *z *= factor);
}

/// Householder reduction `A = Q T Q†` of the Hermitian matrix held in `a`.
///
/// On return `qt` holds `Qᵀ` (row `i` is the `i`-th column of `Q`). Returns
/// the real diagonal of `T` and its complex subdiagonal `T[i+1, i]`.
fn tridiagonalize(a: &mut [Complex64], qt: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<Complex64>) {
    let zero = Complex64::new(0.0, 0.0);
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let tail: f64 = v[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let alpha = libm::sqrt(v[0].norm_sqr() + tail);
        let head = v[0].norm();
        let phase = if head > 0.0 { v[0] / head } else { Complex64::new(1.0, 0.0) };
        v[0] += phase * alpha;
        let tau = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();

        // H A H = A - v q† - q v†, with w = τ A v and q = w - (τ v†w / 2) v.
        let w: Vec<Complex64> = (0..m)
            .map(|i| {
                let row = &a[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
                row.iter().zip(&v).map(|(x, y)| x * y).sum::<Complex64>() * tau
            })
            .collect();
        let vw: Complex64 = v.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
        let kappa = vw * (0.5 * tau);
        let q: Vec<Complex64> = w.iter().zip(&v).map(|(wi, vi)| wi - kappa * vi).collect();
        for i in 0..m {
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            let (vi, qi) = (v[i], q[i]);
            for (j, x) in row.iter_mut().enumerate() {
                *x -= vi * q[j].conj() + qi * v[j].conj();
            }
        }

        let beta = -phase * alpha;
        a[(k + 1) * n + k] = beta;
        a[k * n + k + 1] = beta.conj();
        for i in k + 2..n {
            a[i * n + k] = zero;
            a[k * n + i] = zero;
        }

        // Qᵀ <- Hᵀ Qᵀ on rows k+1..n.
        let mut y = alloc::vec![zero; n];
        for (b, vb) in v.iter().enumerate() {
            let row = &qt[(k + 1 + b) * n..(k + 2 + b) * n];
            for (yc, r) in y.iter_mut().zip(row) {
                *yc += vb * r;
            }
        }
        for (ai, va) in v.iter().enumerate() {
            let f = va.conj() * tau;
            let row = &mut qt[(k + 1 + ai) * n..(k + 2 + ai) * n];
            for (r, yc) in row.iter_mut().zip(&y) {
                *r -= f * yc;
            }
        }
    }
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    let off = (0..n.saturating_sub(1)).map(|i| a[(i + 1) * n + i]).collect();
    (diag, off)
}

/// Implicit QL iteration with Wilkinson-style shifts on the symmetric
/// tridiagonal matrix (`d`, `e`), `e[i]` coupling `i` and `i+1` and
/// `e[n-1] == 0`. Rotations are applied to the rows of `qt`.
fn implicit_ql(d: &mut [f64], e: &mut [f64], qt: &mut [Complex64], n: usize) -> Result<()> {
    let budget = 100 * n * n;
    let mut iterations = 0usize;
    let eps = f64::EPSILON;
    let mut shift_total = 0.0;
    let mut tst1 = 0.0f64;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            loop {
                iterations += 1;
                if iterations > budget {
                    return Err(Error::ConvergenceFailure { iterations: budget });
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                shift_total += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    rotate_rows(qt, n, i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += shift_total;
        e[l] = 0.0;
    }
    Ok(())
}

/// Rows `i` and `i+1` of `qt` hold columns of the eigenvector matrix; apply
/// the plane rotation `(c, s)` to them.
#[inline]
fn rotate_rows(qt: &mut [Complex64], n: usize, i: usize, c: f64, s: f64) {
    let (head, tail) = qt.split_at_mut((i + 1) * n);
    let lo = &mut head[i * n..];
    let hi = &mut tail[..n];
    for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
        let h = *y;
        *y = *x * s + h * c;
        *x = *x * c - h * s;
    }
}

fn lexicographic(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

fn spectral_order(values: &[f64], vecs: &[Complex64], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let tied = |a: f64, b: f64| (a - b).abs() <= TIE_TOL * a.abs().max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && tied(values[order[end - 1]], values[order[end]]) {
            end += 1;
        }
        if end - start > 1 {
            order[start..end].sort_by(|&a, &b| lexicographic(&vecs[b * n..(b + 1) * n], &vecs[a * n..(a + 1) * n]));
        }
        start = end;
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli;
    use crate::random::StateSampler;

    fn assert_decomposes(m: &ComplexMatrix) {
        let spec = hermitian_eig(m).unwrap();
        let n = m.rows();
        let v = spec.vectors();
        let gram = v.adjoint().matmul(v).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)).unwrap() < 1e-10);
        let rel = spec.reconstruct().frobenius_distance(m).unwrap() / m.frobenius_norm().max(1e-300);
        assert!(rel < 1e-9, "relative reconstruction error {rel}");
        assert!(spec.values().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn diagonal_input() {
        let spec = hermitian_eig(&ComplexMatrix::real_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(spec.values(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let spec = hermitian_eig(&pauli::x()).unwrap();
        assert!((spec.values()[0] - 1.0).abs() < 1e-14);
        assert!((spec.values()[1] + 1.0).abs() < 1e-14);
        assert_decomposes(&pauli::y());
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut sampler = StateSampler::new(7);
        for n in [1, 2, 3, 6, 16, 33] {
            assert_decomposes(&sampler.hermitian(n));
        }
    }

    #[test]
    fn degenerate_and_zero_inputs() {
        assert_decomposes(&ComplexMatrix::identity(5));
        let spec = hermitian_eig(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert!(spec.values().iter().all(|&l| l == 0.0));
        // Tied eigenvectors are ordered lexicographically descending, so the
        // identity decomposes onto the standard basis in natural order.
        let spec = hermitian_eig(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(spec.vectors(), &ComplexMatrix::identity(3));
    }

    #[test]
    fn eigenvector_phase_is_fixed() {
        let mut sampler = StateSampler::new(11);
        let spec = hermitian_eig(&sampler.hermitian(8)).unwrap();
        for k in 0..8 {
            let v = spec.vector(k);
            let first = v.iter().find(|z| z.norm() > PHASE_TOL).unwrap();
            assert!(first.im.abs() < 1e-15 && first.re > 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        let almost = ComplexMatrix::from_real_rows(&[[1.0, 0.5 + 5e-11], [0.5, 1.0]]).unwrap();
        assert!(hermitian_eig(&almost).is_ok());
        assert!(matches!(hermitian_eig(&ComplexMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn rejects_oversized() {
        let m = ComplexMatrix::zeros(MAX_DIMENSION + 1, MAX_DIMENSION + 1);
        assert!(matches!(hermitian_eig(&m), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn propagator_examples() {
        let mut sampler = StateSampler::new(3);
        let h = sampler.hermitian(4);
        let u0 = expm_propagator(&h, 0.0, 1.0).unwrap();
        assert!(u0.max_abs_diff(&ComplexMatrix::identity(4)).unwrap() < 1e-12);

        let t = 0.37;
        let uz = expm_propagator(&pauli::z(), t, 1.0).unwrap();
        let expected = ComplexMatrix::diag(&[Complex64::new(0.0, -t).exp(), Complex64::new(0.0, t).exp()]);
        assert!(uz.max_abs_diff(&expected).unwrap() < 1e-14);
    }

    /// Truncated Taylor series of exp(-i h t), 30 terms.
    fn taylor_expm(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let n = h.rows();
        let step = h.scale(Complex64::new(0.0, -t));
        let mut term = ComplexMatrix::identity(n);
        let mut sum = term.clone();
        for k in 1..30 {
            term = term.matmul(&step).unwrap().scale_real(1.0 / k as f64);
            sum = sum.add(&term).unwrap();
        }
        sum
    }

    #[test]
    fn pauli_x_quarter_period_matches_taylor() {
        let t = core::f64::consts::FRAC_PI_2;
        let u = expm_propagator(&pauli::x(), t, 1.0).unwrap();
        let oracle = taylor_expm(&pauli::x(), t);
        assert!(u.max_abs_diff(&oracle).unwrap() < 1e-12);
        let minus_i_x = pauli::x().scale(Complex64::new(0.0, -1.0));
        assert!(u.max_abs_diff(&minus_i_x).unwrap() < 1e-12);

        let mut sampler = StateSampler::new(5);
        let h = sampler.hermitian(5).scale_real(0.3);
        let u = expm_propagator(&h, 0.8, 1.0).unwrap();
        assert!(u.max_abs_diff(&taylor_expm(&h, 0.8)).unwrap() < 1e-10);
    }

    #[test]
    fn hbar_rescales_time() {
        let h = pauli::x();
        let a = expm_propagator(&h, 1.0, 2.0).unwrap();
        let b = expm_propagator(&h, 0.5, 1.0).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-14);
        assert!(expm_propagator(&h, 1.0, 0.0).is_err());
    }
}
