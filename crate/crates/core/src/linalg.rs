//! Dense complex matrices and the numerical kernels the rest of the crate
//! is built on: Hermitian eigendecomposition (cyclic Jacobi), operator
//! norms, linear solves, and the matrix exponential.
//!
//! Everything here is written for desk-scale inputs (sides up to a few
//! hundred), where the quadratically convergent Jacobi iteration is both
//! simple and very accurate.

use crate::Real;
use num_complex::Complex;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    /// Identity matrix of side `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from a function of the index pair.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a square matrix from rows of real entries.
    pub fn from_real_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| Complex::new(rows[i][j], T::zero()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Raw row-major data slice.
    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= *b;
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = -*a;
        }
        out
    }

    pub fn scale(&self, z: Complex<T>) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= z;
        }
        out
    }

    pub fn scale_re(&self, t: T) -> Self {
        self.scale(Complex::new(t, T::zero()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik.re == T::zero() && aik.im == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise complex conjugate (no transposition).
    pub fn conj_entries(&self) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.conj();
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        assert!(self.is_square());
        let mut t = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            t += self[(i, i)];
        }
        t
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Maximum column absolute sum.
    pub fn one_norm(&self) -> T {
        let mut best = T::zero();
        for j in 0..self.cols {
            let mut s = T::zero();
            for i in 0..self.rows {
                s = s + self[(i, j)].norm();
            }
            best = best.max(s);
        }
        best
    }

    /// `‖A − A*‖_max`; zero iff the matrix is exactly Hermitian.
    pub fn hermitian_residual(&self) -> T {
        assert!(self.is_square());
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::from_f64_lit(0.5);
        self.add(&self.adjoint()).scale_re(half)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    ///
    /// The input is symmetrised first, so callers are expected to have
    /// checked [`CMatrix::hermitian_residual`] when exact self-adjointness
    /// matters.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        let (vals, _) = jacobi_hermitian(&self.hermitian_part(), false);
        vals
    }

    /// Full eigendecomposition of the Hermitian part.
    ///
    /// Returns `(λ, V)` with `λ` ascending and `V` unitary such that
    /// `A ≈ V · diag(λ) · V*` column by column.
    pub fn hermitian_eigen(&self) -> (Vec<T>, Self) {
        let (vals, vecs) = jacobi_hermitian(&self.hermitian_part(), true);
        (vals, vecs.expect("eigenvectors requested"))
    }

    /// Operator (spectral) norm, computed as the largest singular value.
    pub fn op_norm(&self) -> T {
        if self.rows == 0 || self.cols == 0 {
            return T::zero();
        }
        let gram = self.adjoint().matmul(self);
        let eigs = gram.hermitian_eigenvalues();
        let top = eigs.last().copied().unwrap_or(T::zero());
        top.max(T::zero()).sqrt()
    }

    /// Solves `A X = B` by LU with partial pivoting. Panics if `A` is
    /// numerically singular; the exponential below only calls it on
    /// well-conditioned Padé denominators.
    pub fn solve(&self, rhs: &Self) -> Self {
        assert!(self.is_square());
        assert_eq!(self.rows, rhs.rows, "shape mismatch");
        let n = self.rows;
        let mut lu = self.clone();
        let mut x = rhs.clone();
        for k in 0..n {
            let mut piv = k;
            let mut best = lu[(k, k)].norm();
            for i in (k + 1)..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            assert!(best > T::zero(), "singular matrix in solve");
            if piv != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, piv * n + j);
                }
                for j in 0..x.cols {
                    x.data.swap(k * x.cols + j, piv * x.cols + j);
                }
            }
            let d = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                for j in (k + 1)..n {
                    lu[(i, j)] = lu[(i, j)] - f * lu[(k, j)];
                }
                for j in 0..x.cols {
                    x[(i, j)] = x[(i, j)] - f * x[(k, j)];
                }
            }
        }
        for k in (0..n).rev() {
            let d = lu[(k, k)];
            for j in 0..x.cols {
                let mut s = x[(k, j)];
                for m in (k + 1)..n {
                    s -= lu[(k, m)] * x[(m, j)];
                }
                x[(k, j)] = s / d;
            }
        }
        x
    }

    /// Matrix exponential.
    ///
    /// Hermitian inputs (within a small multiple of machine epsilon, scaled
    /// by the matrix size) go through the eigendecomposition, which keeps
    /// the result exactly Hermitian-positive for self-adjoint arguments;
    /// everything else uses degree-13 Padé with scaling and squaring. The
    /// zero matrix maps to the identity exactly.
    pub fn expm(&self) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return self.clone();
        }
        if self.max_abs() == T::zero() {
            return Self::identity(n);
        }
        let herm_tol = T::epsilon()
            * T::from_f64_lit(64.0)
            * T::from_f64_lit(n as f64)
            * self.max_abs().max(T::one());
        if self.hermitian_residual() <= herm_tol {
            let (vals, v) = self.hermitian_eigen();
            let mut d = Self::zeros(n, n);
            for i in 0..n {
                d[(i, i)] = Complex::new(vals[i].exp(), T::zero());
            }
            return v.matmul(&d).matmul(&v.adjoint());
        }
        self.expm_pade()
    }

    fn expm_pade(&self) -> Self {
        let n = self.rows;
        let theta13 = T::from_f64_lit(4.25);
        let norm = self.one_norm();
        let mut s: i32 = 0;
        if norm > theta13 {
            s = (norm / theta13).log2().ceil().to_f64().unwrap_or(0.0) as i32;
            s = s.max(0);
        }
        let scale = T::from_f64_lit(0.5).powi(s);
        let a = self.scale_re(scale);

        const B: [f64; 14] = [
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ];
        let b = |k: usize| Complex::new(T::from_f64_lit(B[k]), T::zero());

        let id = Self::identity(n);
        let a2 = a.matmul(&a);
        let a4 = a2.matmul(&a2);
        let a6 = a2.matmul(&a4);

        let u_inner = a6
            .scale(b(13))
            .add(&a4.scale(b(11)))
            .add(&a2.scale(b(9)));
        let u_poly = a6
            .matmul(&u_inner)
            .add(&a6.scale(b(7)))
            .add(&a4.scale(b(5)))
            .add(&a2.scale(b(3)))
            .add(&id.scale(b(1)));
        let u = a.matmul(&u_poly);

        let v_inner = a6
            .scale(b(12))
            .add(&a4.scale(b(10)))
            .add(&a2.scale(b(8)));
        let v = a6
            .matmul(&v_inner)
            .add(&a6.scale(b(6)))
            .add(&a4.scale(b(4)))
            .add(&a2.scale(b(2)))
            .add(&id.scale(b(0)));

        let mut r = v.sub(&u).solve(&v.add(&u));
        for _ in 0..s {
            r = r.matmul(&r);
        }
        r
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Cyclic Jacobi for Hermitian matrices.
///
/// Each rotation first makes the pivot entry real by a unimodular column
/// scaling and then applies the classical symmetric Schur rotation; the
/// composition is the complex Givens rotation applied two-sided. Converges
/// quadratically; the sweep budget is generous for desk-scale sides.
fn jacobi_hermitian<T: Real>(a: &CMatrix<T>, want_vectors: bool) -> (Vec<T>, Option<CMatrix<T>>) {
    let n = a.rows();
    assert!(a.is_square());
    let mut m = a.clone();
    let mut v = if want_vectors {
        Some(CMatrix::<T>::identity(n))
    } else {
        None
    };
    if n <= 1 {
        let vals = (0..n).map(|i| m[(i, i)].re).collect();
        return (vals, v);
    }

    let fro = m.frobenius_norm();
    let stop = T::epsilon() * fro.max(T::min_positive_value());
    let max_sweeps = 40;

    for _ in 0..max_sweeps {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= T::min_positive_value() {
                    continue;
                }
                // Divide component-wise: the naive complex division squares
                // `r` in its denominator, which underflows to zero (and the
                // phase to NaN) once `r` drops below the square root of the
                // smallest normal number.
                let phase = apq.unscale(r);
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (r + r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                // U restricted to the (p,q) plane:
                //   U[p][p] = c          U[p][q] = s
                //   U[q][p] = -s·e^{-iφ} U[q][q] = c·e^{-iφ}
                let cc = Complex::new(c, T::zero());
                let ss = Complex::new(s, T::zero());
                let uqp = -ss * phase.conj();
                let uqq = cc * phase.conj();

                for j in 0..n {
                    let mjp = m[(j, p)];
                    let mjq = m[(j, q)];
                    m[(j, p)] = mjp * cc + mjq * uqp;
                    m[(j, q)] = mjp * ss + mjq * uqq;
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = cc * mpj + uqp.conj() * mqj;
                    m[(q, j)] = ss * mpj + uqq.conj() * mqj;
                }
                // Re-symmetrise the pivot entries against drift.
                m[(p, q)] = Complex::new(T::zero(), T::zero());
                m[(q, p)] = Complex::new(T::zero(), T::zero());
                m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
                m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());

                if let Some(vm) = v.as_mut() {
                    for j in 0..n {
                        let vjp = vm[(j, p)];
                        let vjq = vm[(j, q)];
                        vm[(j, p)] = vjp * cc + vjq * uqp;
                        vm[(j, q)] = vjp * ss + vjq * uqq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| {
        diag[i]
            .partial_cmp(&diag[j])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let vals: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let vecs = v.map(|vm| CMatrix::from_fn(n, n, |i, j| vm[(i, order[j])]));
    (vals, vecs)
}
