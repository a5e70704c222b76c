//! Finite-dimensional C*-algebras `A = ⊕_k M_{d_k}(ℂ)` and block matrices
//! over them.
//!
//! An [`AlgebraDescriptor`] fixes the list of summand dimensions; an
//! [`AlgebraElement`] stores one complex matrix per summand. Positivity of
//! an element means positivity of every summand, and positivity of a block
//! matrix `M ∈ M_n(A)` is decided by flattening along the canonical
//! isomorphism `M_n(⊕_k M_{d_k}) ≅ ⊕_k M_{n·d_k}` and testing each summand
//! spectrally.

use crate::error::Error;
use crate::linalg::CMatrix;
use crate::Real;
use num_complex::Complex;

/// Shape of a finite-dimensional C*-algebra: the matrix sizes of its
/// simple summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDescriptor {
    block_dims: Vec<usize>,
}

impl AlgebraDescriptor {
    /// Builds a descriptor from summand dimensions (all at least 1).
    pub fn new(block_dims: Vec<usize>) -> Result<Self, Error> {
        if block_dims.is_empty() {
            return Err(Error::InvalidInput("descriptor needs at least one summand".into()));
        }
        if block_dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidInput("summand dimensions must be at least 1".into()));
        }
        Ok(AlgebraDescriptor { block_dims })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Side of the block-diagonal embedding `A ⊆ M_D(ℂ)`, `D = Σ_k d_k`.
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// Dimension of `A` as a complex vector space, `Σ_k d_k²`.
    pub fn coefficient_dim(&self) -> usize {
        self.block_dims.iter().map(|d| d * d).sum()
    }

    /// True iff every summand is one-dimensional, i.e. `A` is commutative.
    pub fn is_commutative(&self) -> bool {
        self.block_dims.iter().all(|&d| d == 1)
    }

    /// Descriptor of `M_n(A)` flattened summand by summand.
    pub fn inflate(&self, n: usize) -> Result<Self, Error> {
        AlgebraDescriptor::new(self.block_dims.iter().map(|&d| n * d).collect())
    }
}

/// Tolerance policy for spectral verdicts.
///
/// With `relative` set (the default), thresholds scale with
/// `max(1, operator norm)` of the quantity under test; otherwise `eps` is
/// used as an absolute bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T> {
    pub eps: T,
    pub relative: bool,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Tolerance {
            eps: T::from_f64_lit(1e-9),
            relative: true,
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn absolute(eps: T) -> Self {
        Tolerance { eps, relative: false }
    }

    pub fn relative(eps: T) -> Self {
        Tolerance { eps, relative: true }
    }

    /// Effective threshold for a quantity of the given operator norm.
    pub fn effective(&self, scale: T) -> T {
        if self.relative {
            self.eps * scale.max(T::one())
        } else {
            self.eps
        }
    }
}

/// Element of `⊕_k M_{d_k}(ℂ)`: one dense complex matrix per summand.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<T> {
    descriptor: AlgebraDescriptor,
    blocks: Vec<CMatrix<T>>,
}

/// Outcome of a spectral positivity test, with enough context to report
/// what failed and where.
#[derive(Clone, Debug)]
pub struct SpectralCheck<T> {
    pub passed: bool,
    /// `‖x − x*‖_max` over all summands.
    pub hermitian_residual: T,
    /// Smallest eigenvalue across summands (of the Hermitian part).
    pub min_eigenvalue: T,
    /// Summand index attaining the smallest eigenvalue.
    pub min_summand: usize,
    /// Operator norm used for relative tolerance scaling.
    pub scale: T,
    /// Threshold the eigenvalue and Hermitian residual were compared to.
    pub threshold: T,
}

impl<T: Real> AlgebraElement<T> {
    pub fn zero(descriptor: &AlgebraDescriptor) -> Self {
        let blocks = descriptor
            .block_dims()
            .iter()
            .map(|&d| CMatrix::zeros(d, d))
            .collect();
        AlgebraElement {
            descriptor: descriptor.clone(),
            blocks,
        }
    }

    /// Multiplicative unit `1_A`.
    pub fn unit(descriptor: &AlgebraDescriptor) -> Self {
        let blocks = descriptor
            .block_dims()
            .iter()
            .map(|&d| CMatrix::identity(d))
            .collect();
        AlgebraElement {
            descriptor: descriptor.clone(),
            blocks,
        }
    }

    /// Builds an element from explicit summand matrices.
    pub fn from_blocks(descriptor: &AlgebraDescriptor, blocks: Vec<CMatrix<T>>) -> Result<Self, Error> {
        if blocks.len() != descriptor.num_blocks() {
            return Err(Error::ShapeMismatch {
                op: "from_blocks",
                detail: format!(
                    "expected {} summands, got {}",
                    descriptor.num_blocks(),
                    blocks.len()
                ),
            });
        }
        for (k, (b, &d)) in blocks.iter().zip(descriptor.block_dims()).enumerate() {
            if b.rows() != d || b.cols() != d {
                return Err(Error::ShapeMismatch {
                    op: "from_blocks",
                    detail: format!("summand {k} must be {d}x{d}, got {}x{}", b.rows(), b.cols()),
                });
            }
        }
        Ok(AlgebraElement {
            descriptor: descriptor.clone(),
            blocks,
        })
    }

    /// Central element `⊕_k z_k·I_{d_k}` from one scalar per summand.
    pub fn from_scalars(descriptor: &AlgebraDescriptor, scalars: &[Complex<T>]) -> Result<Self, Error> {
        if scalars.len() != descriptor.num_blocks() {
            return Err(Error::ShapeMismatch {
                op: "from_scalars",
                detail: format!(
                    "expected {} scalars, got {}",
                    descriptor.num_blocks(),
                    scalars.len()
                ),
            });
        }
        let blocks = descriptor
            .block_dims()
            .iter()
            .zip(scalars)
            .map(|(&d, &z)| CMatrix::identity(d).scale(z))
            .collect();
        Ok(AlgebraElement {
            descriptor: descriptor.clone(),
            blocks,
        })
    }

    /// Real multiple of the unit.
    pub fn scalar(descriptor: &AlgebraDescriptor, t: T) -> Self {
        let z = Complex::new(t, T::zero());
        let scalars = vec![z; descriptor.num_blocks()];
        Self::from_scalars(descriptor, &scalars).expect("lengths match by construction")
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn block(&self, k: usize) -> &CMatrix<T> {
        &self.blocks[k]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut CMatrix<T> {
        &mut self.blocks[k]
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    fn check_same(&self, other: &Self, _op: &'static str) -> Result<(), Error> {
        if self.descriptor != other.descriptor {
            return Err(Error::DescriptorMismatch {
                left: self.descriptor.block_dims().to_vec(),
                right: other.descriptor.block_dims().to_vec(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_same(other, "add")?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.check_same(other, "sub")?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.sub(b))
            .collect();
        Ok(AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks,
        })
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(|b| b.neg()).collect(),
        }
    }

    pub fn scale(&self, z: Complex<T>) -> Self {
        AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(z)).collect(),
        }
    }

    pub fn scale_re(&self, t: T) -> Self {
        self.scale(Complex::new(t, T::zero()))
    }

    /// Summand-wise product (the algebra multiplication).
    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_same(other, "mul")?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.matmul(b))
            .collect();
        Ok(AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks,
        })
    }

    /// Adjoint `x*`, summand-wise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// Real part `(x + x*)/2`.
    pub fn re_part(&self) -> Self {
        AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(|b| b.hermitian_part()).collect(),
        }
    }

    /// Operator norm: the maximum of the summand operator norms.
    pub fn op_norm(&self) -> T {
        self.blocks
            .iter()
            .map(|b| b.op_norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn max_abs(&self) -> T {
        self.blocks
            .iter()
            .map(|b| b.max_abs())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// `‖x − x*‖_max` over all summands.
    pub fn self_adjoint_residual(&self) -> T {
        self.blocks
            .iter()
            .map(|b| b.hermitian_residual())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn is_self_adjoint(&self, tol: &Tolerance<T>) -> bool {
        self.self_adjoint_residual() <= tol.effective(self.op_norm())
    }

    /// Distance `‖x − y‖` in operator norm.
    pub fn distance(&self, other: &Self) -> Result<T, Error> {
        Ok(self.sub(other)?.op_norm())
    }

    /// Full spectral positivity test with context.
    pub fn positivity(&self, tol: &Tolerance<T>) -> SpectralCheck<T> {
        let scale = self.op_norm();
        let threshold = tol.effective(scale);
        let hermitian_residual = self.self_adjoint_residual();
        let mut min_eigenvalue = T::infinity();
        let mut min_summand = 0;
        for (k, b) in self.blocks.iter().enumerate() {
            if b.rows() == 0 {
                continue;
            }
            let eigs = b.hermitian_eigenvalues();
            if let Some(&lo) = eigs.first() {
                if lo < min_eigenvalue {
                    min_eigenvalue = lo;
                    min_summand = k;
                }
            }
        }
        if !min_eigenvalue.is_finite() {
            min_eigenvalue = T::zero();
        }
        let passed = hermitian_residual <= threshold && min_eigenvalue >= -threshold;
        SpectralCheck {
            passed,
            hermitian_residual,
            min_eigenvalue,
            min_summand,
            scale,
            threshold,
        }
    }

    /// True iff `x` is self-adjoint within tol with spectrum bounded below
    /// by `−tol·scale`.
    pub fn is_positive(&self, tol: &Tolerance<T>) -> bool {
        self.positivity(tol).passed
    }

    /// Smallest spectral point. Errors unless `x` is self-adjoint within tol.
    pub fn spectral_min(&self, tol: &Tolerance<T>) -> Result<T, Error> {
        let res = self.self_adjoint_residual();
        if res > tol.effective(self.op_norm()) {
            return Err(Error::domain("spectral_min", "element self-adjoint", res));
        }
        let mut lo = T::infinity();
        for b in &self.blocks {
            if let Some(&v) = b.hermitian_eigenvalues().first() {
                lo = lo.min(v);
            }
        }
        Ok(if lo.is_finite() { lo } else { T::zero() })
    }

    /// Largest spectral point. Errors unless `x` is self-adjoint within tol.
    pub fn spectral_max(&self, tol: &Tolerance<T>) -> Result<T, Error> {
        Ok(-self.neg().spectral_min(tol)?)
    }

    /// Summand-wise matrix exponential.
    pub fn exp_element(&self) -> Self {
        AlgebraElement {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(|b| b.expm()).collect(),
        }
    }

    /// Distance to the centre: `max_k ‖x_k − (tr x_k / d_k)·I‖`.
    pub fn central_residual(&self) -> T {
        let mut worst = T::zero();
        for (b, &d) in self.blocks.iter().zip(self.descriptor.block_dims()) {
            let mean = b.trace() / Complex::new(T::from_f64_lit(d as f64), T::zero());
            let dist = b.sub(&CMatrix::identity(d).scale(mean)).op_norm();
            worst = worst.max(dist);
        }
        worst
    }

    pub fn is_central(&self, tol: &Tolerance<T>) -> bool {
        self.central_residual() <= tol.effective(self.op_norm())
    }

    /// Conditional expectation onto the centre: each summand is replaced by
    /// its normalised trace times the identity.
    pub fn center_expectation(&self) -> Self {
        let scalars: Vec<Complex<T>> = self
            .blocks
            .iter()
            .zip(self.descriptor.block_dims())
            .map(|(b, &d)| b.trace() / Complex::new(T::from_f64_lit(d as f64), T::zero()))
            .collect();
        Self::from_scalars(&self.descriptor, &scalars).expect("lengths match")
    }

    /// Scalars of a central element, one per summand (the normalised traces).
    pub fn central_scalars(&self) -> Vec<Complex<T>> {
        self.blocks
            .iter()
            .zip(self.descriptor.block_dims())
            .map(|(b, &d)| b.trace() / Complex::new(T::from_f64_lit(d as f64), T::zero()))
            .collect()
    }
}

/// Matrix-unit basis of the algebra: for each summand `k` and coordinate
/// `(p, q)` the element supported on summand `k` with a single 1 at
/// `(p, q)`. Ordered by summand, then row, then column; the length is
/// `descriptor.coefficient_dim()`.
pub fn matrix_units<T: Real>(descriptor: &AlgebraDescriptor) -> Vec<AlgebraElement<T>> {
    let mut out = Vec::with_capacity(descriptor.coefficient_dim());
    for (k, &d) in descriptor.block_dims().iter().enumerate() {
        for p in 0..d {
            for q in 0..d {
                let mut e = AlgebraElement::zero(descriptor);
                e.block_mut(k)[(p, q)] = Complex::new(T::one(), T::zero());
                out.push(e);
            }
        }
    }
    out
}

/// Block matrix `M ∈ M_n(A)` with entries in the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AMatrix<T> {
    descriptor: AlgebraDescriptor,
    n: usize,
    entries: Vec<AlgebraElement<T>>,
}

impl<T: Real> AMatrix<T> {
    pub fn from_fn(
        descriptor: &AlgebraDescriptor,
        n: usize,
        mut f: impl FnMut(usize, usize) -> AlgebraElement<T>,
    ) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = f(i, j);
                assert_eq!(e.descriptor(), descriptor, "entry descriptor mismatch");
                entries.push(e);
            }
        }
        AMatrix {
            descriptor: descriptor.clone(),
            n,
            entries,
        }
    }

    pub fn zero(descriptor: &AlgebraDescriptor, n: usize) -> Self {
        Self::from_fn(descriptor, n, |_, _| AlgebraElement::zero(descriptor))
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement<T> {
        assert!(i < self.n && j < self.n);
        &self.entries[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, e: AlgebraElement<T>) {
        assert!(i < self.n && j < self.n);
        assert_eq!(e.descriptor(), &self.descriptor);
        self.entries[i * self.n + j] = e;
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.n != other.n || self.descriptor != other.descriptor {
            return Err(Error::ShapeMismatch {
                op: "amatrix add",
                detail: "side or descriptor mismatch".into(),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        Ok(self.add(&other.neg())?)
    }

    pub fn neg(&self) -> Self {
        AMatrix {
            descriptor: self.descriptor.clone(),
            n: self.n,
            entries: self.entries.iter().map(|e| e.neg()).collect(),
        }
    }

    pub fn scale_re(&self, t: T) -> Self {
        AMatrix {
            descriptor: self.descriptor.clone(),
            n: self.n,
            entries: self.entries.iter().map(|e| e.scale_re(t)).collect(),
        }
    }

    /// Largest entrywise operator norm (a convenient coarse magnitude).
    pub fn max_entry_norm(&self) -> T {
        self.entries
            .iter()
            .map(|e| e.op_norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Entrywise adjoint, without transposing indices.
    ///
    /// Over a commutative algebra this preserves positivity; over a
    /// noncommutative one it need not, and callers asserting positivity of
    /// the result are responsible for the commutativity hypothesis.
    pub fn transpose_adjoint(&self) -> Self {
        AMatrix {
            descriptor: self.descriptor.clone(),
            n: self.n,
            entries: self.entries.iter().map(|e| e.adjoint()).collect(),
        }
    }

    /// Entrywise (Schur) product `M ⊙ N`.
    ///
    /// Positivity of the result is guaranteed when both factors are
    /// positive and the entries of `N` are central; the product itself is
    /// defined for any matching shapes.
    pub fn schur_product(&self, other: &Self) -> Result<Self, Error> {
        if self.n != other.n || self.descriptor != other.descriptor {
            return Err(Error::ShapeMismatch {
                op: "schur_product",
                detail: "side or descriptor mismatch".into(),
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for (a, b) in self.entries.iter().zip(&other.entries) {
            entries.push(a.mul(b)?);
        }
        Ok(AMatrix {
            descriptor: self.descriptor.clone(),
            n: self.n,
            entries,
        })
    }

    /// Entrywise exponential `[exp(M_ij)]`.
    ///
    /// Preserves positivity over a commutative algebra (and more generally
    /// for central entries): the Schur exponential is a limit of Schur
    /// polynomials with nonnegative coefficients.
    pub fn schur_exp(&self) -> Self {
        AMatrix {
            descriptor: self.descriptor.clone(),
            n: self.n,
            entries: self.entries.iter().map(|e| e.exp_element()).collect(),
        }
    }

    /// Flattens along `M_n(⊕_k M_{d_k}) ≅ ⊕_k M_{n·d_k}`: summand `k` of the
    /// result has `(i·d_k + r, j·d_k + s)` entry equal to entry `(i,j)`,
    /// summand `k`, coordinate `(r,s)`.
    pub fn flatten(&self) -> AlgebraElement<T> {
        assert!(self.n >= 1, "cannot flatten an empty block matrix");
        let dims = self.descriptor.block_dims();
        let inflated = self
            .descriptor
            .inflate(self.n)
            .expect("inflate of valid descriptor");
        let mut blocks = Vec::with_capacity(dims.len());
        for (k, &d) in dims.iter().enumerate() {
            let side = self.n * d;
            let mut b = CMatrix::zeros(side, side);
            for i in 0..self.n {
                for j in 0..self.n {
                    let small = self.entry(i, j).block(k);
                    for r in 0..d {
                        for s in 0..d {
                            b[(i * d + r, j * d + s)] = small[(r, s)];
                        }
                    }
                }
            }
            blocks.push(b);
        }
        AlgebraElement {
            descriptor: inflated,
            blocks,
        }
    }

    /// Positivity of the block matrix, decided on the flattened summands.
    pub fn positivity(&self, tol: &Tolerance<T>) -> SpectralCheck<T> {
        if self.n == 0 {
            return SpectralCheck {
                passed: true,
                hermitian_residual: T::zero(),
                min_eigenvalue: T::zero(),
                min_summand: 0,
                scale: T::zero(),
                threshold: tol.effective(T::zero()),
            };
        }
        self.flatten().positivity(tol)
    }

    pub fn is_positive(&self, tol: &Tolerance<T>) -> bool {
        self.positivity(tol).passed
    }

    /// Compression by a scalar `n × m` matrix `V`:
    /// `out_{jk} = Σ_{i,l} conj(V_{ij}) · M_{il} · V_{lk}`.
    ///
    /// Scalar coefficients commute with the entries, so this is the
    /// two-sided compression `(V ⊗ 1_A)* M (V ⊗ 1_A)`.
    pub fn scalar_compress(&self, v: &CMatrix<T>) -> Self {
        assert_eq!(v.rows(), self.n, "compression row count must match side");
        let m = v.cols();
        AMatrix::from_fn(&self.descriptor, m, |j, k| {
            let mut acc = AlgebraElement::zero(&self.descriptor);
            for i in 0..self.n {
                let vij = v[(i, j)].conj();
                if vij.norm_sqr() == T::zero() {
                    continue;
                }
                for l in 0..self.n {
                    let vlk = v[(l, k)];
                    if vlk.norm_sqr() == T::zero() {
                        continue;
                    }
                    acc = acc
                        .add(&self.entry(i, l).scale(vij * vlk))
                        .expect("same descriptor");
                }
            }
            acc
        })
    }
}
