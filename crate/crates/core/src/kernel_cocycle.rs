//! The kernel associated to a negative definite function, and the
//! finite-dimensional Hilbert-module model built from it.
//!
//! For `ψ: G → A` and an action `α`, the kernel
//! `γ(g, h) = ψ(g)* + ψ(h) − ψ(e) − α_g(ψ(g⁻¹h))`
//! is positive (as a `G×G` block matrix) exactly when `ψ` is α-negative
//! definite. For a normalised `ψ` with self-adjoint values, the
//! half-normalised kernel `γ(g, h) = ½(ψ(g) + ψ(h) − α_g(ψ(g⁻¹h)))` is the
//! Gram matrix of a cocycle: the module `X` is the span of formal symbols
//! `c(g)` over `A` with `⟨c(g), c(h)⟩ = γ(g, h)`, carrying the isometries
//! `u_g(Σ c(k)·a_k) = Σ (c(gk) − c(g))·α_g(a_k)`,
//! and `ψ(g) = ⟨c(g), c(g)⟩` recovers the function.
//!
//! Vectors are kept as coefficient functions `G → A`; every comparison is
//! made in the inner-product seminorm, so the null space of the Gram
//! matrix is quotiented out implicitly and the completion never has to be
//! materialised (the module here is finitely generated, so it is already
//! complete).

use crate::algebra::{AlgebraDescriptor, AlgebraElement, AMatrix, Tolerance};
use crate::definiteness::{GroupFunction, Verdict};
use crate::error::Error;
use crate::group::FiniteGroup;
use crate::group_action::Action;
use crate::report::CheckReport;
use crate::Real;

/// An `A`-valued kernel on `G × G`, stored over the full enumeration of
/// the group in table order.
#[derive(Clone, Debug)]
pub struct Kernel<T> {
    group: FiniteGroup,
    matrix: AMatrix<T>,
}

impl<T: Real> Kernel<T> {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrix(&self) -> &AMatrix<T> {
        &self.matrix
    }

    pub fn entry(&self, g: usize, h: usize) -> &AlgebraElement<T> {
        self.matrix.entry(g, h)
    }
}

/// Builds the kernel associated to `f`.
///
/// With `half_normalized = false` this is
/// `γ(g, h) = f(g)* + f(h) − f(e) − α_g(f(g⁻¹h))`, defined for any `f`.
/// With `half_normalized = true` it is
/// `γ(g, h) = ½(f(g) + f(h) − α_g(f(g⁻¹h)))`, which requires `f(e) = 0`
/// and self-adjoint values (checked against the default tolerance); under
/// those conditions the two kernels agree up to the factor `½`.
pub fn gamma_kernel<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    half_normalized: bool,
) -> Result<Kernel<T>, Error> {
    let group = f.group().clone();
    let e = group.identity();
    let fe = f.value(e).clone();
    if half_normalized {
        let tol = Tolerance::default();
        let thr = tol.effective(f.sup_norm());
        let id_norm = fe.op_norm();
        if id_norm > thr {
            return Err(Error::domain("gamma_kernel", "f(e) = 0", id_norm));
        }
        let sa = f
            .values()
            .iter()
            .map(|v| v.self_adjoint_residual())
            .fold(T::zero(), |a, b| a.max(b));
        if sa > thr {
            return Err(Error::domain("gamma_kernel", "f(g) self-adjoint", sa));
        }
    }
    let half = T::from_f64_lit(0.5);
    let matrix = AMatrix::from_fn(f.descriptor(), group.order(), |g, h| {
        let translated = action.apply(g, f.value(group.mul(group.inv(g), h)));
        if half_normalized {
            f.value(g)
                .add(f.value(h))
                .and_then(|s| s.sub(&translated))
                .expect("same descriptor")
                .scale_re(half)
        } else {
            f.value(g)
                .adjoint()
                .add(f.value(h))
                .and_then(|s| s.sub(&fe))
                .and_then(|s| s.sub(&translated))
                .expect("same descriptor")
        }
    });
    Ok(Kernel { group, matrix })
}

/// Positivity of the kernel as a block matrix in `M_{|G|}(A)`.
pub fn kernel_is_positive<T: Real>(kernel: &Kernel<T>, tol: &Tolerance<T>) -> Verdict<T> {
    Verdict::from_spectral(&kernel.matrix.positivity(tol))
}

/// A vector in the module model: the coefficient function of
/// `Σ_g c(g)·x(g)`.
#[derive(Clone, Debug)]
pub struct ModuleVector<T> {
    coeffs: Vec<AlgebraElement<T>>,
}

impl<T: Real> ModuleVector<T> {
    pub fn coeffs(&self) -> &[AlgebraElement<T>] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::ShapeMismatch {
                op: "module add",
                detail: "coefficient lengths differ".into(),
            });
        }
        let coeffs: Result<Vec<_>, _> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(ModuleVector { coeffs: coeffs? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.scale_re(-T::one()))
    }

    pub fn scale_re(&self, t: T) -> Self {
        ModuleVector {
            coeffs: self.coeffs.iter().map(|c| c.scale_re(t)).collect(),
        }
    }

    /// Right module action `x · a`.
    pub fn mul_right(&self, a: &AlgebraElement<T>) -> Result<Self, Error> {
        let coeffs: Result<Vec<_>, _> = self.coeffs.iter().map(|c| c.mul(a)).collect();
        Ok(ModuleVector { coeffs: coeffs? })
    }
}

/// The module model for a normalised negative definite function with
/// self-adjoint values: Gram matrix, cocycle, and group action.
#[derive(Clone, Debug)]
pub struct ModuleRep<T> {
    action: Action<T>,
    gram: AMatrix<T>,
    quotient_rank: usize,
}

/// Builds the module model for `f`.
///
/// Preconditions, each verified against `tol`: `f(e) = 0`, all values
/// self-adjoint, and `f` α-negative definite (via kernel positivity).
/// Positivity of the values is then automatic from the pointwise lower
/// bound satisfied by negative definite functions, so it is not checked
/// separately.
pub fn build_module<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    tol: &Tolerance<T>,
) -> Result<ModuleRep<T>, Error> {
    let thr = tol.effective(f.sup_norm());
    let e = f.group().identity();
    let id_norm = f.value(e).op_norm();
    if id_norm > thr {
        return Err(Error::domain("build_module", "f(e) = 0", id_norm));
    }
    let sa = f
        .values()
        .iter()
        .map(|v| v.self_adjoint_residual())
        .fold(T::zero(), |a, b| a.max(b));
    if sa > thr {
        return Err(Error::domain("build_module", "f(g) self-adjoint", sa));
    }
    let kernel = gamma_kernel(f, action, true)?;
    let pos = kernel_is_positive(&kernel, tol);
    if !pos.passed {
        return Err(Error::domain(
            "build_module",
            "f negative definite (kernel positive)",
            pos.residual,
        ));
    }

    let flat = kernel.matrix.flatten();
    let eigs: Vec<T> = flat
        .blocks()
        .iter()
        .flat_map(|b| b.hermitian_eigenvalues())
        .collect();
    let top = eigs
        .iter()
        .fold(T::zero(), |a, &b| a.max(b));
    let rank_thr = tol.effective(top);
    let quotient_rank = eigs.iter().filter(|&&l| l > rank_thr).count();

    Ok(ModuleRep {
        action: action.clone(),
        gram: kernel.matrix,
        quotient_rank,
    })
}

impl<T: Real> ModuleRep<T> {
    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        self.action.descriptor()
    }

    /// Gram matrix `[⟨c(g), c(h)⟩]` over the group enumeration.
    pub fn gram(&self) -> &AMatrix<T> {
        &self.gram
    }

    /// Rank of the Gram matrix, i.e. the dimension of the quotient
    /// `X₀ / N` as a complex vector space.
    pub fn quotient_rank(&self) -> usize {
        self.quotient_rank
    }

    pub fn zero_vector(&self) -> ModuleVector<T> {
        ModuleVector {
            coeffs: vec![
                AlgebraElement::zero(self.descriptor());
                self.group().order()
            ],
        }
    }

    /// The cocycle vector `c(g)`.
    pub fn cocycle(&self, g: usize) -> ModuleVector<T> {
        let mut v = self.zero_vector();
        v.coeffs[g] = AlgebraElement::unit(self.descriptor());
        v
    }

    /// `⟨x, y⟩ = Σ_{g,h} x(g)* γ(g,h) y(h)`.
    pub fn inner(&self, x: &ModuleVector<T>, y: &ModuleVector<T>) -> AlgebraElement<T> {
        let n = self.group().order();
        assert_eq!(x.coeffs.len(), n, "vector over the wrong group");
        assert_eq!(y.coeffs.len(), n, "vector over the wrong group");
        let mut acc = AlgebraElement::zero(self.descriptor());
        for g in 0..n {
            for h in 0..n {
                let term = x.coeffs[g]
                    .adjoint()
                    .mul(self.gram.entry(g, h))
                    .and_then(|t| t.mul(&y.coeffs[h]))
                    .expect("same descriptor");
                acc = acc.add(&term).expect("same descriptor");
            }
        }
        acc
    }

    /// The seminorm `‖x‖ = ‖⟨x, x⟩‖^{1/2}` of the quotient module.
    pub fn vector_norm(&self, x: &ModuleVector<T>) -> T {
        self.inner(x, x).op_norm().max(T::zero()).sqrt()
    }

    /// Distance in the seminorm; vectors differing by a null vector are at
    /// distance zero.
    pub fn distance(&self, x: &ModuleVector<T>, y: &ModuleVector<T>) -> T {
        let d = x.sub(y).expect("same group");
        self.vector_norm(&d)
    }

    /// The isometry `u_g`: shifts coefficients along the translated
    /// symbols `c(gk) − c(g)` and twists them by `α_g`.
    pub fn u_action(&self, g: usize, x: &ModuleVector<T>) -> ModuleVector<T> {
        let group = self.group();
        let n = group.order();
        assert_eq!(x.coeffs.len(), n, "vector over the wrong group");
        let mut out = self.zero_vector();
        let mut total = AlgebraElement::zero(self.descriptor());
        for k in 0..n {
            let moved = self.action.apply(g, &x.coeffs[k]);
            total = total.add(&moved).expect("same descriptor");
            let idx = group.mul(g, k);
            out.coeffs[idx] = out.coeffs[idx].add(&moved).expect("same descriptor");
        }
        out.coeffs[g] = out.coeffs[g].sub(&total).expect("same descriptor");
        out
    }

    /// Recovers the function from the cocycle: `g ↦ ⟨c(g), c(g)⟩`.
    pub fn reconstruct(&self) -> GroupFunction<T> {
        GroupFunction::from_fn(self.group().clone(), self.descriptor().clone(), |g| {
            self.gram.entry(g, g).clone()
        })
    }

    /// The coboundary function `ψ(g) = ⟨u_g x − x, u_g x − x⟩`.
    ///
    /// Requires `⟨x, u_g x⟩` self-adjoint for every `g` (so that the
    /// cocycle `g ↦ u_g x − x` is symmetric); the result is then a
    /// normalised negative definite function with self-adjoint values.
    pub fn coboundary(
        &self,
        x: &ModuleVector<T>,
        tol: &Tolerance<T>,
    ) -> Result<GroupFunction<T>, Error> {
        let scale = self.inner(x, x).op_norm();
        let thr = tol.effective(scale);
        let mut worst = T::zero();
        for g in self.group().elements() {
            let cross = self.inner(x, &self.u_action(g, x));
            worst = worst.max(cross.self_adjoint_residual());
        }
        if worst > thr {
            return Err(Error::domain(
                "coboundary",
                "⟨x, u_g x⟩ self-adjoint for all g",
                worst,
            ));
        }
        let values: Vec<_> = self
            .group()
            .elements()
            .map(|g| {
                let d = self.u_action(g, x).sub(x).expect("same group");
                self.inner(&d, &d)
            })
            .collect();
        GroupFunction::new(self.group().clone(), self.descriptor().clone(), values)
    }

    /// Verifies the structural identities of the model against `f`, in the
    /// inner-product seminorm where vectors are compared:
    /// reconstruction, kernel symmetry, the cocycle identity, the group
    /// law and identity action, α-equivariance of inner products, the
    /// bimodule twist, and (when `f` is central) centrality of the Gram
    /// entries.
    pub fn verify(&self, f: &GroupFunction<T>, tol: &Tolerance<T>) -> CheckReport<T> {
        let group = self.group().clone();
        let n = group.order();
        let scale = f.sup_norm().max(T::one());
        let thr = tol.effective(scale);
        let mut report = CheckReport::new();

        let mut rec = T::zero();
        for g in 0..n {
            let diff = self
                .gram
                .entry(g, g)
                .sub(f.value(g))
                .expect("same descriptor");
            rec = rec.max(diff.op_norm());
        }
        report.push("reconstruction", rec <= thr, rec);

        let mut sym = T::zero();
        for g in 0..n {
            for h in 0..n {
                let diff = self
                    .gram
                    .entry(g, h)
                    .sub(&self.gram.entry(h, g).adjoint())
                    .expect("same descriptor");
                sym = sym.max(diff.op_norm());
            }
        }
        report.push("kernel_symmetry", sym <= thr, sym);

        let mut coc = T::zero();
        for g in 0..n {
            for h in 0..n {
                let lhs = self.cocycle(group.mul(g, h));
                let rhs = self
                    .cocycle(g)
                    .add(&self.u_action(g, &self.cocycle(h)))
                    .expect("same group");
                coc = coc.max(self.distance(&lhs, &rhs));
            }
        }
        report.push("cocycle_identity", coc <= thr, coc);

        let mut law = T::zero();
        let mut ide = T::zero();
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let x = self.cocycle(k);
                    let two = self.u_action(g, &self.u_action(h, &x));
                    let one = self.u_action(group.mul(g, h), &x);
                    law = law.max(self.distance(&two, &one));
                }
            }
            let x = self.cocycle(g);
            ide = ide.max(self.distance(&self.u_action(group.identity(), &x), &x));
        }
        report.push("group_law", law <= thr, law);
        report.push("identity_action", ide <= thr, ide);

        let mut equ = T::zero();
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let x = self.cocycle(h);
                    let y = self.cocycle(k);
                    let lhs = self.inner(&self.u_action(g, &x), &self.u_action(g, &y));
                    let rhs = self.action.apply(g, &self.inner(&x, &y));
                    equ = equ.max(lhs.sub(&rhs).expect("same descriptor").op_norm());
                }
            }
        }
        report.push("equivariance", equ <= thr, equ);

        let units = crate::algebra::matrix_units::<T>(self.descriptor());
        let mut bim = T::zero();
        for g in 0..n {
            for h in 0..n {
                for a in &units {
                    let x = self.cocycle(h);
                    let lhs = self.u_action(g, &x.mul_right(a).expect("same descriptor"));
                    let rhs = self
                        .u_action(g, &x)
                        .mul_right(&self.action.apply(g, a))
                        .expect("same descriptor");
                    bim = bim.max(self.distance(&lhs, &rhs));
                }
            }
        }
        report.push("bimodule_twist", bim <= thr, bim);

        if f.is_central(tol) {
            let mut cen = T::zero();
            for g in 0..n {
                for h in 0..n {
                    cen = cen.max(self.gram.entry(g, h).central_residual());
                }
            }
            report.push("central_cocycle", cen <= thr, cen);
        }

        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_action::BlockAutomorphism;
    use crate::linalg::CMatrix;
    use num_complex::Complex;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn scalar_nd(group: &FiniteGroup, vals: &[f64]) -> (GroupFunction<f64>, Action<f64>) {
        let d = AlgebraDescriptor::new(vec![1]).unwrap();
        let scalars: Vec<Complex<f64>> = vals.iter().map(|&v| Complex::new(v, 0.0)).collect();
        let f = GroupFunction::lift_scalar(group.clone(), &d, &scalars).unwrap();
        let a = Action::trivial(group.clone(), d);
        (f, a)
    }

    /// Sign-flip action of Z₂ on M₂ by Ad(diag(1, −1)).
    fn sign_flip() -> Action<f64> {
        let g = FiniteGroup::cyclic(2);
        let d = AlgebraDescriptor::new(vec![2]).unwrap();
        let u = CMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                Complex::new(0.0, 0.0)
            } else if i == 0 {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(-1.0, 0.0)
            }
        });
        Action::new(
            g,
            d.clone(),
            vec![
                BlockAutomorphism::<f64>::identity(&d),
                BlockAutomorphism {
                    block_perm: vec![0],
                    unitaries: vec![u],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn gamma_kernel_z2_oracle() {
        let g = FiniteGroup::cyclic(2);
        let (f, a) = scalar_nd(&g, &[0.0, 0.7]);
        let full = gamma_kernel(&f, &a, false).unwrap();
        // γ = [[0, 0], [0, 2c]] for ψ = (0, c).
        assert!(full.entry(0, 0).op_norm() < 1e-15);
        assert!(full.entry(0, 1).op_norm() < 1e-15);
        assert!(full.entry(1, 0).op_norm() < 1e-15);
        assert!((full.entry(1, 1).block(0)[(0, 0)].re - 1.4).abs() < 1e-15);

        let half = gamma_kernel(&f, &a, true).unwrap();
        assert!((half.entry(1, 1).block(0)[(0, 0)].re - 0.7).abs() < 1e-15);
        assert!(kernel_is_positive(&half, &tol()).passed);
    }

    #[test]
    fn half_kernel_requires_normalisation() {
        let g = FiniteGroup::cyclic(2);
        let (f, a) = scalar_nd(&g, &[1.0, 2.0]);
        assert!(gamma_kernel(&f, &a, true).is_err());
    }

    #[test]
    fn module_on_cosine_function() {
        let n = 4;
        let g = FiniteGroup::cyclic(n);
        let vals: Vec<f64> = (0..n)
            .map(|k| 1.0 - (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
            .collect();
        let (f, a) = scalar_nd(&g, &vals);
        let m = build_module(&f, &a, &tol()).unwrap();
        let report = m.verify(&f, &tol());
        assert!(report.all_passed(), "{report:?}");
        assert!(report.worst_residual() < 1e-12);
        // ψ(g) = ‖c(g)‖² must match the input values.
        let rec = m.reconstruct();
        assert!(rec.distance(&f).unwrap() < 1e-14);
    }

    #[test]
    fn module_with_noncentral_values() {
        let a = sign_flip();
        let g = a.group().clone();
        let d = a.descriptor().clone();
        let mut v1 = AlgebraElement::zero(&d);
        v1.block_mut(0)[(0, 0)] = Complex::new(1.0, 0.0);
        v1.block_mut(0)[(1, 1)] = Complex::new(2.0, 0.0);
        let f = GroupFunction::new(g, d, vec![AlgebraElement::zero(a.descriptor()), v1]).unwrap();
        assert!(crate::definiteness::is_alpha_nd_direct(&f, &a, &tol()).passed);

        let m = build_module(&f, &a, &tol()).unwrap();
        assert_eq!(m.quotient_rank(), 2);
        let report = m.verify(&f, &tol());
        assert!(report.all_passed(), "{report:?}");

        // u₁c(1) = c(0) − c(1) in coefficients.
        let moved = m.u_action(1, &m.cocycle(1));
        let expect = m.cocycle(0).sub(&m.cocycle(1)).unwrap();
        for (got, want) in moved.coeffs().iter().zip(expect.coeffs()) {
            assert!(got.sub(want).unwrap().op_norm() < 1e-15);
        }
    }

    #[test]
    fn null_vectors_have_zero_seminorm() {
        let g = FiniteGroup::cyclic(2);
        let (f, a) = scalar_nd(&g, &[0.0, 1.0]);
        let m = build_module(&f, &a, &tol()).unwrap();
        // c(e) is a null vector: ⟨c(e), c(e)⟩ = γ(e, e) = 0.
        assert!(m.vector_norm(&m.cocycle(0)) < 1e-15);
        assert_eq!(m.quotient_rank(), 1);
    }

    #[test]
    fn coboundary_is_negative_definite() {
        let n = 4;
        let g = FiniteGroup::cyclic(n);
        let vals: Vec<f64> = (0..n)
            .map(|k| 1.0 - (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
            .collect();
        let (f, a) = scalar_nd(&g, &vals);
        let m = build_module(&f, &a, &tol()).unwrap();
        let x = m
            .cocycle(1)
            .scale_re(1.5)
            .add(&m.cocycle(2).scale_re(-0.5))
            .unwrap();
        let psi = m.coboundary(&x, &tol()).unwrap();
        assert!(psi.value(0).op_norm() < 1e-14);
        assert!(crate::definiteness::is_alpha_nd_direct(&psi, &a, &tol()).passed);
        assert!(crate::definiteness::is_alpha_nd_gamma(&psi, &a, &tol()).passed);
    }

    #[test]
    fn coboundary_on_z2_oracle() {
        let g = FiniteGroup::cyclic(2);
        let (f, a) = scalar_nd(&g, &[0.0, 2.0]);
        let m = build_module(&f, &a, &tol()).unwrap();
        let x = m.cocycle(1);
        // u₁x − x = c(0) − 2c(1), whose squared length is 4γ(1,1) = 8.
        let psi = m.coboundary(&x, &tol()).unwrap();
        assert!(psi.value(0).op_norm() < 1e-15);
        assert!((psi.value(1).block(0)[(0, 0)].re - 8.0).abs() < 1e-13);
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let g = FiniteGroup::cyclic(2);
        let (not_normalized, a) = scalar_nd(&g, &[1.0, 2.0]);
        assert!(build_module(&not_normalized, &a, &tol()).is_err());
        let (not_nd, a2) = scalar_nd(&g, &[0.0, -1.0]);
        assert!(build_module(&not_nd, &a2, &tol()).is_err());
    }
}
