//! Positive and negative definite functions `G → A` relative to an action.
//!
//! A function `φ` is α-positive definite when the block matrix
//! `[α_{g_i}(φ(g_i⁻¹g_j))]_{ij}` is positive for every tuple of group
//! elements. A function `ψ` is α-negative definite when it satisfies the
//! symmetry condition `α_g(ψ(g⁻¹)) = ψ(g)*` and the quadratic form
//! `Σ_{ij} b_i* α_{g_i}(ψ(g_i⁻¹g_j)) b_j` is `≤ 0` whenever the algebra
//! coefficients satisfy `Σ_i b_i = 0`.
//!
//! Both quantifiers over tuples collapse to a single canonical matrix
//! indexed by all of `G`: given a tuple `(g_{i_1}, …, g_{i_m})` with
//! coefficients `(b_1, …, b_m)`, summing coefficients that share a group
//! element produces coefficients `(c_g)_{g∈G}` with the same quadratic form
//! and the same sum; conversely every `G`-indexed tuple is a tuple. For
//! repeated entries this aggregation is the compression by a 0/1 selection
//! matrix, so positivity of the canonical matrix decides all tuples at
//! once.
//!
//! The sum-zero constraint is then removed by a change of basis: the
//! sum-zero submodule of `A^n` is spanned over `A` by the differences
//! `e_j − e_n` (`j < n`), since `Σ b_i = 0` forces
//! `b = Σ_{j<n} (e_j − e_n)·b_j`. Writing `V` for the `n×(n−1)` matrix with
//! those columns, negativity of the form on sum-zero tuples is exactly
//! positivity of `−(V ⊗ 1)* M (V ⊗ 1)` in `M_{n−1}(A)`.

use crate::algebra::{AlgebraDescriptor, AlgebraElement, AMatrix, SpectralCheck, Tolerance};
use crate::error::Error;
use crate::group::FiniteGroup;
use crate::group_action::{Action, State};
use crate::linalg::CMatrix;
use crate::Real;
use num_complex::Complex;
use serde::Serialize;

/// Function `G → A`, stored as one algebra element per group element in
/// table order.
#[derive(Clone, Debug)]
pub struct GroupFunction<T> {
    group: FiniteGroup,
    descriptor: AlgebraDescriptor,
    values: Vec<AlgebraElement<T>>,
}

/// Outcome of a definiteness check.
///
/// `residual` is the worst signed violation across the component checks:
/// for spectral components it is `−λ_min` of the tested matrix, for
/// identity-style components the operator-norm deviation. The verdict
/// passes iff `residual ≤ threshold`, so a residual in `(−∞, threshold]`
/// (in particular slightly negative) passes.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict<T> {
    pub passed: bool,
    pub residual: T,
    pub threshold: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness<T>>,
}

/// What failed, and where, for a failed [`Verdict`].
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum Witness<T> {
    /// A flattened summand of the tested block matrix has a negative
    /// eigenvalue below the threshold.
    NegativeEigenvalue { summand: usize, eigenvalue: T },
    /// The tested block matrix is not self-adjoint.
    NotSelfAdjoint { residual: T },
    /// `α_g(f(g⁻¹)) ≠ f(g)*` at the named element.
    SymmetryViolation { element: usize, residual: T },
    /// `f(e)` fails positivity.
    UnitValueNotPositive { eigenvalue: T },
    /// A value is not central where centrality is required.
    NotCentral { element: usize, residual: T },
    /// The displayed inequality fails at the named element.
    InequalityViolation { element: usize, residual: T },
}

impl<T: Real> Verdict<T> {
    fn pass(residual: T, threshold: T) -> Self {
        Verdict {
            passed: true,
            residual,
            threshold,
            witness: None,
        }
    }

    fn fail(residual: T, threshold: T, witness: Witness<T>) -> Self {
        Verdict {
            passed: false,
            residual,
            threshold,
            witness: Some(witness),
        }
    }

    /// Combines component verdicts: passes iff all pass; reports the worst
    /// scaled violation.
    pub fn combine(parts: Vec<Verdict<T>>) -> Verdict<T> {
        let mut worst: Option<Verdict<T>> = None;
        for p in parts {
            let margin = p.residual - p.threshold;
            let replace = match &worst {
                None => true,
                Some(w) => margin > w.residual - w.threshold,
            };
            if replace {
                worst = Some(p);
            }
        }
        worst.unwrap_or_else(|| Verdict::pass(T::zero(), T::zero()))
    }

    pub(crate) fn from_spectral(check: &SpectralCheck<T>) -> Verdict<T> {
        let residual = (-check.min_eigenvalue).max(check.hermitian_residual);
        if check.passed {
            Verdict::pass(residual, check.threshold)
        } else if check.hermitian_residual > check.threshold {
            Verdict::fail(
                residual,
                check.threshold,
                Witness::NotSelfAdjoint {
                    residual: check.hermitian_residual,
                },
            )
        } else {
            Verdict::fail(
                residual,
                check.threshold,
                Witness::NegativeEigenvalue {
                    summand: check.min_summand,
                    eigenvalue: check.min_eigenvalue,
                },
            )
        }
    }
}

/// Which coefficient tuples the direct negative definiteness check
/// quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientClass {
    /// All sum-zero tuples with arbitrary algebra coefficients.
    All,
    /// Only sum-zero tuples with central coefficients. This is a strictly
    /// weaker requirement; no structural theory is attached to it and for
    /// summand dimension ≥ 2 the check samples directions (a reported
    /// violation is definite, a pass certifies the sampled directions).
    Central,
}

impl<T: Real> GroupFunction<T> {
    pub fn new(
        group: FiniteGroup,
        descriptor: AlgebraDescriptor,
        values: Vec<AlgebraElement<T>>,
    ) -> Result<Self, Error> {
        if values.len() != group.order() {
            return Err(Error::ShapeMismatch {
                op: "group function",
                detail: format!(
                    "need {} values, got {}",
                    group.order(),
                    values.len()
                ),
            });
        }
        for (g, v) in values.iter().enumerate() {
            if v.descriptor() != &descriptor {
                return Err(Error::ShapeMismatch {
                    op: "group function",
                    detail: format!("value at element {g} has a different descriptor"),
                });
            }
        }
        Ok(GroupFunction {
            group,
            descriptor,
            values,
        })
    }

    pub fn from_fn(
        group: FiniteGroup,
        descriptor: AlgebraDescriptor,
        mut f: impl FnMut(usize) -> AlgebraElement<T>,
    ) -> Self {
        let values = group.elements().map(&mut f).collect();
        Self::new(group, descriptor, values).expect("values built per element")
    }

    /// Constant function `g ↦ x`.
    pub fn constant(group: FiniteGroup, x: AlgebraElement<T>) -> Self {
        let descriptor = x.descriptor().clone();
        Self::from_fn(group, descriptor, |_| x.clone())
    }

    /// Scalar function times the unit: `g ↦ f(g)·1_A`.
    pub fn lift_scalar(
        group: FiniteGroup,
        descriptor: &AlgebraDescriptor,
        scalars: &[Complex<T>],
    ) -> Result<Self, Error> {
        if scalars.len() != group.order() {
            return Err(Error::ShapeMismatch {
                op: "lift_scalar",
                detail: format!("need {} scalars, got {}", group.order(), scalars.len()),
            });
        }
        let values = scalars
            .iter()
            .map(|&z| AlgebraElement::unit(descriptor).scale(z))
            .collect();
        Self::new(group, descriptor.clone(), values)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn value(&self, g: usize) -> &AlgebraElement<T> {
        &self.values[g]
    }

    pub fn values(&self) -> &[AlgebraElement<T>] {
        &self.values
    }

    /// `max_g ‖f(g)‖`.
    pub fn sup_norm(&self) -> T {
        self.values
            .iter()
            .map(|v| v.op_norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.group != other.group {
            return Err(Error::ShapeMismatch {
                op: "function add",
                detail: "different groups".into(),
            });
        }
        let values: Result<Vec<_>, _> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.add(b))
            .collect();
        Self::new(self.group.clone(), self.descriptor.clone(), values?)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.scale_re(-T::one()))
    }

    /// Pointwise real scaling. Cone membership (positive or negative
    /// definiteness) is preserved only for `t ≥ 0`.
    pub fn scale_re(&self, t: T) -> Self {
        GroupFunction {
            group: self.group.clone(),
            descriptor: self.descriptor.clone(),
            values: self.values.iter().map(|v| v.scale_re(t)).collect(),
        }
    }

    /// Pointwise adjoint `g ↦ f(g)*`.
    pub fn conj_function(&self) -> Self {
        GroupFunction {
            group: self.group.clone(),
            descriptor: self.descriptor.clone(),
            values: self.values.iter().map(|v| v.adjoint()).collect(),
        }
    }

    /// Pointwise real part `g ↦ (f(g) + f(g)*)/2`.
    pub fn re_part(&self) -> Self {
        GroupFunction {
            group: self.group.clone(),
            descriptor: self.descriptor.clone(),
            values: self.values.iter().map(|v| v.re_part()).collect(),
        }
    }

    /// Pointwise product `g ↦ f(g)·h(g)`.
    pub fn pointwise_product(&self, other: &Self) -> Result<Self, Error> {
        if self.group != other.group {
            return Err(Error::ShapeMismatch {
                op: "pointwise_product",
                detail: "different groups".into(),
            });
        }
        let values: Result<Vec<_>, _> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.mul(b))
            .collect();
        Self::new(self.group.clone(), self.descriptor.clone(), values?)
    }

    /// `max_g` distance of `f(g)` from the centre.
    pub fn central_residual(&self) -> T {
        self.values
            .iter()
            .map(|v| v.central_residual())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn is_central(&self, tol: &Tolerance<T>) -> bool {
        self.central_residual() <= tol.effective(self.sup_norm())
    }

    /// Pointwise centre expectation `g ↦ E(f(g))`.
    pub fn center_expectation(&self) -> Self {
        GroupFunction {
            group: self.group.clone(),
            descriptor: self.descriptor.clone(),
            values: self.values.iter().map(|v| v.center_expectation()).collect(),
        }
    }

    /// Pushes the function to scalars through a state: `g ↦ ω(f(g))`.
    pub fn state_push(&self, state: &State<T>) -> Vec<Complex<T>> {
        self.values.iter().map(|v| state.eval(v)).collect()
    }

    /// `max_g ‖α_g(f(g⁻¹)) − f(g)*‖` together with the element attaining it.
    pub fn symmetry_residual(&self, action: &Action<T>) -> (T, usize) {
        let mut worst = T::zero();
        let mut at = self.group.identity();
        for g in self.group.elements() {
            let lhs = action.apply(g, &self.values[self.group.inv(g)]);
            let rhs = self.values[g].adjoint();
            let r = lhs.sub(&rhs).expect("same descriptor").op_norm();
            if r > worst {
                worst = r;
                at = g;
            }
        }
        (worst, at)
    }

    /// Distance `max_g ‖f(g) − h(g)‖`.
    pub fn distance(&self, other: &Self) -> Result<T, Error> {
        Ok(self.sub(other)?.sup_norm())
    }
}

/// Canonical positive definiteness matrix `[α_{g_i}(f(g_i⁻¹g_j))]` over the
/// full enumeration of `G` in table order.
pub fn pd_block_matrix<T: Real>(f: &GroupFunction<T>, action: &Action<T>) -> AMatrix<T> {
    let group = f.group();
    let n = group.order();
    AMatrix::from_fn(f.descriptor(), n, |i, j| {
        action.apply(i, f.value(group.mul(group.inv(i), j)))
    })
}

/// α-positive definiteness: positivity of the canonical block matrix,
/// together with the consistency conditions `α_g(φ(g⁻¹)) = φ(g)*` and
/// `φ(e) ≥ 0` that a positive definite function must satisfy.
pub fn is_alpha_pd<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    tol: &Tolerance<T>,
) -> Verdict<T> {
    let m = pd_block_matrix(f, action);
    let spectral = Verdict::from_spectral(&m.positivity(tol));

    let scale = f.sup_norm();
    let thr = tol.effective(scale);
    let (sym_res, sym_at) = f.symmetry_residual(action);
    let sym = if sym_res <= thr {
        Verdict::pass(sym_res, thr)
    } else {
        Verdict::fail(
            sym_res,
            thr,
            Witness::SymmetryViolation {
                element: sym_at,
                residual: sym_res,
            },
        )
    };

    let unit_check = f.value(f.group().identity()).positivity(tol);
    let unit = if unit_check.passed {
        Verdict::pass(-unit_check.min_eigenvalue, unit_check.threshold)
    } else {
        Verdict::fail(
            (-unit_check.min_eigenvalue).max(unit_check.hermitian_residual),
            unit_check.threshold,
            Witness::UnitValueNotPositive {
                eigenvalue: unit_check.min_eigenvalue,
            },
        )
    };

    Verdict::combine(vec![spectral, sym, unit])
}

/// Columns `e_j − e_{n−1}`, `j < n−1`: an `A`-module basis of the sum-zero
/// submodule of `A^n`.
fn difference_basis<T: Real>(n: usize) -> CMatrix<T> {
    let mut v = CMatrix::zeros(n, n.saturating_sub(1));
    for j in 0..n.saturating_sub(1) {
        v[(j, j)] = Complex::new(T::one(), T::zero());
        v[(n - 1, j)] = Complex::new(-T::one(), T::zero());
    }
    v
}

/// Direct α-negative definiteness check: the symmetry condition plus
/// positivity of `−(V ⊗ 1)* M (V ⊗ 1)` for the canonical matrix `M` and the
/// difference basis `V` (see the module docs for why this single
/// compression decides all sum-zero tuples).
pub fn is_alpha_nd_direct<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    tol: &Tolerance<T>,
) -> Verdict<T> {
    is_alpha_nd_direct_for(f, action, tol, CoefficientClass::All)
}

/// Direct check quantified over the chosen coefficient class.
pub fn is_alpha_nd_direct_for<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    tol: &Tolerance<T>,
    class: CoefficientClass,
) -> Verdict<T> {
    let scale = f.sup_norm();
    let thr = tol.effective(scale);
    let (sym_res, sym_at) = f.symmetry_residual(action);
    // The symmetry condition is the first clause of the definition; when
    // it fails the quadratic-form clause is not meaningful, so report it
    // alone.
    if sym_res > thr {
        return Verdict::fail(
            sym_res,
            thr,
            Witness::SymmetryViolation {
                element: sym_at,
                residual: sym_res,
            },
        );
    }
    let sym = Verdict::pass(sym_res, thr);

    let n = f.group().order();
    if n == 1 {
        return sym;
    }
    let m = pd_block_matrix(f, action);
    let compressed = m.scalar_compress(&difference_basis::<T>(n)).neg();

    let form = match class {
        CoefficientClass::All => Verdict::from_spectral(&compressed.positivity(tol)),
        CoefficientClass::Central => central_block_positivity(&compressed, tol),
    };

    Verdict::combine(vec![sym, form])
}

/// Positivity of `Σ_{jl} conj(β_j) β_l C_{jl}` over scalar vectors `β` with
/// values central, decided summand by summand.
///
/// For a summand of dimension 1 this is ordinary positivity of the scalar
/// matrix. For dimension `d ≥ 2` it is positivity of the flattened summand
/// on product vectors `β ⊗ v`, which is tested on a deterministic grid of
/// unit directions `v`; see [`CoefficientClass::Central`] for the
/// certification caveat.
fn central_block_positivity<T: Real>(c: &AMatrix<T>, tol: &Tolerance<T>) -> Verdict<T> {
    let n = c.side();
    let flat = c.flatten();
    let thr = tol.effective(flat.op_norm());
    let herm = flat.self_adjoint_residual();
    if herm > thr {
        return Verdict::fail(herm, thr, Witness::NotSelfAdjoint { residual: herm });
    }

    let mut worst_min = T::infinity();
    let mut worst_summand = 0;
    for (k, &d) in c.descriptor().block_dims().iter().enumerate() {
        let min_here = if d == 1 {
            let s = CMatrix::from_fn(n, n, |j, l| c.entry(j, l).block(k)[(0, 0)]);
            s.hermitian_eigenvalues().first().copied().unwrap_or(T::zero())
        } else {
            let mut min_dir = T::infinity();
            for v in direction_grid::<T>(d) {
                let s = CMatrix::from_fn(n, n, |j, l| {
                    let b = c.entry(j, l).block(k);
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for r in 0..d {
                        for t in 0..d {
                            acc += v[r].conj() * b[(r, t)] * v[t];
                        }
                    }
                    acc
                });
                let lo = s.hermitian_eigenvalues().first().copied().unwrap_or(T::zero());
                min_dir = min_dir.min(lo);
            }
            min_dir
        };
        if min_here < worst_min {
            worst_min = min_here;
            worst_summand = k;
        }
    }
    if !worst_min.is_finite() {
        worst_min = T::zero();
    }
    if worst_min >= -thr {
        Verdict::pass(-worst_min, thr)
    } else {
        Verdict::fail(
            -worst_min,
            thr,
            Witness::NegativeEigenvalue {
                summand: worst_summand,
                eigenvalue: worst_min,
            },
        )
    }
}

/// Deterministic grid of unit directions in `ℂ^d`.
fn direction_grid<T: Real>(d: usize) -> Vec<Vec<Complex<T>>> {
    let mut out = Vec::new();
    if d == 2 {
        let steps_theta = 24;
        let steps_phi = 24;
        for a in 0..=steps_theta {
            let theta = T::FRAC_PI_2() * T::from_f64_lit(a as f64 / steps_theta as f64);
            for b in 0..steps_phi {
                let phi = T::from_f64_lit(2.0) * T::PI() * T::from_f64_lit(b as f64 / steps_phi as f64);
                out.push(vec![
                    Complex::new(theta.cos(), T::zero()),
                    Complex::from_polar(theta.sin(), phi),
                ]);
            }
        }
        return out;
    }
    // Coordinate directions plus quasi-random unit vectors from a fixed
    // linear congruential stream.
    for i in 0..d {
        let mut v = vec![Complex::new(T::zero(), T::zero()); d];
        v[i] = Complex::new(T::one(), T::zero());
        out.push(v);
    }
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        T::from_f64_lit(((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5)
    };
    for _ in 0..512 {
        let mut v: Vec<Complex<T>> = (0..d).map(|_| Complex::new(next(), next())).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        if norm > T::from_f64_lit(1e-6) {
            for z in v.iter_mut() {
                *z = *z / Complex::new(norm, T::zero());
            }
            out.push(v);
        }
    }
    out
}

/// The quadratic form `Σ_{ij} b_i* α_{g_i}(ψ(g_i⁻¹g_j)) b_j` for an
/// explicit tuple of group elements and algebra coefficients. Repeats are
/// allowed; no sum-zero constraint is imposed here.
pub fn quadratic_form<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    elements: &[usize],
    coeffs: &[AlgebraElement<T>],
) -> Result<AlgebraElement<T>, Error> {
    if elements.len() != coeffs.len() {
        return Err(Error::ShapeMismatch {
            op: "quadratic_form",
            detail: "tuple and coefficient lengths differ".into(),
        });
    }
    let group = f.group();
    let mut acc = AlgebraElement::zero(f.descriptor());
    for (i, &gi) in elements.iter().enumerate() {
        for (j, &gj) in elements.iter().enumerate() {
            let kernel = action.apply(gi, f.value(group.mul(group.inv(gi), gj)));
            let term = coeffs[i].adjoint().mul(&kernel)?.mul(&coeffs[j])?;
            acc = acc.add(&term)?;
        }
    }
    Ok(acc)
}

/// Negative definiteness via the associated kernel: positivity of
/// `[γ(g, h)]` over all of `G`, where
/// `γ(g, h) = ψ(g)* + ψ(h) − ψ(e) − α_g(ψ(g⁻¹h))`.
pub fn is_alpha_nd_gamma<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    tol: &Tolerance<T>,
) -> Verdict<T> {
    let kernel = crate::kernel_cocycle::gamma_kernel(f, action, false)
        .expect("full kernel has no domain conditions");
    crate::kernel_cocycle::kernel_is_positive(&kernel, tol)
}

/// Subtracts the value at the identity: `ψ₀ = ψ − ψ(e)`.
///
/// Requires `ψ(e)` self-adjoint and α-invariant within tol; under those
/// hypotheses `ψ` is α-negative definite iff `ψ₀` is, and `ψ₀(e) = 0`
/// exactly.
pub fn normalize<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    tol: &Tolerance<T>,
) -> Result<GroupFunction<T>, Error> {
    let e = f.group().identity();
    let fe = f.value(e);
    let thr = tol.effective(fe.op_norm());
    let sa = fe.self_adjoint_residual();
    if sa > thr {
        return Err(Error::domain("normalize", "f(e) self-adjoint", sa));
    }
    let inv = action.invariance_residual(fe);
    if inv > thr {
        return Err(Error::domain("normalize", "f(e) fixed by the action", inv));
    }
    let values: Result<Vec<_>, _> = f.values().iter().map(|v| v.sub(fe)).collect();
    GroupFunction::new(f.group().clone(), f.descriptor().clone(), values?)
}

/// `ψ = φ(e) − φ` for a positive definite `φ` with α-invariant `φ(e)`.
///
/// The result is normalised (`ψ(e) = 0` exactly) and α-negative definite.
pub fn one_minus<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    tol: &Tolerance<T>,
) -> Result<GroupFunction<T>, Error> {
    let pd = is_alpha_pd(f, action, tol);
    if !pd.passed {
        return Err(Error::domain(
            "one_minus",
            "input positive definite",
            pd.residual,
        ));
    }
    let e = f.group().identity();
    let fe = f.value(e);
    let inv = action.invariance_residual(fe);
    if inv > tol.effective(fe.op_norm()) {
        return Err(Error::domain("one_minus", "f(e) fixed by the action", inv));
    }
    let values: Result<Vec<_>, _> = f.values().iter().map(|v| fe.sub(v)).collect();
    GroupFunction::new(f.group().clone(), f.descriptor().clone(), values?)
}

/// Checks the pointwise lower bound
/// `Re ψ(g) ≥ ½·(ψ(e) + α_g(ψ(e)))`
/// satisfied by every α-negative definite function.
pub fn lower_bound_check<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    tol: &Tolerance<T>,
) -> Verdict<T> {
    let e = f.group().identity();
    let fe = f.value(e);
    let half = T::from_f64_lit(0.5);
    let mut worst = T::neg_infinity();
    let mut at = e;
    let thr = tol.effective(f.sup_norm());
    for g in f.group().elements() {
        let bound = fe
            .add(&action.apply(g, fe))
            .expect("same descriptor")
            .scale_re(half);
        let diff = f.value(g).re_part().sub(&bound).expect("same descriptor");
        let lo = diff
            .spectral_min(&Tolerance::absolute(T::infinity()))
            .expect("unchecked self-adjointness");
        if -lo > worst {
            worst = -lo;
            at = g;
        }
    }
    if worst <= thr {
        Verdict::pass(worst, thr)
    } else {
        Verdict::fail(
            worst,
            thr,
            Witness::InequalityViolation {
                element: at,
                residual: worst,
            },
        )
    }
}

/// Positive definite function from a vector in the regular `A`-module:
/// `h(g) = Σ_s ξ(s)*·(α̃_g ξ)(s)` with `(α̃_g ξ)(s) = α_g(ξ(g⁻¹s))`.
pub fn gen_pd_from_vector<T: Real>(
    xi: &[AlgebraElement<T>],
    action: &Action<T>,
) -> Result<GroupFunction<T>, Error> {
    let group = action.group().clone();
    if xi.len() != group.order() {
        return Err(Error::ShapeMismatch {
            op: "gen_pd_from_vector",
            detail: format!("need {} vector entries, got {}", group.order(), xi.len()),
        });
    }
    let descriptor = action.descriptor().clone();
    let mut values = Vec::with_capacity(group.order());
    for g in group.elements() {
        let mut acc = AlgebraElement::zero(&descriptor);
        for s in group.elements() {
            let moved = action.apply(g, &xi[group.mul(group.inv(g), s)]);
            acc = acc.add(&xi[s].adjoint().mul(&moved)?)?;
        }
        values.push(acc);
    }
    GroupFunction::new(group, descriptor, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_action::BlockAutomorphism;

    fn desc(dims: &[usize]) -> AlgebraDescriptor {
        AlgebraDescriptor::new(dims.to_vec()).unwrap()
    }

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn scalar_fn(group: &FiniteGroup, vals: &[f64]) -> (GroupFunction<f64>, Action<f64>) {
        let d = desc(&[1]);
        let scalars: Vec<Complex<f64>> = vals.iter().map(|&v| Complex::new(v, 0.0)).collect();
        let f = GroupFunction::lift_scalar(group.clone(), &d, &scalars).unwrap();
        let a = Action::trivial(group.clone(), d);
        (f, a)
    }

    #[test]
    fn pd_on_z2_scalar() {
        let g = FiniteGroup::cyclic(2);
        let (f, a) = scalar_fn(&g, &[1.0, 0.5]);
        let v = is_alpha_pd(&f, &a, &tol());
        assert!(v.passed, "verdict: {v:?}");

        let (f2, _) = scalar_fn(&g, &[1.0, 2.0]);
        let v2 = is_alpha_pd(&f2, &a, &tol());
        assert!(!v2.passed);
        // The canonical matrix [[1,2],[2,1]] has minimum eigenvalue −1.
        assert!((v2.residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nd_on_z2_scalar_direct_and_gamma() {
        let g = FiniteGroup::cyclic(2);
        for c in [0.0, 0.3, 1.0, 2.5] {
            let (f, a) = scalar_fn(&g, &[0.0, c]);
            assert!(is_alpha_nd_direct(&f, &a, &tol()).passed, "c = {c}");
            assert!(is_alpha_nd_gamma(&f, &a, &tol()).passed, "c = {c}");
        }
        let (f, a) = scalar_fn(&g, &[0.0, -0.5]);
        let direct = is_alpha_nd_direct(&f, &a, &tol());
        assert!(!direct.passed);
        // Compressed form is the 1×1 matrix [2c] = [−1].
        assert!((direct.residual - 1.0).abs() < 1e-12);
        assert!(!is_alpha_nd_gamma(&f, &a, &tol()).passed);
    }

    #[test]
    fn symmetry_violation_detected() {
        let g = FiniteGroup::cyclic(3);
        // f(1) and f(2) = f(1⁻¹) unrelated: symmetry fails.
        let (f, a) = scalar_fn(&g, &[0.0, 1.0, 5.0]);
        let v = is_alpha_nd_direct(&f, &a, &tol());
        assert!(!v.passed);
        assert!(matches!(v.witness, Some(Witness::SymmetryViolation { .. })));
    }

    #[test]
    fn trivial_group_is_degenerate_but_consistent() {
        let g = FiniteGroup::cyclic(1);
        let (f, a) = scalar_fn(&g, &[3.0]);
        assert!(is_alpha_nd_direct(&f, &a, &tol()).passed);
        assert!(is_alpha_nd_gamma(&f, &a, &tol()).passed);
    }

    #[test]
    fn one_minus_of_character_is_nd() {
        let n = 6;
        let g = FiniteGroup::cyclic(n);
        let d = desc(&[1]);
        let chi: Vec<Complex<f64>> = (0..n)
            .map(|k| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        let f = GroupFunction::lift_scalar(g.clone(), &d, &chi).unwrap();
        let a = Action::trivial(g, d);
        assert!(is_alpha_pd(&f, &a, &tol()).passed);
        let psi = one_minus(&f, &a, &tol()).unwrap();
        assert!(psi.value(0).op_norm() == 0.0);
        assert!(is_alpha_nd_direct(&psi, &a, &tol()).passed);
        assert!(is_alpha_nd_gamma(&psi, &a, &tol()).passed);
    }

    #[test]
    fn one_minus_rejects_non_pd() {
        let g = FiniteGroup::cyclic(2);
        let (f, a) = scalar_fn(&g, &[1.0, 2.0]);
        assert!(one_minus(&f, &a, &tol()).is_err());
    }

    #[test]
    fn classical_cosine_function_on_zn() {
        for n in [2usize, 3, 4, 6, 8] {
            let g = FiniteGroup::cyclic(n);
            let vals: Vec<f64> = (0..n)
                .map(|k| 1.0 - (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
                .collect();
            let (f, a) = scalar_fn(&g, &vals);
            assert!(is_alpha_nd_direct(&f, &a, &tol()).passed, "n = {n}");
            assert!(is_alpha_nd_gamma(&f, &a, &tol()).passed, "n = {n}");
        }
    }

    #[test]
    fn normalize_requires_invariant_identity_value() {
        let g = FiniteGroup::cyclic(2);
        let d = desc(&[1, 1]);
        let swap = Action::new(
            g.clone(),
            d.clone(),
            vec![
                BlockAutomorphism::<f64>::identity(&d),
                BlockAutomorphism {
                    block_perm: vec![1, 0],
                    unitaries: vec![CMatrix::identity(1), CMatrix::identity(1)],
                },
            ],
        )
        .unwrap();
        // f(e) = (1, 2) is not swap-invariant.
        let f = GroupFunction::new(
            g.clone(),
            d.clone(),
            vec![
                AlgebraElement::from_scalars(&d, &[Complex::new(1.0, 0.0), Complex::new(2.0, 0.0)])
                    .unwrap(),
                AlgebraElement::zero(&d),
            ],
        )
        .unwrap();
        assert!(normalize(&f, &swap, &tol()).is_err());

        let trivial = Action::trivial(g, d.clone());
        let ok = normalize(&f, &trivial, &tol()).unwrap();
        assert!(ok.value(0).op_norm() == 0.0);
    }

    #[test]
    fn lower_bound_holds_for_nd_functions() {
        let g = FiniteGroup::cyclic(4);
        let vals: Vec<f64> = (0..4)
            .map(|k| 1.0 - (2.0 * std::f64::consts::PI * k as f64 / 4.0).cos())
            .collect();
        let (f, a) = scalar_fn(&g, &vals);
        assert!(lower_bound_check(&f, &a, &tol()).passed);
    }

    #[test]
    fn gen_pd_uniform_vector_gives_constant_one() {
        let n = 4;
        let g = FiniteGroup::cyclic(n);
        let d = desc(&[1]);
        let a = Action::trivial(g.clone(), d.clone());
        let entry = AlgebraElement::unit(&d).scale_re(1.0 / (n as f64).sqrt());
        let xi = vec![entry; n];
        let h = gen_pd_from_vector(&xi, &a).unwrap();
        for g in 0..n {
            assert!((h.value(g).block(0)[(0, 0)].re - 1.0).abs() < 1e-14);
        }
        assert!(is_alpha_pd(&h, &a, &tol()).passed);
    }

    #[test]
    fn quadratic_form_matches_compression_on_z2() {
        let g = FiniteGroup::cyclic(2);
        let (f, a) = scalar_fn(&g, &[0.0, 0.7]);
        let d = f.descriptor().clone();
        let b0 = AlgebraElement::unit(&d);
        let b1 = b0.scale_re(-1.0);
        let s = quadratic_form(&f, &a, &[0, 1], &[b0, b1]).unwrap();
        // Σ b_i* M_ij b_j = −2c for M = [[0, c], [c, 0]].
        assert!((s.block(0)[(0, 0)].re + 1.4).abs() < 1e-14);
    }

    #[test]
    fn central_class_is_weaker_quantifier() {
        // Any function that passes the full check passes the central one.
        let g = FiniteGroup::cyclic(2);
        let (f, a) = scalar_fn(&g, &[0.0, 1.0]);
        let full = is_alpha_nd_direct_for(&f, &a, &tol(), CoefficientClass::All);
        let central = is_alpha_nd_direct_for(&f, &a, &tol(), CoefficientClass::Central);
        assert!(full.passed && central.passed);
    }

    #[test]
    fn state_push_of_scalar_function() {
        let g = FiniteGroup::cyclic(2);
        let d = desc(&[1, 1]);
        let a = Action::trivial(g.clone(), d.clone());
        let s = State::invariant_state(&a, vec![0.25, 0.75], &tol()).unwrap();
        let f = GroupFunction::new(
            g,
            d.clone(),
            vec![
                AlgebraElement::from_scalars(&d, &[Complex::new(4.0, 0.0), Complex::new(0.0, 0.0)])
                    .unwrap(),
                AlgebraElement::unit(&d),
            ],
        )
        .unwrap();
        let pushed = f.state_push(&s);
        assert!((pushed[0].re - 1.0).abs() < 1e-14);
        assert!((pushed[1].re - 1.0).abs() < 1e-14);
    }
}
