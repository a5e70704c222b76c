//! Actions of a finite group on the algebra by *-automorphisms, together
//! with invariant states and the restriction of an action to the centre.
//!
//! An automorphism of `⊕_k M_{d_k}(ℂ)` permutes summands of equal size and
//! conjugates each summand by a unitary; an action stores one such
//! automorphism per group element. Structural requirements (permutation
//! shape, matrix sizes) are enforced at construction; the analytic
//! requirements (unitarity, identity, homomorphism property) are checked by
//! [`Action::validate`] against a tolerance and reported, not assumed.

use crate::algebra::{matrix_units, AlgebraDescriptor, AlgebraElement, Tolerance};
use crate::error::Error;
use crate::group::FiniteGroup;
use crate::linalg::CMatrix;
use crate::report::CheckReport;
use crate::Real;
use num_complex::Complex;

/// One automorphism: summand `k` is conjugated by `unitaries[k]` and moved
/// to summand `block_perm[k]`.
#[derive(Clone, Debug)]
pub struct BlockAutomorphism<T> {
    pub block_perm: Vec<usize>,
    pub unitaries: Vec<CMatrix<T>>,
}

impl<T: Real> BlockAutomorphism<T> {
    /// Identity automorphism for the descriptor.
    pub fn identity(descriptor: &AlgebraDescriptor) -> Self {
        BlockAutomorphism {
            block_perm: (0..descriptor.num_blocks()).collect(),
            unitaries: descriptor
                .block_dims()
                .iter()
                .map(|&d| CMatrix::identity(d))
                .collect(),
        }
    }
}

/// Action `α: G → Aut(A)`.
#[derive(Clone, Debug)]
pub struct Action<T> {
    group: FiniteGroup,
    descriptor: AlgebraDescriptor,
    autos: Vec<BlockAutomorphism<T>>,
}

impl<T: Real> Action<T> {
    /// Builds an action from per-element automorphism data, checking the
    /// structural requirements exactly. Unitarity and the homomorphism
    /// property are deferred to [`Action::validate`].
    pub fn new(
        group: FiniteGroup,
        descriptor: AlgebraDescriptor,
        autos: Vec<BlockAutomorphism<T>>,
    ) -> Result<Self, Error> {
        if autos.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "need one automorphism per group element: got {}, group order {}",
                autos.len(),
                group.order()
            )));
        }
        let m = descriptor.num_blocks();
        let dims = descriptor.block_dims();
        for (g, a) in autos.iter().enumerate() {
            if a.block_perm.len() != m || a.unitaries.len() != m {
                return Err(Error::InvalidAction(format!(
                    "element {g}: automorphism must cover all {m} summands"
                )));
            }
            let mut seen = vec![false; m];
            for (k, &t) in a.block_perm.iter().enumerate() {
                if t >= m {
                    return Err(Error::InvalidAction(format!(
                        "element {g}: summand {k} maps out of range ({t})"
                    )));
                }
                if seen[t] {
                    return Err(Error::InvalidAction(format!(
                        "element {g}: block map is not a permutation (target {t} repeated)"
                    )));
                }
                seen[t] = true;
                if dims[t] != dims[k] {
                    return Err(Error::InvalidAction(format!(
                        "element {g}: summand {k} (dim {}) maps to summand {t} (dim {})",
                        dims[k], dims[t]
                    )));
                }
            }
            for (k, u) in a.unitaries.iter().enumerate() {
                if u.rows() != dims[k] || u.cols() != dims[k] {
                    return Err(Error::InvalidAction(format!(
                        "element {g}: unitary for summand {k} must be {0}x{0}, got {1}x{2}",
                        dims[k],
                        u.rows(),
                        u.cols()
                    )));
                }
            }
        }
        Ok(Action {
            group,
            descriptor,
            autos,
        })
    }

    /// Trivial action: every element acts as the identity.
    pub fn trivial(group: FiniteGroup, descriptor: AlgebraDescriptor) -> Self {
        let autos = (0..group.order())
            .map(|_| BlockAutomorphism::identity(&descriptor))
            .collect();
        Action {
            group,
            descriptor,
            autos,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn automorphism(&self, g: usize) -> &BlockAutomorphism<T> {
        &self.autos[g]
    }

    /// Applies `α_g` to an element.
    pub fn apply(&self, g: usize, x: &AlgebraElement<T>) -> AlgebraElement<T> {
        assert_eq!(x.descriptor(), &self.descriptor, "descriptor mismatch");
        let auto = &self.autos[g];
        let dims = self.descriptor.block_dims();
        let mut blocks: Vec<CMatrix<T>> = dims.iter().map(|&d| CMatrix::zeros(d, d)).collect();
        for k in 0..dims.len() {
            let u = &auto.unitaries[k];
            blocks[auto.block_perm[k]] = u.matmul(x.block(k)).matmul(&u.adjoint());
        }
        AlgebraElement::from_blocks(&self.descriptor, blocks).expect("dims preserved")
    }

    /// Checks unitarity, the identity axiom, and the homomorphism property
    /// on the matrix-unit spanning set, each within `tol`.
    pub fn validate(&self, tol: &Tolerance<T>) -> CheckReport<T> {
        let mut report = CheckReport::new();
        let n = self.group.order();

        let mut unit_res = T::zero();
        let mut unit_detail = String::new();
        for (g, a) in self.autos.iter().enumerate() {
            for (k, u) in a.unitaries.iter().enumerate() {
                let d = u.rows();
                let r = u
                    .matmul(&u.adjoint())
                    .sub(&CMatrix::identity(d))
                    .max_abs()
                    .max(u.adjoint().matmul(u).sub(&CMatrix::identity(d)).max_abs());
                if r > unit_res {
                    unit_res = r;
                    unit_detail = format!("element {g}, summand {k}");
                }
            }
        }
        let thr = tol.effective(T::one());
        report.push_detailed("unitarity", unit_res <= thr, unit_res, unit_detail);

        let units = matrix_units::<T>(&self.descriptor);
        let e = self.group.identity();
        let mut id_res = T::zero();
        for u in &units {
            let r = self.apply(e, u).sub(u).expect("same descriptor").op_norm();
            id_res = id_res.max(r);
        }
        report.push("identity_acts_trivially", id_res <= thr, id_res);

        let mut hom_res = T::zero();
        let mut hom_detail = String::new();
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for (i, u) in units.iter().enumerate() {
                    let lhs = self.apply(g, &self.apply(h, u));
                    let rhs = self.apply(gh, u);
                    let r = lhs.sub(&rhs).expect("same descriptor").op_norm();
                    if r > hom_res {
                        hom_res = r;
                        hom_detail = format!("g={g}, h={h}, basis element {i}");
                    }
                }
            }
        }
        report.push_detailed("homomorphism", hom_res <= thr, hom_res, hom_detail);

        report
    }

    /// Average over the group: the conditional expectation onto the fixed
    /// point algebra `A^α`.
    pub fn fixed_point_project(&self, x: &AlgebraElement<T>) -> AlgebraElement<T> {
        let n = self.group.order();
        let mut acc = AlgebraElement::zero(&self.descriptor);
        for g in 0..n {
            acc = acc.add(&self.apply(g, x)).expect("same descriptor");
        }
        acc.scale_re(T::one() / T::from_f64_lit(n as f64))
    }

    /// Residual of α-invariance of `x`: `max_g ‖α_g(x) − x‖`.
    pub fn invariance_residual(&self, x: &AlgebraElement<T>) -> T {
        self.group
            .elements()
            .map(|g| {
                self.apply(g, x)
                    .sub(x)
                    .expect("same descriptor")
                    .op_norm()
            })
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// The same action seen on the centre `Z(A) = ⊕_k ℂ·I_{d_k}`.
    pub fn restrict_to_center(&self) -> CenterActionView<'_, T> {
        CenterActionView { action: self }
    }
}

/// View of an action restricted to the centre of the algebra.
///
/// Central elements stay central under every *-automorphism, so the view
/// simply delegates; its value is in documenting intent and in the checked
/// compatibility with the centre expectation.
#[derive(Clone, Copy, Debug)]
pub struct CenterActionView<'a, T> {
    action: &'a Action<T>,
}

impl<'a, T: Real> CenterActionView<'a, T> {
    pub fn apply(&self, g: usize, x: &AlgebraElement<T>) -> AlgebraElement<T> {
        self.action.apply(g, x)
    }

    /// Residual of `E ∘ α_g = α'_g ∘ E` over all `g`, on the given element.
    pub fn expectation_commutes(&self, x: &AlgebraElement<T>) -> T {
        self.action
            .group()
            .elements()
            .map(|g| {
                let lhs = self.action.apply(g, x).center_expectation();
                let rhs = self.action.apply(g, &x.center_expectation());
                lhs.sub(&rhs).expect("same descriptor").op_norm()
            })
            .fold(T::zero(), |a, b| a.max(b))
    }
}

/// α-invariant state `ω(x) = Σ_k w_k · tr(x_k)/d_k`.
#[derive(Clone, Debug)]
pub struct State<T> {
    descriptor: AlgebraDescriptor,
    weights: Vec<T>,
}

impl<T: Real> State<T> {
    /// Builds a state from per-summand weights and validates: weights
    /// nonnegative, summing to 1, and constant along the block permutations
    /// of the action (which makes `ω ∘ α_g = ω` for every `g`).
    pub fn invariant_state(action: &Action<T>, weights: Vec<T>, tol: &Tolerance<T>) -> Result<Self, Error> {
        let m = action.descriptor().num_blocks();
        if weights.len() != m {
            return Err(Error::InvalidState(format!(
                "need {m} weights, got {}",
                weights.len()
            )));
        }
        let thr = tol.effective(T::one());
        if let Some((k, &w)) = weights.iter().enumerate().find(|(_, &w)| w < -thr) {
            return Err(Error::InvalidState(format!("weight {k} is negative ({w})")));
        }
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > thr {
            return Err(Error::InvalidState(format!("weights sum to {total}, expected 1")));
        }
        for g in action.group().elements() {
            let perm = &action.automorphism(g).block_perm;
            for k in 0..m {
                if (weights[perm[k]] - weights[k]).abs() > thr {
                    return Err(Error::InvalidState(format!(
                        "weights not constant on α-orbits: summand {k} vs {} under element {g}",
                        perm[k]
                    )));
                }
            }
        }
        Ok(State {
            descriptor: action.descriptor().clone(),
            weights,
        })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Evaluates the state.
    pub fn eval(&self, x: &AlgebraElement<T>) -> Complex<T> {
        assert_eq!(x.descriptor(), &self.descriptor, "descriptor mismatch");
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, &d) in self.descriptor.block_dims().iter().enumerate() {
            let tr = x.block(k).trace() / Complex::new(T::from_f64_lit(d as f64), T::zero());
            acc += tr * Complex::new(self.weights[k], T::zero());
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desc(dims: &[usize]) -> AlgebraDescriptor {
        AlgebraDescriptor::new(dims.to_vec()).unwrap()
    }

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    /// ℤ₂ acting on M₂ by conjugation with diag(1, −1).
    fn sign_flip_action() -> Action<f64> {
        let g = FiniteGroup::cyclic(2);
        let d = desc(&[2]);
        let u = CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]);
        let autos = vec![
            BlockAutomorphism::identity(&d),
            BlockAutomorphism {
                block_perm: vec![0],
                unitaries: vec![u],
            },
        ];
        Action::new(g, d, autos).unwrap()
    }

    /// ℤ₂ acting on ℂ ⊕ ℂ by swapping the summands.
    fn swap_action() -> Action<f64> {
        let g = FiniteGroup::cyclic(2);
        let d = desc(&[1, 1]);
        let autos = vec![
            BlockAutomorphism::<f64>::identity(&d),
            BlockAutomorphism {
                block_perm: vec![1, 0],
                unitaries: vec![CMatrix::identity(1), CMatrix::identity(1)],
            },
        ];
        Action::new(g, d, autos).unwrap()
    }

    #[test]
    fn conjugation_flips_off_diagonal_signs() {
        let a = sign_flip_action();
        let x = AlgebraElement::from_blocks(
            a.descriptor(),
            vec![CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])],
        )
        .unwrap();
        let y = a.apply(1, &x);
        assert!((y.block(0)[(0, 1)].re + 1.0).abs() < 1e-15);
        assert!((y.block(0)[(1, 0)].re + 1.0).abs() < 1e-15);
        assert!(a.validate(&tol()).all_passed());
    }

    #[test]
    fn swap_action_moves_blocks() {
        let a = swap_action();
        let x = AlgebraElement::from_scalars(
            a.descriptor(),
            &[Complex::new(3.0, 0.0), Complex::new(7.0, 0.0)],
        )
        .unwrap();
        let y = a.apply(1, &x);
        assert!((y.block(0)[(0, 0)].re - 7.0).abs() < 1e-15);
        assert!((y.block(1)[(0, 0)].re - 3.0).abs() < 1e-15);
        assert!(a.validate(&tol()).all_passed());
    }

    #[test]
    fn broken_homomorphism_is_reported() {
        // 45° rotation has order 8, not 2, so α_1² ≠ α_0.
        let g = FiniteGroup::cyclic(2);
        let d = desc(&[2]);
        let th = std::f64::consts::FRAC_PI_4;
        let u = CMatrix::from_real_rows(&[vec![th.cos(), -th.sin()], vec![th.sin(), th.cos()]]);
        let autos = vec![
            BlockAutomorphism::identity(&d),
            BlockAutomorphism {
                block_perm: vec![0],
                unitaries: vec![u],
            },
        ];
        let a = Action::new(g, d, autos).unwrap();
        let report = a.validate(&tol());
        assert!(!report.all_passed());
        let hom = report.lines.iter().find(|l| l.name == "homomorphism").unwrap();
        assert!(!hom.passed);
    }

    #[test]
    fn non_unitary_is_reported() {
        let g = FiniteGroup::cyclic(2);
        let d = desc(&[1]);
        let autos = vec![
            BlockAutomorphism::identity(&d),
            BlockAutomorphism {
                block_perm: vec![0],
                unitaries: vec![CMatrix::from_real_rows(&[vec![2.0]])],
            },
        ];
        let a = Action::new(g, d, autos).unwrap();
        let report = a.validate(&tol());
        let line = report.lines.iter().find(|l| l.name == "unitarity").unwrap();
        assert!(!line.passed);
        assert!(line.residual > 1.0);
    }

    #[test]
    fn structural_errors_at_construction() {
        let g = FiniteGroup::cyclic(2);
        let d = desc(&[2, 1]);
        // Permutation mixing different block sizes.
        let autos = vec![
            BlockAutomorphism::<f64>::identity(&d),
            BlockAutomorphism {
                block_perm: vec![1, 0],
                unitaries: vec![CMatrix::identity(2), CMatrix::identity(1)],
            },
        ];
        assert!(Action::new(g, d, autos).is_err());
    }

    #[test]
    fn fixed_point_projection_is_invariant() {
        let a = sign_flip_action();
        let x = AlgebraElement::from_blocks(
            a.descriptor(),
            vec![CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]])],
        )
        .unwrap();
        let p = a.fixed_point_project(&x);
        assert!(a.invariance_residual(&p) < 1e-14);
        // Averaging kills the off-diagonal here.
        assert!(p.block(0)[(0, 1)].norm() < 1e-15);
        assert!((p.block(0)[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn center_view_commutes_with_expectation() {
        let a = sign_flip_action();
        let x = AlgebraElement::from_blocks(
            a.descriptor(),
            vec![CMatrix::from_real_rows(&[vec![1.0, 5.0], vec![0.5, -2.0]])],
        )
        .unwrap();
        let view = a.restrict_to_center();
        assert!(view.expectation_commutes(&x) < 1e-14);
        let c = x.center_expectation();
        assert!(view.apply(1, &c).is_central(&tol()));
    }

    #[test]
    fn invariant_state_validation() {
        let swap = swap_action();
        assert!(State::invariant_state(&swap, vec![0.3, 0.7], &tol()).is_err());
        let s = State::invariant_state(&swap, vec![0.5, 0.5], &tol()).unwrap();
        let one = AlgebraElement::unit(swap.descriptor());
        assert!((s.eval(&one).re - 1.0).abs() < 1e-15);

        let trivial = Action::<f64>::trivial(FiniteGroup::cyclic(2), desc(&[1, 1]));
        let s2 = State::invariant_state(&trivial, vec![0.3, 0.7], &tol()).unwrap();
        let x = AlgebraElement::from_scalars(
            trivial.descriptor(),
            &[Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)],
        )
        .unwrap();
        assert!((s2.eval(&x).re + 0.4).abs() < 1e-15);

        assert!(State::invariant_state(&swap, vec![0.5, 0.6], &tol()).is_err());
        assert!(State::invariant_state(&swap, vec![-0.5, 1.5], &tol()).is_err());
    }
}
