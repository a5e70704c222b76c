//! Randomised invariants driven by proptest. Each property draws a sampler
//! seed and structural parameters, regenerates the instance
//! deterministically from them, and must hold for every case.

use cstar_dynamics::definiteness::{
    gen_pd_from_vector, is_alpha_nd_direct, is_alpha_nd_gamma, is_alpha_pd, lower_bound_check,
    normalize, one_minus,
};
use cstar_dynamics::kernel_cocycle::{build_module, gamma_kernel};
use cstar_dynamics::samples::{sample_systems, Sampler};
use cstar_dynamics::{
    Action, AlgebraDescriptor, AlgebraElement, AMatrix, FiniteGroup, GroupFunction, Tolerance,
};
use num_complex::Complex;
use proptest::prelude::*;

fn tol8() -> Tolerance<f64> {
    Tolerance::relative(1e-8)
}

fn catalog() -> Vec<(&'static str, Action<f64>)> {
    sample_systems::<f64>()
}

fn system_index() -> impl Strategy<Value = usize> {
    0..catalog().len()
}

fn block_dims() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![
        Just(vec![1]),
        Just(vec![2]),
        Just(vec![3]),
        Just(vec![1, 1]),
        Just(vec![2, 1]),
    ]
}

/// Classical positive definite function with complex values and `f(e) = 1`,
/// from a random complex unit vector in `ℓ²(G)`.
fn classical_pd_unit_complex(
    sampler: &mut Sampler<f64>,
    group: &FiniteGroup,
) -> Vec<Complex<f64>> {
    let n = group.order();
    let mut xi: Vec<Complex<f64>> = (0..n)
        .map(|_| Complex::new(sampler.gaussian(), sampler.gaussian()))
        .collect();
    let norm = xi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in xi.iter_mut() {
        *z /= norm;
    }
    group
        .elements()
        .map(|g| {
            let mut acc = Complex::new(0.0, 0.0);
            for s in group.elements() {
                acc += xi[s].conj() * xi[group.mul(group.inv(g), s)];
            }
            acc
        })
        .collect()
}

/// Complex-valued central normalised negative definite function, valid
/// under any action: `1 − f` of a lifted complex classical unit.
fn complex_central_nd0(sampler: &mut Sampler<f64>, action: &Action<f64>) -> GroupFunction<f64> {
    let scalars = classical_pd_unit_complex(sampler, action.group());
    let lift = GroupFunction::lift_scalar(action.group().clone(), action.descriptor(), &scalars)
        .expect("scalars over the group");
    one_minus(&lift, action, &tol8()).expect("lifted classical unit is positive definite")
}

fn gram_matrix(d: &AlgebraDescriptor, xs: &[AlgebraElement<f64>]) -> AMatrix<f64> {
    AMatrix::from_fn(d, xs.len(), |i, j| {
        xs[i].adjoint().mul(&xs[j]).expect("same descriptor")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The direct sum-zero characterisation and the kernel positivity
    /// characterisation produce the same verdict, away from the tolerance
    /// boundary.
    #[test]
    fn direct_and_kernel_verdicts_agree(
        seed in any::<u64>(),
        sys in system_index(),
        scale in 0.2f64..1.2,
    ) {
        let (_, action) = &catalog()[sys];
        let tol = tol8();
        let mut sampler = Sampler::<f64>::new(seed);

        let mut functions = vec![
            sampler.random_symmetric_function(action, scale),
            sampler.random_central_symmetric_function(action, scale),
            sampler.random_central_nd0(action),
        ];
        let base = sampler.random_central_nd0(action);
        functions.push(sampler.spoil_nd(&base, 2.0 + scale));

        for f in &functions {
            let direct = is_alpha_nd_direct(f, action, &tol);
            let kernel = is_alpha_nd_gamma(f, action, &tol);
            if direct.passed != kernel.passed {
                // Disagreement is only possible when one verdict sits on
                // its tolerance threshold.
                let band = 1e-6 * f.sup_norm().max(1.0);
                prop_assert!(
                    (direct.residual - direct.threshold).abs() < band
                        || (kernel.residual - kernel.threshold).abs() < band,
                    "direct {} ({:.3e}) vs kernel {} ({:.3e})",
                    direct.passed, direct.residual, kernel.passed, kernel.residual
                );
            }
        }
    }

    /// The kernel of a symmetric function is hermitian:
    /// `γ(g, h)* = γ(h, g)`.
    #[test]
    fn kernel_is_hermitian_for_symmetric_functions(
        seed in any::<u64>(),
        sys in system_index(),
        scale in 0.2f64..1.2,
    ) {
        let (_, action) = &catalog()[sys];
        let mut sampler = Sampler::<f64>::new(seed);
        let f = sampler.random_symmetric_function(action, scale);
        let kernel = gamma_kernel(&f, action, false).expect("full kernel has no preconditions");
        let thr = 1e-10 * f.sup_norm().max(1.0);
        for g in action.group().elements() {
            for h in action.group().elements() {
                let drift = kernel
                    .entry(g, h)
                    .adjoint()
                    .distance(kernel.entry(h, g))
                    .expect("same descriptor");
                prop_assert!(drift <= thr, "kernel not hermitian at ({g}, {h}): {drift:.3e}");
            }
        }
    }

    /// Positive matrices with central entries stay positive under
    /// transposition and Schur exponentiation, and Schur products against
    /// them preserve positivity.
    #[test]
    fn central_positive_matrices_are_stable(
        seed in any::<u64>(),
        dims in block_dims(),
        side in 2usize..5,
    ) {
        let d = AlgebraDescriptor::new(dims).expect("valid descriptor");
        let tol = tol8();
        let mut sampler = Sampler::<f64>::new(seed);

        let zs: Vec<AlgebraElement<f64>> = (0..side)
            .map(|_| sampler.random_central_element(&d, 1.0))
            .collect();
        let central = gram_matrix(&d, &zs);
        let xs: Vec<AlgebraElement<f64>> = (0..side)
            .map(|_| sampler.random_element(&d, 1.0))
            .collect();
        let general = gram_matrix(&d, &xs);

        let transposed = AMatrix::from_fn(&d, side, |i, j| central.entry(j, i).clone());
        prop_assert!(transposed.positivity(&tol).passed, "transpose lost positivity");
        prop_assert!(central.schur_exp().positivity(&tol).passed, "Schur exponential lost positivity");
        let schur = general.schur_product(&central).expect("same shape");
        prop_assert!(schur.positivity(&tol).passed, "Schur product lost positivity");
    }

    /// The conditional expectation onto the centre commutes with every
    /// automorphism of the action.
    #[test]
    fn center_expectation_is_equivariant(
        seed in any::<u64>(),
        sys in system_index(),
        scale in 0.2f64..1.5,
    ) {
        let (_, action) = &catalog()[sys];
        let mut sampler = Sampler::<f64>::new(seed);
        let x = sampler.random_element(action.descriptor(), scale);
        let thr = 1e-9 * x.op_norm().max(1.0);
        for g in action.group().elements() {
            let through_action = action.apply(g, &x.center_expectation());
            let through_expectation = action.apply(g, &x).center_expectation();
            let drift = through_action
                .distance(&through_expectation)
                .expect("same descriptor");
            prop_assert!(drift <= thr, "expectation not equivariant at {g}: {drift:.3e}");
        }
    }

    /// Pointwise conjugates and pointwise products against central
    /// positive definite functions remain positive definite.
    #[test]
    fn conjugates_and_products_stay_positive_definite(
        seed in any::<u64>(),
        sys in system_index(),
        scale in 0.3f64..1.0,
    ) {
        let (_, action) = &catalog()[sys];
        let tol = tol8();
        let mut sampler = Sampler::<f64>::new(seed);

        let xi: Vec<AlgebraElement<f64>> = action
            .group()
            .elements()
            .map(|_| sampler.random_central_element(action.descriptor(), scale))
            .collect();
        let phi_central = gen_pd_from_vector(&xi, action).expect("vector over the group");
        let conj = is_alpha_pd(&phi_central.conj_function(), action, &tol);
        prop_assert!(conj.passed, "conjugate failed: residual {:.3e}", conj.residual);

        let phi_general = sampler.random_pd_function(action, scale);
        let product = phi_general
            .pointwise_product(&phi_central)
            .expect("same shape");
        let pd = is_alpha_pd(&product, action, &tol);
        prop_assert!(pd.passed, "product failed: residual {:.3e}", pd.residual);
    }

    /// For a complex-valued central negative definite function the real
    /// part is again negative definite, and positive-valued once
    /// normalised.
    #[test]
    fn real_part_of_central_negative_definite(
        seed in any::<u64>(),
        sys in system_index(),
    ) {
        let (_, action) = &catalog()[sys];
        let tol = tol8();
        let mut sampler = Sampler::<f64>::new(seed);
        let psi = complex_central_nd0(&mut sampler, action);

        prop_assert!(is_alpha_nd_gamma(&psi, action, &tol).passed);
        let re = psi.re_part();
        let nd = is_alpha_nd_gamma(&re, action, &tol);
        prop_assert!(nd.passed, "real part not negative definite: {:.3e}", nd.residual);
        let thr = tol.effective(re.sup_norm());
        for g in action.group().elements() {
            let lo = re
                .value(g)
                .spectral_min(&Tolerance::absolute(f64::INFINITY))
                .expect("self-adjointness unchecked");
            prop_assert!(lo >= -thr, "negative value {lo:.3e} at {g}");
        }
    }

    /// Adding an invariant self-adjoint constant and normalising returns
    /// the original function, and never changes the verdict.
    #[test]
    fn normalization_round_trip(
        seed in any::<u64>(),
        sys in system_index(),
        shift in -2.0f64..2.0,
    ) {
        let (_, action) = &catalog()[sys];
        let tol = tol8();
        let mut sampler = Sampler::<f64>::new(seed);
        let psi0 = sampler.random_central_nd0(action);

        let constant = GroupFunction::constant(
            action.group().clone(),
            AlgebraElement::unit(action.descriptor()).scale_re(shift),
        );
        let shifted = psi0.add(&constant).expect("same shape");
        prop_assert!(is_alpha_nd_direct(&shifted, action, &tol).passed);

        let back = normalize(&shifted, action, &tol).expect("shifted value at e is invariant");
        let drift = back.distance(&psi0).expect("same shape");
        prop_assert!(
            drift <= 1e-12 * (1.0 + shift.abs()),
            "normalisation drifted by {drift:.3e}"
        );
        prop_assert!(is_alpha_nd_gamma(&back, action, &tol).passed);
    }

    /// `1 − φ` of a positive definite function with `φ(e) = 1` is
    /// negative definite and satisfies the pointwise lower bound.
    #[test]
    fn one_minus_yields_negative_definite(
        seed in any::<u64>(),
        sys in system_index(),
    ) {
        let (_, base_action) = &catalog()[sys];
        let mut sampler = Sampler::<f64>::new(seed);
        // A unitarily conjugated copy keeps the group but changes the
        // automorphisms, so the property is not tied to the catalogue.
        let action = sampler.conjugated(base_action);
        let tol = tol8();

        let psi = complex_central_nd0(&mut sampler, &action);
        prop_assert!(is_alpha_nd_gamma(&psi, &action, &tol).passed);
        let bound = lower_bound_check(&psi, &action, &tol);
        prop_assert!(bound.passed, "lower bound violated: {:.3e}", bound.residual);
    }

    /// Negative definite functions form a cone: closed under sums and
    /// positive scalings.
    #[test]
    fn negative_definite_cone_is_closed(
        seed in any::<u64>(),
        sys in system_index(),
        t in 0.1f64..5.0,
    ) {
        let (_, action) = &catalog()[sys];
        let tol = tol8();
        let mut sampler = Sampler::<f64>::new(seed);
        let psi1 = sampler.random_central_nd0(action);
        let psi2 = complex_central_nd0(&mut sampler, action);

        let sum = psi1.add(&psi2).expect("same shape");
        prop_assert!(is_alpha_nd_gamma(&sum, action, &tol).passed, "sum left the cone");
        let scaled = psi1.scale_re(t);
        prop_assert!(is_alpha_nd_gamma(&scaled, action, &tol).passed, "scaling left the cone");
    }
}

/// A Jacobi sweep can drive an off-diagonal pivot into the subnormal range,
/// where a naive complex division turns the rotation phase into NaN. This
/// seed found that path through the full generator stack; keep it pinned.
#[test]
fn nd_generator_survives_subnormal_jacobi_pivot() {
    let systems = catalog();
    let (_, action) = systems
        .iter()
        .find(|(name, _)| *name == "s3-standard")
        .expect("catalogue system");
    let tol = tol8();
    let mut sampler = Sampler::<f64>::new(16413460000826178306);
    let psi = sampler.random_central_nd0(action);
    assert!(psi.sup_norm().is_finite());
    assert!(is_alpha_nd_gamma(&psi, action, &tol).passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The module model of a normalised negative definite function has a
    /// positive Gram matrix and an equivariant isometric action:
    /// `⟨u_g x, u_g y⟩ = α_g(⟨x, y⟩)`.
    #[test]
    fn module_gram_is_positive_and_equivariant(
        seed in any::<u64>(),
        sys in system_index(),
    ) {
        let (_, action) = &catalog()[sys];
        let tol = tol8();
        let mut sampler = Sampler::<f64>::new(seed);
        let psi = sampler.random_central_nd0(action);
        let rep = build_module(&psi, action, &tol).expect("normalised negative definite input");

        prop_assert!(rep.gram().positivity(&tol).passed, "Gram matrix not positive");
        let report = rep.verify(&psi, &tol);
        prop_assert!(
            report.all_passed(),
            "module checks failed: {:?}",
            report
                .lines
                .iter()
                .filter(|l| !l.passed)
                .map(|l| l.name.clone())
                .collect::<Vec<_>>()
        );

        // Equivariance on random vectors, not only on the canonical ones.
        let mut x = rep.zero_vector();
        let mut y = rep.zero_vector();
        for g in action.group().elements() {
            x = x.add(&rep.cocycle(g).scale_re(sampler.gaussian())).expect("same group");
            y = y.add(&rep.cocycle(g).scale_re(sampler.gaussian())).expect("same group");
        }
        let scale = rep.inner(&x, &x).op_norm().max(rep.inner(&y, &y).op_norm()).max(1.0);
        for g in action.group().elements() {
            let moved = rep.inner(&rep.u_action(g, &x), &rep.u_action(g, &y));
            let expected = action.apply(g, &rep.inner(&x, &y));
            let drift = moved.distance(&expected).expect("same descriptor");
            prop_assert!(
                drift <= 1e-9 * scale,
                "inner product not equivariant at {g}: {drift:.3e}"
            );
        }
    }
}
