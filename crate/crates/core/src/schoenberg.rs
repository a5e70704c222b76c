//! The exponential bridge between negative and positive definiteness.
//!
//! For central-valued `ψ` the two properties are equivalent:
//! `ψ` is α-negative definite iff `e^{−tψ}` is α-positive definite for
//! every `t > 0`. The forward direction is verified constructively by
//! replaying the factorisation
//! `[α_{g_i}(e^{−tψ(g_i⁻¹g_j)})] = exp⊙(tΓ) ⊙ [b_i* b_j]`,
//! where `Γ` is the kernel `γ(g,h) = ψ(g)* + ψ(h) − ψ(e) − α_g(ψ(g⁻¹h))`,
//! `exp⊙` is the entrywise exponential, and `b_i = e^{t(½ψ(e) − ψ(g_i))}`.
//! Both factors are positive matrices with central entries, so their Schur
//! product is positive. The identity requires the `−ψ(e)` term inside `Γ`
//! to balance the `+ψ(e)` inside the Gram factor; it holds exactly because
//! central values commute.
//!
//! The converse direction (no centrality needed) is grid-relative here: a
//! finite family `{e^{−tψ}}_{t∈grid}` of positive definite functions is
//! checked, the symmetry condition is recovered from the exponential
//! identities, and the negative definiteness of `ψ` is confirmed by the
//! direct test.

use crate::algebra::{AlgebraElement, AMatrix, Tolerance};
use crate::definiteness::{
    is_alpha_nd_direct, is_alpha_nd_gamma, is_alpha_pd, pd_block_matrix, GroupFunction,
};
use crate::error::Error;
use crate::group_action::Action;
use crate::kernel_cocycle::gamma_kernel;
use crate::report::CheckReport;
use crate::Real;

/// Pointwise exponential `g ↦ e^{−t·ψ(g)}`.
pub fn exp_function<T: Real>(
    f: &GroupFunction<T>,
    t: T,
) -> Result<GroupFunction<T>, Error> {
    if t < T::zero() {
        return Err(Error::domain("exp_function", "t ≥ 0", (-t).to_f64().unwrap_or(f64::NAN)));
    }
    let values: Vec<AlgebraElement<T>> = f
        .values()
        .iter()
        .map(|v| v.scale_re(-t).exp_element())
        .collect();
    GroupFunction::new(f.group().clone(), f.descriptor().clone(), values)
}

/// Default time grid `{10⁻³, 10⁻², 10⁻¹, 1, 10}`.
pub fn default_t_grid<T: Real>() -> Vec<T> {
    [1e-3, 1e-2, 1e-1, 1.0, 10.0]
        .iter()
        .map(|&t| T::from_f64_lit(t))
        .collect()
}

/// Forward direction for central `ψ`: `e^{−tψ}` is positive definite for
/// each `t` in the grid, with the proof factorisation replayed as an exact
/// matrix identity.
///
/// Requires `ψ` central-valued and negative definite (kernel criterion);
/// violations are domain errors.
pub fn schoenberg_forward<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    t_grid: &[T],
    tol: &Tolerance<T>,
) -> Result<CheckReport<T>, Error> {
    let central = f.central_residual();
    if central > tol.effective(f.sup_norm()) {
        return Err(Error::domain("schoenberg_forward", "ψ central-valued", central));
    }
    let nd = is_alpha_nd_gamma(f, action, tol);
    if !nd.passed {
        return Err(Error::domain(
            "schoenberg_forward",
            "ψ negative definite",
            nd.residual,
        ));
    }

    let group = f.group().clone();
    let n = group.order();
    let gamma = gamma_kernel(f, action, false)?;
    let e = group.identity();
    let half = T::from_f64_lit(0.5);

    let mut report = CheckReport::new();
    for &t in t_grid {
        let phi = exp_function(f, t)?;
        let pd = is_alpha_pd(&phi, action, tol);
        report.push_detailed(
            format!("positive_definite[t={t}]"),
            pd.passed,
            pd.residual,
            format!("threshold {}", pd.threshold),
        );

        // b_i = e^{t(½ψ(e) − ψ(g_i))}; the Gram factor [b_i* b_j].
        let b: Vec<AlgebraElement<T>> = group
            .elements()
            .map(|g| {
                f.value(e)
                    .scale_re(half)
                    .sub(f.value(g))
                    .expect("same descriptor")
                    .scale_re(t)
                    .exp_element()
            })
            .collect();
        let gram = AMatrix::from_fn(f.descriptor(), n, |i, j| {
            b[i].adjoint().mul(&b[j]).expect("same descriptor")
        });
        let schur = gamma.matrix().scale_re(t).schur_exp();
        let replay = schur.schur_product(&gram)?;
        let lhs = pd_block_matrix(&phi, action);
        let res = lhs.sub(&replay)?.max_entry_norm();
        let scale = lhs.max_entry_norm().max(T::one());
        report.push(format!("factorization[t={t}]"), res <= tol.effective(scale), res);
    }
    Ok(report)
}

/// Converse direction: checks `e^{−tψ}` for positive definiteness on the
/// grid (which should include points approaching 0), recovers the symmetry
/// condition from the exponential identities, and confirms the implication
/// by running the direct negative definiteness test on `ψ`.
///
/// The grid is finite, so a passing report certifies the implication on
/// the sampled times only.
pub fn schoenberg_converse<T: Real>(
    f: &GroupFunction<T>,
    action: &Action<T>,
    t_grid: &[T],
    tol: &Tolerance<T>,
) -> Result<CheckReport<T>, Error> {
    let mut report = CheckReport::new();
    let mut all_pd = true;
    let mut smallest = T::infinity();
    for &t in t_grid {
        let phi = exp_function(f, t)?;
        let pd = is_alpha_pd(&phi, action, tol);
        all_pd = all_pd && pd.passed;
        smallest = smallest.min(t);
        report.push_detailed(
            format!("positive_definite[t={t}]"),
            pd.passed,
            pd.residual,
            format!("threshold {}", pd.threshold),
        );

        // α_g(e^{−tψ(g⁻¹)}) = (e^{−tψ(g)})*, the first consequence of
        // positive definiteness at this t.
        let (sym_res, _) = phi.symmetry_residual(action);
        report.push(
            format!("exp_symmetry[t={t}]"),
            !pd.passed || sym_res <= tol.effective(phi.sup_norm()),
            sym_res,
        );
    }

    // Symmetry of ψ itself, recovered in the limit by uniqueness of the
    // exponential; tested directly.
    let (sym, _) = f.symmetry_residual(action);
    let sym_ok = sym <= tol.effective(f.sup_norm());
    report.push("symmetry_recovery", !all_pd || sym_ok, sym);

    let nd = is_alpha_nd_direct(f, action, tol);
    report.push_detailed(
        "negative_definite",
        nd.passed,
        nd.residual,
        format!("threshold {}", nd.threshold),
    );

    // The implication (all t positive definite) ⟹ (ψ negative definite),
    // relative to this grid.
    report.push(
        "implication_on_grid",
        !all_pd || nd.passed,
        if all_pd && !nd.passed { nd.residual } else { T::zero() },
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraDescriptor;
    use crate::group::FiniteGroup;
    use num_complex::Complex;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn scalar_fn(group: &FiniteGroup, vals: &[f64]) -> (GroupFunction<f64>, Action<f64>) {
        let d = AlgebraDescriptor::new(vec![1]).unwrap();
        let scalars: Vec<Complex<f64>> = vals.iter().map(|&v| Complex::new(v, 0.0)).collect();
        let f = GroupFunction::lift_scalar(group.clone(), &d, &scalars).unwrap();
        let a = Action::trivial(group.clone(), d);
        (f, a)
    }

    #[test]
    fn exp_function_basics() {
        let g = FiniteGroup::cyclic(2);
        let (f, _) = scalar_fn(&g, &[0.0, 3.0]);
        let e0 = exp_function(&f, 0.0).unwrap();
        // t = 0 gives the constant unit, exactly.
        for h in 0..2 {
            assert!(e0
                .value(h)
                .sub(&AlgebraElement::unit(f.descriptor()))
                .unwrap()
                .op_norm()
                == 0.0);
        }
        let e1 = exp_function(&f, 1.0).unwrap();
        assert!((e1.value(1).block(0)[(0, 0)].re - (-3.0f64).exp()).abs() < 1e-15);
        assert!(exp_function(&f, -1.0).is_err());
    }

    #[test]
    fn forward_on_z2() {
        let g = FiniteGroup::cyclic(2);
        let (f, a) = scalar_fn(&g, &[0.0, 1.0]);
        let report = schoenberg_forward(&f, &a, &[0.1, 1.0, 10.0], &tol()).unwrap();
        assert!(report.all_passed(), "{report:?}");
        // At t = 1 the matrix is [[1, e⁻¹], [e⁻¹, 1]]: eigenvalues 1 ± e⁻¹.
        let phi = exp_function(&f, 1.0).unwrap();
        let m = pd_block_matrix(&phi, &a).flatten();
        let eigs = m.blocks()[0].hermitian_eigenvalues();
        assert!((eigs[0] - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        assert!((eigs[1] - (1.0 + (-1.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn forward_rejects_non_nd() {
        let g = FiniteGroup::cyclic(2);
        let (f, a) = scalar_fn(&g, &[0.0, -1.0]);
        assert!(schoenberg_forward(&f, &a, &[1.0], &tol()).is_err());
    }

    #[test]
    fn forward_zero_function() {
        let g = FiniteGroup::cyclic(3);
        let (f, a) = scalar_fn(&g, &[0.0, 0.0, 0.0]);
        let report = schoenberg_forward(&f, &a, &default_t_grid(), &tol()).unwrap();
        assert!(report.all_passed());
    }

    #[test]
    fn converse_consistency_both_ways() {
        let g = FiniteGroup::cyclic(2);
        // ND case: all t PD, implication passes.
        let (nd, a) = scalar_fn(&g, &[0.0, 1.0]);
        let rep = schoenberg_converse(&nd, &a, &default_t_grid(), &tol()).unwrap();
        assert!(rep.all_passed(), "{rep:?}");

        // Non-ND case: e^{−tψ} = (1, e^{t}) has eigenvalue 1 − e^t < 0.
        let (bad, _) = scalar_fn(&g, &[0.0, -1.0]);
        let rep = schoenberg_converse(&bad, &a, &default_t_grid(), &tol()).unwrap();
        let pd_line = rep
            .lines
            .iter()
            .find(|l| l.name.starts_with("positive_definite[t=10"))
            .unwrap();
        assert!(!pd_line.passed);
        // Implication line stays consistent: not all PD, so it holds vacuously.
        let imp = rep.lines.iter().find(|l| l.name == "implication_on_grid").unwrap();
        assert!(imp.passed);
    }

    #[test]
    fn converse_constant_function() {
        let g = FiniteGroup::cyclic(3);
        let (f, a) = scalar_fn(&g, &[2.0, 2.0, 2.0]);
        let rep = schoenberg_converse(&f, &a, &default_t_grid(), &tol()).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn biconditional_matches_direct_verdict() {
        // Scalar ℤ₄ functions crossing the ND boundary.
        let g = FiniteGroup::cyclic(4);
        for c in [-0.5, 0.0, 0.4, 1.0] {
            let vals = [0.0, 1.0, 1.0 + c, 1.0];
            let (f, a) = scalar_fn(&g, &vals);
            let nd = is_alpha_nd_direct(&f, &a, &tol()).passed;
            let mut all_pd = true;
            for &t in &default_t_grid::<f64>() {
                all_pd = all_pd && is_alpha_pd(&exp_function(&f, t).unwrap(), &a, &tol()).passed;
            }
            assert_eq!(nd, all_pd, "c = {c}");
        }
    }
}
