//! Windowed Haagerup-type constructions: from a family of positive
//! definite functions to a negative definite function with quantitative
//! spectral growth, and back from a negative definite function to the
//! exponential family.
//!
//! For a finite group every properness statement is vacuous, so instead of
//! a boolean "property" the module reports the quantitative content: the
//! growth of the spectral lower function `ℓ_ψ(g) = inf sp(ψ(g))` off an
//! exhaustion chain, the `1/2ⁿ` closeness bookkeeping of the family on the
//! chain sets, and the norm profile `‖e^{−tψ(g)}‖ = e^{−t·ℓ_ψ(g)}` of the
//! exponential family.

use crate::algebra::{AlgebraElement, Tolerance};
use crate::definiteness::{is_alpha_nd_gamma, is_alpha_pd, one_minus, GroupFunction};
use crate::error::Error;
use crate::group::FiniteGroup;
use crate::group_action::Action;
use crate::report::CheckReport;
use crate::schoenberg::exp_function;
use crate::Real;

/// An increasing chain of subsets of `G`, the last being all of `G`.
#[derive(Clone, Debug)]
pub struct ExhaustionChain {
    order: usize,
    subsets: Vec<Vec<usize>>,
}

impl ExhaustionChain {
    pub fn new(order: usize, subsets: Vec<Vec<usize>>) -> Result<Self, Error> {
        if subsets.is_empty() {
            return Err(Error::InvalidInput("chain needs at least one subset".into()));
        }
        let mut cleaned: Vec<Vec<usize>> = Vec::with_capacity(subsets.len());
        for (i, s) in subsets.iter().enumerate() {
            let mut v: Vec<usize> = s.clone();
            v.sort_unstable();
            v.dedup();
            if v.iter().any(|&g| g >= order) {
                return Err(Error::InvalidInput(format!(
                    "chain set {i} contains an element index out of range"
                )));
            }
            if let Some(prev) = cleaned.last() {
                if !prev.iter().all(|g| v.binary_search(g).is_ok()) {
                    return Err(Error::InvalidInput(format!(
                        "chain set {i} does not contain set {}",
                        i - 1
                    )));
                }
            }
            cleaned.push(v);
        }
        if cleaned.last().map(|v| v.len()) != Some(order) {
            return Err(Error::InvalidInput(
                "last chain set must be the whole group".into(),
            ));
        }
        Ok(ExhaustionChain {
            order,
            subsets: cleaned,
        })
    }

    /// The chain `{e} ⊆ G`, the coarsest useful default.
    pub fn trivial(group: &FiniteGroup) -> Self {
        let all: Vec<usize> = group.elements().collect();
        ExhaustionChain::new(group.order(), vec![vec![group.identity()], all])
            .expect("trivial chain is valid")
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subset(&self, n: usize) -> &[usize] {
        &self.subsets[n]
    }

    pub fn contains(&self, n: usize, g: usize) -> bool {
        self.subsets[n].binary_search(&g).is_ok()
    }

    /// Elements outside the `n`-th set.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| !self.contains(n, g))
            .collect()
    }
}

/// A family of central positive definite functions normalised to `1_A` at
/// the identity.
#[derive(Clone, Debug)]
pub struct PDFamily<T> {
    functions: Vec<GroupFunction<T>>,
}

impl<T: Real> PDFamily<T> {
    /// Validates every member: positive definite, central, `h(e) = 1_A`.
    pub fn new(
        functions: Vec<GroupFunction<T>>,
        action: &Action<T>,
        tol: &Tolerance<T>,
    ) -> Result<Self, Error> {
        if functions.is_empty() {
            return Err(Error::InvalidInput("family needs at least one member".into()));
        }
        for (j, h) in functions.iter().enumerate() {
            let pd = is_alpha_pd(h, action, tol);
            if !pd.passed {
                return Err(Error::domain(
                    "pd_family",
                    "member positive definite",
                    pd.residual,
                ));
            }
            let central = h.central_residual();
            if central > tol.effective(h.sup_norm()) {
                return Err(Error::domain("pd_family", "member central-valued", central));
            }
            let e = h.group().identity();
            let unit_res = h
                .value(e)
                .sub(&AlgebraElement::unit(h.descriptor()))
                .expect("same descriptor")
                .op_norm();
            if unit_res > tol.effective(T::one()) {
                return Err(Error::domain("pd_family", "member has value 1 at e", unit_res));
            }
            let _ = j;
        }
        Ok(PDFamily { functions })
    }

    pub fn members(&self) -> &[GroupFunction<T>] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

/// The spectral lower function `ℓ_ψ(g) = inf sp(ψ(g))`.
///
/// Values must be self-adjoint within tol.
pub fn spectral_lower<T: Real>(
    f: &GroupFunction<T>,
    tol: &Tolerance<T>,
) -> Result<Vec<T>, Error> {
    f.values().iter().map(|v| v.spectral_min(tol)).collect()
}

/// `φ(g) = h(g)* h(g)` for a central positive definite `h`; the result is
/// again central positive definite, has positive values, and keeps the
/// value `1_A` at the identity.
pub fn squared_modulus<T: Real>(
    h: &GroupFunction<T>,
    action: &Action<T>,
    tol: &Tolerance<T>,
) -> Result<GroupFunction<T>, Error> {
    let pd = is_alpha_pd(h, action, tol);
    if !pd.passed {
        return Err(Error::domain(
            "squared_modulus",
            "input positive definite",
            pd.residual,
        ));
    }
    let central = h.central_residual();
    if central > tol.effective(h.sup_norm()) {
        return Err(Error::domain("squared_modulus", "input central-valued", central));
    }
    h.conj_function().pointwise_product(h)
}

/// `ψ_N = Σ_{j≤N} (1_A − φ_j)` with `φ_j = squared_modulus(h_j)`, together
/// with the quantitative report: membership in the normalised negative
/// definite cone, positivity and centrality of values, the growth bound
/// `ℓ_{ψ_N}(g) ≥ n/2` for `g` outside `G_n = ∪_{j≤n} F_j`
/// (`F_j = {g : ‖φ_j(g)‖ ≥ ½}`), and the `1/2^j` closeness bookkeeping of
/// each `φ_j` on the chain sets.
pub fn haagerup_to_nd<T: Real>(
    family: &PDFamily<T>,
    action: &Action<T>,
    chain: &ExhaustionChain,
    tol: &Tolerance<T>,
) -> Result<(GroupFunction<T>, CheckReport<T>), Error> {
    let group = action.group().clone();
    if chain.subset(chain.len() - 1).len() != group.order() {
        return Err(Error::InvalidInput("chain does not match the group".into()));
    }
    let mut report = CheckReport::new();

    // Summands 1_A − φ_j are normalised negative definite; the cone is
    // closed under finite sums.
    let mut phis = Vec::with_capacity(family.len());
    let mut psi: Option<GroupFunction<T>> = None;
    for h in family.members() {
        let phi = squared_modulus(h, action, tol)?;
        let summand = one_minus(&phi, action, tol)?;
        psi = Some(match psi {
            None => summand,
            Some(acc) => acc.add(&summand)?,
        });
        phis.push(phi);
    }
    let psi = psi.expect("family is nonempty");

    let nd = is_alpha_nd_gamma(&psi, action, tol);
    report.push_detailed(
        "negative_definite",
        nd.passed,
        nd.residual,
        format!("threshold {}", nd.threshold),
    );
    let norm_e = psi.value(group.identity()).op_norm();
    report.push("normalized", norm_e == T::zero(), norm_e);
    report.push("central_values", psi.is_central(tol), psi.central_residual());
    let thr = tol.effective(psi.sup_norm().max(T::one()));
    let mut pos = T::zero();
    for v in psi.values() {
        pos = pos.max(-v.spectral_min(tol)?);
    }
    report.push("positive_values", pos <= thr, pos);

    // F_j = {g : ‖φ_j(g)‖ ≥ ½}; for positive central values the norm is
    // the top of the spectrum.
    let half = T::from_f64_lit(0.5);
    let lower = spectral_lower(&psi, tol)?;
    let f_sets: Vec<Vec<bool>> = phis
        .iter()
        .map(|phi| {
            group
                .elements()
                .map(|g| phi.value(g).op_norm() >= half)
                .collect()
        })
        .collect();
    let mut worst_gap = T::zero();
    let mut worst_detail = String::from("bound attained everywhere");
    for n in 1..=family.len() {
        for g in group.elements() {
            let in_gn = (0..n).any(|j| f_sets[j][g]);
            if in_gn {
                continue;
            }
            let need = T::from_f64_lit(n as f64) * half;
            let gap = need - lower[g];
            if gap > worst_gap {
                worst_gap = gap;
                worst_detail = format!("element {g} at depth {n}: lower {} < {}", lower[g], need);
            }
        }
    }
    report.push_detailed("growth_bound", worst_gap <= thr, worst_gap, worst_detail);

    // Bookkeeping: on which chain sets each φ_j is 2^{-j}-close to 1.
    let unit = AlgebraElement::unit(psi.descriptor());
    for (j, phi) in phis.iter().enumerate() {
        let target = T::from_f64_lit(0.5).powi(j as i32 + 1);
        let mut held = Vec::new();
        let mut max_on_own = T::zero();
        for n in 0..chain.len() {
            let dev = chain
                .subset(n)
                .iter()
                .map(|&g| {
                    phi.value(g)
                        .sub(&unit)
                        .expect("same descriptor")
                        .op_norm()
                })
                .fold(T::zero(), |a, b| a.max(b));
            if dev <= target {
                held.push(n.to_string());
            }
            if n == j.min(chain.len() - 1) {
                max_on_own = dev;
            }
        }
        report.push_detailed(
            format!("uniform_bound[{}]", j + 1),
            true,
            max_on_own,
            format!(
                "‖1 − φ_{}‖ ≤ 2^−{} on chain sets {{{}}}",
                j + 1,
                j + 1,
                held.join(", ")
            ),
        );
    }

    Ok((psi, report))
}

/// The exponential family `{e^{−tψ}}_{t∈grid}` of a central normalised
/// negative definite `ψ` with positive values, with its report: members
/// are central positive definite with value exactly `1_A` at `e`, the norm
/// profile `‖e^{−tψ(g)}‖ = e^{−t·ℓ_ψ(g)}` holds within `1e-10`, norms
/// decay monotonically in `t`, and the members converge to `1` pointwise
/// as `t → 0` along the grid.
pub fn nd_to_haagerup<T: Real>(
    psi: &GroupFunction<T>,
    action: &Action<T>,
    t_grid: &[T],
    tol: &Tolerance<T>,
) -> Result<(PDFamily<T>, CheckReport<T>), Error> {
    let central = psi.central_residual();
    if central > tol.effective(psi.sup_norm()) {
        return Err(Error::domain("nd_to_haagerup", "ψ central-valued", central));
    }
    let e = psi.group().identity();
    let e_norm = psi.value(e).op_norm();
    if e_norm > tol.effective(psi.sup_norm()) {
        return Err(Error::domain("nd_to_haagerup", "ψ normalized", e_norm));
    }
    let nd = is_alpha_nd_gamma(psi, action, tol);
    if !nd.passed {
        return Err(Error::domain("nd_to_haagerup", "ψ negative definite", nd.residual));
    }
    let mut pos = T::zero();
    for v in psi.values() {
        pos = pos.max(-v.spectral_min(tol)?);
    }
    if pos > tol.effective(psi.sup_norm().max(T::one())) {
        return Err(Error::domain("nd_to_haagerup", "ψ has positive values", pos));
    }

    let mut ts: Vec<T> = t_grid.to_vec();
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    if ts.is_empty() || ts[0] <= T::zero() {
        return Err(Error::InvalidInput("t grid must be positive".into()));
    }

    let lower = spectral_lower(psi, tol)?;
    let profile_tol = T::from_f64_lit(1e-10);
    let group = psi.group().clone();
    let mut report = CheckReport::new();
    let mut members = Vec::with_capacity(ts.len());
    let mut prev_norms: Option<Vec<T>> = None;

    for &t in &ts {
        let member = exp_function(psi, t)?;
        let pd = is_alpha_pd(&member, action, tol);
        report.push(format!("positive_definite[t={t}]"), pd.passed, pd.residual);
        report.push(
            format!("central[t={t}]"),
            member.is_central(tol),
            member.central_residual(),
        );
        let unit_res = member
            .value(e)
            .sub(&AlgebraElement::unit(psi.descriptor()))
            .expect("same descriptor")
            .op_norm();
        report.push(format!("unit_at_e[t={t}]"), unit_res == T::zero(), unit_res);

        let norms: Vec<T> = member.values().iter().map(|v| v.op_norm()).collect();
        let mut profile = T::zero();
        for g in group.elements() {
            profile = profile.max((norms[g] - (-t * lower[g]).exp()).abs());
        }
        report.push(format!("norm_profile[t={t}]"), profile <= profile_tol, profile);

        if let Some(prev) = &prev_norms {
            // Larger t means smaller norms, entry by entry.
            let mut mono = T::zero();
            for g in group.elements() {
                mono = mono.max(norms[g] - prev[g]);
            }
            report.push(format!("monotone_decay[t={t}]"), mono <= profile_tol, mono);
        }
        prev_norms = Some(norms);
        members.push(member);
    }

    // Pointwise convergence to 1 as t → 0, with the first-order bound
    // ‖e^{−tψ(g)} − 1‖ ≤ t‖ψ‖e^{t‖ψ‖}.
    let t0 = ts[0];
    let sup = psi.sup_norm();
    let mut conv = T::zero();
    let unit = AlgebraElement::unit(psi.descriptor());
    for v in members[0].values() {
        conv = conv.max(v.sub(&unit).expect("same descriptor").op_norm());
    }
    let bound = t0 * sup * (t0 * sup).exp() + tol.effective(T::one());
    report.push("pointwise_convergence", conv <= bound, conv);

    let family = PDFamily::new(members, action, tol)?;
    Ok((family, report))
}

/// For each chain set, the largest value norm outside it: the windowed
/// stand-in for vanishing at infinity. The profile is non-increasing by
/// construction; the final set has empty complement.
pub fn c0_window_report<T: Real>(
    f: &GroupFunction<T>,
    chain: &ExhaustionChain,
) -> CheckReport<T> {
    let mut report = CheckReport::new();
    let mut prev = T::infinity();
    for n in 0..chain.len() {
        let complement = chain.complement(n);
        if complement.is_empty() {
            report.push_detailed(format!("off_window[{n}]"), true, T::zero(), "vacuous");
        } else {
            let m = complement
                .iter()
                .map(|&g| f.value(g).op_norm())
                .fold(T::zero(), |a, b| a.max(b));
            report.push(format!("off_window[{n}]"), m <= prev, m);
            prev = m;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraDescriptor;
    use num_complex::Complex;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn scalar_fn(group: &FiniteGroup, vals: &[Complex<f64>]) -> (GroupFunction<f64>, Action<f64>) {
        let d = AlgebraDescriptor::new(vec![1]).unwrap();
        let f = GroupFunction::lift_scalar(group.clone(), &d, vals).unwrap();
        let a = Action::trivial(group.clone(), d);
        (f, a)
    }

    fn re(vals: &[f64]) -> Vec<Complex<f64>> {
        vals.iter().map(|&v| Complex::new(v, 0.0)).collect()
    }

    #[test]
    fn chain_validation() {
        assert!(ExhaustionChain::new(3, vec![vec![0], vec![0, 1, 2]]).is_ok());
        // Not increasing.
        assert!(ExhaustionChain::new(3, vec![vec![1], vec![0, 2], vec![0, 1, 2]]).is_err());
        // Last set not the full group.
        assert!(ExhaustionChain::new(3, vec![vec![0], vec![0, 1]]).is_err());
        // Out of range.
        assert!(ExhaustionChain::new(2, vec![vec![0, 5], vec![0, 1]]).is_err());
    }

    #[test]
    fn spectral_lower_oracle() {
        let g = FiniteGroup::cyclic(2);
        let d = AlgebraDescriptor::new(vec![2]).unwrap();
        let mut v = AlgebraElement::<f64>::zero(&d);
        v.block_mut(0)[(0, 0)] = Complex::new(1.0, 0.0);
        v.block_mut(0)[(1, 1)] = Complex::new(3.0, 0.0);
        let f = GroupFunction::new(g, d, vec![v.clone(), v]).unwrap();
        let lows = spectral_lower(&f, &tol()).unwrap();
        assert!((lows[0] - 1.0).abs() < 1e-14);
        assert!((lows[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_lower_rejects_non_sa() {
        let g = FiniteGroup::cyclic(1);
        let (f, _) = scalar_fn(&g, &[Complex::new(0.0, 2.0)]);
        assert!(spectral_lower(&f, &tol()).is_err());
    }

    #[test]
    fn squared_modulus_of_character_is_one() {
        let g = FiniteGroup::cyclic(4);
        let chi: Vec<Complex<f64>> = (0..4)
            .map(|k| Complex::from_polar(1.0, std::f64::consts::FRAC_PI_2 * k as f64))
            .collect();
        let (h, a) = scalar_fn(&g, &chi);
        let phi = squared_modulus(&h, &a, &tol()).unwrap();
        for g in 0..4 {
            assert!((phi.value(g).block(0)[(0, 0)].re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn haagerup_to_nd_single_member() {
        let g = FiniteGroup::cyclic(2);
        let (h, a) = scalar_fn(&g, &re(&[1.0, 0.0]));
        let family = PDFamily::new(vec![h], &a, &tol()).unwrap();
        let chain = ExhaustionChain::trivial(a.group());
        let (psi, report) = haagerup_to_nd(&family, &a, &chain, &tol()).unwrap();
        assert!(report.all_passed(), "{report:?}");
        // ψ = (0, 1) and ℓ_ψ(1) = 1 ≥ ½.
        assert!(psi.value(0).op_norm() < 1e-15);
        assert!((psi.value(1).block(0)[(0, 0)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haagerup_to_nd_three_identical_members() {
        let g = FiniteGroup::cyclic(2);
        let (h, a) = scalar_fn(&g, &re(&[1.0, 0.5]));
        let family = PDFamily::new(vec![h.clone(), h.clone(), h], &a, &tol()).unwrap();
        let chain = ExhaustionChain::trivial(a.group());
        let (psi, report) = haagerup_to_nd(&family, &a, &chain, &tol()).unwrap();
        assert!(report.all_passed(), "{report:?}");
        // φ = (1, ¼), so ψ₃(1) = 3·(3/4) = 9/4 and the depth-3 bound is 3/2.
        assert!((psi.value(1).block(0)[(0, 0)].re - 2.25).abs() < 1e-14);
    }

    #[test]
    fn family_rejects_unnormalised_members() {
        let g = FiniteGroup::cyclic(2);
        let (h, a) = scalar_fn(&g, &re(&[2.0, 1.0]));
        assert!(PDFamily::new(vec![h], &a, &tol()).is_err());
        let (bad, _) = scalar_fn(&g, &re(&[1.0, 2.0]));
        assert!(PDFamily::new(vec![bad], &a, &tol()).is_err());
    }

    #[test]
    fn nd_to_haagerup_scalar() {
        let g = FiniteGroup::cyclic(2);
        let (psi, a) = scalar_fn(&g, &re(&[0.0, 1.0]));
        let (family, report) = nd_to_haagerup(&psi, &a, &[0.001, 0.1, 1.0], &tol()).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(family.len(), 3);
        // The t = 1 member is (1, e⁻¹).
        let m = &family.members()[2];
        assert!((m.value(1).block(0)[(0, 0)].re - (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn nd_to_haagerup_rejects_bad_inputs() {
        let g = FiniteGroup::cyclic(2);
        let (neg, a) = scalar_fn(&g, &re(&[0.0, -1.0]));
        assert!(nd_to_haagerup(&neg, &a, &[1.0], &tol()).is_err());
        let (shifted, _) = scalar_fn(&g, &re(&[1.0, 2.0]));
        assert!(nd_to_haagerup(&shifted, &a, &[1.0], &tol()).is_err());
    }

    #[test]
    fn round_trip_preserves_nd_verdict() {
        let n = 4;
        let g = FiniteGroup::cyclic(n);
        let vals: Vec<f64> = (0..n)
            .map(|k| 1.0 - (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
            .collect();
        let (psi, a) = scalar_fn(&g, &re(&vals));
        let (family, _) = nd_to_haagerup(&psi, &a, &[0.25, 0.5, 1.0], &tol()).unwrap();
        let chain = ExhaustionChain::trivial(a.group());
        let (back, report) = haagerup_to_nd(&family, &a, &chain, &tol()).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert!(crate::definiteness::is_alpha_nd_direct(&back, &a, &tol()).passed);
    }

    #[test]
    fn window_report_profile() {
        let g = FiniteGroup::cyclic(4);
        let (psi, a) = scalar_fn(&g, &re(&[0.0, 1.0, 4.0, 1.0]));
        let f = exp_function(&psi, 1.0).unwrap();
        let chain = ExhaustionChain::new(4, vec![vec![0], vec![0, 1, 3], vec![0, 1, 2, 3]]).unwrap();
        let report = c0_window_report(&f, &chain);
        assert!(report.all_passed());
        // Off {e} the largest norm is e⁻¹; off {0,1,3} it is e⁻⁴.
        assert!((report.lines[0].residual - (-1.0f64).exp()).abs() < 1e-14);
        assert!((report.lines[1].residual - (-4.0f64).exp()).abs() < 1e-14);
        assert_eq!(report.lines[2].detail.as_deref(), Some("vacuous"));
        let _ = a;
    }
}
