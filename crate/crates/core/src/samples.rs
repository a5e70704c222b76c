//! Named example systems and seeded random generators for tests,
//! benchmarks, and the command-line search harness.
//!
//! The random constructions lean on a few closure facts:
//! `ψ(g) = h(g) + α_g(h(g⁻¹)*)` is symmetric for any `h`; a classically
//! positive definite scalar function lifted along the unit is α-positive
//! definite for every action; and `1 − f` of such a lift with `f(e) = 1`
//! is normalised α-negative definite. Real coefficient vectors give real,
//! even scalar functions, which keeps the lifted values self-adjoint.

use crate::algebra::{AlgebraDescriptor, AlgebraElement, Tolerance};
use crate::definiteness::{gen_pd_from_vector, one_minus, GroupFunction};
use crate::error::Error;
use crate::group::FiniteGroup;
use crate::group_action::{Action, BlockAutomorphism};
use crate::linalg::CMatrix;
use crate::Real;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Trivial action of `ℤ_n` on `ℂ`.
pub fn trivial_system<T: Real>(n: usize) -> Action<T> {
    let d = AlgebraDescriptor::new(vec![1]).expect("valid descriptor");
    Action::trivial(FiniteGroup::cyclic(n), d)
}

/// `ℤ₂` acting on `M₂` by conjugation with `diag(1, −1)`.
pub fn sign_flip_system<T: Real>() -> Action<T> {
    let d = AlgebraDescriptor::new(vec![2]).expect("valid descriptor");
    let u = CMatrix::from_fn(2, 2, |i, j| {
        if i != j {
            Complex::new(T::zero(), T::zero())
        } else if i == 0 {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(-T::one(), T::zero())
        }
    });
    Action::new(
        FiniteGroup::cyclic(2),
        d.clone(),
        vec![
            BlockAutomorphism::identity(&d),
            BlockAutomorphism {
                block_perm: vec![0],
                unitaries: vec![u],
            },
        ],
    )
    .expect("valid action")
}

/// `ℤ₂` acting on `ℂ ⊕ ℂ` by swapping the summands.
pub fn swap_system<T: Real>() -> Action<T> {
    let d = AlgebraDescriptor::new(vec![1, 1]).expect("valid descriptor");
    Action::new(
        FiniteGroup::cyclic(2),
        d.clone(),
        vec![
            BlockAutomorphism::identity(&d),
            BlockAutomorphism {
                block_perm: vec![1, 0],
                unitaries: vec![CMatrix::identity(1), CMatrix::identity(1)],
            },
        ],
    )
    .expect("valid action")
}

/// `ℤ_n` acting on `M₂` by conjugation with `diag(ω^k, ω^{−k})`,
/// `ω = e^{2πi/n}`.
pub fn character_system<T: Real>(n: usize) -> Action<T> {
    let d = AlgebraDescriptor::new(vec![2]).expect("valid descriptor");
    let autos = (0..n)
        .map(|k| {
            let angle = T::from_f64_lit(2.0) * T::PI() * T::from_f64_lit(k as f64 / n as f64);
            let u = CMatrix::from_fn(2, 2, |i, j| {
                if i != j {
                    Complex::new(T::zero(), T::zero())
                } else if i == 0 {
                    Complex::from_polar(T::one(), angle)
                } else {
                    Complex::from_polar(T::one(), -angle)
                }
            });
            BlockAutomorphism {
                block_perm: vec![0],
                unitaries: vec![u],
            }
        })
        .collect();
    Action::new(FiniteGroup::cyclic(n), d, autos).expect("valid action")
}

/// `ℤ₆` acting on `M₂ ⊕ ℂ`: character conjugation on the `M₂` summand,
/// trivially on the scalar one.
pub fn z6_mixed_system<T: Real>() -> Action<T> {
    let n = 6;
    let d = AlgebraDescriptor::new(vec![2, 1]).expect("valid descriptor");
    let autos = (0..n)
        .map(|k| {
            let angle = T::from_f64_lit(2.0) * T::PI() * T::from_f64_lit(k as f64 / n as f64);
            let u = CMatrix::from_fn(2, 2, |i, j| {
                if i != j {
                    Complex::new(T::zero(), T::zero())
                } else if i == 0 {
                    Complex::from_polar(T::one(), angle)
                } else {
                    Complex::from_polar(T::one(), -angle)
                }
            });
            BlockAutomorphism {
                block_perm: vec![0, 1],
                unitaries: vec![u, CMatrix::identity(1)],
            }
        })
        .collect();
    Action::new(FiniteGroup::cyclic(n), d, autos).expect("valid action")
}

/// `S₃` acting on `M₂` through its two-dimensional irreducible
/// representation, realised on the sum-zero plane of `ℝ³`.
pub fn s3_standard_system<T: Real>() -> Action<T> {
    s3_on(AlgebraDescriptor::new(vec![2]).expect("valid descriptor"))
}

/// `S₃` acting on `M₂ ⊕ ℂ`: standard representation on the first summand,
/// trivially on the second.
pub fn s3_mixed_system<T: Real>() -> Action<T> {
    s3_on(AlgebraDescriptor::new(vec![2, 1]).expect("valid descriptor"))
}

fn s3_on<T: Real>(d: AlgebraDescriptor) -> Action<T> {
    let group = FiniteGroup::symmetric(3);
    // Orthonormal basis of the sum-zero plane in ℝ³.
    let b: [[f64; 2]; 3] = [
        [1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt()],
        [-1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt()],
        [0.0, -2.0 / 6f64.sqrt()],
    ];
    let perms = s3_permutations();
    let autos = perms
        .iter()
        .map(|p| {
            // ρ(σ) = Bᵀ P_σ B restricted to the plane.
            let u = CMatrix::from_fn(2, 2, |a, c| {
                let mut acc = 0.0;
                for (j, &pj) in p.iter().enumerate() {
                    acc += b[pj][a] * b[j][c];
                }
                Complex::new(T::from_f64_lit(acc), T::zero())
            });
            let mut unitaries = vec![u];
            for &dk in &d.block_dims()[1..] {
                unitaries.push(CMatrix::identity(dk));
            }
            let block_perm = (0..d.num_blocks()).collect();
            BlockAutomorphism {
                block_perm,
                unitaries,
            }
        })
        .collect();
    Action::new(group, d, autos).expect("valid action")
}

/// The permutations of `{0,1,2}` in the order used by
/// [`FiniteGroup::symmetric`] (lexicographic).
fn s3_permutations() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2],
        vec![0, 2, 1],
        vec![1, 0, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![2, 1, 0],
    ]
}

/// The standard catalogue of small systems exercised by tests and the
/// search harness.
pub fn sample_systems<T: Real>() -> Vec<(&'static str, Action<T>)> {
    vec![
        ("z2-trivial", trivial_system(2)),
        ("z3-trivial", trivial_system(3)),
        ("z2-sign-flip", sign_flip_system()),
        ("z2-swap", swap_system()),
        ("z4-character", character_system(4)),
        ("z6-mixed", z6_mixed_system()),
        ("s3-standard", s3_standard_system()),
        ("s3-mixed", s3_mixed_system()),
    ]
}

/// Deterministic generator of random systems and functions.
pub struct Sampler<T> {
    rng: ChaCha8Rng,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Real> Sampler<T> {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            _marker: std::marker::PhantomData,
        }
    }

    /// Standard normal via Box–Muller.
    pub fn gaussian(&mut self) -> T {
        let u1: f64 = self.rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = self.rng.gen();
        T::from_f64_lit((-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos())
    }

    fn gaussian_complex(&mut self) -> Complex<T> {
        Complex::new(self.gaussian(), self.gaussian())
    }

    /// Haar-ish random unitary: Gram–Schmidt of a Gaussian matrix.
    pub fn random_unitary(&mut self, d: usize) -> CMatrix<T> {
        loop {
            let mut cols: Vec<Vec<Complex<T>>> = (0..d)
                .map(|_| (0..d).map(|_| self.gaussian_complex()).collect())
                .collect();
            let mut ok = true;
            for j in 0..d {
                for i in 0..j {
                    let mut dot = Complex::new(T::zero(), T::zero());
                    for r in 0..d {
                        dot += cols[i][r].conj() * cols[j][r];
                    }
                    for r in 0..d {
                        let prev = cols[i][r];
                        cols[j][r] = cols[j][r] - dot * prev;
                    }
                }
                let norm = cols[j]
                    .iter()
                    .map(|z| z.norm_sqr())
                    .fold(T::zero(), |a, b| a + b)
                    .sqrt();
                if norm < T::from_f64_lit(1e-6) {
                    ok = false;
                    break;
                }
                for r in 0..d {
                    cols[j][r] = cols[j][r] / Complex::new(norm, T::zero());
                }
            }
            if ok {
                return CMatrix::from_fn(d, d, |i, j| cols[j][i]);
            }
        }
    }

    /// Random element with independent Gaussian entries scaled by `scale`.
    pub fn random_element(&mut self, d: &AlgebraDescriptor, scale: T) -> AlgebraElement<T> {
        let mut out = AlgebraElement::zero(d);
        for k in 0..d.num_blocks() {
            let dk = d.block_dims()[k];
            for i in 0..dk {
                for j in 0..dk {
                    out.block_mut(k)[(i, j)] = self.gaussian_complex().scale(scale);
                }
            }
        }
        out
    }

    /// Random central element (a scalar per summand).
    pub fn random_central_element(&mut self, d: &AlgebraDescriptor, scale: T) -> AlgebraElement<T> {
        let scalars: Vec<Complex<T>> = (0..d.num_blocks())
            .map(|_| self.gaussian_complex().scale(scale))
            .collect();
        let mut out = AlgebraElement::zero(d);
        for (k, &z) in scalars.iter().enumerate() {
            let dk = d.block_dims()[k];
            for i in 0..dk {
                out.block_mut(k)[(i, i)] = z;
            }
        }
        out
    }

    /// Conjugates the action by a fixed random block unitary: the same
    /// system in a rotated frame.
    pub fn conjugated(&mut self, action: &Action<T>) -> Action<T> {
        let d = action.descriptor().clone();
        let w: Vec<CMatrix<T>> = d
            .block_dims()
            .iter()
            .map(|&dk| self.random_unitary(dk))
            .collect();
        let autos = action
            .group()
            .elements()
            .map(|g| {
                let auto = action.automorphism(g);
                let unitaries = auto
                    .unitaries
                    .iter()
                    .enumerate()
                    .map(|(k, u)| {
                        w[auto.block_perm[k]]
                            .matmul(u)
                            .matmul(&w[k].adjoint())
                    })
                    .collect();
                BlockAutomorphism {
                    block_perm: auto.block_perm.clone(),
                    unitaries,
                }
            })
            .collect();
        Action::new(action.group().clone(), d, autos).expect("conjugation preserves the axioms")
    }

    /// Arbitrary random function `G → A`.
    pub fn random_function(
        &mut self,
        group: &FiniteGroup,
        d: &AlgebraDescriptor,
        scale: T,
    ) -> GroupFunction<T> {
        GroupFunction::from_fn(group.clone(), d.clone(), |_| self.random_element(d, scale))
    }

    /// Random function satisfying the symmetry condition
    /// `α_g(ψ(g⁻¹)) = ψ(g)*` exactly: `ψ(g) = h(g) + α_g(h(g⁻¹)*)` for a
    /// random `h`. Mixed with respect to definiteness.
    pub fn random_symmetric_function(&mut self, action: &Action<T>, scale: T) -> GroupFunction<T> {
        let h = self.random_function(action.group(), action.descriptor(), scale);
        symmetrize(&h, action)
    }

    /// As [`Sampler::random_symmetric_function`] but with central values.
    pub fn random_central_symmetric_function(
        &mut self,
        action: &Action<T>,
        scale: T,
    ) -> GroupFunction<T> {
        let d = action.descriptor().clone();
        let h = GroupFunction::from_fn(action.group().clone(), d.clone(), |_| {
            self.random_central_element(&d, scale)
        });
        symmetrize(&h, action)
    }

    /// Random positive definite function `h(g) = Σ_s ξ(s)* α_g(ξ(g⁻¹s))`.
    pub fn random_pd_function(&mut self, action: &Action<T>, scale: T) -> GroupFunction<T> {
        let xi: Vec<AlgebraElement<T>> = action
            .group()
            .elements()
            .map(|_| self.random_element(action.descriptor(), scale))
            .collect();
        gen_pd_from_vector(&xi, action).expect("vector over the group")
    }

    /// Classical positive definite scalar function with `f(e) = 1`, from a
    /// random real unit vector in `ℓ²(G)`; real and even.
    pub fn classical_pd_unit(&mut self, group: &FiniteGroup) -> Vec<Complex<T>> {
        let n = group.order();
        let mut xi: Vec<T> = (0..n).map(|_| self.gaussian()).collect();
        let norm = xi.iter().map(|&x| x * x).fold(T::zero(), |a, b| a + b).sqrt();
        for x in xi.iter_mut() {
            *x = *x / norm;
        }
        group
            .elements()
            .map(|g| {
                let mut acc = T::zero();
                for s in group.elements() {
                    acc += xi[s] * xi[group.mul(group.inv(g), s)];
                }
                Complex::new(acc, T::zero())
            })
            .collect()
    }

    /// Classical normalised negative definite scalar function (real, even,
    /// `f(e) = 0`): `1 − classical_pd_unit`.
    pub fn classical_nd0(&mut self, group: &FiniteGroup) -> Vec<T> {
        self.classical_pd_unit(group)
            .into_iter()
            .map(|z| T::one() - z.re)
            .collect()
    }

    /// Central normalised negative definite function with self-adjoint
    /// values, valid for any action: `1 − f` of a lifted classical
    /// positive definite unit function.
    pub fn random_central_nd0(&mut self, action: &Action<T>) -> GroupFunction<T> {
        let f = self.classical_pd_unit(action.group());
        let lift = GroupFunction::lift_scalar(action.group().clone(), action.descriptor(), &f)
            .expect("scalars over the group");
        // Values of the lift are real multiples of the unit, so 1 − f has
        // self-adjoint values; f(e) = 1 is fixed by every action.
        one_minus(&lift.re_part(), action, &Tolerance::default())
            .expect("lifted classical positive definite unit function")
    }

    /// Noncentral normalised negative definite function for actions whose
    /// unitaries are diagonal and whose block permutation is trivial: an
    /// independent classical negative definite function on each diagonal
    /// slot.
    pub fn random_diagonal_nd(&mut self, action: &Action<T>) -> Result<GroupFunction<T>, Error> {
        let d = action.descriptor().clone();
        for g in action.group().elements() {
            let auto = action.automorphism(g);
            if auto.block_perm.iter().enumerate().any(|(k, &p)| k != p) {
                return Err(Error::InvalidAction(
                    "diagonal construction needs a trivial block permutation".into(),
                ));
            }
            for u in &auto.unitaries {
                for i in 0..u.rows() {
                    for j in 0..u.cols() {
                        if i != j && u[(i, j)].norm_sqr() > T::from_f64_lit(1e-24) {
                            return Err(Error::InvalidAction(
                                "diagonal construction needs diagonal unitaries".into(),
                            ));
                        }
                    }
                }
            }
        }
        let slots: usize = d.block_dims().iter().sum();
        let fs: Vec<Vec<T>> = (0..slots).map(|_| self.classical_nd0(action.group())).collect();
        let values = action
            .group()
            .elements()
            .map(|g| {
                let mut v = AlgebraElement::zero(&d);
                let mut slot = 0;
                for (k, &dk) in d.block_dims().iter().enumerate() {
                    for i in 0..dk {
                        v.block_mut(k)[(i, i)] = Complex::new(fs[slot][g], T::zero());
                        slot += 1;
                    }
                }
                v
            })
            .collect();
        GroupFunction::new(action.group().clone(), d, values)
    }

    /// Random tuple `(g_1..g_m, b_1..b_m)` with `Σ b_i = 0`; the group
    /// elements are drawn with replacement, so repeats occur.
    pub fn random_sum_zero_tuple(
        &mut self,
        action: &Action<T>,
        len: usize,
    ) -> (Vec<usize>, Vec<AlgebraElement<T>>) {
        assert!(len >= 2, "a sum-zero tuple needs at least two entries");
        let n = action.group().order();
        let elements: Vec<usize> = (0..len)
            .map(|_| (self.rng.gen::<u64>() as usize) % n)
            .collect();
        let mut coeffs: Vec<AlgebraElement<T>> = (0..len - 1)
            .map(|_| self.random_element(action.descriptor(), T::one()))
            .collect();
        let mut last = AlgebraElement::zero(action.descriptor());
        for c in &coeffs {
            last = last.sub(c).expect("same descriptor");
        }
        coeffs.push(last);
        (elements, coeffs)
    }

    /// Breaks negative definiteness by pushing one non-identity value down
    /// by `depth·1_A`.
    pub fn spoil_nd(&mut self, f: &GroupFunction<T>, depth: T) -> GroupFunction<T> {
        let n = f.group().order();
        if n == 1 {
            return f.clone();
        }
        let g0 = 1 + (self.rng.gen::<u64>() as usize) % (n - 1);
        let ginv = f.group().inv(g0);
        let unit = AlgebraElement::unit(f.descriptor());
        GroupFunction::from_fn(f.group().clone(), f.descriptor().clone(), |g| {
            if g == g0 || g == ginv {
                f.value(g).sub(&unit.scale_re(depth)).expect("same descriptor")
            } else {
                f.value(g).clone()
            }
        })
    }
}

/// `ψ(g) = h(g) + α_g(h(g⁻¹)*)`: the symmetrisation that enforces
/// `α_g(ψ(g⁻¹)) = ψ(g)*`.
pub fn symmetrize<T: Real>(h: &GroupFunction<T>, action: &Action<T>) -> GroupFunction<T> {
    GroupFunction::from_fn(h.group().clone(), h.descriptor().clone(), |g| {
        let mirrored = action.apply(g, &h.value(h.group().inv(g)).adjoint());
        h.value(g).add(&mirrored).expect("same descriptor")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::definiteness::{is_alpha_nd_direct, is_alpha_nd_gamma, is_alpha_pd};

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    #[test]
    fn all_sample_systems_validate() {
        for (name, action) in sample_systems::<f64>() {
            let report = action.validate(&tol());
            assert!(report.all_passed(), "{name}: {report:?}");
        }
    }

    #[test]
    fn s3_representation_is_faithful() {
        let a = s3_standard_system::<f64>();
        // Non-identity elements act non-trivially.
        let units = crate::algebra::matrix_units::<f64>(a.descriptor());
        for g in 1..6 {
            let moved = units.iter().any(|u| {
                a.apply(g, u).sub(u).unwrap().op_norm() > 1e-6
            });
            assert!(moved, "element {g} acts trivially");
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut s = Sampler::<f64>::new(7);
        for d in [1usize, 2, 3, 5] {
            let u = s.random_unitary(d);
            let res = u.adjoint().matmul(&u).sub(&CMatrix::identity(d)).max_abs();
            assert!(res < 1e-12, "d = {d}: {res}");
        }
    }

    #[test]
    fn conjugated_actions_stay_valid() {
        let mut s = Sampler::<f64>::new(11);
        for (name, action) in sample_systems::<f64>() {
            let conj = s.conjugated(&action);
            let report = conj.validate(&tol());
            assert!(report.all_passed(), "{name}: {report:?}");
        }
    }

    #[test]
    fn symmetrized_functions_satisfy_symmetry() {
        let mut s = Sampler::<f64>::new(3);
        for (_, action) in sample_systems::<f64>() {
            let f = s.random_symmetric_function(&action, 1.0);
            let (res, _) = f.symmetry_residual(&action);
            assert!(res < 1e-12, "{res}");
        }
    }

    #[test]
    fn generated_pd_functions_pass() {
        let mut s = Sampler::<f64>::new(5);
        for (name, action) in sample_systems::<f64>() {
            let f = s.random_pd_function(&action, 0.8);
            let v = is_alpha_pd(&f, &action, &tol());
            assert!(v.passed, "{name}: {v:?}");
        }
    }

    #[test]
    fn generated_central_nd0_pass_both_checks() {
        let mut s = Sampler::<f64>::new(9);
        for (name, action) in sample_systems::<f64>() {
            let f = s.random_central_nd0(&action);
            assert!(f.value(action.group().identity()).op_norm() < 1e-12);
            assert!(is_alpha_nd_direct(&f, &action, &tol()).passed, "{name}");
            assert!(is_alpha_nd_gamma(&f, &action, &tol()).passed, "{name}");
        }
    }

    #[test]
    fn diagonal_nd_works_on_character_system() {
        let mut s = Sampler::<f64>::new(13);
        let action = character_system::<f64>(4);
        let f = s.random_diagonal_nd(&action).unwrap();
        assert!(is_alpha_nd_direct(&f, &action, &tol()).passed);
        assert!(is_alpha_nd_gamma(&f, &action, &tol()).passed);
        // Values are genuinely noncentral with overwhelming probability.
        assert!(f.central_residual() > 1e-6);

        // Rejected on systems that move blocks or mix entries.
        assert!(s.random_diagonal_nd(&swap_system()).is_err());
        assert!(s.random_diagonal_nd(&s3_standard_system()).is_err());
    }

    #[test]
    fn spoiled_functions_fail_nd() {
        let mut s = Sampler::<f64>::new(17);
        let action = trivial_system::<f64>(4);
        let f = s.random_central_nd0(&action);
        let bad = s.spoil_nd(&f, 5.0);
        assert!(!is_alpha_nd_direct(&bad, &action, &tol()).passed);
        assert!(!is_alpha_nd_gamma(&bad, &action, &tol()).passed);
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = character_system::<f64>(4);
        let mut s1 = Sampler::<f64>::new(42);
        let mut s2 = Sampler::<f64>::new(42);
        let f1 = s1.random_symmetric_function(&a, 1.0);
        let f2 = s2.random_symmetric_function(&a, 1.0);
        assert!(f1.distance(&f2).unwrap() == 0.0);
    }
}
