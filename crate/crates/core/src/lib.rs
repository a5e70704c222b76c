//! Verification and construction toolkit for finite C*-dynamical systems.
//!
//! A system consists of a finite-dimensional C*-algebra `A = ⊕_k M_{d_k}(ℂ)`,
//! a finite group `G` given by its Cayley table, and an action `α` of `G` on
//! `A` by *-automorphisms (block permutations combined with unitary
//! conjugation). On top of such a system the crate provides:
//!
//! - positivity and spectral primitives for algebra elements and for block
//!   matrices over the algebra ([`algebra`], [`linalg`]),
//! - checks for α-positive definite and α-negative definite functions
//!   `G → A`, both by the direct quadratic-form definition and by the
//!   associated kernel `γ(g, h) = ψ(g)* + ψ(h) − ψ(e) − α_g(ψ(g⁻¹h))`
//!   ([`definiteness`], [`kernel_cocycle`]),
//! - the Hilbert-module construction that realises a normalised negative
//!   definite function as `ψ(g) = ⟨c(g), c(g)⟩` for a cocycle `c` relative to
//!   a unitary-like action `u` ([`kernel_cocycle`]),
//! - the exponentiation equivalence between negative definite functions and
//!   semigroups `g ↦ e^{−tψ(g)}` of positive definite functions, together
//!   with the induced unital completely positive semigroup on the crossed
//!   product ([`schoenberg`], [`crossed`]),
//! - constructions relating proper growth of negative definite functions to
//!   families of positive definite functions vanishing at infinity in the
//!   windowed, finite-set sense ([`haagerup`]),
//! - JSON system files and deterministic check reports ([`system`],
//!   [`report`]), and ready-made sample systems plus seeded random
//!   generators ([`samples`]).
//!
//! All numerics are generic over the real scalar type through the [`Real`]
//! trait; `f64` aliases for the main types are exported at the crate root.

pub mod algebra;
pub mod crossed;
pub mod definiteness;
pub mod error;
pub mod group;
pub mod group_action;
pub mod haagerup;
pub mod kernel_cocycle;
pub mod linalg;
pub mod report;
pub mod samples;
pub mod schoenberg;
pub mod system;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};

/// Real scalar type underlying all complex arithmetic.
///
/// Implemented for `f32` and `f64`. Every algorithm in the crate is written
/// against this trait; pick the width once and the whole stack (matrices,
/// eigensolves, exponentials, verdicts) follows.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Returns `x` as `Self`, panicking only for values outside the type's
    /// range (never for the constants used internally).
    fn from_f64_lit(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub use algebra::{AlgebraDescriptor, AlgebraElement, AMatrix, Tolerance};
pub use definiteness::{CoefficientClass, GroupFunction, Verdict, Witness};
pub use error::Error;
pub use group::FiniteGroup;
pub use group_action::{Action, BlockAutomorphism, CenterActionView, State};
pub use kernel_cocycle::{Kernel, ModuleRep, ModuleVector};
pub use system::{LoadedSystem, SystemFile};

/// Complex scalar over the crate's default `f64` precision.
pub type C64 = Complex<f64>;
/// Complex scalar over single precision.
pub type C32 = Complex<f32>;

/// Dense complex matrix at default precision.
pub type CMatrixF64 = linalg::CMatrix<f64>;
/// Algebra element at default precision.
pub type AlgebraElementF64 = AlgebraElement<f64>;
/// Block matrix over the algebra at default precision.
pub type AMatrixF64 = AMatrix<f64>;
/// Group action at default precision.
pub type ActionF64 = Action<f64>;
/// Tolerance policy at default precision.
pub type ToleranceF64 = Tolerance<f64>;
/// Group function over `f64` scalars.
pub type GroupFunctionF64 = GroupFunction<f64>;
