//! Auslander-Reiten quivers of perfect DG modules over finite-dimensional
//! cochain DG algebras, in exact arithmetic.
//!
//! The layers, bottom to top:
//!
//! * [`scalar`] / [`matrix`] — exact scalars (ℚ, 𝔽_p) and dense linear
//!   algebra: rref, kernels, solving, Kronecker products;
//! * [`dga`] / [`module`] / [`morphism`] / [`complex`] — validated cochain
//!   DG algebras and finite-dimensional DG modules with suspensions, duals,
//!   cones;
//! * [`hom`] / [`tensor`] — Hom complexes, morphism classes up to homotopy,
//!   tensor products over the algebra, the `R`/`DR` bimodules;
//! * [`resolution`] — minimal semi-free resolutions, `β`, Ext dimensions,
//!   the non-compactness census of the residue module;
//! * [`decompose`] / [`derived`] — Krull-Schmidt decomposition, derived
//!   isomorphism testing, endomorphism rings, the translation
//!   `τ = Σ⁻¹(DR ⊗ᴸ −)` and the duality detection gating it;
//! * [`quiver`] / [`chains`] / [`translation`] — mesh-by-mesh component
//!   walking with certification, Harada-Sai vanishing, nonzero paths, and
//!   the combinatorial `ℤT/Π` layer;
//! * [`format`] / [`cli`] — byte-stable JSON formats, DOT export, and the
//!   command-line surface.
//!
//! The guide under `book/` is compiled as doc-tests, so its examples stay
//! correct; start with the introduction chapter.

pub mod chains;
pub mod cli;
pub mod complex;
pub mod decompose;
pub mod derived;
pub mod dga;
pub mod endalg;
pub mod error;
pub mod format;
pub mod hom;
pub mod matrix;
pub mod module;
pub mod morphism;
pub mod quiver;
pub mod resolution;
pub mod sample;
pub mod scalar;
pub mod tensor;
pub mod translation;

// The book's code blocks run as doc-tests: each chapter is attached to an
// empty module, so `cargo test --doc` keeps the guide in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/algebras-and-modules.md")]
    mod algebras_and_modules {}
    #[doc = include_str!("../../../book/src/resolutions.md")]
    mod resolutions {}
    #[doc = include_str!("../../../book/src/translation-and-duality.md")]
    mod translation_and_duality {}
    #[doc = include_str!("../../../book/src/walking-components.md")]
    mod walking_components {}
    #[doc = include_str!("../../../book/src/combinatorial-layer.md")]
    mod combinatorial_layer {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli_reference {}
}
