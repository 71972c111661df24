//! Numerics for polyanalytic Fock spaces `F_{α,m}(ℂⁿ)` and their flat and
//! Gaussian-RBF models: closed-form kernels, the flattening isometry, the
//! horizontal fiber decomposition, matrix symbols of vertical Toeplitz
//! operators, and verification suites that check each identity against an
//! independent oracle.
//!
//! ```
//! use polyfock::kernels::{kernel_f, ComplexPoint, KernelSpec};
//!
//! let spec = KernelSpec::new(1, 2, 1.0).unwrap();
//! let z = ComplexPoint::from_split(vec![0.5], vec![0.0]).unwrap();
//! // K(z, z) = e^{α|z|²} L^{(1)}_1(0) = 2 e^{1/4}
//! let k = kernel_f(&spec, &z, &z).unwrap();
//! assert!((k.re - 2.0 * 0.25f64.exp()).abs() < 1e-14);
//! ```

pub mod basis_oracle;
pub mod error;
pub mod io;
pub mod kernels;
pub mod multiindex;
pub mod orthopoly;
pub mod quadrature;
pub mod spectral;
pub mod symbols;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use kernels::{ComplexPoint, KernelSpec};
pub use multiindex::{IndexTable, MultiIndex};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/indices.md")]
    mod indices {}
    #[doc = include_str!("../../../book/src/laguerre.md")]
    mod laguerre {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/fibers.md")]
    mod fibers {}
    #[doc = include_str!("../../../book/src/symbols.md")]
    mod symbols {}
    #[doc = include_str!("../../../book/src/basis.md")]
    mod basis {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
