//! α-Bernstein-Pălțănea operators and their first-, second- and third-order
//! modifications.
//!
//! The crate evaluates the operators
//!
//! * `Q`: the α-Bernstein basis combined with the Pălțănea Beta kernel,
//! * `J^{M,1}`: the first-order modification driven by a coefficient scheme `(a0, a1)`,
//! * `J̄^{M,2}`: the second-order modification that reproduces linear functions,
//! * `J̃^{M,3}`: the third-order modification that reproduces cubics,
//!
//! on arbitrary functions of `[0, 1]`, together with closed-form moment
//! evaluators, an exact rational oracle for those closed forms, and analysis
//! helpers (error tables, empirical convergence orders, modulus of continuity).
//!
//! ```
//! use alpha_paltanea::{apply, Function1D, OperatorKind, OperatorParams, QuadratureConfig};
//!
//! let params = OperatorParams::new(10, 0.2, 5.0).unwrap();
//! let e1 = Function1D::monomial(1);
//! let y = apply(&OperatorKind::M2Bar, &params, &e1, 0.37, &QuadratureConfig::default()).unwrap();
//! assert!((y - 0.37).abs() < 1e-11);
//! ```

pub mod analysis;
pub mod basis;
mod error;
pub mod field;
pub mod function;
pub mod kernel;
pub mod moments;
pub mod operators;
pub mod quadrature;
pub mod registry;

pub use analysis::{
    bound_ratio_check, error_table, estimate_order, modulus_of_continuity, voronovskaya_gap, BoundRatio,
    ConvergenceReport, ErrorTable, ModulusEstimate, SchemeFamily,
};
pub use basis::{
    alpha_basis, log_binomial, modified_basis_m1, modified_basis_m2, modified_basis_m3, BasisParams,
    CoefficientSchemeM1, SchemeCase, SecondOrderCoefficients, ThirdOrderCoefficients, TildeReading,
};
pub use error::{Error, Result};
pub use function::{Function1D, Polynomial};
pub use kernel::{
    integrate_against_kernel, kernel_density, kernel_raw_moment, KernelParams, QuadratureConfig,
};
pub use moments::MomentReport;
pub use operators::{apply, apply_grid, reduction_check, OperatorKind, OperatorParams};
pub use registry::{lookup, RegistryEntry};
