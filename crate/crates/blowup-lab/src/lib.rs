//! A numerical laboratory for finite-time blow-up in the semilinear
//! heat equation
//!
//! ```text
//!   u_t = u_xx − 2 f(x) u − |u|^k,        u(0, x) = h(x) ≤ 0,
//! ```
//!
//! on the line, where the damping coefficient `f ≥ 0` decays away from
//! the origin. Around the zero state the linearization
//! `w_t = w_xx − 2 f w` looks comfortably stable, yet arbitrarily
//! small nonpositive bumps `h` placed far enough into the decayed
//! region drive the full equation to blow-up in finite time. The crate
//! provides the pieces needed to demonstrate, test, and certify that
//! mechanism numerically:
//!
//! - [`grid`], [`quadrature`], [`special`]: meshes, fields, trapezoid
//!   quadrature, L^p norms, `erf`/`erfc`, and the heat kernel;
//! - [`model`]: damping coefficients, the Gaussian initial-data
//!   family, and the parameter-selection procedure that produces a
//!   certified blow-up configuration from a target amplitude;
//! - [`solver`]: an implicit–explicit Crank–Nicolson scheme with
//!   adaptive time steps, blow-up detection, and comparison checks;
//! - [`fence`]: the pairing functional J, the fence inequality that
//!   bounds it, decay-dichotomy margins, and the certificate function
//!   A(t) whose maximum exceeding 1 rules out global existence.
//!
//! The guide in `book/` walks through the same material narratively;
//! its code snippets compile and run as doc-tests of this crate.

pub mod error;
pub mod fence;
pub mod grid;
pub mod model;
pub mod quadrature;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use fence::{
    certificate_a, constant_ic_margin, fence_check, j_identity_residual, kernel_tail_bound,
    lower_bound_chain, pairing_j, poly_decay_bound, CertificateResult, FenceResult,
};
pub use grid::{Grid1D, ScalarField, TimeSeries};
pub use model::{find_x0, find_x1, select_parameters, GaussianIc, Potential, TailBound, TheoremParams};
pub use quadrature::{integrate, integrate_product, norm_lp};
pub use solver::{
    boundary_decay_check, comparison_assert, detect_blowup, solve_heat, solve_linearized,
    solve_nonlinear, BlowupMethod, BlowupReport, Boundary, InitialData, SimConfig, Trajectory,
};
pub use special::{erf, erfc, heat_kernel, heat_kernel_field};

#[cfg(doctest)]
mod book {
    //! Runs every Rust snippet in the guide as a doc-test, so the book
    //! cannot drift out of sync with the library.
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/grids-and-quadrature.md")]
    mod grids_and_quadrature {}
    #[doc = include_str!("../../../book/src/parameter-selection.md")]
    mod parameter_selection {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/fences.md")]
    mod fences {}
    #[doc = include_str!("../../../book/src/certificate.md")]
    mod certificate {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
