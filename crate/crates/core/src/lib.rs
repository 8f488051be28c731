//! Quasi-Monte Carlo cubature on the two-dimensional Fibonacci lattice, its
//! boundary-corrected variant for non-periodic integrands, Smolyak
//! sparse-grid sampling and cubature, the Faber/B-spline machinery behind
//! Besov quasi-norms of mixed smoothness, and certified lower-bound witness
//! constructions — plus a convergence harness that measures the asymptotic
//! error laws at desk scale.

pub mod cubature;
pub mod error;
pub mod fiblattice;
pub mod fooling;
pub mod fourier;
pub mod harness;
pub mod rat;
pub mod smolyak;
pub mod splines;

pub use cubature::{apply_rule, fibonacci_nonperiodic, fibonacci_qmc, qmc_error, CubatureRule, Integrand};
pub use error::{Error, Result};
pub use fiblattice::{
    dual_enumerate, dual_enumerate_box, dual_membership, dual_representation, dual_solve,
    fibonacci, fibonacci_lattice, fibonacci_lattice_iter, zaremba_min_product, DualVector,
    FibonacciIndex, LatticePoint2,
};
pub use fooling::{
    build_gk, build_gstar, build_smolyak_witnesses, cells_avoiding, witness_level_for,
    witness_lower_bound, FoolingConfig, WitnessFunction, WitnessKind,
};
pub use fourier::{
    build_chi_s, chi_norm_check, dyadic_block, fib_error_exact, fourier_besov_norm, norm_lp_grid,
    CutoffSystem, TrigPoly2,
};
pub use harness::{
    compare_budget, converge, fit_rate, korobov_fib_error, parse_besov, parse_integrand,
    resolve_nodes, BudgetRow, ConvergeRow, ExperimentSpec, RateFit, RuleFamily,
};
pub use rat::{parse_rat, Rat};
pub use smolyak::{sampling_error, smolyak_cubature, smolyak_grid, smolyak_interpolate, SmolyakGrid, SparseSurplus};
pub use splines::{
    besov_norm_faber, bspline_quasinorm, eval_atom, eval_bspline, faber_decompose,
    faber_reconstruct, stability_check, BSplineAtom, BesovParams, FaberCoefficients,
};
