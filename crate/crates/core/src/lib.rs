//! Exact feasibility of linear systems mixing `<=`, `<`, `=` and `!=` rows.
//!
//! Systems are reduced to asymptotic LPs whose coefficients are affine in a
//! parameter `K`, and each is solved by simplex over rational functions in
//! `K`. An independent sign-enumeration oracle gives a second route for
//! constant systems.

pub mod alp_solver;
pub mod error;
pub mod gen;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod parser;
pub mod reduce;

pub use alp_solver::{
    alp_feasible, concretize_witness, fixed_k_feasible, steady_state_threshold, AlpOutcome,
    SolverOptions,
};
pub use error::{Error, Result};
pub use model::{
    AlpConstraint, AlpProblem, CaseDescriptor, Constraint, Counts, LinearSystem, Relop, Sign,
    Status, Verdict, Witness,
};
pub use numeric::{KPoly, KRatFun, Rational};
pub use oracle::{oracle_feasible, strict_lp_feasible, OracleOptions};
pub use parser::{parse_alp, parse_system, render_alp, render_system};
pub use reduce::{
    augment_nontrivial, decide_feasibility, gadget_matrix_det, offset_sums, reduce, DecideOptions,
    ReductionBundle,
};
