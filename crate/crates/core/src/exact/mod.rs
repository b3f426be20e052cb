//! Ground truth: the linearised model in LP text form, a checker that
//! substitutes assignments into it, and an exhaustive oracle for tiny cases.

mod lp;
mod oracle;

pub use lp::{
    emit_milp, schedule_to_assignment, substitute_solution, EmitOptions, Family, LinearConstraint, LpModel,
    RowViolation, Sense, VarKind, VarLayout, Variable, SUBSTITUTION_TOLERANCE,
};
pub use oracle::{brute_force, state_estimate, OracleSolution, DEFAULT_STATE_CAP};

use crate::error::{Error, Result};

/// `|overall - bound| / |overall|`.
pub fn optimality_gap(overall: f64, lower_bound: f64) -> Result<f64> {
    if overall == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok((overall - lower_bound).abs() / overall.abs())
}
