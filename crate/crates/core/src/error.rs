use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the core algorithms.
///
/// Point indices are 1-based (row/column of the travel matrix, 0 is the
/// depot); day indices are 0-based (0 = Monday).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input data violates a type invariant.
    InvalidInput(String),
    /// A route or chromosome references a point outside `1..=n_points`.
    UnknownPoint(usize),
    /// A visited point has no bin combination (or an index past the catalog).
    MissingBin(usize),
    /// A point is never visited, so no cyclic steady state exists.
    UnvisitedPoint(usize),
    /// Even the densest visit schedule overflows the largest bin combination.
    PointUnservable(usize),
    /// No catalog entry can hold the point's peak accumulation.
    CapacityExceeded { point: usize, w_max: f64 },
    /// A single pickup does not fit in an empty vehicle.
    PickupExceedsVehicle { point: usize, day: usize, pickup: f64 },
    /// The shift-length formula divides by `n_v (n_v - 1)`.
    ShiftFormulaUndefined { n_vehicles: usize },
    /// Search space of the brute-force oracle exceeds the configured cap.
    TooLarge { states: f64, cap: f64 },
    /// A ratio with a zero denominator was requested.
    ZeroDenominator,
    /// A variable assignment misses a model variable.
    MissingVariable(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::UnknownPoint(p) => write!(f, "unknown point index {p}"),
            Error::MissingBin(p) => write!(f, "point {p} has no bin combination"),
            Error::UnvisitedPoint(p) => write!(f, "unvisited point {p}"),
            Error::PointUnservable(p) => {
                write!(f, "point {p} unservable: daily visits overflow the largest bin")
            }
            Error::CapacityExceeded { point, w_max } => {
                write!(f, "capacity exceeded: point {point} accumulates {w_max} m3")
            }
            Error::PickupExceedsVehicle { point, day, pickup } => write!(
                f,
                "pickup exceeds vehicle capacity: point {point} on day {day} holds {pickup} m3"
            ),
            Error::ShiftFormulaUndefined { n_vehicles } => write!(
                f,
                "shift formula undefined for {n_vehicles} vehicle(s); supply the shift length explicitly"
            ),
            Error::TooLarge { states, cap } => {
                write!(f, "instance too large: {states:.3e} states exceed the cap of {cap:.3e}")
            }
            Error::ZeroDenominator => write!(f, "zero denominator"),
            Error::MissingVariable(name) => write!(f, "assignment misses variable {name}"),
        }
    }
}

impl core::error::Error for Error {}
