use alloc::string::String;
use core::fmt;

/// The structural conditions a weight sequence may be asked to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// Logarithmic convexity, `M_n^2 <= M_{n-1} M_{n+1}`.
    LogConvexity,
    /// Moderate growth, `M_{p+l} <= A^{p+l} M_p M_l`.
    ModerateGrowth,
    /// Strong non-quasianalyticity.
    Gamma1,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::LogConvexity => "alpha0",
            Axiom::ModerateGrowth => "mu",
            Axiom::Gamma1 => "gamma1",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::LogConvexity => "(alpha0) logarithmic convexity",
            Axiom::ModerateGrowth => "(mu) moderate growth",
            Axiom::Gamma1 => "(gamma1) strong non-quasianalyticity",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An index outside the evaluable range was requested.
    Range {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    /// An argument outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// A precondition on the weight sequence does not hold on the checked range.
    Axiom {
        axiom: Axiom,
        checked_range: usize,
        witness: Option<usize>,
    },
    /// The growth-index search found no feasible exponent.
    DegenerateGrowthIndex { gamma_hi: f64 },
    /// A family entry needed by the operation is absent.
    IncompleteFamily { entry: String },
    /// A family entry has the wrong shape (function where a scalar was expected or vice versa).
    EntryKind { entry: String },
    /// A derivative oracle was required but the handle carries none.
    MissingDerivative,
    /// Finite-difference step underflowed.
    Step { step: f64, order: u32 },
    /// Adaptive quadrature did not reach the requested tolerance.
    Quadrature { partial: f64, abs_err: f64 },
    /// Inputs are structurally inconsistent (length mismatch and the like).
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Range { what, index, limit } => {
                write!(f, "{what}: index {index} exceeds evaluable limit {limit}")
            }
            Error::Domain { what, value } => write!(f, "{what}: value {value} outside domain"),
            Error::Axiom {
                axiom,
                checked_range,
                witness,
            } => {
                write!(f, "{axiom} fails on [0, {checked_range}]")?;
                if let Some(w) = witness {
                    write!(f, " (first violation at index {w})")?;
                }
                Ok(())
            }
            Error::DegenerateGrowthIndex { gamma_hi } => {
                write!(
                    f,
                    "growth index search infeasible down to gamma = {gamma_hi}"
                )
            }
            Error::IncompleteFamily { entry } => write!(f, "family has no entry {entry}"),
            Error::EntryKind { entry } => write!(f, "family entry {entry} has the wrong kind"),
            Error::MissingDerivative => f.write_str("derivative oracle required but not supplied"),
            Error::Step { step, order } => {
                write!(
                    f,
                    "finite-difference step {step} underflows at order {order}"
                )
            }
            Error::Quadrature { partial, abs_err } => write!(
                f,
                "quadrature did not converge: partial value {partial}, error estimate {abs_err}"
            ),
            Error::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}
