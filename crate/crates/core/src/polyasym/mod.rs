//! Strong asymptotic development on polysectors: total families,
//! approximants, coherence checks, the Borel map and sampled estimates of
//! the constants defining the ultraholomorphic classes.

mod approx;
mod coherence;
mod family;
pub mod fixtures;
mod multiindex;
mod point;
mod sup;

pub use approx::{approximant, approximant_bruteforce, borel, first_order_family};
pub use coherence::{coherence_residual, Ray};
pub use family::{FamilyEntry, FunctionHandle, TotalFamily};
pub use multiindex::{IndexSubset, MultiIndex, MAX_VARIABLES};
pub use point::{GridSpec, Polar, SectorPoint, MIN_GRID_RADIUS};
pub use sup::{deriv_sup, membership_constant, remainder_sup, MembershipEstimate, SupEstimate};
