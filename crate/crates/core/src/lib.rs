//! Quasi-analyticity of Carleman ultraholomorphic classes on polysectors.
//!
//! The crate is split in three layers:
//!
//! * [`seqcore`] holds weight sequences in the logarithmic domain together
//!   with the structural checks that make a sequence strongly regular, the
//!   Ostrowski sup-transform and the growth index estimator.
//! * [`verdicts`] classifies the Korenbljum and Mandelbrojt series and
//!   logarithmic integrals, and turns those classifications into
//!   (s) quasi-analyticity verdicts for classes on a polysector.
//! * [`polyasym`] implements the several-variables strong asymptotic
//!   development: multi-indices, total families, approximants, coherence
//!   residuals, the Borel map and the sup estimates linking remainders and
//!   derivatives.
//!
//! Everything here is `no_std` + `alloc`; file formats and the command line
//! live in the companion `carleman` crate.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is how NaN gets rejected together with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod math;
pub mod polyasym;
pub mod quad;
pub mod seqcore;
pub mod verdicts;

pub use error::{Axiom, Error, Result};
pub use num_complex::Complex64;
pub use seqcore::{AxiomReport, Family, GrowthIndexEstimate, OstrowskiValue, WeightSequence};
pub use verdicts::{
    DivergenceVerdict, PolysectorOpening, QaKind, QaMode, QaVerdict, Route, SeriesKind, Status,
    VerdictConfig,
};
