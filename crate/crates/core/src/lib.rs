//! Synthetic individual-level population generation from block-level
//! census aggregates.
//!
//! The crate is organised around the pipeline it implements:
//!
//! - [`ingest`] loads per-block demographic counts and block boundaries and
//!   joins them into a [`ingest::PopulationModel`].
//! - [`geometry`] holds the polygon predicates and the UTM zone 16N
//!   projection used for distance work.
//! - [`sampler`] draws blocks and groups by inverse-CDF and locations by
//!   rejection sampling, one record at a time or as a streamed dataset.
//! - [`stats`] and [`validation`] check a generated dataset against the
//!   input statistics.
//! - [`audit`] measures per-group average distance to the nearest resource
//!   and the resulting disparity ratio.

pub mod audit;
pub mod error;
pub mod geometry;
pub mod ingest;
pub mod sampler;
pub mod stats;
pub mod validation;

pub use error::{Error, Result};
