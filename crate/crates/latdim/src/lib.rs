//! Discrete fractal dimensions for finite subsets of the integer lattice,
//! and reproducible Monte Carlo experiments on how random oblique
//! projections transform them.
//!
//! A finite set has dimension zero in every classical asymptotic sense, but
//! across the scales between 1 and its diameter it can behave like a
//! fractal: the number of points captured by boxes of growing side follows
//! a power law whose exponent acts as a dimension. This crate computes
//! those exponents three ways (extremal box counts, centered box counts,
//! and covering costs), generates arithmetic test sets with known
//! exponents, and samples projection matrices to check that dimension
//! survives almost every projection.
//!
//! ```
//! use latdim::dimension::{counting_profile, fit_dimension, top_half, ScaleGrid};
//! use latdim::lattice::LatticeSet;
//!
//! // Perfect squares up to 10^6 behave like a half-dimensional set.
//! let squares = LatticeSet::from_values((0..=1000).map(|n| n * n).collect());
//! let grid = ScaleGrid::dyadic_for_set(&squares)?;
//! let profile = counting_profile(&squares, &grid)?;
//! let fit = fit_dimension(&profile, top_half(grid.len()))?;
//! assert!((fit.slope - 0.5).abs() < 0.05);
//! # Ok::<(), latdim::Error>(())
//! ```
//!
//! Everything downstream of a seed is deterministic: experiments give
//! byte-identical reports at any thread count.

#![forbid(unsafe_code)]

pub mod covering;
pub mod dimension;
pub mod error;
pub mod generators;
pub mod io;
pub mod lattice;
pub mod montecarlo;
pub mod projection;

pub use error::{Error, Result};
pub use lattice::{CenteredCube, Cube, LatticeSet};
