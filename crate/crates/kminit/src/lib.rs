//! k-means clustering with pluggable initialization.
//!
//! The crate implements Lloyd's algorithm together with eight linear,
//! order-invariant initialization methods — three random (Forgy,
//! MacQueen's random method, k-means++) and five deterministic (maximin,
//! Var-Part, PCA-Part, and the Otsu-threshold variants of the latter
//! two) — plus a benchmark harness that runs seeded multi-run
//! experiments and reports normalized statistics.
//!
//! ```
//! use kminit::dataset::Dataset;
//! use kminit::init::{hierarchical_init, AxisRule, SplitRule};
//! use kminit::lloyd::{run_kmeans, KMeansConfig};
//!
//! let ds = Dataset::from_rows(
//!     "toy",
//!     vec![vec![0.0, 0.1], vec![0.2, 0.0], vec![5.0, 5.1], vec![5.2, 4.9]],
//!     None,
//! )?;
//! let centers = hierarchical_init(&ds, 2, AxisRule::Variance, SplitRule::Mean, 256)?;
//! let result = run_kmeans(&ds, centers, &KMeansConfig::default())?;
//! assert_eq!(result.centers.k(), 2);
//! assert!(result.final_sse <= result.initial_sse);
//! # Ok::<(), kminit::Error>(())
//! ```

pub mod bench;
pub mod core;
pub mod dataset;
pub mod error;
pub mod init;
pub mod linalg;
pub mod lloyd;
pub mod manifest;
pub mod otsu;
pub mod rng;

pub use error::{Error, Result};

// The guide's code blocks double as doc-tests so the book can never
// drift from the library. mdbook itself cannot run Rust snippets, so
// each chapter is included here and exercised by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/getting-started.md")]
    mod getting_started {}
    #[doc = include_str!("../../../book/src/lloyd.md")]
    mod lloyd {}
    #[doc = include_str!("../../../book/src/initializers.md")]
    mod initializers {}
    #[doc = include_str!("../../../book/src/hierarchical.md")]
    mod hierarchical {}
    #[doc = include_str!("../../../book/src/otsu.md")]
    mod otsu {}
    #[doc = include_str!("../../../book/src/benchmark.md")]
    mod benchmark {}
}
