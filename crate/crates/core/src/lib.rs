//! Binomial thinning of degree spectra and the power-law families it fixes.
//!
//! Deleting each vertex of a graph independently with probability `1 - p`
//! maps the degree spectrum `a` to an expected spectrum `b` by a linear
//! kernel. The sequences `C(d - beta, d)` are exact eigenvectors of that map
//! with eigenvalue `p^beta`. Random graphs and set systems drawn from these
//! families let the prediction be checked against percolated samples.

pub mod cli;
pub mod error;
pub mod graphgen;
pub mod io;
pub mod scalar;
pub mod seeding;
pub mod seqcore;
pub mod stats;
pub mod thinning;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use seqcore::{
    eigen_coefficient, eigen_sequence, eigen_tail_sum, eval_genfun, gen_binom,
    normalization_constant, scale_free_spectrum,
    DegreeSpectrum, PowerTail, ScaleFreeParams, SpectrumKind,
};
pub use thinning::{
    fixed_point_verify, genfun_identity_check, scale_free_residual, thin_graph, thin_sets,
    ThinningReport,
};

/// Double-precision spectrum, the default throughout the graph and stats code.
pub type Spectrum = DegreeSpectrum<f64>;
pub type Spectrum32 = DegreeSpectrum<f32>;
pub type Params = ScaleFreeParams<f64>;
pub type Params32 = ScaleFreeParams<f32>;
pub type Report = ThinningReport<f64>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
