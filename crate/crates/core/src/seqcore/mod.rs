//! Real-argument binomials, degree spectra and the power-law family.

mod binom;
mod family;
mod genfun;
mod spectrum;

pub use binom::{eigen_coefficient, eigen_tail_sum, gen_binom};
pub use family::{eigen_sequence, normalization_constant, scale_free_spectrum, ScaleFreeParams};
pub use genfun::eval_genfun;
pub use spectrum::{DegreeSpectrum, PowerTail, SpectrumKind};
