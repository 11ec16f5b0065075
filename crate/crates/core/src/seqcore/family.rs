use serde::{Deserialize, Serialize};

use super::binom::{eigen_coefficient, eigen_step, eigen_tail_sum};
use super::spectrum::{DegreeSpectrum, PowerTail, SpectrumKind};
use crate::error::{Error, Result};
use crate::scalar::{is_integral, Scalar};

/// Exponent, cutoff and normalization of a power-law family
/// `a_d = C * C(d - beta, d)` for `d >= k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleFreeParams<T> {
    beta: T,
    k: usize,
    c: T,
}

impl<T: Scalar> ScaleFreeParams<T> {
    /// Validates `(beta, k)` and computes the normalization constant.
    pub fn new(beta: T, k: usize) -> Result<Self> {
        let c = normalization_constant(beta, k)?;
        Ok(Self { beta, k, c })
    }

    /// Smallest admissible cutoff, `ceil(beta)`.
    pub fn canonical(beta: T) -> Result<Self> {
        check_exponent(beta)?;
        Self::new(beta, min_cutoff(beta))
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn normalization(&self) -> T {
        self.c
    }

    /// `alpha_k = 1 / (beta - k)`, the exponent bookkeeping of the
    /// generating-function solution `(1 - x)^(1/alpha_k + k)`.
    pub fn alpha_k(&self) -> T {
        T::one() / (self.beta - T::of_usize(self.k))
    }

    /// The scaling factor `f(p) = p^beta` of this family under graph thinning.
    pub fn eigenvalue(&self, p: T) -> T {
        p.powf(self.beta)
    }
}

fn check_exponent<T: Scalar>(beta: T) -> Result<()> {
    if !beta.is_finite() || beta <= T::one() {
        return Err(Error::ExponentTooSmall(beta.as_f64()));
    }
    if is_integral(beta) {
        return Err(Error::IntegerExponent(beta.as_f64()));
    }
    Ok(())
}

fn min_cutoff<T: Scalar>(beta: T) -> usize {
    beta.ceil().to_usize().expect("finite positive beta")
}

/// `C` with `C * sum_{d >= k} C(d - beta, d) = 1`.
///
/// The tail sum has the closed form `-sum_{d < k} C(d - beta, d)` since the
/// whole series is `(1 - x)^(beta - 1)` at `x = 1`; it is evaluated through the
/// equivalent single coefficient `-C(k - beta, k - 1)`.
pub fn normalization_constant<T: Scalar>(beta: T, k: usize) -> Result<T> {
    check_exponent(beta)?;
    let min = min_cutoff(beta);
    if k < min {
        return Err(Error::CutoffTooSmall { k, min });
    }
    Ok(T::one() / eigen_tail_sum(beta, k))
}

/// The normalized family truncated at `depth`, with the remainder attached as
/// an analytic tail. Degrees `1..k` are empty and degree 0 takes whatever mass
/// is left (zero up to rounding).
pub fn scale_free_spectrum<T: Scalar>(
    params: &ScaleFreeParams<T>,
    depth: usize,
) -> Result<DegreeSpectrum<T>> {
    let k = params.k;
    if depth < k {
        return Err(Error::DepthBelowCutoff { depth, k });
    }
    let mut entries = vec![T::zero(); depth + 1];
    let mut v = params.c * eigen_coefficient(params.beta, k);
    entries[k] = v;
    for (d, slot) in entries.iter_mut().enumerate().skip(k + 1) {
        v *= eigen_step(params.beta, d);
        *slot = v;
    }
    let tail = PowerTail::new(params.beta, params.c, depth + 1);
    let family_mass: T = entries[k..].iter().copied().sum::<T>() + tail.mass();
    let residual = T::one() - family_mass;
    entries[0] = if residual.abs() <= T::roundoff() {
        residual.max(T::zero())
    } else {
        residual
    };
    DegreeSpectrum::new(entries, SpectrumKind::Probability, Some(tail))
}

/// Signed sequence `e_d = C(d - beta, d)` for `0 <= d <= depth`, continued
/// analytically beyond. Its generating function is `(1 - x)^(beta - 1)`.
pub fn eigen_sequence<T: Scalar>(beta: T, depth: usize) -> Result<DegreeSpectrum<T>> {
    check_exponent(beta)?;
    let mut entries = Vec::with_capacity(depth + 1);
    let mut v = T::one();
    entries.push(v);
    for d in 1..=depth {
        v *= eigen_step(beta, d);
        entries.push(v);
    }
    DegreeSpectrum::new(
        entries,
        SpectrumKind::Signed,
        Some(PowerTail::new(beta, T::one(), depth + 1)),
    )
}
