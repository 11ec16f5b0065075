use super::binom::EigenCursor;
use super::spectrum::DegreeSpectrum;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Evaluates `A(x) = sum_d a_d x^d` for `x` in `[-1, 1]`.
///
/// A power tail `C * C(d - beta, d), d >= s` contributes
/// `C * ((1 - x)^(beta - 1) - sum_{d < s} C(d - beta, d) x^d)` in closed form.
pub fn eval_genfun<T: Scalar>(spectrum: &DegreeSpectrum<T>, x: T) -> Result<T> {
    if !x.is_finite() || x.abs() > T::one() {
        return Err(Error::GenfunDomain(x.as_f64()));
    }
    let stored = horner(spectrum.entries(), x);
    let Some(tail) = spectrum.tail() else {
        return Ok(stored);
    };
    let mut head = T::zero();
    let mut xp = T::one();
    for (_, e) in EigenCursor::new(tail.beta, T::one(), 0).take(tail.start) {
        head += e * xp;
        xp *= x;
    }
    let closed = (T::one() - x).powf(tail.beta - T::one());
    Ok(stored + tail.scale * (closed - head))
}

fn horner<T: Scalar>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}
