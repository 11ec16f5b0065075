//! Expected spectrum after independent vertex deletion.
//!
//! A surviving vertex of degree `j` keeps `Binomial(j, p)` of its neighbours,
//! so the expected fraction of degree-`d` vertices after thinning is
//! `p * sum_{j >= d} a_j C(j, d) p^d (1-p)^(j-d)` for graphs. For set systems
//! the sets themselves are never deleted, which drops the outer `p`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seqcore::{
    eigen_sequence, eval_genfun, DegreeSpectrum, PowerTail, ScaleFreeParams, SpectrumKind,
};

/// Knobs for the tail-extended kernel summation.
#[derive(Debug, Clone, Copy)]
pub struct ThinOptions {
    /// Stop summing once the analytic bound on the neglected terms drops
    /// below this fraction of the partial sum.
    pub relative_tolerance: f64,
    /// Hard limit on the input degree the summation may reach.
    pub max_depth: usize,
}

impl Default for ThinOptions {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-17,
            max_depth: 1 << 22,
        }
    }
}

/// A thinned spectrum together with what the summation achieved.
#[derive(Debug, Clone)]
pub struct Thinned<T> {
    pub spectrum: DegreeSpectrum<T>,
    /// Deepest input degree that entered any output entry.
    pub depth_used: usize,
    /// Largest bound on the neglected tail over all output entries.
    pub tail_bound: T,
    /// False if `max_depth` was hit before the bound met the tolerance.
    pub sufficient: bool,
}

/// Expected degree spectrum of the random induced subgraph.
pub fn thin_graph<T: Scalar>(a: &DegreeSpectrum<T>, p: T, out_depth: usize) -> Result<Thinned<T>> {
    thin_with(a, p, out_depth, p, &ThinOptions::default())
}

/// Expected set-size spectrum after deleting ground vertices.
pub fn thin_sets<T: Scalar>(a: &DegreeSpectrum<T>, p: T, out_depth: usize) -> Result<Thinned<T>> {
    thin_with(a, p, out_depth, T::one(), &ThinOptions::default())
}

pub fn thin_graph_with<T: Scalar>(
    a: &DegreeSpectrum<T>,
    p: T,
    out_depth: usize,
    opts: &ThinOptions,
) -> Result<Thinned<T>> {
    thin_with(a, p, out_depth, p, opts)
}

pub fn thin_sets_with<T: Scalar>(
    a: &DegreeSpectrum<T>,
    p: T,
    out_depth: usize,
    opts: &ThinOptions,
) -> Result<Thinned<T>> {
    thin_with(a, p, out_depth, T::one(), opts)
}

pub(crate) fn check_open_closed<T: Scalar>(p: T) -> Result<()> {
    if p.is_finite() && p > T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(Error::Probability(p.as_f64(), "(0, 1]"))
    }
}

/// Lazily extended input sequence: stored entries, zero gap, then tail values.
struct InputSeq<'a, T: Scalar> {
    a: &'a DegreeSpectrum<T>,
    values: Vec<T>,
}

impl<'a, T: Scalar> InputSeq<'a, T> {
    fn new(a: &'a DegreeSpectrum<T>) -> Self {
        Self {
            a,
            values: a.entries().to_vec(),
        }
    }

    fn reach(&mut self, j: usize) {
        if j >= self.values.len() {
            let want = (j + 1).max(self.values.len() * 2);
            self.values = self.a.extended(want - 1);
        }
    }

    fn at(&mut self, j: usize) -> T {
        self.reach(j);
        self.values[j]
    }
}

fn thin_with<T: Scalar>(
    a: &DegreeSpectrum<T>,
    p: T,
    out_depth: usize,
    outer: T,
    opts: &ThinOptions,
) -> Result<Thinned<T>> {
    check_open_closed(p)?;
    let q = T::one() - p;
    let ln_p = p.ln();
    let ln_q = q.ln();
    let tol = T::of(opts.relative_tolerance);
    // below this a linear-space start weight p^d loses precision
    let underflow = T::min_positive_value() / T::epsilon();
    let stored_depth = a.depth();
    let tail = a.tail().copied();

    let mut seq = InputSeq::new(a);
    let mut out = Vec::with_capacity(out_depth + 1);
    let mut depth_used = 0;
    let mut worst_bound = T::zero();
    let mut sufficient = true;

    for d in 0..=out_depth {
        let dt = T::of_usize(d);
        let start_w = p.powi(d as i32);
        let log_mode = start_w < underflow;
        let mut w = start_w;
        let mut log_w = dt * ln_p;
        let mut sum = T::zero();
        let mut bound = T::zero();
        let mut j = d;
        loop {
            let term_w = if log_mode { log_w.exp() } else { w };
            let aj = if j <= stored_depth || tail.is_some() {
                seq.at(j)
            } else {
                T::zero()
            };
            sum += aj * term_w;
            depth_used = depth_used.max(j);

            // weight ratio w_{j+1} / w_j = (j+1) q / (j+1-d)
            let jn = T::of_usize(j + 1);
            let ratio = jn * q / (jn - dt);
            if log_mode {
                log_w = log_w + (jn / (jn - dt)).ln() + ln_q;
            } else {
                w *= ratio;
            }

            match &tail {
                None if j >= stored_depth => break,
                None => {}
                Some(t) => {
                    if j >= stored_depth && j + 1 >= t.start && T::of_usize(j + 1) > t.beta {
                        // past the kernel mode the weights fall geometrically with a
                        // shrinking ratio, and |a_j| is nonincreasing past beta
                        let next_ratio = T::of_usize(j + 2) * q / (T::of_usize(j + 2) - dt);
                        if next_ratio < T::one() {
                            let next_w = if log_mode { log_w.exp() } else { w };
                            let a_next = seq.at(j + 1).abs();
                            bound = a_next * next_w / (T::one() - next_ratio);
                            if bound <= tol * sum.abs() || bound == T::zero() {
                                break;
                            }
                        }
                    }
                    if j + 1 >= opts.max_depth {
                        sufficient = false;
                        break;
                    }
                }
            }
            j += 1;
        }
        worst_bound = worst_bound.max(outer * bound);
        out.push(outer * sum);
    }

    let kind = if a.kind() == SpectrumKind::Probability {
        SpectrumKind::Probability
    } else {
        SpectrumKind::Signed
    };
    // A pure power tail from `start` on is an eigen-sequence there, so every
    // output degree past `max(start, out_depth + 1)` is the tail rescaled.
    let out_tail = tail
        .filter(|t| t.start <= out_depth + 1)
        .map(|t| PowerTail::new(t.beta, outer * p.powf(t.beta - T::one()) * t.scale, out_depth + 1));
    // thinning a probability spectrum never adds mass, but rounding can
    // push a zero entry a hair negative
    let spectrum = match kind {
        SpectrumKind::Probability => DegreeSpectrum::new(out.clone(), kind, out_tail)
            .or_else(|_| DegreeSpectrum::new(out, SpectrumKind::Signed, out_tail))?,
        SpectrumKind::Signed => DegreeSpectrum::new(out, kind, out_tail)?,
    };
    Ok(Thinned {
        spectrum,
        depth_used,
        tail_bound: worst_bound,
        sufficient,
    })
}

/// `|B(x) - p A(1 - p + p x)|` for the graph transform.
///
/// The thinned series is summed far enough that its remainder at `|x|` is below
/// double-precision roundoff; tail-free inputs need only their own depth.
pub fn genfun_identity_check<T: Scalar>(a: &DegreeSpectrum<T>, p: T, x: T) -> Result<T> {
    check_open_closed(p)?;
    if !x.is_finite() || x.abs() >= T::one() {
        return Err(Error::GenfunDomain(x.as_f64()));
    }
    let depth = if a.tail().is_none() || x.abs() < T::epsilon() {
        a.depth()
    } else {
        // |b_d| <= sup_{j >= d} |a_j|, so the remainder is at most
        // sup |a| |x|^(D+1) / (1 - |x|)
        let sup = a.sup_abs().max(T::min_positive_value());
        let target = T::epsilon() * T::of(1e-2) * (T::one() - x.abs()) / sup;
        let need = (target.ln() / x.abs().ln()).ceil();
        a.depth().max(need.to_usize().unwrap_or(usize::MAX).min(1 << 20))
    };
    let b = thin_graph(a, p, depth)?;
    let lhs = eval_genfun(&b.spectrum, x)?;
    let rhs = p * eval_genfun(a, T::one() - p + p * x)?;
    Ok((lhs - rhs).abs())
}

/// Scale-fit summary of one thinning: how close `b_d` is to `f * a_d` for `d >= k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThinningReport<T> {
    pub p: T,
    pub k: usize,
    pub fitted_f: T,
    pub predicted_f: Option<T>,
    pub sup_residual: T,
    pub depth_used: usize,
    pub tail_bound: T,
}

impl<T: Scalar> ThinningReport<T> {
    /// `ln f / ln p`; `None` at `p = 1` or for a nonpositive fit.
    pub fn fitted_exponent(&self) -> Option<T> {
        if self.p >= T::one() || self.fitted_f <= T::zero() {
            None
        } else {
            Some(self.fitted_f.ln() / self.p.ln())
        }
    }
}

/// Midpoint of the ratio range `b_d / a_d` over `k <= d <= D` with `|a_d|`
/// above roundoff; returns `(f, sup_residual)`.
fn fit_scale<T: Scalar>(a: &[T], b: &[T], k: usize) -> Result<(T, T)> {
    let depth = a.len().min(b.len());
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for d in k..depth {
        if a[d].abs() > T::roundoff() {
            let r = b[d] / a[d];
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    if lo > hi {
        return Err(Error::Degenerate(format!(
            "no entry with |a_d| > roundoff at degrees >= {k}"
        )));
    }
    let f = (lo + hi) / T::of(2.0);
    let sup = (k..depth).fold(T::zero(), |m, d| m.max((b[d] - f * a[d]).abs()));
    Ok((f, sup))
}

/// Smallest `max_{k <= d < len} |b_d - f a_d|` achievable by any real `f`.
///
/// The objective is convex and piecewise linear in `f`, so its minimum sits at
/// one of the breakpoints; all of them are enumerated.
pub fn min_sup_residual<T: Scalar>(a: &[T], b: &[T], k: usize) -> T {
    let depth = a.len().min(b.len());
    let idx: Vec<usize> = (k..depth).collect();
    let objective = |f: T| idx.iter().fold(T::zero(), |m, &d| m.max((b[d] - f * a[d]).abs()));
    let mut candidates = vec![T::zero()];
    for (n, &i) in idx.iter().enumerate() {
        if a[i] != T::zero() {
            candidates.push(b[i] / a[i]);
        }
        for &j in &idx[n + 1..] {
            let diff = a[i] - a[j];
            if diff != T::zero() {
                candidates.push((b[i] - b[j]) / diff);
            }
            let sum = a[i] + a[j];
            if sum != T::zero() {
                candidates.push((b[i] + b[j]) / sum);
            }
        }
    }
    candidates
        .into_iter()
        .map(objective)
        .fold(T::infinity(), T::min)
}

/// Thins `a` once and measures how well a single scale factor explains
/// `b_d` for every `k <= d <= D`.
pub fn scale_free_residual<T: Scalar>(
    a: &DegreeSpectrum<T>,
    p: T,
    k: usize,
) -> Result<ThinningReport<T>> {
    let depth = a.depth();
    if depth < k {
        return Err(Error::DepthBelowCutoff { depth, k });
    }
    let b = thin_graph(a, p, depth)?;
    let (fitted_f, sup_residual) = fit_scale(a.entries(), b.spectrum.entries(), k)?;
    Ok(ThinningReport {
        p,
        k,
        fitted_f,
        predicted_f: a.tail().map(|t| p.powf(t.beta)),
        sup_residual,
        depth_used: b.depth_used,
        tail_bound: b.tail_bound,
    })
}

/// One grid point of [`fixed_point_verify`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FixedPointCheck<T> {
    #[serde(flatten)]
    pub report: ThinningReport<T>,
    /// `max_{0 <= d <= D} |b_d - p^beta e_d|`.
    pub eigen_error: T,
    pub fitted_exponent: Option<T>,
    pub sufficient: bool,
}

/// Checks that thinning maps the eigen-sequence of `beta` to `p^beta` times
/// itself at every `p` in the grid.
pub fn fixed_point_verify<T: Scalar>(
    beta: T,
    k: usize,
    p_grid: &[T],
    depth: usize,
) -> Result<Vec<FixedPointCheck<T>>> {
    let params = ScaleFreeParams::new(beta, k)?;
    if depth < k {
        return Err(Error::DepthBelowCutoff { depth, k });
    }
    let e = eigen_sequence(beta, depth)?;
    p_grid
        .par_iter()
        .map(|&p| {
            let b = thin_graph(&e, p, depth)?;
            let target = params.eigenvalue(p);
            let eigen_error = e
                .entries()
                .iter()
                .zip(b.spectrum.entries())
                .fold(T::zero(), |m, (&ed, &bd)| m.max((bd - target * ed).abs()));
            let (fitted_f, sup_residual) = fit_scale(e.entries(), b.spectrum.entries(), k)?;
            let report = ThinningReport {
                p,
                k,
                fitted_f,
                predicted_f: Some(target),
                sup_residual,
                depth_used: b.depth_used,
                tail_bound: b.tail_bound,
            };
            Ok(FixedPointCheck {
                fitted_exponent: report.fitted_exponent(),
                report,
                eigen_error,
                sufficient: b.sufficient,
            })
        })
        .collect()
}
