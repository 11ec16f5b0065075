use serde::{Deserialize, Serialize};

use super::binom::{eigen_tail_sum, EigenCursor};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    /// Nonnegative frequencies with total mass at most one.
    Probability,
    /// Unconstrained real sequence (eigenvectors, linear combinations).
    Signed,
}

/// Analytic continuation `scale * C(d - beta, d)` for every `d >= start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTail<T> {
    pub beta: T,
    pub scale: T,
    pub start: usize,
}

impl<T: Scalar> PowerTail<T> {
    pub fn new(beta: T, scale: T, start: usize) -> Self {
        Self { beta, scale, start }
    }

    /// Total mass carried by the tail.
    pub fn mass(&self) -> T {
        self.scale * eigen_tail_sum(self.beta, self.start)
    }

    pub(crate) fn cursor(&self) -> EigenCursor<T> {
        EigenCursor::new(self.beta, self.scale, self.start)
    }
}

/// A frequency sequence `a_0 ..= a_D`, optionally continued by a power tail.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSpectrum<T> {
    entries: Vec<T>,
    kind: SpectrumKind,
    tail: Option<PowerTail<T>>,
}

impl<T: Scalar> DegreeSpectrum<T> {
    /// Builds a probability spectrum, checking nonnegativity and mass.
    pub fn probability(entries: Vec<T>) -> Result<Self> {
        Self::build(entries, SpectrumKind::Probability, None)
    }

    pub fn signed(entries: Vec<T>) -> Result<Self> {
        Self::build(entries, SpectrumKind::Signed, None)
    }

    pub fn new(entries: Vec<T>, kind: SpectrumKind, tail: Option<PowerTail<T>>) -> Result<Self> {
        Self::build(entries, kind, tail)
    }

    /// Unit mass at a single degree.
    pub fn delta(degree: usize) -> Self {
        let mut entries = vec![T::zero(); degree + 1];
        entries[degree] = T::one();
        Self {
            entries,
            kind: SpectrumKind::Probability,
            tail: None,
        }
    }

    fn build(entries: Vec<T>, kind: SpectrumKind, tail: Option<PowerTail<T>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSpectrum("no entries".into()));
        }
        if let Some(d) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSpectrum(format!("entry {d} is not finite")));
        }
        if let Some(t) = &tail {
            if t.start < entries.len() {
                return Err(Error::InvalidSpectrum(format!(
                    "tail starts at {} inside the stored depth {}",
                    t.start,
                    entries.len() - 1
                )));
            }
            if !(t.beta.is_finite() && t.scale.is_finite()) || t.beta <= T::one() {
                return Err(Error::InvalidSpectrum(
                    "tail needs finite scale and beta > 1".into(),
                ));
            }
        }
        let s = Self {
            entries,
            kind,
            tail,
        };
        if kind == SpectrumKind::Probability {
            s.check_probability()?;
        }
        Ok(s)
    }

    fn check_probability(&self) -> Result<()> {
        let tol = T::roundoff();
        if let Some(d) = self.entries.iter().position(|&v| v < -tol) {
            return Err(Error::InvalidSpectrum(format!(
                "negative frequency {} at degree {d}",
                self.entries[d]
            )));
        }
        if let Some(t) = &self.tail {
            // the first tail entry fixes the sign of all of them once start > beta
            let first = t.cursor().next().map(|(_, v)| v).unwrap_or_else(T::zero);
            if first < -tol || T::of_usize(t.start) <= t.beta {
                return Err(Error::InvalidSpectrum(
                    "tail is not a nonnegative sequence".into(),
                ));
            }
        }
        let mass = self.total_mass();
        if mass < -T::mass_slack() || mass > T::one() + T::mass_slack() {
            return Err(Error::InvalidSpectrum(format!("total mass {mass} outside [0, 1]")));
        }
        Ok(())
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// Largest stored degree `D`.
    pub fn depth(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn tail(&self) -> Option<&PowerTail<T>> {
        self.tail.as_ref()
    }

    pub fn is_probability(&self) -> bool {
        self.kind == SpectrumKind::Probability
    }

    /// Value at any degree, reading past the stored entries into the tail.
    pub fn get(&self, d: usize) -> T {
        if let Some(&v) = self.entries.get(d) {
            return v;
        }
        match &self.tail {
            Some(t) if d >= t.start => {
                let offset = d - t.start;
                t.cursor().nth(offset).map(|(_, v)| v).unwrap_or_else(T::zero)
            }
            _ => T::zero(),
        }
    }

    /// Values for degrees `0..=depth`, continuing through the tail if needed.
    pub fn extended(&self, depth: usize) -> Vec<T> {
        let mut out = self.entries.clone();
        out.truncate(depth + 1);
        if out.len() < depth + 1 {
            match &self.tail {
                Some(t) => {
                    out.resize(t.start.min(depth + 1), T::zero());
                    out.extend(
                        t.cursor()
                            .take_while(|&(d, _)| d <= depth)
                            .map(|(_, v)| v),
                    );
                }
                None => out.resize(depth + 1, T::zero()),
            }
        }
        out
    }

    pub fn stored_mass(&self) -> T {
        self.entries.iter().copied().sum()
    }

    pub fn tail_mass(&self) -> T {
        self.tail.as_ref().map_or_else(T::zero, PowerTail::mass)
    }

    pub fn total_mass(&self) -> T {
        self.stored_mass() + self.tail_mass()
    }

    /// Drops the tail and any stored entries beyond `depth`.
    pub fn truncated(&self, depth: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.truncate(depth + 1);
        Self {
            entries,
            kind: self.kind,
            tail: None,
        }
    }

    /// Same sequence, with the sign constraint lifted.
    pub fn into_signed(mut self) -> Self {
        self.kind = SpectrumKind::Signed;
        self
    }

    /// Entrywise multiple (tail included); the result is signed.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            entries: self.entries.iter().map(|&v| v * factor).collect(),
            kind: SpectrumKind::Signed,
            tail: self.tail.map(|t| PowerTail {
                scale: t.scale * factor,
                ..t
            }),
        }
    }

    /// `alpha * self + gamma * other` on stored entries; both must be tail-free.
    pub fn combine(&self, alpha: T, other: &Self, gamma: T) -> Result<Self> {
        if self.tail.is_some() || other.tail.is_some() {
            return Err(Error::InvalidSpectrum(
                "linear combination of tailed spectra".into(),
            ));
        }
        let depth = self.depth().max(other.depth());
        let a = self.extended(depth);
        let c = other.extended(depth);
        let entries = a.iter().zip(&c).map(|(&x, &y)| alpha * x + gamma * y).collect();
        Self::signed(entries)
    }

    /// Largest absolute value over stored entries and the tail.
    pub fn sup_abs(&self) -> T {
        let stored = self
            .entries
            .iter()
            .fold(T::zero(), |m, v| m.max(v.abs()));
        match &self.tail {
            // |C(d - beta, d)| is nonincreasing once d > beta / 2, so checking the
            // first entries past that point bounds the rest
            Some(t) => t
                .cursor()
                .take_while(|&(d, _)| T::of_usize(d) <= t.beta + T::one() || d == t.start)
                .fold(stored, |m, (_, v)| m.max(v.abs())),
            None => stored,
        }
    }

    /// Converts every value to another scalar type.
    pub fn cast<U: Scalar>(&self) -> DegreeSpectrum<U> {
        DegreeSpectrum {
            entries: self.entries.iter().map(|v| U::of(v.as_f64())).collect(),
            kind: self.kind,
            tail: self.tail.map(|t| PowerTail {
                beta: U::of(t.beta.as_f64()),
                scale: U::of(t.scale.as_f64()),
                start: t.start,
            }),
        }
    }
}
