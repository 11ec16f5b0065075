use crate::scalar::Scalar;

/// Generalized binomial coefficient `r (r-1) ... (r-d+1) / d!` for real `r`.
///
/// Evaluated by the multiplicative recurrence `C(r, d) = C(r, d-1) (r-d+1) / d`,
/// which has no poles at negative `r` and is exact whenever the factors are.
pub fn gen_binom<T: Scalar>(r: T, d: usize) -> T {
    // Pairing numerator r - d + i with denominator i keeps partial products
    // bounded by the result when r is close to d.
    let base = r - T::of_usize(d);
    let mut acc = T::one();
    for i in 1..=d {
        let i = T::of_usize(i);
        acc = acc * (base + i) / i;
    }
    acc
}

/// `C(d - beta, d)`, the d-th coefficient of `(1 - x)^(beta - 1)`.
pub fn eigen_coefficient<T: Scalar>(beta: T, d: usize) -> T {
    gen_binom(T::of_usize(d) - beta, d)
}

/// Ratio `e_{d} / e_{d-1}` of consecutive eigen coefficients (`d >= 1`).
#[inline]
pub(crate) fn eigen_step<T: Scalar>(beta: T, d: usize) -> T {
    let d = T::of_usize(d);
    (d - beta) / d
}

/// Exact value of `sum_{d >= start} C(d - beta, d)` for `beta > 1`.
///
/// The full series is `(1 - x)^(beta - 1)` at `x = 1`, which vanishes, and the
/// hockey-stick identity collapses the head `sum_{d < start}` to
/// `C(start - beta, start - 1)`, so the tail is its negative.
pub fn eigen_tail_sum<T: Scalar>(beta: T, start: usize) -> T {
    if start == 0 {
        return T::zero();
    }
    -gen_binom(T::of_usize(start) - beta, start - 1)
}

/// Iterator over `scale * C(d - beta, d)` for `d = start, start + 1, ...`.
#[derive(Debug, Clone)]
pub(crate) struct EigenCursor<T> {
    beta: T,
    next_degree: usize,
    value: T,
}

impl<T: Scalar> EigenCursor<T> {
    pub(crate) fn new(beta: T, scale: T, start: usize) -> Self {
        Self {
            beta,
            next_degree: start,
            value: scale * eigen_coefficient(beta, start),
        }
    }
}

impl<T: Scalar> Iterator for EigenCursor<T> {
    type Item = (usize, T);

    fn next(&mut self) -> Option<(usize, T)> {
        let out = (self.next_degree, self.value);
        self.next_degree += 1;
        self.value *= eigen_step(self.beta, self.next_degree);
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_product_is_one() {
        for r in [-3.5, 0.0, 0.5, 7.25] {
            assert_eq!(gen_binom(r, 0), 1.0);
        }
    }

    #[test]
    fn integer_argument_matches_pascal() {
        assert_eq!(gen_binom(3.0, 2), 3.0);
        assert_eq!(gen_binom(5.0, 5), 1.0);
        assert_eq!(gen_binom(4.0, 6), 0.0);
        assert_eq!(gen_binom(10.0_f32, 3), 120.0);
    }

    #[test]
    fn half_integer_by_hand() {
        // (0.5)(-0.5) / 2!
        assert_eq!(gen_binom(0.5, 2), -0.125);
        // (-1.5)(-2.5)(-3.5) / 3!
        assert_relative_eq!(gen_binom(-1.5, 3), -2.1875, max_relative = 1e-15);
    }

    #[test]
    fn tail_sum_small_cases() {
        // 1 + (1 - 1.5) = 0.5 over the head, so the tail from 2 is -0.5
        assert_relative_eq!(eigen_tail_sum(1.5, 2), -0.5, max_relative = 1e-15);
        assert_relative_eq!(eigen_tail_sum(2.5, 3), 0.125, max_relative = 1e-15);
        assert_eq!(eigen_tail_sum(2.5, 0), 0.0);
    }

    #[test]
    fn tail_sum_matches_head_complement() {
        for &beta in &[1.3, 2.2, 3.7, 4.9] {
            for start in 1..12 {
                let head: f64 = (0..start).map(|d| eigen_coefficient(beta, d)).sum();
                assert_relative_eq!(eigen_tail_sum(beta, start), -head, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn cursor_follows_recurrence() {
        let got: Vec<_> = EigenCursor::new(2.5, 3.0, 4).take(5).collect();
        for (d, v) in got {
            assert_relative_eq!(v, 3.0 * eigen_coefficient(2.5, d), max_relative = 1e-14);
        }
    }
}
