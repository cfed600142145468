//! Exact binomial coefficients and k-subset enumeration.

use crate::error::{Error, Result};

/// Binomial coefficient C(n, k) in exact integer arithmetic.
///
/// Overflow never wraps: the multiplicative recurrence keeps every
/// intermediate value exact and fails loudly when u128 is exceeded.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 1..=k {
        // r * (n - k + i) is always divisible by i at this step.
        r = r
            .checked_mul((n - k + i) as u128)
            .ok_or(Error::Overflow { what: "binomial" })?
            / i as u128;
    }
    Ok(r)
}

/// Iterator over all k-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    k: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            k,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // Advance to the next lexicographic k-subset.
        let mut i = self.k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - self.k + i {
                self.current[i] += 1;
                for j in i + 1..self.k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(7, 0).unwrap(), 1);
        assert_eq!(binomial(7, 7).unwrap(), 1);
        assert_eq!(binomial(4, 6).unwrap(), 0);
        assert_eq!(binomial(12, 4).unwrap(), 495);
    }

    #[test]
    fn binomial_overflow_is_an_error() {
        assert!(matches!(binomial(1000, 500), Err(Error::Overflow { .. })));
    }

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn combinations_edge_cases() {
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(3, 4).count(), 0);
        assert_eq!(Combinations::new(0, 0).count(), 1);
    }
}
