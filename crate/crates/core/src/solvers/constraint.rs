use rand::seq::SliceRandom;
use rand::Rng;

use crate::combinatorics::{binomial, multinomial};
use crate::error::{invalid, Error, Result};
use crate::objectives::SpinConfig;

/// Admissible configurations A_n.
#[derive(Debug, Clone, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(tag = "tag", content = "counts", rename_all = "snake_case")]
pub enum ConstraintSet {
    /// Every configuration in X^n.
    #[default]
    All,
    /// Binary configurations with equally many labels of each kind.
    BalancedBisection,
    /// Configurations whose label counts equal the given vector.
    FixedTypeCounts(Vec<usize>),
}

impl ConstraintSet {
    /// Label counts every member must have, if the set fixes them.
    pub fn target_counts(&self, n: usize, q: usize) -> Result<Option<Vec<usize>>> {
        match self {
            Self::All => Ok(None),
            Self::BalancedBisection => {
                if q != 2 {
                    return Err(invalid(format!("balanced bisection needs q=2, got q={q}")));
                }
                if !n.is_multiple_of(2) {
                    return Err(Error::EmptyConstraintSet);
                }
                Ok(Some(vec![n / 2; 2]))
            }
            Self::FixedTypeCounts(c) => {
                if c.len() != q {
                    return Err(Error::DimensionMismatch(format!("{} type counts for alphabet {q}", c.len())));
                }
                if c.iter().sum::<usize>() != n {
                    return Err(Error::EmptyConstraintSet);
                }
                Ok(Some(c.clone()))
            }
        }
    }

    /// Moves must preserve label counts.
    pub fn preserves_counts(&self) -> bool {
        !matches!(self, Self::All)
    }

    /// |A_n|; zero for an infeasible set.
    pub fn cardinality(&self, n: usize, q: usize) -> u128 {
        match self {
            Self::All => (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX),
            Self::BalancedBisection => {
                if q == 2 && n.is_multiple_of(2) {
                    binomial(n as u64, n as u64 / 2)
                } else {
                    0
                }
            }
            Self::FixedTypeCounts(c) => {
                if c.len() == q && c.iter().sum::<usize>() == n {
                    multinomial(c)
                } else {
                    0
                }
            }
        }
    }

    pub fn contains(&self, sigma: &SpinConfig) -> bool {
        match self.target_counts(sigma.len(), sigma.q()) {
            Ok(None) => true,
            Ok(Some(c)) => sigma.counts() == c,
            Err(_) => false,
        }
    }

    /// Uniformly random member.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, q: usize, rng: &mut R) -> Result<SpinConfig> {
        let labels = match self.target_counts(n, q)? {
            None => (0..n).map(|_| rng.random_range(0..q as u8)).collect(),
            Some(c) => {
                let mut v: Vec<u8> = c.iter().enumerate().flat_map(|(l, &k)| std::iter::repeat_n(l as u8, k)).collect();
                v.shuffle(rng);
                v
            }
        };
        SpinConfig::new(labels, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn cardinalities() {
        assert_eq!(ConstraintSet::All.cardinality(5, 3), 243);
        assert_eq!(ConstraintSet::BalancedBisection.cardinality(10, 2), 252);
        assert_eq!(ConstraintSet::BalancedBisection.cardinality(9, 2), 0);
        assert_eq!(ConstraintSet::FixedTypeCounts(vec![1, 2, 3]).cardinality(6, 3), 60);
        assert_eq!(ConstraintSet::FixedTypeCounts(vec![1, 2, 2]).cardinality(6, 3), 0);
    }

    #[test]
    fn membership_and_sampling() {
        let c = ConstraintSet::FixedTypeCounts(vec![2, 1, 3]);
        let s = c.sample(6, 3, &mut stream(1, 0)).unwrap();
        assert!(c.contains(&s));
        assert!(!c.contains(&SpinConfig::uniform(6, 3)));
        assert!(matches!(
            ConstraintSet::FixedTypeCounts(vec![2, 2]).sample(5, 2, &mut stream(1, 0)),
            Err(Error::EmptyConstraintSet)
        ));
        assert!(ConstraintSet::BalancedBisection.contains(&SpinConfig::from_pm1(&[1, -1, -1, 1])));
    }
}
