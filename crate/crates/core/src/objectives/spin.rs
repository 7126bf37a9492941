use crate::error::{invalid, Result};

/// Fixed encoding of the binary alphabet as spins: label 0 is +1, label 1 is -1.
#[inline]
pub fn pm1(label: u8) -> f64 {
    if label == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
pub fn label_of_pm1(spin: i8) -> u8 {
    if spin >= 0 {
        0
    } else {
        1
    }
}

/// Assignment of a label in `0..q` to each of `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct SpinConfig {
    spins: Vec<u8>,
    q: usize,
}

impl SpinConfig {
    pub fn new(spins: Vec<u8>, q: usize) -> Result<Self> {
        if !(2..=u8::MAX as usize).contains(&q) {
            return Err(invalid(format!("alphabet size q={q} out of range")));
        }
        if let Some(&s) = spins.iter().find(|&&s| s as usize >= q) {
            return Err(invalid(format!("label {s} not below q={q}")));
        }
        Ok(Self { spins, q })
    }

    pub fn uniform(n: usize, q: usize) -> Self {
        Self { spins: vec![0; n], q }
    }

    /// Binary configuration from +-1 spins.
    pub fn from_pm1(spins: &[i8]) -> Self {
        Self { spins: spins.iter().map(|&s| label_of_pm1(s)).collect(), q: 2 }
    }

    pub fn to_pm1(&self) -> Vec<i8> {
        self.spins.iter().map(|&s| pm1(s) as i8).collect()
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn labels(&self) -> &[u8] {
        &self.spins
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0usize; self.q];
        for &s in &self.spins {
            c[s as usize] += 1;
        }
        c
    }

    /// Empirical type vector m(sigma).
    pub fn type_fractions(&self) -> Vec<f64> {
        let n = self.spins.len().max(1) as f64;
        self.counts().into_iter().map(|c| c as f64 / n).collect()
    }

    /// Every label used equally often.
    pub fn is_balanced(&self) -> bool {
        let c = self.counts();
        c.iter().all(|&x| x == c[0])
    }

    /// Applies `perm` to every label.
    pub fn relabel(&self, perm: &[u8]) -> Self {
        Self { spins: self.spins.iter().map(|&s| perm[s as usize]).collect(), q: self.q }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pm1_encoding_round_trip() {
        let s = SpinConfig::from_pm1(&[1, -1, -1, 1]);
        assert_eq!(s.labels(), &[0, 1, 1, 0]);
        assert_eq!(s.to_pm1(), vec![1, -1, -1, 1]);
        assert!(s.is_balanced());
    }

    #[test]
    fn rejects_out_of_range_labels() {
        assert!(SpinConfig::new(vec![0, 3], 3).is_err());
        assert!(SpinConfig::new(vec![0], 1).is_err());
    }
}
