use rand::Rng;
use rand_distr::StandardNormal;

use crate::combinatorics::{binomial, factorial, for_each_multiset, for_each_subset, multiset_count, orderings, rank_multiset, rank_sorted};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorMode {
    /// Independent N(0,1) entries on every ordered index tuple (no symmetry).
    IidArray,
    /// Symmetric tensor with variance 1/(p-1)! on distinct tuples.
    StandardSymmetric,
    /// Symmetric tensor with a fixed variance on distinct tuples.
    KernelVariance(f64),
}

/// Gaussian p-array. Symmetric modes store one value per sorted tuple, so
/// every permutation of the indices reads the same entry. When
/// `with_diagonal` is set, sorted tuples with repeated indices are stored too.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianTensor {
    n: usize,
    p: usize,
    mode: TensorMode,
    with_diagonal: bool,
    values: Vec<f64>,
}

fn check_np(n: usize, p: usize) -> Result<()> {
    if p < 2 || n < p {
        return Err(invalid(format!("need 2 <= p <= n, got n={n}, p={p}")));
    }
    Ok(())
}

impl GaussianTensor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn mode(&self) -> TensorMode {
        self.mode
    }

    pub fn with_diagonal(&self) -> bool {
        self.with_diagonal
    }

    /// Entry at any ordering of `tuple`. Repeated indices read zero unless the
    /// diagonal is stored. For `IidArray` the tuple is taken as ordered.
    pub fn get(&self, tuple: &[u32]) -> f64 {
        assert_eq!(tuple.len(), self.p, "tuple arity");
        if self.mode == TensorMode::IidArray {
            let code = tuple.iter().fold(0usize, |acc, &i| acc * self.n + i as usize);
            return self.values[code];
        }
        let mut t = tuple.to_vec();
        t.sort_unstable();
        if self.with_diagonal {
            self.values[rank_multiset(&t)]
        } else if crate::combinatorics::has_repeat(&t) {
            0.0
        } else {
            self.values[rank_sorted(&t)]
        }
    }

    /// Stored sorted tuples with their values, in lexicographic order.
    /// Not available for `IidArray`.
    pub fn for_each_entry(&self, mut f: impl FnMut(&[u32], f64)) {
        assert!(self.mode != TensorMode::IidArray, "iid arrays have no sorted storage");
        if self.with_diagonal {
            for_each_multiset(self.n, self.p, |t| f(t, self.values[rank_multiset(t)]));
        } else {
            for_each_subset(self.n, self.p, |t| f(t, self.values[rank_sorted(t)]));
        }
    }

    /// Multiplies every entry by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut t = self.clone();
        for v in t.values.iter_mut() {
            *v *= c;
        }
        t
    }

    fn symmetric<R: Rng + ?Sized>(n: usize, p: usize, var: f64, mode: TensorMode, with_diagonal: bool, rng: &mut R) -> Result<Self> {
        check_np(n, p)?;
        if !(var >= 0.0 && var.is_finite()) {
            return Err(invalid(format!("variance {var} must be finite and non-negative")));
        }
        let values = if with_diagonal {
            let mut v = vec![0.0; multiset_count(n, p)];
            let pf = factorial(p as u64) as f64;
            for_each_multiset(n, p, |t| {
                // distinct orderings of t: p!/prod(mult!), so prod(mult!) = p!/orderings
                let scale = pf / orderings(t) as f64;
                let z: f64 = rng.sample(StandardNormal);
                v[rank_multiset(t)] = z * (var * scale).sqrt();
            });
            v
        } else {
            let sd = var.sqrt();
            (0..binomial(n as u64, p as u64) as usize)
                .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
                .collect()
        };
        Ok(Self { n, p, mode, with_diagonal, values })
    }
}

/// Standard symmetric tensor sampled directly: an independent N(0, 1/(p-1)!)
/// per sorted distinct tuple.
pub fn gen_standard_symmetric_tensor<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Result<GaussianTensor> {
    let var = 1.0 / factorial(p as u64 - 1) as f64;
    GaussianTensor::symmetric(n, p, var, TensorMode::StandardSymmetric, false, rng)
}

/// Standard symmetric tensor including repeated-index entries, whose variance
/// is prod(mult!)/(p-1)! as in the symmetrized construction.
pub fn gen_standard_symmetric_tensor_with_diagonal<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Result<GaussianTensor> {
    let var = 1.0 / factorial(p as u64 - 1) as f64;
    GaussianTensor::symmetric(n, p, var, TensorMode::StandardSymmetric, true, rng)
}

/// Symmetric tensor with variance `kappa2` on distinct tuples.
pub fn gen_kernel_variance_tensor<R: Rng + ?Sized>(n: usize, p: usize, kappa2: f64, rng: &mut R) -> Result<GaussianTensor> {
    GaussianTensor::symmetric(n, p, kappa2, TensorMode::KernelVariance(kappa2), false, rng)
}

/// Array of iid N(0,1) entries on all n^p ordered tuples.
pub fn gen_iid_array<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Result<GaussianTensor> {
    check_np(n, p)?;
    let len = n.checked_pow(p as u32).filter(|&l| l <= 1 << 28).ok_or_else(|| invalid("iid array too large"))?;
    let values = (0..len).map(|_| rng.sample(StandardNormal)).collect();
    Ok(GaussianTensor { n, p, mode: TensorMode::IidArray, with_diagonal: true, values })
}

/// Standard symmetric tensor built by symmetrizing an iid array:
/// J = sqrt(p)/p! * sum over permutations of V. Memory O(n^p); kept to
/// cross-check the direct sampler.
pub fn gen_standard_symmetric_pi_sum<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Result<GaussianTensor> {
    let v = gen_iid_array(n, p, rng)?;
    let c = (p as f64).sqrt() / factorial(p as u64) as f64;
    let mut values = vec![0.0; multiset_count(n, p)];
    let mut perm: Vec<usize> = (0..p).collect();
    let mut ordered = vec![0u32; p];
    for_each_multiset(n, p, |t| {
        let mut sum = 0.0;
        // all p! permutations of positions (Heap's algorithm)
        for_each_permutation(&mut perm, |pi| {
            for (o, &k) in ordered.iter_mut().zip(pi) {
                *o = t[k];
            }
            sum += v.get(&ordered);
        });
        values[rank_multiset(t)] = c * sum;
    });
    Ok(GaussianTensor { n, p, mode: TensorMode::StandardSymmetric, with_diagonal: true, values })
}

fn for_each_permutation(a: &mut [usize], mut f: impl FnMut(&[usize])) {
    let n = a.len();
    let mut c = vec![0usize; n];
    f(a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Symmetric matrix with N(0,1) off-diagonal and N(0,2) diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct GoeMatrix {
    n: usize,
    data: Vec<f64>,
}

impl GoeMatrix {
    pub fn sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = std::f64::consts::SQRT_2 * rng.sample::<f64, _>(StandardNormal);
            for j in i + 1..n {
                let z = rng.sample(StandardNormal);
                data[i * n + j] = z;
                data[j * n + i] = z;
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(invalid("matrix is not symmetric"));
                }
            }
        }
        Ok(Self { n, data })
    }
}
