use nalgebra::{DMatrix, SymmetricEigen};

use super::kernel::{decode, Kernel};
use super::spin::SpinConfig;
use crate::combinatorics::binomial;
use crate::error::{invalid, Error, Result};

const SIMPLEX_TOL: f64 = 1e-12;
const MIN_STARTS: usize = 200;

fn check_simplex(kernel: &Kernel, m: &[f64]) -> Result<()> {
    if m.len() != kernel.q() {
        return Err(Error::DimensionMismatch(format!("type vector of length {} for alphabet {}", m.len(), kernel.q())));
    }
    let neg = m.iter().fold(0.0f64, |a, &x| a.max(-x));
    let dev = neg.max((m.iter().sum::<f64>() - 1.0).abs());
    if !dev.is_finite() || dev > SIMPLEX_TOL {
        return Err(Error::OutsideSimplex(dev));
    }
    Ok(())
}

/// Sum over all codes of `f(code) * prod m[digits]` restricted to the
/// first `fixed` positions being prescribed by `head`.
fn partial_sum(kernel: &Kernel, head: &[u8], m: &[f64]) -> f64 {
    let (p, q) = (kernel.p(), kernel.q());
    let rest = p - head.len();
    let mut args = vec![0u8; p];
    args[..head.len()].copy_from_slice(head);
    let mut digits = vec![0u8; rest];
    let mut total = 0.0;
    for code in 0..q.pow(rest as u32) {
        decode(code, q, &mut digits);
        let mut w = 1.0;
        for (slot, &d) in args[head.len()..].iter_mut().zip(&digits) {
            *slot = d;
            w *= m[d as usize];
        }
        total += kernel.eval(&args) * w;
    }
    total
}

/// Psi(m) = sum_{j1..jp} f(j1..jp) m_j1 ... m_jp.
pub fn psi(kernel: &Kernel, m: &[f64]) -> Result<f64> {
    check_simplex(kernel, m)?;
    Ok(partial_sum(kernel, &[], m))
}

fn gradient(kernel: &Kernel, m: &[f64]) -> Vec<f64> {
    let p = kernel.p() as f64;
    (0..kernel.q()).map(|j| p * partial_sum(kernel, &[j as u8], m)).collect()
}

fn hessian(kernel: &Kernel, m: &[f64]) -> DMatrix<f64> {
    let q = kernel.q();
    if kernel.p() < 2 {
        return DMatrix::zeros(q, q);
    }
    let c = (kernel.p() * (kernel.p() - 1)) as f64;
    DMatrix::from_fn(q, q, |i, j| c * partial_sum(kernel, &[i as u8, j as u8], m))
}

/// Hessian of Psi in the free coordinates m_1..m_{q-1}, with m_q = 1 - sum.
fn reduced_hessian(h: &DMatrix<f64>) -> DMatrix<f64> {
    let k = h.nrows() - 1;
    DMatrix::from_fn(k, k, |i, j| h[(i, j)] - h[(i, k)] - h[(k, j)] + h[(k, k)])
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn projected_gradient_norm(m: &[f64], g: &[f64]) -> f64 {
    let stepped: Vec<f64> = m.iter().zip(g).map(|(a, b)| a + b).collect();
    project_simplex(&stepped).iter().zip(m).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

/// Lattice points of the simplex with denominator r.
fn simplex_grid(q: usize, r: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; q];
    fn rec(pos: usize, left: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.iter().map(|&c| c as f64 / r as f64).collect());
            return;
        }
        for c in 0..=left {
            cur[pos] = c;
            rec(pos + 1, left - c, r, cur, out);
        }
    }
    rec(0, r, r, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PsiMax {
    pub m_star: Vec<f64>,
    pub value: f64,
    /// Smallest eigenvalue of the negated reduced Hessian at m*.
    pub min_eig_neg_hessian: f64,
    pub interior: bool,
    pub projected_gradient_norm: f64,
    /// Interior maximizer with a strictly negative definite reduced Hessian.
    pub c2_holds: bool,
}

/// Maximizes Psi over the simplex by multistart projected gradient ascent
/// with a Newton polish, and reports curvature at the maximizer.
pub fn psi_max_and_hessian(kernel: &Kernel) -> Result<PsiMax> {
    let (p, q) = (kernel.p(), kernel.q());
    if q > 8 || p > 4 {
        return Err(invalid(format!("Psi search supports q <= 8 and p <= 4, got q={q}, p={p}")));
    }
    let mut r = 1;
    while (binomial((r + q - 1) as u64, (q - 1) as u64) as usize) < MIN_STARTS {
        r += 1;
    }
    let mut starts = simplex_grid(q, r);
    starts.push(vec![1.0 / q as f64; q]);

    // gradient Lipschitz bound on the simplex
    let lip = (p * p.saturating_sub(1)) as f64 * kernel.sup_norm() * (q as f64).sqrt() + 1e-12;
    let step = 1.0 / lip;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in starts {
        let mut m = start;
        for _ in 0..20_000 {
            let g = gradient(kernel, &m);
            let next = project_simplex(&m.iter().zip(&g).map(|(a, b)| a + step * b).collect::<Vec<_>>());
            let moved = next.iter().zip(&m).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            m = next;
            if moved < 1e-13 {
                break;
            }
        }
        let v = partial_sum(kernel, &[], &m);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv + 1e-12) {
            best = Some((v, m));
        }
    }
    let (_, mut m) = best.expect("grid is non-empty");

    let interior_tol = 1e-9;
    let is_interior = |m: &[f64]| m.iter().all(|&x| x > interior_tol);
    if is_interior(&m) && q > 1 {
        for _ in 0..50 {
            let g = gradient(kernel, &m);
            let hb = reduced_hessian(&hessian(kernel, &m));
            let gb = nalgebra::DVector::from_fn(q - 1, |i, _| g[i] - g[q - 1]);
            let Some(delta) = (-hb).cholesky().map(|c| c.solve(&gb)) else { break };
            let mut next = m.clone();
            for i in 0..q - 1 {
                next[i] += delta[i];
                next[q - 1] -= delta[i];
            }
            if !is_interior(&next) {
                break;
            }
            let size = delta.amax();
            m = next;
            if size < 1e-15 {
                break;
            }
        }
    }
    let g = gradient(kernel, &m);
    let h = hessian(kernel, &m);
    let interior = is_interior(&m);
    let min_eig = if q > 1 {
        SymmetricEigen::new(-reduced_hessian(&h)).eigenvalues.min()
    } else {
        0.0
    };
    Ok(PsiMax {
        value: partial_sum(kernel, &[], &m),
        projected_gradient_norm: projected_gradient_norm(&m, &g),
        c2_holds: interior && min_eig > 1e-9,
        min_eig_neg_hessian: min_eig,
        interior,
        m_star: m,
    })
}

/// Residual r_j = sum f(j, j2..jp) m_j2..m_jp - eta at a type vector m, with eta
/// the alphabet mean of the first term.
pub fn c1_residual_at(kernel: &Kernel, m: &[f64]) -> Result<Vec<f64>> {
    check_simplex(kernel, m)?;
    let lhs: Vec<f64> = (0..kernel.q()).map(|j| partial_sum(kernel, &[j as u8], m)).collect();
    let eta = lhs.iter().sum::<f64>() / lhs.len() as f64;
    Ok(lhs.into_iter().map(|x| x - eta).collect())
}

/// Residual evaluated at the empirical type vector of sigma.
pub fn c1_residual(kernel: &Kernel, sigma: &SpinConfig) -> Result<Vec<f64>> {
    if sigma.q() != kernel.q() {
        return Err(Error::DimensionMismatch("configuration alphabet differs from kernel".into()));
    }
    c1_residual_at(kernel, &sigma.type_fractions())
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn psi_examples() {
        let cut = Kernel::cut(2, 3).unwrap();
        assert!(close(psi(&cut, &[1.0 / 3.0; 3]).unwrap(), 2.0 / 3.0, 1e-15));
        assert_eq!(psi(&cut, &[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!(close(psi(&Kernel::xor(3).unwrap(), &[0.5, 0.5]).unwrap(), 0.0, 1e-15));
        assert!(matches!(psi(&cut, &[0.5, 0.6, -0.1]), Err(Error::OutsideSimplex(_))));
        assert!(psi(&cut, &[0.5, 0.5]).is_err());
    }

    #[test]
    fn cut_maximizers() {
        let m = psi_max_and_hessian(&Kernel::cut(2, 2).unwrap()).unwrap();
        assert!(close(m.m_star[0], 0.5, 1e-10));
        assert!(close(m.value, 0.5, 1e-12));
        // Psi(x, 1-x) = 2x(1-x): second derivative -4, i.e. 2(I + 11^T) in one dimension
        assert!(close(m.min_eig_neg_hessian, 4.0, 1e-9));
        assert!(m.c2_holds);
        let m4 = psi_max_and_hessian(&Kernel::cut(2, 4).unwrap()).unwrap();
        assert!(close(m4.value, 0.75, 1e-12));
        assert!(m4.m_star.iter().all(|&x| close(x, 0.25, 1e-9)));
        // -Hess = 2 (I + 11^T) in the free coordinates: eigenvalues 2, 2, 8
        assert!(close(m4.min_eig_neg_hessian, 2.0, 1e-9));
        let hb = -reduced_hessian(&hessian(&Kernel::cut(2, 4).unwrap(), &m4.m_star));
        let expected = DMatrix::from_fn(3, 3, |i, j| if i == j { 4.0 } else { 2.0 });
        assert!((hb - expected).amax() < 1e-12);
        assert!(m4.projected_gradient_norm < 1e-8);
    }

    #[test]
    fn degenerate_kernels_fail_c2() {
        let c = psi_max_and_hessian(&Kernel::constant(2, 3, 1.5).unwrap()).unwrap();
        assert!(close(c.value, 1.5, 1e-12));
        assert!(close(c.min_eig_neg_hessian, 0.0, 1e-12));
        assert!(!c.c2_holds);
        let ind = psi_max_and_hessian(&Kernel::indicator(2, 2, 0).unwrap()).unwrap();
        assert!(close(ind.value, 1.0, 1e-12));
        assert!(!ind.interior && !ind.c2_holds);
    }

    #[test]
    fn simplex_projection() {
        assert_eq!(project_simplex(&[0.2, 0.8]), vec![0.2, 0.8]);
        let p = project_simplex(&[2.0, 0.0, 0.0]);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        assert!(p.iter().all(|&x| close(x, 1.0 / 3.0, 1e-15)));
    }

    #[test]
    fn c1_examples() {
        let cut = Kernel::cut(3, 3).unwrap();
        let s = SpinConfig::new(vec![0, 1, 2, 2, 1, 0], 3).unwrap();
        assert!(sup_norm(&c1_residual(&cut, &s).unwrap()) < 1e-15);
        // p = 2 xor: lhs_j = pm1(j) * mu
        let s = SpinConfig::from_pm1(&[1, 1, 1, -1]);
        let r = c1_residual(&Kernel::xor(2).unwrap(), &s).unwrap();
        assert!(close(r[0], 0.5, 1e-15) && close(r[1], -0.5, 1e-15));
    }

    #[test]
    fn c1_matches_nested_loops() {
        let k = Kernel::from_fn(3, 3, |a| (a[0] as f64 - 1.0) * (a[1] as f64 + 2.0) * (a[2] as f64 + 0.5)).unwrap();
        let s = SpinConfig::new(vec![0, 2, 2, 1, 0, 2, 1, 2], 3).unwrap();
        let m = s.type_fractions();
        let mut lhs = [0.0; 3];
        for (j, l) in lhs.iter_mut().enumerate() {
            for a in 0..3u8 {
                for b in 0..3u8 {
                    *l += k.eval(&[j as u8, a, b]) * m[a as usize] * m[b as usize];
                }
            }
        }
        let eta = lhs.iter().sum::<f64>() / 3.0;
        let r = c1_residual(&k, &s).unwrap();
        for j in 0..3 {
            assert!(close(r[j], lhs[j] - eta, 1e-13));
        }
    }
}
