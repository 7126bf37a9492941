use rand::Rng;

use super::PUniformHypergraph;
use crate::error::{invalid, Result};

/// Planted-bisection graph with its planted labels.
#[derive(Debug, Clone)]
pub struct SbmGraph {
    pub graph: PUniformHypergraph,
    /// +1 on the first half of the vertices, -1 on the second.
    pub labels: Vec<i8>,
    pub a: f64,
    pub b: f64,
}

impl SbmGraph {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Average degree (a + b) / 2.
    pub fn d(&self) -> f64 {
        (self.a + self.b) / 2.0
    }

    /// Signal-to-noise ratio (a - b) / sqrt(2 (a + b)).
    pub fn xi(&self) -> f64 {
        if self.a + self.b == 0.0 {
            return 0.0;
        }
        (self.a - self.b) / (2.0 * (self.a + self.b)).sqrt()
    }

    /// Canonical text: hypergraph form followed by a line of +-1 labels.
    pub fn to_text(&self) -> String {
        let mut s = self.graph.to_text();
        let labels: Vec<String> = self.labels.iter().map(|l| format!("{l:+}")).collect();
        s.push_str(&labels.join(" "));
        s.push('\n');
        s
    }
}

/// Rates `(a, b)` for average degree `d` and SNR `xi`.
pub fn sbm_rates(d: f64, xi: f64) -> (f64, f64) {
    (d + xi * d.sqrt(), d - xi * d.sqrt())
}

/// Stochastic block model: within-block edges with probability a/n,
/// across-block edges with probability b/n, all independent.
pub fn gen_sbm<R: Rng + ?Sized>(n: usize, a: f64, b: f64, rng: &mut R) -> Result<SbmGraph> {
    if !n.is_multiple_of(2) || n < 2 {
        return Err(invalid(format!("n={n} must be even and positive")));
    }
    if !(b >= 0.0) || !(a >= b) {
        return Err(invalid(format!("need 0 <= b <= a, got a={a}, b={b}")));
    }
    if a > n as f64 {
        return Err(invalid(format!("a={a} exceeds n={n}: edge probability above 1")));
    }
    let half = n / 2;
    let labels: Vec<i8> = (0..n).map(|i| if i < half { 1 } else { -1 }).collect();
    let (p_in, p_out) = (a / n as f64, b / n as f64);
    let mut graph = PUniformHypergraph::new(n, 2, false)?;
    for i in 0..n {
        for j in i + 1..n {
            let prob = if labels[i] == labels[j] { p_in } else { p_out };
            if rng.random::<f64>() < prob {
                graph.add_edge_unchecked(vec![i as u32, j as u32]);
            }
        }
    }
    Ok(SbmGraph { graph, labels, a, b })
}
