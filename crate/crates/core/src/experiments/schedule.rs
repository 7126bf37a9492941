use crate::error::{invalid, Result};

/// beta = d^(1/4 - delta).
pub fn beta_schedule(d: f64, delta: f64) -> Result<f64> {
    if !(d >= 1.0) || !d.is_finite() {
        return Err(invalid(format!("d={d} must be finite and at least 1")));
    }
    if !(delta > 0.0 && delta < 0.25) {
        return Err(invalid(format!("delta={delta} must lie in (0, 1/4)")));
    }
    Ok(d.powf(0.25 - delta))
}

/// D beta^2 / sqrt(d) + 2 ln(q) / beta: interpolation error plus the
/// entropy slack of the finite-temperature approximation, both at scale sqrt(d).
pub fn combined_bound(big_d: f64, beta: f64, d: f64, q: usize) -> f64 {
    big_d * beta * beta / d.sqrt() + 2.0 * (q as f64).ln() / beta
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((beta_schedule(16.0, 0.125).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(beta_schedule(1.0, 0.1).unwrap(), 1.0);
        assert!(beta_schedule(0.5, 0.1).is_err());
        assert!(beta_schedule(16.0, 0.25).is_err());
        assert!(beta_schedule(16.0, 0.0).is_err());
    }

    #[test]
    fn bound_decreases_with_d() {
        let b: Vec<f64> = [16.0, 256.0, 4096.0]
            .iter()
            .map(|&d| combined_bound(1.0, beta_schedule(d, 0.125).unwrap(), d, 2))
            .collect();
        assert!(b[0] > b[1] && b[1] > b[2], "{b:?}");
    }
}
