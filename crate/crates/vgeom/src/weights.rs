//! Lyapunov weights, weighted sup-norms, and the geometric-distance
//! Lipschitz seminorm.
//!
//! All weight evaluations go through `log_eval`; ratios of weights are formed
//! in log space so that geometric weights stay usable far beyond the range
//! where `gamma^n` itself is representable.

use serde::{Deserialize, Serialize};

use crate::error::{Result, VgeomError};

/// A pointwise weight function `V >= 1` on the state space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFn {
    /// `V(x) = gamma^x`, `gamma > 1`.
    Geometric { gamma: f64 },
    /// `V(x) = (1 + |x - center|)^a`, `a >= 1`.
    Polynomial { a: f64, center: f64 },
    /// `V == 1` (plain sup-norm).
    Unit,
}

impl WeightFn {
    pub fn geometric(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(VgeomError::invalid(format!(
                "geometric weight needs gamma > 1, got {gamma}"
            )));
        }
        Ok(WeightFn::Geometric { gamma })
    }

    pub fn polynomial(a: f64, center: f64) -> Result<Self> {
        if !(a >= 1.0) || !a.is_finite() || !center.is_finite() {
            return Err(VgeomError::invalid(format!(
                "polynomial weight needs a >= 1 and finite center, got a={a}, center={center}"
            )));
        }
        Ok(WeightFn::Polynomial { a, center })
    }

    /// `ln V(x)`.
    pub fn log_eval(&self, x: f64) -> f64 {
        match self {
            WeightFn::Geometric { gamma } => x * gamma.ln(),
            WeightFn::Polynomial { a, center } => a * (1.0 + (x - center).abs()).ln(),
            WeightFn::Unit => 0.0,
        }
    }

    /// `V(x)`; may overflow to infinity for large geometric arguments.
    pub fn eval(&self, x: f64) -> f64 {
        self.log_eval(x).exp()
    }

    /// `ln V(i)` at an integer state.
    pub fn log_eval_idx(&self, i: usize) -> f64 {
        self.log_eval(i as f64)
    }

    /// `V(i)` at an integer state.
    pub fn eval_idx(&self, i: usize) -> f64 {
        self.eval(i as f64)
    }
}

/// A vector of function values together with the weight that norms them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedVector {
    pub values: Vec<f64>,
    pub weight: WeightFn,
}

impl WeightedVector {
    pub fn new(values: Vec<f64>, weight: WeightFn) -> Self {
        WeightedVector { values, weight }
    }

    /// The weighted sup-norm of the stored values.
    pub fn norm(&self) -> Result<f64> {
        weighted_norm(&self.values, &self.weight)
    }
}

/// `|f|_V = sup_i |f(i)| / V(i)` over the stored range.
///
/// The ratio is formed as `exp(ln|f(i)| - ln V(i))`, so it stays finite even
/// when `V(i)` alone would overflow.
pub fn weighted_norm(values: &[f64], weight: &WeightFn) -> Result<f64> {
    if values.is_empty() {
        return Err(VgeomError::invalid("weighted_norm of an empty vector"));
    }
    let mut best = 0.0f64;
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(VgeomError::invalid(format!(
                "weighted_norm: non-finite value at index {i}"
            )));
        }
        if v == 0.0 {
            continue;
        }
        let r = (v.abs().ln() - weight.log_eval_idx(i)).exp();
        if r > best {
            best = r;
        }
    }
    Ok(best)
}

/// The metric `d(i, j) = |gamma^i - gamma^j|` on the nonnegative integers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricDistance {
    pub gamma: f64,
}

impl GeometricDistance {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(VgeomError::invalid(format!(
                "geometric distance needs gamma > 1, got {gamma}"
            )));
        }
        Ok(GeometricDistance { gamma })
    }

    /// `ln d(i, j)` for `i != j`, stable for arbitrarily large indices:
    /// `gamma^j - gamma^i = gamma^j (1 - gamma^{i-j})` for `i < j`.
    pub fn log_dist(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(lo < hi);
        let lg = self.gamma.ln();
        let t = (-((hi - lo) as f64) * lg).exp();
        hi as f64 * lg + (-t).ln_1p()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.log_dist(i, j).exp()
        }
    }
}

/// The Lipschitz seminorm `m_1(f) = sup_{i != j} |f(i) - f(j)| / d(i, j)`
/// with respect to a geometric distance, brute-forced over all pairs
/// `0 <= i < j <= min(M, len-1)`.
pub fn lipschitz_seminorm_m1(values: &[f64], d: &GeometricDistance, m: usize) -> Result<f64> {
    if values.is_empty() {
        return Err(VgeomError::invalid("lipschitz_seminorm_m1 of an empty vector"));
    }
    let hi = m.min(values.len() - 1);
    let mut best = 0.0f64;
    for i in 0..hi {
        for j in (i + 1)..=hi {
            let num = (values[i] - values[j]).abs();
            if num == 0.0 {
                continue;
            }
            let q = (num.ln() - d.log_dist(i, j)).exp();
            if q > best {
                best = q;
            }
        }
    }
    Ok(best)
}

/// Bound `m_1(f) <= (gamma + 1) / (gamma - 1) * |f|_1` relating the
/// Lipschitz seminorm to the weighted sup-norm with `V = gamma^x`.
pub fn m1_from_weighted_norm_bound(f_norm: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 1.0) {
        return Err(VgeomError::invalid(format!(
            "m1 bound needs gamma > 1, got {gamma}"
        )));
    }
    if !(f_norm >= 0.0) {
        return Err(VgeomError::invalid("m1 bound needs a nonnegative norm"));
    }
    Ok((gamma + 1.0) / (gamma - 1.0) * f_norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_norm_of_identity() {
        // f(i) = i with V = 2^i on 0..=20: the ratio i/2^i peaks at 0.5,
        // attained at both i = 1 and i = 2.
        let f: Vec<f64> = (0..=20).map(|i| i as f64).collect();
        let w = WeightFn::geometric(2.0).unwrap();
        let n = weighted_norm(&f, &w).unwrap();
        assert!((n - 0.5).abs() < 1e-15, "norm {n}");
        let r1 = 1.0 / 2.0f64;
        let r2 = 2.0 / 4.0f64;
        assert_eq!(r1, r2);
    }

    #[test]
    fn unit_weight_is_plain_sup() {
        let f = vec![0.25, -0.75, 0.5];
        let n = weighted_norm(&f, &WeightFn::Unit).unwrap();
        assert!((n - 0.75).abs() < 1e-15);
    }

    #[test]
    fn empty_vector_errors() {
        assert!(weighted_norm(&[], &WeightFn::Unit).is_err());
        let d = GeometricDistance::new(2.0).unwrap();
        assert!(lipschitz_seminorm_m1(&[], &d, 10).is_err());
    }

    #[test]
    fn log_norm_survives_huge_weights() {
        // gamma^i overflows past i ~ 1024 for gamma = 2; the ratio must not.
        let mut f = vec![0.0; 3000];
        f[2999] = 1.0;
        let w = WeightFn::geometric(2.0).unwrap();
        let n = weighted_norm(&f, &w).unwrap();
        assert!(n > 0.0 && n.is_finite());
        assert!((n.ln() - (-2999.0 * 2.0f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn seminorm_of_indicator_matches_closed_form() {
        // m_1(1_{j}) = gamma^{1-j} / (gamma - 1): the sup is attained by the
        // neighbor pair (j, j+1) on the geometric metric. Brute force over
        // all pairs up to M = 60 against the closed form for j = 3, gamma = 2.
        let mut f = vec![0.0; 61];
        f[3] = 1.0;
        let d = GeometricDistance::new(2.0).unwrap();
        let s = lipschitz_seminorm_m1(&f, &d, 60).unwrap();
        let closed = 2.0f64.powi(1 - 3) / (2.0 - 1.0);
        assert!((s - 0.25).abs() < 1e-14, "seminorm {s}");
        assert!((s - closed).abs() < 1e-14);
    }

    #[test]
    fn seminorm_bound_examples() {
        assert!((m1_from_weighted_norm_bound(1.0, 2.0).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(m1_from_weighted_norm_bound(0.0, 7.0).unwrap(), 0.0);
        assert!((m1_from_weighted_norm_bound(1.5, 2.0).unwrap() - 4.5).abs() < 1e-15);
        assert!(m1_from_weighted_norm_bound(1.0, 1.0).is_err());
    }

    #[test]
    fn distance_log_form_matches_direct() {
        let d = GeometricDistance::new(1.5).unwrap();
        for (i, j) in [(0usize, 1usize), (2, 7), (10, 11), (0, 40)] {
            let direct = (1.5f64.powi(j as i32) - 1.5f64.powi(i as i32)).abs();
            assert!(
                (d.dist(i, j) - direct).abs() / direct < 1e-13,
                "pair ({i},{j})"
            );
            assert_eq!(d.dist(i, j), d.dist(j, i));
        }
        assert_eq!(d.dist(5, 5), 0.0);
    }

    #[test]
    fn weight_roundtrip_log_eval() {
        let w = WeightFn::geometric(1.7).unwrap();
        for i in 0..50 {
            let direct = 1.7f64.powi(i);
            assert!((w.eval_idx(i as usize) - direct).abs() / direct < 1e-12);
        }
        let p = WeightFn::polynomial(2.0, 0.0).unwrap();
        assert!((p.eval(3.0) - 16.0).abs() < 1e-12);
        assert!((p.eval(-3.0) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn constructor_domain_checks() {
        assert!(WeightFn::geometric(1.0).is_err());
        assert!(WeightFn::geometric(0.5).is_err());
        assert!(WeightFn::polynomial(0.5, 0.0).is_err());
        assert!(GeometricDistance::new(1.0).is_err());
    }
}
