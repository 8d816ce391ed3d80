//! Weak-drift analysis: iterated weight ratios, the tail functional and its
//! geometric root, increment generating functions, feasibility tests, and
//! small-set minorization certificates.
//!
//! All kernel applications here are exact-prefix computations: a function
//! known on `0..=m` determines its image on `0..=m - up_reach` with no
//! truncation error, provided the boundary rows see a full input
//! (`m >= boundary_cols`). Ratios `(P^N V)(i) / V(i)` are propagated instead
//! of raw values so geometric weights never overflow.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{Increments, Kernel};
use crate::error::{Result, VgeomError};
use crate::weights::{WeightFn, WeightedVector};

/// Result of the tail-functional sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DriftReport {
    /// The horizon attaining the minimum of `ell_N^{1/N}`.
    #[serde(rename = "N_star")]
    pub n_star: usize,
    /// `ell_N` for each horizon `1..=N_max`.
    pub ell: BTreeMap<usize, f64>,
    /// `L = min_N ell_N^{1/N}`.
    #[serde(rename = "L")]
    pub l: f64,
    /// Estimate of the asymptotic decay factor of the weight; equals `L`.
    #[serde(rename = "delta_V_estimate")]
    pub delta_v_estimate: f64,
    /// Whether the weak drift condition holds (`L < 1`).
    pub wd_feasible: bool,
    /// Additive constant `d` making `P^{N*} V <= L^{N*} V + d` hold on the
    /// head of the state space, clipped at zero.
    pub d_constant: f64,
}

/// A one-step drift/minorization certificate on a finite small set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinorizationCertificate {
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    /// Minorizing measure `nu(j) = min_{i in S} P(i, j)` on the common support.
    pub nu: Vec<(usize, f64)>,
    pub nu_mass: f64,
    #[serde(rename = "nu_V")]
    pub nu_v: f64,
    /// Drift factor outside the small set.
    pub varrho: f64,
    /// Drift excess on the small set: `max_{i in S} (PV)(i) - varrho V(i)`.
    #[serde(rename = "M_drift")]
    pub m_drift: f64,
    pub tau: f64,
    /// Resulting bound on the weighted convergence rate.
    pub bound: f64,
}

/// Apply the similarity-transformed kernel to a ratio vector:
/// `out(i) = sum_j P(i, j) V(j)/V(i) h(j)`, exact on the shrunk prefix.
pub(crate) fn apply_ratio(kernel: &Kernel, weight: &WeightFn, h: &[f64]) -> Result<Vec<f64>> {
    let m_in = h.len() - 1;
    if m_in < kernel.boundary_cols {
        return Err(VgeomError::TruncationTooSmall {
            detail: format!(
                "boundary rows reach column {} but only 0..={} is known",
                kernel.boundary_cols, m_in
            ),
            required: kernel.boundary_cols,
        });
    }
    if m_in < kernel.up_reach {
        return Err(VgeomError::TruncationTooSmall {
            detail: "prefix shorter than one-step reach".into(),
            required: kernel.up_reach,
        });
    }
    let m_out = m_in - kernel.up_reach;
    let mut out = Vec::with_capacity(m_out + 1);
    for i in 0..=m_out {
        let log_vi = weight.log_eval_idx(i);
        let row = kernel.row(i);
        let mut acc = 0.0;
        for (j, p) in row {
            debug_assert!(j <= m_in, "row {i} reaches column {j} beyond prefix {m_in}");
            acc += p * (weight.log_eval_idx(j) - log_vi).exp() * h[j];
        }
        out.push(acc);
    }
    Ok(out)
}

fn check_horizon(kernel: &Kernel, n: usize, m: usize) -> Result<()> {
    let needed = n * kernel.up_reach + kernel.boundary_cols.max(kernel.up_reach);
    if m < needed {
        return Err(VgeomError::TruncationTooSmall {
            detail: format!(
                "horizon {n} with up-reach {} and boundary columns {} exceeds prefix {m}",
                kernel.up_reach, kernel.boundary_cols
            ),
            required: needed,
        });
    }
    Ok(())
}

/// `(P^N V)(i)` on the exactly computable prefix `0..=M - N * up_reach`.
pub fn iterated_weight(
    kernel: &Kernel,
    weight: &WeightFn,
    n: usize,
    m: usize,
) -> Result<WeightedVector> {
    if n == 0 {
        return Err(VgeomError::invalid("horizon N must be >= 1"));
    }
    check_horizon(kernel, n, m)?;
    let mut h = vec![1.0f64; m + 1];
    for _ in 0..n {
        h = apply_ratio(kernel, weight, &h)?;
    }
    let mut values = Vec::with_capacity(h.len());
    for (i, &r) in h.iter().enumerate() {
        let log_val = weight.log_eval_idx(i) + r.max(f64::MIN_POSITIVE).ln();
        if log_val > 700.0 {
            return Err(VgeomError::invalid(format!(
                "(P^N V)({i}) overflows f64; work with ratios via ell_and_L instead"
            )));
        }
        values.push(r * weight.eval_idx(i));
    }
    Ok(WeightedVector::new(values, weight.clone()))
}

/// Sweep `ell_N = max_{tail_start <= i <= M - N*up_reach} (P^N V)(i) / V(i)`
/// over horizons `1..=N_max` and minimize `ell_N^{1/N}`.
pub fn ell_and_l(
    kernel: &Kernel,
    weight: &WeightFn,
    n_max: usize,
    m: usize,
    tail_start: usize,
) -> Result<DriftReport> {
    if n_max == 0 {
        return Err(VgeomError::invalid("N_max must be >= 1"));
    }
    check_horizon(kernel, n_max, m)?;
    let last_valid = m - n_max * kernel.up_reach;
    if tail_start > last_valid {
        return Err(VgeomError::TruncationTooSmall {
            detail: format!(
                "tail window [{tail_start}, {last_valid}] empty at horizon {n_max}"
            ),
            required: tail_start + n_max * kernel.up_reach,
        });
    }
    let mut h = vec![1.0f64; m + 1];
    let mut ell = BTreeMap::new();
    let mut best = f64::INFINITY;
    let mut n_star = 1usize;
    let mut h_star: Vec<f64> = Vec::new();
    for n in 1..=n_max {
        h = apply_ratio(kernel, weight, &h)?;
        let valid_end = m - n * kernel.up_reach;
        let ell_n = h[tail_start..=valid_end]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        ell.insert(n, ell_n);
        let root = ell_n.powf(1.0 / n as f64);
        if root < best {
            best = root;
            n_star = n;
            h_star = h.clone();
        }
    }
    let l = best;
    // Additive excess on the head: (P^{N*}V)(i) - L^{N*} V(i) for i below
    // the tail window, computed from ratios to avoid forming huge weights.
    let ln_pow = l.ln() * n_star as f64;
    let mut d = 0.0f64;
    for (i, &r) in h_star.iter().enumerate().take(tail_start) {
        let log_vi = weight.log_eval_idx(i);
        if log_vi > 700.0 {
            return Err(VgeomError::invalid(
                "weight overflows below the tail window; lower tail_start",
            ));
        }
        let excess = (r - ln_pow.exp()) * log_vi.exp();
        if excess > d {
            d = excess;
        }
    }
    Ok(DriftReport {
        n_star,
        ell,
        l,
        delta_v_estimate: l,
        wd_feasible: l < 1.0,
        d_constant: d,
    })
}

fn check_law(incs: &Increments) -> Result<()> {
    if incs.is_empty() {
        return Err(VgeomError::invalid("empty increment law"));
    }
    let sum: f64 = incs.values().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(VgeomError::invalid(format!(
            "increment masses sum to {sum}, not 1"
        )));
    }
    if incs.values().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(VgeomError::invalid("increment masses must lie in [0,1]"));
    }
    Ok(())
}

/// Increment generating function `phi(gamma) = sum_k a_k gamma^k`.
pub fn phi(incs: &Increments, gamma: f64) -> Result<f64> {
    check_law(incs)?;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(VgeomError::invalid(format!("gamma = {gamma} outside (0,inf)")));
    }
    Ok(incs
        .iter()
        .map(|(&k, &p)| p * gamma.powi(k))
        .sum())
}

/// `phi^(order)(gamma)`: exact derivative via falling factorials.
pub fn phi_derivative(incs: &Increments, gamma: f64, order: usize) -> Result<f64> {
    check_law(incs)?;
    if !(gamma > 0.0) {
        return Err(VgeomError::invalid("gamma must be positive"));
    }
    Ok(incs
        .iter()
        .map(|(&k, &p)| {
            let mut ff = 1.0f64;
            for j in 0..order {
                ff *= (k as f64) - j as f64;
            }
            p * ff * gamma.powi(k - order as i32)
        })
        .sum())
}

/// Minimize the convex map `gamma -> phi(gamma)` over `(1, gamma_max]` by
/// ternary search; returns `(gamma_star, phi(gamma_star))`.
///
/// When the infimum sits at the left boundary (nonnegative-drift laws) the
/// returned `gamma_star` hugs 1 and `phi_star` hugs `phi(1) = 1`; callers
/// decide feasibility by testing `phi_star < 1`.
pub fn minimize_phi(incs: &Increments, gamma_max: f64) -> Result<(f64, f64)> {
    check_law(incs)?;
    if !(gamma_max > 1.0) {
        return Err(VgeomError::invalid(format!(
            "gamma_max = {gamma_max} must exceed 1"
        )));
    }
    let eval = |g: f64| -> f64 {
        incs.iter().map(|(&k, &p)| p * g.powi(k)).sum()
    };
    let mut lo = 1.0f64;
    let mut hi = gamma_max;
    for _ in 0..500 {
        if hi - lo < 1e-10 {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if eval(m1) < eval(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let gamma_star = 0.5 * (lo + hi);
    Ok((gamma_star, eval(gamma_star)))
}

/// Decide weak-drift feasibility of a homogeneous increment law from the
/// lowest nonvanishing derivative of `phi` at 1.
///
/// Returns `(ell, sign)` where `ell` is the smallest order `<= 2b` with
/// `phi^(ell)(1) != 0` and `sign` its sign; the law admits a geometric
/// Lyapunov scale on `(1, gamma)` for some `gamma > 1` exactly when
/// `sign < 0`.
pub fn wd_feasibility_test(incs: &Increments) -> Result<(usize, i8)> {
    check_law(incs)?;
    let a0 = incs.get(&0).copied().unwrap_or(0.0);
    if (a0 - 1.0).abs() < 1e-15 {
        return Err(VgeomError::invalid(
            "a_0 = 1: the walk never moves, phi is identically 1",
        ));
    }
    let b = incs
        .iter()
        .filter(|&(_, &p)| p != 0.0)
        .map(|(&k, _)| k.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    if b == 0 {
        return Err(VgeomError::invalid("law concentrated at 0 with mass < 1"));
    }
    for order in 1..=2 * b {
        let mut val = 0.0f64;
        let mut scale = 0.0f64;
        for (&k, &p) in incs {
            let mut ff = 1.0f64;
            for j in 0..order {
                ff *= (k as f64) - j as f64;
            }
            val += p * ff;
            scale += (p * ff).abs();
        }
        if val.abs() > 1e-12 * scale.max(1.0) {
            return Ok((order, if val > 0.0 { 1 } else { -1 }));
        }
    }
    Err(VgeomError::InvariantViolated(format!(
        "all derivatives of phi at 1 up to order {} vanish numerically",
        2 * b
    )))
}

fn bound_from_parts(varrho: f64, m_drift: f64, nu_mass: f64, nu_v: f64) -> Result<f64> {
    if !(nu_mass > 0.0) {
        return Err(VgeomError::invalid(format!(
            "minorization mass {nu_mass} must be positive"
        )));
    }
    if !(0.0 < varrho && varrho < 1.0) {
        return Err(VgeomError::invalid(format!(
            "drift factor varrho = {varrho} outside (0,1)"
        )));
    }
    let tau = (m_drift - nu_v).max(0.0);
    Ok((varrho * nu_mass + tau) / (nu_mass + tau))
}

/// Rate bound `(varrho nu_mass + tau) / (nu_mass + tau)` with
/// `tau = max(0, M_drift - nu(V))`.
pub fn theorem21_bound(
    cert: &MinorizationCertificate,
    nu_mass: f64,
    nu_v: f64,
) -> Result<f64> {
    bound_from_parts(cert.varrho, cert.m_drift, nu_mass, nu_v)
}

/// Fit a one-step drift/minorization certificate on the finite set `S`.
///
/// `nu` is the entrywise minimum of the rows indexed by `S`; `varrho` is
/// fitted as the largest one-step weight ratio outside `S` on the exactly
/// computable prefix (pass `rho_override` to use an analytic value instead).
pub fn extract_minorization(
    kernel: &Kernel,
    s: &[usize],
    weight: &WeightFn,
    m: usize,
    rho_override: Option<f64>,
) -> Result<MinorizationCertificate> {
    if s.is_empty() {
        return Err(VgeomError::invalid("small set S is empty"));
    }
    check_horizon(kernel, 1, m)?;
    let mut s_sorted = s.to_vec();
    s_sorted.sort_unstable();
    s_sorted.dedup();

    // nu(j) = min_{i in S} P(i, j): support is the intersection of supports.
    let rows: Vec<BTreeMap<usize, f64>> = s_sorted
        .iter()
        .map(|&i| kernel.row_checked(i).map(|r| r.into_iter().collect()))
        .collect::<Result<_>>()?;
    let first = &rows[0];
    let mut nu: Vec<(usize, f64)> = Vec::new();
    for (&j, &p0) in first {
        let mut lo = p0;
        for r in &rows[1..] {
            match r.get(&j) {
                Some(&p) => lo = lo.min(p),
                None => {
                    lo = 0.0;
                    break;
                }
            }
        }
        if lo > 0.0 {
            nu.push((j, lo));
        }
    }
    let nu_mass: f64 = nu.iter().map(|&(_, p)| p).sum();
    if !(nu_mass > 0.0) {
        return Err(VgeomError::invalid(
            "rows of S have disjoint supports: minorization mass is zero",
        ));
    }
    let nu_v: f64 = nu
        .iter()
        .map(|&(j, p)| p * weight.eval_idx(j))
        .sum();

    let h = apply_ratio(kernel, weight, &vec![1.0; m + 1])?;
    let varrho = match rho_override {
        Some(r) => r,
        None => {
            let mut worst = 0.0f64;
            for (i, &r) in h.iter().enumerate() {
                if !s_sorted.contains(&i) && r > worst {
                    worst = r;
                }
            }
            worst
        }
    };
    if varrho >= 1.0 - 1e-12 {
        return Err(VgeomError::InvariantViolated(format!(
            "one-step drift fails outside S: varrho = {varrho} >= 1; \
             enlarge S or change the weight"
        )));
    }
    let mut m_drift = 0.0f64;
    for &i in &s_sorted {
        if i >= h.len() {
            return Err(VgeomError::TruncationTooSmall {
                detail: format!("small-set state {i} beyond computable prefix"),
                required: i + kernel.up_reach,
            });
        }
        let v = weight.eval_idx(i);
        let excess = (h[i] - varrho) * v;
        if excess > m_drift {
            m_drift = excess;
        }
    }
    let bound = bound_from_parts(varrho, m_drift, nu_mass, nu_v)?;
    let tau = (m_drift - nu_v).max(0.0);
    Ok(MinorizationCertificate {
        s: s_sorted,
        nu,
        nu_mass,
        nu_v,
        varrho,
        m_drift,
        tau,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        birth_death_const, homogeneous_rw_clipped, poisson_mh_kernel, unbounded_rw_geometric,
    };

    fn law(entries: &[(i32, f64)]) -> Increments {
        entries.iter().copied().collect()
    }

    #[test]
    fn phi_matches_hand_values() {
        let l = law(&[(-1, 0.5), (0, 0.3), (1, 0.2)]);
        assert!((phi(&l, 1.0).unwrap() - 1.0).abs() < 1e-15);
        // phi(2) = 0.5/2 + 0.3 + 0.2*2 = 0.95
        assert!((phi(&l, 2.0).unwrap() - 0.95).abs() < 1e-15);
        assert!(phi(&l, 0.0).is_err());
        assert!(phi(&law(&[(1, 0.5)]), 2.0).is_err());
    }

    #[test]
    fn minimize_phi_oracle() {
        // Minimizer of 0.5/g + 0.3 + 0.2 g is g = sqrt(0.5/0.2) = sqrt(2.5),
        // with value 0.3 + 2 sqrt(0.1).
        let l = law(&[(-1, 0.5), (0, 0.3), (1, 0.2)]);
        let (g, v) = minimize_phi(&l, 4.0).unwrap();
        assert!((g - 2.5f64.sqrt()).abs() < 1e-6, "gamma {g}");
        assert!((v - 0.9324555320336759).abs() < 1e-9, "value {v}");
        // Gradient vanishes at the reported minimizer.
        let dv = phi_derivative(&l, g, 1).unwrap();
        assert!(dv.abs() < 1e-8, "phi'({g}) = {dv}");
    }

    #[test]
    fn minimize_phi_boundary_case() {
        // Nonnegative drift: minimum sits at gamma -> 1+ with phi -> 1.
        let l = law(&[(-1, 0.2), (1, 0.8)]);
        let (g, v) = minimize_phi(&l, 8.0).unwrap();
        assert!(g < 1.0 + 1e-8, "gamma {g}");
        assert!(v >= 1.0 - 1e-9, "value {v}");
    }

    #[test]
    fn wd_feasibility_signs() {
        // Negative drift: phi'(1) = -0.3 < 0 at order 1.
        let l = law(&[(-1, 0.5), (0, 0.3), (1, 0.2)]);
        assert_eq!(wd_feasibility_test(&l).unwrap(), (1, -1));
        // Positive drift.
        let l = law(&[(-1, 0.2), (1, 0.8)]);
        assert_eq!(wd_feasibility_test(&l).unwrap(), (1, 1));
        // Symmetric: phi'(1) = 0, phi''(1) = 1 > 0 at order 2.
        let l = law(&[(-1, 0.5), (1, 0.5)]);
        assert_eq!(wd_feasibility_test(&l).unwrap(), (2, 1));
        // Degenerate stay-put law.
        let l = law(&[(0, 1.0)]);
        assert!(wd_feasibility_test(&l).is_err());
    }

    #[test]
    fn iterated_weight_on_birth_death() {
        // One step of the homogeneous (p,r,q) chain at gamma: interior ratio
        // is p/gamma + r + q gamma = phi(gamma).
        let k = birth_death_const(0.5, 0.3, 0.2, 0.1).unwrap();
        let g = 2.5f64.sqrt();
        let w = WeightFn::geometric(g).unwrap();
        let pv = iterated_weight(&k, &w, 1, 50).unwrap();
        let expected = 0.5 / g + 0.3 + 0.2 * g;
        for i in 1..=49 {
            let ratio = pv.values[i] / w.eval_idx(i);
            assert!((ratio - expected).abs() < 1e-12, "state {i}: {ratio}");
        }
        // Boundary row: a + (1-a) gamma.
        let r0 = pv.values[0];
        assert!((r0 - (0.1 + 0.9 * g)).abs() < 1e-12);
        assert!(iterated_weight(&k, &w, 60, 50).is_err());
    }

    #[test]
    fn ell_sweep_on_poisson_mh() {
        // (PV)(n)/V(n) with gamma = 2 equals 1/4 + n/(2(n+1)) + 1/(n+1),
        // which is 35/44 at n = 10 and decreases to 3/4.
        let k = poisson_mh_kernel();
        let w = WeightFn::geometric(2.0).unwrap();
        let pv = iterated_weight(&k, &w, 1, 200).unwrap();
        let r10 = pv.values[10] / w.eval_idx(10);
        assert!((r10 - 35.0 / 44.0).abs() < 1e-13, "ratio {r10}");

        let rep = ell_and_l(&k, &w, 8, 4000, 2000).unwrap();
        assert!((rep.l - 0.75).abs() < 1e-3, "L = {}", rep.l);
        assert!(rep.wd_feasible);
        assert!(rep.d_constant >= 0.0);
    }

    #[test]
    fn ell_equals_phi_on_homogeneous_walk() {
        let l = law(&[(-2, 0.3), (-1, 0.3), (0, 0.2), (1, 0.15), (2, 0.05)]);
        let k = homogeneous_rw_clipped(2, &l).unwrap();
        let (g, _) = minimize_phi(&l, 6.0).unwrap();
        let w = WeightFn::geometric(g).unwrap();
        let p1 = phi(&l, g).unwrap();
        let rep = ell_and_l(&k, &w, 10, 400, 60).unwrap();
        for n in 1..=10usize {
            let root = rep.ell[&n].powf(1.0 / n as f64);
            assert!((root - p1).abs() < 1e-10, "N = {n}: {root} vs {p1}");
        }
        assert!((rep.l - p1).abs() < 1e-10);
    }

    #[test]
    fn unbounded_rw_ratio_profile() {
        // (PV)(n)/V(n) = p/gamma^n + q gamma for the reset walk.
        let k = unbounded_rw_geometric(0.4, 0.5).unwrap();
        let w = WeightFn::geometric(1.5).unwrap();
        let pv = iterated_weight(&k, &w, 1, 120).unwrap();
        for n in [1usize, 3, 10, 40] {
            let expect = 0.4 / 1.5f64.powi(n as i32) + 0.6 * 1.5;
            let got = pv.values[n] / w.eval_idx(n);
            assert!((got - expect).abs() < 1e-12, "state {n}");
        }
    }

    #[test]
    fn minorization_certificate_on_birth_death() {
        let k = birth_death_const(0.5, 0.3, 0.2, 0.1).unwrap();
        let g = 2.5f64.sqrt();
        let w = WeightFn::geometric(g).unwrap();
        let cert = extract_minorization(&k, &[0, 1], &w, 200, None).unwrap();
        // Rows 0 and 1 overlap at states 0 and 1:
        // min(P(0,0), P(1,0)) = min(0.1, 0.5) = 0.1,
        // min(P(0,1), P(1,1)) = min(0.9, 0.3) = 0.3.
        assert_eq!(cert.nu.len(), 2);
        assert!((cert.nu_mass - 0.4).abs() < 1e-12);
        let expected_rho = 0.5 / g + 0.3 + 0.2 * g;
        assert!((cert.varrho - expected_rho).abs() < 1e-12);
        assert!(cert.bound > cert.varrho && cert.bound < 1.0);
        let again = theorem21_bound(&cert, cert.nu_mass, cert.nu_v).unwrap();
        assert!((again - cert.bound).abs() < 1e-15);
    }

    #[test]
    fn minorization_rejects_failing_drift() {
        // Symmetric walk: no geometric weight contracts, varrho >= 1.
        let k = birth_death_const(0.5, 0.0, 0.5, 0.5).unwrap();
        let w = WeightFn::geometric(1.3).unwrap();
        let err = extract_minorization(&k, &[0], &w, 100, None);
        assert!(matches!(err, Err(VgeomError::InvariantViolated(_))));
    }

    #[test]
    fn theorem21_bound_formula() {
        // varrho = 0.8, nu_mass = 0.5, M_drift = 2, nu(V) = 1:
        // tau = 1, bound = (0.4 + 1) / (0.5 + 1) = 14/15.
        let cert = MinorizationCertificate {
            s: vec![0],
            nu: vec![(0, 0.5)],
            nu_mass: 0.5,
            nu_v: 1.0,
            varrho: 0.8,
            m_drift: 2.0,
            tau: 1.0,
            bound: 0.0,
        };
        let b = theorem21_bound(&cert, 0.5, 1.0).unwrap();
        assert!((b - 14.0 / 15.0).abs() < 1e-15);
        // tau = 0 collapses to varrho.
        let b0 = theorem21_bound(&cert, 0.5, 5.0).unwrap();
        assert!((b0 - 0.8).abs() < 1e-15);
    }
}
