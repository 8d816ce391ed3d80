//! Closed-form convergence rates for the catalog chains.

use serde::{Deserialize, Serialize};

use crate::error::{Result, VgeomError};

/// Which branch of the birth-death rate formula applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    /// `a >= a0`: the rate is the essential radius.
    A0Branch,
    /// `a < a0` but the step law is too lazy to support an isolated
    /// eigenvalue anywhere below `a0`.
    CaseA,
    /// `a <= a1 < a0`: an isolated real eigenvalue `lambda(a)` rules.
    #[serde(rename = "CaseB_Lambda")]
    CaseBLambda,
    /// `a1 < a < a0`: the candidate eigenvalue leaves the weighted space and
    /// the essential radius rules again.
    #[serde(rename = "CaseB_Essential")]
    CaseBEssential,
    /// `a = 1 - q`: boundary row is an exact extension of the interior law;
    /// the rate equals the essential radius with no isolated eigenvalue at
    /// the band edge.
    SpecialAEquals1MinusQ,
}

/// Full rate diagnosis of a homogeneous birth-death chain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BirthDeathRate {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub a: f64,
    /// Supremum of usable geometric weight scales, `sqrt(p/q)`.
    pub gamma_hat: f64,
    /// Branch threshold `1 - q - sqrt(pq)`.
    pub a0: f64,
    /// Inner threshold `p - sqrt(pq) - sqrt(r(r + 2 sqrt(pq)))`, present
    /// only when the step law can support an isolated eigenvalue.
    pub a1: Option<f64>,
    pub case_label: CaseLabel,
    /// Isolated eigenvalue `a + p(1-a)/(a-1+q)` on the lambda branch.
    pub lambda_a: Option<f64>,
    /// Geometric ratio `p/(a-1+q)` of its eigenfunction.
    pub z_a: Option<f64>,
    /// The optimal weighted convergence rate.
    pub rho: f64,
}

/// Rate of the birth-death chain with interior law `(p, r, q)`
/// (down, stay, up) and boundary `P(0,0) = a`, `P(0,1) = 1 - a`.
pub fn birth_death_rate(p: f64, q: f64, r: f64, a: f64) -> Result<BirthDeathRate> {
    if !(p > q && q > 0.0) {
        return Err(VgeomError::invalid(format!(
            "need p > q > 0, got p = {p}, q = {q}"
        )));
    }
    if r < 0.0 || (p + q + r - 1.0).abs() > 1e-12 {
        return Err(VgeomError::invalid(format!(
            "need p + q + r = 1 with r >= 0, got r = {r}, sum = {}",
            p + q + r
        )));
    }
    if !(0.0 < a && a < 1.0) {
        return Err(VgeomError::invalid(format!("a = {a} outside (0,1)")));
    }
    let spq = (p * q).sqrt();
    let gamma_hat = (p / q).sqrt();
    let ess = r + 2.0 * spq;
    let a0 = 1.0 - q - spq;
    let base = |case_label, a1, lambda_a, z_a, rho| BirthDeathRate {
        p,
        q,
        r,
        a,
        gamma_hat,
        a0,
        a1,
        case_label,
        lambda_a,
        z_a,
        rho,
    };

    if (a - (1.0 - q)).abs() < 1e-14 {
        return Ok(base(CaseLabel::SpecialAEquals1MinusQ, None, None, None, ess));
    }
    if a >= a0 {
        return Ok(base(CaseLabel::A0Branch, None, None, None, ess));
    }
    // a < a0 from here on.
    let lazy_edge = 1.0 - q + spq;
    if 2.0 * p <= lazy_edge * lazy_edge {
        return Ok(base(CaseLabel::CaseA, None, None, None, ess));
    }
    let a1 = p - spq - (r * ess).sqrt();
    if a <= a1 {
        let denom = a - 1.0 + q;
        let lambda = a + p * (1.0 - a) / denom;
        let z = p / denom;
        let rho = lambda.abs();
        if !(rho < 1.0) || rho + 1e-12 < ess {
            return Err(VgeomError::InvariantViolated(format!(
                "isolated eigenvalue {lambda} outside (essential radius, 1) = ({ess}, 1)"
            )));
        }
        if z.abs() > gamma_hat * (1.0 + 1e-12) {
            return Err(VgeomError::InvariantViolated(format!(
                "eigenfunction ratio |z| = {} exceeds gamma_hat = {gamma_hat}",
                z.abs()
            )));
        }
        return Ok(base(
            CaseLabel::CaseBLambda,
            Some(a1),
            Some(lambda),
            Some(z),
            rho,
        ));
    }
    Ok(base(CaseLabel::CaseBEssential, Some(a1), None, None, ess))
}

/// Rate of the pure birth-death chain without laziness (`r = 0`), via the
/// specialized two-branch formula.
pub fn birth_death_rate_r_zero(p: f64, a: f64) -> Result<f64> {
    if !(0.5 < p && p < 1.0) {
        return Err(VgeomError::invalid(format!("p = {p} outside (0.5, 1)")));
    }
    if !(0.0 < a && a < 1.0) {
        return Err(VgeomError::invalid(format!("a = {a} outside (0,1)")));
    }
    if (a - p).abs() < 1e-14 {
        return Err(VgeomError::invalid(
            "a = p: the eigenvalue formula degenerates (zero denominator)",
        ));
    }
    let q = 1.0 - p;
    let pq = p * q;
    let a0 = p - pq.sqrt();
    if a <= a0 {
        Ok((pq + (a - p) * (a - p)) / (a - p).abs())
    } else {
        Ok(2.0 * pq.sqrt())
    }
}

/// Rate and weight-scale ceiling of the uniformized single-server queue:
/// `rho = 1 - h (sqrt(mu) - sqrt(beta))^2`, `gamma_hat = sqrt(mu / beta)`.
pub fn mm1_rate(beta: f64, mu: f64, h: f64) -> Result<(f64, f64)> {
    if !(beta > 0.0 && mu > beta) {
        return Err(VgeomError::invalid(format!(
            "need 0 < beta < mu, got beta = {beta}, mu = {mu}"
        )));
    }
    if !(h > 0.0 && h < 1.0 / (beta + mu)) {
        return Err(VgeomError::invalid(format!(
            "need 0 < h < 1/(beta+mu) = {}",
            1.0 / (beta + mu)
        )));
    }
    let d = mu.sqrt() - beta.sqrt();
    Ok((1.0 - h * d * d, (mu / beta).sqrt()))
}

/// Upper bound `max(q gamma, p)` on the rate of the reset walk at geometric
/// weight scale `gamma` in `(1, 1/q)`.
pub fn unbounded_rw_rate_bound(p: f64, gamma: f64) -> Result<f64> {
    if !(0.0 < p && p < 1.0) {
        return Err(VgeomError::invalid(format!("p = {p} outside (0,1)")));
    }
    let q = 1.0 - p;
    if !(gamma > 1.0 && gamma < 1.0 / q) {
        return Err(VgeomError::invalid(format!(
            "gamma = {gamma} outside (1, 1/q) = (1, {})",
            1.0 / q
        )));
    }
    Ok((q * gamma).max(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_branch_oracle() {
        let r = birth_death_rate(0.75, 0.2, 0.05, 0.1).unwrap();
        assert_eq!(r.case_label, CaseLabel::CaseBLambda);
        assert!((r.rho - 0.8642857142857143).abs() < 1e-15, "rho {}", r.rho);
        assert!((r.lambda_a.unwrap() + 0.8642857142857143).abs() < 1e-15);
        assert!((r.z_a.unwrap() + 0.75 / 0.7).abs() < 1e-15);
        assert!((r.a0 - 0.4127016653792583).abs() < 1e-13);
        assert!((r.a1.unwrap() - 0.159650357788707).abs() < 1e-13);
        assert!((r.gamma_hat - 3.75f64.sqrt()).abs() < 1e-15);
        // The isolated eigenvalue beats the essential radius.
        assert!(r.rho > 0.05 + 2.0 * 0.15f64.sqrt());
    }

    #[test]
    fn essential_branch_between_thresholds() {
        let r = birth_death_rate(0.75, 0.2, 0.05, 0.3).unwrap();
        assert_eq!(r.case_label, CaseLabel::CaseBEssential);
        assert!((r.rho - 0.8245966692414834).abs() < 1e-15, "rho {}", r.rho);
        assert!(r.lambda_a.is_none());
    }

    #[test]
    fn a0_branch_and_special_case() {
        let r = birth_death_rate(0.6, 0.2, 0.2, 0.6).unwrap();
        assert_eq!(r.case_label, CaseLabel::A0Branch);
        assert!((r.rho - 0.8928203230275509).abs() < 1e-15);

        let s = birth_death_rate(0.6, 0.2, 0.2, 0.8).unwrap();
        assert_eq!(s.case_label, CaseLabel::SpecialAEquals1MinusQ);
        assert!((s.rho - r.rho).abs() < 1e-15);
    }

    #[test]
    fn r_zero_branches_and_agreement() {
        assert!((birth_death_rate_r_zero(0.7, 0.1).unwrap() - 0.95).abs() < 1e-15);
        assert!(
            (birth_death_rate_r_zero(0.7, 0.5).unwrap() - 0.9165151389911680).abs() < 1e-15
        );
        for a in [0.05, 0.1, 0.2, 0.24, 0.3, 0.5, 0.9] {
            let direct = birth_death_rate_r_zero(0.7, a).unwrap();
            let general = birth_death_rate(0.7, 0.3, 0.0, a).unwrap();
            assert!(
                (direct - general.rho).abs() < 1e-12,
                "a = {a}: {direct} vs {}",
                general.rho
            );
        }
        assert!(birth_death_rate_r_zero(0.7, 0.7).is_err());
        assert!(birth_death_rate_r_zero(0.4, 0.1).is_err());
    }

    #[test]
    fn mm1_oracle() {
        let (rho, gh) = mm1_rate(1.0, 4.0, 0.1).unwrap();
        assert!((rho - 0.9).abs() < 1e-15);
        assert!((gh - 2.0).abs() < 1e-15);
        // h -> 1/(beta+mu) pushes the rate to 2 sqrt(mu beta) / (mu + beta).
        let (rho_lim, _) = mm1_rate(1.0, 4.0, 0.2 - 1e-12).unwrap();
        assert!((rho_lim - 0.8).abs() < 1e-10);
        assert!(mm1_rate(4.0, 1.0, 0.1).is_err());
        assert!(mm1_rate(1.0, 4.0, 0.25).is_err());
    }

    #[test]
    fn reset_walk_bound() {
        assert!((unbounded_rw_rate_bound(0.4, 1.5).unwrap() - 0.9).abs() < 1e-15);
        // Small gamma: the reset mass p dominates.
        assert!((unbounded_rw_rate_bound(0.9, 1.05).unwrap() - 0.9).abs() < 1e-15);
        assert!(unbounded_rw_rate_bound(0.4, 1.7).is_err());
        assert!(unbounded_rw_rate_bound(0.4, 1.0).is_err());
    }

    #[test]
    fn domain_checks() {
        assert!(birth_death_rate(0.2, 0.75, 0.05, 0.1).is_err());
        assert!(birth_death_rate(0.75, 0.2, 0.06, 0.1).is_err());
        assert!(birth_death_rate(0.75, 0.2, 0.05, 0.0).is_err());
        assert!(birth_death_rate(0.75, 0.2, 0.05, 1.0).is_err());
    }
}
