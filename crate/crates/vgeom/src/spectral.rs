//! Dense truncations of the similarity-transformed kernel and their
//! spectra: full eigenvalue sweeps, annulus classification against a known
//! essential radius, eigenvector extraction, and growth checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::catalog::{Kernel, StateSpace};
use crate::error::{Result, VgeomError};
use crate::weights::WeightFn;

/// What to do with transition mass escaping past the truncation level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationPolicy {
    /// Drop the escaping mass; rows may sum to less than 1.
    Substochastic,
    /// Pool the escaping mass into the last kept column, keeping rows
    /// stochastic.
    ReflectLast,
}

/// A finite section of the weighted-similarity transform
/// `T(i, j) = P(i, j) V(j) / V(i)` on states `0..=M`.
pub struct TruncatedOperator {
    pub matrix: DMatrix<f64>,
    pub weight: WeightFn,
    pub policy: TruncationPolicy,
    pub m: usize,
    /// State coordinates backing the rows (integers, or grid points).
    pub coords: Vec<f64>,
}

impl TruncatedOperator {
    /// `ln V` at row `i`.
    pub fn log_weight(&self, i: usize) -> f64 {
        self.weight.log_eval(self.coords[i])
    }

    /// Map an eigenvector of the transformed section back to original
    /// coordinates: `f(i) = g(i) V(i)`.
    pub fn raw_eigenvector(&self, g: &[Complex64]) -> Result<Vec<Complex64>> {
        g.iter()
            .enumerate()
            .map(|(i, &z)| {
                let lv = self.log_weight(i);
                if z.norm() > 0.0 && z.norm().ln() + lv > 700.0 {
                    return Err(VgeomError::invalid(format!(
                        "raw eigenvector overflows at state {i}"
                    )));
                }
                Ok(z * lv.exp())
            })
            .collect()
    }
}

/// Raw truncated rows on `0..=m` with the policy applied (no weighting).
pub fn truncated_rows(
    kernel: &Kernel,
    m: usize,
    policy: TruncationPolicy,
) -> Result<Vec<Vec<(usize, f64)>>> {
    if let Some(n) = kernel.n_states() {
        if m >= n {
            return Err(VgeomError::invalid(format!(
                "truncation level {m} beyond grid size {n}"
            )));
        }
    }
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let full = kernel.row_checked(i)?;
        let mut kept: Vec<(usize, f64)> = Vec::with_capacity(full.len());
        let mut escape = 0.0;
        for (j, p) in full {
            if j <= m {
                kept.push((j, p));
            } else {
                escape += p;
            }
        }
        if escape > 0.0 && policy == TruncationPolicy::ReflectLast {
            match kept.iter_mut().find(|e| e.0 == m) {
                Some(e) => e.1 += escape,
                None => kept.push((m, escape)),
            }
        }
        out.push(kept);
    }
    Ok(out)
}

/// Build the weighted finite section. The policy is applied to the raw
/// kernel first; the similarity transform comes after, so `ReflectLast`
/// keeps the transformed rows exactly similar to a stochastic matrix.
pub fn build_truncation(
    kernel: &Kernel,
    weight: &WeightFn,
    m: usize,
    policy: TruncationPolicy,
) -> Result<TruncatedOperator> {
    if m < 8 {
        return Err(VgeomError::invalid(format!(
            "truncation level {m} too small; need M >= 8"
        )));
    }
    let coords: Vec<f64> = match &kernel.state_space {
        StateSpace::CountableDiscrete => (0..=m).map(|i| i as f64).collect(),
        StateSpace::Grid1D { points, .. } => {
            if m >= points.len() {
                return Err(VgeomError::invalid(format!(
                    "truncation level {m} beyond grid size {}",
                    points.len()
                )));
            }
            points[..=m].to_vec()
        }
    };
    let rows = truncated_rows(kernel, m, policy)?;
    let log_v: Vec<f64> = coords.iter().map(|&x| weight.log_eval(x)).collect();
    let mut matrix = DMatrix::<f64>::zeros(m + 1, m + 1);
    for (i, row) in rows.iter().enumerate() {
        for &(j, p) in row {
            matrix[(i, j)] = p * (log_v[j] - log_v[i]).exp();
        }
    }
    Ok(TruncatedOperator {
        matrix,
        weight: weight.clone(),
        policy,
        m,
        coords,
    })
}

/// All eigenvalues of the section, sorted by decreasing modulus (ties by
/// decreasing real then imaginary part).
pub fn full_spectrum(op: &TruncatedOperator) -> Result<Vec<Complex64>> {
    spectrum_of(&op.matrix)
}

pub(crate) fn spectrum_of(matrix: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = matrix.nrows();
    if n > 3001 {
        return Err(VgeomError::invalid(format!(
            "dense eigenvalue sweep capped at M <= 3000, got {}",
            n - 1
        )));
    }
    let max_iter = 30 * n;
    let schur = nalgebra::linalg::Schur::try_new(matrix.clone(), f64::EPSILON, max_iter)
        .ok_or_else(|| {
            VgeomError::NoConvergence(format!(
                "Schur sweep did not converge within {max_iter} iterations"
            ))
        })?;
    let mut eigs: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    eigs.sort_by(|x, y| {
        y.norm()
            .total_cmp(&x.norm())
            .then(y.re.total_cmp(&x.re))
            .then(y.im.total_cmp(&x.im))
    });
    Ok(eigs)
}

/// Classification of a spectrum against a known essential radius `r0`.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub r0: f64,
    /// Eigenvalues in the annulus `r0 <= |lambda| < 1 - tol`.
    pub peripheral: Vec<Complex64>,
    /// Eigenvalues with `||lambda| - 1| < tol`.
    pub unit_eigs: Vec<Complex64>,
    /// Largest peripheral modulus, or `r0` when the annulus is empty.
    pub rho_estimate: f64,
    /// Exactly one unit-modulus eigenvalue, and it is 1.
    pub simple_one: bool,
    /// No eigenvalue near 1 was found; the truncation is suspect.
    pub unit_missing: bool,
}

/// Classify eigenvalues into unit, peripheral, and bulk parts.
pub fn rate_from_spectrum(eigenvalues: &[Complex64], r0: f64, tol: f64) -> Result<SpectrumReport> {
    if !(0.0 < r0 && r0 < 1.0) {
        return Err(VgeomError::invalid(format!("r0 = {r0} outside (0,1)")));
    }
    if !(tol > 0.0 && tol < 0.5) {
        return Err(VgeomError::invalid(format!("tol = {tol} outside (0, 0.5)")));
    }
    let mut unit_eigs = Vec::new();
    let mut peripheral = Vec::new();
    for &z in eigenvalues {
        let m = z.norm();
        if (m - 1.0).abs() < tol {
            unit_eigs.push(z);
        } else if m >= r0 && m < 1.0 - tol {
            peripheral.push(z);
        }
    }
    let rho_estimate = peripheral
        .iter()
        .map(|z| z.norm())
        .fold(r0, f64::max);
    let simple_one = unit_eigs.len() == 1 && (unit_eigs[0] - Complex64::new(1.0, 0.0)).norm() < tol;
    let unit_missing = unit_eigs.is_empty();
    Ok(SpectrumReport {
        eigenvalues: eigenvalues.to_vec(),
        r0,
        peripheral,
        unit_eigs,
        rho_estimate,
        simple_one,
        unit_missing,
    })
}

/// Eigenpair of the section nearest `target`, by shifted inverse iteration.
/// Returns `(refined_eigenvalue, eigenvector, residual)`; the residual
/// `|T g - lambda g|_2 / |g|_2` is required to be at most `1e-8`.
pub fn eigenpair_for(
    op: &TruncatedOperator,
    target: Complex64,
) -> Result<(Complex64, Vec<Complex64>, f64)> {
    let n = op.matrix.nrows();
    let a: DMatrix<Complex64> = op.matrix.map(|x| Complex64::new(x, 0.0));
    // Offset the shift so the factorization never hits the eigenvalue
    // exactly; the imaginary nudge keeps complex-pair targets resolvable.
    let shift = target + Complex64::new(1e-10 * (1.0 + target.norm()), 1e-10);
    let mut shifted = a.clone();
    for i in 0..n {
        shifted[(i, i)] -= shift;
    }
    let lu = shifted.lu();
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 / (1.0 + 0.137 * i as f64), 0.0));
    v /= Complex64::new(v.norm(), 0.0);
    let mut lambda = target;
    let mut residual = f64::INFINITY;
    for _ in 0..200 {
        let w = lu.solve(&v).ok_or_else(|| {
            VgeomError::NoConvergence("shifted system is singular".into())
        })?;
        let norm = w.norm();
        if !(norm > 0.0) {
            return Err(VgeomError::NoConvergence(
                "inverse iteration collapsed to zero".into(),
            ));
        }
        let w = w / Complex64::new(norm, 0.0);
        let aw = &a * &w;
        lambda = (w.adjoint() * &aw)[(0, 0)];
        residual = (&aw - &w * lambda).norm();
        v = w;
        if residual <= 1e-12 {
            break;
        }
    }
    if residual > 1e-8 {
        return Err(VgeomError::NoConvergence(format!(
            "inverse iteration residual {residual} above 1e-8"
        )));
    }
    Ok((lambda, v.iter().copied().collect(), residual))
}

/// Verdict on whether an eigenfunction respects the growth ceiling
/// `|f| <= const * V^beta` with `beta = ln|lambda| / ln(delta)`.
#[derive(Clone, Debug)]
pub struct EigenpairGrowth {
    pub lambda: Complex64,
    pub beta: f64,
    /// Head constant `max_{i <= i_lo} |f(i)| / V(i)^beta`.
    pub c: f64,
    /// `(i, |f(i)| / V(i)^beta)` over the checked window.
    pub ratio_profile: Vec<(usize, f64)>,
    pub verdict: bool,
}

const GROWTH_SLACK: f64 = 1.05;

/// Check the growth ceiling for a raw-space eigenfunction `f` against the
/// section's weight. `window = (i_lo, i_hi)`: the constant is fitted on
/// `0..=i_lo` and the ceiling verified on `(i_lo, i_hi]`, which must stay
/// inside three quarters of the section to dodge truncation-edge artifacts.
pub fn eigen_growth_check(
    op: &TruncatedOperator,
    lambda: Complex64,
    f: &[Complex64],
    delta: f64,
    window: (usize, usize),
) -> Result<EigenpairGrowth> {
    let (i_lo, i_hi) = window;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(VgeomError::invalid(format!("delta = {delta} outside (0,1)")));
    }
    let lam_mod = lambda.norm();
    if lam_mod < delta {
        return Err(VgeomError::invalid(format!(
            "|lambda| = {lam_mod} below delta = {delta}: the growth exponent is undefined"
        )));
    }
    if lam_mod > 1.0 + 1e-9 {
        return Err(VgeomError::invalid(format!("|lambda| = {lam_mod} above 1")));
    }
    if f.len() != op.m + 1 {
        return Err(VgeomError::invalid(format!(
            "eigenvector length {} does not match section size {}",
            f.len(),
            op.m + 1
        )));
    }
    if i_lo >= i_hi || i_hi > (3 * op.m) / 4 {
        return Err(VgeomError::invalid(format!(
            "window ({i_lo}, {i_hi}] must be nonempty and end by 3M/4 = {}",
            (3 * op.m) / 4
        )));
    }
    let beta = lam_mod.ln() / delta.ln();
    let log_ratio = |i: usize| -> f64 {
        let a = f[i].norm();
        if a == 0.0 {
            f64::NEG_INFINITY
        } else {
            a.ln() - beta * op.log_weight(i)
        }
    };
    let mut log_c = f64::NEG_INFINITY;
    for i in 0..=i_lo {
        log_c = log_c.max(log_ratio(i));
    }
    if log_c == f64::NEG_INFINITY {
        return Err(VgeomError::invalid(
            "eigenvector vanishes on the head window",
        ));
    }
    let ceiling = log_c + GROWTH_SLACK.ln();
    let mut verdict = true;
    let mut ratio_profile = Vec::with_capacity(i_hi + 1);
    for i in 0..=i_hi {
        ratio_profile.push((i, log_ratio(i).exp()));
        if i > i_lo && log_ratio(i) > ceiling {
            verdict = false;
        }
    }
    Ok(EigenpairGrowth {
        lambda,
        beta,
        c: log_c.exp(),
        ratio_profile,
        verdict,
    })
}

/// One row of a truncation-convergence study.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub m: usize,
    pub rho_estimate: f64,
    /// Distance of the nearest eigenvalue to 1.
    pub unit_gap: f64,
}

/// Sweep truncation levels and report the classified rate at each.
pub fn truncation_convergence(
    kernel: &Kernel,
    weight: &WeightFn,
    policy: TruncationPolicy,
    m_list: &[usize],
    r0: f64,
) -> Result<Vec<ConvergenceRow>> {
    let mut out = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let op = build_truncation(kernel, weight, m, policy)?;
        let eigs = full_spectrum(&op)?;
        let report = rate_from_spectrum(&eigs, r0, 1e-6)?;
        let unit_gap = eigs
            .iter()
            .map(|z| (z - Complex64::new(1.0, 0.0)).norm())
            .fold(f64::INFINITY, f64::min);
        out.push(ConvergenceRow {
            m,
            rho_estimate: report.rho_estimate,
            unit_gap,
        });
    }
    Ok(out)
}
