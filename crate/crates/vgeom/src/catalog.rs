//! Model catalog: transition kernels on countable state spaces or 1-D
//! quadrature grids, plus iterated-function-system descriptions of the
//! random-dynamics models.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::drift::minimize_phi;
use crate::error::{Result, VgeomError};

/// Increment law of a random walk, as a finitely supported signed map.
pub type Increments = BTreeMap<i32, f64>;

const ROW_TOL: f64 = 1e-12;
/// Rows validated eagerly at construction for closure-backed kernels.
const EAGER_ROWS: usize = 512;
/// Cap on explicit support when an unbounded boundary law is tail-truncated.
const TAIL_CAP: usize = 100_000;
const TAIL_KEEP: f64 = 1.0 - 1e-14;

/// The state space a kernel acts on.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpace {
    /// States `0, 1, 2, ...`; rows are sparse probability laws.
    CountableDiscrete,
    /// A 1-D quadrature grid; rows are dense mass vectors over the points.
    Grid1D { points: Vec<f64>, weights: Vec<f64> },
}

enum RowSource {
    Sparse(Arc<dyn Fn(usize) -> Vec<(usize, f64)> + Send + Sync>),
    Dense(Vec<Vec<f64>>),
}

/// A Markov transition kernel.
///
/// Sparse countable kernels are backed by a row closure; grid kernels store
/// their dense row-stochastic matrix. `support_radius` is the maximal
/// `|j - i|` over rows beyond the boundary block (`None` when unbounded).
/// `up_reach` and `boundary_cols` drive the exact-prefix accounting used by
/// the drift and decay routines: applying the kernel to a function known on
/// `0..=m` yields exact values on `0..=m - up_reach`, provided
/// `m >= boundary_cols`.
pub struct Kernel {
    pub label: String,
    pub state_space: StateSpace,
    source: RowSource,
    pub support_radius: Option<usize>,
    pub boundary_rows: usize,
    pub up_reach: usize,
    pub boundary_cols: usize,
}

impl Kernel {
    /// Row `i` as sparse `(state, probability)` pairs, zero entries dropped.
    pub fn row(&self, i: usize) -> Vec<(usize, f64)> {
        match &self.source {
            RowSource::Sparse(f) => f(i),
            RowSource::Dense(rows) => rows[i]
                .iter()
                .enumerate()
                .filter(|(_, &p)| p != 0.0)
                .map(|(j, &p)| (j, p))
                .collect(),
        }
    }

    /// Number of states for grid kernels; `None` on countable spaces.
    pub fn n_states(&self) -> Option<usize> {
        match &self.state_space {
            StateSpace::CountableDiscrete => None,
            StateSpace::Grid1D { points, .. } => Some(points.len()),
        }
    }

    /// Dense grid matrix, when the kernel is grid-backed.
    pub fn dense_rows(&self) -> Option<&Vec<Vec<f64>>> {
        match &self.source {
            RowSource::Dense(rows) => Some(rows),
            RowSource::Sparse(_) => None,
        }
    }

    /// Validated rows `0..=m`: entries in `[0, 1]`, sums within `1e-12` of 1.
    pub fn rows_up_to(&self, m: usize) -> Result<Vec<Vec<(usize, f64)>>> {
        (0..=m).map(|i| self.row_checked(i)).collect()
    }

    pub fn row_checked(&self, i: usize) -> Result<Vec<(usize, f64)>> {
        let row = self.row(i);
        validate_row(i, &row)?;
        Ok(row)
    }
}

fn validate_row(i: usize, row: &[(usize, f64)]) -> Result<()> {
    let mut sum = 0.0;
    for &(j, p) in row {
        if !(0.0..=1.0 + ROW_TOL).contains(&p) || !p.is_finite() {
            return Err(VgeomError::BadRow {
                index: i,
                detail: format!("entry ({i},{j}) = {p} outside [0,1]"),
            });
        }
        sum += p;
    }
    if (sum - 1.0).abs() > ROW_TOL {
        return Err(VgeomError::BadRow {
            index: i,
            detail: format!("row sum {sum} differs from 1 by more than {ROW_TOL}"),
        });
    }
    Ok(())
}

fn validate_eager(kernel: &Kernel, rows: usize) -> Result<()> {
    for i in 0..rows {
        kernel.row_checked(i)?;
    }
    Ok(())
}

/// Birth-death kernel with state-dependent step laws
/// `P(i, i-1) = p(i)`, `P(i, i) = r(i)`, `P(i, i+1) = q(i)` for `i >= 1`
/// and an explicit boundary row at the origin.
pub fn make_birth_death(
    p_fn: impl Fn(usize) -> f64 + Send + Sync + 'static,
    r_fn: impl Fn(usize) -> f64 + Send + Sync + 'static,
    q_fn: impl Fn(usize) -> f64 + Send + Sync + 'static,
    boundary_row: Vec<(usize, f64)>,
) -> Result<Kernel> {
    validate_row(0, &boundary_row)?;
    let boundary_cols = boundary_row.iter().map(|&(j, _)| j).max().unwrap_or(0);
    let row_fn = move |i: usize| -> Vec<(usize, f64)> {
        if i == 0 {
            return boundary_row.clone();
        }
        let (p, r, q) = (p_fn(i), r_fn(i), q_fn(i));
        let mut row = Vec::with_capacity(3);
        if p != 0.0 {
            row.push((i - 1, p));
        }
        if r != 0.0 {
            row.push((i, r));
        }
        if q != 0.0 {
            row.push((i + 1, q));
        }
        row
    };
    let kernel = Kernel {
        label: "birth_death".into(),
        state_space: StateSpace::CountableDiscrete,
        source: RowSource::Sparse(Arc::new(row_fn)),
        support_radius: Some(1),
        boundary_rows: 1,
        up_reach: 1,
        boundary_cols: boundary_cols.max(1),
    };
    validate_eager(&kernel, EAGER_ROWS)?;
    Ok(kernel)
}

/// Homogeneous birth-death chain: constant `(p, r, q)` away from the origin
/// and boundary row `P(0, 0) = a`, `P(0, 1) = 1 - a`.
pub fn birth_death_const(p: f64, r: f64, q: f64, a: f64) -> Result<Kernel> {
    for (name, v) in [("p", p), ("r", r), ("q", q)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(VgeomError::invalid(format!("{name} = {v} outside [0,1]")));
        }
    }
    if (p + r + q - 1.0).abs() > ROW_TOL {
        return Err(VgeomError::invalid(format!(
            "p + r + q = {} differs from 1",
            p + r + q
        )));
    }
    if !(0.0 < a && a < 1.0) {
        return Err(VgeomError::invalid(format!("a = {a} outside (0,1)")));
    }
    make_birth_death(move |_| p, move |_| r, move |_| q, vec![(0, a), (1, 1.0 - a)])
}

/// Uniformized single-server queue: for step `h` with `0 < h < 1/(beta+mu)`,
/// the origin row is `(1 - beta h, beta h)` and interior rows step down with
/// probability `mu h`, up with probability `beta h`.
pub fn mm1_kernel(beta: f64, mu: f64, h: f64) -> Result<Kernel> {
    if !(beta > 0.0 && mu > 0.0) {
        return Err(VgeomError::invalid("mm1 needs beta > 0 and mu > 0"));
    }
    if !(h > 0.0 && h < 1.0 / (beta + mu)) {
        return Err(VgeomError::invalid(format!(
            "mm1 needs 0 < h < 1/(beta+mu) = {}",
            1.0 / (beta + mu)
        )));
    }
    let mut k = make_birth_death(
        move |_| mu * h,
        move |_| 1.0 - h * (beta + mu),
        move |_| beta * h,
        vec![(0, 1.0 - beta * h), (1, beta * h)],
    )?;
    k.label = "mm1".into();
    Ok(k)
}

/// Metropolis sampler for the Poisson(1) target under a symmetric
/// nearest-neighbor proposal: `P(0,0) = P(0,1) = 1/2` and for `n >= 1`
/// `P(n, n-1) = 1/2`, `P(n, n+1) = 1/(2(n+1))`, rest stays put.
pub fn poisson_mh_kernel() -> Kernel {
    make_birth_death(
        |_| 0.5,
        |n| n as f64 / (2.0 * (n as f64 + 1.0)),
        |n| 1.0 / (2.0 * (n as f64 + 1.0)),
        vec![(0, 0.5), (1, 0.5)],
    )
    .expect("poisson MH rows are stochastic by construction")
}

/// Random walk with increments supported in `[-b, b]`, homogeneous or
/// state-dependent away from an explicit boundary block of `b` rows.
///
/// `a_fn(i)` is the increment law used at state `i >= boundary.len()`; its
/// support must lie in `[-b, b]`. Boundary rows are given explicitly as
/// sparse laws.
pub fn make_bounded_increment_rw(
    b: usize,
    a_fn: impl Fn(usize) -> Increments + Send + Sync + 'static,
    boundary: Vec<Vec<(usize, f64)>>,
) -> Result<Kernel> {
    if b == 0 {
        return Err(VgeomError::invalid("increment bound b must be >= 1"));
    }
    if boundary.len() < b {
        return Err(VgeomError::invalid(format!(
            "rows 0..{} need explicit boundary laws, got {}",
            b - 1,
            boundary.len()
        )));
    }
    let mut boundary_cols = 0usize;
    for (i, row) in boundary.iter().enumerate() {
        validate_row(i, row)?;
        boundary_cols = boundary_cols.max(row.iter().map(|&(j, _)| j).max().unwrap_or(0));
    }
    let n_boundary = boundary.len();
    let bi = b as i32;
    let row_fn = move |i: usize| -> Vec<(usize, f64)> {
        if i < n_boundary {
            return boundary[i].clone();
        }
        let law = a_fn(i);
        law.iter()
            .filter(|&(_, &p)| p != 0.0)
            .map(|(&k, &p)| {
                assert!(
                    k.abs() <= bi,
                    "increment {k} at state {i} exceeds bound {bi}"
                );
                ((i as i64 + k as i64) as usize, p)
            })
            .collect()
    };
    let kernel = Kernel {
        label: "bounded_increment_rw".into(),
        state_space: StateSpace::CountableDiscrete,
        source: RowSource::Sparse(Arc::new(row_fn)),
        support_radius: Some(b),
        boundary_rows: n_boundary,
        up_reach: b,
        boundary_cols: boundary_cols.max(n_boundary - 1 + b),
    };
    validate_eager(&kernel, EAGER_ROWS)?;
    Ok(kernel)
}

/// Homogeneous bounded-increment walk whose boundary rows clip the walk at
/// the origin: all mass that would land below 0 is moved to state 0.
pub fn homogeneous_rw_clipped(b: usize, incs: &Increments) -> Result<Kernel> {
    check_increments(incs)?;
    let max_abs = incs.keys().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0);
    if max_abs > b {
        return Err(VgeomError::invalid(format!(
            "increment support radius {max_abs} exceeds b = {b}"
        )));
    }
    let mut boundary = Vec::with_capacity(b);
    for i in 0..b {
        let mut row: BTreeMap<usize, f64> = BTreeMap::new();
        for (&k, &p) in incs {
            let j = (i as i64 + k as i64).max(0) as usize;
            *row.entry(j).or_insert(0.0) += p;
        }
        boundary.push(row.into_iter().filter(|&(_, p)| p != 0.0).collect());
    }
    let law = incs.clone();
    make_bounded_increment_rw(b, move |_| law.clone(), boundary)
}

/// Reset walk: from `n >= 1` jump to 0 with probability `p`, else step up;
/// the origin redistributes according to `q_fn(n)`, `n >= 1`. The boundary
/// law is tail-truncated at cumulative mass `1 - 1e-14` with the remainder
/// pooled into its last kept entry.
pub fn make_unbounded_increment_rw(
    p: f64,
    q_fn: impl Fn(usize) -> f64,
) -> Result<Kernel> {
    if !(0.0 < p && p < 1.0) {
        return Err(VgeomError::invalid(format!("p = {p} outside (0,1)")));
    }
    let q = 1.0 - p;
    let mut row0: Vec<(usize, f64)> = Vec::new();
    let mut cum = 0.0;
    for n in 1..=TAIL_CAP {
        let mass = q_fn(n);
        if !(0.0..=1.0).contains(&mass) {
            return Err(VgeomError::invalid(format!(
                "boundary mass q_{n} = {mass} outside [0,1]"
            )));
        }
        if mass > 0.0 {
            row0.push((n, mass));
            cum += mass;
        }
        if cum > TAIL_KEEP {
            break;
        }
    }
    if cum <= TAIL_KEEP {
        return Err(VgeomError::invalid(format!(
            "boundary law reaches cumulative mass {cum} < {TAIL_KEEP} within {TAIL_CAP} states"
        )));
    }
    if let Some(last) = row0.last_mut() {
        last.1 += 1.0 - cum;
    }
    let boundary_cols = row0.last().map(|&(j, _)| j).unwrap_or(0);
    let row_fn = move |i: usize| -> Vec<(usize, f64)> {
        if i == 0 {
            row0.clone()
        } else {
            vec![(0, p), (i + 1, q)]
        }
    };
    let kernel = Kernel {
        label: "unbounded_increment_rw".into(),
        state_space: StateSpace::CountableDiscrete,
        source: RowSource::Sparse(Arc::new(row_fn)),
        support_radius: None,
        boundary_rows: 1,
        up_reach: 1,
        boundary_cols,
    };
    validate_eager(&kernel, EAGER_ROWS.min(boundary_cols + 2))?;
    Ok(kernel)
}

/// Reset walk whose origin row is geometric: `q_n = (1 - s) s^{n-1}`.
pub fn unbounded_rw_geometric(p: f64, s: f64) -> Result<Kernel> {
    if !(0.0 < s && s < 1.0) {
        return Err(VgeomError::invalid(format!("s = {s} outside (0,1)")));
    }
    make_unbounded_increment_rw(p, move |n| (1.0 - s) * s.powi(n as i32 - 1))
}

fn check_increments(incs: &Increments) -> Result<()> {
    if incs.is_empty() {
        return Err(VgeomError::invalid("empty increment law"));
    }
    let mut sum = 0.0;
    for (&k, &p) in incs {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(VgeomError::invalid(format!(
                "increment mass a_{k} = {p} outside [0,1]"
            )));
        }
        if k.unsigned_abs() > 64 {
            return Err(VgeomError::invalid(format!(
                "increment {k} outside the supported range [-64, 64]"
            )));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > ROW_TOL {
        return Err(VgeomError::invalid(format!(
            "increment masses sum to {sum}, not 1"
        )));
    }
    Ok(())
}

/// Queueing recursion `X_{n+1} = max(0, X_n + v)` driven by a finitely
/// supported integer increment law. Returns the kernel together with the
/// matching random-dynamics description on the geometric metric, whose scale
/// is the minimizer of the increment generating function.
pub fn make_lindley(incs: &Increments) -> Result<(Kernel, IFSModel)> {
    check_increments(incs)?;
    let max_up = incs.keys().copied().max().unwrap_or(0).max(0) as usize;
    let max_down = (-incs.keys().copied().min().unwrap_or(0)).max(0) as usize;
    let support_radius = incs.keys().map(|k| k.unsigned_abs() as usize).max().unwrap();
    let boundary_rows = max_down;
    let law = incs.clone();
    let row_fn = move |i: usize| -> Vec<(usize, f64)> {
        let mut row: BTreeMap<usize, f64> = BTreeMap::new();
        for (&k, &p) in &law {
            if p == 0.0 {
                continue;
            }
            let j = (i as i64 + k as i64).max(0) as usize;
            *row.entry(j).or_insert(0.0) += p;
        }
        row.into_iter().collect()
    };
    let kernel = Kernel {
        label: "lindley".into(),
        state_space: StateSpace::CountableDiscrete,
        source: RowSource::Sparse(Arc::new(row_fn)),
        support_radius: Some(support_radius),
        boundary_rows,
        up_reach: max_up,
        boundary_cols: boundary_rows.saturating_sub(1) + max_up,
    };
    validate_eager(&kernel, EAGER_ROWS)?;
    // The natural geometric scale is the minimizer of phi(gamma) = E[gamma^v];
    // when the walk has nonnegative mean the minimizer degenerates to 1 and
    // downstream certificate constructors reject the model instead.
    let (gamma_star, _) = minimize_phi(incs, 64.0)?;
    let ifs = IFSModel {
        label: "lindley".into(),
        dynamics: Dynamics::LindleyDiscrete {
            increments: incs.clone(),
            gamma: gamma_star,
        },
        x0: 0.0,
    };
    Ok((kernel, ifs))
}

/// Metropolis sampler for the geometric(`p`) target under the unit-step
/// symmetric proposal, expressed as a Lindley walk with increment law
/// `nu(-1) = 1/2`, `nu(0) = (1-p)/2`, `nu(1) = p/2`.
pub fn geometric_mh(p: f64) -> Result<(Kernel, IFSModel)> {
    if !(0.0 < p && p < 1.0) {
        return Err(VgeomError::invalid(format!("p = {p} outside (0,1)")));
    }
    let mut incs = Increments::new();
    incs.insert(-1, 0.5);
    incs.insert(0, (1.0 - p) / 2.0);
    incs.insert(1, p / 2.0);
    let (mut kernel, mut ifs) = make_lindley(&incs)?;
    kernel.label = "geometric_mh".into();
    ifs.label = "geometric_mh".into();
    Ok((kernel, ifs))
}

/// Gaussian autoregression `X_{n+1} = theta X_n + noise` with
/// `noise ~ N(0, 1 - theta^2)` (standard normal stationary law),
/// discretized on a symmetric trapezoid grid of `n_points` nodes over
/// `[-half_width, half_width]`. Rows are renormalized to unit mass.
pub fn make_contracting_normals(
    theta: f64,
    half_width: f64,
    n_points: usize,
) -> Result<(Kernel, IFSModel)> {
    if !(theta.abs() < 1.0) {
        return Err(VgeomError::invalid(format!(
            "autoregression needs |theta| < 1, got {theta}"
        )));
    }
    if n_points < 32 {
        return Err(VgeomError::invalid(format!(
            "grid needs at least 32 points, got {n_points}"
        )));
    }
    if !(half_width > 0.0) {
        return Err(VgeomError::invalid("half_width must be positive"));
    }
    let g = n_points;
    let h = 2.0 * half_width / (g as f64 - 1.0);
    let points: Vec<f64> = (0..g).map(|i| -half_width + h * i as f64).collect();
    let mut weights = vec![h; g];
    weights[0] = h / 2.0;
    weights[g - 1] = h / 2.0;
    let var = 1.0 - theta * theta;
    let inv2v = 1.0 / (2.0 * var);
    let mut rows = Vec::with_capacity(g);
    for i in 0..g {
        let mean = theta * points[i];
        let mut row: Vec<f64> = (0..g)
            .map(|j| {
                let d = points[j] - mean;
                (-d * d * inv2v).exp() * weights[j]
            })
            .collect();
        let sum: f64 = row.iter().sum();
        if !(sum > 0.0) {
            return Err(VgeomError::InvariantViolated(format!(
                "grid row {i} has zero mass; widen the grid"
            )));
        }
        for v in &mut row {
            *v /= sum;
        }
        rows.push(row);
    }
    let kernel = Kernel {
        label: "contracting_normals".into(),
        state_space: StateSpace::Grid1D {
            points,
            weights,
        },
        source: RowSource::Dense(rows),
        support_radius: None,
        boundary_rows: 0,
        up_reach: 0,
        boundary_cols: 0,
    };
    let ifs = IFSModel {
        label: "contracting_normals".into(),
        dynamics: Dynamics::ArGaussian {
            theta,
            noise_sd: var.sqrt(),
        },
        x0: 0.0,
    };
    Ok((kernel, ifs))
}

/// Multiplicative random contraction `X_{n+1} = U X_n`, `U ~ Uniform[0,1]`.
pub fn make_multiplicative_uniform() -> IFSModel {
    IFSModel {
        label: "multiplicative_uniform".into(),
        dynamics: Dynamics::MultiplicativeUniform,
        x0: 0.0,
    }
}

/// Random-dynamics step families with their per-step Lipschitz coefficients.
#[derive(Clone, Debug)]
pub enum Dynamics {
    /// `x -> theta x + v`, `v ~ N(0, noise_sd^2)`.
    ArGaussian { theta: f64, noise_sd: f64 },
    /// `x -> v x`, `v ~ Uniform[0,1]`.
    MultiplicativeUniform,
    /// `x -> max(0, x + v)` on the integers, measured through the metric
    /// `d(i, j) = |gamma^i - gamma^j|`.
    LindleyDiscrete { increments: Increments, gamma: f64 },
}

/// An iterated random map together with the anchor point used by the
/// weight `p(x) = 1 + d(x, x0)`.
#[derive(Clone, Debug)]
pub struct IFSModel {
    pub label: String,
    pub dynamics: Dynamics,
    pub x0: f64,
}

impl IFSModel {
    /// Apply the random map with noise realization `v`.
    pub fn step(&self, v: f64, x: f64) -> f64 {
        match &self.dynamics {
            Dynamics::ArGaussian { theta, .. } => theta * x + v,
            Dynamics::MultiplicativeUniform => v * x,
            Dynamics::LindleyDiscrete { .. } => (x + v).max(0.0),
        }
    }

    /// Per-realization Lipschitz coefficient of `x -> F_v(x)` in the model
    /// metric.
    pub fn lipschitz_coeff(&self, v: f64) -> f64 {
        match &self.dynamics {
            Dynamics::ArGaussian { theta, .. } => theta.abs(),
            Dynamics::MultiplicativeUniform => v,
            Dynamics::LindleyDiscrete { gamma, .. } => gamma.powf(v),
        }
    }

    /// Draw one noise realization.
    pub fn sample_noise<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.dynamics {
            Dynamics::ArGaussian { noise_sd, .. } => {
                Normal::new(0.0, *noise_sd).expect("valid sd").sample(rng)
            }
            Dynamics::MultiplicativeUniform => rng.random::<f64>(),
            Dynamics::LindleyDiscrete { increments, .. } => {
                let u: f64 = rng.random();
                let mut cum = 0.0;
                for (&k, &p) in increments {
                    cum += p;
                    if u <= cum {
                        return k as f64;
                    }
                }
                *increments.keys().next_back().unwrap() as f64
            }
        }
    }

    /// Model metric.
    pub fn dist(&self, x: f64, y: f64) -> f64 {
        match &self.dynamics {
            Dynamics::LindleyDiscrete { gamma, .. } => (gamma.powf(x) - gamma.powf(y)).abs(),
            _ => (x - y).abs(),
        }
    }

    /// `p(x) = 1 + d(x, x0)`.
    pub fn p_weight(&self, x: f64) -> f64 {
        1.0 + self.dist(x, self.x0)
    }

    /// Closed-form single-step contraction factor
    /// `kappa_1(a) = E[L^a]^{1/a}`, when available.
    pub fn closed_kappa1(&self, a: f64) -> Option<f64> {
        match &self.dynamics {
            Dynamics::ArGaussian { theta, .. } => Some(theta.abs()),
            Dynamics::MultiplicativeUniform => Some((1.0 / (a + 1.0)).powf(1.0 / a)),
            Dynamics::LindleyDiscrete { increments, gamma } => {
                if (a - 1.0).abs() < 1e-14 {
                    Some(
                        increments
                            .iter()
                            .map(|(&k, &p)| p * gamma.powi(k))
                            .sum::<f64>(),
                    )
                } else {
                    None
                }
            }
        }
    }

    /// Closed-form asymptotic factor `kappa_hat(a) = inf_n E[(L_1...L_n)^a]^{1/(an)}`,
    /// when it differs from (or coincides with) the single-step value.
    pub fn closed_kappa_hat(&self, a: f64) -> Option<f64> {
        match &self.dynamics {
            // Independent factors: the infimum equals the single-step value.
            Dynamics::ArGaussian { theta, .. } => Some(theta.abs()),
            Dynamics::MultiplicativeUniform => Some((1.0 / (a + 1.0)).powf(1.0 / a)),
            Dynamics::LindleyDiscrete { .. } => self.closed_kappa1(a),
        }
    }

    /// `(|pi|_1, |pi|_a)` for the stationary law when known in closed form:
    /// moments of `1 + d(x, x0)` under the invariant distribution.
    pub fn stationary_norms(&self, a: f64) -> Option<(f64, f64)> {
        match &self.dynamics {
            Dynamics::ArGaussian { theta, noise_sd } => {
                let stat_var = noise_sd * noise_sd / (1.0 - theta * theta);
                if (stat_var - 1.0).abs() > 1e-12 {
                    return None;
                }
                // Stationary law N(0,1): E(1+|Y|) = 1 + sqrt(2/pi),
                // E(1+|Y|)^2 = 2 + 2 sqrt(2/pi).
                let e_abs = (2.0 / std::f64::consts::PI).sqrt();
                let n1 = 1.0 + e_abs;
                if (a - 1.0).abs() < 1e-14 {
                    Some((n1, n1))
                } else if (a - 2.0).abs() < 1e-14 {
                    Some((n1, (2.0 + 2.0 * e_abs).sqrt()))
                } else {
                    None
                }
            }
            Dynamics::MultiplicativeUniform => Some((1.0, 1.0)),
            Dynamics::LindleyDiscrete { .. } => None,
        }
    }
}
