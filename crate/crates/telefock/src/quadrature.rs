//! Numeric integration of the conditional output statistics over all
//! measurement outcomes: the independent route to the photon-number
//! distributions and fidelities that the closed forms are checked against.
//!
//! Each outcome plane is integrated in polar coordinates: Gauss-Legendre
//! nodes on `[0, R]` with `R = 6 / sqrt(1 - q^2)` (the integrand envelope
//! `exp(-(1-q^2)|beta|^2)` is below 1e-15 there) times a uniform angular
//! rule. The full angular loop runs by default even though the integrand is
//! angle-independent for Fock-basis inputs; the symmetry is something the
//! test suite checks, not something the integrator assumes.
//!
//! Every distribution is computed twice, at the requested radial resolution
//! and with the radial node count doubled; the observed shift is reported as
//! the grid error estimate and failing to stay below 1e-6 is a hard error.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use thiserror::Error;

use crate::teleport::{
    transfer_applied_to_level, PolarizationQubit, SqueezingParameter, TeleportError,
};
use crate::fock::TruncationConfig;

/// Default number of Gauss-Legendre radial nodes.
pub const DEFAULT_RADIAL_NODES: usize = 64;
/// Default number of uniform angular nodes.
pub const DEFAULT_ANGULAR_NODES: usize = 32;
/// Default radius multiplier: `R = 6 / sqrt(1 - q^2)`.
pub const DEFAULT_RADIUS_MULTIPLIER: f64 = 6.0;
/// A distribution whose probabilities move more than this under radial
/// doubling has not converged.
pub const CONVERGENCE_LIMIT: f64 = 1e-6;
/// Conditional fidelities are undefined below this total probability.
pub const FIDELITY_PROBABILITY_FLOOR: f64 = 1e-14;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum StatsError {
    #[error(transparent)]
    Teleport(#[from] TeleportError),
    #[error("invalid quadrature grid: {reason}")]
    InvalidGrid { reason: String },
    #[error("n_max {n_max} too close to the truncation dim {dim}; need n_max < dim - 5")]
    RequestTooLarge { n_max: usize, dim: usize },
    #[error(
        "probability mass {mass:.3e} accumulated on Fock level {level} exceeds the tail \
         tolerance {tolerance:.1e}; increase dim above {dim}"
    )]
    TruncationTail {
        mass: f64,
        tolerance: f64,
        level: usize,
        dim: usize,
    },
    #[error(
        "quadrature did not converge: doubling the radial nodes moved p[{level}] from \
         {coarse:.9e} to {refined:.9e} (|delta| = {delta:.3e} > {limit:.1e})"
    )]
    NotConverged {
        level: usize,
        coarse: f64,
        refined: f64,
        delta: f64,
        limit: f64,
    },
    #[error("captured probability mass {total} exceeds 1 beyond tolerance")]
    MassExcess { total: f64 },
    #[error("fidelity undefined: P({n}) = {probability:.3e} is below {floor:.1e}")]
    UndefinedFidelity {
        n: usize,
        probability: f64,
        floor: f64,
    },
    #[error("operation requires a joint distribution")]
    NotJoint,
}

impl From<crate::fock::FockError> for StatsError {
    fn from(err: crate::fock::FockError) -> Self {
        StatsError::Teleport(TeleportError::Fock(err))
    }
}

/// Polar product rule for one outcome plane.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    radial_nodes: Vec<(f64, f64)>,
    angular_count: usize,
    radius_cut: f64,
    assume_angular_symmetry: bool,
}

impl QuadratureGrid {
    pub fn new(
        radial_nodes: Vec<(f64, f64)>,
        angular_count: usize,
        radius_cut: f64,
    ) -> Result<Self, StatsError> {
        if radial_nodes.is_empty() {
            return Err(StatsError::InvalidGrid {
                reason: "no radial nodes".into(),
            });
        }
        if !(radius_cut.is_finite() && radius_cut > 0.0) {
            return Err(StatsError::InvalidGrid {
                reason: format!("radius cut {radius_cut} must be positive"),
            });
        }
        let mut prev = 0.0;
        for &(r, w) in &radial_nodes {
            if !(w.is_finite() && w > 0.0) {
                return Err(StatsError::InvalidGrid {
                    reason: format!("non-positive weight {w}"),
                });
            }
            if !(r.is_finite() && r > prev) {
                return Err(StatsError::InvalidGrid {
                    reason: "radii must be strictly increasing".into(),
                });
            }
            if r > radius_cut {
                return Err(StatsError::InvalidGrid {
                    reason: format!("radius {r} beyond the cut {radius_cut}"),
                });
            }
            prev = r;
        }
        if angular_count < 4 || !angular_count.is_multiple_of(2) {
            return Err(StatsError::InvalidGrid {
                reason: format!("angular count {angular_count} must be even and at least 4"),
            });
        }
        Ok(Self {
            radial_nodes,
            angular_count,
            radius_cut,
            assume_angular_symmetry: false,
        })
    }

    /// Gauss-Legendre radial rule on `[0, radius_cut]` with a uniform
    /// angular rule.
    pub fn gauss_legendre_polar(
        radial_count: usize,
        angular_count: usize,
        radius_cut: f64,
    ) -> Result<Self, StatsError> {
        if radial_count == 0 {
            return Err(StatsError::InvalidGrid {
                reason: "radial count must be positive".into(),
            });
        }
        if !(radius_cut.is_finite() && radius_cut > 0.0) {
            return Err(StatsError::InvalidGrid {
                reason: format!("radius cut {radius_cut} must be positive"),
            });
        }
        let nodes = gauss_legendre_nodes(radial_count)
            .into_iter()
            .map(|(x, w)| (0.5 * radius_cut * (x + 1.0), 0.5 * radius_cut * w))
            .collect();
        Self::new(nodes, angular_count, radius_cut)
    }

    /// Default grid for a given squeezing parameter.
    pub fn default_for(q: SqueezingParameter) -> Self {
        Self::for_params(
            q,
            DEFAULT_RADIAL_NODES,
            DEFAULT_ANGULAR_NODES,
            DEFAULT_RADIUS_MULTIPLIER,
        )
        .expect("default grid parameters are valid")
    }

    /// Grid with explicit radial/angular counts and radius multiplier.
    pub fn for_params(
        q: SqueezingParameter,
        radial_count: usize,
        angular_count: usize,
        radius_multiplier: f64,
    ) -> Result<Self, StatsError> {
        if !(radius_multiplier.is_finite() && radius_multiplier > 0.0) {
            return Err(StatsError::InvalidGrid {
                reason: format!("radius multiplier {radius_multiplier} must be positive"),
            });
        }
        let qv = q.value();
        let radius = radius_multiplier / (1.0 - qv * qv).sqrt();
        Self::gauss_legendre_polar(radial_count, angular_count, radius)
    }

    /// Same rule with the radial node count doubled.
    pub fn refined(&self) -> Result<Self, StatsError> {
        let mut grid = Self::gauss_legendre_polar(
            2 * self.radial_nodes.len(),
            self.angular_count,
            self.radius_cut,
        )?;
        grid.assume_angular_symmetry = self.assume_angular_symmetry;
        Ok(grid)
    }

    /// Skip the angular loop and weight a single angle by `2 pi`. Only valid
    /// for integrands known to be angle-independent; the default leaves the
    /// full loop on so that the symmetry stays a testable claim.
    pub fn with_angular_symmetry(mut self, assume: bool) -> Self {
        self.assume_angular_symmetry = assume;
        self
    }

    pub fn radial_nodes(&self) -> &[(f64, f64)] {
        &self.radial_nodes
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn radius_cut(&self) -> f64 {
        self.radius_cut
    }

    pub fn assumes_angular_symmetry(&self) -> bool {
        self.assume_angular_symmetry
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut nodes = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev initial guess, then Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = (-z, w);
        nodes[n - 1 - i] = (z, w);
    }
    nodes
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// How the axes of a joint distribution map onto polarization modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointFrame {
    /// Input `(1, 0)`: first axis is `n_H` and carries the signal photon.
    HorizontalVertical,
    /// Input `(0, 1)`: second axis carries the signal photon.
    VerticalHorizontal,
    /// General input: axes are photon numbers parallel/perpendicular to the
    /// input polarization.
    QubitAligned,
}

impl JointFrame {
    /// Index (0 or 1) of the axis parallel to the input polarization.
    pub fn parallel_axis(&self) -> usize {
        match self {
            JointFrame::HorizontalVertical | JointFrame::QubitAligned => 0,
            JointFrame::VerticalHorizontal => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionLayout {
    SingleMode { n_max: usize },
    Joint { n_max: usize, frame: JointFrame },
}

/// Integrated photon-number probabilities with the truncation residual and
/// the doubling-based grid error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionResult {
    probabilities: Vec<f64>,
    layout: DistributionLayout,
    residual_mass: f64,
    grid_estimate_error: f64,
}

impl DistributionResult {
    fn build(
        probabilities: Vec<f64>,
        layout: DistributionLayout,
        grid_estimate_error: f64,
    ) -> Result<Self, StatsError> {
        let total: f64 = probabilities.iter().sum();
        if total > 1.0 + 1e-4 {
            return Err(StatsError::MassExcess { total });
        }
        Ok(Self {
            probabilities,
            layout,
            residual_mass: (1.0 - total).max(0.0),
            grid_estimate_error,
        })
    }

    pub fn layout(&self) -> DistributionLayout {
        self.layout
    }

    pub fn n_max(&self) -> usize {
        match self.layout {
            DistributionLayout::SingleMode { n_max } | DistributionLayout::Joint { n_max, .. } => {
                n_max
            }
        }
    }

    /// Probability of `n` photons (single-mode layout).
    pub fn single(&self, n: usize) -> f64 {
        debug_assert!(matches!(self.layout, DistributionLayout::SingleMode { .. }));
        self.probabilities[n]
    }

    /// Probability at grid point `(i, j)` (joint layout, axes per frame).
    pub fn joint(&self, i: usize, j: usize) -> f64 {
        debug_assert!(matches!(self.layout, DistributionLayout::Joint { .. }));
        self.probabilities[i * (self.n_max() + 1) + j]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn residual_mass(&self) -> f64 {
        self.residual_mass
    }

    pub fn grid_estimate_error(&self) -> f64 {
        self.grid_estimate_error
    }
}

/// One radial-shell pass of `integral |<n|T_q(beta)|level>|^2 d^2 beta`
/// restricted to levels `0..=n_max`, plus the mass arriving at the top
/// truncation level.
fn integrate_level_probabilities(
    q: SqueezingParameter,
    level: usize,
    n_max: usize,
    grid: &QuadratureGrid,
    cfg: &TruncationConfig,
) -> Result<(Vec<f64>, f64), StatsError> {
    let angular = if grid.assumes_angular_symmetry() {
        1
    } else {
        grid.angular_count()
    };
    let d_theta = 2.0 * std::f64::consts::PI / angular as f64;
    let edge_level = cfg.dim() - 1;
    let partials: Vec<Result<(Vec<f64>, f64), StatsError>> = grid
        .radial_nodes()
        .par_iter()
        .map(|&(radius, weight)| {
            let mut acc = vec![0.0; n_max + 1];
            let mut edge = 0.0;
            for a in 0..angular {
                let theta = d_theta * a as f64;
                let beta = C64::from_polar(radius, theta);
                let out = transfer_applied_to_level(q, beta, level, cfg)?;
                let node_weight = weight * radius * d_theta;
                for (n, slot) in acc.iter_mut().enumerate() {
                    *slot += node_weight * out.amplitude(n).norm_sqr();
                }
                edge += node_weight * out.amplitude(edge_level).norm_sqr();
            }
            Ok((acc, edge))
        })
        .collect();
    // Fixed-order reduction keeps results bit-reproducible for a grid.
    let mut totals = vec![0.0; n_max + 1];
    let mut edge_total = 0.0;
    for partial in partials {
        let (acc, edge) = partial?;
        for (slot, value) in totals.iter_mut().zip(&acc) {
            *slot += value;
        }
        edge_total += edge;
    }
    Ok((totals, edge_total))
}

/// Output photon-number distribution of a single teleportation channel for
/// a vacuum (`input_level = 0`) or single-photon (`input_level = 1`) input.
pub fn numeric_single_mode_distribution(
    q: SqueezingParameter,
    input_level: usize,
    n_max: usize,
    grid: &QuadratureGrid,
    cfg: &TruncationConfig,
) -> Result<DistributionResult, StatsError> {
    if n_max + 5 >= cfg.dim() {
        return Err(StatsError::RequestTooLarge {
            n_max,
            dim: cfg.dim(),
        });
    }
    let (base, edge) = integrate_level_probabilities(q, input_level, n_max, grid, cfg)?;
    if edge > cfg.tail_tolerance() {
        return Err(StatsError::TruncationTail {
            mass: edge,
            tolerance: cfg.tail_tolerance(),
            level: cfg.dim() - 1,
            dim: cfg.dim(),
        });
    }
    let (refined, _) = integrate_level_probabilities(q, input_level, n_max, &grid.refined()?, cfg)?;
    let mut worst = (0usize, 0.0f64);
    for (n, (&b, &r)) in base.iter().zip(&refined).enumerate() {
        let delta = (b - r).abs();
        if delta > worst.1 {
            worst = (n, delta);
        }
    }
    if worst.1 > CONVERGENCE_LIMIT {
        return Err(StatsError::NotConverged {
            level: worst.0,
            coarse: base[worst.0],
            refined: refined[worst.0],
            delta: worst.1,
            limit: CONVERGENCE_LIMIT,
        });
    }
    DistributionResult::build(
        base,
        DistributionLayout::SingleMode { n_max },
        worst.1 + 1e-16,
    )
}

/// Joint output distribution for a polarization qubit.
///
/// The conditional output of a basis input is a product state, so the joint
/// grid is the product of the two single-mode integrals. A general qubit is
/// handled in its own polarization frame — the entangled resource is
/// invariant under joint polarization rotations, so the statistics relative
/// to the input polarization reduce to the `(1, 0)` computation; the frame
/// tag records which axis carries the signal photon.
pub fn numeric_joint_distribution(
    q: SqueezingParameter,
    qubit: &PolarizationQubit,
    n_max: usize,
    grid: &QuadratureGrid,
    cfg: &TruncationConfig,
) -> Result<DistributionResult, StatsError> {
    let signal = numeric_single_mode_distribution(q, 1, n_max, grid, cfg)?;
    let idler = numeric_single_mode_distribution(q, 0, n_max, grid, cfg)?;
    let frame = if qubit.is_horizontal() {
        JointFrame::HorizontalVertical
    } else if qubit.is_vertical() {
        JointFrame::VerticalHorizontal
    } else {
        JointFrame::QubitAligned
    };
    let side = n_max + 1;
    let mut probabilities = vec![0.0; side * side];
    for i in 0..side {
        for j in 0..side {
            probabilities[i * side + j] = match frame {
                JointFrame::VerticalHorizontal => idler.single(i) * signal.single(j),
                _ => signal.single(i) * idler.single(j),
            };
        }
    }
    DistributionResult::build(
        probabilities,
        DistributionLayout::Joint { n_max, frame },
        signal.grid_estimate_error() + idler.grid_estimate_error(),
    )
}

/// Fidelities and photon-number statistics extracted from a joint
/// distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySummary {
    mean_parallel: f64,
    mean_perpendicular: f64,
    f_average: f64,
    total_probabilities: Vec<f64>,
    clone_fidelities: Vec<Option<f64>>,
}

impl FidelitySummary {
    /// Mean photon number in the input polarization.
    pub fn mean_parallel(&self) -> f64 {
        self.mean_parallel
    }

    /// Mean photon number orthogonal to the input polarization.
    pub fn mean_perpendicular(&self) -> f64 {
        self.mean_perpendicular
    }

    /// Average polarization fidelity of all output photons.
    pub fn f_average(&self) -> f64 {
        self.f_average
    }

    /// `P(N)` for `N = 0..=n_max`.
    pub fn total_probability(&self, big_n: usize) -> f64 {
        self.total_probabilities[big_n]
    }

    pub fn total_probabilities(&self) -> &[f64] {
        &self.total_probabilities
    }

    /// Conditional cloning fidelity `F_N`, guarded against vanishing `P(N)`.
    pub fn clone_fidelity(&self, big_n: usize) -> Result<f64, StatsError> {
        assert!(big_n >= 1, "F_N needs at least one output photon");
        self.clone_fidelities[big_n - 1].ok_or(StatsError::UndefinedFidelity {
            n: big_n,
            probability: self.total_probabilities[big_n],
            floor: FIDELITY_PROBABILITY_FLOOR,
        })
    }

    /// Post-selected single-photon fidelity `F_1`.
    pub fn f_one(&self) -> Result<f64, StatsError> {
        self.clone_fidelity(1)
    }
}

/// Reduces a joint distribution to means, `F_av`, `P(N)` and `F_N`.
pub fn numeric_fidelities(
    joint: &DistributionResult,
    n_max: usize,
) -> Result<FidelitySummary, StatsError> {
    let DistributionLayout::Joint { n_max: grid_max, frame } = joint.layout() else {
        return Err(StatsError::NotJoint);
    };
    let n_max = n_max.min(grid_max);
    let parallel_axis = frame.parallel_axis();
    let mut mean_parallel = 0.0;
    let mut mean_perpendicular = 0.0;
    for i in 0..=grid_max {
        for j in 0..=grid_max {
            let p = joint.joint(i, j);
            let (par, perp) = if parallel_axis == 0 { (i, j) } else { (j, i) };
            mean_parallel += par as f64 * p;
            mean_perpendicular += perp as f64 * p;
        }
    }
    let f_average = mean_parallel / (mean_parallel + mean_perpendicular);
    let mut total_probabilities = vec![0.0; n_max + 1];
    let mut clone_fidelities = vec![None; n_max];
    for (big_n, slot) in total_probabilities.iter_mut().enumerate() {
        let mut p_total = 0.0;
        let mut weighted = 0.0;
        for i in 0..=big_n {
            let j = big_n - i;
            let p = joint.joint(i, j);
            p_total += p;
            let par = if parallel_axis == 0 { i } else { j };
            weighted += par as f64 * p;
        }
        *slot = p_total;
        if big_n >= 1 && p_total >= FIDELITY_PROBABILITY_FLOOR {
            clone_fidelities[big_n - 1] = Some(weighted / (big_n as f64 * p_total));
        }
    }
    Ok(FidelitySummary {
        mean_parallel,
        mean_perpendicular,
        f_average,
        total_probabilities,
        clone_fidelities,
    })
}
