//! Transfer operators for continuous-variable teleportation and the
//! conditional output states of the two-channel polarization protocol.
//!
//! A single teleportation channel at squeezing `q` maps an input through the
//! non-unitary transfer operator
//!
//! ```text
//! T_q(beta) = sqrt((1 - q^2)/pi) sum_n q^n D(beta) |n><n| D(-beta)
//! ```
//!
//! for measurement outcome `beta`. The per-mode prefactor is the square root
//! of the `(1-q^2)/pi` carried by the two-mode operator, which makes the
//! outcome density `||T|psi>||^2` integrate to one over the complex plane,
//! `d^2 beta = d(Re beta) d(Im beta)`, with no extra factors.
//!
//! Applied to vacuum and single-photon inputs the operator collapses to a
//! displaced state of the much smaller amplitude `(1-q) beta`:
//!
//! ```text
//! T_q(beta)|0> = sqrt((1-q^2)/pi) e^{-(1-q^2)|beta|^2/2} D((1-q) beta) |0>
//! T_q(beta)|1> = sqrt((1-q^2)/pi) e^{-(1-q^2)|beta|^2/2} D((1-q) beta)
//!                ((1-q^2) conj(beta) |0> + q |1>)
//! ```
//!
//! [`transfer_applied_to_level`] evaluates this closed form, which stays
//! exact in the truncated space even where the diagonal sum would need Fock
//! levels near `|beta|^2`; [`single_mode_transfer`] builds the operator from
//! the diagonal sum so the two routes can be checked against each other.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::fock::{
    displaced_fock_state, displacement_operator, DenseOperator, FockError, FockVector,
    TruncationConfig, TwoModeState,
};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TeleportError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("squeezing parameter must lie in [0, 1) for numeric work, got {q}")]
    InvalidSqueezing { q: f64 },
    #[error("qubit amplitudes have squared norm {norm_sqr} (must be 1 within 1e-12)")]
    QubitNotNormalized { norm_sqr: f64 },
    #[error("measurement outcome component is not finite")]
    NonFiniteOutcome,
    #[error("transfer application supports Fock inputs 0 and 1, got level {level}")]
    UnsupportedInputLevel { level: usize },
}

/// Entanglement strength of the two-mode squeezed resource, `0 <= q < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingParameter(f64);

impl SqueezingParameter {
    pub fn new(q: f64) -> Result<Self, TeleportError> {
        if !q.is_finite() || !(0.0..1.0).contains(&q) {
            return Err(TeleportError::InvalidSqueezing { q });
        }
        Ok(Self(q))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Complex displacement amplitudes measured for the two polarization modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    beta_h: C64,
    beta_v: C64,
}

impl MeasurementOutcome {
    pub fn new(beta_h: C64, beta_v: C64) -> Result<Self, TeleportError> {
        for b in [beta_h, beta_v] {
            if !b.re.is_finite() || !b.im.is_finite() {
                return Err(TeleportError::NonFiniteOutcome);
            }
        }
        Ok(Self { beta_h, beta_v })
    }

    pub fn beta_h(&self) -> C64 {
        self.beta_h
    }

    pub fn beta_v(&self) -> C64 {
        self.beta_v
    }
}

/// Normalized single-photon polarization qubit `c_H |1;0> + c_V |0;1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationQubit {
    c_h: C64,
    c_v: C64,
}

impl PolarizationQubit {
    pub fn new(c_h: C64, c_v: C64) -> Result<Self, TeleportError> {
        for c in [c_h, c_v] {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(TeleportError::NonFiniteOutcome);
            }
        }
        let norm_sqr = c_h.norm_sqr() + c_v.norm_sqr();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(TeleportError::QubitNotNormalized { norm_sqr });
        }
        Ok(Self { c_h, c_v })
    }

    /// Rescales arbitrary non-zero amplitudes onto the unit sphere.
    pub fn normalized(c_h: C64, c_v: C64) -> Result<Self, TeleportError> {
        let norm_sqr = c_h.norm_sqr() + c_v.norm_sqr();
        if !norm_sqr.is_finite() || norm_sqr == 0.0 {
            return Err(TeleportError::QubitNotNormalized { norm_sqr });
        }
        let norm = norm_sqr.sqrt();
        Self::new(c_h / norm, c_v / norm)
    }

    pub fn horizontal() -> Self {
        Self {
            c_h: C64::new(1.0, 0.0),
            c_v: C64::new(0.0, 0.0),
        }
    }

    pub fn vertical() -> Self {
        Self {
            c_h: C64::new(0.0, 0.0),
            c_v: C64::new(1.0, 0.0),
        }
    }

    pub fn c_h(&self) -> C64 {
        self.c_h
    }

    pub fn c_v(&self) -> C64 {
        self.c_v
    }

    pub fn is_horizontal(&self) -> bool {
        self.c_v.norm_sqr() == 0.0
    }

    pub fn is_vertical(&self) -> bool {
        self.c_h.norm_sqr() == 0.0
    }
}

fn mode_prefactor(q: f64) -> f64 {
    ((1.0 - q * q) / std::f64::consts::PI).sqrt()
}

/// Single-mode transfer operator from its diagonal sum over displaced Fock
/// projectors. Non-unitary by construction; valid while `|beta|` stays below
/// the displacement bound of `cfg`.
pub fn single_mode_transfer(
    q: SqueezingParameter,
    beta: C64,
    cfg: &TruncationConfig,
) -> Result<DenseOperator, TeleportError> {
    let dim = cfg.dim();
    let disp = displacement_operator(beta, cfg)?;
    let qv = q.value();
    // c * D(beta) diag(q^n) D(beta)^dagger, with D(-beta) = D(beta)^dagger.
    let mut weights = Vec::with_capacity(dim);
    let mut w = 1.0;
    for _ in 0..dim {
        weights.push(w);
        w *= qv;
    }
    let c = mode_prefactor(qv);
    let mut op = DenseOperator::zeros(dim);
    for m in 0..dim {
        for l in 0..dim {
            let acc: C64 = weights
                .iter()
                .enumerate()
                .map(|(n, &w)| disp.entry(m, n) * w * disp.entry(l, n).conj())
                .sum();
            op.set_entry(m, l, acc * c);
        }
    }
    Ok(op)
}

/// `T_q(beta)|level>` for `level` 0 or 1 via the displaced closed form.
///
/// The only displacement constructed is `(1-q) beta`, so the result is exact
/// in the truncated space for every outcome the quadrature grids visit.
pub fn transfer_applied_to_level(
    q: SqueezingParameter,
    beta: C64,
    level: usize,
    cfg: &TruncationConfig,
) -> Result<FockVector, TeleportError> {
    if !beta.re.is_finite() || !beta.im.is_finite() {
        return Err(TeleportError::NonFiniteOutcome);
    }
    if level > 1 {
        return Err(TeleportError::UnsupportedInputLevel { level });
    }
    let qv = q.value();
    let envelope = (-(1.0 - qv * qv) * beta.norm_sqr() / 2.0).exp();
    let c = mode_prefactor(qv) * envelope;
    let gamma = (1.0 - qv) * beta;
    let d0 = displaced_fock_state(gamma, 0, cfg)?;
    if level == 0 {
        return Ok(d0.scaled(C64::new(c, 0.0)));
    }
    let d1 = displaced_fock_state(gamma, 1, cfg)?;
    let vac_coeff = C64::new(c, 0.0) * (1.0 - qv * qv) * beta.conj();
    let one_coeff = C64::new(c * qv, 0.0);
    let amplitudes = d0
        .amplitudes()
        .iter()
        .zip(d1.amplitudes())
        .map(|(a0, a1)| vac_coeff * a0 + one_coeff * a1)
        .collect();
    Ok(FockVector::from_amplitudes(amplitudes)?)
}

/// Unnormalized conditional output
/// `T_{H,q}(beta_H) (x) T_{V,q}(beta_V) (c_H |1;0> + c_V |0;1>)`.
pub fn conditional_output(
    q: SqueezingParameter,
    outcome: &MeasurementOutcome,
    qubit: &PolarizationQubit,
    cfg: &TruncationConfig,
) -> Result<TwoModeState, TeleportError> {
    let mut state = TwoModeState::zeros(cfg.dim());
    if qubit.c_h().norm_sqr() > 0.0 {
        let h = transfer_applied_to_level(q, outcome.beta_h(), 1, cfg)?;
        let v = transfer_applied_to_level(q, outcome.beta_v(), 0, cfg)?;
        state
            .add_scaled_product(qubit.c_h(), &h, &v)
            .map_err(TeleportError::Fock)?;
    }
    if qubit.c_v().norm_sqr() > 0.0 {
        let h = transfer_applied_to_level(q, outcome.beta_h(), 0, cfg)?;
        let v = transfer_applied_to_level(q, outcome.beta_v(), 1, cfg)?;
        state
            .add_scaled_product(qubit.c_v(), &h, &v)
            .map_err(TeleportError::Fock)?;
    }
    Ok(state)
}

/// Joint probability density of the outcome `(beta_H, beta_V)` under the
/// Lebesgue measure `d^2 beta_H d^2 beta_V`; equals the squared norm of the
/// unnormalized conditional output and integrates to one over both planes.
pub fn measurement_density(
    q: SqueezingParameter,
    outcome: &MeasurementOutcome,
    qubit: &PolarizationQubit,
    cfg: &TruncationConfig,
) -> Result<f64, TeleportError> {
    Ok(conditional_output(q, outcome, qubit, cfg)?.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn squeezing_domain() {
        assert!(SqueezingParameter::new(-0.1).is_err());
        assert!(SqueezingParameter::new(1.0).is_err());
        assert!(SqueezingParameter::new(f64::NAN).is_err());
        assert_eq!(SqueezingParameter::new(0.9).unwrap().value(), 0.9);
    }

    #[test]
    fn qubit_validation() {
        assert!(PolarizationQubit::new(c(1.0, 0.0), c(0.1, 0.0)).is_err());
        let s = 1.0 / 2.0_f64.sqrt();
        assert!(PolarizationQubit::new(c(s, 0.0), c(0.0, s)).is_ok());
        let q = PolarizationQubit::normalized(c(3.0, 0.0), c(4.0, 0.0)).unwrap();
        assert_abs_diff_eq!(q.c_h().re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(q.c_v().re, 0.8, epsilon = 1e-15);
        assert!(PolarizationQubit::normalized(c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn transfer_at_zero_beta_q_zero_is_vacuum_projector() {
        // Only the n = 0 term of the sum survives; per-mode weight
        // sqrt(1/pi) on |0><0|.
        let cfg = TruncationConfig::default();
        let q = SqueezingParameter::new(0.0).unwrap();
        let op = single_mode_transfer(q, c(0.0, 0.0), &cfg).unwrap();
        let expect = (1.0 / PI).sqrt();
        assert_abs_diff_eq!(op.entry(0, 0).re, expect, epsilon = 1e-15);
        for m in 0..cfg.dim() {
            for l in 0..cfg.dim() {
                if m != 0 || l != 0 {
                    assert_eq!(op.entry(m, l), c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn transfer_at_zero_beta_is_geometric_diagonal() {
        let cfg = TruncationConfig::default();
        let q = SqueezingParameter::new(0.5).unwrap();
        let op = single_mode_transfer(q, c(0.0, 0.0), &cfg).unwrap();
        let pref = (0.75 / PI).sqrt();
        for n in 0..cfg.dim() {
            let expect = pref * 0.5_f64.powi(n as i32);
            assert_abs_diff_eq!(op.entry(n, n).re, expect, epsilon = 1e-14);
            assert_abs_diff_eq!(op.entry(n, n).im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn sum_form_matches_closed_application() {
        let cfg = TruncationConfig::default();
        let q = SqueezingParameter::new(0.5).unwrap();
        let beta = c(1.0, 0.0);
        let op = single_mode_transfer(q, beta, &cfg).unwrap();
        for level in [0usize, 1] {
            let via_sum = op
                .apply(&FockVector::basis(cfg.dim(), level).unwrap())
                .unwrap();
            let closed = transfer_applied_to_level(q, beta, level, &cfg).unwrap();
            for n in 0..cfg.dim() {
                let diff = (via_sum.amplitude(n) - closed.amplitude(n)).norm();
                assert!(diff < 1e-8, "level {level}, n {n}: diff {diff}");
            }
        }
    }

    #[test]
    fn conditional_output_at_zero_outcome() {
        // At beta = 0 the vacuum component of the output vanishes and the
        // surviving term is (1-q^2)/pi * q |1;0>.
        let cfg = TruncationConfig::default();
        for qv in [0.2, 0.5, 0.8] {
            let q = SqueezingParameter::new(qv).unwrap();
            let outcome = MeasurementOutcome::new(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
            let out =
                conditional_output(q, &outcome, &PolarizationQubit::horizontal(), &cfg).unwrap();
            let expect = (1.0 - qv * qv) / PI * qv;
            assert_abs_diff_eq!(out.amplitude(1, 0).re, expect, epsilon = 1e-14);
            for n_h in 0..cfg.dim() {
                for n_v in 0..cfg.dim() {
                    if (n_h, n_v) != (1, 0) {
                        assert!(out.amplitude(n_h, n_v).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn basis_outputs_factorize() {
        let cfg = TruncationConfig::default();
        let q = SqueezingParameter::new(0.5).unwrap();
        let outcome = MeasurementOutcome::new(c(0.3, 0.2), c(0.0, -0.1)).unwrap();
        let out = conditional_output(q, &outcome, &PolarizationQubit::horizontal(), &cfg).unwrap();
        let h = transfer_applied_to_level(q, outcome.beta_h(), 1, &cfg).unwrap();
        let v = transfer_applied_to_level(q, outcome.beta_v(), 0, &cfg).unwrap();
        let product = TwoModeState::from_product(&h, &v).unwrap();
        for n_h in 0..cfg.dim() {
            for n_v in 0..cfg.dim() {
                let diff = (out.amplitude(n_h, n_v) - product.amplitude(n_h, n_v)).norm();
                assert!(diff < 1e-12);
            }
        }
        // squared norm equals the product of the single-mode squared norms
        assert_abs_diff_eq!(
            out.norm_sqr(),
            h.norm_sqr() * v.norm_sqr(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn vertical_qubit_is_relabeled_horizontal() {
        let cfg = TruncationConfig::default();
        let q = SqueezingParameter::new(0.4).unwrap();
        let outcome = MeasurementOutcome::new(c(0.7, -0.2), c(-0.3, 0.5)).unwrap();
        let swapped = MeasurementOutcome::new(outcome.beta_v(), outcome.beta_h()).unwrap();
        let vert = conditional_output(q, &outcome, &PolarizationQubit::vertical(), &cfg).unwrap();
        let horiz =
            conditional_output(q, &swapped, &PolarizationQubit::horizontal(), &cfg).unwrap();
        let mirrored = horiz.swapped_modes();
        for n_h in 0..cfg.dim() {
            for n_v in 0..cfg.dim() {
                let diff = (vert.amplitude(n_h, n_v) - mirrored.amplitude(n_h, n_v)).norm();
                assert!(diff < 1e-14);
            }
        }
    }

    #[test]
    fn density_matches_vacuum_value_at_origin() {
        // Per-mode density ||T_0(0)|0>||^2 = 1/pi; the two-mode vacuum
        // teleportation density at the origin is its square.
        let cfg = TruncationConfig::default();
        let q = SqueezingParameter::new(0.0).unwrap();
        let v0 = transfer_applied_to_level(q, c(0.0, 0.0), 0, &cfg).unwrap();
        assert_abs_diff_eq!(v0.norm_sqr(), 1.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(
            v0.norm_sqr() * v0.norm_sqr(),
            1.0 / (PI * PI),
            epsilon = 1e-15
        );
    }

    #[test]
    fn density_invariant_under_global_qubit_phase() {
        let cfg = TruncationConfig::default();
        let q = SqueezingParameter::new(0.6).unwrap();
        let outcome = MeasurementOutcome::new(c(0.4, 0.1), c(-0.2, 0.3)).unwrap();
        let s = 1.0 / 2.0_f64.sqrt();
        let base = PolarizationQubit::new(c(s, 0.0), c(0.0, s)).unwrap();
        let phase = C64::from_polar(1.0, 1.234);
        let rotated = PolarizationQubit::new(phase * base.c_h(), phase * base.c_v()).unwrap();
        let d1 = measurement_density(q, &outcome, &base, &cfg).unwrap();
        let d2 = measurement_density(q, &outcome, &rotated, &cfg).unwrap();
        assert_abs_diff_eq!(d1, d2, epsilon = 1e-15);
    }

    #[test]
    fn transfer_rejects_level_two() {
        let cfg = TruncationConfig::default();
        let q = SqueezingParameter::new(0.5).unwrap();
        let err = transfer_applied_to_level(q, c(0.1, 0.0), 2, &cfg).unwrap_err();
        assert!(matches!(
            err,
            TeleportError::UnsupportedInputLevel { level: 2 }
        ));
    }

    #[test]
    fn sum_form_rejects_beta_beyond_bound() {
        let cfg = TruncationConfig::default();
        let q = SqueezingParameter::new(0.5).unwrap();
        let err = single_mode_transfer(q, c(13.0, 0.0), &cfg).unwrap_err();
        assert!(matches!(
            err,
            TeleportError::Fock(FockError::DisplacementOutOfRange { .. })
        ));
    }
}
