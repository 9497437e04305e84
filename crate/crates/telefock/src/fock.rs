//! Truncated Fock-space primitives: state vectors, dense operators, and
//! numerically stable displacement-operator matrix elements.
//!
//! Everything lives in the photon-number basis `|0>..|D-1>` of a single
//! optical mode (or a pair of modes for [`TwoModeState`]). Displacement
//! matrix elements `<m|D(alpha)|n>` are evaluated from the associated
//! Laguerre closed form with all factorial ratios carried as cumulative
//! log differences, so large indices neither overflow nor lose the small
//! magnitudes to premature underflow.

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Default truncation dimension used across the crate.
pub const DEFAULT_DIM: usize = 40;
/// Default cap on the probability mass allowed at the top Fock level.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-9;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum FockError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("amplitude at index {index} is not finite")]
    NonFiniteAmplitude { index: usize },
    #[error("truncation dimension must be at least 2, got {dim}")]
    DimTooSmall { dim: usize },
    #[error("tail tolerance must lie in [0, 1), got {value}")]
    InvalidTailTolerance { value: f64 },
    #[error(
        "|alpha| = {magnitude:.4} exceeds the displacement bound {bound:.4} for dim {dim}; \
         the displaced state would fall outside the truncated space"
    )]
    DisplacementOutOfRange {
        magnitude: f64,
        bound: f64,
        dim: usize,
    },
    #[error("Fock level {level} does not exist below the truncation dim {dim}")]
    LevelOutOfRange { level: usize, dim: usize },
}

/// Largest displacement magnitude accepted for a given truncation dimension.
///
/// A coherent displacement of magnitude `|alpha|` occupies levels around
/// `|alpha|^2`; beyond `2 sqrt(dim)` the displaced state no longer fits.
pub fn displacement_bound(dim: usize) -> f64 {
    2.0 * (dim as f64).sqrt()
}

/// Truncation configuration: Fock levels `0..dim-1` and the acceptable
/// probability mass at the top level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    dim: usize,
    tail_tolerance: f64,
}

impl TruncationConfig {
    pub fn new(dim: usize, tail_tolerance: f64) -> Result<Self, FockError> {
        if dim < 2 {
            return Err(FockError::DimTooSmall { dim });
        }
        if !tail_tolerance.is_finite() || !(0.0..1.0).contains(&tail_tolerance) {
            return Err(FockError::InvalidTailTolerance {
                value: tail_tolerance,
            });
        }
        Ok(Self {
            dim,
            tail_tolerance,
        })
    }

    pub fn with_dim(dim: usize) -> Result<Self, FockError> {
        Self::new(dim, DEFAULT_TAIL_TOLERANCE)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    pub fn displacement_bound(&self) -> f64 {
        displacement_bound(self.dim)
    }
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            dim: DEFAULT_DIM,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }
}

fn check_finite(amplitudes: &[C64]) -> Result<(), FockError> {
    for (index, a) in amplitudes.iter().enumerate() {
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(FockError::NonFiniteAmplitude { index });
        }
    }
    Ok(())
}

/// Single-mode state as complex amplitudes over photon numbers `0..dim-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<C64>,
}

impl FockVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            amplitudes: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// Basis ket `|level>`.
    pub fn basis(dim: usize, level: usize) -> Result<Self, FockError> {
        if level >= dim {
            return Err(FockError::LevelOutOfRange { level, dim });
        }
        let mut v = Self::zeros(dim);
        v.amplitudes[level] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self, FockError> {
        check_finite(&amplitudes)?;
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, level: usize) -> C64 {
        self.amplitudes[level]
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64, FockError> {
        if self.dim() != other.dim() {
            return Err(FockError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Probability sitting on the top truncation level.
    pub fn tail_probability(&self) -> f64 {
        self.amplitudes.last().map_or(0.0, |a| a.norm_sqr())
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }
}

/// Two-mode (H, V) state on a `dim x dim` amplitude grid, `n_H` major.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    dim: usize,
    amplitudes: Vec<C64>,
}

impl TwoModeState {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            amplitudes: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    /// `|a> (x) |b>` as a grid state.
    pub fn from_product(a: &FockVector, b: &FockVector) -> Result<Self, FockError> {
        if a.dim() != b.dim() {
            return Err(FockError::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        let dim = a.dim();
        let mut amplitudes = Vec::with_capacity(dim * dim);
        for m in 0..dim {
            for n in 0..dim {
                amplitudes.push(a.amplitude(m) * b.amplitude(n));
            }
        }
        Ok(Self { dim, amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitude(&self, n_h: usize, n_v: usize) -> C64 {
        self.amplitudes[n_h * self.dim + n_v]
    }

    pub fn set_amplitude(&mut self, n_h: usize, n_v: usize, value: C64) {
        self.amplitudes[n_h * self.dim + n_v] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Result<C64, FockError> {
        if self.dim != other.dim {
            return Err(FockError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Add `factor * |a> (x) |b>` in place.
    pub fn add_scaled_product(
        &mut self,
        factor: C64,
        a: &FockVector,
        b: &FockVector,
    ) -> Result<(), FockError> {
        if a.dim() != self.dim || b.dim() != self.dim {
            return Err(FockError::DimensionMismatch {
                expected: self.dim,
                got: a.dim().max(b.dim()),
            });
        }
        for m in 0..self.dim {
            let am = factor * a.amplitude(m);
            for n in 0..self.dim {
                self.amplitudes[m * self.dim + n] += am * b.amplitude(n);
            }
        }
        Ok(())
    }

    /// Swap the two mode indices (transpose the grid).
    pub fn swapped_modes(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for m in 0..self.dim {
            for n in 0..self.dim {
                out.amplitudes[n * self.dim + m] = self.amplitudes[m * self.dim + n];
            }
        }
        out
    }
}

/// Dense `dim x dim` operator in the Fock basis, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<C64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        op
    }

    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self, FockError> {
        if entries.len() != dim * dim {
            return Err(FockError::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Standard linear action `op |v>`.
    pub fn apply(&self, v: &FockVector) -> Result<FockVector, FockError> {
        if v.dim() != self.dim {
            return Err(FockError::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (row, slot) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for col in 0..self.dim {
                acc += self.entries[row * self.dim + col] * v.amplitude(col);
            }
            *slot = acc;
        }
        Ok(FockVector { amplitudes: out })
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self, FockError> {
        if self.dim != other.dim {
            return Err(FockError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.entries[i * d + k];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += aik * other.entries[k * d + j];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        out
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn column(&self, col: usize) -> FockVector {
        let amplitudes = (0..self.dim)
            .map(|row| self.entries[row * self.dim + col])
            .collect();
        FockVector { amplitudes }
    }
}

/// Cumulative `ln(n!)` table: `table[n] = ln(n!)`.
fn ln_factorials(len: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(len);
    let mut acc = 0.0;
    table.push(0.0);
    for i in 1..len {
        acc += (i as f64).ln();
        table.push(acc);
    }
    table
}

/// Associated Laguerre values `L_j^{(k)}(x)` for `j = 0..=j_max`, each stored
/// as `(ln|L|, sign)` with the three-term recurrence rescaled whenever the
/// running magnitude threatens f64 range.
fn laguerre_log_scaled(k: usize, j_max: usize, x: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(j_max + 1);
    out.push((0.0, 1.0));
    if j_max == 0 {
        return out;
    }
    let kf = k as f64;
    let mut prev = 0.0_f64;
    let mut cur = 1.0_f64;
    let mut log_scale = 0.0_f64;
    for j in 0..j_max {
        let jf = j as f64;
        let next = ((2.0 * jf + kf + 1.0 - x) * cur - (jf + kf) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        let mag = prev.abs().max(cur.abs());
        if mag > 1e100 {
            prev *= 1e-100;
            cur *= 1e-100;
            log_scale += 100.0 * std::f64::consts::LN_10;
        }
        if cur == 0.0 {
            out.push((f64::NEG_INFINITY, 0.0));
        } else {
            out.push((cur.abs().ln() + log_scale, cur.signum()));
        }
    }
    out
}

/// Turns the accumulated log magnitude and Laguerre sign of an element
/// `<m|D(alpha)|n>` into the complex value, attaching the `alpha` phase.
fn assemble_element(log_mag: f64, sign_l: f64, k: usize, phi: f64, m_ge_n: bool) -> C64 {
    if sign_l == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let mag = log_mag.exp() * sign_l;
    if mag == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let (theta, parity) = if m_ge_n {
        (k as f64 * phi, 1.0)
    } else {
        // (-conj(alpha))^k carries phase e^{-i k phi} and sign (-1)^k.
        (-(k as f64) * phi, if k.is_multiple_of(2) { 1.0 } else { -1.0 })
    };
    C64::from_polar(mag * parity, theta)
}

/// Displacement matrix element `<m|D(alpha)|n>`.
///
/// For `m >= n` this is `sqrt(n!/m!) alpha^{m-n} e^{-|alpha|^2/2}
/// L_n^{(m-n)}(|alpha|^2)`; for `m < n` the conjugate-symmetric counterpart
/// with `(-conj(alpha))^{n-m}`. Stable for indices well beyond 200.
pub fn displaced_fock_amplitude(alpha: C64, m: usize, n: usize) -> C64 {
    assert!(
        alpha.re.is_finite() && alpha.im.is_finite(),
        "displacement amplitude must be finite"
    );
    if alpha == C64::new(0.0, 0.0) {
        return if m == n {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        };
    }
    let j = m.min(n);
    let k = m.max(n) - j;
    let x = alpha.norm_sqr();
    let r = alpha.norm();
    let phi = alpha.arg();
    // 0.5 (ln j! - ln (j+k)!) = -0.5 sum_{i=j+1..j+k} ln i
    let mut ln_ratio = 0.0;
    for i in (j + 1)..=(j + k) {
        ln_ratio -= 0.5 * (i as f64).ln();
    }
    let lag = laguerre_log_scaled(k, j, x);
    let (log_l, sign_l) = lag[j];
    let log_mag = ln_ratio + (k as f64) * r.ln() - x / 2.0 + log_l;
    assemble_element(log_mag, sign_l, k, phi, m >= n)
}

/// Full `dim x dim` displacement operator built from the analytic
/// Laguerre-recurrence matrix elements.
pub fn displacement_operator(alpha: C64, cfg: &TruncationConfig) -> Result<DenseOperator, FockError> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(FockError::NonFiniteAmplitude { index: 0 });
    }
    let dim = cfg.dim();
    let bound = cfg.displacement_bound();
    if alpha.norm() > bound {
        return Err(FockError::DisplacementOutOfRange {
            magnitude: alpha.norm(),
            bound,
            dim,
        });
    }
    if alpha == C64::new(0.0, 0.0) {
        return Ok(DenseOperator::identity(dim));
    }
    let x = alpha.norm_sqr();
    let r = alpha.norm();
    let phi = alpha.arg();
    let lnfact = ln_factorials(dim);
    let mut op = DenseOperator::zeros(dim);
    for k in 0..dim {
        let lag = laguerre_log_scaled(k, dim - 1 - k, x);
        for j in 0..dim - k {
            let (log_l, sign_l) = lag[j];
            let log_mag =
                0.5 * (lnfact[j] - lnfact[j + k]) + (k as f64) * r.ln() - x / 2.0 + log_l;
            op.set_entry(j + k, j, assemble_element(log_mag, sign_l, k, phi, true));
            if k > 0 {
                op.set_entry(j, j + k, assemble_element(log_mag, sign_l, k, phi, false));
            }
        }
    }
    Ok(op)
}

/// Displaced Fock state `D(gamma)|level>` as a truncated column.
///
/// The vacuum column is the coherent-state expansion; higher levels follow
/// from the ladder recurrence
/// `<m|D|n+1> = (sqrt(m) <m-1|D|n> - conj(gamma) <m|D|n>) / sqrt(n+1)`.
pub fn displaced_fock_state(
    gamma: C64,
    level: usize,
    cfg: &TruncationConfig,
) -> Result<FockVector, FockError> {
    if !gamma.re.is_finite() || !gamma.im.is_finite() {
        return Err(FockError::NonFiniteAmplitude { index: 0 });
    }
    let dim = cfg.dim();
    if level >= dim {
        return Err(FockError::LevelOutOfRange { level, dim });
    }
    let bound = cfg.displacement_bound();
    if gamma.norm() > bound {
        return Err(FockError::DisplacementOutOfRange {
            magnitude: gamma.norm(),
            bound,
            dim,
        });
    }
    let mut col = vec![C64::new(0.0, 0.0); dim];
    col[0] = C64::new((-gamma.norm_sqr() / 2.0).exp(), 0.0);
    for m in 1..dim {
        col[m] = col[m - 1] * gamma / (m as f64).sqrt();
    }
    let gbar = gamma.conj();
    for n in 0..level {
        let mut next = vec![C64::new(0.0, 0.0); dim];
        let scale = 1.0 / ((n + 1) as f64).sqrt();
        next[0] = -gbar * col[0] * scale;
        for m in 1..dim {
            next[m] = ((m as f64).sqrt() * col[m - 1] - gbar * col[m]) * scale;
        }
        col = next;
    }
    Ok(FockVector { amplitudes: col })
}
