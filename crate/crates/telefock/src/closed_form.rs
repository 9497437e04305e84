//! Analytic output statistics of the polarization-qubit teleportation:
//! photon-number distributions, transfer fidelities, cloning fidelities and
//! their bounds. These are the fast path for parameter sweeps and the
//! reference the numeric quadrature is checked against.
//!
//! All functions accept `0 <= q <= 1`; the `q = 1` endpoint is handled by
//! explicit limit branches instead of evaluating the ratio `(1+q)/(1-q)`.

/// A fidelity value on the sweep curve, constrained to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityCurvePoint {
    pub q: f64,
    pub value: f64,
}

impl FidelityCurvePoint {
    pub fn new(q: f64, value: f64) -> Self {
        assert!(
            (-1e-12..=1.0 + 1e-12).contains(&value),
            "fidelity {value} at q = {q} escapes [0, 1]"
        );
        Self { q, value }
    }

    pub fn f_average(q: f64) -> Self {
        Self::new(q, f_average(q))
    }

    pub fn f_one(q: f64) -> Self {
        Self::new(q, f_one(q))
    }

    pub fn f_clone(q: f64, n: usize) -> Self {
        Self::new(q, f_clone(q, n))
    }
}

fn check_q(q: f64) {
    assert!(
        q.is_finite() && (0.0..=1.0).contains(&q),
        "squeezing parameter {q} outside [0, 1]"
    );
}

/// `((1+q)/(1-q))^2`, the ratio entering every conditional fidelity.
fn ratio_sqr(q: f64) -> f64 {
    let r = (1.0 + q) / (1.0 - q);
    r * r
}

/// Output photon-number distribution for a single-photon input:
/// `p^1_q(n) = (1+q)/2 ((1-q)/2)^{n+1} (1 + n ((1+q)/(1-q))^2)`.
pub fn p1(q: f64, n: usize) -> f64 {
    check_q(q);
    if q == 1.0 {
        return if n == 1 { 1.0 } else { 0.0 };
    }
    let w = (1.0 - q) / 2.0;
    (1.0 + q) / 2.0 * w.powi(n as i32 + 1) * (1.0 + n as f64 * ratio_sqr(q))
}

/// Thermal output distribution for a vacuum input:
/// `p^0_q(n) = (1+q)/2 ((1-q)/2)^n`.
pub fn p0(q: f64, n: usize) -> f64 {
    check_q(q);
    if q == 1.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (1.0 + q) / 2.0 * ((1.0 - q) / 2.0).powi(n as i32)
}

/// Joint probability of `n_H` signal-polarized and `n_V` orthogonal photons;
/// identical to `p1(q, n_H) * p0(q, n_V)`.
pub fn joint_p(q: f64, n_h: usize, n_v: usize) -> f64 {
    check_q(q);
    if q == 1.0 {
        return if n_h == 1 && n_v == 0 { 1.0 } else { 0.0 };
    }
    let big_n = (n_h + n_v) as i32;
    let a = (1.0 + q) / 2.0;
    let w = (1.0 - q) / 2.0;
    a * a * w.powi(big_n + 1) * (1.0 + n_h as f64 * ratio_sqr(q))
}

/// Probability of finding `N` photons in total in the output.
pub fn total_p(q: f64, big_n: usize) -> f64 {
    check_q(q);
    if q == 1.0 {
        return if big_n == 1 { 1.0 } else { 0.0 };
    }
    let a = (1.0 + q) / 2.0;
    let w = (1.0 - q) / 2.0;
    (big_n as f64 + 1.0)
        * a
        * a
        * w.powi(big_n as i32 + 1)
        * (1.0 + big_n as f64 / 2.0 * ratio_sqr(q))
}

/// Average polarization fidelity of all output photons, `2/(3-q)`.
pub fn f_average(q: f64) -> f64 {
    check_q(q);
    2.0 / (3.0 - q)
}

/// Post-selected single-photon fidelity,
/// `2(1+q^2) / (2(1+q^2) + (1-q)^2)`.
pub fn f_one(q: f64) -> f64 {
    check_q(q);
    let num = 2.0 * (1.0 + q * q);
    num / (num + (1.0 - q) * (1.0 - q))
}

/// Cloning fidelity of the `N`-photon output,
/// `2/3 + (r^2 - 1)/(3 N r^2 + 6)` with `r = (1+q)/(1-q)`;
/// at `q = 1` the limit `(2N+1)/(3N)`.
pub fn f_clone(q: f64, big_n: usize) -> f64 {
    check_q(q);
    assert!(big_n >= 1, "cloning fidelity needs at least one output photon");
    let nf = big_n as f64;
    if q == 1.0 {
        return (2.0 * nf + 1.0) / (3.0 * nf);
    }
    let r2 = ratio_sqr(q);
    2.0 / 3.0 + (r2 - 1.0) / (3.0 * nf * r2 + 6.0)
}

/// No-cloning window for `N` clones of one qubit:
/// `2/3 <= F_N <= (2N+1)/(3N)`.
pub fn f_clone_bounds(big_n: usize) -> (f64, f64) {
    assert!(big_n >= 1);
    let nf = big_n as f64;
    (2.0 / 3.0, (2.0 * nf + 1.0) / (3.0 * nf))
}

/// Mean output photon numbers `(<n_H>, <n_V>) = (2/(1+q), (1-q)/(1+q))`.
pub fn mean_photon_numbers(q: f64) -> (f64, f64) {
    check_q(q);
    (2.0 / (1.0 + q), (1.0 - q) / (1.0 + q))
}
