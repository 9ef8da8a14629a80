//! Ground-truth values independent of the signed recursion.
//!
//! Complete integrals come from the classical convergent AGM run to machine
//! precision; incomplete ones from adaptive Simpson quadrature of the
//! defining integrals. The Legendre and Landen identities are exposed as
//! residuals so callers can check the oracle against itself.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::complex::{c, near_root, principal_sqrt, ComplexValue};
use crate::error::OracleError;

const AGM_MAX_ITER: usize = 64;
/// Absolute tolerance of the quadrature oracle.
pub const QUAD_TOL: f64 = 1e-11;
const QUAD_MAX_DEPTH: u32 = 48;

/// Complete integrals `(K, E)` at complementary modulus `b`, i.e. with
/// `K = pi / (2 AGM(1, b))` and `k^2 = 1 - b^2`.
pub fn complete_from_complement(b: ComplexValue) -> Result<(ComplexValue, ComplexValue), OracleError> {
    if b == c(0.0, 0.0) {
        return Err(OracleError::LogarithmicSingularity);
    }
    let one = c(1.0, 0.0);
    let mut a = one;
    let mut g = b;
    // c_0^2 = k^2, c_{n+1} = c_n^2 / (4 a_{n+1})
    let mut gap = (one - b) * (one + b);
    let mut gap_sq = gap;
    let mut series = gap_sq / 2.0;
    let mut weight = 0.5;
    for _ in 0..AGM_MAX_ITER {
        let a_next = (a + g) / 2.0;
        let g_next = near_root(a, g);
        gap = if a_next == c(0.0, 0.0) {
            (a - g) / 2.0
        } else {
            gap_sq / (4.0 * a_next)
        };
        gap_sq = gap * gap;
        weight *= 2.0;
        series += gap_sq * weight;
        a = a_next;
        g = g_next;
        if gap_sq.norm() * weight <= f64::EPSILON * f64::EPSILON * a.norm_sqr() {
            break;
        }
    }
    let k = c(FRAC_PI_2, 0.0) / a;
    Ok((k, k * (one - series)))
}

/// Complete integrals `(K(k), E(k))`.
pub fn ref_complete(k: ComplexValue) -> Result<(ComplexValue, ComplexValue), OracleError> {
    let one = c(1.0, 0.0);
    let m = k * k;
    if m == one {
        return Err(OracleError::LogarithmicSingularity);
    }
    complete_from_complement(principal_sqrt(one - m))
}

fn check_incomplete_range(phi: f64, k: f64) -> Result<(), OracleError> {
    if !(0.0..=FRAC_PI_2).contains(&phi) {
        return Err(OracleError::OutOfRange(format!("phi = {phi} not in [0, pi/2]")));
    }
    if !(0.0..1.0).contains(&k) {
        return Err(OracleError::OutOfRange(format!("k = {k} not in [0, 1)")));
    }
    Ok(())
}

/// `F(phi, k) = integral_0^phi (1 - k^2 sin^2)^(-1/2)` by quadrature.
pub fn quad_f(phi: f64, k: f64) -> Result<f64, OracleError> {
    check_incomplete_range(phi, k)?;
    let m = k * k;
    Ok(adaptive_simpson(|t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi, QUAD_TOL))
}

/// `E(phi, k) = integral_0^phi (1 - k^2 sin^2)^(1/2)` by quadrature.
pub fn quad_e_inc(phi: f64, k: f64) -> Result<f64, OracleError> {
    check_incomplete_range(phi, k)?;
    let m = k * k;
    Ok(adaptive_simpson(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi, QUAD_TOL))
}

/// Adaptive Simpson with interval bisection and Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    if lo == hi {
        return 0.0;
    }
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    simpson_step(&f, lo, hi, flo, fmid, fhi, whole, tol, QUAD_MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let (lm, rm) = (0.5 * (lo + mid), 0.5 * (mid + hi));
    let (flm, frm) = (f(lm), f(rm));
    let left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    let right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, lo, mid, flo, flm, fmid, left, tol / 2.0, depth - 1)
        + simpson_step(f, mid, hi, fmid, frm, fhi, right, tol / 2.0, depth - 1)
}

/// Residuals of the two Landen product identities at complement `b`:
/// `K(k)K(v) = 2K(b)K(q)` and `K(k)K(w) = 4K(b)K(c)`.
pub fn landen_check(b: f64) -> Result<(f64, f64), OracleError> {
    if !(b > 0.0 && b < 1.0) {
        return Err(OracleError::OutOfRange(format!("b = {b} not in (0, 1)")));
    }
    // q = (1-b)/(1+b) has complement v = 2 sqrt(b)/(1+b); likewise
    // c = (1-v)/(1+v) has complement w = 2 sqrt(v)/(1+v).
    let q = (1.0 - b) / (1.0 + b);
    let v = 2.0 * b.sqrt() / (1.0 + b);
    // 1 - v = (1 - sqrt b)^2 / (1 + b), formed without cancellation
    let one_minus_sqrt_b = (1.0 - b) / (1.0 + b.sqrt());
    let one_minus_v = one_minus_sqrt_b * one_minus_sqrt_b / (1.0 + b);
    let cc = one_minus_v / (1.0 + v);
    let w = 2.0 * v.sqrt() / (1.0 + v);

    // K of a modulus x whose complement is x' is kappa(x').
    let kappa = |complement: f64| -> Result<f64, OracleError> {
        Ok(complete_from_complement(c(complement, 0.0))?.0.re)
    };
    let k_k = kappa(b)?;
    let k_b = kappa(((1.0 - b) * (1.0 + b)).sqrt())?;
    let k_q = kappa(v)?;
    let k_v = kappa(q)?;
    let k_c = kappa(w)?;
    let k_w = kappa(cc)?;

    let r2 = (k_k * k_v - 2.0 * k_b * k_q).abs();
    let r4 = (k_k * k_w - 4.0 * k_b * k_c).abs();
    Ok((r2, r4))
}

/// The restricted Zeta lattice generator `2 pi i / K(k)`.
pub fn q_z(k: f64) -> Result<ComplexValue, OracleError> {
    if !(k > 0.0 && k < 1.0) {
        return Err(OracleError::OutOfRange(format!("k = {k} not in (0, 1)")));
    }
    let (kk, _) = ref_complete(c(k, 0.0))?;
    Ok(c(0.0, 2.0 * PI) / kk)
}

/// Complete integrals at a modulus and its complement, with derived ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSet {
    pub k: ComplexValue,
    pub b: ComplexValue,
    /// `K(k)`
    pub kk: ComplexValue,
    /// `K(b)`
    pub kb: ComplexValue,
    /// `E(k)`
    pub ek: ComplexValue,
    /// `E(b)`
    pub eb: ComplexValue,
    /// `N(b^2) = E(k) / K(k)`
    pub n_b2: ComplexValue,
    /// `N(k^2) = E(b) / K(b)`
    pub n_k2: ComplexValue,
    /// `2 pi i / K(k)`
    pub q_z: ComplexValue,
}

impl ReferenceSet {
    /// From the complementary modulus `b`; `k` is the principal
    /// `sqrt(1 - b^2)`.
    pub fn from_complement(b: ComplexValue) -> Result<Self, OracleError> {
        let one = c(1.0, 0.0);
        let k = principal_sqrt((one - b) * (one + b));
        let (kk, ek) = complete_from_complement(b)?;
        let (kb, eb) = complete_from_complement(k)?;
        Ok(Self {
            k,
            b,
            kk,
            kb,
            ek,
            eb,
            n_b2: ek / kk,
            n_k2: eb / kb,
            q_z: c(0.0, 2.0 * PI) / kk,
        })
    }

    pub fn from_modulus(k: ComplexValue) -> Result<Self, OracleError> {
        let one = c(1.0, 0.0);
        if k * k == one {
            return Err(OracleError::LogarithmicSingularity);
        }
        let mut refs = Self::from_complement(principal_sqrt((one - k) * (one + k)))?;
        refs.k = k;
        Ok(refs)
    }

    /// `|E(k)K(b) + E(b)K(k) - K(k)K(b) - pi/2|`.
    pub fn legendre_residual(&self) -> f64 {
        (self.ek * self.kb + self.eb * self.kk - self.kk * self.kb - c(FRAC_PI_2, 0.0)).norm()
    }
}

/// Quadrature values of the incomplete integrals at a real amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncompleteReference {
    pub phi: f64,
    pub f: f64,
    pub e: f64,
    /// `E(phi) - F(phi) E(k) / K(k)`
    pub z: f64,
}

impl IncompleteReference {
    /// For real `0 <= k < 1` and `0 <= sin(phi) <= 1`.
    pub fn new(sinphi: f64, k: f64) -> Result<Self, OracleError> {
        if !(0.0..=1.0).contains(&sinphi) {
            return Err(OracleError::OutOfRange(format!("sin(phi) = {sinphi} not in [0, 1]")));
        }
        let phi = sinphi.asin();
        let f = quad_f(phi, k)?;
        let e = quad_e_inc(phi, k)?;
        let (kk, ek) = ref_complete(c(k, 0.0))?;
        Ok(Self {
            phi,
            f,
            e,
            z: e - f * (ek / kk).re,
        })
    }
}
