//! The modified AGM on triplets `(x, y, z)`, whose common limit of `x`
//! and `y` is `E(k)/K(k)` when started from `(1, b^2, 0)`.

use serde::{Deserialize, Serialize};

use crate::complex::{c, near_root, ComplexValue};
use crate::eagm::Sign;
use crate::error::OracleError;
use crate::lattice::LatticeSpec;
use crate::oracle::ReferenceSet;

/// `|x - y|` below this (relative to `max(1, |x|)`) counts as converged.
pub const MAGM_CONV_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagmTriplet {
    pub x: ComplexValue,
    pub y: ComplexValue,
    pub z: ComplexValue,
}

impl MagmTriplet {
    pub fn new(x: ComplexValue, y: ComplexValue, z: ComplexValue) -> Self {
        Self { x, y, z }
    }

    /// `(1, b^2, 0)`.
    pub fn start(b: f64) -> Self {
        Self::new(c(1.0, 0.0), c(b * b, 0.0), c(0.0, 0.0))
    }

    fn is_finite(&self) -> bool {
        [self.x, self.y, self.z]
            .iter()
            .all(|w| w.re.is_finite() && w.im.is_finite())
    }
}

/// `x' = (x + y)/2`, `y' = z + sign sqrt((x - z)(y - z))`, `z' = 2z - y'`,
/// the root being the one near `((x - z) + (y - z)) / 2`.
pub fn magm_step(t: &MagmTriplet, sign: Sign) -> MagmTriplet {
    let root = near_root(t.x - t.z, t.y - t.z);
    let y = t.z + root * sign.factor();
    MagmTriplet {
        x: (t.x + t.y) / 2.0,
        y,
        z: 2.0 * t.z - y,
    }
}

/// Rows `0..=rows`, with the far root at every step whose bit is set in
/// `sign_mask`. Stops early on a non-finite iterate.
///
/// `z` roughly doubles every step, so `x` and `y` recovered from `z` lose
/// digits. The rows are produced from the translation-free quantities
/// `e = x - z`, `d = y - z` and `e - d`, with `x` advanced as
/// `x - (e - d)/2`; the result equals repeated [`magm_step`] calls in
/// exact arithmetic.
pub fn magm_rows(start: MagmTriplet, sign_mask: u64, rows: usize) -> Vec<MagmTriplet> {
    let mut out = Vec::with_capacity(rows + 1);
    out.push(start);
    let MagmTriplet { mut x, y, mut z } = start;
    let mut e = x - z;
    let mut d = y - z;
    let mut diff = x - y;
    for step in 0..rows {
        let far = step < 64 && (sign_mask >> step) & 1 == 1;
        let r_near = near_root(e, d);
        let half_sum = (e + d) / 2.0;
        let plus = half_sum + r_near;
        // (e+d)/2 - r = (e-d)^2 / (4 ((e+d)/2 + r))
        let minus = if plus == c(0.0, 0.0) {
            half_sum - r_near
        } else {
            diff * diff / (4.0 * plus)
        };
        let r = if far { -r_near } else { r_near };

        x -= diff / 2.0;
        z -= r;
        (e, diff) = if far { (minus, plus) } else { (plus, minus) };
        d = 2.0 * r;

        let t = MagmTriplet::new(x, z + d, z);
        out.push(t);
        if !t.is_finite() {
            break;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub b: f64,
    pub rows: usize,
    /// `max |x_n - (1 - S_n)|` over `n <= rows`.
    pub max_row_deviation: f64,
    pub limit: ComplexValue,
    /// `|x_rows - E(k)/K(k)|` against the oracle.
    pub limit_error: f64,
}

fn check_b(b: f64) -> Result<(), OracleError> {
    if b > 0.0 && b < 1.0 {
        Ok(())
    } else {
        Err(OracleError::OutOfRange(format!("b = {b} not in (0, 1)")))
    }
}

/// Runs AGM(1, b) with partial sums `S_n = sum_{i<n} 2^(i-1)(a_i^2 - g_i^2)`
/// beside MAGM(1, b^2, 0), comparing `x_n` with `1 - S_n` row by row.
pub fn magm_equivalence(b: f64, rows: usize) -> Result<EquivalenceReport, OracleError> {
    check_b(b)?;
    let refs = ReferenceSet::from_complement(c(b, 0.0))?;
    let magm = magm_rows(MagmTriplet::start(b), 0, rows);

    // gap c_n with c_n^2 = a_n^2 - g_n^2, advanced as c_{n+1} = c_n^2 / (4 a_{n+1})
    let (mut a, mut g) = (c(1.0, 0.0), c(b, 0.0));
    let mut gap = c(((1.0 - b) * (1.0 + b)).sqrt(), 0.0);
    let mut partial = c(0.0, 0.0);
    let mut weight = 0.5;
    let mut max_dev: f64 = 0.0;
    for triplet in &magm {
        let series = c(1.0, 0.0) - partial;
        max_dev = max_dev.max((triplet.x - series).norm());
        partial += gap * gap * weight;
        weight *= 2.0;
        (a, g) = ((a + g) / 2.0, near_root(a, g));
        gap = gap * gap / (4.0 * a);
    }
    let limit = magm.last().map(|t| t.x).unwrap_or(c(1.0, 0.0));
    Ok(EquivalenceReport {
        b,
        rows,
        max_row_deviation: max_dev,
        limit,
        limit_error: (limit - refs.n_b2).norm(),
    })
}

/// What happened to one sign mask.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativeOutcome {
    pub sign_mask: u64,
    pub converged: bool,
    /// Non-finite iterates or no convergence within the row budget.
    pub divergent: bool,
    pub limit: Option<ComplexValue>,
    /// Distance of `limit * K(k)` to the nearest point of the E lattice.
    pub lattice_distance: Option<f64>,
}

/// Runs MAGM with far roots at the masked steps and records the outcome.
pub fn magm_negative_experiment(b: f64, sign_mask: u64, rows: usize) -> Result<NegativeOutcome, OracleError> {
    check_b(b)?;
    let refs = ReferenceSet::from_complement(c(b, 0.0))?;
    let trace = magm_rows(MagmTriplet::start(b), sign_mask, rows);
    let last = trace.last().copied().unwrap_or(MagmTriplet::start(b));
    let finite = trace.len() == rows + 1 && last.is_finite();
    let converged = finite && (last.x - last.y).norm() <= MAGM_CONV_TOL * last.x.norm().max(1.0);

    let lattice_distance = if converged {
        let i = c(0.0, 1.0);
        LatticeSpec::new(refs.ek, 4.0 * refs.ek, 4.0 * i * (refs.kb - refs.eb))
            .ok()
            .map(|spec| spec.locate(last.x * refs.kk, c(0.0, 0.0)).2)
    } else {
        None
    };
    Ok(NegativeOutcome {
        sign_mask,
        converged,
        divergent: !converged,
        limit: converged.then_some(last.x),
        lattice_distance,
    })
}

/// [`magm_negative_experiment`] for every mask of `width` bits.
pub fn magm_negative_sweep(b: f64, width: u32, rows: usize) -> Result<Vec<NegativeOutcome>, OracleError> {
    (0..1u64 << width.min(20))
        .map(|mask| magm_negative_experiment(b, mask, rows))
        .collect()
}
