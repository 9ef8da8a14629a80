//! The extended AGM quartet recursion with signed roots.
//!
//! A single run over `(a, g, u, v)` yields the complete integrals K and E,
//! the incomplete integral F (any arcsine branch) and the Jacobi Zeta sum.
//! The sign schedule picks, per iteration, the near or far root for `g`
//! (sigma), for `v` (delta) and for the Zeta term (gamma).
//!
//! Far-root steps drive `a + g` (or `u + v`) toward zero in the following
//! iteration. Taken literally, `(a + g) / 2` then loses most of its digits
//! and the resulting multivalue misses its lattice point. The run therefore
//! carries `a ± g`, `u ± v`, `u - a` and `v - g` alongside the rows and
//! advances them with cancellation-free identities such as
//! `(a + g)/2 - r = (a - g)^2 / (2 (a + g + 2 r))`. In exact arithmetic the
//! rows are the same as repeated [`eagm_step`] calls.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::complex::{
    c, forward_s_root, forward_s_root_from_sums, near_root, near_root_with_sum, principal_sqrt,
    zeta_root_factored, asin_principal, ComplexValue,
};
use crate::error::EagmError;

/// Iterations run by default (the reference driver uses 20).
pub const DEFAULT_MAX_ITER: usize = 20;
/// Default relative convergence tolerance.
pub const DEFAULT_CONV_TOL: f64 = 1e-10;
/// `|a_inf|` below this fraction of `|a_0|` marks the trace ill-conditioned.
pub const COLLAPSE_RATIO: f64 = 1e-6;

/// A `±1` choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// `+1` or `-1` as an integer, for serialization.
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_bit(set: bool) -> Self {
        if set {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    #[inline]
    fn apply(self, z: ComplexValue) -> ComplexValue {
        match self {
            Sign::Plus => z,
            Sign::Minus => -z,
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = i64;

    fn try_from(v: i64) -> Result<Self, i64> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(other),
        }
    }
}

/// Three bitmasks of root signs. Bit `j` set means the far root (`-1`) at
/// iteration `j`; bits past the run length are ignored.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignSchedule {
    pub sigma_mask: u64,
    pub delta_mask: u64,
    pub gamma_mask: u64,
}

impl SignSchedule {
    /// The classical convergent schedule.
    pub const ALL_PLUS: SignSchedule = SignSchedule {
        sigma_mask: 0,
        delta_mask: 0,
        gamma_mask: 0,
    };

    pub fn new(sigma_mask: u64, delta_mask: u64, gamma_mask: u64) -> Self {
        Self {
            sigma_mask,
            delta_mask,
            gamma_mask,
        }
    }

    pub fn sigma(&self, step: usize) -> Sign {
        Sign::from_bit(bit(self.sigma_mask, step))
    }

    pub fn delta(&self, step: usize) -> Sign {
        Sign::from_bit(bit(self.delta_mask, step))
    }

    pub fn gamma(&self, step: usize) -> Sign {
        Sign::from_bit(bit(self.gamma_mask, step))
    }

    /// Index of the last iteration with a free sign, plus one. Zero for
    /// the all-plus schedule.
    pub fn free_bits(&self) -> u32 {
        let all = self.sigma_mask | self.delta_mask | self.gamma_mask;
        u64::BITS - all.leading_zeros()
    }

    pub fn is_all_plus(&self) -> bool {
        self.free_bits() == 0
    }
}

#[inline]
fn bit(mask: u64, step: usize) -> bool {
    step < 64 && (mask >> step) & 1 == 1
}

/// Parameters of one EAGM run.
///
/// Holds the modulus `k`, its square and the complementary modulus `b`
/// together so that `b` given directly is never recovered through
/// `sqrt(1 - k^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EagmParams {
    k: ComplexValue,
    k_squared: ComplexValue,
    b: ComplexValue,
    sinphi: ComplexValue,
    signb: Sign,
    max_iter: usize,
    conv_tol: f64,
}

impl EagmParams {
    /// From the modulus `k`; `b` is the principal `sqrt(1 - k^2)`.
    pub fn from_modulus(k: impl Into<ComplexValue>, sinphi: impl Into<ComplexValue>) -> Self {
        let k = k.into();
        let k_squared = k * k;
        let b = principal_sqrt(c(1.0, 0.0) - k_squared);
        Self::with_all(k, k_squared, b, sinphi.into())
    }

    /// From the complementary modulus `b`, so that `k^2 = 1 - b^2`.
    pub fn from_complement(b: impl Into<ComplexValue>, sinphi: impl Into<ComplexValue>) -> Self {
        let b = b.into();
        let one = c(1.0, 0.0);
        let k_squared = (one - b) * (one + b);
        let k = principal_sqrt(k_squared);
        Self::with_all(k, k_squared, b, sinphi.into())
    }

    fn with_all(k: ComplexValue, k_squared: ComplexValue, b: ComplexValue, sinphi: ComplexValue) -> Self {
        Self {
            k,
            k_squared,
            b,
            sinphi,
            signb: Sign::Plus,
            max_iter: DEFAULT_MAX_ITER,
            conv_tol: DEFAULT_CONV_TOL,
        }
    }

    pub fn with_signb(mut self, signb: Sign) -> Self {
        self.signb = signb;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_conv_tol(mut self, conv_tol: f64) -> Self {
        self.conv_tol = conv_tol;
        self
    }

    pub fn with_sinphi(mut self, sinphi: impl Into<ComplexValue>) -> Self {
        self.sinphi = sinphi.into();
        self
    }

    pub fn k(&self) -> ComplexValue {
        self.k
    }

    pub fn k_squared(&self) -> ComplexValue {
        self.k_squared
    }

    pub fn b(&self) -> ComplexValue {
        self.b
    }

    pub fn sinphi(&self) -> ComplexValue {
        self.sinphi
    }

    pub fn signb(&self) -> Sign {
        self.signb
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    pub fn conv_tol(&self) -> f64 {
        self.conv_tol
    }

    pub fn validate(&self) -> Result<(), EagmError> {
        let finite = |z: ComplexValue| z.re.is_finite() && z.im.is_finite();
        if !finite(self.k) || !finite(self.b) {
            return Err(EagmError::NonFinite("modulus"));
        }
        if !finite(self.sinphi) {
            return Err(EagmError::NonFinite("sinphi"));
        }
        if self.sinphi == c(0.0, 0.0) {
            return Err(EagmError::ZeroSinPhi);
        }
        if self.max_iter == 0 {
            return Err(EagmError::NoIterations);
        }
        if !(self.conv_tol > 0.0 && self.conv_tol.is_finite()) {
            return Err(EagmError::BadTolerance(self.conv_tol));
        }
        Ok(())
    }

    /// Validates that `schedule` has no free bit beyond the run length.
    pub fn check_schedule(&self, schedule: &SignSchedule) -> Result<(), EagmError> {
        let bits = schedule.free_bits();
        if bits as usize > self.max_iter {
            return Err(EagmError::TooManyBits {
                bits,
                max_iter: self.max_iter,
            });
        }
        Ok(())
    }
}

/// One row `(a_n, g_n, u_n, v_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartet {
    pub a: ComplexValue,
    pub g: ComplexValue,
    pub u: ComplexValue,
    pub v: ComplexValue,
}

impl Quartet {
    pub fn new(a: ComplexValue, g: ComplexValue, u: ComplexValue, v: ComplexValue) -> Self {
        Self { a, g, u, v }
    }

    /// `|a^2 - g^2 - (u^2 - v^2)|` relative to the largest squared entry.
    pub fn identity_residual(&self) -> f64 {
        let lhs = self.a * self.a - self.g * self.g;
        let rhs = self.u * self.u - self.v * self.v;
        let scale = [self.a, self.g, self.u, self.v]
            .iter()
            .map(|z| z.norm_sqr())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            (lhs - rhs).norm()
        } else {
            (lhs - rhs).norm() / scale
        }
    }

    fn is_finite(&self) -> bool {
        [self.a, self.g, self.u, self.v]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Outcome of a single literal step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub row: Quartet,
    /// Set when `a * g == 0` or `u + v == 0`.
    pub degenerate: bool,
}

/// One literal EAGM step: arithmetic means plus signed near roots.
pub fn eagm_step(row: &Quartet, sigma: Sign, delta: Sign) -> Step {
    let Quartet { a, g, u, v } = *row;
    let zero = c(0.0, 0.0);
    let degenerate = a * g == zero || u + v == zero;
    let next = Quartet {
        a: (a + g) / 2.0,
        g: sigma.apply(near_root(a, g)),
        u: (u + v) / 2.0,
        v: delta.apply(forward_s_root(u, v, a, g)),
    };
    Step {
        row: next,
        degenerate,
    }
}

/// The row together with cancellation-free sums and differences.
#[derive(Debug, Clone, Copy)]
struct Carry {
    row: Quartet,
    sum_ag: ComplexValue,
    diff_ag: ComplexValue,
    sum_uv: ComplexValue,
    diff_uv: ComplexValue,
    u_minus_a: ComplexValue,
    v_minus_g: ComplexValue,
}

/// Splits `x + y` and `x - y` given `x * y`-free product `p = x^2 - y^2`,
/// computing the cancelling one as `p / other`.
fn split_sum_diff(plus: ComplexValue, minus: ComplexValue, product: ComplexValue) -> (ComplexValue, ComplexValue) {
    if plus.norm_sqr() >= minus.norm_sqr() {
        let m = if plus == c(0.0, 0.0) { minus } else { product / plus };
        (plus, m)
    } else {
        (product / minus, minus)
    }
}

/// `num / den` guarded against a zero denominator, where the quotient is
/// known to be the fallback in that case.
#[inline]
fn quotient_or(num: ComplexValue, den: ComplexValue, fallback: ComplexValue) -> ComplexValue {
    if den == c(0.0, 0.0) {
        fallback
    } else {
        num / den
    }
}

impl Carry {
    fn initial(params: &EagmParams) -> Self {
        let one = c(1.0, 0.0);
        let sinphi = params.sinphi;
        let m = params.k_squared;
        let b = params.signb.apply(params.b);
        let delta_amp = principal_sqrt(one - m * sinphi * sinphi);
        let signed_delta = params.signb.apply(delta_amp);

        let row = Quartet {
            a: one,
            g: b,
            u: one / sinphi,
            v: signed_delta / sinphi,
        };
        // (1 + b)(1 - b) = k^2 and (1 + Δ)(1 - Δ) = k^2 sin^2.
        let (sum_ag, diff_ag) = split_sum_diff(one + b, one - b, m);
        let (sum_uv_raw, diff_uv_raw) =
            split_sum_diff(one + signed_delta, one - signed_delta, m * sinphi * sinphi);
        // Δ^2 - b^2 sin^2 = cos^2 = (1 - sin)(1 + sin).
        let cos_sq = (one - sinphi) * (one + sinphi);
        let (_, delta_minus_b_sin) =
            split_sum_diff(delta_amp + params.b * sinphi, delta_amp - params.b * sinphi, cos_sq);

        Self {
            row,
            sum_ag,
            diff_ag,
            sum_uv: sum_uv_raw / sinphi,
            diff_uv: diff_uv_raw / sinphi,
            u_minus_a: (one - sinphi) / sinphi,
            v_minus_g: params.signb.apply(delta_minus_b_sin / sinphi),
        }
    }

    /// Advances one iteration; returns whether a root degenerated.
    fn advance(&mut self, sigma: Sign, delta: Sign) -> bool {
        let zero = c(0.0, 0.0);
        let Quartet { a, g, .. } = self.row;
        let (s, d, us) = (self.sum_ag, self.diff_ag, self.sum_uv);

        let degenerate = a * g == zero || us == zero;
        let r_near = near_root_with_sum(a, g, s);
        let s_near = forward_s_root_from_sums(us, d);

        // near: (a+g)/2 + r ;  far: (a+g)/2 - r = (a-g)^2 / (4 ((a+g)/2 + r))
        let near_sum = s / 2.0 + r_near;
        let far_sum = quotient_or(d * d, 4.0 * near_sum, s / 2.0 - r_near);
        let near_sum_uv = us / 2.0 + s_near;
        let far_sum_uv = quotient_or(d * d, 4.0 * near_sum_uv, us / 2.0 - s_near);

        let r = sigma.apply(r_near);
        let s_root = delta.apply(s_near);

        // (s^2 - r^2) = ((u+v)^2 - (a+g)^2) / 4
        let t = self.u_minus_a + self.v_minus_g;
        let plus = s_root + r;
        let minus = s_root - r;
        let v_minus_g = if plus.norm_sqr() > minus.norm_sqr() {
            t * (us + s) / (4.0 * plus)
        } else {
            minus
        };

        self.row = Quartet {
            a: s / 2.0,
            g: r,
            u: us / 2.0,
            v: s_root,
        };
        (self.sum_ag, self.diff_ag) = match sigma {
            Sign::Plus => (near_sum, far_sum),
            Sign::Minus => (far_sum, near_sum),
        };
        (self.sum_uv, self.diff_uv) = match delta {
            Sign::Plus => (near_sum_uv, far_sum_uv),
            Sign::Minus => (far_sum_uv, near_sum_uv),
        };
        self.u_minus_a = t / 2.0;
        self.v_minus_g = v_minus_g;
        degenerate
    }
}

/// The full record of one EAGM run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EagmTrace {
    params: EagmParams,
    schedule: SignSchedule,
    rows: Vec<Quartet>,
    s_sum: ComplexValue,
    z_sum: ComplexValue,
    a_inf: ComplexValue,
    u_inf: ComplexValue,
    converged: bool,
    ill_conditioned: bool,
    degenerate: bool,
    zeta_undefined_at: Option<usize>,
}

/// Runs `params.max_iter()` EAGM iterations under `schedule`.
///
/// The S and Zeta terms of row `n` are accumulated before stepping to row
/// `n + 1`, with weights `2^(n-1)` and `2^n`.
pub fn run_eagm(params: &EagmParams, schedule: &SignSchedule) -> Result<EagmTrace, EagmError> {
    params.validate()?;
    let mut carry = Carry::initial(params);
    let mut rows = Vec::with_capacity(params.max_iter + 1);
    rows.push(carry.row);

    let mut s_sum = c(0.0, 0.0);
    let mut z_sum = c(0.0, 0.0);
    let mut weight = 1.0;
    let mut degenerate = false;
    let mut zeta_undefined_at = None;
    let mut finite = carry.row.is_finite();

    for step in 0..params.max_iter {
        let Quartet { a, u, .. } = carry.row;
        s_sum += carry.sum_ag * carry.diff_ag * (weight / 2.0);
        match zeta_root_factored(u, carry.u_minus_a, u + a) {
            Ok(w) => {
                let term = carry.diff_uv * w / u * weight;
                z_sum += schedule.gamma(step).apply(term);
            }
            Err(_) => {
                zeta_undefined_at.get_or_insert(step);
            }
        }

        degenerate |= carry.advance(schedule.sigma(step), schedule.delta(step));
        weight *= 2.0;
        rows.push(carry.row);
        if !carry.row.is_finite() {
            finite = false;
            break;
        }
    }

    let last = carry.row;
    let a_inf = last.a;
    let u_inf = last.u;
    let tol = params.conv_tol * a_inf.norm();
    let converged = finite && carry.diff_ag.norm() < tol && carry.diff_uv.norm() < tol;
    let collapsed = a_inf.norm().is_nan() || a_inf.norm() < COLLAPSE_RATIO;
    let sums_finite = [s_sum, z_sum]
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite());

    Ok(EagmTrace {
        params: *params,
        schedule: *schedule,
        rows,
        s_sum,
        z_sum,
        a_inf,
        u_inf,
        converged,
        ill_conditioned: !finite || !sums_finite || collapsed || degenerate,
        degenerate,
        zeta_undefined_at,
    })
}

impl EagmTrace {
    pub fn params(&self) -> &EagmParams {
        &self.params
    }

    pub fn schedule(&self) -> &SignSchedule {
        &self.schedule
    }

    /// Rows `0..=max_iter` (fewer if an iterate went non-finite).
    pub fn rows(&self) -> &[Quartet] {
        &self.rows
    }

    /// `S = sum 2^(n-1) (a_n^2 - g_n^2)`.
    pub fn s_sum(&self) -> ComplexValue {
        self.s_sum
    }

    pub fn z_sum(&self) -> ComplexValue {
        self.z_sum
    }

    pub fn a_inf(&self) -> ComplexValue {
        self.a_inf
    }

    pub fn u_inf(&self) -> ComplexValue {
        self.u_inf
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Non-finite iterates, a collapsed `a_inf`, or a degenerate root.
    pub fn ill_conditioned(&self) -> bool {
        self.ill_conditioned
    }

    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    /// `pi / (2 a_inf)`.
    pub fn complete_k(&self) -> ComplexValue {
        c(PI / 2.0, 0.0) / self.a_inf
    }

    /// `F` on the given arcsine branch: even `n` gives
    /// `(asin + n pi) / a_inf`, odd `m` gives `(-asin + m pi) / a_inf`.
    pub fn incomplete_f(&self, branch: i64) -> Result<ComplexValue, EagmError> {
        if self.u_inf == c(0.0, 0.0) {
            return Err(EagmError::DegenerateAmplitude);
        }
        let principal = asin_principal(self.a_inf / self.u_inf);
        let shift = c(branch as f64 * PI, 0.0);
        let angle = if branch.rem_euclid(2) == 0 {
            principal + shift
        } else {
            shift - principal
        };
        Ok(angle / self.a_inf)
    }

    /// `K (1 - S)`.
    pub fn complete_e(&self) -> ComplexValue {
        self.complete_k() * (c(1.0, 0.0) - self.s_sum)
    }

    pub fn jacobi_z(&self) -> Result<ComplexValue, EagmError> {
        match self.zeta_undefined_at {
            Some(row) => Err(EagmError::ZetaUndefinedAt(row)),
            None => Ok(self.z_sum),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const K_SQRT_0_9375: f64 = 2.801206084665204;

    fn default_params(sinphi: f64) -> EagmParams {
        EagmParams::from_modulus(0.9375f64.sqrt(), sinphi)
    }

    fn close(a: ComplexValue, b: ComplexValue, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn fixed_point_step() {
        let one = c(1.0, 0.0);
        let q = Quartet::new(one, one, one, one);
        let step = eagm_step(&q, Sign::Plus, Sign::Plus);
        assert_eq!(step.row, q);
        assert!(!step.degenerate);
    }

    #[test]
    fn literal_step_example() {
        let q = Quartet::new(c(1.0, 0.0), c(0.25, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        let next = eagm_step(&q, Sign::Plus, Sign::Plus).row;
        assert!(close(next.a, c(0.625, 0.0), 1e-15));
        assert!(close(next.g, c(0.5, 0.0), 1e-15));
        assert!(close(next.u, c(1.0, 0.0), 1e-15));
        assert!(close(next.v, c((4.0f64 - 0.5625).sqrt() / 2.0, 0.0), 1e-15));
        assert!(next.identity_residual() < 1e-15);

        let flipped = eagm_step(&q, Sign::Minus, Sign::Plus).row;
        assert!(close(flipped.g, c(-0.5, 0.0), 1e-15));
    }

    #[test]
    fn classical_k_at_default_modulus() {
        let trace = run_eagm(&default_params(0.5), &SignSchedule::ALL_PLUS).unwrap();
        assert!(trace.converged());
        assert!(!trace.ill_conditioned());
        assert_relative_eq!(trace.a_inf().re, 0.5607571450719003, max_relative = 1e-13);
        assert_relative_eq!(trace.complete_k().re, K_SQRT_0_9375, max_relative = 1e-13);
        assert_eq!(trace.rows().len(), DEFAULT_MAX_ITER + 1);
    }

    #[test]
    fn sinphi_one_copies_the_agm_columns() {
        let trace = run_eagm(&default_params(1.0), &SignSchedule::ALL_PLUS).unwrap();
        for row in trace.rows() {
            assert!(close(row.u, row.a, 1e-15));
            assert!(close(row.v, row.g, 1e-15));
        }
        assert!(trace.jacobi_z().unwrap().norm() < 1e-10);
        assert_relative_eq!(trace.incomplete_f(0).unwrap().re, trace.complete_k().re, max_relative = 1e-14);
    }

    #[test]
    fn zero_modulus() {
        let trace = run_eagm(&EagmParams::from_modulus(0.0, 0.5), &SignSchedule::ALL_PLUS).unwrap();
        for row in trace.rows() {
            assert_eq!(row.a, c(1.0, 0.0));
            assert_eq!(row.g, c(1.0, 0.0));
        }
        assert_eq!(trace.s_sum(), c(0.0, 0.0));
        assert_relative_eq!(trace.complete_k().re, PI / 2.0);
        assert_relative_eq!(trace.complete_e().re, PI / 2.0);
    }

    #[test]
    fn sigma_zero_flip_offsets_by_four_i_kb() {
        let kb = 1.5962422221317835;
        let trace = run_eagm(&default_params(0.5), &SignSchedule::new(1, 0, 0)).unwrap();
        let k = trace.complete_k();
        assert!(close(k, c(K_SQRT_0_9375, -4.0 * kb), 1e-12), "{k}");
    }

    #[test]
    fn f_branches_differ_by_periods() {
        let trace = run_eagm(&default_params(0.8), &SignSchedule::ALL_PLUS).unwrap();
        let f0 = trace.incomplete_f(0).unwrap();
        let f2 = trace.incomplete_f(2).unwrap();
        let f1 = trace.incomplete_f(1).unwrap();
        let k = trace.complete_k();
        assert!(close(f2 - f0, 4.0 * k, 1e-13));
        assert!(close(f1 + f0, 2.0 * k, 1e-13));
        assert!(close(trace.incomplete_f(-1).unwrap() + f0, -2.0 * k, 1e-13));
    }

    #[test]
    fn printed_zeta_value() {
        let trace = run_eagm(&default_params(0.5), &SignSchedule::ALL_PLUS).unwrap();
        let z = trace.jacobi_z().unwrap();
        assert!((z.re - 0.2920).abs() < 5e-4, "{z}");
        assert!(z.im.abs() < 1e-15);
    }

    #[test]
    fn gamma_only_touches_zeta() {
        let params = default_params(0.8);
        let base = run_eagm(&params, &SignSchedule::new(0b101, 0b11, 0)).unwrap();
        let other = run_eagm(&params, &SignSchedule::new(0b101, 0b11, 0b1101)).unwrap();
        assert_eq!(base.rows(), other.rows());
        assert_eq!(base.s_sum(), other.s_sum());
        assert_ne!(base.z_sum(), other.z_sum());
    }

    #[test]
    fn collapse_is_flagged_not_thrown() {
        // k = 1 makes g_0 = 0.
        let trace = run_eagm(&EagmParams::from_modulus(1.0, 0.5), &SignSchedule::ALL_PLUS).unwrap();
        assert!(trace.ill_conditioned());
        assert!(trace.degenerate());
    }

    #[test]
    fn parameter_errors() {
        let p = default_params(0.0);
        assert_eq!(run_eagm(&p, &SignSchedule::ALL_PLUS).unwrap_err(), EagmError::ZeroSinPhi);
        let p = default_params(0.5).with_max_iter(0);
        assert_eq!(run_eagm(&p, &SignSchedule::ALL_PLUS).unwrap_err(), EagmError::NoIterations);
        let p = default_params(0.5).with_conv_tol(-1.0);
        assert!(matches!(run_eagm(&p, &SignSchedule::ALL_PLUS), Err(EagmError::BadTolerance(_))));
        let p = default_params(0.5).with_max_iter(3);
        assert!(p.check_schedule(&SignSchedule::new(0b1000, 0, 0)).is_err());
        assert!(p.check_schedule(&SignSchedule::new(0b100, 0, 0)).is_ok());
    }

    #[test]
    fn free_bits_counts_latest_iteration() {
        assert_eq!(SignSchedule::ALL_PLUS.free_bits(), 0);
        assert_eq!(SignSchedule::new(1, 0, 0).free_bits(), 1);
        assert_eq!(SignSchedule::new(0b10, 0b1, 0b100).free_bits(), 3);
        assert_eq!(SignSchedule::new(0, 0, 1 << 63).gamma(63), Sign::Minus);
        assert_eq!(SignSchedule::new(u64::MAX, 0, 0).sigma(64), Sign::Plus);
    }
}
