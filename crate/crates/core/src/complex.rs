//! Complex scalars and square-root branch selection.
//!
//! Every square root taken by the recursions goes through one of the
//! selectors below. Each selector fixes which of the two roots `±w` is the
//! "unsigned" one; sign schedules then flip that choice per iteration.

use num_complex::Complex64;

use crate::error::EagmError;

/// The universal scalar: an IEEE double-precision complex number.
pub type ComplexValue = Complex64;

/// Shorthand constructor.
#[inline]
pub fn c(re: f64, im: f64) -> ComplexValue {
    Complex64::new(re, im)
}

/// Principal square root: `Re(w) >= 0`, and `Im(w) >= 0` when `Re(w) == 0`.
///
/// Uses the cancellation-free half-angle form rather than polar
/// coordinates, so `w * w` reproduces `z` to a few ulp. Negative reals map
/// to the positive imaginary axis regardless of the sign of a zero
/// imaginary part.
pub fn principal_sqrt(z: ComplexValue) -> ComplexValue {
    let (x, y) = (z.re, z.im);
    if x == 0.0 && y == 0.0 {
        return c(0.0, 0.0);
    }
    let t = ((x.abs() + x.hypot(y)) / 2.0).sqrt();
    if x >= 0.0 {
        c(t, y / (2.0 * t))
    } else {
        // y == -0.0 counts as a tie and goes to the upper half plane.
        let im = if y >= 0.0 { t } else { -t };
        c(y.abs() / (2.0 * t), im)
    }
}

/// Orients `w` so that `Re(w / reference) >= 0`.
///
/// Exact zero of the tested real part (or a zero reference) is a tie; ties
/// keep `w` as given.
#[inline]
fn orient_towards(w: ComplexValue, reference: ComplexValue) -> ComplexValue {
    if reference == c(0.0, 0.0) {
        return w;
    }
    if (w / reference).re >= 0.0 {
        w
    } else {
        -w
    }
}

/// Root of `a * g` nearer the arithmetic mean `(a + g) / 2`.
///
/// When both roots are equally near, including `a + g == 0`, the root with
/// positive imaginary part wins. `a * g == 0` returns zero; the caller is
/// responsible for flagging the collapse.
pub fn near_root(a: ComplexValue, g: ComplexValue) -> ComplexValue {
    near_root_with_sum(a, g, a + g)
}

/// [`near_root`] oriented against a separately carried `a + g`.
pub fn near_root_with_sum(a: ComplexValue, g: ComplexValue, sum: ComplexValue) -> ComplexValue {
    let product = a * g;
    if product == c(0.0, 0.0) {
        return c(0.0, 0.0);
    }
    let w = principal_sqrt(product);
    let test = if sum == c(0.0, 0.0) { 0.0 } else { (w / sum).re };
    if test > 0.0 {
        w
    } else if test < 0.0 {
        -w
    } else if w.im >= 0.0 {
        w
    } else {
        -w
    }
}

/// `sqrt((u + v)^2 - (a - g)^2) / 2`, oriented so `Re(s / (u + v)) >= 0`.
///
/// Ties and `u + v == 0` keep the principal value.
pub fn forward_s_root(
    u: ComplexValue,
    v: ComplexValue,
    a: ComplexValue,
    g: ComplexValue,
) -> ComplexValue {
    forward_s_root_from_sums(u + v, a - g)
}

/// [`forward_s_root`] given the sum `u + v` and difference `a - g`
/// directly, for callers that carry those without cancellation.
pub fn forward_s_root_from_sums(sum_uv: ComplexValue, diff_ag: ComplexValue) -> ComplexValue {
    let radicand = (sum_uv - diff_ag) * (sum_uv + diff_ag);
    orient_towards(principal_sqrt(radicand) / 2.0, sum_uv)
}

/// `sqrt(u^2 - a^2)` taken as the root near `u`, i.e. `Re(w / u) >= 0`.
pub fn zeta_root(u: ComplexValue, a: ComplexValue) -> Result<ComplexValue, EagmError> {
    zeta_root_factored(u, u - a, u + a)
}

/// [`zeta_root`] from the factors `u - a` and `u + a`.
pub fn zeta_root_factored(
    u: ComplexValue,
    u_minus_a: ComplexValue,
    u_plus_a: ComplexValue,
) -> Result<ComplexValue, EagmError> {
    if u == c(0.0, 0.0) {
        return Err(EagmError::ZetaRootUndefined);
    }
    Ok(orient_towards(principal_sqrt(u_minus_a * u_plus_a), u))
}

/// Principal complex arcsine, `Re` in `[-pi/2, pi/2]`.
///
/// Real arguments beyond `±1` sit on the branch cut. They follow
/// counter-clockwise continuity: `x > 1` joins the lower half plane and
/// `x < -1` the upper one, whatever the sign of a zero imaginary part.
pub fn asin_principal(z: ComplexValue) -> ComplexValue {
    if z.im == 0.0 {
        let x = z.re;
        if x.abs() <= 1.0 {
            return c(x.asin(), 0.0);
        }
        let half_pi = std::f64::consts::FRAC_PI_2.copysign(x);
        return c(half_pi, -x.abs().acosh().copysign(x));
    }
    // Kahan's form; the log form cancels for large |z| in half the plane.
    let one = c(1.0, 0.0);
    let (p, q) = (principal_sqrt(one - z), principal_sqrt(one + z));
    c(z.re.atan2((p * q).re), (p.conj() * q).im.asinh())
}
