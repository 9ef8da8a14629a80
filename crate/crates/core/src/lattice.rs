//! Predicted loci of multivalue clouds and residual fits against them.
//!
//! Each function kind has a locus built only from oracle values: a 2-D
//! lattice (K, F, E), a 1-D lattice (restricted Zeta) or a circle centred
//! on the real axis (N = E/K).

use serde::{Deserialize, Serialize};

use crate::complex::{c, ComplexValue};
use crate::enumerate::{FunctionKind, MultivaluePoint};
use crate::error::LatticeError;
use crate::oracle::{IncompleteReference, ReferenceSet};

/// Default pass threshold on clouds from 20-iteration traces.
pub const DEFAULT_FIT_TOL: f64 = 1e-6;

/// `origin + coset + m gen1 + n gen2`. A zero `gen2` makes it 1-D.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub origin: ComplexValue,
    pub gen1: ComplexValue,
    pub gen2: ComplexValue,
    pub cosets: Vec<ComplexValue>,
}

impl LatticeSpec {
    pub fn new(origin: ComplexValue, gen1: ComplexValue, gen2: ComplexValue) -> Result<Self, LatticeError> {
        let spec = Self {
            origin,
            gen1,
            gen2,
            cosets: vec![c(0.0, 0.0)],
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_cosets(mut self, cosets: Vec<ComplexValue>) -> Self {
        self.cosets = cosets;
        self
    }

    pub fn is_one_dimensional(&self) -> bool {
        self.gen2 == c(0.0, 0.0)
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        let finite = |z: &ComplexValue| z.re.is_finite() && z.im.is_finite();
        if ![self.origin, self.gen1, self.gen2].iter().all(finite) || !self.cosets.iter().all(finite) {
            return Err(LatticeError::DegenerateRefs("non-finite lattice data"));
        }
        if self.gen1 == c(0.0, 0.0) {
            return Err(LatticeError::DegenerateRefs("zero generator"));
        }
        if !self.is_one_dimensional() && (self.gen2 / self.gen1).im == 0.0 {
            return Err(LatticeError::DegenerateRefs("parallel generators"));
        }
        if self.cosets.is_empty() {
            return Err(LatticeError::DegenerateRefs("empty coset list"));
        }
        Ok(())
    }

    /// Nearest lattice point to `value` within one coset: `(m, n, residual)`.
    pub fn locate(&self, value: ComplexValue, coset: ComplexValue) -> (i64, i64, f64) {
        let d = value - self.origin - coset;
        if self.is_one_dimensional() {
            let m = (d / self.gen1).re.round();
            return (m as i64, 0, (d - self.gen1 * m).norm());
        }
        // [g1.re g2.re; g1.im g2.im] (m, n) = (d.re, d.im)
        let (g1, g2) = (self.gen1, self.gen2);
        let det = g1.re * g2.im - g2.re * g1.im;
        let m = ((d.re * g2.im - g2.re * d.im) / det).round();
        let n = ((g1.re * d.im - d.re * g1.im) / det).round();
        (m as i64, n as i64, (d - g1 * m - g2 * n).norm())
    }
}

/// Circle centred on the real axis through `x1` and `x2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleSpec {
    pub x1: f64,
    pub x2: f64,
}

impl CircleSpec {
    pub fn through(x1: f64, x2: f64) -> Result<Self, LatticeError> {
        if !(x1.is_finite() && x2.is_finite()) || x1 == x2 {
            return Err(LatticeError::DegenerateRefs("circle needs two distinct finite crossings"));
        }
        Ok(Self { x1, x2 })
    }

    pub fn center(&self) -> f64 {
        (self.x1 + self.x2) / 2.0
    }

    pub fn radius(&self) -> f64 {
        (self.x2 - self.x1).abs() / 2.0
    }

    pub fn residual(&self, value: ComplexValue) -> f64 {
        ((value - c(self.center(), 0.0)).norm() - self.radius()).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Locus {
    Lattice(LatticeSpec),
    Circle(CircleSpec),
}

/// Predicts where a cloud of the given kind should lie.
///
/// `sinphi` is only read for F and restricted Zeta, whose origins come
/// from quadrature. `both_signs` selects the denser K lattice of the
/// combined `±b` sweep.
pub fn predict_locus(
    kind: FunctionKind,
    refs: &ReferenceSet,
    sinphi: f64,
    both_signs: bool,
) -> Result<Locus, LatticeError> {
    let finite = [refs.kk, refs.kb, refs.ek, refs.eb]
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite || refs.kk == c(0.0, 0.0) || refs.kb == c(0.0, 0.0) {
        return Err(LatticeError::DegenerateRefs("complete integrals not finite"));
    }
    let i = c(0.0, 1.0);
    let incomplete = || -> Result<IncompleteReference, LatticeError> {
        if refs.k.im != 0.0 {
            return Err(LatticeError::DegenerateRefs("incomplete oracle needs a real modulus"));
        }
        Ok(IncompleteReference::new(sinphi, refs.k.re)?)
    };
    let locus = match kind {
        FunctionKind::K => {
            let vertical = if both_signs { 2.0 } else { 4.0 };
            Locus::Lattice(LatticeSpec::new(refs.kk, 4.0 * refs.kk, vertical * i * refs.kb)?)
        }
        FunctionKind::F => {
            let f = c(incomplete()?.f, 0.0);
            // second coset: the pi - asin branch, 2K - F relative to F
            Locus::Lattice(
                LatticeSpec::new(f, 4.0 * refs.kk, 4.0 * i * refs.kb)?
                    .with_cosets(vec![c(0.0, 0.0), 2.0 * refs.kk - 2.0 * f]),
            )
        }
        FunctionKind::E => Locus::Lattice(LatticeSpec::new(
            refs.ek,
            4.0 * refs.ek,
            4.0 * i * (refs.kb - refs.eb),
        )?),
        FunctionKind::N => Locus::Circle(CircleSpec::through(1.0 - refs.n_k2.re, refs.n_b2.re)?),
        FunctionKind::ZRestricted => {
            let z = c(incomplete()?.z, 0.0);
            Locus::Lattice(LatticeSpec::new(z, refs.q_z, c(0.0, 0.0))?)
        }
        FunctionKind::Z => return Err(LatticeError::NoLocus("the unrestricted Zeta cloud")),
    };
    Ok(locus)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointFit {
    pub index: usize,
    pub m: i64,
    pub n: i64,
    pub coset: usize,
    pub residual: f64,
    pub ill_conditioned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub points: Vec<PointFit>,
    /// Largest residual among well-conditioned points.
    pub max_residual: f64,
    pub worst_point: Option<usize>,
    pub flagged_excluded: usize,
    pub tol: f64,
    pub pass: bool,
}

impl FitReport {
    /// Sorted `(m, n)` indices of the well-conditioned points.
    pub fn index_multiset(&self) -> Vec<(i64, i64)> {
        let mut idx: Vec<_> = self
            .points
            .iter()
            .filter(|p| !p.ill_conditioned)
            .map(|p| (p.m, p.n))
            .collect();
        idx.sort_unstable();
        idx
    }
}

/// Residual of each point against the locus; passes iff the largest
/// residual over well-conditioned points is below `tol`.
pub fn fit_cloud(points: &[MultivaluePoint], locus: &Locus, tol: f64) -> FitReport {
    fit_values(
        points.iter().map(|p| (p.value, p.ill_conditioned)),
        locus,
        tol,
    )
}

/// [`fit_cloud`] over bare `(value, ill_conditioned)` pairs.
pub fn fit_values(
    values: impl IntoIterator<Item = (ComplexValue, bool)>,
    locus: &Locus,
    tol: f64,
) -> FitReport {
    let mut fits = Vec::new();
    for (index, (value, ill_conditioned)) in values.into_iter().enumerate() {
        let (m, n, coset, residual) = match locus {
            Locus::Circle(circle) => (0, 0, 0, circle.residual(value)),
            Locus::Lattice(spec) => spec
                .cosets
                .iter()
                .enumerate()
                .map(|(ci, &offset)| {
                    let (m, n, r) = spec.locate(value, offset);
                    (m, n, ci, r)
                })
                .min_by(|x, y| x.3.total_cmp(&y.3))
                .unwrap_or((0, 0, 0, f64::INFINITY)),
        };
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        fits.push(PointFit {
            index,
            m,
            n,
            coset,
            residual,
            ill_conditioned,
        });
    }

    let mut max_residual = 0.0;
    let mut worst_point = None;
    for p in fits.iter().filter(|p| !p.ill_conditioned) {
        if worst_point.is_none() || p.residual > max_residual {
            max_residual = p.residual;
            worst_point = Some(p.index);
        }
    }
    let flagged_excluded = fits.iter().filter(|p| p.ill_conditioned).count();
    FitReport {
        points: fits,
        max_residual,
        worst_point,
        flagged_excluded,
        tol,
        pass: max_residual < tol,
    }
}

/// `(alpha Re p + i beta Im p) / p`: the point-wise ratio of an
/// anisotropically scaled point to the original. Lies on the circle
/// through `alpha` and `beta` for every `p != 0`.
pub fn anisotropic_ratio(p: ComplexValue, alpha: f64, beta: f64) -> ComplexValue {
    c(alpha * p.re, beta * p.im) / p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eagm::{run_eagm, EagmParams, SignSchedule};

    fn refs() -> ReferenceSet {
        ReferenceSet::from_complement(c(0.25, 0.0)).unwrap()
    }

    #[test]
    fn k_generators() {
        let r = refs();
        let Locus::Lattice(spec) = predict_locus(FunctionKind::K, &r, 0.5, false).unwrap() else {
            panic!("expected lattice");
        };
        assert!((spec.gen1.re - 4.0 * 2.801206084665204).abs() < 1e-12);
        assert!((spec.gen2.im - 4.0 * 1.5962422221317836).abs() < 1e-12);
        let Locus::Lattice(both) = predict_locus(FunctionKind::K, &r, 0.5, true).unwrap() else {
            panic!("expected lattice");
        };
        assert!((both.gen2.im - 2.0 * 1.5962422221317836).abs() < 1e-12);
    }

    #[test]
    fn n_circle_crossings() {
        let Locus::Circle(circle) = predict_locus(FunctionKind::N, &refs(), 0.5, false).unwrap() else {
            panic!("expected circle");
        };
        // 1 - E(b)/K(b) and E(k)/K(k) from independent values.
        assert!((circle.x1 - 0.03150208992665482).abs() < 1e-13);
        assert!((circle.x2 - 0.38280036865719014).abs() < 1e-13);
    }

    #[test]
    fn restricted_zeta_unit() {
        let r = ReferenceSet::from_modulus(c(0.9375f64.sqrt(), 0.0)).unwrap();
        let Locus::Lattice(spec) = predict_locus(FunctionKind::ZRestricted, &r, 0.8, false).unwrap() else {
            panic!("expected lattice");
        };
        assert!(spec.is_one_dimensional());
        assert!((spec.gen1.im - 2.2430).abs() < 5e-5);
        assert!(predict_locus(FunctionKind::Z, &r, 0.8, false).is_err());
    }

    #[test]
    fn all_plus_and_first_flip_indices() {
        let r = refs();
        let locus = predict_locus(FunctionKind::K, &r, 0.5, false).unwrap();
        let params = EagmParams::from_complement(0.25, 0.5);
        let k0 = run_eagm(&params, &SignSchedule::ALL_PLUS).unwrap().complete_k();
        let k1 = run_eagm(&params, &SignSchedule::new(1, 0, 0)).unwrap().complete_k();
        let report = fit_values([(k0, false), (k1, false)], &locus, DEFAULT_FIT_TOL);
        assert_eq!((report.points[0].m, report.points[0].n), (0, 0));
        assert!(report.points[0].residual < 1e-12);
        assert_eq!(report.points[1].m, 0);
        assert_eq!(report.points[1].n.abs(), 1);
        assert!(report.pass);
    }

    #[test]
    fn flagged_points_are_listed_but_excluded() {
        let locus = Locus::Lattice(LatticeSpec::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)).unwrap());
        let report = fit_values([(c(1.0, 1.0), false), (c(0.5, 0.5), true)], &locus, 1e-6);
        assert_eq!(report.points.len(), 2);
        assert_eq!(report.flagged_excluded, 1);
        assert!(report.pass);
        assert!(report.points[1].residual > 0.7);
        let report = fit_values([(c(f64::NAN, 0.0), false)], &locus, 1e-6);
        assert!(!report.pass);
    }

    #[test]
    fn lattice_validation() {
        assert!(LatticeSpec::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)).is_err());
        assert!(LatticeSpec::new(c(0.0, 0.0), c(1.0, 1.0), c(2.0, 2.0)).is_err());
        assert!(LatticeSpec::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).is_ok());
        assert!(CircleSpec::through(0.5, 0.5).is_err());
    }

    #[test]
    fn anisotropic_ratio_on_circle() {
        let circle = CircleSpec::through(0.3, 0.8).unwrap();
        for p in [c(1.0, 2.0), c(-3.0, 0.1), c(0.0, -5.0), c(7.0, 0.0)] {
            assert!(circle.residual(anisotropic_ratio(p, 0.3, 0.8)) < 1e-15);
        }
    }
}
