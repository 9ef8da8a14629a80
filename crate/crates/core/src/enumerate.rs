//! Sweeps over sign schedules producing multivalue point clouds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::{c, ComplexValue};
use crate::eagm::{run_eagm, EagmParams, EagmTrace, Sign, SignSchedule};
use crate::error::EagmError;

/// Relative distance below which two points count as the same multivalue.
pub const DUPLICATE_TOL: f64 = 1e-9;
/// Largest total number of free bits a single request may enumerate.
pub const MAX_TOTAL_BITS: u32 = 24;

/// Which function value a sweep extracts from each trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    K,
    F,
    E,
    N,
    Z,
    ZRestricted,
}

impl FunctionKind {
    pub fn label(self) -> &'static str {
        match self {
            FunctionKind::K => "K",
            FunctionKind::F => "F",
            FunctionKind::E => "E",
            FunctionKind::N => "N",
            FunctionKind::Z => "Z",
            FunctionKind::ZRestricted => "Z_restricted",
        }
    }

    /// The value this kind reads off a finished trace.
    pub fn extract(self, trace: &EagmTrace) -> Result<ComplexValue, EagmError> {
        match self {
            FunctionKind::K => Ok(trace.complete_k()),
            FunctionKind::F => trace.incomplete_f(0),
            FunctionKind::E => Ok(trace.complete_e()),
            FunctionKind::N => Ok(trace.complete_e() / trace.complete_k()),
            FunctionKind::Z | FunctionKind::ZRestricted => trace.jacobi_z(),
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FunctionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "k" => Ok(FunctionKind::K),
            "f" => Ok(FunctionKind::F),
            "e" => Ok(FunctionKind::E),
            "n" => Ok(FunctionKind::N),
            "z" => Ok(FunctionKind::Z),
            "z-restricted" => Ok(FunctionKind::ZRestricted),
            other => Err(format!("unknown function kind '{other}'")),
        }
    }
}

/// Schedule with the given delta mask, `gamma_n = delta_{n-1}` and no
/// sigma flips.
pub fn restricted_zeta_schedule(delta_mask: u64) -> SignSchedule {
    SignSchedule::new(0, delta_mask, delta_mask << 1)
}

/// What to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloudRequest {
    pub kind: FunctionKind,
    pub params: EagmParams,
    pub sigma_bits: u32,
    pub delta_bits: u32,
    pub gamma_bits: u32,
    /// Also sweep with the sign of `b` flipped (a second series).
    pub both_signs: bool,
}

impl CloudRequest {
    pub fn new(kind: FunctionKind, params: EagmParams) -> Self {
        Self {
            kind,
            params,
            sigma_bits: 0,
            delta_bits: 0,
            gamma_bits: 0,
            both_signs: false,
        }
    }

    pub fn bits(mut self, sigma: u32, delta: u32, gamma: u32) -> Self {
        self.sigma_bits = sigma;
        self.delta_bits = delta;
        self.gamma_bits = gamma;
        self
    }

    pub fn with_both_signs(mut self, both: bool) -> Self {
        self.both_signs = both;
        self
    }

    fn effective_bits(&self) -> (u32, u32, u32) {
        match self.kind {
            FunctionKind::ZRestricted => (0, self.delta_bits, 0),
            _ => (self.sigma_bits, self.delta_bits, self.gamma_bits),
        }
    }

    /// Number of points the request produces.
    pub fn point_count(&self) -> usize {
        let (s, d, g) = self.effective_bits();
        let series = if self.both_signs { 2 } else { 1 };
        series << (s + d + g)
    }

    fn validate(&self) -> Result<(), EagmError> {
        self.params.validate()?;
        let (s, d, g) = self.effective_bits();
        let total = s + d + g;
        if total > MAX_TOTAL_BITS {
            return Err(EagmError::TooManyBits {
                bits: total,
                max_iter: self.params.max_iter(),
            });
        }
        // The restricted schedule shifts delta up one iteration.
        let widest = match self.kind {
            FunctionKind::ZRestricted if d > 0 => d + 1,
            _ => s.max(d).max(g),
        };
        if widest as usize > self.params.max_iter() {
            return Err(EagmError::TooManyBits {
                bits: widest,
                max_iter: self.params.max_iter(),
            });
        }
        Ok(())
    }

    /// Schedules in output order: every mask descending, sigma outermost.
    pub fn schedules(&self) -> Vec<SignSchedule> {
        let (s, d, g) = self.effective_bits();
        let mut out = Vec::with_capacity(1 << (s + d + g));
        for sigma in (0..1u64 << s).rev() {
            for delta in (0..1u64 << d).rev() {
                for gamma in (0..1u64 << g).rev() {
                    out.push(match self.kind {
                        FunctionKind::ZRestricted => restricted_zeta_schedule(delta),
                        _ => SignSchedule::new(sigma, delta, gamma),
                    });
                }
            }
        }
        out
    }
}

/// One computed multivalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultivaluePoint {
    pub kind: FunctionKind,
    pub value: ComplexValue,
    pub schedule: SignSchedule,
    pub signb: Sign,
    /// Iteration of the latest non-trivial sign choice, plus one.
    pub generation: u32,
    pub ill_conditioned: bool,
    /// Index of an earlier point with the same value.
    pub duplicate_of: Option<usize>,
}

impl MultivaluePoint {
    /// Series name: the function, suffixed when `b` was negated.
    pub fn series(&self) -> String {
        match self.signb {
            Sign::Plus => self.kind.label().to_string(),
            Sign::Minus => format!("{}_minus_b", self.kind.label()),
        }
    }
}

/// `0` for the all-plus schedule, otherwise the bit length of the union of
/// the masks. For sigma-only sweeps this is `1 + floor(log2(mask))`.
pub fn generation(schedule: &SignSchedule) -> u32 {
    schedule.free_bits()
}

fn point_from_trace(kind: FunctionKind, trace: &EagmTrace) -> MultivaluePoint {
    let (value, failed) = match kind.extract(trace) {
        Ok(v) => (v, false),
        Err(_) => (c(f64::NAN, f64::NAN), true),
    };
    let finite = value.re.is_finite() && value.im.is_finite();
    MultivaluePoint {
        kind,
        value,
        schedule: *trace.schedule(),
        signb: trace.params().signb(),
        generation: generation(trace.schedule()),
        ill_conditioned: failed || !finite || trace.ill_conditioned() || !trace.converged(),
        duplicate_of: None,
    }
}

/// Runs every schedule of the request and collects the requested values.
///
/// Ill-conditioned points stay in the output with their flag set.
pub fn enumerate_cloud(req: &CloudRequest) -> Result<Vec<MultivaluePoint>, EagmError> {
    req.validate()?;
    let signs: &[Sign] = if req.both_signs {
        &[Sign::Plus, Sign::Minus]
    } else {
        &[Sign::Plus]
    };
    let base = req.params.signb();
    let mut points = Vec::with_capacity(req.point_count());
    for schedule in req.schedules() {
        for &flip in signs {
            let signb = if flip == Sign::Plus { base } else { opposite(base) };
            let trace = run_eagm(&req.params.with_signb(signb), &schedule)?;
            points.push(point_from_trace(req.kind, &trace));
        }
    }
    mark_duplicates(&mut points);
    Ok(points)
}

fn opposite(s: Sign) -> Sign {
    match s {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
    }
}

/// Sets `duplicate_of` to the first earlier well-conditioned point within
/// `DUPLICATE_TOL * max(1, |value|)`.
pub fn mark_duplicates(points: &mut [MultivaluePoint]) {
    for i in 0..points.len() {
        points[i].duplicate_of = None;
        if points[i].ill_conditioned {
            continue;
        }
        let v = points[i].value;
        let tol = DUPLICATE_TOL * v.norm().max(1.0);
        points[i].duplicate_of = (0..i).find(|&j| {
            !points[j].ill_conditioned && (points[j].value - v).norm() < tol
        });
    }
}

/// Measured properties of a cloud; nothing here is asserted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudReport {
    pub points: usize,
    pub flagged: Vec<usize>,
    /// `(index, duplicate_of)` pairs.
    pub duplicates: Vec<(usize, usize)>,
    /// Non-trivial well-conditioned points whose imaginary part is zero.
    pub real_axis_hits: Vec<usize>,
}

pub fn cloud_report(points: &[MultivaluePoint]) -> CloudReport {
    let flagged = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.ill_conditioned)
        .map(|(i, _)| i)
        .collect();
    let duplicates = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.duplicate_of.map(|j| (i, j)))
        .collect();
    let real_axis_hits = points
        .iter()
        .enumerate()
        .filter(|(_, p)| {
            !p.ill_conditioned
                && !(p.schedule.is_all_plus() && p.signb == Sign::Plus)
                && p.value.im.abs() < DUPLICATE_TOL * p.value.norm().max(1.0)
        })
        .map(|(i, _)| i)
        .collect();
    CloudReport {
        points: points.len(),
        flagged,
        duplicates,
        real_axis_hits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(kind: FunctionKind, sinphi: f64) -> CloudRequest {
        CloudRequest::new(kind, EagmParams::from_complement(0.25, sinphi))
    }

    #[test]
    fn restricted_schedule_shifts_delta() {
        assert_eq!(restricted_zeta_schedule(0), SignSchedule::ALL_PLUS);
        assert_eq!(restricted_zeta_schedule(0b1).gamma_mask, 0b10);
        let s = restricted_zeta_schedule(0b1011);
        assert_eq!((s.sigma_mask, s.delta_mask, s.gamma_mask), (0, 0b1011, 0b10110));
    }

    #[test]
    fn generation_matches_reference_formula() {
        for j in 0u64..64 {
            let expected = (1.0 + ((j as f64 + 0.99).ln() / 2f64.ln()).floor()) as u32;
            assert_eq!(generation(&SignSchedule::new(j, 0, 0)), expected, "j={j}");
        }
    }

    #[test]
    fn counts_and_order() {
        let req = request(FunctionKind::F, 0.8).bits(3, 4, 0);
        let pts = enumerate_cloud(&req).unwrap();
        assert_eq!(pts.len(), 128);
        assert_eq!(pts[0].schedule, SignSchedule::new(7, 15, 0));
        assert_eq!(pts[127].schedule, SignSchedule::ALL_PLUS);

        let req = request(FunctionKind::K, 0.5).bits(5, 0, 0).with_both_signs(true);
        let pts = enumerate_cloud(&req).unwrap();
        assert_eq!(pts.len(), 64);
        assert_eq!(pts[0].signb, Sign::Plus);
        assert_eq!(pts[1].signb, Sign::Minus);
        assert_eq!(pts[1].series(), "K_minus_b");

        let req = request(FunctionKind::ZRestricted, 0.8).bits(3, 4, 2);
        assert_eq!(enumerate_cloud(&req).unwrap().len(), 16);
    }

    #[test]
    fn rejects_too_many_bits() {
        let req = CloudRequest::new(
            FunctionKind::K,
            EagmParams::from_complement(0.25, 0.5).with_max_iter(4),
        )
        .bits(5, 0, 0);
        assert!(enumerate_cloud(&req).is_err());
        let req = request(FunctionKind::ZRestricted, 0.8).bits(0, 20, 0);
        assert!(enumerate_cloud(&req).is_err());
        let req = request(FunctionKind::Z, 0.8).bits(10, 10, 10);
        assert!(enumerate_cloud(&req).is_err());
    }

    #[test]
    fn gamma_flips_leave_k_cloud_unchanged() {
        let base = enumerate_cloud(&request(FunctionKind::K, 0.5).bits(3, 0, 0)).unwrap();
        let with_gamma = enumerate_cloud(&request(FunctionKind::K, 0.5).bits(3, 0, 2)).unwrap();
        for (i, p) in base.iter().enumerate() {
            for q in &with_gamma[4 * i..4 * i + 4] {
                assert_eq!(p.value, q.value);
            }
        }
    }

    #[test]
    fn duplicates_are_marked_not_dropped() {
        let mut pts = enumerate_cloud(&request(FunctionKind::K, 0.5).bits(2, 0, 0)).unwrap();
        let n = pts.len();
        let mut copy = pts[1];
        copy.duplicate_of = None;
        pts.push(copy);
        mark_duplicates(&mut pts);
        assert_eq!(pts.len(), n + 1);
        assert_eq!(pts[n].duplicate_of, Some(1));
        let report = cloud_report(&pts);
        assert!(report.duplicates.contains(&(n, 1)));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("z-restricted".parse::<FunctionKind>().unwrap(), FunctionKind::ZRestricted);
        assert_eq!("Z_restricted".parse::<FunctionKind>().unwrap(), FunctionKind::ZRestricted);
        assert_eq!("K".parse::<FunctionKind>().unwrap(), FunctionKind::K);
        assert!("q".parse::<FunctionKind>().is_err());
    }
}
