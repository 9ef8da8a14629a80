use std::fmt;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use eagm_core::eagm::{DEFAULT_CONV_TOL, DEFAULT_MAX_ITER};
use eagm_core::{CloudRequest, EagmParams, FunctionKind, Sign};

/// `b = 0.25`, i.e. `k = sqrt(0.9375)`.
pub const DEFAULT_B: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand that runs the recursion.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Complementary modulus b; takes precedence over --k.
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Modulus k; b = sqrt(1 - k^2) with the principal root.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sinphi: Option<f64>,
    /// Sign of b in the initial row, +1 or -1.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub signb: i64,
    #[arg(long)]
    pub sigma_bits: Option<u32>,
    #[arg(long)]
    pub delta_bits: Option<u32>,
    #[arg(long)]
    pub gamma_bits: Option<u32>,
    /// Also sweep with b negated (defaults on for K only).
    #[arg(long)]
    pub both_signs: Option<bool>,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_CONV_TOL)]
    pub conv_tol: f64,
}

/// Per-kind parameters used when a flag is omitted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defaults {
    pub sinphi: f64,
    pub bits: (u32, u32, u32),
    pub both_signs: bool,
}

pub fn defaults(kind: FunctionKind) -> Defaults {
    let (sinphi, bits, both_signs) = match kind {
        FunctionKind::K => (0.5, (5, 0, 0), true),
        FunctionKind::F => (0.8, (3, 4, 0), false),
        FunctionKind::E | FunctionKind::N => (0.5, (5, 0, 0), false),
        FunctionKind::Z => (0.8, (2, 2, 2), false),
        FunctionKind::ZRestricted => (0.8, (0, 4, 0), false),
    };
    Defaults {
        sinphi,
        bits,
        both_signs,
    }
}

/// A flag combination that cannot be run; reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// Fully resolved flags for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kind: FunctionKind,
    pub params: EagmParams,
    pub sinphi: f64,
    pub bits: (u32, u32, u32),
    pub both_signs: bool,
    pub warnings: Vec<String>,
}

impl RunConfig {
    pub fn resolve(kind: FunctionKind, args: &CommonArgs) -> Result<Self, UsageError> {
        let d = defaults(kind);
        let mut warnings = Vec::new();
        let sinphi = args.sinphi.unwrap_or(d.sinphi);
        if !sinphi.is_finite() || sinphi == 0.0 {
            return Err(usage(format!("--sinphi must be finite and nonzero, got {sinphi}")));
        }
        let signb = Sign::try_from(args.signb).map_err(|_| usage(format!("--signb must be 1 or -1, got {}", args.signb)))?;
        if args.max_iter == 0 {
            return Err(usage("--max-iter must be at least 1"));
        }
        if !(args.conv_tol > 0.0 && args.conv_tol.is_finite()) {
            return Err(usage(format!("--conv-tol must be positive, got {}", args.conv_tol)));
        }

        let params = match (args.b, args.k) {
            (Some(b), Some(_)) => {
                warnings.push("both --b and --k given; using --b".to_string());
                EagmParams::from_complement(b, sinphi)
            }
            (Some(b), None) => EagmParams::from_complement(b, sinphi),
            (None, Some(k)) => EagmParams::from_modulus(k, sinphi),
            (None, None) => EagmParams::from_complement(DEFAULT_B, sinphi),
        };
        let b = params.b();
        if !(b.re.is_finite() && b.im.is_finite()) {
            return Err(usage("modulus must be finite"));
        }
        if b == eagm_core::complex::c(0.0, 0.0) {
            return Err(usage("b = 0 (k = 1) is a logarithmic singularity"));
        }
        let params = params
            .with_signb(signb)
            .with_max_iter(args.max_iter)
            .with_conv_tol(args.conv_tol);

        let bits = (
            args.sigma_bits.unwrap_or(d.bits.0),
            args.delta_bits.unwrap_or(d.bits.1),
            args.gamma_bits.unwrap_or(d.bits.2),
        );
        let config = Self {
            kind,
            params,
            sinphi,
            bits,
            both_signs: args.both_signs.unwrap_or(d.both_signs),
            warnings,
        };
        config.check_bits()?;
        Ok(config)
    }

    fn check_bits(&self) -> Result<(), UsageError> {
        let (s, d, g) = self.bits;
        let widest = match self.kind {
            FunctionKind::ZRestricted if d > 0 => d + 1,
            _ => s.max(d).max(g),
        };
        if widest as usize > self.params.max_iter() {
            return Err(usage(format!(
                "sign bits ({widest}) exceed --max-iter ({})",
                self.params.max_iter()
            )));
        }
        let total = match self.kind {
            FunctionKind::ZRestricted => d,
            _ => s + d + g,
        };
        if total > eagm_core::enumerate::MAX_TOTAL_BITS {
            return Err(usage(format!(
                "{total} sign bits requested; at most {} are enumerated",
                eagm_core::enumerate::MAX_TOTAL_BITS
            )));
        }
        Ok(())
    }

    pub fn request(&self) -> CloudRequest {
        CloudRequest::new(self.kind, self.params)
            .bits(self.bits.0, self.bits.1, self.bits.2)
            .with_both_signs(self.both_signs)
    }
}

/// Where to write the point records and the optional plot.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a scatter plot to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}
