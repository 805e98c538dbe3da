//! Run configuration: a flat TOML document, validated into a [`RunConfig`].
//!
//! ```toml
//! command = "verify-plancherel"
//! epsilon = 0
//! ktypes = [{ m = 0, width = 1.0 }, { m = 2, profile = "hermite", degree = 1 }]
//! s_max = 12.0
//! ```

use clap::ValueEnum;
use hyppl_core::geometry::KTypeTerm;
use hyppl_core::jacobi::{Parity, RadialProfile, SpectralGridSpec, SpectralMeasure, SpectralRule};
use hyppl_core::plancherel::DiscreteConvention;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Range;
use std::path::PathBuf;
use toml::Spanned;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyPlancherel,
    VerifyInversion,
    JacobiRoundtrip,
    IdentitySuite,
    CasimirCheck,
    SpectralDensity,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyPlancherel => "verify-plancherel",
            Command::VerifyInversion => "verify-inversion",
            Command::JacobiRoundtrip => "jacobi-roundtrip",
            Command::IdentitySuite => "identity-suite",
            Command::CasimirCheck => "casimir-check",
            Command::SpectralDensity => "spectral-density",
        }
    }

    fn needs_ktypes(self) -> bool {
        self != Command::IdentitySuite
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "configuration error at line {l}: {}", self.message),
            None => write!(f, "configuration error: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum ProfileKind {
    Gaussian,
    Hermite,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKType {
    m: i32,
    #[serde(default = "gaussian")]
    profile: ProfileKind,
    #[serde(default)]
    center: f64,
    #[serde(default = "one")]
    width: f64,
    #[serde(default)]
    degree: u32,
    #[serde(default = "one")]
    amplitude: f64,
    #[serde(default = "no_parity")]
    parity: Parity,
}

fn gaussian() -> ProfileKind {
    ProfileKind::Gaussian
}
fn one() -> f64 {
    1.0
}
fn no_parity() -> Parity {
    Parity::None
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Option<Spanned<Command>>,
    #[serde(default)]
    epsilon: Option<Spanned<u8>>,
    #[serde(default)]
    lambda_imag: f64,
    #[serde(default)]
    ktypes: Option<Spanned<Vec<Spanned<RawKType>>>>,
    s_max: Option<Spanned<f64>>,
    n_points: Option<Spanned<usize>>,
    rule: Option<SpectralRule>,
    measure: Option<SpectralMeasure>,
    tol: Option<Spanned<f64>>,
    identity_tol: Option<Spanned<f64>>,
    convention: Option<DiscreteConvention>,
    points: Option<Vec<[f64; 2]>>,
    output_path: Option<PathBuf>,
    format: Option<Format>,
}

/// A validated run. Serialised verbatim into every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub epsilon: u8,
    pub lambda_imag: f64,
    pub ktypes: Vec<KTypeTerm>,
    pub grid: SpectralGridSpec,
    pub tol: f64,
    pub identity_tol: f64,
    pub convention: DiscreteConvention,
    /// (θ, u) sample points for inversion and the Casimir check.
    pub points: Vec<[f64; 2]>,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
    pub ablate_discrete: bool,
}

pub const DEFAULT_TOL: f64 = 1e-3;
pub const DEFAULT_IDENTITY_TOL: f64 = 1e-8;

/// The 5×7 grid θ ∈ {0.3, 0.9, …, 2.7}, u ∈ {−0.9, −0.6, …, 0.9}.
pub fn default_points() -> Vec<[f64; 2]> {
    (0..5)
        .flat_map(|i| (0..7).map(move |k| [0.3 + 0.6 * i as f64, -0.9 + 0.3 * k as f64]))
        .collect()
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn of(&self, span: Range<usize>) -> usize {
        self.0[..span.start.min(self.0.len())].matches('\n').count() + 1
    }

    fn err(&self, span: Range<usize>, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: Some(self.of(span)),
            message: message.into(),
        }
    }
}

/// Parse and validate. `command` may be given here, on the command line, or
/// both (then they must agree).
pub fn parse_config(text: &str, command: Option<Command>) -> Result<RunConfig, ConfigError> {
    let lines = Lines(text);
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let mut message = e.message().trim().to_string();
        // the parser names the offence but not always the key
        if let Some(key) = e
            .span()
            .and_then(|s| text.get(s))
            .map(str::trim)
            .filter(|k| !k.is_empty() && !message.contains(*k))
        {
            message = format!("{message} `{key}`");
        }
        ConfigError {
            line: e.span().map(|s| lines.of(s)),
            message,
        }
    })?;

    let command = match (raw.command, command) {
        (Some(c), Some(cli)) if *c.get_ref() != cli => {
            return Err(lines.err(
                c.span(),
                format!("config says {} but the command line says {}", c.get_ref().name(), cli.name()),
            ))
        }
        (Some(c), _) => c.into_inner(),
        (None, Some(cli)) => cli,
        (None, None) => {
            return Err(ConfigError {
                line: None,
                message: "no command given".into(),
            })
        }
    };

    let epsilon = match raw.epsilon {
        Some(e) if *e.get_ref() > 1 => return Err(lines.err(e.span(), format!("epsilon must be 0 or 1, got {}", e.get_ref()))),
        Some(e) => e.into_inner(),
        None => 0,
    };
    if !raw.lambda_imag.is_finite() {
        return Err(ConfigError {
            line: None,
            message: "lambda_imag must be finite".into(),
        });
    }

    let mut ktypes = Vec::new();
    if let Some(list) = &raw.ktypes {
        for k in list.get_ref() {
            let (span, k) = (k.span(), k.get_ref());
            if k.m.rem_euclid(2) != epsilon as i32 {
                return Err(lines.err(span, format!("K-type m = {} has the wrong parity for epsilon = {epsilon}", k.m)));
            }
            if !(k.width > 0.0) || !k.center.is_finite() || !k.amplitude.is_finite() {
                return Err(lines.err(
                    span,
                    format!("K-type m = {}: width must be positive and center, amplitude finite", k.m),
                ));
            }
            if k.profile == ProfileKind::Gaussian && k.degree != 0 {
                return Err(lines.err(span, "degree is only meaningful for profile = \"hermite\""));
            }
            let p = match k.profile {
                ProfileKind::Gaussian => RadialProfile::gaussian(k.center, k.width),
                ProfileKind::Hermite => RadialProfile::hermite(k.center, k.width, k.degree),
            };
            ktypes.push(KTypeTerm {
                m: k.m,
                profile: p.with_parity(k.parity).scaled(k.amplitude),
            });
        }
    }
    if command.needs_ktypes() && ktypes.is_empty() {
        let line = raw.ktypes.as_ref().map(|k| lines.of(k.span()));
        return Err(ConfigError {
            line,
            message: format!("{} needs at least one entry in ktypes", command.name()),
        });
    }

    let positive = |v: Option<Spanned<f64>>, name: &str, default: f64| match v {
        Some(x) if !(*x.get_ref() > 0.0) || !x.get_ref().is_finite() => {
            Err(lines.err(x.span(), format!("{name} must be positive and finite, got {}", x.get_ref())))
        }
        Some(x) => Ok(x.into_inner()),
        None => Ok(default),
    };
    let mut grid = SpectralGridSpec::new(positive(raw.s_max, "s_max", 10.0)?, 400);
    if let Some(n) = raw.n_points {
        if *n.get_ref() < 16 {
            return Err(lines.err(n.span(), format!("n_points must be at least 16, got {}", n.get_ref())));
        }
        grid.n_points = n.into_inner();
    }
    if let Some(r) = raw.rule {
        grid.rule = r;
    }
    if let Some(m) = raw.measure {
        grid.measure = m;
    }

    let points = raw.points.unwrap_or_else(default_points);
    if let Some(p) = points
        .iter()
        .find(|p| !(0.0..std::f64::consts::PI).contains(&p[0]) || !p[1].is_finite())
    {
        return Err(ConfigError {
            line: None,
            message: format!("point {p:?} outside [0,π)×ℝ"),
        });
    }

    Ok(RunConfig {
        command,
        epsilon,
        lambda_imag: raw.lambda_imag,
        ktypes,
        grid,
        tol: positive(raw.tol, "tol", DEFAULT_TOL)?,
        identity_tol: positive(raw.identity_tol, "identity_tol", DEFAULT_IDENTITY_TOL)?,
        convention: raw.convention.unwrap_or_default(),
        points,
        output_path: raw.output_path,
        format: raw.format.unwrap_or_default(),
        ablate_discrete: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_gets_defaults() {
        let c = parse_config(
            "command = \"verify-plancherel\"\nepsilon = 0\nktypes = [{ m = 0, width = 1.0 }]\n",
            None,
        )
        .unwrap();
        assert_eq!(c.command, Command::VerifyPlancherel);
        assert_eq!((c.grid.s_max, c.grid.n_points, c.tol), (10.0, 400, 1e-3));
        assert_eq!(
            c.ktypes,
            vec![KTypeTerm {
                m: 0,
                profile: RadialProfile::gaussian(0.0, 1.0)
            }]
        );
        assert_eq!(c.points.len(), 35);
    }

    #[test]
    fn parity_violation_names_the_line() {
        let e = parse_config(
            "epsilon = 0\nktypes = [\n  { m = 0 },\n  { m = 3 },\n]\n",
            Some(Command::VerifyPlancherel),
        )
        .unwrap_err();
        assert_eq!(e.line, Some(4), "{e}");
        assert!(e.message.contains("parity"), "{e}");
    }

    #[test]
    fn duplicate_key_is_named() {
        let e = parse_config("epsilon = 0\ns_max = 5\ns_max = 6\n", Some(Command::IdentitySuite)).unwrap_err();
        assert_eq!(e.line, Some(3), "{e}");
        assert!(e.message.contains("s_max"), "{e}");
    }

    #[test]
    fn unknown_key_and_bad_numbers() {
        let e = parse_config("epsilon = 0\nsmax = 5\n", Some(Command::IdentitySuite)).unwrap_err();
        assert_eq!(e.line, Some(2), "{e}");
        assert!(e.message.contains("smax"), "{e}");
        let e = parse_config("\n\ntol = 1e-3x\n", Some(Command::IdentitySuite)).unwrap_err();
        assert_eq!(e.line, Some(3), "{e}");
        let e = parse_config("tol = -1.0\n", Some(Command::IdentitySuite)).unwrap_err();
        assert_eq!(e.line, Some(1), "{e}");
        let e = parse_config("n_points = 8\n", Some(Command::IdentitySuite)).unwrap_err();
        assert!(e.message.contains("16"), "{e}");
    }

    #[test]
    fn command_sources_must_agree() {
        assert!(parse_config("", None).is_err());
        let e = parse_config("command = \"identity-suite\"\n", Some(Command::CasimirCheck)).unwrap_err();
        assert_eq!(e.line, Some(1));
        assert_eq!(
            parse_config("", Some(Command::IdentitySuite)).unwrap().command,
            Command::IdentitySuite
        );
        let e = parse_config("", Some(Command::SpectralDensity)).unwrap_err();
        assert!(e.message.contains("ktypes"), "{e}");
    }
}
