//! Command-line front end for theta constants, gradients, relation catalogs and their certification.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thetagrad_core::config::{OutputFormat, RunConfig};
use thetagrad_core::{Error, SiegelPoint, SpMatrix};

mod commands;
mod report;

/// Flags win over environment variables, which win over built-in defaults.
#[derive(Parser, Debug)]
#[command(name = "thetagrad", version, about = "Genus-2 theta constants, gradients and their relations")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Target absolute error of each theta value.
    #[arg(long, global = true, env = "THETAGRAD_EPS", default_value_t = 1e-14)]
    eps: f64,
    /// Working decimal digits; defaults to the minimum `eps` requires.
    #[arg(long, global = true, env = "THETAGRAD_DIGITS")]
    digits: Option<u32>,
    /// Seed for every random choice.
    #[arg(long, global = true, env = "THETAGRAD_SEED", default_value_t = 20_240_601)]
    seed: u64,
    /// Number of random points for certification sweeps.
    #[arg(long, global = true, env = "THETAGRAD_SAMPLES", default_value_t = 20)]
    samples: usize,
    /// `json` or `csv`.
    #[arg(long, global = true, env = "THETAGRAD_FORMAT", default_value = "json")]
    format: OutputFormat,
}

impl GlobalArgs {
    fn config(&self) -> Result<RunConfig, Error> {
        let config = RunConfig {
            eps: self.eps,
            precision_digits: self.digits.unwrap_or_else(|| RunConfig::required_digits(self.eps)),
            seed: self.seed,
            tau_samples: self.samples,
            output_format: self.format,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args, Debug, Clone)]
pub struct TauArg {
    /// `re11,im11,re12,im12,re22,im22`; a seeded random point when omitted.
    #[arg(long)]
    pub tau: Option<SiegelPoint>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The ten even theta constants.
    EvalTheta(TauArg),
    /// Gradients of the six odd theta functions at z = 0.
    EvalGrad(TauArg),
    /// The fifteen Jacobian determinants.
    EvalDet(TauArg),
    /// Orbit class of a set of even characteristics.
    ClassifySet {
        /// Comma-separated labels 1..10, e.g. `1,4,5,9`.
        #[arg(long, conflicts_with = "chars")]
        set: Option<String>,
        /// Comma-separated characteristics, e.g. `00|00,01|10`.
        #[arg(long)]
        chars: Option<String>,
    },
    /// Sizes of all orbit classes against the published counts.
    OrbitCensus,
    /// Characters of the odd pairs on the basis of G against the published table.
    CharTable,
    /// Level-group flags and G-coordinates of a matrix.
    CheckMember {
        /// Sixteen integers, row by row.
        #[arg(long)]
        matrix: SpMatrix,
    },
    /// Biquadratic and quartic theta relations at random points.
    VerifyRiemann {
        /// Check the relations exactly as printed instead of the corrected list.
        #[arg(long)]
        printed: bool,
    },
    /// The identities D(N) = ±θθθθ at random points.
    VerifyJacobi {
        /// Use the printed signs instead of the corrected ones.
        #[arg(long)]
        printed: bool,
    },
    /// Transformation laws of θ_mθ_n and D(N) under level-(2,4) matrices.
    VerifyTransform {
        /// A matrix in Γ(2,4); all nine basis matrices of G when omitted.
        #[arg(long)]
        matrix: Option<SpMatrix>,
        /// Objects such as `D12` or `th1*th3`, comma-separated; all when omitted.
        #[arg(long)]
        objects: Option<String>,
    },
    /// Generates and certifies a relation family.
    Catalog {
        /// `R2`, `R4`, `rb1`..`rb8`, `rc1`..`rc5` or `all`.
        #[arg(long, default_value = "all")]
        family: String,
    },
    /// The cusp-ideal generators, optionally with a boundary check.
    CuspGens {
        /// Number of generators to test at the boundary.
        #[arg(long, default_value_t = 0)]
        check: usize,
    },
    /// Projective image of the fifteen determinants.
    GradMap {
        #[command(flatten)]
        tau: TauArg,
        /// Also run the level-group invariance and sign-flip checks.
        #[arg(long)]
        invariance: bool,
        /// Word length of sampled level-group elements.
        #[arg(long, default_value_t = 2)]
        word_len: usize,
    },
    /// Sign patterns of the determinants over all 512 classes of G.
    PatternCensus,
}

fn usage_error(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::Parse(_)
                | Error::InvalidArgument(_)
                | Error::NotSymplectic
                | Error::NotInLevel(_)
                | Error::NotPositiveDefinite
                | Error::PrecisionExhausted { .. }
                | Error::OddCharacteristic(_)
                | Error::EvenCharacteristic(_)
        )
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.global.config().map_err(anyhow::Error::from).and_then(|config| {
        let report = commands::run(&cli.command, &config)?;
        report.emit(&config, &mut std::io::stdout().lock())?;
        Ok(report.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if usage_error(&e) { 2 } else { 1 })
        }
    }
}
