//! Run settings: command-line flags (or their `IDSAMPLE_*` environment
//! variables) over an optional TOML file over built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use idsample_core::{PcaMode, SampleRecipe};
use serde::Deserialize;

/// Keys accepted in a `--config` file. Names match the long flags with
/// dashes replaced by underscores.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub schema: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub fraction: Option<f64>,
    pub num: Option<usize>,
    pub alpha: Option<f64>,
    pub pca_k: Option<usize>,
    pub pca_mode: Option<PcaMode>,
    pub max_attempts: Option<u32>,
    pub standardize: Option<bool>,
    pub type_column: Option<String>,
    pub normal: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML file with default values for any of the flags below.
    #[arg(long, env = "IDSAMPLE_CONFIG", value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory; created if absent.
    #[arg(long, env = "IDSAMPLE_OUT", value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Seed for the sampling permutation.
    #[arg(long, env = "IDSAMPLE_SEED")]
    pub seed: Option<u64>,
    /// Sample size as a fraction of the input rows, in (0, 1]. Default 0.5.
    #[arg(long, env = "IDSAMPLE_FRACTION")]
    pub fraction: Option<f64>,
    /// Absolute sample size; overrides --fraction.
    #[arg(long, env = "IDSAMPLE_NUM")]
    pub num: Option<usize>,
    /// Significance level of the chi-square similarity check. Default 0.05.
    #[arg(long, env = "IDSAMPLE_ALPHA")]
    pub alpha: Option<f64>,
    /// Permutations tried before giving up. Default 100.
    #[arg(long, env = "IDSAMPLE_MAX_ATTEMPTS")]
    pub max_attempts: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct PcaArgs {
    /// Number of principal components. Default 3.
    #[arg(long, env = "IDSAMPLE_PCA_K")]
    pub pca_k: Option<usize>,
    /// `shared` fits one basis on the first input; `independent` fits each
    /// input separately.
    #[arg(long, env = "IDSAMPLE_PCA_MODE")]
    pub pca_mode: Option<PcaMode>,
    /// Scale features to unit variance before PCA.
    #[arg(long, env = "IDSAMPLE_STANDARDIZE")]
    pub standardize: bool,
}

pub const DEFAULT_FRACTION: f64 = 0.5;
pub const DEFAULT_OUT: &str = "out";

pub fn output_dir(common: &CommonArgs, file: &FileConfig) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

pub fn input_path(flag: Option<&PathBuf>, file: &FileConfig) -> anyhow::Result<PathBuf> {
    match flag.or(file.input.as_ref()) {
        Some(p) => Ok(p.clone()),
        None => bail!(idsample_core::Error::InvalidArgument(
            "no --input given".into()
        )),
    }
}

pub fn alpha(flag: Option<f64>, file: &FileConfig) -> anyhow::Result<f64> {
    let alpha = flag
        .or(file.alpha)
        .unwrap_or(idsample_core::stats::DEFAULT_ALPHA);
    if !(alpha > 0.0 && alpha < 1.0) {
        bail!(idsample_core::Error::InvalidArgument(format!(
            "alpha must be in (0, 1), got {alpha}"
        )));
    }
    Ok(alpha)
}

/// Sample size request before the input row count is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSize {
    Fraction(f64),
    Num(usize),
}

impl SampleSize {
    /// `round(fraction * rows)`, at least 1.
    pub fn resolve(self, rows: usize) -> usize {
        match self {
            SampleSize::Num(n) => n,
            SampleSize::Fraction(f) => ((f * rows as f64).round() as usize).max(1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampleSettings {
    pub recipe: SampleRecipe,
    pub size: SampleSize,
}

impl SampleSettings {
    pub fn resolve(args: &SampleArgs, file: &FileConfig) -> anyhow::Result<Self> {
        let defaults = SampleRecipe::default();
        let recipe = SampleRecipe {
            seed: args.seed.or(file.seed).unwrap_or(defaults.seed),
            similarity_alpha: alpha(args.alpha, file)?,
            max_attempts: args
                .max_attempts
                .or(file.max_attempts)
                .unwrap_or(defaults.max_attempts),
            ..defaults
        };
        recipe.validate()?;
        let size = match (args.num, args.fraction) {
            (Some(n), _) => SampleSize::Num(n),
            (None, Some(f)) => SampleSize::Fraction(f),
            (None, None) => match (file.num, file.fraction) {
                (Some(n), _) => SampleSize::Num(n),
                (None, f) => SampleSize::Fraction(f.unwrap_or(DEFAULT_FRACTION)),
            },
        };
        if let SampleSize::Fraction(f) = size {
            if !(f > 0.0 && f <= 1.0) {
                bail!(idsample_core::Error::InvalidArgument(format!(
                    "fraction must be in (0, 1], got {f}"
                )));
            }
        }
        Ok(Self { recipe, size })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PcaSettings {
    pub k: usize,
    pub mode: PcaMode,
    pub standardize: bool,
}

impl PcaSettings {
    pub fn resolve(args: &PcaArgs, file: &FileConfig) -> anyhow::Result<Self> {
        let k = args
            .pca_k
            .or(file.pca_k)
            .unwrap_or(idsample_core::pca::DEFAULT_COMPONENTS);
        if k == 0 {
            bail!(idsample_core::Error::InvalidArgument(
                "--pca-k must be at least 1".into()
            ));
        }
        Ok(Self {
            k,
            mode: args.pca_mode.or(file.pca_mode).unwrap_or_default(),
            standardize: args.standardize || file.standardize.unwrap_or(false),
        })
    }

    pub fn options(&self) -> idsample_core::PcaOptions {
        idsample_core::PcaOptions {
            k: self.k,
            standardize: self.standardize,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> FileConfig {
        toml::from_str(text).unwrap()
    }

    fn sample_args() -> SampleArgs {
        SampleArgs {
            seed: None,
            fraction: None,
            num: None,
            alpha: None,
            max_attempts: None,
        }
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let f = file("seed = 9\nfraction = 0.25\nmax_attempts = 7");
        let s = SampleSettings::resolve(&sample_args(), &f).unwrap();
        assert_eq!(s.recipe.seed, 9);
        assert_eq!(s.size, SampleSize::Fraction(0.25));
        assert_eq!(s.recipe.max_attempts, 7);
        assert_eq!(s.recipe.similarity_alpha, 0.05);

        let args = SampleArgs {
            seed: Some(1),
            num: Some(10),
            ..sample_args()
        };
        let s = SampleSettings::resolve(&args, &f).unwrap();
        assert_eq!(s.recipe.seed, 1);
        assert_eq!(s.size, SampleSize::Num(10));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(toml::from_str::<FileConfig>("sed = 1").is_err());
        let args = SampleArgs {
            fraction: Some(1.5),
            ..sample_args()
        };
        assert!(SampleSettings::resolve(&args, &FileConfig::default()).is_err());
        let args = SampleArgs {
            alpha: Some(0.0),
            ..sample_args()
        };
        assert!(SampleSettings::resolve(&args, &FileConfig::default()).is_err());
    }

    #[test]
    fn fraction_rounds_to_rows() {
        assert_eq!(SampleSize::Fraction(0.5).resolve(145_586), 72_793);
        assert_eq!(SampleSize::Fraction(0.5).resolve(7_062_606), 3_531_303);
        assert_eq!(SampleSize::Fraction(0.01).resolve(10), 1);
    }

    #[test]
    fn pca_mode_from_file() {
        let f = file("pca_mode = \"independent\"\npca_k = 2");
        let args = PcaArgs {
            pca_k: None,
            pca_mode: None,
            standardize: false,
        };
        let p = PcaSettings::resolve(&args, &f).unwrap();
        assert_eq!((p.k, p.mode), (2, PcaMode::Independent));
    }
}
