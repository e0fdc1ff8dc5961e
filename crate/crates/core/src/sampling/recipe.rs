use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Everything needed to regenerate a sample exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecipe {
    pub seed: u64,
    /// Significance level of the chi-square similarity check.
    pub similarity_alpha: f64,
    /// Classes expecting fewer rows than this are pooled before testing.
    pub min_expected_count: f64,
    pub max_attempts: u32,
}

impl Default for SampleRecipe {
    fn default() -> Self {
        Self {
            seed: 0,
            similarity_alpha: 0.05,
            min_expected_count: 5.0,
            max_attempts: 100,
        }
    }
}

impl SampleRecipe {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.similarity_alpha > 0.0 && self.similarity_alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "similarity alpha {} outside (0, 1)",
                self.similarity_alpha
            )));
        }
        if self.max_attempts == 0 {
            return Err(Error::InvalidArgument(
                "max_attempts must be at least 1".into(),
            ));
        }
        if !(self.min_expected_count.is_finite() && self.min_expected_count >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "min expected count {} must be a non-negative number",
                self.min_expected_count
            )));
        }
        Ok(())
    }
}
