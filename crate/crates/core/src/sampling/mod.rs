//! Representative sampling with a distribution-similarity acceptance loop,
//! and balanced undersampling anchored on the minority binary class.

mod distribution;
mod recipe;
pub mod shuffle;

pub use distribution::{
    chi_square_critical, distribution_similar, label_distribution, Granularity, LabelDistribution,
    SimilarityVerdict,
};
pub use recipe::SampleRecipe;

use distribution::{class_counts, traffic_distribution};
use shuffle::{partial_shuffle, rng_from_seed, SampleRng};

use crate::dataset::{Dataset, LineageStep};
use crate::error::{Error, Result};

/// A drawn sample together with how it was accepted.
#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub dataset: Dataset,
    pub attempts: u32,
    /// `None` when the class structure leaves fewer than two chi-square
    /// buckets; the first permutation is then accepted.
    pub verdict: Option<SimilarityVerdict>,
}

#[derive(Debug, Clone)]
pub struct BalancedOutcome {
    pub dataset: Dataset,
    /// `None` when both binary classes were already equally sized.
    pub minority_label: Option<u8>,
    pub minority_count: usize,
    pub attempts: u32,
    pub verdict: Option<SimilarityVerdict>,
}

struct Drawn {
    rows: Vec<usize>,
    attempts: u32,
    verdict: Option<SimilarityVerdict>,
}

/// Draws `num` rows from `population` (row indices of `ds`) until their
/// traffic-type distribution is similar to the population's.
fn draw_similar(
    ds: &Dataset,
    population: &[usize],
    num: usize,
    recipe: &SampleRecipe,
    rng: &mut SampleRng,
) -> Result<Drawn> {
    let reference = traffic_distribution(ds, &class_counts(ds, Some(population)))?;
    let mut order = population.to_vec();
    let mut best: Option<SimilarityVerdict> = None;
    for attempt in 1..=recipe.max_attempts {
        order.copy_from_slice(population);
        partial_shuffle(&mut order, num, rng);
        let chosen = &order[..num];
        let candidate = traffic_distribution(ds, &class_counts(ds, Some(chosen)))?;
        match distribution_similar(&reference, &candidate, recipe) {
            Ok(v) if v.similar => {
                return Ok(Drawn {
                    rows: chosen.to_vec(),
                    attempts: attempt,
                    verdict: Some(v),
                })
            }
            Ok(v) => {
                if best.as_ref().is_none_or(|b| v.statistic < b.statistic) {
                    best = Some(v);
                }
            }
            Err(Error::SimilarityUndecidable { .. }) => {
                return Ok(Drawn {
                    rows: chosen.to_vec(),
                    attempts: attempt,
                    verdict: None,
                })
            }
            Err(e) => return Err(e),
        }
    }
    let best = best.expect("at least one attempt ran");
    Err(Error::AttemptsExhausted {
        attempts: recipe.max_attempts,
        best_statistic: best.statistic,
        threshold: best.threshold,
    })
}

fn sampled_step(seed: u64, drawn: &Drawn) -> LineageStep {
    LineageStep::Sampled {
        seed,
        num: drawn.rows.len(),
        attempts: drawn.attempts,
        statistic: drawn.verdict.as_ref().map(|v| v.statistic),
        threshold: drawn.verdict.as_ref().map(|v| v.threshold),
    }
}

/// Draws a uniformly random `num`-row sample whose traffic-type distribution
/// passes [`distribution_similar`] against `ds`, retrying with fresh
/// permutations up to `recipe.max_attempts` times.
pub fn get_sample(ds: &Dataset, num: usize, recipe: &SampleRecipe) -> Result<SampleOutcome> {
    recipe.validate()?;
    if num == 0 || num > ds.n_rows() {
        return Err(Error::SampleSizeOutOfRange {
            num,
            rows: ds.n_rows(),
        });
    }
    let population: Vec<usize> = (0..ds.n_rows()).collect();
    let mut rng = rng_from_seed(recipe.seed);
    let drawn = draw_similar(ds, &population, num, recipe, &mut rng)?;
    let dataset = ds
        .select_rows(&drawn.rows)
        .with_step(sampled_step(recipe.seed, &drawn));
    Ok(SampleOutcome {
        dataset,
        attempts: drawn.attempts,
        verdict: drawn.verdict,
    })
}

/// Keeps every row of the smaller binary class and appends an equally sized
/// representative sample of the other class.
pub fn get_balanced_sample(ds: &Dataset, recipe: &SampleRecipe) -> Result<BalancedOutcome> {
    recipe.validate()?;
    let mut by_label: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &l) in ds.binary_label().iter().enumerate() {
        by_label[l as usize].push(i);
    }
    let [zeros, ones] = &by_label;
    if zeros.is_empty() || ones.is_empty() {
        return Err(Error::SingleBinaryClass {
            present: u8::from(zeros.is_empty()),
        });
    }
    if zeros.len() == ones.len() {
        let dataset = ds.clone().with_step(LineageStep::Balanced {
            minority_label: None,
            minority_count: zeros.len(),
        });
        return Ok(BalancedOutcome {
            dataset,
            minority_label: None,
            minority_count: zeros.len(),
            attempts: 0,
            verdict: None,
        });
    }
    let minority_label = u8::from(ones.len() < zeros.len());
    let minority = &by_label[minority_label as usize];
    let majority = &by_label[1 - minority_label as usize];
    let m = minority.len();

    let mut rng = rng_from_seed(recipe.seed);
    let drawn = draw_similar(ds, majority, m, recipe, &mut rng)?;
    let mut rows = Vec::with_capacity(2 * m);
    rows.extend_from_slice(minority);
    rows.extend_from_slice(&drawn.rows);
    let dataset = ds
        .select_rows(&rows)
        .with_step(sampled_step(recipe.seed, &drawn))
        .with_step(LineageStep::Balanced {
            minority_label: Some(minority_label),
            minority_count: m,
        });
    Ok(BalancedOutcome {
        dataset,
        minority_label: Some(minority_label),
        minority_count: m,
        attempts: drawn.attempts,
        verdict: drawn.verdict,
    })
}
