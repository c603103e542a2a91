//! Monte Carlo batches on the rayon pool.

use rayon::prelude::*;

use secsel_core::monte_carlo::{merge_ordered, simulate_batch, Tally};
use secsel_core::{McConfig, Scenario};

/// Same result as the serial `secsel_core::monte_carlo::simulate`: batches
/// run in parallel and are merged in index order.
pub fn simulate(scenario: &Scenario, config: &McConfig) -> Tally {
    let batches: Vec<Tally> = (0..config.batch_count())
        .into_par_iter()
        .map(|b| simulate_batch(scenario, config, b))
        .collect();
    merge_ordered(batches)
}
