//! Multi-threaded sliced evaluation. Projections are computed in parallel and
//! reduced in index order, so any thread count reproduces the sequential result.

use crate::error::{CliError, CliResult};
use cfwgan_core::distributions::SampleMatrix;
use cfwgan_core::sliced::{self, column, summarize, LinearGenerator, McEstimate, SlicedEvalConfig};
use rayon::prelude::*;

/// `terms[i][k]`: projection i, generator k.
pub fn sliced_terms(
    samples: &SampleMatrix,
    thetas: &[&LinearGenerator],
    cfg: &SlicedEvalConfig,
    threads: usize,
) -> CliResult<Vec<Vec<f64>>> {
    let eval = sliced::ProjectionTerms::new(samples, thetas, cfg)?;
    if !cfg.parallel || threads <= 1 {
        return Ok((0..cfg.n_projections)
            .map(|i| eval.terms(i))
            .collect::<Result<_, _>>()?);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} threads: {e}")))?;
    let terms: Result<Vec<_>, _> = pool.install(|| {
        (0..eval.n_projections())
            .into_par_iter()
            .map(|i| eval.terms(i))
            .collect()
    });
    Ok(terms?)
}

pub fn sliced_wq(
    samples: &SampleMatrix,
    theta: &LinearGenerator,
    cfg: &SlicedEvalConfig,
    threads: usize,
) -> CliResult<McEstimate> {
    let terms = sliced_terms(samples, &[theta], cfg, threads)?;
    Ok(summarize(&column(&terms, 0), cfg.q))
}
