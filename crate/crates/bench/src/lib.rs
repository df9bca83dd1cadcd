//! Inputs shared by the benchmarks.

use amproc::models::suppes::SuppesParams;
use amproc::MarkovChain;

/// A dense chain on `d` states with every row distinct and strictly positive.
pub fn dense_chain(d: usize) -> MarkovChain {
    let rows = (0..d)
        .map(|i| {
            let raw: Vec<f64> = (0..d)
                .map(|j| 1.0 + ((i * 7 + j * 13) % 11) as f64)
                .collect();
            let sum: f64 = raw.iter().sum();
            raw.into_iter().map(|x| x / sum).collect()
        })
        .collect();
    MarkovChain::from_rows(rows).expect("rows are stochastic")
}

/// Suppes parameters with a lazy nearest-neighbour response kernel.
pub fn suppes_params(n_patterns: usize, k: usize) -> SuppesParams {
    let mut pi = vec![vec![0.0; k]; k];
    for (i, row) in pi.iter_mut().enumerate() {
        row[i] += 0.5;
        row[(i + 1) % k] += 0.25;
        row[(i + k - 1) % k] += 0.25;
    }
    let lambda = (0..k).map(|_| vec![1.0 / k as f64; k]).collect();
    SuppesParams::new(n_patterns, lambda, pi).expect("kernels are stochastic")
}
