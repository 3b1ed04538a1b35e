//! Threaded oracle evaluation. Terms are computed in batches of one `μ` per
//! worker and reduced in ascending `μ`, so the result does not depend on the
//! thread count.

use std::thread;

use sto_core::oracle::{sum_terms, IntegralOracle, OracleValue, QuadratureSpec};
use sto_core::Result;

/// Worker count from `NUM_THREADS`, else the available parallelism.
pub fn thread_count() -> usize {
    std::env::var("NUM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn oracle_series(
    oracle: &IntegralOracle,
    tol: f64,
    mu_max: u32,
    spec: &QuadratureSpec,
    threads: usize,
) -> Result<(OracleValue, u32)> {
    let Some(sigma) = oracle.sigma() else {
        return Ok((OracleValue { value: 0.0, error: 0.0 }, 0));
    };
    let threads = threads.max(1) as u32;
    let mut done: Vec<Result<OracleValue>> = Vec::new();
    let terms = (sigma..=mu_max).map(|mu| {
        let idx = (mu - sigma) as usize;
        if idx >= done.len() {
            let hi = (mu + threads - 1).min(mu_max);
            let batch: Vec<Result<OracleValue>> = thread::scope(|sc| {
                let hs: Vec<_> = (mu..=hi).map(|m| sc.spawn(move || oracle.mu_term(m))).collect();
                hs.into_iter().map(|h| h.join().expect("oracle worker panicked")).collect()
            });
            done.extend(batch);
        }
        done[idx].clone()
    });
    sum_terms(sigma, terms, tol, mu_max, spec)
}
