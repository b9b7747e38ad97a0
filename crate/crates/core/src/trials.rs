//! Seeded randomized trials with a deterministic reduction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

/// The generator for trial `i`: the base seed picks the key, the trial index
/// picks the stream, so trials are independent of scheduling.
pub fn trial_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trial {
    /// Positive when the checked inequality holds with room to spare.
    pub margin: f64,
    pub pass: bool,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trials: u64,
    pub failures: u64,
    pub worst_margin: f64,
    pub worst_trial: Option<u64>,
    pub witness: Value,
    pub pass: bool,
}

/// Runs `n` trials in parallel. The worst trial is the first failing one if
/// any fail, otherwise the one with the smallest margin (lowest index on ties).
pub fn run_trials<F>(n: u64, seed: u64, f: F) -> Result<TrialSummary>
where
    F: Fn(u64, &mut ChaCha8Rng) -> Result<Trial> + Sync,
{
    let results: Vec<Trial> = (0..n)
        .into_par_iter()
        .map(|i| f(i, &mut trial_rng(seed, i)))
        .collect::<Result<_>>()?;
    let failures = results.iter().filter(|t| !t.pass).count() as u64;
    let worst = results
        .iter()
        .enumerate()
        .filter(|(_, t)| failures == 0 || !t.pass)
        .fold(None::<(usize, &Trial)>, |best, (i, t)| match best {
            Some((_, b)) if !(t.margin < b.margin) => best,
            _ => Some((i, t)),
        });
    Ok(TrialSummary {
        trials: n,
        failures,
        worst_margin: worst.map_or(f64::INFINITY, |(_, t)| t.margin),
        worst_trial: worst.map(|(i, _)| i as u64),
        witness: worst.map_or(Value::Null, |(_, t)| t.witness.clone()),
        pass: failures == 0,
    })
}
