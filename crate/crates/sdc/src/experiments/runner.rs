//! Parallel shot execution with per-shot random substreams.
//!
//! Shot `s` of sweep point `i` draws from `shot_rng(seed, (i << 40) | s)`,
//! so every count is a pure function of `(seed, i, s)` and the sum does not
//! depend on how shots are split across workers.

use std::ops::Add;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sdc_core::sim::shot_rng;

/// Shots per point are limited so that the point index fits above them.
pub const MAX_SHOTS: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub failures: u64,
    pub attempts: u64,
    pub accepted: u64,
}

impl Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            failures: self.failures + o.failures,
            attempts: self.attempts + o.attempts,
            accepted: self.accepted + o.accepted,
        }
    }
}

/// Random stream of one shot.
pub fn point_shot_rng(seed: u64, point: usize, shot: u64) -> ChaCha8Rng {
    debug_assert!(shot < MAX_SHOTS);
    shot_rng(seed, ((point as u64) << 40) | shot)
}

pub struct Runner {
    pool: rayon::ThreadPool,
    seed: u64,
    heartbeat: bool,
}

impl Runner {
    /// `workers = 0` uses every available core.
    pub fn new(seed: u64, workers: usize, heartbeat: bool) -> anyhow::Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()?;
        Ok(Runner {
            pool,
            seed,
            heartbeat,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `shots` shots of sweep point `point` and sums their tallies.
    /// With heartbeats enabled, progress and an ETA go to standard error.
    pub fn run<F>(&self, label: &str, point: usize, shots: u64, shot: F) -> Tally
    where
        F: Fn(&mut ChaCha8Rng) -> Tally + Sync,
    {
        assert!(shots <= MAX_SHOTS, "at most 2^40 shots per point");
        let chunk = (shots / 20).max(1);
        let start = Instant::now();
        let mut last_beat = start;
        let mut total = Tally::default();
        let mut done = 0;
        while done < shots {
            let end = (done + chunk).min(shots);
            total = total
                + self.pool.install(|| {
                    (done..end)
                        .into_par_iter()
                        .map(|s| shot(&mut point_shot_rng(self.seed, point, s)))
                        .reduce(Tally::default, Add::add)
                });
            done = end;
            if self.heartbeat && (last_beat.elapsed().as_secs_f64() >= 2.0 || done == shots) {
                last_beat = std::time::Instant::now();
                let elapsed = start.elapsed().as_secs_f64();
                let eta = elapsed * (shots - done) as f64 / done as f64;
                eprintln!(
                    "[{label}] {done}/{shots} shots ({:.0}%), {} failures, elapsed {elapsed:.1}s, eta {eta:.1}s",
                    100.0 * done as f64 / shots as f64,
                    total.failures
                );
            }
        }
        total
    }
}
