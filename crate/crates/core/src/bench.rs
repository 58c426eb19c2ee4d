//! Naive versus fast oscillator transform timing.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::modp::PrimeContext;
use crate::oscillator::{dot_naive, FastOscillator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub p: u64,
    /// Median seconds for the `O(p^2)` inner products against the family.
    pub t_naive: f64,
    /// Median seconds for the fast transform with a prebuilt plan.
    pub t_fast: f64,
    /// Largest coefficient difference between the two paths.
    pub max_diff: f64,
}

impl BenchRow {
    pub fn ratio(&self) -> f64 {
        self.t_naive / self.t_fast
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Times both transforms on one seeded random signal. Building the plan and
/// the explicit family is not timed.
pub fn bench_point(ctx: &PrimeContext, reps: usize, seed: u64) -> Result<BenchRow> {
    if reps == 0 {
        return Err(Error::Unsupported("reps must be at least 1".into()));
    }
    let plan = FastOscillator::new(ctx)?;
    let family = plan.family(ctx)?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let f: Vec<Complex64> = (0..ctx.size())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();

    let mut naive_times = Vec::with_capacity(reps);
    let mut fast_times = Vec::with_capacity(reps);
    let mut max_diff: f64 = 0.0;
    for _ in 0..reps {
        let start = Instant::now();
        let naive = dot_naive(&family, &f)?;
        naive_times.push(start.elapsed().as_secs_f64());

        let start = Instant::now();
        let fast = plan.fot(ctx, &f)?;
        fast_times.push(start.elapsed().as_secs_f64());

        let diff = fast
            .max_abs_diff(&naive)
            .ok_or_else(|| Error::Integrity("fast and naive labels differ".into()))?;
        max_diff = max_diff.max(diff);
    }
    Ok(BenchRow {
        p: ctx.p(),
        t_naive: median(naive_times),
        t_fast: median(fast_times),
        max_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bench_runs() {
        let ctx = PrimeContext::new(13).unwrap();
        let row = bench_point(&ctx, 3, 0).unwrap();
        assert!(row.max_diff < 1e-10);
        assert!(row.t_naive > 0.0 && row.t_fast > 0.0);
        assert!(bench_point(&ctx, 0, 0).is_err());
        assert!(bench_point(&PrimeContext::new(7).unwrap(), 1, 0).is_err());
    }

    #[test]
    fn median_of_even_count() {
        assert_eq!(median(vec![3.0, 1.0, 2.0, 10.0]), 2.5);
    }
}
