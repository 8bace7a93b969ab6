use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples drawn from one RNG stream.
pub const BATCH_SIZE: usize = 1 << 12;

/// Generator for batch `stream` of an experiment seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `samples` into fixed-size batches, each driven by its own stream,
/// and returns the per-batch results in batch order. The output does not
/// depend on how batches are scheduled.
pub fn run_batches<T, F>(seed: u64, samples: usize, per_batch: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync + Send,
{
    let batches = samples.div_ceil(BATCH_SIZE);
    let job = |b: usize| {
        let count = BATCH_SIZE.min(samples - b * BATCH_SIZE);
        per_batch(&mut stream_rng(seed, b as u64), count)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..batches).into_par_iter().map(job).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..batches).map(job).collect()
    }
}

/// Balanced pairwise reduction in a fixed order.
pub fn pairwise_reduce<T, F>(mut items: Vec<T>, merge: F) -> Option<T>
where
    F: Fn(T, T) -> T,
{
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(merge(a, b)),
                None => next.push(a),
            }
        }
        items = next;
    }
    items.pop()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn batches_cover_all_samples() {
        let counts = run_batches(1, 3 * BATCH_SIZE + 5, |_, c| c);
        assert_eq!(counts, vec![BATCH_SIZE, BATCH_SIZE, BATCH_SIZE, 5]);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = run_batches(9, 2 * BATCH_SIZE, |rng, _| rng.random());
        let b: Vec<u64> = run_batches(9, 2 * BATCH_SIZE, |rng, _| rng.random());
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn pairwise_order_is_fixed() {
        let joined = pairwise_reduce((0..5).map(|i| i.to_string()).collect(), |a, b| format!("({a}{b})"));
        assert_eq!(joined.unwrap(), "(((01)(23))4)");
        assert!(pairwise_reduce(Vec::<u8>::new(), |a, _| a).is_none());
    }
}
