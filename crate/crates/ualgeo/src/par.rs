//! Deterministic fork-join helper for the per-system verification loops.
//!
//! Work items are distributed by stride over scoped threads and the results
//! are reassembled in index order, so the output is identical for every
//! `jobs` value.

/// Apply `f` to `0..count` with up to `jobs` worker threads, collecting the
/// results in index order.
pub fn parallel_map<T, F>(count: usize, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if jobs <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    let workers = jobs.min(count);
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    let mut part = Vec::new();
                    let mut i = w;
                    while i < count {
                        part.push((i, f(i)));
                        i += workers;
                    }
                    part
                })
            })
            .collect();
        for handle in handles {
            for (i, value) in handle.join().expect("worker panicked") {
                slots[i] = Some(value);
            }
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.expect("every index is covered"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_job_count() {
        let serial = parallel_map(100, 1, |i| i * i);
        for jobs in [2, 3, 4, 7] {
            assert_eq!(parallel_map(100, jobs, |i| i * i), serial);
        }
    }

    #[test]
    fn empty_and_single_inputs() {
        assert_eq!(parallel_map(0, 4, |i| i), Vec::<usize>::new());
        assert_eq!(parallel_map(1, 4, |i| i + 1), vec![1]);
    }
}
