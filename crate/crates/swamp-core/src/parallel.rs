//! Deterministic fork-join helper: results are assembled positionally, so the
//! output never depends on the thread count or schedule.

use alloc::vec::Vec;

#[cfg(feature = "std")]
pub(crate) fn par_map_indexed<T, F>(len: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if threads <= 1 || len < 2 {
        return (0..len).map(f).collect();
    }
    let workers = threads.min(len);
    let chunk = len.div_ceil(workers);
    let mut out = Vec::with_capacity(len);
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..workers)
            .map(|t| {
                let start = t * chunk;
                let end = ((t + 1) * chunk).min(len);
                scope.spawn(move || (start..end).map(f).collect::<Vec<T>>())
            })
            .collect();
        for handle in handles {
            out.extend(handle.join().expect("worker panicked"));
        }
    });
    out
}

#[cfg(not(feature = "std"))]
pub(crate) fn par_map_indexed<T, F>(len: usize, _threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..len).map(f).collect()
}
