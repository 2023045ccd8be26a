//! A small scoped worker pool for independent suite items.
//!
//! The worker count is `COINV_THREADS` when set (minimum 1), otherwise the
//! machine's available parallelism. Jobs are striped across workers and the
//! results are returned in input order, so output stays deterministic
//! regardless of the cap.

use std::sync::atomic::{AtomicUsize, Ordering};

pub fn thread_cap() -> usize {
    if let Ok(text) = std::env::var("COINV_THREADS") {
        if let Ok(n) = text.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Runs every job, using up to `thread_cap()` worker threads, and collects
/// the results in input order.
pub fn run_all<T, F>(jobs: Vec<F>) -> Vec<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let total = jobs.len();
    let cap = thread_cap().min(total);
    if cap <= 1 {
        return jobs.into_iter().map(|job| job()).collect();
    }
    let mut slots: Vec<Option<T>> = (0..total).map(|_| None).collect();
    let pending: Vec<std::sync::Mutex<Option<F>>> =
        jobs.into_iter().map(|job| std::sync::Mutex::new(Some(job))).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(cap);
        for _ in 0..cap {
            let pending = &pending;
            let next = &next;
            handles.push(scope.spawn(move || {
                let mut done = Vec::new();
                loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    if idx >= pending.len() {
                        return done;
                    }
                    let job = pending[idx]
                        .lock()
                        .expect("job slot poisoned")
                        .take()
                        .expect("each job index is claimed once");
                    done.push((idx, job()));
                }
            }));
        }
        for handle in handles {
            for (idx, value) in handle.join().expect("suite worker panicked") {
                slots[idx] = Some(value);
            }
        }
    });
    slots.into_iter().map(|slot| slot.expect("every job ran")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_keep_input_order() {
        let jobs: Vec<_> = (0..37)
            .map(|i| move || i * i)
            .collect();
        let out = run_all(jobs);
        assert_eq!(out, (0..37).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn empty_job_list_is_fine() {
        let jobs: Vec<Box<dyn FnOnce() -> i32 + Send>> = Vec::new();
        assert!(run_all(jobs).is_empty());
    }
}
