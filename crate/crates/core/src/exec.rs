//! Order-preserving map over independent jobs, on a bounded rayon pool when
//! the `parallel` feature is enabled.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    Sequential,
    /// One worker per logical processor.
    #[default]
    Parallel,
    /// At most this many workers.
    Bounded(usize),
}

impl Schedule {
    pub fn with_jobs(jobs: Option<usize>) -> Schedule {
        match jobs {
            None => Schedule::Parallel,
            Some(0 | 1) => Schedule::Sequential,
            Some(n) => Schedule::Bounded(n),
        }
    }
}

pub fn map<T, R, F>(items: &[T], schedule: Schedule, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let threads = match schedule {
            Schedule::Sequential => return items.iter().map(f).collect(),
            Schedule::Parallel => 0,
            Schedule::Bounded(n) => n,
        };
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            Err(_) => items.iter().map(f).collect(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = schedule;
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_under_every_schedule() {
        let items: Vec<u64> = (0..200).collect();
        let expected: Vec<u64> = items.iter().map(|x| x * x).collect();
        for s in [Schedule::Sequential, Schedule::Parallel, Schedule::Bounded(3)] {
            assert_eq!(map(&items, s, |x| x * x), expected);
        }
    }

    #[test]
    fn job_counts() {
        assert_eq!(Schedule::with_jobs(Some(1)), Schedule::Sequential);
        assert_eq!(Schedule::with_jobs(Some(4)), Schedule::Bounded(4));
        assert_eq!(Schedule::with_jobs(None), Schedule::Parallel);
    }
}
