use std::time::{Duration, Instant};

/// Soft wall-clock budget. Loops check it between units of work, so a unit
/// already started always finishes.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    start: Instant,
    limit: Option<Duration>,
}

impl Budget {
    pub fn new(limit: Duration) -> Self {
        Budget { start: Instant::now(), limit: Some(limit) }
    }

    pub fn seconds(secs: f64) -> Self {
        Self::new(Duration::from_secs_f64(secs.max(0.0)))
    }

    pub fn unlimited() -> Self {
        Budget { start: Instant::now(), limit: None }
    }

    pub fn limit(&self) -> Option<Duration> {
        self.limit
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn expired(&self) -> bool {
        match self.limit {
            Some(l) => self.start.elapsed() >= l,
            None => false,
        }
    }

    pub fn remaining(&self) -> Option<Duration> {
        self.limit.map(|l| l.saturating_sub(self.start.elapsed()))
    }

    /// A new budget starting now, worth `frac` of this budget's total limit.
    pub fn fraction(&self, frac: f64) -> Budget {
        match self.limit {
            Some(l) => Budget::new(l.mul_f64(frac)),
            None => Budget::unlimited(),
        }
    }

    /// A new budget starting now, covering what is left of this one.
    pub fn rest(&self) -> Budget {
        match self.remaining() {
            Some(r) => Budget::new(r),
            None => Budget::unlimited(),
        }
    }
}
