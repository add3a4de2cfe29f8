// SPDX-License-Identifier: Apache-2.0

use std::thread;
use std::time::{Duration, Instant};

/// Millisecond time source for a run. `now` never decreases.
pub trait Clock {
    fn now(&self) -> u64;
    fn sleep(&mut self, ms: u64);
}

/// Simulated time: starts at zero and moves only through `sleep`, by
/// exactly the requested amount.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VirtualClock {
    now: u64,
}

impl VirtualClock {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Clock for VirtualClock {
    fn now(&self) -> u64 {
        self.now
    }

    fn sleep(&mut self, ms: u64) {
        self.now += ms;
    }
}

/// Wall-clock time since construction. `sleep` blocks the thread for at
/// least the requested time.
#[derive(Debug, Clone, Copy)]
pub struct RealClock {
    start: Instant,
}

impl RealClock {
    pub fn new() -> Self {
        RealClock {
            start: Instant::now(),
        }
    }
}

impl Default for RealClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for RealClock {
    fn now(&self) -> u64 {
        self.start.elapsed().as_millis() as u64
    }

    fn sleep(&mut self, ms: u64) {
        thread::sleep(Duration::from_millis(ms));
    }
}
