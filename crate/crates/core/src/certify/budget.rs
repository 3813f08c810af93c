use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resource limits for one certification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    pub max_cosets: usize,
    pub max_word_length: usize,
    pub max_candidates: usize,
    #[serde(with = "duration_secs")]
    pub time_limit: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cosets: 1_000_000,
            max_word_length: 6,
            max_candidates: 200_000,
            time_limit: Duration::from_secs(300),
        }
    }
}

impl Budget {
    pub fn validate(&self) -> Result<()> {
        if self.max_cosets == 0
            || self.max_word_length == 0
            || self.max_candidates == 0
            || self.time_limit.is_zero()
        {
            return Err(Error::InvalidBudget(
                "all budget fields must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_cosets(mut self, n: usize) -> Self {
        self.max_cosets = n;
        self
    }

    pub fn with_word_length(mut self, n: usize) -> Self {
        self.max_word_length = n;
        self
    }

    pub fn with_candidates(mut self, n: usize) -> Self {
        self.max_candidates = n;
        self
    }

    pub fn with_time_limit(mut self, t: Duration) -> Self {
        self.time_limit = t;
        self
    }

    pub fn deadline(&self) -> Deadline {
        Deadline(Instant::now().checked_add(self.time_limit))
    }

    /// Coarse size class used in cache keys.
    pub fn class(&self) -> String {
        format!(
            "c{}-l{}-k{}-t{}",
            self.max_cosets,
            self.max_word_length,
            self.max_candidates,
            self.time_limit.as_secs()
        )
    }
}

/// Wall-clock cutoff derived from a budget.
#[derive(Clone, Copy, Debug)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn never() -> Self {
        Deadline(None)
    }

    pub fn within(d: Duration) -> Self {
        Deadline(Instant::now().checked_add(d))
    }

    /// The earlier of two deadlines.
    pub fn min(self, other: Deadline) -> Self {
        match (self.0, other.0) {
            (Some(a), Some(b)) => Deadline(Some(a.min(b))),
            (a, b) => Deadline(a.or(b)),
        }
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}
