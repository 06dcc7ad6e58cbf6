/// Limits shared by every certified computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest enclosure precision (in bits) any refinement loop may request.
    pub max_bits: u32,
    /// Largest number of candidate tuples a pigeonhole enumeration may visit.
    pub enumeration_cap: u64,
}

impl Config {
    pub const DEFAULT_MAX_BITS: u32 = 4096;
    pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

    pub fn new(max_bits: u32, enumeration_cap: u64) -> Self {
        Config {
            max_bits,
            enumeration_cap,
        }
    }

    /// Precision schedule: `start`, `2·start`, ... capped at `max_bits`,
    /// always ending with `max_bits` itself.
    pub(crate) fn precisions(&self, start: u32) -> impl Iterator<Item = u32> {
        let max = self.max_bits;
        let mut next = Some(start.clamp(1, max.max(1)));
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= max {
                None
            } else {
                Some(cur.saturating_mul(2).min(max))
            };
            Some(cur)
        })
    }
}

impl Default for Config {
    fn default() -> Self {
        Config::new(Self::DEFAULT_MAX_BITS, Self::DEFAULT_ENUMERATION_CAP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_schedule_doubles_and_ends_at_max() {
        let cfg = Config::new(100, 10);
        let bits: Vec<u32> = cfg.precisions(16).collect();
        assert_eq!(bits, vec![16, 32, 64, 100]);
        let bits: Vec<u32> = cfg.precisions(500).collect();
        assert_eq!(bits, vec![100]);
    }
}
