use num_traits::One;

use super::BigInt;

/// Sieve of Eratosthenes; `is_prime[k]` for `0 <= k <= n`.
fn sieve(n: usize) -> Vec<bool> {
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    if n >= 1 {
        is_prime[1] = false;
    }
    let mut p = 2;
    while p * p <= n {
        if is_prime[p] {
            let mut m = p * p;
            while m <= n {
                is_prime[m] = false;
                m += p;
            }
        }
        p += 1;
    }
    is_prime
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    sieve(n as usize)
        .iter()
        .enumerate()
        .filter_map(|(k, &p)| p.then_some(k as u64))
        .collect()
}

/// Number of primes `<= n`.
pub fn prime_count(n: u64) -> u64 {
    sieve(n as usize).iter().filter(|&&p| p).count() as u64
}

/// `lcm(1, 2, ..., n)` as the product of the largest prime powers `<= n`.
/// The empty lcm (`n = 0`) is 1.
pub fn lcm_upto(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for p in primes_upto(n) {
        let mut pk = p;
        while let Some(next) = pk.checked_mul(p).filter(|&v| v <= n) {
            pk = next;
        }
        acc *= pk;
    }
    acc
}

/// Iterator over `(n, lcm(1..n))` for `n = 1, 2, ..., limit`, updated
/// incrementally: `V(n) = V(n-1) * p` when `n` is a power of the prime `p`
/// and `V(n) = V(n-1)` otherwise.
pub struct LcmSequence {
    smallest_factor: Vec<u32>,
    n: u64,
    current: BigInt,
}

impl LcmSequence {
    pub fn new(limit: u64) -> Self {
        let limit = limit as usize;
        let mut smallest_factor = vec![0u32; limit + 1];
        for k in 2..=limit {
            if smallest_factor[k] == 0 {
                let mut m = k;
                while m <= limit {
                    if smallest_factor[m] == 0 {
                        smallest_factor[m] = k as u32;
                    }
                    m += k;
                }
            }
        }
        LcmSequence {
            smallest_factor,
            n: 0,
            current: BigInt::one(),
        }
    }

    /// `Some(p)` when `n = p^k` for a prime `p` and `k >= 1`.
    fn prime_power_base(&self, n: u64) -> Option<u64> {
        if n < 2 {
            return None;
        }
        let p = self.smallest_factor[n as usize] as u64;
        let mut m = n;
        while m.is_multiple_of(p) {
            m /= p;
        }
        (m == 1).then_some(p)
    }
}

impl Iterator for LcmSequence {
    type Item = (u64, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.n + 1;
        if n as usize >= self.smallest_factor.len() {
            return None;
        }
        self.n = n;
        if let Some(p) = self.prime_power_base(n) {
            self.current *= p;
        }
        Some((n, self.current.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    #[test]
    fn prime_counts() {
        assert_eq!(prime_count(0), 0);
        assert_eq!(prime_count(1), 0);
        assert_eq!(prime_count(2), 1);
        assert_eq!(prime_count(10), 4);
        assert_eq!(prime_count(100), 25);
    }

    #[test]
    fn small_lcms() {
        assert_eq!(lcm_upto(0), BigInt::one());
        assert_eq!(lcm_upto(1), BigInt::one());
        assert_eq!(lcm_upto(10), BigInt::from(2520));
    }

    #[test]
    fn lcm_matches_pairwise_fold() {
        // independent route: fold lcm over 1..=n
        let mut fold = BigInt::one();
        let mut seq = LcmSequence::new(300);
        for n in 1..=300u64 {
            fold = fold.lcm(&BigInt::from(n));
            assert_eq!(lcm_upto(n), fold, "n = {n}");
            assert_eq!(seq.next(), Some((n, fold.clone())));
        }
        assert_eq!(seq.next(), None);
    }

    #[test]
    fn lcm_recurrence_and_divisibility() {
        let values: Vec<BigInt> = LcmSequence::new(10_000).map(|(_, v)| v).collect();
        for n in 2..=10_000usize {
            let prev = &values[n - 2];
            let cur = &values[n - 1];
            assert_eq!(*cur, prev.lcm(&BigInt::from(n)));
            assert!((cur * BigInt::from(n + 1)).is_multiple_of(prev));
        }
    }
}
