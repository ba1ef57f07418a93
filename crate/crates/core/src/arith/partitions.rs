/// An integer partition of `n` in frequency form: `freq[k - 1]` is the number
/// `b_k` of parts equal to `k`, so that `sum_k k * b_k = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: u32,
    freq: Vec<u32>,
}

impl Partition {
    fn from_parts(n: u32, parts: &[u32]) -> Self {
        let mut freq = vec![0; n as usize];
        for &k in parts {
            freq[k as usize - 1] += 1;
        }
        Partition { n, freq }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Frequencies `b_1, ..., b_n`.
    pub fn freq(&self) -> &[u32] {
        &self.freq
    }

    /// `b_k`, zero outside `1..=n`.
    pub fn multiplicity(&self, k: u32) -> u32 {
        if k == 0 {
            return 0;
        }
        self.freq.get(k as usize - 1).copied().unwrap_or(0)
    }

    /// Total number of parts, `sum_k b_k`.
    pub fn num_parts(&self) -> u32 {
        self.freq.iter().sum()
    }

    pub fn largest_part(&self) -> Option<u32> {
        self.freq.iter().rposition(|&b| b > 0).map(|i| i as u32 + 1)
    }

    /// Pairs `(k, b_k)` with `b_k > 0`, in increasing `k`.
    pub fn nonzero(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.freq
            .iter()
            .enumerate()
            .filter(|(_, &b)| b > 0)
            .map(|(i, &b)| (i as u32 + 1, b))
    }
}

/// Streams every partition of `n` exactly once.
///
/// Order is reverse lexicographic on the non-increasing part list: `[n]` first,
/// then `[n-1, 1]`, `[n-2, 2]`, `[n-2, 1, 1]`, ..., ending with `[1, ..., 1]`.
/// `n = 0` yields the single empty partition.
pub fn partitions(n: u32) -> Partitions {
    Partitions {
        n,
        parts: if n == 0 { Vec::new() } else { vec![n] },
        done: false,
    }
}

#[derive(Debug, Clone)]
pub struct Partitions {
    n: u32,
    parts: Vec<u32>,
    done: bool,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let current = Partition::from_parts(self.n, &self.parts);

        // Advance: take the rightmost part > 1, decrease it by one and
        // redistribute the freed units (plus the trailing ones) greedily.
        match self.parts.iter().rposition(|&a| a > 1) {
            None => self.done = true,
            Some(i) => {
                let ones = (self.parts.len() - 1 - i) as u32;
                let x = self.parts[i] - 1;
                self.parts.truncate(i);
                let mut rest = ones + 1 + x;
                while rest > 0 {
                    let part = rest.min(x);
                    self.parts.push(part);
                    rest -= part;
                }
            }
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part_lists(n: u32) -> Vec<Vec<u32>> {
        partitions(n)
            .map(|p| {
                let mut v = Vec::new();
                for k in (1..=n).rev() {
                    for _ in 0..p.multiplicity(k) {
                        v.push(k);
                    }
                }
                v
            })
            .collect()
    }

    #[test]
    fn empty_partition_of_zero() {
        let all: Vec<_> = partitions(0).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].num_parts(), 0);
        assert!(all[0].freq().is_empty());
        assert_eq!(all[0].largest_part(), None);
    }

    #[test]
    fn order_for_four() {
        assert_eq!(
            part_lists(4),
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
    }

    #[test]
    fn ten_has_forty_two() {
        assert_eq!(partitions(10).count(), 42);
    }

    #[test]
    fn frequencies_sum_to_n() {
        for n in 0..=15 {
            for p in partitions(n) {
                let total: u32 = p.nonzero().map(|(k, b)| k * b).sum();
                assert_eq!(total, n);
                assert_eq!(p.freq().len(), n as usize);
            }
        }
    }

    #[test]
    fn strictly_decreasing_in_reverse_lex() {
        for n in 1..=12 {
            let lists = part_lists(n);
            for w in lists.windows(2) {
                assert!(w[0] > w[1], "{:?} !> {:?}", w[0], w[1]);
            }
        }
    }
}
