use crate::error::{Error, Result};

/// Number of weak compositions of `total` into `parts` parts,
/// `C(total + parts − 1, parts − 1)`, saturating at `u128::MAX`.
pub fn composition_count(total: usize, parts: usize) -> u128 {
    if parts == 0 {
        return u128::from(total == 0);
    }
    let n = (total + parts - 1) as u128;
    let k = (parts - 1).min(total) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Fails with [`Error::CompositionCap`] when the enumeration would exceed
/// `cap` terms.
pub fn check_composition_cap(total: usize, parts: usize, cap: u128) -> Result<u128> {
    let count = composition_count(total, parts);
    if count > cap {
        return Err(Error::CompositionCap { count, cap });
    }
    Ok(count)
}

/// Every vector of `parts` non-negative integers summing to `total`, in
/// lexicographic order.
pub fn weak_compositions(total: usize, parts: usize) -> WeakCompositions {
    assert!(parts >= 1, "weak_compositions needs at least one part");
    let mut first = vec![0; parts];
    first[parts - 1] = total;
    WeakCompositions { next: Some(first) }
}

#[derive(Debug, Clone)]
pub struct WeakCompositions {
    next: Option<Vec<usize>>,
}

impl Iterator for WeakCompositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let last = current.len() - 1;
        let mut tail = current[last];
        let mut succ = None;
        for i in (0..last).rev() {
            if tail > 0 {
                let mut v = current.clone();
                v[i] += 1;
                v[i + 1..].iter_mut().for_each(|x| *x = 0);
                v[last] = tail - 1;
                succ = Some(v);
                break;
            }
            tail += current[i];
        }
        self.next = succ;
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumerations() {
        assert_eq!(
            weak_compositions(0, 3).collect::<Vec<_>>(),
            vec![vec![0, 0, 0]]
        );
        assert_eq!(
            weak_compositions(2, 2).collect::<Vec<_>>(),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(weak_compositions(5, 1).collect::<Vec<_>>(), vec![vec![5]]);
    }

    #[test]
    fn count_matches_stars_and_bars() {
        assert_eq!(weak_compositions(7, 11).count(), 19_448);
        assert_eq!(composition_count(7, 11), 19_448);
        for total in 0..6 {
            for parts in 1..6 {
                assert_eq!(
                    weak_compositions(total, parts).count() as u128,
                    composition_count(total, parts)
                );
            }
        }
    }

    #[test]
    fn lexicographic_unique_and_summing() {
        let all: Vec<_> = weak_compositions(4, 4).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|v| v.iter().sum::<usize>() == 4));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(check_composition_cap(7, 11, 19_448).unwrap(), 19_448);
        assert_eq!(
            check_composition_cap(7, 11, 19_447),
            Err(Error::CompositionCap {
                count: 19_448,
                cap: 19_447
            })
        );
        assert_eq!(composition_count(10_000, 10_000), u128::MAX);
    }
}
