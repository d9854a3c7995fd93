//! Colexicographic enumeration of small subsets.

/// Number of non-empty subsets of size at most `t` of an `m`-set, saturating.
pub(crate) fn count_up_to(m: usize, t: usize) -> u64 {
    let mut total: u64 = 0;
    let mut binom: u64 = 1;
    for k in 1..=t.min(m) {
        // C(m, k) = C(m, k-1) * (m - k + 1) / k
        binom = match binom.checked_mul((m - k + 1) as u64) {
            Some(v) => v / k as u64,
            None => return u64::MAX,
        };
        total = total.saturating_add(binom);
    }
    total
}

/// Calls `f` on every subset of `{1..m}` with `1 <= |S| <= t`: sizes
/// ascending, colexicographic within a size. Stops at the first `Err`.
pub(crate) fn for_each_subset<E>(
    m: usize,
    t: usize,
    mut f: impl FnMut(&[usize]) -> Result<(), E>,
) -> Result<(), E> {
    for k in 1..=t.min(m) {
        let mut c: Vec<usize> = (1..=k).collect();
        loop {
            f(&c)?;
            // advance to the colex successor
            let mut j = 0;
            while j < k {
                let limit = if j + 1 < k { c[j + 1] } else { m + 1 };
                if c[j] + 1 < limit {
                    break;
                }
                j += 1;
            }
            if j == k {
                break;
            }
            c[j] += 1;
            for (i, v) in c.iter_mut().enumerate().take(j) {
                *v = i + 1;
            }
        }
    }
    Ok(())
}
