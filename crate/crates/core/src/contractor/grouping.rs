use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::MatchingDecomposition;
use crate::error::{Error, Result};

/// Largest `j` with `(4/3)^j ≤ size`, for `size ≥ 1`.
fn bucket_of(size: usize) -> u32 {
    let size = BigUint::from(size);
    let (mut four, mut three) = (BigUint::from(4u32), BigUint::from(3u32));
    let mut j = 0;
    while four <= &size * &three {
        j += 1;
        four *= 4u32;
        three *= 3u32;
    }
    j
}

/// Buckets matchings by size into `[(4/3)^j, (4/3)^{j+1})` and keeps the
/// bucket holding the most edges, preferring larger sizes on ties.
///
/// Returns `r0`, the smallest size in the kept bucket, and the kept matchings
/// in their original order. Every kept size lies in `[r0, 4/3 · r0)`.
pub fn group_by_size(d: &MatchingDecomposition) -> Result<(usize, MatchingDecomposition)> {
    let mut buckets: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for m in d.matchings().iter().filter(|m| !m.is_empty()) {
        let entry = buckets.entry(bucket_of(m.len())).or_insert((0, usize::MAX));
        entry.0 += m.len();
        entry.1 = entry.1.min(m.len());
    }
    let (&bucket, &(_, r0)) = buckets
        .iter()
        .max_by_key(|&(&j, &(edges, _))| (edges, j))
        .ok_or_else(|| Error::input("decomposition has no nonempty matching"))?;
    let kept = d
        .matchings()
        .iter()
        .filter(|m| !m.is_empty() && bucket_of(m.len()) == bucket)
        .cloned()
        .collect();
    Ok((
        r0,
        MatchingDecomposition::new(d.n_left(), d.n_right(), kept)?,
    ))
}
