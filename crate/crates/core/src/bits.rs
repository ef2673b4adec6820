//! Word-packed bitset helpers shared by the graph and the solvers.

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline]
pub(crate) fn test(words: &[u64], i: usize) -> bool {
    words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
}

#[inline]
pub(crate) fn set(words: &mut [u64], i: usize) {
    words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
}

#[inline]
pub(crate) fn clear(words: &mut [u64], i: usize) {
    words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
}

#[inline]
pub(crate) fn count(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Mask of the valid bits in the last word of an `n`-bit row.
#[inline]
pub(crate) fn tail_mask(n: usize) -> u64 {
    match n % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// Iterates set bits in ascending order.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * WORD_BITS + b)
        })
    })
}
