//! Bitmask indexing of the standard basis `e^I` of `Λ^k` over a space of
//! dimension `dim = 2n`.
//!
//! Bit `i` of a mask stands for the covector `e^{i+1}`. Basis elements of a
//! fixed degree are stored in increasing mask order, which is colexicographic
//! order, so the combinatorial number system gives an O(k) rank.

/// Largest ambient dimension supported by the tables (n <= 16).
pub const MAX_DIM: usize = 32;

const fn binomial_table() -> [[u64; MAX_DIM + 1]; MAX_DIM + 1] {
    let mut t = [[0u64; MAX_DIM + 1]; MAX_DIM + 1];
    let mut n = 0;
    while n <= MAX_DIM {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOMIAL: [[u64; MAX_DIM + 1]; MAX_DIM + 1] = binomial_table();

/// `C(n, k)`, zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        BINOMIAL[n][k] as usize
    }
}

/// Position of `mask` among the masks with the same popcount.
#[inline]
pub fn rank(mask: u32) -> usize {
    let mut r = 0;
    let mut m = mask;
    let mut i = 1;
    while m != 0 {
        let c = m.trailing_zeros() as usize;
        r += binomial(c, i);
        i += 1;
        m &= m - 1;
    }
    r
}

/// Inverse of [`rank`] for masks of popcount `k`.
pub fn unrank(mut r: usize, k: usize) -> u32 {
    let mut mask = 0u32;
    for i in (1..=k).rev() {
        let mut c = i - 1;
        while binomial(c + 1, i) <= r {
            c += 1;
        }
        r -= binomial(c, i);
        mask |= 1 << c;
    }
    mask
}

/// All masks of popcount `k` below `1 << dim`, in increasing order.
pub fn masks(dim: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << dim;
    let mut next = if k > dim { limit } else { (1u64 << k) - 1 };
    let mut done = k > dim;
    std::iter::from_fn(move || {
        if done || next >= limit {
            return None;
        }
        let cur = next;
        if cur == 0 {
            done = true;
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            next = (((r ^ cur) >> 2) / c) | r;
        }
        Some(cur as u32)
    })
}

/// Sign of `e^A ∧ e^B` relative to `e^{A ∪ B}`; zero if they overlap.
#[inline]
pub fn wedge_sign(a: u32, b: u32) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    let mut m = b;
    while m != 0 {
        let j = m.trailing_zeros();
        swaps += (a >> j).count_ones();
        m &= m - 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign picked up by the interior product `ι_{∂_i} e^I` for `i ∈ I`.
#[inline]
pub fn contraction_sign(i: u32, mask: u32) -> i32 {
    if (mask & ((1u32 << i) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Mask with the lowest `dim` bits set.
#[inline]
pub fn full_mask(dim: usize) -> u32 {
    if dim == 32 {
        u32::MAX
    } else {
        (1u32 << dim) - 1
    }
}

/// One-based covector indices of a mask, the external JSON convention.
pub fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

pub fn indices_to_mask(idx: &[usize]) -> Option<u32> {
    let mut mask = 0u32;
    for &i in idx {
        if i == 0 || i > MAX_DIM || mask & (1 << (i - 1)) != 0 {
            return None;
        }
        mask |= 1 << (i - 1);
    }
    Some(mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_matches_enumeration() {
        for dim in 0..=10 {
            for k in 0..=dim {
                let all: Vec<u32> = masks(dim, k).collect();
                assert_eq!(all.len(), binomial(dim, k));
                for (pos, &m) in all.iter().enumerate() {
                    assert_eq!(rank(m), pos);
                    assert_eq!(unrank(pos, k), m);
                }
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn signs() {
        // e1 ^ e2 = e12, e2 ^ e1 = -e12
        assert_eq!(wedge_sign(0b01, 0b10), 1);
        assert_eq!(wedge_sign(0b10, 0b01), -1);
        assert_eq!(wedge_sign(0b01, 0b01), 0);
        // e13 ^ e2 = -e123
        assert_eq!(wedge_sign(0b101, 0b010), -1);
        // i_{∂2} e12 = -e1
        assert_eq!(contraction_sign(1, 0b11), -1);
        assert_eq!(contraction_sign(0, 0b11), 1);
    }

    #[test]
    fn index_roundtrip() {
        let m = indices_to_mask(&[1, 3, 4]).unwrap();
        assert_eq!(m, 0b1101);
        assert_eq!(mask_to_indices(m), vec![1, 3, 4]);
        assert!(indices_to_mask(&[2, 2]).is_none());
        assert!(indices_to_mask(&[0]).is_none());
    }
}
