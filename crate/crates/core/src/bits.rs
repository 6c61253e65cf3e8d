//! Bitstring helpers shared by every module.

use std::cmp::Ordering;

/// Hamming weight of a basis index.
#[inline]
pub fn weight(x: u64) -> u32 {
    x.count_ones()
}

#[inline]
pub fn bit(x: u64, i: usize) -> bool {
    (x >> i) & 1 == 1
}

/// Renders `x` as an `n`-character string, qubit 0 first.
pub fn to_string(x: u64, n: usize) -> String {
    (0..n).map(|i| if bit(x, i) { '1' } else { '0' }).collect()
}

/// Parses a string written qubit 0 first. Returns `None` on any character
/// other than `0`/`1` or when longer than 64 bits.
pub fn parse(s: &str) -> Option<u64> {
    if s.len() > 64 {
        return None;
    }
    let mut x = 0u64;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => x |= 1 << i,
            _ => return None,
        }
    }
    Some(x)
}

pub fn from_bools(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| if b { acc | (1 << i) } else { acc })
}

pub fn to_bools(x: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| bit(x, i)).collect()
}

/// Orders bitstrings by their printed form (qubit 0 first, `0 < 1`).
pub fn lex_cmp(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    // The first printed position that differs is the lowest differing bit.
    if bit(a, diff.trailing_zeros() as usize) {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Binomial coefficient C(n, k); exact for every value fitting in a `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Iterates all `n`-bit strings of weight `k` in increasing numeric order
/// (Gosper's hack).
pub fn fixed_weight(n: usize, k: usize) -> FixedWeight {
    assert!(n < 64, "fixed_weight supports at most 63 bits");
    let next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some((1u64 << k) - 1)
    };
    FixedWeight { next, limit: 1u64 << n }
}

pub struct FixedWeight {
    next: Option<u64>,
    limit: u64,
}

impl Iterator for FixedWeight {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let x = self.next?;
        if x >= self.limit {
            self.next = None;
            return None;
        }
        self.next = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            Some((((r ^ x) >> 2) / c) | r)
        };
        Some(x)
    }
}
