//! Permutations, inversion counting, pattern statistics, right-to-left
//! minima, and the symmetries reducing all six length-3 patterns to
//! {231, 321}.
//!
//! Positions and values are 1-based throughout; the staircase returned by
//! [`rlm_staircase`] is indexed 0..=n.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A permutation of `{1..n}` in one-line notation: `get(i)` is the value at
/// position `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from one-line notation, checking that `values`
    /// is a bijection of `{1..n}`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} out of range 1..={n}"
                )));
            }
            if seen[v as usize - 1] {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Self { values })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            values: (1..=n as u32).collect(),
        }
    }

    /// The reversal `n, n-1, ..., 1`.
    pub fn reversal(n: usize) -> Self {
        Self {
            values: (1..=n as u32).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at 1-based position `i`.
    pub fn get(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.values
    }

    /// Number of inversions, i.e. pairs `i < j` with `get(i) > get(j)`.
    /// Merge counting, O(n log n).
    pub fn inversions(&self) -> u64 {
        let mut work: Vec<u32> = self.values.clone();
        let mut buf = vec![0u32; work.len()];
        merge_count(&mut work, &mut buf)
    }

    /// Number of occurrences of `pattern` (a permutation of `{1..k}` in
    /// one-line notation) as a classical pattern. Naive enumeration of
    /// k-subsets of positions; meant for oracle-scale inputs only.
    pub fn occurrences(&self, pattern: &[u32]) -> u64 {
        let n = self.len();
        let k = pattern.len();
        if k == 0 || k > n {
            return if k == 0 { 1 } else { 0 };
        }
        let mut count = 0u64;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if matches_pattern(&self.values, &idx, pattern) {
                count += 1;
            }
            // next k-combination in lexicographic order
            let mut i = k;
            loop {
                if i == 0 {
                    return count;
                }
                i -= 1;
                if idx[i] != i + n - k {
                    break;
                }
                if i == 0 {
                    return count;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Whether this permutation avoids `pattern`. Linear-time scan: the
    /// non-canonical patterns are first carried to 231 or 321 by their
    /// symmetry transform.
    pub fn avoids(&self, pattern: Pattern3) -> bool {
        match pattern {
            Pattern3::P231 => avoids_231(&self.values),
            Pattern3::P321 => avoids_321(&self.values),
            other => {
                let q = other.symmetry().apply(self);
                q.avoids(other.canonical().as_pattern())
            }
        }
    }

    /// The strict right-to-left minima `(a_i, b_i)`: pairs with
    /// `b = get(a) < a` and `b` smaller than every value at positions `> a`,
    /// listed in increasing order.
    pub fn strict_rl_minima(&self) -> RlMinima {
        let n = self.len();
        let mut positions = Vec::new();
        let mut values = Vec::new();
        let mut min_after = u32::MAX;
        for a in (1..=n).rev() {
            let b = self.get(a);
            if b < min_after {
                if (b as usize) < a {
                    positions.push(a as u32);
                    values.push(b);
                }
                min_after = b;
            }
        }
        positions.reverse();
        values.reverse();
        RlMinima {
            positions,
            values,
            n,
        }
    }

    /// The integer staircase `F(x) = min{get(c) : c > x} - 1` for
    /// `x = 0..n-1`, with `F(n) := n`. Nondecreasing, `F(x) <= x`.
    pub fn rlm_staircase(&self) -> Vec<u32> {
        let n = self.len();
        let mut f = vec![0u32; n + 1];
        f[n] = n as u32;
        let mut suffix_min = u32::MAX;
        for x in (0..n).rev() {
            suffix_min = suffix_min.min(self.get(x + 1));
            f[x] = suffix_min - 1;
        }
        f
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation(")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

fn matches_pattern(values: &[u32], idx: &[usize], pattern: &[u32]) -> bool {
    // The subsequence matches iff its values are in the same relative order
    // as the pattern: compare every pair.
    let k = idx.len();
    for a in 0..k {
        for b in a + 1..k {
            let same_order = (values[idx[a]] < values[idx[b]]) == (pattern[a] < pattern[b]);
            if !same_order {
                return false;
            }
        }
    }
    true
}

fn merge_count(v: &mut [u32], buf: &mut [u32]) -> u64 {
    let n = v.len();
    if n <= 1 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = v.split_at_mut(mid);
    let mut inv = merge_count(left, buf) + merge_count(right, buf);
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        if left[i] <= right[j] {
            buf[k] = left[i];
            i += 1;
        } else {
            buf[k] = right[j];
            inv += (left.len() - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + left.len() - i].copy_from_slice(&left[i..]);
    buf[k + left.len() - i..n].copy_from_slice(&right[j..]);
    v.copy_from_slice(&buf[..n]);
    inv
}

/// One-pass 321 test: track the largest value seen (`max1`) and the largest
/// value having some larger value before it (`max2`); a value below `max2`
/// completes a decreasing triple.
fn avoids_321(values: &[u32]) -> bool {
    let mut max1 = 0u32;
    let mut max2 = 0u32;
    for &v in values {
        if v < max2 {
            return false;
        }
        if v < max1 {
            max2 = max2.max(v);
        }
        max1 = max1.max(v);
    }
    true
}

/// Stack-sortability test: a permutation avoids 231 iff sorting it with a
/// single stack outputs 1, 2, ..., n.
fn avoids_231(values: &[u32]) -> bool {
    let mut stack: Vec<u32> = Vec::new();
    let mut next_out = 1u32;
    for &v in values {
        while let Some(&top) = stack.last() {
            if top < v {
                if top != next_out {
                    return false;
                }
                next_out += 1;
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(v);
    }
    while let Some(top) = stack.pop() {
        if top != next_out {
            return false;
        }
        next_out += 1;
    }
    true
}

/// Sorted positions/values of the strict right-to-left minima of a
/// permutation: `positions[i] > values[i]` holds for 321-avoiders, together
/// with the prefix-domination condition making the pair a valid Dyck-path
/// encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlMinima {
    /// Strictly increasing positions `a_1 < ... < a_k`, each `> 1`.
    pub positions: Vec<u32>,
    /// Strictly increasing values `b_1 < ... < b_k`, each `< n`.
    pub values: Vec<u32>,
    /// Ambient permutation size.
    pub n: usize,
}

impl RlMinima {
    pub fn new(positions: Vec<u32>, values: Vec<u32>, n: usize) -> Result<Self> {
        let pair = Self {
            positions,
            values,
            n,
        };
        pair.check()?;
        Ok(pair)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Validates the encoding: equal lengths, strictly increasing sequences,
    /// `1 < a_1`, `b_k < n`, `a_i > b_i`, and prefix domination
    /// (`#{b in B : b < m} >= #{a in A : a < m}`, strict whenever `m` is in A).
    pub fn check(&self) -> Result<()> {
        let k = self.positions.len();
        if self.values.len() != k {
            return Err(Error::InvalidRlMinima(format!(
                "positions and values have different lengths ({} vs {})",
                k,
                self.values.len()
            )));
        }
        for i in 0..k {
            let (a, b) = (self.positions[i], self.values[i]);
            if a <= b {
                return Err(Error::InvalidRlMinima(format!("a_{i} = {a} <= b_{i} = {b}")));
            }
            if a as usize > self.n || b == 0 {
                return Err(Error::InvalidRlMinima(format!(
                    "pair ({a}, {b}) out of range for n = {}",
                    self.n
                )));
            }
            if i > 0 {
                if self.positions[i - 1] >= a {
                    return Err(Error::InvalidRlMinima("positions not increasing".into()));
                }
                if self.values[i - 1] >= b {
                    return Err(Error::InvalidRlMinima("values not increasing".into()));
                }
            }
        }
        if k > 0 {
            if self.positions[0] <= 1 {
                return Err(Error::InvalidRlMinima("a_1 must exceed 1".into()));
            }
            if self.values[k - 1] as usize >= self.n {
                return Err(Error::InvalidRlMinima("b_k must be below n".into()));
            }
        }
        // prefix domination
        for m in 1..=self.n as u32 {
            let nb = self.values.iter().filter(|&&b| b < m).count();
            let na = self.positions.iter().filter(|&&a| a < m).count();
            if nb < na || (nb == na && self.positions.binary_search(&m).is_ok()) {
                return Err(Error::InvalidRlMinima(format!("domination fails at m = {m}")));
            }
        }
        Ok(())
    }

    /// Rebuilds the unique 321-avoiding permutation with these strict RL
    /// minima: values `b_i` go to positions `a_i`, and the remaining
    /// positions receive the remaining values in increasing order.
    pub fn to_permutation(&self) -> Permutation {
        let n = self.n;
        let mut out = vec![0u32; n];
        let mut used = vec![false; n + 1];
        for (a, b) in self.positions.iter().zip(&self.values) {
            out[*a as usize - 1] = *b;
            used[*b as usize] = true;
        }
        let mut next = 1u32;
        for slot in out.iter_mut() {
            if *slot == 0 {
                while used[next as usize] {
                    next += 1;
                }
                *slot = next;
                used[next as usize] = true;
            }
        }
        Permutation { values: out }
    }
}

/// The six patterns of length 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Pattern3 {
    #[serde(rename = "123")]
    P123,
    #[serde(rename = "132")]
    P132,
    #[serde(rename = "213")]
    P213,
    #[serde(rename = "231")]
    P231,
    #[serde(rename = "312")]
    P312,
    #[serde(rename = "321")]
    P321,
}

impl Pattern3 {
    pub const ALL: [Pattern3; 6] = [
        Pattern3::P123,
        Pattern3::P132,
        Pattern3::P213,
        Pattern3::P231,
        Pattern3::P312,
        Pattern3::P321,
    ];

    /// One-line notation of the pattern itself.
    pub fn one_line(self) -> [u32; 3] {
        match self {
            Pattern3::P123 => [1, 2, 3],
            Pattern3::P132 => [1, 3, 2],
            Pattern3::P213 => [2, 1, 3],
            Pattern3::P231 => [2, 3, 1],
            Pattern3::P312 => [3, 1, 2],
            Pattern3::P321 => [3, 2, 1],
        }
    }

    /// The canonical pattern this one reduces to.
    pub fn canonical(self) -> CanonicalPattern {
        match self {
            Pattern3::P231 | Pattern3::P213 | Pattern3::P312 | Pattern3::P132 => {
                CanonicalPattern::P231
            }
            Pattern3::P321 | Pattern3::P123 => CanonicalPattern::P321,
        }
    }

    /// The involutive symmetry carrying avoiders of this pattern onto
    /// avoiders of the canonical pattern (and back).
    pub fn symmetry(self) -> Symmetry {
        match self {
            Pattern3::P231 | Pattern3::P321 => Symmetry::Identity,
            Pattern3::P213 => Symmetry::Complement,
            Pattern3::P132 | Pattern3::P123 => Symmetry::Reverse,
            Pattern3::P312 => Symmetry::ReverseComplement,
        }
    }
}

impl fmt::Display for Pattern3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.one_line();
        write!(f, "{a}{b}{c}")
    }
}

impl FromStr for Pattern3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "123" => Ok(Pattern3::P123),
            "132" => Ok(Pattern3::P132),
            "213" => Ok(Pattern3::P213),
            "231" => Ok(Pattern3::P231),
            "312" => Ok(Pattern3::P312),
            "321" => Ok(Pattern3::P321),
            other => Err(Error::Parse(format!("unknown pattern {other:?}"))),
        }
    }
}

/// The two patterns the bijections and the sampler operate on directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CanonicalPattern {
    #[serde(rename = "231")]
    P231,
    #[serde(rename = "321")]
    P321,
}

impl CanonicalPattern {
    pub const BOTH: [CanonicalPattern; 2] = [CanonicalPattern::P231, CanonicalPattern::P321];

    pub fn as_pattern(self) -> Pattern3 {
        match self {
            CanonicalPattern::P231 => Pattern3::P231,
            CanonicalPattern::P321 => Pattern3::P321,
        }
    }
}

impl fmt::Display for CanonicalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_pattern())
    }
}

impl FromStr for CanonicalPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "231" => Ok(CanonicalPattern::P231),
            "321" => Ok(CanonicalPattern::P321),
            other => Err(Error::Parse(format!("pattern {other:?} is not canonical"))),
        }
    }
}

/// Involutive symmetries of the permutation square used to carry one
/// pattern class onto another. `Reverse` and `Complement` swap inversions
/// with non-inversions; their composition preserves the inversion count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Identity,
    /// `sigma(n), ..., sigma(1)`.
    Reverse,
    /// `n+1-sigma(1), ..., n+1-sigma(n)`.
    Complement,
    /// Reverse followed by complement (order immaterial: they commute).
    ReverseComplement,
}

impl Symmetry {
    pub fn apply(self, p: &Permutation) -> Permutation {
        let n = p.len() as u32;
        let values = match self {
            Symmetry::Identity => p.values.clone(),
            Symmetry::Reverse => p.values.iter().rev().copied().collect(),
            Symmetry::Complement => p.values.iter().map(|&v| n + 1 - v).collect(),
            Symmetry::ReverseComplement => p.values.iter().rev().map(|&v| n + 1 - v).collect(),
        };
        Permutation { values }
    }

    /// Whether the transform exchanges inversions and non-inversions
    /// (`inv(T(sigma)) = C(n,2) - inv(sigma)`).
    pub fn flips_inversions(self) -> bool {
        matches!(self, Symmetry::Reverse | Symmetry::Complement)
    }
}

/// Applies the symmetry associated with `pattern`, carrying its avoiders to
/// avoiders of the canonical pattern (and, being an involution, back).
pub fn symmetry_apply(pattern: Pattern3, p: &Permutation) -> Permutation {
    pattern.symmetry().apply(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 4, 2]).is_err());
        assert!(Permutation::new(vec![]).is_ok());
    }

    #[test]
    fn inversion_counts() {
        assert_eq!(Permutation::identity(5).inversions(), 0);
        assert_eq!(perm(&[4, 3, 2, 1]).inversions(), 6);
        // pairs of 2 4 1 3: (2,1), (4,1), (4,3)
        assert_eq!(perm(&[2, 4, 1, 3]).inversions(), 3);
    }

    #[test]
    fn occurrence_counts() {
        assert_eq!(perm(&[4, 3, 2, 1]).occurrences(&[3, 2, 1]), 4);
        assert_eq!(perm(&[2, 3, 1]).occurrences(&[2, 3, 1]), 1);
        assert_eq!(perm(&[3, 1, 2]).occurrences(&[2, 3, 1]), 0);
    }

    #[test]
    fn avoidance_scans() {
        assert!(Permutation::identity(6).avoids(Pattern3::P231));
        assert!(!perm(&[3, 2, 1]).avoids(Pattern3::P321));
        // 5 1 4 2 3 contains 321 (5,4,2) but no 231 occurrence.
        let p = perm(&[5, 1, 4, 2, 3]);
        assert!(p.avoids(Pattern3::P231));
        assert!(!p.avoids(Pattern3::P321));
        assert_eq!(p.occurrences(&[2, 3, 1]), 0);
        assert!(!perm(&[2, 3, 1]).avoids(Pattern3::P231));
    }

    #[test]
    fn avoids_matches_occurrences_small() {
        for n in 0..=7 {
            for p in crate::oracle::all_permutations(n) {
                for pat in Pattern3::ALL {
                    let occ = p.occurrences(&pat.one_line());
                    assert_eq!(p.avoids(pat), occ == 0, "{p:?} vs {pat}");
                }
            }
        }
    }

    #[test]
    fn strict_minima_examples() {
        assert!(Permutation::identity(4).strict_rl_minima().is_empty());
        let m = perm(&[3, 1, 2]).strict_rl_minima();
        assert_eq!(m.positions, vec![2, 3]);
        assert_eq!(m.values, vec![1, 2]);
        // Size-8 permutation with a weak minimum (fixed point) at position 5,
        // which must not be listed.
        let m = perm(&[3, 1, 4, 2, 5, 8, 6, 7]).strict_rl_minima();
        assert_eq!(m.positions, vec![2, 4, 7, 8]);
        assert_eq!(m.values, vec![1, 2, 6, 7]);
        m.check().unwrap();
    }

    #[test]
    fn minima_round_trip_via_completion() {
        let p = perm(&[3, 1, 4, 2, 5, 8, 6, 7]);
        assert!(p.avoids(Pattern3::P321));
        assert_eq!(p.strict_rl_minima().to_permutation(), p);
    }

    #[test]
    fn staircase_examples() {
        assert_eq!(Permutation::identity(3).rlm_staircase(), vec![0, 1, 2, 3]);
        assert_eq!(perm(&[3, 2, 1]).rlm_staircase(), vec![0, 0, 0, 3]);
        assert_eq!(perm(&[2, 1, 3]).rlm_staircase(), vec![0, 0, 2, 3]);
    }

    #[test]
    fn staircase_properties_small() {
        for n in 1..=7 {
            for p in crate::oracle::all_permutations(n) {
                let f = p.rlm_staircase();
                assert_eq!(f[n], n as u32);
                for x in 0..n {
                    assert!(f[x] <= x as u32);
                    assert!(f[x] <= f[x + 1]);
                }
            }
        }
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(
            Symmetry::Reverse.apply(&perm(&[1, 2, 3])),
            perm(&[3, 2, 1])
        );
        assert_eq!(
            Symmetry::Complement.apply(&perm(&[2, 3, 1])),
            perm(&[2, 1, 3])
        );
    }

    #[test]
    fn symmetries_are_involutions() {
        let p = perm(&[5, 1, 4, 2, 3]);
        for s in [
            Symmetry::Identity,
            Symmetry::Reverse,
            Symmetry::Complement,
            Symmetry::ReverseComplement,
        ] {
            assert_eq!(s.apply(&s.apply(&p)), p);
        }
    }

    #[test]
    fn symmetry_maps_avoiders_bijectively() {
        for n in 1..=6 {
            for pat in Pattern3::ALL {
                let canon = pat.canonical().as_pattern();
                let mut images = std::collections::HashSet::new();
                let mut avoider_count = 0usize;
                for p in crate::oracle::all_permutations(n) {
                    if p.avoids(pat) {
                        avoider_count += 1;
                        let q = symmetry_apply(pat, &p);
                        assert!(q.avoids(canon), "{pat}: {p:?} -> {q:?}");
                        images.insert(q);
                    }
                }
                assert_eq!(images.len(), avoider_count);
                assert_eq!(avoider_count, crate::oracle::catalan_u64(n) as usize);
            }
        }
    }

    #[test]
    fn inversions_equal_21_occurrences() {
        for n in 0..=7 {
            for p in crate::oracle::all_permutations(n) {
                assert_eq!(p.occurrences(&[2, 1]), p.inversions());
            }
        }
    }
}
