//! Bitset over vertex ids.

use serde::{Deserialize, Serialize};

/// A set of vertex ids backed by a bit vector.
///
/// Equality is set equality regardless of internal capacity. Serialized
/// form is the sorted list of members.
#[derive(Clone, Default, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", from = "Vec<u32>")]
pub struct VertexSet {
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Empty set with room for ids below `n` without reallocation.
    pub fn with_capacity(n: usize) -> Self {
        VertexSet {
            words: vec![0; n.div_ceil(64)],
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: u32) -> bool {
        let w = (v / 64) as usize;
        w < self.words.len() && self.words[w] >> (v % 64) & 1 == 1
    }

    /// Returns true if `v` was newly inserted.
    pub fn insert(&mut self, v: u32) -> bool {
        let w = (v / 64) as usize;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let bit = 1u64 << (v % 64);
        if self.words[w] & bit == 0 {
            self.words[w] |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    /// Returns true if `v` was present.
    pub fn remove(&mut self, v: u32) -> bool {
        let w = (v / 64) as usize;
        if w >= self.words.len() {
            return false;
        }
        let bit = 1u64 << (v % 64);
        if self.words[w] & bit != 0 {
            self.words[w] &= !bit;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, &o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Members of `0..n` not in `self`. Ids of `self` at or above `n` are
    /// ignored.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mut out = VertexSet::with_capacity(n);
        for v in 0..n as u32 {
            if !self.contains(v) {
                out.insert(v);
            }
        }
        out
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some(wi as u32 * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl From<VertexSet> for Vec<u32> {
    fn from(s: VertexSet) -> Vec<u32> {
        s.to_vec()
    }
}

impl From<Vec<u32>> for VertexSet {
    fn from(v: Vec<u32>) -> VertexSet {
        v.into_iter().collect()
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        if self.len != other.len {
            return false;
        }
        let common = self.words.len().min(other.words.len());
        if self.words[..common] != other.words[..common] {
            return false;
        }
        // capacities may differ; trailing words must be empty
        self.words[common..].iter().all(|&w| w == 0)
            && other.words[common..].iter().all(|&w| w == 0)
    }
}

impl Eq for VertexSet {}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
