//! Finite posets with dense integer ids.
//!
//! The order is stored as up-set and down-set bit rows, so `le` and bound
//! computations are single-word operations. Input arrives as a cover (or any
//! acyclic) relation and is closed transitively; the Hasse cover relation is
//! rederived from the closure when emitting.

use crate::bits::{subsets, Bits, MAX_BITS};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("poset has no elements")]
    Empty,
    #[error("poset has {0} elements, more than the supported {MAX_BITS}")]
    TooLarge(usize),
    #[error("relation references element {0}, but there are only {1} elements")]
    OutOfRange(usize, usize),
    #[error("relation has a cycle through elements {0} and {1}")]
    Cycle(usize, usize),
    #[error("element {0} is labeled twice")]
    DuplicateLabel(usize),
}

#[derive(Clone, Debug)]
pub struct Poset {
    name: String,
    n: usize,
    /// `up[i]` is `{j | i <= j}`, including `i`.
    up: Vec<Bits>,
    /// `down[i]` is `{j | j <= i}`, including `i`.
    down: Vec<Bits>,
    labels: Vec<String>,
}

impl Poset {
    /// Builds a poset from any acyclic generating relation; `edges` entries
    /// `(i, j)` assert `i < j`. The reflexive-transitive closure is taken.
    pub fn from_edges(
        name: impl Into<String>,
        n: usize,
        edges: &[(usize, usize)],
        labels: Option<Vec<String>>,
    ) -> Result<Poset, PosetError> {
        if n == 0 {
            return Err(PosetError::Empty);
        }
        if n > MAX_BITS {
            return Err(PosetError::TooLarge(n));
        }
        let mut up = vec![Bits::EMPTY; n];
        for i in 0..n {
            up[i].insert(i);
        }
        for &(i, j) in edges {
            for &e in &[i, j] {
                if e >= n {
                    return Err(PosetError::OutOfRange(e, n));
                }
            }
            up[i].insert(j);
        }
        // Closure by iterated row union; settles in at most n rounds.
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut row = up[i];
                for j in up[i].iter() {
                    row = row.union(up[j]);
                }
                if row != up[i] {
                    up[i] = row;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    return Err(PosetError::Cycle(i, j));
                }
            }
        }
        let mut down = vec![Bits::EMPTY; n];
        for i in 0..n {
            for j in up[i].iter() {
                down[j].insert(i);
            }
        }
        let labels = match labels {
            Some(l) => {
                debug_assert_eq!(l.len(), n);
                l
            }
            None => (0..n).map(|i| format!("x{i}")).collect(),
        };
        Ok(Poset { name: name.into(), n, up, down, labels })
    }

    /// Builds a poset from an explicit order predicate (must already be a
    /// partial order; this is checked).
    pub fn from_le(
        name: impl Into<String>,
        n: usize,
        le: impl Fn(usize, usize) -> bool,
        labels: Option<Vec<String>>,
    ) -> Result<Poset, PosetError> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && le(i, j) {
                    edges.push((i, j));
                }
            }
        }
        let p = Poset::from_edges(name, n, &edges, labels)?;
        // `from_edges` closes transitively, so the input predicate must agree
        // with the closure or it was not transitive to begin with.
        for i in 0..n {
            for j in 0..n {
                debug_assert_eq!(p.le(i, j), i == j || le(i, j));
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    pub fn up_set(&self, i: usize) -> Bits {
        self.up[i]
    }

    pub fn down_set(&self, i: usize) -> Bits {
        self.down[i]
    }

    /// The Hasse cover pairs `(i, j)` with `j` covering `i`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in self.up[i].iter() {
                if j == i {
                    continue;
                }
                let between = self.up[i].inter(self.down[j]);
                if between.len() == 2 {
                    out.push((i, j));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn upper_bounds(&self, set: Bits) -> Bits {
        let mut out = Bits::full(self.n);
        for i in set.iter() {
            out = out.inter(self.up[i]);
        }
        out
    }

    pub fn lower_bounds(&self, set: Bits) -> Bits {
        let mut out = Bits::full(self.n);
        for i in set.iter() {
            out = out.inter(self.down[i]);
        }
        out
    }

    /// Least upper bound of a subset, when one exists.
    pub fn lub(&self, set: Bits) -> Option<usize> {
        let ub = self.upper_bounds(set);
        ub.iter().find(|&u| ub.is_subset(self.up[u]))
    }

    /// Greatest lower bound of a subset, when one exists.
    pub fn glb(&self, set: Bits) -> Option<usize> {
        let lb = self.lower_bounds(set);
        lb.iter().find(|&u| lb.is_subset(self.down[u]))
    }

    pub fn up_closure(&self, set: Bits) -> Bits {
        let mut out = Bits::EMPTY;
        for i in set.iter() {
            out = out.union(self.up[i]);
        }
        out
    }

    pub fn down_closure(&self, set: Bits) -> Bits {
        let mut out = Bits::EMPTY;
        for i in set.iter() {
            out = out.union(self.down[i]);
        }
        out
    }

    pub fn is_up_closed(&self, set: Bits) -> bool {
        self.up_closure(set) == set
    }

    pub fn is_down_closed(&self, set: Bits) -> bool {
        self.down_closure(set) == set
    }

    /// All down-closed subsets, sorted by size then numerically. Callable
    /// only on small posets (the down-set lattice of an n-poset is scanned
    /// over all `2^n` subsets).
    pub fn down_sets(&self) -> Vec<Bits> {
        let mut out: Vec<Bits> =
            subsets(self.n).filter(|&s| self.is_down_closed(s)).collect();
        out.sort_unstable_by_key(|s| (s.len(), s.0));
        out
    }

    /// The image of this poset under a relabeling `perm`, where element `i`
    /// becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Poset {
        let mut up = vec![Bits::EMPTY; self.n];
        let mut labels = vec![String::new(); self.n];
        for i in 0..self.n {
            for j in self.up[i].iter() {
                up[perm[i]].insert(perm[j]);
            }
            labels[perm[i]] = self.labels[i].clone();
        }
        let mut down = vec![Bits::EMPTY; self.n];
        for i in 0..self.n {
            for j in up[i].iter() {
                down[j].insert(i);
            }
        }
        Poset { name: self.name.clone(), n: self.n, up, down, labels }
    }

    /// Packs the order matrix of a poset with at most 8 elements into a word,
    /// row-major.
    fn matrix_key(&self) -> u64 {
        debug_assert!(self.n <= 8);
        let mut key = 0u64;
        for i in 0..self.n {
            for j in 0..self.n {
                key <<= 1;
                key |= self.le(i, j) as u64;
            }
        }
        key
    }

    /// Lexicographically minimal order matrix over all relabelings; the
    /// brute-force search is affordable only up to 8 elements, and `None` is
    /// returned above that (use [`isomorphic`] instead).
    pub fn canonical_key(&self) -> Option<u64> {
        if self.n > 8 {
            return None;
        }
        let mut best = u64::MAX;
        let mut perm: Vec<usize> = (0..self.n).collect();
        permute(&mut perm, 0, &mut |p| {
            let mut key = 0u64;
            for &i in p.iter() {
                for &j in p.iter() {
                    key <<= 1;
                    key |= self.le(i, j) as u64;
                }
            }
            if key < best {
                best = key;
            }
        });
        Some(best)
    }

    /// An isomorphism-invariant fingerprint: equal for isomorphic posets,
    /// and a cheap prefilter before the exact [`isomorphic`] check.
    pub fn invariant_hash(&self) -> u64 {
        let mut class: Vec<u64> = (0..self.n)
            .map(|i| fnv(&[self.down[i].len() as u64, self.up[i].len() as u64]))
            .collect();
        for _ in 0..3 {
            let mut next = Vec::with_capacity(self.n);
            for i in 0..self.n {
                let mut below: Vec<u64> =
                    self.down[i].iter().filter(|&j| j != i).map(|j| class[j]).collect();
                let mut above: Vec<u64> =
                    self.up[i].iter().filter(|&j| j != i).map(|j| class[j]).collect();
                below.sort_unstable();
                above.sort_unstable();
                let mut words = vec![class[i], 0x1d];
                words.extend(below);
                words.push(0x2e);
                words.extend(above);
                next.push(fnv(&words));
            }
            class = next;
        }
        class.sort_unstable();
        let mut words = vec![self.n as u64];
        words.extend(class);
        fnv(&words)
    }
}

/// Exact isomorphism test by backtracking, with refinement-class pruning.
pub fn isomorphic(a: &Poset, b: &Poset) -> bool {
    if a.n() != b.n() {
        return false;
    }
    if a.invariant_hash() != b.invariant_hash() {
        return false;
    }
    let n = a.n();
    let profile = |p: &Poset, i: usize| (p.down_set(i).len(), p.up_set(i).len());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| profile(a, i));
    let mut image = vec![usize::MAX; n];
    let mut used = Bits::EMPTY;

    fn assign(
        a: &Poset,
        b: &Poset,
        order: &[usize],
        depth: usize,
        image: &mut [usize],
        used: &mut Bits,
        profile: &impl Fn(&Poset, usize) -> (usize, usize),
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let i = order[depth];
        for j in 0..b.n() {
            if used.contains(j) || profile(a, i) != profile(b, j) {
                continue;
            }
            let ok = order[..depth].iter().all(|&k| {
                a.le(i, k) == b.le(j, image[k]) && a.le(k, i) == b.le(image[k], j)
            });
            if !ok {
                continue;
            }
            image[i] = j;
            used.insert(j);
            if assign(a, b, order, depth + 1, image, used, profile) {
                return true;
            }
            used.remove(j);
            image[i] = usize::MAX;
        }
        false
    }

    assign(a, b, &order, 0, &mut image, &mut used, &profile)
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// FNV-1a over a word sequence; used for fingerprints and manifest hashes.
pub fn fnv(words: &[u64]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &w in words {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// FNV-1a over bytes, for hashing serialized text.
pub fn fnv_bytes(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Poset {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Poset::from_edges(format!("c{n}"), n, &edges, None).unwrap()
    }

    #[test]
    fn closure_and_covers() {
        // Redundant transitive edge collapses to the same order.
        let p = Poset::from_edges("t", 3, &[(0, 1), (1, 2), (0, 2)], None).unwrap();
        assert!(p.le(0, 2) && p.lt(0, 1) && !p.le(2, 0));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn cycles_rejected() {
        let err = Poset::from_edges("bad", 2, &[(0, 1), (1, 0)], None).unwrap_err();
        assert!(matches!(err, PosetError::Cycle(..)));
    }

    #[test]
    fn bounds_in_a_diamond() {
        // 0 < p,q < 3 with p,q incomparable.
        let d = Poset::from_edges("d", 4, &[(0, 1), (0, 2), (1, 3), (2, 3)], None).unwrap();
        assert_eq!(d.lub(Bits(0b0110)), Some(3));
        assert_eq!(d.glb(Bits(0b0110)), Some(0));
        assert_eq!(d.lub(Bits::EMPTY), Some(0));
        assert_eq!(d.glb(Bits::EMPTY), Some(3));
        // Antichain {p,q} in the poset 0 < p,q has no upper bound.
        let v = Poset::from_edges("v", 3, &[(0, 1), (0, 2)], None).unwrap();
        assert_eq!(v.lub(Bits(0b110)), None);
        assert_eq!(v.glb(Bits(0b110)), Some(0));
    }

    #[test]
    fn down_sets_of_a_two_chain() {
        let p = chain(2);
        assert_eq!(p.down_sets(), vec![Bits::EMPTY, Bits(0b01), Bits(0b11)]);
    }

    #[test]
    fn canonical_key_is_relabeling_invariant() {
        let d = Poset::from_edges("d", 4, &[(0, 1), (0, 2), (1, 3), (2, 3)], None).unwrap();
        let shuffled = d.permuted(&[2, 0, 3, 1]);
        assert_eq!(d.canonical_key(), shuffled.canonical_key());
        assert!(isomorphic(&d, &shuffled));
        assert_eq!(d.invariant_hash(), shuffled.invariant_hash());
        // A chain of the same size is not isomorphic to the diamond.
        assert!(!isomorphic(&d, &chain(4)));
        assert_ne!(d.canonical_key(), chain(4).canonical_key());
    }
}
