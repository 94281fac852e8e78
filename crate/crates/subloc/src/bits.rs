//! Subsets of a small indexed carrier, packed into a `u64`.
//!
//! Every structure in this crate (frame elements, sublocale carriers,
//! semilattice members, families of pairs) is indexed by small dense ids,
//! so one word per subset is enough everywhere.

/// Maximum number of elements a [`Bits`] set can index.
pub const MAX_BITS: usize = 64;

/// A subset of `{0, .., n-1}` for some `n <= 64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bits(pub u64);

impl Bits {
    pub const EMPTY: Bits = Bits(0);

    pub fn singleton(i: usize) -> Bits {
        debug_assert!(i < MAX_BITS);
        Bits(1 << i)
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Bits {
        debug_assert!(n <= MAX_BITS);
        if n == MAX_BITS {
            Bits(u64::MAX)
        } else {
            Bits((1u64 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_BITS && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < MAX_BITS);
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn with(self, i: usize) -> Bits {
        let mut out = self;
        out.insert(i);
        out
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Bits) -> Bits {
        Bits(self.0 | other.0)
    }

    pub fn inter(self, other: Bits) -> Bits {
        Bits(self.0 & other.0)
    }

    pub fn minus(self, other: Bits) -> Bits {
        Bits(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Bits) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Members in increasing order.
    pub fn iter(self) -> BitsIter {
        BitsIter(self.0)
    }
}

pub struct BitsIter(u64);

impl Iterator for BitsIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// All `2^n` subsets of `{0, .., n-1}`, in increasing numeric order.
pub fn subsets(n: usize) -> impl Iterator<Item = Bits> {
    debug_assert!(n < 32, "subset scan over {n} elements is not feasible");
    (0u64..1 << n).map(Bits)
}

/// All nonempty subsets of the given set, in increasing numeric order.
pub fn subsets_of(set: Bits) -> impl Iterator<Item = Bits> {
    // Standard submask walk, reordered to ascend.
    let mask = set.0;
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some(cur.wrapping_sub(mask) & mask) };
        Some(Bits(cur))
    })
    .skip(1)
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        let mut sep = "";
        for i in self.iter() {
            write!(f, "{sep}{i}")?;
            sep = ",";
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_walks_cover_everything() {
        let all: Vec<Bits> = subsets(4).collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0], Bits::EMPTY);
        assert_eq!(all[15], Bits::full(4));

        let inner: Vec<Bits> = subsets_of(Bits(0b1011)).collect();
        assert_eq!(inner.len(), 7);
        assert!(inner.iter().all(|s| !s.is_empty() && s.is_subset(Bits(0b1011))));
        // Ascending and duplicate-free.
        assert!(inner.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn set_algebra() {
        let s = Bits::singleton(3).with(5);
        assert_eq!(s.len(), 2);
        assert!(s.contains(5) && !s.contains(4));
        assert_eq!(s.union(Bits::singleton(4)).len(), 3);
        assert_eq!(s.inter(Bits::singleton(5)), Bits::singleton(5));
        assert_eq!(s.minus(Bits::singleton(5)), Bits::singleton(3));
        assert!(Bits::EMPTY.is_subset(s) && s.is_subset(Bits::full(6)));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 5]);
    }
}
