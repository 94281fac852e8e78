//! Sublocales of a finite frame and the coframe they form.
//!
//! A sublocale is represented by its carrier: the subset of frame elements
//! closed under all meets and under `a -> _` for every frame element `a`.
//! Every carrier contains the top (the empty meet). The collection of all
//! sublocales ordered by inclusion is a coframe: meets are intersections,
//! and the join of a family is the meet-closure of its union. `{top}` is the
//! least sublocale (written `O`) and the whole frame the greatest.
//!
//! `c(a)` (the up-set of `a`) and `o(a)` (the image of `a -> _`) are the
//! closed and open sublocales; they are complements of one another. The
//! supplement of a sublocale is the least one that joins with it to the top;
//! iterating it twice gives the smooth kernel, and the smooth sublocales are
//! the fixed points.

use crate::bits::{subsets, Bits};
use crate::frame::{Elem, Frame};
use std::collections::HashMap;
use thiserror::Error;

pub type SubId = usize;

/// Carrier of the closed sublocale `c(a)`: all elements above `a`.
pub fn closed(f: &Frame, a: Elem) -> Bits {
    f.poset().up_set(a)
}

/// Carrier of the open sublocale `o(a)`: the image of `a -> _`.
pub fn open(f: &Frame, a: Elem) -> Bits {
    let mut out = Bits::EMPTY;
    for b in f.elements() {
        out.insert(f.heyting(a, b));
    }
    out
}

/// Whether a subset is a sublocale: contains the top, closed under binary
/// (hence all nonempty) meets, and closed under `a -> _` for every `a`.
pub fn is_sublocale(f: &Frame, s: Bits) -> bool {
    if !s.contains(f.top()) {
        return false;
    }
    for x in s.iter() {
        for y in s.iter() {
            if y > x {
                break;
            }
            if !s.contains(f.meet(x, y)) {
                return false;
            }
        }
    }
    for a in f.elements() {
        for x in s.iter() {
            if !s.contains(f.heyting(a, x)) {
                return false;
            }
        }
    }
    true
}

/// The nucleus of a sublocale: `nu(s, x)` is the least member of `s` above
/// `x` (the meet of all of them, which lies in `s`).
pub fn nu(f: &Frame, s: Bits, x: Elem) -> Elem {
    f.meet_set(s.inter(f.poset().up_set(x)))
}

/// The meet of all members of a carrier.
pub fn meet_of(f: &Frame, s: Bits) -> Elem {
    f.meet_set(s)
}

/// Meet-closure of a union of carriers: the join in the sublocale coframe.
/// An element lies in the join exactly when it is the meet of the members of
/// the union above it (the empty meet giving the top).
pub fn join_carriers(f: &Frame, parts: impl IntoIterator<Item = Bits>) -> Bits {
    let union = parts.into_iter().fold(Bits::singleton(f.top()), Bits::union);
    let mut out = Bits::EMPTY;
    for x in f.elements() {
        if f.meet_set(union.inter(f.poset().up_set(x))) == x {
            out.insert(x);
        }
    }
    out
}

/// Closure of a sublocale: the least closed sublocale containing it, which
/// is `c` of its total meet.
pub fn closure(f: &Frame, s: Bits) -> Bits {
    closed(f, meet_of(f, s))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubLatticeError {
    #[error("frame has {0} elements; sublocale enumeration is capped at {1}")]
    ElementCapExceeded(usize, usize),
    #[error("frame has at least {0} sublocales; enumeration is capped at {1}")]
    SublocaleCapExceeded(usize, usize),
}

/// Enumeration caps for [`SubLattice::enumerate`]. The subset scan is
/// exponential in the frame size, and the join and supplement tables are
/// quadratic in the sublocale count.
#[derive(Debug, Clone, Copy)]
pub struct SubCaps {
    pub max_elements: usize,
    pub max_sublocales: usize,
}

impl Default for SubCaps {
    fn default() -> Self {
        SubCaps { max_elements: 16, max_sublocales: 1024 }
    }
}

/// All sublocales of a frame, with join, meet, and supplement structure.
///
/// Ids are assigned in increasing carrier order, so id 0 is `O = {top}` and
/// the last id is the whole frame.
pub struct SubLattice {
    subs: Vec<Bits>,
    index: HashMap<u64, SubId>,
    join_tab: Vec<u32>,
    supp_tab: Vec<u32>,
    closed_ids: Vec<SubId>,
    open_ids: Vec<SubId>,
}

impl SubLattice {
    /// Scans all `2^n` subsets for sublocales and builds the tables.
    pub fn enumerate(f: &Frame, caps: SubCaps) -> Result<SubLattice, SubLatticeError> {
        let n = f.n();
        if n > caps.max_elements {
            return Err(SubLatticeError::ElementCapExceeded(n, caps.max_elements));
        }
        let mut subs = Vec::new();
        for s in subsets(n) {
            if is_sublocale(f, s) {
                subs.push(s);
                if subs.len() > caps.max_sublocales {
                    return Err(SubLatticeError::SublocaleCapExceeded(
                        subs.len(),
                        caps.max_sublocales,
                    ));
                }
            }
        }
        let index: HashMap<u64, SubId> =
            subs.iter().enumerate().map(|(i, s)| (s.0, i)).collect();
        let count = subs.len();
        let mut join_tab = vec![0u32; count * count];
        for x in 0..count {
            for y in x..count {
                let j = join_carriers(f, [subs[x], subs[y]]);
                let id = index[&j.0] as u32;
                join_tab[x * count + y] = id;
                join_tab[y * count + x] = id;
            }
        }
        let top_id = count - 1;
        let mut supp_tab = vec![0u32; count];
        for x in 0..count {
            let mut inter = Bits::full(n);
            for t in 0..count {
                if join_tab[x * count + t] == top_id as u32 {
                    inter = inter.inter(subs[t]);
                }
            }
            supp_tab[x] = index[&inter.0] as u32;
        }
        let closed_ids = f.elements().map(|a| index[&closed(f, a).0]).collect();
        let open_ids = f.elements().map(|a| index[&open(f, a).0]).collect();
        Ok(SubLattice { subs, index, join_tab, supp_tab, closed_ids, open_ids })
    }

    pub fn count(&self) -> usize {
        self.subs.len()
    }

    pub fn carrier(&self, id: SubId) -> Bits {
        self.subs[id]
    }

    pub fn carriers(&self) -> &[Bits] {
        &self.subs
    }

    pub fn id_of(&self, carrier: Bits) -> Option<SubId> {
        self.index.get(&carrier.0).copied()
    }

    /// The least sublocale `O` (carrier `{top}`).
    pub fn bottom_id(&self) -> SubId {
        0
    }

    /// The whole frame as a sublocale.
    pub fn top_id(&self) -> SubId {
        self.subs.len() - 1
    }

    pub fn le(&self, x: SubId, y: SubId) -> bool {
        self.subs[x].is_subset(self.subs[y])
    }

    pub fn join(&self, x: SubId, y: SubId) -> SubId {
        self.join_tab[x * self.subs.len() + y] as SubId
    }

    /// Meets in the sublocale coframe are intersections.
    pub fn meet(&self, x: SubId, y: SubId) -> SubId {
        self.index[&self.subs[x].inter(self.subs[y]).0]
    }

    pub fn join_many(&self, ids: impl IntoIterator<Item = SubId>) -> SubId {
        ids.into_iter().fold(self.bottom_id(), |a, b| self.join(a, b))
    }

    pub fn meet_many(&self, ids: impl IntoIterator<Item = SubId>) -> SubId {
        ids.into_iter().fold(self.top_id(), |a, b| self.meet(a, b))
    }

    pub fn closed_id(&self, a: Elem) -> SubId {
        self.closed_ids[a]
    }

    pub fn open_id(&self, a: Elem) -> SubId {
        self.open_ids[a]
    }

    /// The supplement: the least sublocale joining with this one to the
    /// whole frame (the intersection of all of them).
    pub fn supplement(&self, id: SubId) -> SubId {
        self.supp_tab[id] as SubId
    }

    /// Sublocales fixed by the double supplement; these form the smooth
    /// (Boolean) part of the coframe.
    pub fn smooth_ids(&self) -> Vec<SubId> {
        (0..self.count())
            .filter(|&s| self.supplement(self.supplement(s)) == s)
            .collect()
    }

    /// Joins of families of closed sublocales: the closure of the closed
    /// ones under binary joins, together with the empty join `O`.
    pub fn closed_join_ids(&self) -> Vec<SubId> {
        self.generated(self.closed_ids.iter().copied(), |a, b| self.join(a, b), self.bottom_id())
    }

    /// Intersections of families of open sublocales, together with the empty
    /// intersection (the whole frame).
    pub fn open_meet_ids(&self) -> Vec<SubId> {
        self.generated(self.open_ids.iter().copied(), |a, b| self.meet(a, b), self.top_id())
    }

    fn generated(
        &self,
        gens: impl Iterator<Item = SubId>,
        op: impl Fn(SubId, SubId) -> SubId,
        unit: SubId,
    ) -> Vec<SubId> {
        let mut seen = vec![false; self.count()];
        seen[unit] = true;
        let mut out = vec![unit];
        let mut queue: Vec<SubId> = gens.collect();
        while let Some(g) = queue.pop() {
            if seen[g] {
                continue;
            }
            seen[g] = true;
            out.push(g);
            for i in 0..out.len() {
                queue.push(op(out[i], g));
            }
        }
        out.sort_unstable();
        out
    }

    /// Sublocales covering `O` in the coframe.
    pub fn atoms(&self) -> Vec<SubId> {
        (0..self.count())
            .filter(|&s| {
                s != self.bottom_id()
                    && (0..self.count()).all(|t| {
                        !(t != self.bottom_id() && t != s && self.subs[t].is_subset(self.subs[s]))
                    })
            })
            .collect()
    }
}

/// Decides local closedness via the canonical pair: `S` is locally closed
/// exactly when `S = c(a) /\ o(b)` for `a` the meet of `S` and `b` the image
/// of `a` under the nucleus of the supplement. Returns that pair on success.
pub fn is_locally_closed(f: &Frame, sl: &SubLattice, id: SubId) -> Option<(Elem, Elem)> {
    let (a, b) = canonical_pair(f, sl, id);
    let rebuilt = closed(f, a).inter(open(f, b));
    (rebuilt == sl.carrier(id)).then_some((a, b))
}

/// The candidate canonical pair of any sublocale: its meet, and the nucleus
/// of its supplement applied to that meet. For locally closed sublocales
/// this is the canonical representation.
pub fn canonical_pair(f: &Frame, sl: &SubLattice, id: SubId) -> (Elem, Elem) {
    let a = meet_of(f, sl.carrier(id));
    let b = nu(f, sl.carrier(sl.supplement(id)), a);
    (a, b)
}

/// All pairs `(a, b)` with `S <= o(a) \/ c(b)`; the intersection over them
/// recovers `S`, which is the zero-dimensionality of the sublocale coframe.
pub fn zero_dim_pairs(f: &Frame, s: Bits) -> Vec<(Elem, Elem)> {
    let mut out = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            if s.is_subset(join_carriers(f, [open(f, a), closed(f, b)])) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Subfitness: whenever `a` is not below `b` there is a `c` with
/// `a \/ c = 1 != b \/ c`. Returns the first failing pair otherwise.
pub fn is_subfit(f: &Frame) -> Result<(), (Elem, Elem)> {
    for a in f.elements() {
        for b in f.elements() {
            if f.le(a, b) {
                continue;
            }
            let found = f
                .elements()
                .any(|c| f.join(a, c) == f.top() && f.join(b, c) != f.top());
            if !found {
                return Err((a, b));
            }
        }
    }
    Ok(())
}
