//! Locally closed sublocales as canonical pairs.
//!
//! A sublocale is locally closed when it is an intersection `c(a) /\ o(b)`.
//! Among all such representations there is a canonical one: require `a <= b`
//! and `b -> a = a`. The canonical pairs ordered by containment of the
//! sublocales they present form a join-semilattice `LC`; the order reverses
//! inclusion, so the top pair `(1, 1)` presents the least sublocale `O` and
//! the bottom pair `(0, 1)` presents the whole frame.
//!
//! The join of two canonical pairs presents the intersection of their
//! sublocales and is computed componentwise followed by normalization.
//! Meets, when they exist, present joins of sublocales; a family of pairs
//! has a meet that behaves well under the correspondence exactly when the
//! presented join of sublocales is again locally closed.

use crate::bits::Bits;
use crate::frame::{Elem, Frame};
use crate::poset::Poset;
use crate::sublocale::{self, SubId, SubLattice};
use std::collections::HashMap;
use std::fmt;

/// A canonical pair: `lo <= hi` and `hi -> lo = lo`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LcPair {
    pub lo: Elem,
    pub hi: Elem,
}

impl fmt::Debug for LcPair {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "({}, {})", self.lo, self.hi)
    }
}

impl LcPair {
    /// Renders the pair with frame labels, e.g. `(a, b)`.
    pub fn display(&self, f: &Frame) -> String {
        format!("({}, {})", f.label(self.lo), f.label(self.hi))
    }
}

/// Whether a pair is canonical.
pub fn is_canonical(f: &Frame, lo: Elem, hi: Elem) -> bool {
    f.le(lo, hi) && f.heyting(hi, lo) == lo
}

/// Normalizes any pair to the canonical pair presenting the same sublocale
/// `c(lo) /\ o(hi)`: replace `lo` by `hi -> lo`, then lift `hi` above it.
pub fn lc_normalize(f: &Frame, lo: Elem, hi: Elem) -> LcPair {
    let l = f.heyting(hi, lo);
    let p = LcPair { lo: l, hi: f.join(l, hi) };
    debug_assert!(is_canonical(f, p.lo, p.hi));
    debug_assert_eq!(lc_carrier(f, p), lc_carrier(f, LcPair { lo, hi }));
    p
}

/// Carrier of the sublocale a pair presents: `c(lo) /\ o(hi)`.
pub fn lc_carrier(f: &Frame, p: LcPair) -> Bits {
    sublocale::closed(f, p.lo).inter(sublocale::open(f, p.hi))
}

/// The containment order on presented sublocales, stated on canonical pairs:
/// `c(a) /\ o(b) <= c(x) /\ o(y)` exactly when `x <= a` and `b <= a \/ y`.
/// As an order on pairs it runs opposite to inclusion, so here
/// `le(p, q)` means the sublocale of `q` is contained in the sublocale of `p`.
pub fn lc_le(f: &Frame, p: LcPair, q: LcPair) -> bool {
    f.le(p.lo, q.lo) && f.le(q.hi, f.join(q.lo, p.hi))
}

/// Join of canonical pairs: presents the intersection of the sublocales.
pub fn lc_join(f: &Frame, p: LcPair, q: LcPair) -> LcPair {
    lc_normalize(f, f.join(p.lo, q.lo), f.meet(p.hi, q.hi))
}

/// The join-semilattice of all canonical pairs of a frame, with pairs listed
/// in increasing `(lo, hi)` order.
pub struct LcSemilattice {
    pairs: Vec<LcPair>,
    index: HashMap<LcPair, usize>,
    join_tab: Vec<u32>,
}

pub type LcId = usize;

impl LcSemilattice {
    pub fn enumerate(f: &Frame) -> LcSemilattice {
        let mut pairs = Vec::new();
        for lo in f.elements() {
            for hi in f.elements() {
                if is_canonical(f, lo, hi) {
                    pairs.push(LcPair { lo, hi });
                }
            }
        }
        pairs.sort_unstable();
        let index: HashMap<LcPair, usize> =
            pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let count = pairs.len();
        let mut join_tab = vec![0u32; count * count];
        for x in 0..count {
            for y in x..count {
                let id = index[&lc_join(f, pairs[x], pairs[y])] as u32;
                join_tab[x * count + y] = id;
                join_tab[y * count + x] = id;
            }
        }
        LcSemilattice { pairs, index, join_tab }
    }

    pub fn count(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, id: LcId) -> LcPair {
        self.pairs[id]
    }

    pub fn pairs(&self) -> &[LcPair] {
        &self.pairs
    }

    pub fn id_of(&self, p: LcPair) -> Option<LcId> {
        self.index.get(&p).copied()
    }

    pub fn join(&self, x: LcId, y: LcId) -> LcId {
        self.join_tab[x * self.pairs.len() + y] as LcId
    }

    /// The top pair `(1, 1)`, presenting `O`.
    pub fn top_id(&self, f: &Frame) -> LcId {
        self.index[&LcPair { lo: f.top(), hi: f.top() }]
    }

    /// The bottom pair `(0, 1)`, presenting the whole frame.
    pub fn bottom_id(&self, f: &Frame) -> LcId {
        self.index[&LcPair { lo: f.bottom(), hi: f.top() }]
    }

    /// The underlying order as a poset, for semilattice constructions.
    /// Element `i` is pair `pairs()[i]`; labels carry the pair display.
    pub fn to_poset(&self, f: &Frame) -> Poset {
        let labels: Vec<String> = self.pairs.iter().map(|p| p.display(f)).collect();
        let pairs = self.pairs.clone();
        Poset::from_le(
            format!("lc({})", f.name()),
            self.pairs.len(),
            |x, y| lc_le(f, pairs[x], pairs[y]),
            Some(labels),
        )
        .expect("the pair order is a valid poset")
    }
}

/// Image of the total meet of the presented join under the nucleus of its
/// supplement, computed by formula alone. For a family presenting
/// `S = \/ (c(a_i) /\ o(b_i))` this equals `nu_{supp S}(/\ S)` without
/// enumerating any sublocales.
pub fn nu_supp_formula(f: &Frame, pairs: &[LcPair]) -> Elem {
    let inner = f.meet_set_iter(pairs.iter().map(|p| f.heyting(p.hi, p.lo)));
    let mut out = f.top();
    for x in f.elements() {
        let guard = f.meet_set_iter(pairs.iter().map(|p| f.heyting(p.hi, f.join(x, p.lo))));
        out = f.meet(out, f.heyting(guard, f.join(x, inner)));
    }
    out
}

/// Meet formula on canonical pairs: the first coordinate is the meet of the
/// `lo`s, the second is the same guarded meet as [`nu_supp_formula`] but
/// aimed at the meet of the `lo`s. For admissible families this is the meet
/// in the pair order.
pub fn lc_meet_formula(f: &Frame, pairs: &[LcPair]) -> LcPair {
    let lo = f.meet_set_iter(pairs.iter().map(|p| p.lo));
    let inner = f.meet_set_iter(pairs.iter().map(|p| f.heyting(p.hi, p.lo)));
    let mut hi = f.top();
    for x in f.elements() {
        let guard = f.meet_set_iter(pairs.iter().map(|p| f.heyting(p.hi, f.join(x, p.lo))));
        hi = f.meet(hi, f.heyting(guard, f.join(x, inner)));
    }
    LcPair { lo, hi }
}

/// Local exactness of a family of pairs, decided against the sublocale
/// engine: present `S` as the join of the family's sublocales and check
/// `b_i <= nu_{supp S}(/\ S) \/ a_i` for every member.
pub fn is_locally_exact(
    f: &Frame,
    sl: &SubLattice,
    pairs: &[LcPair],
) -> Result<(), LcPair> {
    let s: SubId = sl
        .join_many(pairs.iter().map(|p| sl.id_of(lc_carrier(f, *p)).expect("pair carrier")));
    let meet = sublocale::meet_of(f, sl.carrier(s));
    let nu = sublocale::nu(f, sl.carrier(sl.supplement(s)), meet);
    for p in pairs {
        if !f.le(p.hi, f.join(nu, p.lo)) {
            return Err(*p);
        }
    }
    Ok(())
}

/// Local exactness by formula alone: `b_i <= formula \/ a_i` for all `i`.
pub fn locally_exact_criterion(f: &Frame, pairs: &[LcPair]) -> Result<(), LcPair> {
    let nu = nu_supp_formula(f, pairs);
    for p in pairs {
        if !f.le(p.hi, f.join(nu, p.lo)) {
            return Err(*p);
        }
    }
    Ok(())
}

/// Transport of a pair along a frame map given by `map[x]` on elements:
/// apply to both coordinates and normalize.
pub fn lc_map(tgt: &Frame, map: &[Elem], p: LcPair) -> LcPair {
    lc_normalize(tgt, map[p.lo], map[p.hi])
}
