//! Finite join-semilattices with top, join-homomorphisms, and admissible
//! families.
//!
//! A family in a join-semilattice is admissible when its meet exists and
//! joining with any element distributes over that meet. Admissible families
//! are the ones whose meets survive the passage to the completion built in
//! [`crate::completion`], and a join-homomorphism respects that passage
//! exactly when it carries admissible families to admissible families while
//! preserving their meets.

use crate::bits::{subsets, Bits};
use crate::frame::{Elem, Frame};
use crate::lc::LcSemilattice;
use crate::poset::Poset;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemilatticeError {
    #[error("elements {0} and {1} have no least upper bound")]
    NoJoin(usize, usize),
    #[error("no greatest element")]
    NoTop,
    #[error("semilattice has {0} elements; admissibility tables are capped at {1}")]
    TooLarge(usize, usize),
}

/// A finite join-semilattice with a top element.
#[derive(Clone, Debug)]
pub struct JoinSemilattice {
    poset: Poset,
    join: Vec<Elem>,
    top: Elem,
}

impl JoinSemilattice {
    /// Validates that every pair has a join and a top exists.
    pub fn build(poset: Poset) -> Result<JoinSemilattice, SemilatticeError> {
        let n = poset.n();
        let mut join = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                join[x * n + y] = poset
                    .lub(Bits::singleton(x).with(y))
                    .ok_or(SemilatticeError::NoJoin(x, y))?;
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|x| poset.le(x, t)))
            .ok_or(SemilatticeError::NoTop)?;
        Ok(JoinSemilattice { poset, join, top })
    }

    /// Every frame is in particular a join-semilattice.
    pub fn from_frame(f: &Frame) -> JoinSemilattice {
        JoinSemilattice::build(f.poset().clone()).expect("frames have all joins")
    }

    /// The semilattice of canonical pairs of a frame.
    pub fn from_lc(f: &Frame, lc: &LcSemilattice) -> JoinSemilattice {
        JoinSemilattice::build(lc.to_poset(f)).expect("pair joins always exist")
    }

    pub fn n(&self) -> usize {
        self.poset.n()
    }

    pub fn name(&self) -> &str {
        self.poset.name()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn label(&self, x: Elem) -> &str {
        self.poset.label(x)
    }

    pub fn le(&self, x: Elem, y: Elem) -> bool {
        self.poset.le(x, y)
    }

    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.n() + y]
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n()
    }

    /// Join of a nonempty set; the empty join is undefined in a semilattice
    /// without bottom, so this returns `None` on the empty set unless a
    /// bottom exists.
    pub fn join_set(&self, set: Bits) -> Option<Elem> {
        let mut it = set.iter();
        let first = match it.next() {
            Some(x) => x,
            None => return self.bottom(),
        };
        Some(it.fold(first, |a, b| self.join(a, b)))
    }

    /// The least element, if there is one.
    pub fn bottom(&self) -> Option<Elem> {
        self.elements().find(|&b| self.elements().all(|x| self.le(b, x)))
    }

    /// Greatest lower bound of a set, when it exists. The empty set's
    /// greatest lower bound is the top.
    pub fn glb(&self, set: Bits) -> Option<Elem> {
        let lower = set
            .iter()
            .fold(Bits::full(self.n()), |acc, x| acc.inter(self.poset.down_set(x)));
        lower.iter().find(|&g| lower.is_subset(self.poset.down_set(g)))
    }

    /// Join-irreducible elements: those that are not the join of a
    /// nonempty set of strictly smaller elements. Minimal elements count,
    /// the bottom included; with that convention every element is the join
    /// of the irreducibles below it, and a join-homomorphism is determined
    /// by its values on them.
    pub fn irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&x| {
                let mut below = self.poset.down_set(x);
                below.remove(x);
                below.is_empty() || self.join_set(below) != Some(x)
            })
            .collect()
    }
}

/// Why a family fails to be admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibleFailure {
    /// Families are nonempty by convention; the empty one is rejected.
    Empty,
    /// The family has no greatest lower bound.
    NoMeet,
    /// The meet exists but joining with the witness does not distribute
    /// over it (the witnessed join family's meet is missing or different).
    NotDistributive { meet: Elem, witness: Elem },
}

/// Checks admissibility of a family: it is nonempty, its meet exists, and
/// for every `b`, `b \/ meet` is the meet of `{b \/ a : a in family}`.
pub fn is_admissible(
    s: &JoinSemilattice,
    family: Bits,
) -> Result<Elem, AdmissibleFailure> {
    if family.is_empty() {
        return Err(AdmissibleFailure::Empty);
    }
    let meet = s.glb(family).ok_or(AdmissibleFailure::NoMeet)?;
    for b in s.elements() {
        let joined = family.iter().fold(Bits::EMPTY, |mut acc, a| {
            acc.insert(s.join(b, a));
            acc
        });
        if s.glb(joined) != Some(s.join(b, meet)) {
            return Err(AdmissibleFailure::NotDistributive { meet, witness: b });
        }
    }
    Ok(meet)
}

/// Admissibility verdicts for every subset of a semilattice, as one flat
/// table indexed by subset mask.
pub struct AdmTables {
    meets: Vec<Option<Elem>>,
}

impl AdmTables {
    pub const MAX_ELEMENTS: usize = 16;

    pub fn build(s: &JoinSemilattice) -> Result<AdmTables, SemilatticeError> {
        if s.n() > Self::MAX_ELEMENTS {
            return Err(SemilatticeError::TooLarge(s.n(), Self::MAX_ELEMENTS));
        }
        let meets = subsets(s.n())
            .map(|family| is_admissible(s, family).ok())
            .collect();
        Ok(AdmTables { meets })
    }

    /// The meet of the family if it is admissible, else `None`.
    pub fn admissible_meet(&self, family: Bits) -> Option<Elem> {
        self.meets[family.0 as usize]
    }

    pub fn is_admissible(&self, family: Bits) -> bool {
        self.meets[family.0 as usize].is_some()
    }
}

/// A join-homomorphism between semilattices: preserves binary joins and the
/// top element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinHom {
    pub map: Vec<Elem>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    #[error("map has {0} entries for a source of size {1}")]
    WrongLength(usize, usize),
    #[error("image {0} out of range for target of size {1}")]
    OutOfRange(usize, usize),
    #[error("top maps to {0}, not the target top")]
    TopNotPreserved(usize),
    #[error("join of {0} and {1} is not preserved")]
    JoinNotPreserved(usize, usize),
}

impl JoinHom {
    pub fn validate(
        src: &JoinSemilattice,
        tgt: &JoinSemilattice,
        map: Vec<Elem>,
    ) -> Result<JoinHom, HomError> {
        if map.len() != src.n() {
            return Err(HomError::WrongLength(map.len(), src.n()));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= tgt.n()) {
            return Err(HomError::OutOfRange(bad, tgt.n()));
        }
        if map[src.top()] != tgt.top() {
            return Err(HomError::TopNotPreserved(map[src.top()]));
        }
        for x in src.elements() {
            for y in src.elements() {
                if y > x {
                    break;
                }
                if map[src.join(x, y)] != tgt.join(map[x], map[y]) {
                    return Err(HomError::JoinNotPreserved(x, y));
                }
            }
        }
        Ok(JoinHom { map })
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    /// Image of a family as a subset of the target.
    pub fn image(&self, family: Bits) -> Bits {
        family.iter().fold(Bits::EMPTY, |mut acc, x| {
            acc.insert(self.map[x]);
            acc
        })
    }
}

/// All join-homomorphisms from `src` to `tgt`, found by assigning images to
/// the join-irreducibles of the source (a join-hom is determined by them),
/// extending by joins, and validating the result.
pub fn all_join_homs(src: &JoinSemilattice, tgt: &JoinSemilattice) -> Vec<JoinHom> {
    let irr = src.irreducibles();
    let mut out = Vec::new();
    let mut assign = vec![0usize; irr.len()];
    loop {
        let mut map = vec![usize::MAX; src.n()];
        for x in src.elements() {
            let mut img: Option<Elem> = None;
            for (k, &j) in irr.iter().enumerate() {
                if src.le(j, x) {
                    img = Some(match img {
                        None => assign[k],
                        Some(v) => tgt.join(v, assign[k]),
                    });
                }
            }
            // Every element is the join of the irreducibles below it.
            map[x] = img.expect("element with no irreducible below it");
        }
        // Keep one representative per hom: the assignment must equal the
        // extension's own restriction to the irreducibles.
        let consistent = irr.iter().enumerate().all(|(k, &j)| map[j] == assign[k]);
        if consistent {
            if let Ok(h) = JoinHom::validate(src, tgt, map) {
                out.push(h);
            }
        }
        // Advance the assignment like an odometer.
        let mut k = 0;
        loop {
            if k == assign.len() {
                return out;
            }
            assign[k] += 1;
            if assign[k] < tgt.n() {
                break;
            }
            assign[k] = 0;
            k += 1;
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::{vee, wedge};
    use super::*;
    use crate::frame::fixtures::{chain, diamond};
    use crate::poset::Poset;

    #[test]
    fn build_validates() {
        // A two-element antichain has no joins at all.
        let p = Poset::from_edges("antichain", 2, &[], None).unwrap();
        assert_eq!(
            JoinSemilattice::build(p).unwrap_err(),
            SemilatticeError::NoJoin(0, 1)
        );
        let v = vee();
        assert_eq!(v.top(), 2);
        assert_eq!(v.join(0, 1), 2);
        assert_eq!(v.bottom(), None);
        assert_eq!(v.glb(Bits(0b011)), None);
        assert_eq!(v.glb(Bits::EMPTY), Some(2));
    }

    #[test]
    fn irreducibles() {
        let c4 = JoinSemilattice::from_frame(&chain(4));
        // In a chain nothing is a join of strictly smaller elements.
        assert_eq!(c4.irreducibles(), vec![0, 1, 2, 3]);
        let d = JoinSemilattice::from_frame(&diamond());
        assert_eq!(d.irreducibles(), vec![0, 1, 2]);
        assert_eq!(wedge().irreducibles(), vec![0, 1, 2]);
    }

    #[test]
    fn admissibility_in_the_wedge() {
        let w = wedge();
        // {a, b} has meet m, and joins distribute: for every c,
        // c \/ m vs (c \/ a) /\ (c \/ b).
        assert_eq!(is_admissible(&w, Bits(0b0110)), Ok(0));
        // The empty family is rejected; singletons are always admissible.
        assert_eq!(is_admissible(&w, Bits::EMPTY), Err(AdmissibleFailure::Empty));
        for x in w.elements() {
            assert_eq!(is_admissible(&w, Bits::singleton(x)), Ok(x));
        }
        let v = vee();
        assert_eq!(is_admissible(&v, Bits(0b011)), Err(AdmissibleFailure::NoMeet));
        let tables = AdmTables::build(&w).unwrap();
        for fam in subsets(w.n()) {
            assert_eq!(tables.admissible_meet(fam), is_admissible(&w, fam).ok());
        }
    }

    #[test]
    fn non_distributive_family() {
        // The five-element modular lattice: 0 < a, b, c < 1 with pairwise
        // joins 1 and pairwise meets 0. {a, b} has meet 0, but joining with
        // c gives c \/ 0 = c while (c \/ a) /\ (c \/ b) = 1.
        let p = Poset::from_edges(
            "m3",
            5,
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
            None,
        )
        .unwrap();
        let m3 = JoinSemilattice::build(p).unwrap();
        assert_eq!(
            is_admissible(&m3, Bits(0b00110)),
            Err(AdmissibleFailure::NotDistributive { meet: 0, witness: 3 })
        );
    }

    #[test]
    fn hom_validation() {
        let w = wedge();
        let two = JoinSemilattice::from_frame(&chain(2));
        // m -> 0, everything else -> t: a join-hom.
        let h = JoinHom::validate(&w, &two, vec![0, 1, 1, 1]).unwrap();
        assert_eq!(h.image(Bits(0b0110)), Bits(0b10));
        // Constant-to-bottom fails top preservation.
        assert_eq!(
            JoinHom::validate(&w, &two, vec![0, 0, 0, 0]).unwrap_err(),
            HomError::TopNotPreserved(0)
        );
        // m -> t, a -> 0 breaks the join m \/ a = a.
        assert!(JoinHom::validate(&w, &two, vec![1, 0, 0, 1]).is_err());
        // Join-homs need not preserve the bottom: m -> 0, b -> 0 with
        // a -> t is fine.
        assert!(JoinHom::validate(&w, &two, vec![0, 1, 0, 1]).is_ok());
    }

    #[test]
    fn hom_enumeration_matches_brute_force() {
        let cases = [
            (wedge(), JoinSemilattice::from_frame(&chain(2))),
            (JoinSemilattice::from_frame(&chain(3)), wedge()),
            (vee(), JoinSemilattice::from_frame(&chain(3))),
            (wedge(), vee()),
        ];
        for (src, tgt) in &cases {
            let fast = all_join_homs(src, tgt);
            // Brute force over all maps.
            let mut slow = Vec::new();
            let mut map = vec![0usize; src.n()];
            'outer: loop {
                if let Ok(h) = JoinHom::validate(src, tgt, map.clone()) {
                    slow.push(h);
                }
                let mut k = 0;
                loop {
                    if k == map.len() {
                        break 'outer;
                    }
                    map[k] += 1;
                    if map[k] < tgt.n() {
                        break;
                    }
                    map[k] = 0;
                    k += 1;
                }
            }
            let mut fast_maps: Vec<Vec<usize>> = fast.into_iter().map(|h| h.map).collect();
            let mut slow_maps: Vec<Vec<usize>> = slow.into_iter().map(|h| h.map).collect();
            fast_maps.sort();
            slow_maps.sort();
            assert_eq!(fast_maps, slow_maps);
        }
    }
}
