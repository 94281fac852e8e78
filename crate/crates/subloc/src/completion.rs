//! Completion of a join-semilattice by admissible upper sets.
//!
//! An upper set is admissible-closed when it contains the meet of each of
//! its admissible subfamilies. These sets, ordered by inclusion, form a
//! frame: meets are intersections and the join of a family is the closure
//! `A` of its union. The principal upper sets `up(x)` are members; the map
//! `x -> up(x)` reverses order, turns joins into intersections, and carries
//! the meet of a family into the join of the images exactly when the family
//! is admissible. It is the universal such map: a join-homomorphism between
//! semilattices extends to a frame map between completions exactly when it
//! sends admissible families to admissible families preserving their meets.

use crate::bits::Bits;
use crate::frame::{Elem, Frame};
use crate::poset::Poset;
use crate::semilattice::{is_admissible, AdmTables, AdmissibleFailure, JoinHom, JoinSemilattice};
use std::collections::HashMap;
use thiserror::Error;

/// Whether a subset is upward closed.
pub fn is_upper(s: &JoinSemilattice, u: Bits) -> bool {
    u.iter().all(|x| s.poset().up_set(x).is_subset(u))
}

/// The principal upper set of `x`.
pub fn up(s: &JoinSemilattice, x: Elem) -> Bits {
    s.poset().up_set(x)
}

/// Upward closure of a subset.
pub fn up_close(s: &JoinSemilattice, set: Bits) -> Bits {
    set.iter().fold(Bits::EMPTY, |acc, x| acc.union(s.poset().up_set(x)))
}

/// The least admissible-closed upper set containing `u`: all meets of
/// admissible subfamilies of `u`. One application suffices: `m` is such a
/// meet exactly when `u /\ up(m)` is admissible with meet `m`. Upper sets
/// here are nonempty (they all contain the top); the empty set is not a
/// valid input.
pub fn admissible_closure(s: &JoinSemilattice, adm: &AdmTables, u: Bits) -> Bits {
    let mut out = Bits::EMPTY;
    for m in s.elements() {
        if adm.admissible_meet(u.inter(up(s, m))) == Some(m) {
            out.insert(m);
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AuError {
    #[error("completion has at least {0} members; enumeration is capped at {1}")]
    TooLarge(usize, usize),
}

/// The frame of admissible-closed upper sets, enumerated as the closure of
/// the principal upper sets under binary joins. Members are listed in
/// increasing mask order, so the bottom `up(top)` is first and the full
/// carrier last.
pub struct AuFrame {
    sets: Vec<Bits>,
    index: HashMap<u64, usize>,
    join_tab: Vec<u32>,
}

pub type AuId = usize;

pub const AU_DEFAULT_CAP: usize = 4096;

impl AuFrame {
    pub fn enumerate(
        s: &JoinSemilattice,
        adm: &AdmTables,
        cap: usize,
    ) -> Result<AuFrame, AuError> {
        let mut seen: HashMap<u64, usize> = HashMap::new();
        let mut sets: Vec<Bits> = Vec::new();
        let mut queue: Vec<Bits> = s.elements().map(|x| up(s, x)).collect();
        while let Some(u) = queue.pop() {
            if seen.contains_key(&u.0) {
                continue;
            }
            if sets.len() >= cap {
                return Err(AuError::TooLarge(sets.len() + 1, cap));
            }
            seen.insert(u.0, 0);
            for &v in &sets {
                queue.push(admissible_closure(s, adm, u.union(v)));
            }
            sets.push(u);
        }
        sets.sort_unstable_by_key(|b| b.0);
        let index: HashMap<u64, usize> =
            sets.iter().enumerate().map(|(i, u)| (u.0, i)).collect();
        let count = sets.len();
        let mut join_tab = vec![0u32; count * count];
        for x in 0..count {
            for y in x..count {
                let j = admissible_closure(s, adm, sets[x].union(sets[y]));
                let id = index[&j.0] as u32;
                join_tab[x * count + y] = id;
                join_tab[y * count + x] = id;
            }
        }
        Ok(AuFrame { sets, index, join_tab })
    }

    pub fn count(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, id: AuId) -> Bits {
        self.sets[id]
    }

    pub fn sets(&self) -> &[Bits] {
        &self.sets
    }

    pub fn id_of(&self, u: Bits) -> Option<AuId> {
        self.index.get(&u.0).copied()
    }

    pub fn bottom_id(&self) -> AuId {
        0
    }

    pub fn top_id(&self) -> AuId {
        self.sets.len() - 1
    }

    pub fn le(&self, x: AuId, y: AuId) -> bool {
        self.sets[x].is_subset(self.sets[y])
    }

    pub fn join(&self, x: AuId, y: AuId) -> AuId {
        self.join_tab[x * self.sets.len() + y] as AuId
    }

    /// Meets are intersections; the intersection of admissible-closed sets
    /// is admissible-closed, so the lookup never fails.
    pub fn meet(&self, x: AuId, y: AuId) -> AuId {
        self.index[&self.sets[x].inter(self.sets[y]).0]
    }

    pub fn join_many(&self, ids: impl IntoIterator<Item = AuId>) -> AuId {
        ids.into_iter().fold(self.bottom_id(), |a, b| self.join(a, b))
    }

    pub fn meet_many(&self, ids: impl IntoIterator<Item = AuId>) -> AuId {
        ids.into_iter().fold(self.top_id(), |a, b| self.meet(a, b))
    }

    /// The completion as a first-class frame (checking the frame laws on
    /// the way), with members labeled by their element sets.
    pub fn to_frame(&self, s: &JoinSemilattice) -> Frame {
        let labels: Vec<String> = self
            .sets
            .iter()
            .map(|u| {
                let names: Vec<&str> = u.iter().map(|x| s.label(x)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        let sets = self.sets.clone();
        let poset = Poset::from_le(
            format!("au({})", s.name()),
            sets.len(),
            |x, y| sets[x].is_subset(sets[y]),
            Some(labels),
        )
        .expect("inclusion is a partial order");
        Frame::build(poset).expect("the completion satisfies the frame laws")
    }
}

/// The embedding `x -> up(x)` as an id into the enumerated completion.
pub fn up_embed(s: &JoinSemilattice, au: &AuFrame, x: Elem) -> AuId {
    au.id_of(up(s, x)).expect("principal upper sets are members")
}

/// How a join-homomorphism fails to respect admissible families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismFailure {
    /// The image family has no meet.
    MeetMissing { family: Bits },
    /// The image family has a meet but is not admissible.
    MeetNotAdmissible { family: Bits, witness: Elem },
    /// The image family is admissible but its meet differs from the image
    /// of the source meet.
    MeetNotPreserved { family: Bits, expected: Elem, actual: Elem },
}

/// Checks that a join-homomorphism carries every admissible family to an
/// admissible family with the corresponding meet.
pub fn is_admissible_morphism(
    src: &JoinSemilattice,
    src_adm: &AdmTables,
    tgt: &JoinSemilattice,
    hom: &JoinHom,
) -> Result<(), MorphismFailure> {
    for family in crate::bits::subsets(src.n()) {
        let Some(m) = src_adm.admissible_meet(family) else { continue };
        let image = hom.image(family);
        match is_admissible(tgt, image) {
            // The image of a nonempty family is nonempty.
            Err(AdmissibleFailure::Empty) => unreachable!(),
            Err(AdmissibleFailure::NoMeet) => {
                return Err(MorphismFailure::MeetMissing { family })
            }
            Err(AdmissibleFailure::NotDistributive { witness, .. }) => {
                return Err(MorphismFailure::MeetNotAdmissible { family, witness })
            }
            Ok(mi) => {
                if mi != hom.apply(m) {
                    return Err(MorphismFailure::MeetNotPreserved {
                        family,
                        expected: hom.apply(m),
                        actual: mi,
                    });
                }
            }
        }
    }
    Ok(())
}

/// A map between completions, stored as an id map over the source members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuMap {
    pub map: Vec<AuId>,
}

/// Why the forced extension fails the lifting laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuLiftFailure {
    MeetNotPreserved { x: AuId, y: AuId },
    JoinNotPreserved { x: AuId, y: AuId },
}

/// Builds the forced extension of a join-homomorphism to the completions
/// and reports whether it satisfies the lifting laws.
///
/// The value on each member is forced: any extension commuting with the
/// embeddings and preserving nonempty joins must send `U` to the closure of
/// the upward closure of its image, because `U` is the join of its
/// principal upper sets. The forced map commutes with the embeddings and
/// sends the bottom `up(top)` to the bottom unconditionally. What can fail
/// are preservation of binary meets and binary joins, and that happens
/// exactly when the homomorphism mishandles some admissible family.
///
/// The empty meet is deliberately not part of the laws: a
/// join-homomorphism is free to move an existing bottom of the source off
/// the bottom of the target, and then the forced map lands below the top.
/// When the homomorphism does carry a bottom to a bottom (frame maps
/// between pair semilattices always do), the forced map preserves the top
/// as well.
pub fn forced_lift(
    src: &JoinSemilattice,
    tgt: &JoinSemilattice,
    tgt_adm: &AdmTables,
    au_src: &AuFrame,
    au_tgt: &AuFrame,
    hom: &JoinHom,
) -> (AuMap, Result<(), AuLiftFailure>) {
    let map: Vec<AuId> = au_src
        .sets()
        .iter()
        .map(|&u| {
            let forced = admissible_closure(tgt, tgt_adm, up_close(tgt, hom.image(u)));
            au_tgt.id_of(forced).expect("closures are members")
        })
        .collect();
    for x in src.elements() {
        debug_assert_eq!(
            map[up_embed(src, au_src, x)],
            up_embed(tgt, au_tgt, hom.apply(x)),
            "the square with the embeddings must commute"
        );
    }
    debug_assert_eq!(map[au_src.bottom_id()], au_tgt.bottom_id());
    let mut verdict = Ok(());
    'scan: for x in 0..au_src.count() {
        for y in 0..=x {
            let m = au_src.meet(x, y);
            if map[m] != au_tgt.meet(map[x], map[y]) {
                verdict = Err(AuLiftFailure::MeetNotPreserved { x, y });
                break 'scan;
            }
            let j = au_src.join(x, y);
            if map[j] != au_tgt.join(map[x], map[y]) {
                verdict = Err(AuLiftFailure::JoinNotPreserved { x, y });
                break 'scan;
            }
        }
    }
    (AuMap { map }, verdict)
}

/// Lifts a join-homomorphism to the completions. Succeeds exactly when the
/// homomorphism is admissible; the error carries the mishandled family and
/// the failure mode. On success the forced extension satisfies the lifting
/// laws (see [`forced_lift`]).
pub fn lift_au(
    src: &JoinSemilattice,
    src_adm: &AdmTables,
    tgt: &JoinSemilattice,
    tgt_adm: &AdmTables,
    au_src: &AuFrame,
    au_tgt: &AuFrame,
    hom: &JoinHom,
) -> Result<AuMap, MorphismFailure> {
    is_admissible_morphism(src, src_adm, tgt, hom)?;
    let (map, laws) = forced_lift(src, tgt, tgt_adm, au_src, au_tgt, hom);
    debug_assert_eq!(laws, Ok(()), "admissible homomorphisms always lift");
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::subsets_of;
    use crate::frame::fixtures::{chain, diamond};
    use crate::lc::LcSemilattice;
    use crate::poset::{self};

    fn lc_semilattice(n: usize) -> JoinSemilattice {
        let f = chain(n);
        let lc = LcSemilattice::enumerate(&f);
        JoinSemilattice::from_lc(&f, &lc)
    }

    fn with_tables(s: &JoinSemilattice) -> (AdmTables, AuFrame) {
        let adm = AdmTables::build(s).unwrap();
        let au = AuFrame::enumerate(s, &adm, AU_DEFAULT_CAP).unwrap();
        (adm, au)
    }

    /// Definition-level closure: repeatedly add meets of admissible
    /// subfamilies until stable.
    fn naive_closure(s: &JoinSemilattice, u: Bits) -> Bits {
        let mut cur = u;
        loop {
            let mut next = cur;
            for fam in subsets_of(cur) {
                if let Ok(m) = is_admissible(s, fam) {
                    next.insert(m);
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    #[test]
    fn closure_matches_naive_definition_in_one_step() {
        let cases = [
            JoinSemilattice::from_frame(&chain(4)),
            JoinSemilattice::from_frame(&diamond()),
            crate::semilattice::fixtures::wedge(),
            crate::semilattice::fixtures::vee(),
            lc_semilattice(4),
        ];
        for s in &cases {
            let adm = AdmTables::build(s).unwrap();
            for u in crate::bits::subsets(s.n()) {
                if u.is_empty() || !is_upper(s, u) {
                    continue;
                }
                let fast = admissible_closure(s, &adm, u);
                assert_eq!(fast, naive_closure(s, u), "{:?} in {}", u, s.name());
                // Idempotent in one application.
                assert_eq!(admissible_closure(s, &adm, fast), fast);
                // And it contains the input.
                assert!(u.is_subset(fast));
            }
        }
    }

    #[test]
    fn completion_sizes() {
        // The completion of the pair semilattice of a chain matches the
        // count of smooth sublocales: 4 for the three-chain, 8 for the
        // four-chain. For the two-chain frame itself: 2. For chains as
        // join-semilattices the completion counts the closed joins: n.
        assert_eq!(with_tables(&lc_semilattice(3)).1.count(), 4);
        assert_eq!(with_tables(&lc_semilattice(4)).1.count(), 8);
        assert_eq!(with_tables(&JoinSemilattice::from_frame(&chain(2))).1.count(), 2);
        assert_eq!(with_tables(&JoinSemilattice::from_frame(&chain(3))).1.count(), 3);
        assert_eq!(with_tables(&JoinSemilattice::from_frame(&chain(4))).1.count(), 4);
    }

    #[test]
    fn wedge_join_of_principals_is_full() {
        let w = crate::semilattice::fixtures::wedge();
        let (adm, au) = with_tables(&w);
        // {a, b} is admissible with meet m, so up(a) |_| up(b) recovers
        // up(m): the whole carrier.
        let ja = up_embed(&w, &au, 1);
        let jb = up_embed(&w, &au, 2);
        assert_eq!(au.join(ja, jb), au.top_id());
        assert_eq!(au.set(au.top_id()), Bits(0b1111));
        // The three-element upper set {a, b, t} is not closed.
        assert_eq!(au.id_of(Bits(0b1110)), None);
        assert_eq!(admissible_closure(&w, &adm, Bits(0b1110)), Bits(0b1111));
        assert_eq!(au.count(), 4);
    }

    #[test]
    fn vee_completion_is_the_diamond() {
        let v = crate::semilattice::fixtures::vee();
        let (_, au) = with_tables(&v);
        // All four upper sets are closed: the missing meet gets added.
        assert_eq!(au.count(), 4);
        let f = au.to_frame(&v);
        let d = diamond();
        assert!(poset::isomorphic(f.poset(), d.poset()));
    }

    #[test]
    fn completions_satisfy_the_frame_laws() {
        for s in [
            JoinSemilattice::from_frame(&chain(4)),
            crate::semilattice::fixtures::wedge(),
            crate::semilattice::fixtures::vee(),
            lc_semilattice(4),
        ] {
            let (_, au) = with_tables(&s);
            let f = au.to_frame(&s);
            assert!(crate::frame::heyting_laws(&f).pass(), "{}", s.name());
        }
    }

    #[test]
    fn embedding_reverses_and_respects_structure() {
        for s in [
            JoinSemilattice::from_frame(&diamond()),
            crate::semilattice::fixtures::wedge(),
            lc_semilattice(4),
        ] {
            let (adm, au) = with_tables(&s);
            for x in s.elements() {
                for y in s.elements() {
                    // Antitone, and joins become intersections.
                    assert_eq!(s.le(x, y), au.le(up_embed(&s, &au, y), up_embed(&s, &au, x)));
                    assert_eq!(
                        up(&s, s.join(x, y)),
                        up(&s, x).inter(up(&s, y))
                    );
                }
            }
            // Admissible meets become joins of the embedded images; for
            // non-admissible families with a meet, the join falls short.
            for fam in crate::bits::subsets(s.n()) {
                if fam.is_empty() {
                    continue;
                }
                let join_of_images =
                    au.join_many(fam.iter().map(|x| up_embed(&s, &au, x)));
                match adm.admissible_meet(fam) {
                    Some(m) => {
                        assert_eq!(join_of_images, up_embed(&s, &au, m));
                    }
                    None => {
                        if let Some(m) = s.glb(fam) {
                            assert_ne!(join_of_images, up_embed(&s, &au, m));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn morphism_admissibility_and_lifting() {
        let w = crate::semilattice::fixtures::wedge();
        let two = JoinSemilattice::from_frame(&chain(2));
        let (w_adm, w_au) = with_tables(&w);
        let (two_adm, two_au) = with_tables(&two);
        // m -> 0, a, b, t -> t: collapses the admissible family {a, b}
        // whose meet m maps to 0 while the image meet is t.
        let collapse = JoinHom::validate(&w, &two, vec![0, 1, 1, 1]).unwrap();
        let failure = MorphismFailure::MeetNotPreserved {
            family: Bits(0b0110),
            expected: 0,
            actual: 1,
        };
        assert_eq!(
            is_admissible_morphism(&w, &w_adm, &two, &collapse),
            Err(failure)
        );
        assert_eq!(
            lift_au(&w, &w_adm, &two, &two_adm, &w_au, &two_au, &collapse),
            Err(failure)
        );
        let (_, laws) = forced_lift(&w, &two, &two_adm, &w_au, &two_au, &collapse);
        assert!(matches!(laws, Err(AuLiftFailure::JoinNotPreserved { .. })));
        // m, a -> 0; b, t -> t: respects every admissible family and lifts.
        let good = JoinHom::validate(&w, &two, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(is_admissible_morphism(&w, &w_adm, &two, &good), Ok(()));
        let lifted =
            lift_au(&w, &w_adm, &two, &two_adm, &w_au, &two_au, &good).unwrap();
        // The lift sends each principal to the principal of the image, and
        // this bottom-preserving hom also keeps the top on top.
        for x in w.elements() {
            assert_eq!(
                lifted.map[up_embed(&w, &w_au, x)],
                up_embed(&two, &two_au, good.apply(x))
            );
        }
        assert_eq!(lifted.map[w_au.top_id()], two_au.top_id());
        // The constant-to-top hom moves the bottom m up to t. It respects
        // every nonempty admissible family, so it lifts, but the lift puts
        // the source top at up(t), not the target top.
        let constant = JoinHom::validate(&w, &two, vec![1, 1, 1, 1]).unwrap();
        assert_eq!(is_admissible_morphism(&w, &w_adm, &two, &constant), Ok(()));
        let lifted =
            lift_au(&w, &w_adm, &two, &two_adm, &w_au, &two_au, &constant).unwrap();
        assert_eq!(lifted.map[w_au.top_id()], two_au.bottom_id());
    }

    #[test]
    fn lifting_agrees_with_admissibility_on_all_homs() {
        let cases = [
            (crate::semilattice::fixtures::wedge(), JoinSemilattice::from_frame(&chain(2))),
            (crate::semilattice::fixtures::vee(), JoinSemilattice::from_frame(&chain(3))),
            (lc_semilattice(3), crate::semilattice::fixtures::wedge()),
            (JoinSemilattice::from_frame(&chain(3)), crate::semilattice::fixtures::vee()),
        ];
        for (src, tgt) in &cases {
            let (src_adm, src_au) = with_tables(src);
            let (tgt_adm, tgt_au) = with_tables(tgt);
            for hom in crate::semilattice::all_join_homs(src, tgt) {
                let adm = is_admissible_morphism(src, &src_adm, tgt, &hom);
                let (forced, laws) =
                    forced_lift(src, tgt, &tgt_adm, &src_au, &tgt_au, &hom);
                assert_eq!(adm.is_ok(), laws.is_ok(), "{:?}", hom.map);
                let lifted =
                    lift_au(src, &src_adm, tgt, &tgt_adm, &src_au, &tgt_au, &hom);
                match adm {
                    Ok(()) => assert_eq!(lifted, Ok(forced)),
                    Err(e) => assert_eq!(lifted, Err(e)),
                }
            }
        }
    }
}
