//! Finite frames: bounded distributive lattices carrying their Heyting
//! structure as precomputed tables.
//!
//! Every finite distributive lattice is a frame (and a complete Heyting
//! algebra), with `a -> b` the largest `c` such that `c /\ a <= b`. Building
//! a [`Frame`] validates the lattice and distributivity and materializes the
//! meet, join, and arrow tables; non-lattices and non-distributive lattices
//! are hard errors carrying a witness.

use crate::bits::{subsets, Bits};
use crate::poset::Poset;
use thiserror::Error;

pub type Elem = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("elements {0} and {1} have no meet")]
    NoMeet(Elem, Elem),
    #[error("elements {0} and {1} have no join")]
    NoJoin(Elem, Elem),
    #[error("not distributive: x={0}, y={1}, z={2} have x/\\(y\\/z) != (x/\\y)\\/(x/\\z)")]
    NotDistributive(Elem, Elem, Elem),
}

#[derive(Clone, Debug)]
pub struct Frame {
    poset: Poset,
    bottom: Elem,
    top: Elem,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    arrow: Vec<Elem>,
}

impl Frame {
    pub fn build(poset: Poset) -> Result<Frame, FrameError> {
        let n = poset.n();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let pair = Bits::singleton(a).with(b);
                meet[a * n + b] = poset.glb(pair).ok_or(FrameError::NoMeet(a, b))?;
                join[a * n + b] = poset.lub(pair).ok_or(FrameError::NoJoin(a, b))?;
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = meet[x * n + join[y * n + z]];
                    let rhs = join[meet[x * n + y] * n + meet[x * n + z]];
                    if lhs != rhs {
                        return Err(FrameError::NotDistributive(x, y, z));
                    }
                }
            }
        }
        let bottom = poset.glb(Bits::full(n)).expect("a finite lattice has a bottom");
        let top = poset.lub(Bits::full(n)).expect("a finite lattice has a top");
        let mut arrow = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let candidates: Bits =
                    (0..n).filter(|&c| poset.le(meet[c * n + a], b)).fold(Bits::EMPTY, Bits::with);
                // In a distributive lattice the candidate set is closed under
                // joins, so its lub is itself a candidate.
                let best = poset.lub(candidates).expect("arrow candidates have a join");
                debug_assert!(candidates.contains(best));
                arrow[a * n + b] = best;
            }
        }
        let f = Frame { poset, bottom, top, meet, join, arrow };
        #[cfg(debug_assertions)]
        f.check_adjunction();
        Ok(f)
    }

    #[cfg(debug_assertions)]
    fn check_adjunction(&self) {
        for c in 0..self.n() {
            for a in 0..self.n() {
                for b in 0..self.n() {
                    assert_eq!(
                        self.le(self.meet(c, a), b),
                        self.le(c, self.heyting(a, b)),
                        "adjunction fails at c={c}, a={a}, b={b}"
                    );
                }
            }
        }
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

    pub fn label(&self, e: Elem) -> &str {
        self.poset.label(e)
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn le(&self, a: Elem, b: Elem) -> bool {
        self.poset.le(a, b)
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.n() + b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.n() + b]
    }

    /// The Heyting arrow: the largest `c` with `c /\ a <= b`.
    pub fn heyting(&self, a: Elem, b: Elem) -> Elem {
        self.arrow[a * self.n() + b]
    }

    /// The pseudocomplement `a -> 0`.
    pub fn pseudocomplement(&self, a: Elem) -> Elem {
        self.heyting(a, self.bottom)
    }

    /// Meet of a subset; the empty meet is the top.
    pub fn meet_set(&self, set: Bits) -> Elem {
        set.iter().fold(self.top, |acc, e| self.meet(acc, e))
    }

    /// Join of a subset; the empty join is the bottom.
    pub fn join_set(&self, set: Bits) -> Elem {
        set.iter().fold(self.bottom, |acc, e| self.join(acc, e))
    }

    /// Meet of a sequence of elements; the empty meet is the top.
    pub fn meet_set_iter(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(self.top, |acc, e| self.meet(acc, e))
    }

    /// Join of a sequence of elements; the empty join is the bottom.
    pub fn join_set_iter(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(self.bottom, |acc, e| self.join(acc, e))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n()
    }
}

/// One failed law instance, with the offending elements spelled out.
#[derive(Debug, Clone)]
pub struct LawFailure {
    pub law: &'static str,
    pub witness: String,
}

/// Outcome of the Heyting law suite.
#[derive(Debug, Clone, Default)]
pub struct LawReport {
    pub failures: Vec<LawFailure>,
    pub instances: usize,
}

impl LawReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, law: &'static str, ok: bool, witness: impl Fn() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(LawFailure { law, witness: witness() });
        }
    }
}

/// Checks the twelve Heyting laws on every element instance. The two
/// set-indexed laws (arrow swallowing joins on the left and meets on the
/// right) run over all subsets up to 16 elements; on larger frames they fall
/// back to all pairs and triples.
pub fn heyting_laws(f: &Frame) -> LawReport {
    let mut r = LawReport::default();
    let n = f.n();
    let top = f.top();
    let name = |e: Elem| f.label(e).to_string();
    for a in 0..n {
        r.check("H1", f.heyting(top, a) == a, || format!("a={}", name(a)));
        for b in 0..n {
            r.check("H2", (f.le(a, b)) == (f.heyting(a, b) == top), || {
                format!("a={}, b={}", name(a), name(b))
            });
            r.check("H3", f.le(a, f.heyting(b, a)), || {
                format!("a={}, b={}", name(a), name(b))
            });
            r.check("H4", f.heyting(a, b) == f.heyting(a, f.meet(a, b)), || {
                format!("a={}, b={}", name(a), name(b))
            });
            r.check("H5", f.meet(a, f.heyting(a, b)) == f.meet(a, b), || {
                format!("a={}, b={}", name(a), name(b))
            });
            r.check("H8", a == f.meet(f.join(a, b), f.heyting(b, a)), || {
                format!("a={}, b={}", name(a), name(b))
            });
            r.check("H9", f.le(a, f.heyting(f.heyting(a, b), b)), || {
                format!("a={}, b={}", name(a), name(b))
            });
            r.check(
                "H10",
                f.heyting(f.heyting(f.heyting(a, b), b), b) == f.heyting(a, b),
                || format!("a={}, b={}", name(a), name(b)),
            );
            for c in 0..n {
                r.check(
                    "H6",
                    (f.meet(a, b) == f.meet(a, c)) == (f.heyting(a, b) == f.heyting(a, c)),
                    || format!("a={}, b={}, c={}", name(a), name(b), name(c)),
                );
                let h7 = f.heyting(f.meet(a, b), c);
                r.check(
                    "H7",
                    h7 == f.heyting(a, f.heyting(b, c)) && h7 == f.heyting(b, f.heyting(a, c)),
                    || format!("a={}, b={}, c={}", name(a), name(b), name(c)),
                );
            }
        }
    }
    let families: Vec<Bits> = if n <= 16 {
        subsets(n).collect()
    } else {
        let mut fams = vec![Bits::EMPTY];
        for a in 0..n {
            for b in a..n {
                fams.push(Bits::singleton(a).with(b));
                for c in b..n {
                    fams.push(Bits::singleton(a).with(b).with(c));
                }
            }
        }
        fams
    };
    for &set in &families {
        let join_set = f.join_set(set);
        let meet_set = f.meet_set(set);
        for b in 0..n {
            let lhs11 = f.heyting(join_set, b);
            let rhs11 = set.iter().fold(top, |acc, a| f.meet(acc, f.heyting(a, b)));
            r.check("H11", lhs11 == rhs11, || format!("family={set:?}, b={}", name(b)));
            let lhs12 = f.heyting(b, meet_set);
            let rhs12 = set.iter().fold(top, |acc, a| f.meet(acc, f.heyting(b, a)));
            r.check("H12", lhs12 == rhs12, || format!("family={set:?}, b={}", name(b)));
        }
    }
    r
}
