//! Sublocale lattices of finite frames.
//!
//! A finite frame is a finite distributive lattice with its Heyting arrow.
//! This crate builds such frames, enumerates their sublocales with the full
//! coframe structure (closed and open sublocales, nuclei, closures,
//! supplements, smoothness), represents locally closed sublocales as
//! canonical pairs, computes Bruns-Lakser completions of join-semilattices by
//! admissible upper sets, exhibits the correspondences between the two
//! worlds, and decides when a frame morphism lifts to the sublocale level.
//! Everything is verified against independent brute-force oracles over an
//! enumerated corpus of small frames; see the `verify` module and the
//! `subloc` command-line tool.

pub mod bits;
pub mod completion;
pub mod frame;
pub mod lc;
pub mod poset;
pub mod semilattice;
pub mod sublocale;

pub use bits::Bits;
pub use completion::{AuFrame, AuId, AuMap};
pub use frame::{Elem, Frame, FrameError};
pub use lc::{LcId, LcPair, LcSemilattice};
pub use poset::{Poset, PosetError};
pub use semilattice::{AdmTables, JoinHom, JoinSemilattice, SemilatticeError};
pub use sublocale::{SubCaps, SubId, SubLattice, SubLatticeError};
