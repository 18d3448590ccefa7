//! Gordon-type square and cube certificates along `s_k` / `t_k` partitions.
//!
//! Reflections are taken about the half-integer point between sites `-1`
//! and `0` (relative to the origin), which maps the normalization pair
//! `(φ(-1), φ(0))` to itself: a reflected cube asks for period `m` on
//! `[-2m, m)`, a reflected square for a rotation of `s s` on `[-2m, 0)`.

mod classify;
mod scan;
mod solution;
mod verify;

pub use classify::{CaseId, CaseLabel, CertKind, Classifier, Reentry};
pub use scan::{nondecay_scan, sweep, NondecayReport, NondecayWitness, SweepParams, SweepReport};
pub use solution::{propagate, SolutionTrack};
pub use verify::{verify_bound, BoundReport};
