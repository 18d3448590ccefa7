use std::fmt;
use std::sync::OnceLock;

use crate::cocycle::ExtFloat;
use crate::error::{Error, Result};
use crate::sequences::{k_partition, BlockKind, PartitionBlock, PartitionView, ToeplitzSpec, Window};

/// Nodes of the case analysis excluding point spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// `ŝ s`
    C1,
    /// `s ŝ s`
    C1_1,
    /// `t ŝ s`
    C1_2,
    /// `s t̂` one level up
    C1_2_1,
    /// `s s t̂`
    C1_2_1_1,
    /// `t s t̂`
    C1_2_1_2,
    /// `s s ŝ` two levels up
    C1_2_1_2_1,
    /// `s ŝ s` two levels up
    C1_2_1_2_2,
    /// `s ŝ` one level up
    C1_2_2,
    /// `s ŝ t`
    C2,
    /// `t ŝ t`
    C3,
    /// `t̂`
    C4,
    /// `t s ŝ t`: neither a cube nor a reflected cube around `ŝ`; the
    /// analysis restarts one level up.
    Fallback,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseId::C1 => "1",
            CaseId::C1_1 => "1.1",
            CaseId::C1_2 => "1.2",
            CaseId::C1_2_1 => "1.2.1",
            CaseId::C1_2_1_1 => "1.2.1.1",
            CaseId::C1_2_1_2 => "1.2.1.2",
            CaseId::C1_2_1_2_1 => "1.2.1.2.1",
            CaseId::C1_2_1_2_2 => "1.2.1.2.2",
            CaseId::C1_2_2 => "1.2.2",
            CaseId::C2 => "2",
            CaseId::C3 => "3",
            CaseId::C4 => "4",
            CaseId::Fallback => "fallback",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertKind {
    /// Period `m` on `[-m, 2m)`.
    Cube,
    /// Period `m` on `[-2m, m)`.
    ReflectedCube,
    /// `[0, 2m)` is a rotation of `s s`.
    Square,
    /// `[-2m, 0)` is a rotation of `s s`.
    ReflectedSquare,
}

impl fmt::Display for CertKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertKind::Cube => "cube",
            CertKind::ReflectedCube => "reflected_cube",
            CertKind::Square => "square",
            CertKind::ReflectedSquare => "reflected_square",
        })
    }
}

/// Where an index-shifted re-entry looks for the next block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reentry {
    /// The block containing the origin.
    #[default]
    SameOrigin,
    /// The block containing the first site of the current block.
    BlockStart,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseLabel {
    pub origin: i64,
    /// Terminal case.
    pub case: CaseId,
    /// Every node visited, ending with `case`.
    pub path: Vec<CaseId>,
    /// Level of the certificate.
    pub level: usize,
    /// `ℓ_level`.
    pub m: usize,
    pub kind: CertKind,
    /// For squares: the `2m` sampled sites read `s[(rotation + i) mod m]`.
    pub rotation: usize,
    pub fallbacks: usize,
    /// Re-entries where the two [`Reentry`] rules pick different blocks.
    pub reentry_divergences: usize,
}

/// Case analysis over precomputed partitions of one window.
pub struct Classifier<'a> {
    spec: &'a ToeplitzSpec,
    window: &'a Window,
    reentry: Reentry,
    partitions: Vec<OnceLock<Result<PartitionView>>>,
}

struct Hat {
    level: usize,
    index: usize,
    block: PartitionBlock,
}

impl<'a> Classifier<'a> {
    pub fn new(spec: &'a ToeplitzSpec, window: &'a Window, max_level: usize, reentry: Reentry) -> Self {
        Self {
            spec,
            window,
            reentry,
            partitions: (0..=max_level).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn max_level(&self) -> usize {
        self.partitions.len() - 1
    }

    pub fn partition(&self, level: usize) -> Result<&PartitionView> {
        let cell = self
            .partitions
            .get(level)
            .ok_or(Error::LevelBudget { level, max: self.max_level() })?;
        cell.get_or_init(|| k_partition(self.window, self.spec, level)).as_ref().map_err(Clone::clone)
    }

    fn kind(&self, level: usize, index: isize) -> Result<BlockKind> {
        let p = self.partition(level)?;
        usize::try_from(index)
            .ok()
            .and_then(|i| p.blocks.get(i))
            .map(|b| b.kind)
            .ok_or_else(|| {
                Error::Precondition(format!("window too short around the origin at level {level}"))
            })
    }

    fn hat(&self, level: usize, probe: i64) -> Result<Hat> {
        let p = self.partition(level)?;
        let index = p.block_index(probe).ok_or_else(|| {
            Error::Precondition(format!("origin not covered by the level-{level} partition"))
        })?;
        Ok(Hat { level, index, block: p.blocks[index] })
    }

    /// Hat block one level up, per the re-entry rule.
    fn climb(&self, origin: i64, hat: &Hat, divergences: &mut usize) -> Result<Hat> {
        let by_origin = self.hat(hat.level + 1, origin)?;
        let by_start = self.hat(hat.level + 1, hat.block.start)?;
        if by_origin.index != by_start.index {
            *divergences += 1;
        }
        Ok(match self.reentry {
            Reentry::SameOrigin => by_origin,
            Reentry::BlockStart => by_start,
        })
    }

    fn not_rightmost(&self, origin: i64, hat: &Hat, case: CaseId) -> Result<()> {
        let len = self.partition(hat.level)?.block_len as i64;
        if origin == hat.block.start + len - 1 {
            return Err(Error::Invariant(format!(
                "case {case}: origin is the rightmost site of its level-{} block",
                hat.level
            )));
        }
        Ok(())
    }

    fn expect(&self, level: usize, index: isize, want: BlockKind, case: CaseId) -> Result<()> {
        let got = self.kind(level, index)?;
        if got != want {
            return Err(Error::Invariant(format!(
                "case {case}: expected {want:?} at block {index} of level {level}, found {got:?}"
            )));
        }
        Ok(())
    }

    /// Walks the case analysis from level `k` for the block containing
    /// `origin`. `traces[j]` is `h_j(E)`.
    pub fn classify(&self, origin: i64, k: usize, traces: &[ExtFloat]) -> Result<CaseLabel> {
        let mut path = Vec::new();
        let mut fallbacks = 0;
        let mut divergences = 0;
        let mut hat = self.hat(k, origin)?;
        let h_small = |j: usize| -> Result<bool> {
            traces
                .get(j)
                .map(|h| h.abs_minus(2.0) <= 0.0)
                .ok_or(Error::LevelBudget { level: j, max: traces.len().saturating_sub(1) })
        };

        loop {
            let j = hat.level;
            let i = hat.index as isize;
            if hat.block.kind == BlockKind::T {
                path.push(CaseId::C4);
                hat = self.climb(origin, &hat, &mut divergences)?;
                self.expect(hat.level, hat.index as isize, BlockKind::S, CaseId::C4)?;
                continue;
            }
            let left = self.kind(j, i - 1)?;
            let right = self.kind(j, i + 1)?;
            // entry point into the "s ŝ" analysis and the case it reduces from
            let (double_hat, reduced_from) = match (left, right) {
                (BlockKind::S, BlockKind::S) => {
                    path.extend([CaseId::C1, CaseId::C1_1]);
                    return Ok(self.label(origin, CaseId::C1_1, path, &hat, CertKind::Cube, fallbacks, divergences));
                }
                (BlockKind::T, BlockKind::S) => {
                    path.extend([CaseId::C1, CaseId::C1_2]);
                    if h_small(j)? {
                        return Ok(self.label(origin, CaseId::C1_2, path, &hat, CertKind::Square, fallbacks, divergences));
                    }
                    if !h_small(j + 1)? {
                        return Err(Error::Precondition(format!(
                            "|h_{j}| > 2 and |h_{}| > 2: energy is outside the band approximant",
                            j + 1
                        )));
                    }
                    let up = self.climb(origin, &hat, &mut divergences)?;
                    self.not_rightmost(origin, &up, CaseId::C1_2)?;
                    let ui = up.index as isize;
                    self.expect(up.level, ui - 1, BlockKind::S, CaseId::C1_2)?;
                    if up.block.kind == BlockKind::T {
                        path.push(CaseId::C1_2_1);
                        if self.kind(up.level, ui - 2)? == BlockKind::S {
                            path.push(CaseId::C1_2_1_1);
                            return Ok(self.label(origin, CaseId::C1_2_1_1, path, &up, CertKind::ReflectedSquare, fallbacks, divergences));
                        }
                        path.push(CaseId::C1_2_1_2);
                        let top = self.climb(origin, &up, &mut divergences)?;
                        self.not_rightmost(origin, &top, CaseId::C1_2_1_2)?;
                        (top, CaseId::C1_2_1_2)
                    } else {
                        path.push(CaseId::C1_2_2);
                        (up, CaseId::C1_2_2)
                    }
                }
                (BlockKind::S, BlockKind::T) => {
                    path.push(CaseId::C2);
                    (hat, CaseId::C2)
                }
                (BlockKind::T, BlockKind::T) => {
                    path.push(CaseId::C3);
                    let up = self.climb(origin, &hat, &mut divergences)?;
                    (up, CaseId::C3)
                }
            };

            // "s ŝ": s s ŝ gives a reflected cube, s ŝ s a cube
            let h = double_hat;
            let hi = h.index as isize;
            if h.block.kind != BlockKind::S {
                return Err(Error::Invariant(format!("case {reduced_from}: hat block is not s")));
            }
            self.expect(h.level, hi - 1, BlockKind::S, reduced_from)?;
            let (case_a, case_b) = if reduced_from == CaseId::C1_2_1_2 {
                (CaseId::C1_2_1_2_1, CaseId::C1_2_1_2_2)
            } else {
                (reduced_from, reduced_from)
            };
            if self.kind(h.level, hi - 2)? == BlockKind::S {
                if case_a != reduced_from {
                    path.push(case_a);
                }
                return Ok(self.label(origin, case_a, path, &h, CertKind::ReflectedCube, fallbacks, divergences));
            }
            if self.kind(h.level, hi + 1)? == BlockKind::S {
                if case_b != reduced_from {
                    path.push(case_b);
                }
                return Ok(self.label(origin, case_b, path, &h, CertKind::Cube, fallbacks, divergences));
            }
            path.push(CaseId::Fallback);
            fallbacks += 1;
            hat = self.climb(origin, &h, &mut divergences)?;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn label(
        &self,
        origin: i64,
        case: CaseId,
        path: Vec<CaseId>,
        hat: &Hat,
        kind: CertKind,
        fallbacks: usize,
        reentry_divergences: usize,
    ) -> CaseLabel {
        let m = self.spec.block_len(hat.level);
        let rotation = (origin - hat.block.start) as usize;
        CaseLabel {
            origin,
            case,
            path,
            level: hat.level,
            m,
            kind,
            rotation,
            fallbacks,
            reentry_divergences,
        }
    }
}
