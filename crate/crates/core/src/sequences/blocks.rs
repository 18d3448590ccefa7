use super::{Symbol, ToeplitzSpec, Window};
use crate::error::{Error, Result};

/// `(s_k, t_k)`, built from `s_0 = ϖ a_1`, `t_0 = ϖ ā_1` by
/// `s_k = s_{k-1}^{n_k - 1} t_{k-1}`, `t_k = s_{k-1}^{n_k}`.
pub fn blocks(spec: &ToeplitzSpec, k: usize) -> Result<(Vec<Symbol>, Vec<Symbol>)> {
    let a1 = spec.tail_letter(1);
    let a2 = spec.tail_letter(2);
    let two_letter = (1..=spec.tail().len() + 1).all(|j| {
        let a = spec.tail_letter(j);
        a == a1 || a == a2
    });
    if !two_letter {
        return Err(Error::InvalidSpec(
            "s/t blocks need a tail alternating between two letters".into(),
        ));
    }
    let mut s = spec.prefix().pattern.clone();
    let mut t = s.clone();
    s.push(a1);
    t.push(a2);
    for j in 1..=k {
        let n = spec.tail_period(j);
        let mut s_next = Vec::with_capacity(s.len() * n);
        for _ in 0..n - 1 {
            s_next.extend_from_slice(&s);
        }
        let mut t_next = s_next.clone();
        s_next.extend_from_slice(&t);
        t_next.extend_from_slice(&s);
        s = s_next;
        t = t_next;
    }
    Ok((s, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    S,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionBlock {
    pub start: i64,
    pub kind: BlockKind,
}

/// Tiling of a window by `s_k` / `t_k` blocks of common length `ℓ_k`.
///
/// Only blocks lying entirely inside the window are listed; they are
/// contiguous and start on `residue` mod `ℓ_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionView {
    pub level: usize,
    pub block_len: usize,
    pub residue: usize,
    pub blocks: Vec<PartitionBlock>,
    /// Number of `s_k` blocks between consecutive `t_k` blocks.
    pub gaps: Vec<usize>,
}

impl PartitionView {
    /// Index into `blocks` of the block covering `x`.
    pub fn block_index(&self, x: i64) -> Option<usize> {
        let first = self.blocks.first()?.start;
        if x < first {
            return None;
        }
        let i = ((x - first) / self.block_len as i64) as usize;
        (i < self.blocks.len()).then_some(i)
    }

    pub fn block_at(&self, x: i64) -> Option<PartitionBlock> {
        self.block_index(x).map(|i| self.blocks[i])
    }

    /// Level `k - 1` tiling obtained by expanding every block once.
    pub fn expand(&self, spec: &ToeplitzSpec) -> Result<Vec<PartitionBlock>> {
        if self.level == 0 {
            return Err(Error::Precondition("level 0 blocks cannot be expanded".into()));
        }
        let n = spec.tail_period(self.level);
        let sub = (self.block_len / n) as i64;
        let mut out = Vec::with_capacity(self.blocks.len() * n);
        for b in &self.blocks {
            for j in 0..n {
                let kind = if j + 1 == n && b.kind == BlockKind::S {
                    BlockKind::T
                } else {
                    BlockKind::S
                };
                out.push(PartitionBlock { start: b.start + j as i64 * sub, kind });
            }
        }
        Ok(out)
    }
}

/// The unique `k`-partition of `window`.
///
/// Every residue class mod `ℓ_k` is tried; a residue is legal when all
/// complete blocks read `s_k` or `t_k` and the runs of `s_k` between `t_k`
/// blocks have length `n_{k+1} - 1` or `2 n_{k+1} - 1` (runs cut by the
/// window edge may be shorter).
pub fn k_partition(window: &Window, spec: &ToeplitzSpec, k: usize) -> Result<PartitionView> {
    let (s, t) = blocks(spec, k)?;
    let ell = s.len();
    let n_next = spec.tail_period(k + 1);
    let required = (4 * n_next + 2) * ell;
    if window.len() < 2 * ell {
        return Err(Error::WindowTooShort { len: window.len(), required });
    }
    let short = n_next - 1;
    let long = 2 * n_next - 1;

    let try_residue = |offset: usize| -> Option<(Vec<PartitionBlock>, Vec<usize>)> {
        let mut kinds = Vec::new();
        let mut run = 0usize;
        let mut seen_t = false;
        let mut gaps = Vec::new();
        let mut pos = offset;
        while pos + ell <= window.len() {
            let chunk = &window.symbols[pos..pos + ell];
            // the blocks share all but the last symbol
            if chunk[..ell - 1] != s[..ell - 1] {
                return None;
            }
            let kind = if chunk[ell - 1] == s[ell - 1] {
                BlockKind::S
            } else if chunk[ell - 1] == t[ell - 1] {
                BlockKind::T
            } else {
                return None;
            };
            match kind {
                BlockKind::S => {
                    run += 1;
                    if run > long {
                        return None;
                    }
                }
                BlockKind::T => {
                    if seen_t {
                        if run != short && run != long {
                            return None;
                        }
                        gaps.push(run);
                    } else if run > long {
                        return None;
                    }
                    seen_t = true;
                    run = 0;
                }
            }
            kinds.push((pos, kind));
            pos += ell;
        }
        if kinds.is_empty() {
            return None;
        }
        let blocks = kinds
            .into_iter()
            .map(|(p, kind)| PartitionBlock { start: window.start + p as i64, kind })
            .collect();
        Some((blocks, gaps))
    };

    let legal: Vec<(usize, Vec<PartitionBlock>, Vec<usize>)> = (0..ell)
        .filter_map(|off| try_residue(off).map(|(b, g)| (off, b, g)))
        .collect();
    match legal.len() {
        0 => Err(Error::NoPartition { level: k }),
        1 => {
            let (_, blocks, gaps) = legal.into_iter().next().expect("one legal residue");
            let residue = blocks[0].start.rem_euclid(ell as i64) as usize;
            Ok(PartitionView { level: k, block_len: ell, residue, blocks, gaps })
        }
        _ => Err(Error::AmbiguousPartition {
            level: k,
            residues: legal
                .iter()
                .map(|(off, _, _)| (window.start + *off as i64).rem_euclid(ell as i64) as usize)
                .collect(),
            required,
        }),
    }
}
