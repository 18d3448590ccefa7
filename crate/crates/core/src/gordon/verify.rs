use super::{CaseLabel, CertKind, SolutionTrack};
use crate::cocycle::ExtFloat;
use crate::error::{Error, Result};
use crate::sequences::{blocks, ToeplitzSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: CertKind,
    pub m: usize,
    /// The maximum in the Gordon bound.
    pub value: f64,
    /// `value - 1/2`.
    pub margin: f64,
    /// Squares only: the bound with `|h|` replaced by 2, minus `1/2`.
    pub weak_margin: Option<f64>,
    pub h: Option<f64>,
}

/// Re-checks the structure named by `label` on the potential stored in
/// `track`, then evaluates the matching lower bound on `‖Φ‖`.
pub fn verify_bound(
    track: &SolutionTrack,
    label: &CaseLabel,
    spec: &ToeplitzSpec,
    traces: &[ExtFloat],
) -> Result<BoundReport> {
    let m = label.m as i64;
    let o = track.origin;
    let v = |t: i64| {
        track.potential.at(o + t).ok_or_else(|| {
            Error::Precondition(format!("site {} is outside the solution window", o + t))
        })
    };
    let norm = |t: i64| {
        track
            .norm(t)
            .ok_or_else(|| Error::Precondition(format!("Φ({t}) is outside the solution window")))
    };
    let broken = |what: &str| {
        Error::Invariant(format!(
            "case {} at level {}: {what} fails on re-check",
            label.case, label.level
        ))
    };

    match label.kind {
        CertKind::Cube | CertKind::ReflectedCube => {
            let base = if label.kind == CertKind::Cube { -m } else { -2 * m };
            for j in 0..m {
                let (a, b, c) = (v(base + j)?, v(base + m + j)?, v(base + 2 * m + j)?);
                if a != b || b != c {
                    return Err(broken("period-m cube"));
                }
            }
            let ts = if label.kind == CertKind::Cube { [-m, m, 2 * m] } else { [m, -m, -2 * m] };
            let value = ts.iter().map(|&t| norm(t)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
            Ok(BoundReport { kind: label.kind, m: label.m, value, margin: value - 0.5, weak_margin: None, h: None })
        }
        CertKind::Square | CertKind::ReflectedSquare => {
            let (s, _) = blocks(spec, label.level)?;
            if s.len() != label.m || label.rotation >= label.m {
                return Err(broken("block length"));
            }
            let alphabet = spec.alphabet();
            let sign = if label.kind == CertKind::Square { 1 } else { -1 };
            let base = if sign == 1 { 0 } else { -2 * m };
            for i in 0..2 * m {
                let want = alphabet.value(s[(label.rotation + i as usize) % label.m]);
                if v(base + i)? != want {
                    return Err(broken("rotation of s s"));
                }
            }
            let h = traces
                .get(label.level)
                .ok_or(Error::LevelBudget { level: label.level, max: traces.len().saturating_sub(1) })?
                .abs()
                .to_f64();
            let (n1, n2) = (norm(sign * m)?, norm(sign * 2 * m)?);
            let value = (h * n1).max(n2);
            let weak = if h <= 2.0 { Some((2.0 * n1).max(n2) - 0.5) } else { None };
            Ok(BoundReport { kind: label.kind, m: label.m, value, margin: value - 0.5, weak_margin: weak, h: Some(h) })
        }
    }
}
