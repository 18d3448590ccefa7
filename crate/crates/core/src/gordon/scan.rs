use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{propagate, verify_bound, Classifier, Reentry};
use crate::cocycle::{trace_table, TraceEvaluator};
use crate::error::{Error, Result};
use crate::sequences::ToeplitzSpec;

/// Slack on the `1/2` and `1/4` constants.
pub const SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct NondecayWitness {
    pub n: usize,
    /// `m` with `|m| >= n` maximizing `‖Φ(m)‖` over the searched range.
    pub m: i64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NondecayReport {
    pub energy: f64,
    pub n_target: usize,
    /// Smallest `max_{n <= |m| <= R(n)} ‖Φ(m)‖` over `n` and both basis
    /// solutions.
    pub worst: f64,
    pub worst_witness: Option<NondecayWitness>,
    /// `(basis index, n)` pairs without a witness of size `1/4 - slack`.
    pub falsifications: Vec<(usize, usize)>,
}

/// For every `n <= n_target` and both solutions with `Φ(0) = (1, 0)` and
/// `(0, 1)`, finds `m` with `|m| >= n` and `‖Φ(m)‖ >= 1/4`, searching
/// `|m| <= R(n) = 8 ℓ_{k+1}` where `ℓ_k` is the first block length `>= n`.
pub fn nondecay_scan(spec: &ToeplitzSpec, energy: f64, n_target: usize) -> Result<NondecayReport> {
    if n_target == 0 {
        return Err(Error::Precondition("n_target must be at least 1".into()));
    }
    let level_for = |n: usize| (0..).find(|&k| spec.block_len(k) >= n).expect("blocks grow");
    let reach = |n: usize| 8 * spec.block_len(level_for(n) + 1) as i64;
    let r_max = reach(n_target);
    let pot = spec.window(spec.depth_for(2 * r_max as usize + 4), -r_max - 1, 2 * r_max as usize + 3)?
        .valued(spec.alphabet());

    let mut report = NondecayReport {
        energy,
        n_target,
        worst: f64::INFINITY,
        worst_witness: None,
        falsifications: Vec::new(),
    };
    for (basis, init) in [(1.0, 0.0), (0.0, 1.0)].into_iter().enumerate() {
        // Φ(0) = (φ(0), φ(-1))
        let track = propagate(&pot, energy, 0, (init.1, init.0))?;
        let norms = |t: i64| track.norm(t).expect("inside the window");
        let mut n = 1;
        while n <= n_target {
            let r = reach(n);
            let n_end = (1..=n_target).rev().find(|&x| reach(x) == r).expect("n itself qualifies");
            // suffix maxima of max(‖Φ(t)‖, ‖Φ(-t)‖) for t in [n, r]
            let mut best = vec![(0.0f64, 0i64); (r + 2) as usize];
            for t in (1..=r).rev() {
                let (a, b) = (norms(t), norms(-t));
                let here = if a >= b { (a, t) } else { (b, -t) };
                let next = best[t as usize + 1];
                best[t as usize] = if here.0 >= next.0 { here } else { next };
            }
            for (nn, &(norm, m)) in best.iter().enumerate().take(n_end + 1).skip(n) {
                if norm < report.worst {
                    report.worst = norm;
                    report.worst_witness = Some(super::NondecayWitness { n: nn, m, norm });
                }
                if norm < 0.25 - SLACK {
                    report.falsifications.push((basis, nn));
                }
            }
            n = n_end + 1;
        }
    }
    Ok(report)
}

/// Case name, fallbacks, re-entry divergences and `(margin, weak margin)`
/// per angle.
type Labelled = (String, usize, usize, Vec<(f64, Option<f64>)>);

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub level: usize,
    pub origins: Vec<i64>,
    /// Angles `α` of the initial data `(φ(-1), φ(0)) = (cos α, sin α)`.
    pub angles: Vec<f64>,
    pub reentry: Reentry,
    /// Highest partition level the classifier may climb to.
    pub max_level: usize,
}

impl SweepParams {
    pub fn new(level: usize, origins: Vec<i64>) -> Self {
        let angles = (0..4).map(|i| i as f64 * std::f64::consts::FRAC_PI_4).collect();
        Self { level, origins, angles, reentry: Reentry::default(), max_level: level + 6 }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepReport {
    pub classified: usize,
    pub certificates: usize,
    pub case_counts: BTreeMap<String, usize>,
    pub min_margin: f64,
    pub min_weak_margin: f64,
    /// Every certificate margin, in input order.
    pub margins: Vec<f64>,
    /// `(energy, origin, message)` for every failed classification or
    /// verification, and every margin below `-1e-9`.
    pub failures: Vec<(f64, i64, String)>,
    pub fallbacks: usize,
    pub reentry_divergences: usize,
    /// Largest disagreement between direct and recursive traces on the
    /// validated subsample.
    pub trace_check: f64,
}

/// Classifies every `(energy, origin)` pair and verifies the resulting
/// bound for each initial angle.
pub fn sweep(spec: &ToeplitzSpec, energies: &[f64], params: &SweepParams) -> Result<SweepReport> {
    let o_min = *params.origins.iter().min().ok_or(Error::Precondition("no origins".into()))?;
    let o_max = *params.origins.iter().max().expect("non-empty");
    let ell = spec.block_len(params.max_level) as i64;
    let n = spec.tail_period(params.max_level + 1) as i64;
    let pad = (2 * n + 4) * ell;
    let (lo, hi) = (o_min - pad, o_max + pad);
    let len = (hi - lo) as usize;
    let window = spec.window(spec.depth_for(len), lo, len)?;
    let pot = window.valued(spec.alphabet());
    let classifier = Classifier::new(spec, &window, params.max_level, params.reentry);
    for level in params.level..=params.max_level {
        classifier.partition(level)?;
    }
    let eval = TraceEvaluator::new(spec, params.max_level + 1)?;
    let trace_check = energies
        .iter()
        .step_by(10.max(energies.len() / 5))
        .map(|&e| trace_table(spec, e, 7.min(params.max_level), 1 << 16).map(|t| t.max_rel_diff()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let results: Vec<(f64, i64, Result<Labelled>)> = energies
        .par_iter()
        .flat_map_iter(|&e| {
            let traces = eval.eval(e);
            let classifier = &classifier;
            let pot = &pot;
            params.origins.iter().map(move |&o| {
                let run = || -> Result<_> {
                    let label = classifier.classify(o, params.level, &traces)?;
                    let span = 2 * label.m as i64 + 2;
                    let local = crate::sequences::Potential {
                        start: o - span,
                        values: pot.values[(o - span - pot.start) as usize..(o + span - pot.start) as usize]
                            .to_vec(),
                    };
                    let mut margins = Vec::with_capacity(params.angles.len());
                    for &a in &params.angles {
                        let track = propagate(&local, e, o, (a.cos(), a.sin()))?;
                        let r = verify_bound(&track, &label, spec, &traces)?;
                        margins.push((r.margin, r.weak_margin));
                    }
                    let name = format!("{}:{}", label.case, label.kind);
                    Ok((name, label.fallbacks, label.reentry_divergences, margins))
                };
                (e, o, run())
            })
        })
        .collect();

    let mut report = SweepReport {
        min_margin: f64::INFINITY,
        min_weak_margin: f64::INFINITY,
        trace_check,
        ..Default::default()
    };
    for (e, o, r) in results {
        match r {
            Ok((name, fb, div, margins)) => {
                report.classified += 1;
                *report.case_counts.entry(name).or_default() += 1;
                report.fallbacks += fb;
                report.reentry_divergences += div;
                for (m, w) in margins {
                    report.certificates += 1;
                    report.margins.push(m);
                    report.min_margin = report.min_margin.min(m);
                    if let Some(w) = w {
                        report.min_weak_margin = report.min_weak_margin.min(w);
                    }
                    if m < -1e-9 {
                        report.failures.push((e, o, format!("margin {m:e}")));
                    }
                }
            }
            Err(err) => report.failures.push((e, o, err.to_string())),
        }
    }
    Ok(report)
}
