use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde_json::{json, Value};

use psturm::cocycle::{lyapunov, sample_starts, trace_table, DIRECT_BUDGET};
use psturm::complexity::{complexity_report, SearchOptions};
use psturm::gordon::{nondecay_scan, sweep, SweepParams};
use psturm::sequences::{SequenceSpec, ToeplitzSpec};
use psturm::spectrum::{
    band_approximant, sample_energies, sparse_essential_spectrum, sparse_no_eigenvalue_certificate, BandParams,
    MAX_LEVEL,
};

use crate::config::{Format, RunConfig};
use crate::output::{cell, csv_header, envelope, ext, num, write_atomic};
use crate::{Command, Common};

struct Ctx {
    name: &'static str,
    cfg: RunConfig,
    spec: SequenceSpec,
}

impl Ctx {
    fn load(name: &'static str, common: &Common) -> Result<Self> {
        let mut cfg = RunConfig::load(&common.spec)?;
        if let Some(out) = &common.out {
            cfg.output.path = Some(out.display().to_string());
            if common.format.is_none() {
                match out.extension().and_then(|e| e.to_str()) {
                    Some("csv") => cfg.output.format = Format::Csv,
                    Some("json") => cfg.output.format = Format::Json,
                    _ => {}
                }
            }
        }
        if let Some(f) = common.format {
            cfg.output.format = f;
        }
        if let Some(s) = common.seed {
            cfg.output.seed = s;
        }
        let spec = cfg.spec.build().context("invalid spec section")?;
        Ok(Self { name, cfg, spec })
    }

    fn toeplitz(&self) -> Result<&ToeplitzSpec> {
        match &self.spec {
            SequenceSpec::Toeplitz(t) => Ok(t),
            other => bail!("`{}` needs a toeplitz spec, got {}", self.name, other.kind()),
        }
    }

    /// Emits JSON, or the CSV built by `csv` when that format is selected.
    fn emit(&self, result: Value, csv: Option<(&str, Vec<String>)>) -> Result<()> {
        let body = match (self.cfg.output.format, csv) {
            (Format::Csv, Some((header, rows))) => {
                let mut out = csv_header(self.name, &self.cfg)?;
                writeln!(out, "{header}")?;
                for r in rows {
                    writeln!(out, "{r}")?;
                }
                out
            }
            (Format::Csv, None) => bail!("`{}` supports only json output", self.name),
            (Format::Json, _) => {
                let mut s = serde_json::to_string_pretty(&envelope(self.name, &self.cfg, result)?)?;
                s.push('\n');
                s
            }
        };
        write_atomic(self.cfg.output.path.as_deref().map(Path::new), &body)
    }
}

fn pick<T: Copy>(flag: Option<T>, slot: &mut Option<T>, default: T) -> T {
    let v = flag.or(*slot).unwrap_or(default);
    *slot = Some(v);
    v
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate { common, start, len } => {
            let mut ctx = Ctx::load("generate", &common)?;
            let a = &mut ctx.cfg.analysis;
            let start = pick(start, &mut a.start, 0);
            let len = pick(len, &mut a.len, 50);
            ensure!(len > 0, "--len must be at least 1");
            let w = ctx.spec.window(start, len)?;
            let alphabet = ctx.spec.alphabet();
            let labels: String = w.symbols.iter().map(|&s| alphabet.label(s)).collect();
            let values: Vec<Value> = w.symbols.iter().map(|&s| num(alphabet.value(s))).collect();
            let rows = (0..len)
                .map(|i| {
                    let s = w.symbols[i];
                    format!("{},{},{}", start + i as i64, alphabet.label(s), cell(alphabet.value(s)))
                })
                .collect();
            ctx.emit(
                json!({ "start": start, "len": len, "symbols": labels, "values": values }),
                Some(("index,symbol,value", rows)),
            )
        }
        Command::Complexity { common, n_max, t_max, window, beam } => {
            let mut ctx = Ctx::load("complexity", &common)?;
            let default_start = if matches!(ctx.spec, SequenceSpec::Sparse(_)) { 1 } else { 0 };
            let a = &mut ctx.cfg.analysis;
            let n_max = pick(n_max, &mut a.n_max, 12);
            let t_max = pick(t_max, &mut a.t_max, 200);
            let len = pick(window, &mut a.window, 5000);
            let start = pick(None, &mut a.start, default_start);
            let opts = SearchOptions { beam_width: pick(beam, &mut a.beam, SearchOptions::default().beam_width), ..Default::default() };
            ensure!(n_max >= 1 && n_max <= t_max + 1, "need 1 <= --n-max <= --t-max + 1");
            let w = ctx.spec.window(start, len)?;
            let r = complexity_report(&w, n_max, t_max, &opts)?;
            let mut rows = Vec::new();
            let mut per_n = Vec::new();
            for i in 0..r.n_values.len() {
                let offs: Vec<String> = r.templates[i].offsets().iter().map(|o| o.to_string()).collect();
                rows.push(format!("{},{},{},{}", r.n_values[i], r.p[i], r.pstar[i], offs.join(" ")));
                per_n.push(json!({
                    "n": r.n_values[i],
                    "p": r.p[i],
                    "pstar": r.pstar[i],
                    "template": r.templates[i].offsets(),
                }));
            }
            ctx.emit(
                json!({
                    "window_len": r.window_len,
                    "t_max": r.t_max,
                    "positions": [r.position_range.0, r.position_range.1],
                    "rows": per_n,
                }),
                Some(("n,p,pstar,template", rows)),
            )
        }
        Command::Spectrum { common, level, grid, tol } => {
            let mut ctx = Ctx::load("spectrum", &common)?;
            let spec = ctx.toeplitz()?.clone();
            let defaults = BandParams::for_spec(&spec);
            let a = &mut ctx.cfg.analysis;
            let level = pick(level, &mut a.level, 4);
            let grid = pick(grid, &mut a.grid, defaults.grid);
            let tol = pick(tol, &mut a.tol, defaults.tol);
            ensure!(level < MAX_LEVEL, "--level must be below {MAX_LEVEL}");
            ensure!(grid >= 100, "--grid must be at least 100");
            ensure!(tol > 0.0 && tol < 1e-2, "--tol must lie in (0, 1e-2)");
            let params = BandParams { grid, tol, ..defaults };
            let set = band_approximant(&spec, level, &params)?;
            let intervals: Vec<Value> = set.bands.iter().map(|b| json!([num(b.lo), num(b.hi)])).collect();
            let isolated: Vec<usize> =
                set.bands.iter().enumerate().filter(|(_, b)| b.isolated).map(|(i, _)| i).collect();
            let rows = set
                .bands
                .iter()
                .map(|b| format!("{},{},{}", cell(b.lo), cell(b.hi), b.isolated))
                .collect();
            ctx.emit(
                json!({
                    "level": level,
                    "levels": set.levels,
                    "intervals": intervals,
                    "isolated": isolated,
                    "measure": num(set.measure()),
                    "tol": num(set.tol),
                    "grid_step": num(set.grid_step),
                }),
                Some(("lo,hi,isolated", rows)),
            )
        }
        Command::Lyapunov { common, e_min, e_max, energies, n_steps } => {
            let mut ctx = Ctx::load("lyapunov", &common)?;
            let a = &mut ctx.cfg.analysis;
            let e_min = pick(e_min, &mut a.e_min, -3.0);
            let e_max = pick(e_max, &mut a.e_max, 4.0);
            let count = pick(energies, &mut a.energies, 71);
            let n_steps = pick(n_steps, &mut a.n_steps, 100_000);
            ensure!(e_min.is_finite() && e_max.is_finite() && e_min <= e_max, "need finite --e-min <= --e-max");
            ensure!(count >= 1 && n_steps >= 1, "--energies and --n-steps must be positive");
            let grid: Vec<f64> = (0..count)
                .map(|i| if count == 1 { e_min } else { e_min + (e_max - e_min) * i as f64 / (count - 1) as f64 })
                .collect();
            let starts = sample_starts(4);
            let est = grid
                .par_iter()
                .map(|&e| lyapunov(&ctx.spec, e, n_steps, &starts))
                .collect::<psturm::Result<Vec<_>>>()?;
            let rows = est.iter().map(|l| format!("{},{},{}", cell(l.energy), cell(l.gamma), cell(l.spread))).collect();
            let list: Vec<Value> = est
                .iter()
                .map(|l| json!({ "energy": num(l.energy), "gamma": num(l.gamma), "spread": num(l.spread) }))
                .collect();
            ctx.emit(json!({ "n_steps": n_steps, "starts": starts, "estimates": list }), Some(("E,gamma,spread", rows)))
        }
        Command::GordonScan { common, level, energies, origins, nondecay_n } => {
            let mut ctx = Ctx::load("gordon-scan", &common)?;
            let spec = ctx.toeplitz()?.clone();
            let seed = ctx.cfg.output.seed;
            let a = &mut ctx.cfg.analysis;
            let level = pick(level, &mut a.level, 4);
            let n_e = pick(energies, &mut a.energies, 50);
            let n_o = pick(origins, &mut a.origins, 200);
            let n_nd = pick(nondecay_n, &mut a.nondecay_n, 2000);
            ensure!(level >= 1 && level + 3 < MAX_LEVEL, "--level must lie in 1..={}", MAX_LEVEL - 4);
            ensure!(n_e >= 1 && n_o >= 1, "--energies and --origins must be positive");
            let bands = band_approximant(&spec, level + 3, &BandParams::for_spec(&spec))?;
            let es = sample_energies(&bands, n_e);
            let reach = 10 * spec.block_len(level + 1) as i64;
            let mut pool: Vec<i64> = (-reach..reach).collect();
            pool.shuffle(&mut StdRng::seed_from_u64(seed));
            pool.truncate(n_o);
            let report = sweep(&spec, &es, &SweepParams::new(level, pool))?;

            let edges = [0.0, 1e-2, 1e-1, 0.5, 1.0, 2.0, 5.0];
            let mut hist = vec![0usize; edges.len() + 1];
            for &m in &report.margins {
                hist[edges.iter().take_while(|&&e| m >= e).count()] += 1;
            }
            let mut nondecay = Vec::new();
            let mut falsified = 0;
            if n_nd > 0 {
                for &e in &es {
                    let r = nondecay_scan(&spec, e, n_nd)?;
                    falsified += r.falsifications.len();
                    let w = r.worst_witness.as_ref();
                    nondecay.push(json!({
                        "energy": num(e),
                        "worst": num(r.worst),
                        "worst_n": w.map(|w| w.n),
                        "worst_m": w.map(|w| w.m),
                        "falsifications": r.falsifications.len(),
                    }));
                }
            }
            let failures: Vec<Value> =
                report.failures.iter().map(|(e, o, msg)| json!({ "energy": num(*e), "origin": o, "reason": msg })).collect();
            let cases: BTreeMap<&str, usize> = report.case_counts.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            ctx.emit(
                json!({
                    "energies": es.iter().map(|&e| num(e)).collect::<Vec<_>>(),
                    "classified": report.classified,
                    "certificates": report.certificates,
                    "case_counts": cases,
                    "min_margin": num(report.min_margin),
                    "min_weak_margin": num(report.min_weak_margin),
                    "margin_histogram": { "edges": edges.iter().map(|&e| num(e)).collect::<Vec<_>>(), "counts": hist },
                    "fallbacks": report.fallbacks,
                    "reentry_divergences": report.reentry_divergences,
                    "trace_check": num(report.trace_check),
                    "falsification_candidates": failures,
                    "nondecay": nondecay,
                    "nondecay_falsifications": falsified,
                }),
                None,
            )
        }
        Command::SparseCheck { common, energy, k } => {
            let mut ctx = Ctx::load("sparse-check", &common)?;
            let SequenceSpec::Sparse(spec) = &ctx.spec else {
                bail!("`sparse-check` needs a sparse spec, got {}", ctx.spec.kind());
            };
            let spec = spec.clone();
            let a = &mut ctx.cfg.analysis;
            let energy = pick(energy, &mut a.energy, 0.0);
            let k = pick(k, &mut a.k, 15);
            ensure!(energy.abs() < 2.0, "--energy must lie in (-2, 2)");
            ensure!(k >= 4, "--k must be at least 4");
            let c = sparse_no_eigenvalue_certificate(&spec, energy, k, 10_000)?;
            let ((lo, hi), point) = sparse_essential_spectrum(&spec);
            let rows = c
                .terms
                .iter()
                .zip(&c.partial_sums)
                .enumerate()
                .map(|(i, (t, s))| format!("{},{},{}", i + 1, cell(*t), cell(*s)))
                .collect();
            ctx.emit(
                json!({
                    "energy": num(c.energy),
                    "c_e": num(c.c_e),
                    "c_e_sampled": num(c.c_e_sampled),
                    "sample_powers": c.sample_powers,
                    "o_ev": num(c.o_ev),
                    "terms": c.terms.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                    "partial_sums": c.partial_sums.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                    "verdict": format!("{:?}", c.verdict).to_lowercase(),
                    "essential_spectrum": { "interval": [num(lo), num(hi)], "point": num(point) },
                }),
                Some(("k,term,partial_sum", rows)),
            )
        }
        Command::TraceTable { common, energy, k } => {
            let mut ctx = Ctx::load("trace-table", &common)?;
            let spec = ctx.toeplitz()?.clone();
            let a = &mut ctx.cfg.analysis;
            let energy = pick(energy, &mut a.energy, 0.0);
            let k = pick(k, &mut a.k, 6);
            ensure!(energy.is_finite(), "--energy must be finite");
            ensure!((2..=40).contains(&k), "--k must lie in 2..=40");
            let t = trace_table(&spec, energy, k, DIRECT_BUDGET)?;
            let mut rows = Vec::new();
            let mut list = Vec::new();
            for j in 0..t.levels() {
                let rec = t.h_rec[j];
                let direct = t.h_direct[j];
                let diff = direct.map(|d| (d - rec).abs());
                rows.push(format!(
                    "{j},{},{},{}",
                    direct.map(|d| d.to_string()).unwrap_or_default(),
                    rec,
                    diff.map(|d| d.to_string()).unwrap_or_default()
                ));
                list.push(json!({
                    "k": j,
                    "h_direct": direct.map(ext),
                    "h_recursion": ext(rec),
                    "abs_diff": diff.map(ext),
                }));
            }
            ctx.emit(
                json!({ "energy": num(energy), "periods": t.periods, "rows": list }),
                Some(("k,h_direct,h_recursion,abs_diff", rows)),
            )
        }
    }
}
