use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Measure, RateMode, SweepConfig};
use crate::error::{Error, Result};
use crate::magic_measures::{
    collision_probability, conditional_entropy, decoder_breakdown, magic_report, renyi_conditional_entropy,
    BreakdownBasis, MagicOptions,
};
use crate::pauli_core::{circuit_to_tableau, derive_seed, sample_encoder, syndrome_map, CliffordTableau};
use crate::statevector::{born_table, logical_ensemble, ErrorExpansion, StateVector};

/// Bumped whenever the record layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: u32,
    /// Index into the (size, alpha) grid, sizes outermost.
    pub point: usize,
    pub circuit: usize,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub alpha: f64,
    pub measure: String,
    pub value: f64,
    /// Rejected encoders drawn before this one.
    pub resampled: u32,
    /// Path of a per-syndrome payload, when one was written.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub records: Vec<ResultRecord>,
    /// Encoders rejected as non-generic and redrawn.
    pub resampled_events: usize,
    /// Circuit slots with no usable encoder after `max_resamples` attempts.
    pub failed_circuits: usize,
    /// Points for which every circuit failed.
    pub failed_points: Vec<usize>,
}

impl SweepOutput {
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Whether a drawn encoder is usable for the sweep: vanishing-rate codes need
/// exactly two errors per syndrome.
fn accept(tableau: &CliffordTableau, n: usize, k: usize, rate: &RateMode) -> Result<bool> {
    if !matches!(rate, RateMode::Vanishing) {
        return Ok(true);
    }
    let map = syndrome_map(tableau, &(k..n).collect::<Vec<_>>())?;
    Ok(map.matrix.rank() + k == n)
}

struct CircuitDraw {
    seed: u64,
    resampled: u32,
    tableau: CliffordTableau,
}

fn draw_circuit(cfg: &SweepConfig, n: usize, k: usize, d: usize, idx: usize) -> Result<Option<CircuitDraw>> {
    for attempt in 0..cfg.max_resamples.max(1) {
        let seed = derive_seed(cfg.master_seed, &[n as u64, idx as u64, attempt as u64]);
        let tableau = circuit_to_tableau(&sample_encoder(n, d, seed)?);
        if accept(&tableau, n, k, &cfg.rate)? {
            return Ok(Some(CircuitDraw {
                seed,
                resampled: attempt as u32,
                tableau,
            }));
        }
        log::debug!("n={n} circuit {idx}: encoder with seed {seed} is not generic, redrawing");
    }
    Ok(None)
}

/// Measures of one state, as `(name, value)` pairs in a fixed order.
pub fn evaluate_measures(
    state: &StateVector,
    k: usize,
    cfg: &SweepConfig,
    syndrome_seed: u64,
) -> Result<Vec<(String, f64)>> {
    let n = state.num_qubits();
    let mut measures = cfg.measures.clone();
    measures.sort();
    measures.dedup();
    let mode = cfg.syndrome_mode.resolve(n, k, syndrome_seed);
    let mut out = Vec::new();
    let joint = born_table(state, &(0..n).collect::<Vec<_>>())?;
    let needs_ensemble = measures
        .iter()
        .any(|m| matches!(m, Measure::Ssre | Measure::CondMinimized));
    let report = if needs_ensemble {
        Some(magic_report(
            state,
            k,
            &MagicOptions {
                weighting: cfg.weighting,
                syndromes: mode,
                compute_m2: measures.contains(&Measure::Ssre),
                basis_minimized: measures.contains(&Measure::CondMinimized),
                keep_per_syndrome: false,
            },
        )?)
    } else {
        None
    };
    for m in &measures {
        match m {
            Measure::Ssre => {
                if let Some(v) = report.as_ref().and_then(|r| r.m2) {
                    out.push(("ssre".to_string(), v));
                }
            }
            Measure::CondShannon => out.push(("cond_shannon".into(), conditional_entropy(&joint, k)?)),
            Measure::CondRenyi => out.push(("cond_renyi".into(), renyi_conditional_entropy(&joint, k)?)),
            Measure::CondMinimized => {
                if let Some(v) = report.as_ref().and_then(|r| r.cond_minimized) {
                    out.push(("cond_minimized".into(), v));
                }
            }
            Measure::Collision => {
                let syn = joint.marginal(&(k..n).collect::<Vec<_>>())?;
                out.push(("collision_joint".into(), collision_probability(&joint)));
                out.push(("collision_syndrome".into(), collision_probability(&syn)));
            }
            Measure::Breakdown => {
                let ens = logical_ensemble(state, k, mode)?;
                let rep = decoder_breakdown(&ens, cfg.breakdown_epsilon, BreakdownBasis::Computational)?;
                out.push(("breakdown_entropy".into(), rep.mean_entropy));
            }
        }
    }
    Ok(out)
}

/// Runs every (size, α, circuit) combination. Records are ordered by
/// (size, circuit, α, measure) regardless of thread count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let mut output = SweepOutput::default();
    let n_alpha = cfg.alphas.len();
    let mut point_hits = vec![0usize; cfg.sizes.len() * n_alpha];
    for (si, &n) in cfg.sizes.iter().enumerate() {
        let k = cfg.rate.logical_count(n);
        let d = cfg.depth.depth(n);
        let count = cfg.circuits_for(n);
        log::info!("n={n} k={k} d={d}: {count} circuits x {n_alpha} angles");
        let per_circuit: Vec<Result<Option<(u32, Vec<ResultRecord>)>>> = (0..count)
            .into_par_iter()
            .map(|idx| {
                let Some(draw) = draw_circuit(cfg, n, k, d, idx)? else {
                    return Ok(None);
                };
                let expansion = ErrorExpansion::new(&draw.tableau)?;
                let mut recs = Vec::new();
                for (ai, &alpha) in cfg.alphas.iter().enumerate() {
                    let state = expansion.state(alpha);
                    let syndrome_seed = derive_seed(draw.seed, &[ai as u64]);
                    for (measure, value) in evaluate_measures(&state, k, cfg, syndrome_seed)? {
                        recs.push(ResultRecord {
                            schema: SCHEMA_VERSION,
                            point: si * n_alpha + ai,
                            circuit: idx,
                            seed: draw.seed,
                            n,
                            k,
                            d,
                            alpha,
                            measure,
                            value,
                            resampled: draw.resampled,
                            aux: None,
                        });
                    }
                }
                Ok(Some((draw.resampled, recs)))
            })
            .collect();
        for r in per_circuit {
            match r? {
                Some((resampled, recs)) => {
                    output.resampled_events += resampled as usize;
                    for rec in &recs {
                        point_hits[rec.point] += 1;
                    }
                    output.records.extend(recs);
                }
                None => output.failed_circuits += 1,
            }
        }
    }
    output.failed_points = point_hits
        .iter()
        .enumerate()
        .filter(|(_, &h)| h == 0)
        .map(|(i, _)| i)
        .collect();
    if output.resampled_events > 0 {
        log::info!("{} non-generic encoders redrawn", output.resampled_events);
    }
    Ok(output)
}

/// Mean of one measure at one (n, α).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub alpha: f64,
    pub measure: String,
    pub count: usize,
    pub mean: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    /// `mean / k`.
    pub density: f64,
    pub density_stderr: f64,
}

/// Groups records by (n, α, measure) in first-appearance order of `n` and α.
pub fn aggregate(records: &[ResultRecord]) -> Vec<PointSummary> {
    let mut groups: BTreeMap<(usize, usize, String), (usize, usize, f64, Vec<f64>)> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.point, r.n, r.measure.clone()))
            .or_insert_with(|| (r.k, r.d, r.alpha, Vec::new()))
            .3
            .push(r.value);
    }
    groups
        .into_iter()
        .map(|((_, n, measure), (k, d, alpha, values))| {
            let c = values.len() as f64;
            let mean = values.iter().sum::<f64>() / c;
            let stderr = if values.len() > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (c - 1.0) / c).sqrt()
            } else {
                0.0
            };
            PointSummary {
                n,
                k,
                d,
                alpha,
                measure,
                count: values.len(),
                mean,
                stderr,
                density: mean / k as f64,
                density_stderr: stderr / k as f64,
            }
        })
        .collect()
}

pub fn write_summary_csv<W: Write>(w: W, summaries: &[PointSummary]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for s in summaries {
        wr.serialize(s)?;
    }
    wr.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub r: f64,
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub measure: String,
    pub density: f64,
    pub density_stderr: f64,
}

/// Mean densities over a grid of rates; each rate reuses `base` with its
/// rate replaced.
pub fn phase_diagram(base: &SweepConfig, rates: &[f64]) -> Result<Vec<PhaseCell>> {
    if rates.is_empty() {
        return Err(Error::InvalidArgument("no rates given".into()));
    }
    let mut cells = Vec::new();
    for &r in rates {
        let mut cfg = base.clone();
        cfg.rate = RateMode::Constant { r };
        for s in aggregate(&run_sweep(&cfg)?.records) {
            cells.push(PhaseCell {
                r,
                n: s.n,
                k: s.k,
                alpha: s.alpha,
                measure: s.measure,
                density: s.density,
                density_stderr: s.density_stderr,
            });
        }
    }
    Ok(cells)
}

pub fn write_phase_csv<W: Write>(w: W, cells: &[PhaseCell]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for c in cells {
        wr.serialize(c)?;
    }
    wr.flush()?;
    Ok(())
}
