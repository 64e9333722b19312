//! Parameter sweeps, aggregation and ingestion of measured counts.

mod config;
mod ingest;
mod sweep;

pub use config::{ladder_circuits, DepthRule, Measure, RateMode, SweepConfig, SyndromeModeConfig};
pub use ingest::{
    ingest_experiment, process_experiment, summarize, write_ingest_csv, ExperimentFile, IngestFailure, IngestOutput,
    IngestRecord, IngestSummary,
};
pub use sweep::{
    aggregate, evaluate_measures, phase_diagram, run_sweep, write_phase_csv, write_summary_csv, PhaseCell,
    PointSummary, ResultRecord, SweepOutput, SCHEMA_VERSION,
};

#[cfg(test)]
mod tests {
    use super::*;

    fn small(threads_seed: u64) -> SweepConfig {
        SweepConfig {
            sizes: vec![4, 6],
            rate: RateMode::Vanishing,
            depth: DepthRule::N,
            alphas: vec![0.0, 0.6],
            circuits: Some(6),
            budget: 1.0,
            master_seed: threads_seed,
            measures: vec![Measure::CondShannon, Measure::Ssre, Measure::Collision],
            syndrome_mode: SyndromeModeConfig::Auto,
            weighting: Default::default(),
            breakdown_epsilon: 0.1,
            max_resamples: 64,
        }
    }

    #[test]
    fn sweep_is_independent_of_thread_count() {
        let cfg = small(11);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_sweep(&cfg).unwrap());
        let three = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap()
            .install(|| run_sweep(&cfg).unwrap());
        assert_eq!(one, three);
        let mut a = Vec::new();
        let mut b = Vec::new();
        one.write_jsonl(&mut a).unwrap();
        three.write_jsonl(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_angle_has_no_magic_and_records_are_complete() {
        let out = run_sweep(&small(2)).unwrap();
        assert!(out.failed_points.is_empty());
        // 2 sizes x 6 circuits x 2 angles x 4 values
        assert_eq!(out.records.len(), 2 * 6 * 2 * 4);
        for r in out.records.iter().filter(|r| r.alpha == 0.0) {
            let expected = if r.measure.starts_with("collision") { 1.0 } else { 0.0 };
            assert!((r.value - expected).abs() < 1e-12, "{r:?}");
        }
        let summary = aggregate(&out.records);
        assert_eq!(summary.len(), 2 * 2 * 4);
        assert!(summary.iter().all(|s| s.count == 6));
    }

    #[test]
    fn phase_diagram_covers_grid() {
        let mut cfg = small(5);
        cfg.sizes = vec![6];
        cfg.measures = vec![Measure::CondShannon];
        let cells = phase_diagram(&cfg, &[0.2, 0.5]).unwrap();
        assert_eq!(cells.len(), 4);
        let mut buf = Vec::new();
        write_phase_csv(&mut buf, &cells).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("r,n,k,alpha,measure,density"));
    }
}
