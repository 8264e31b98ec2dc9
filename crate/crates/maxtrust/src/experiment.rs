//! Batch experiment driver: every scenario and topology pairing, many
//! independent runs each, aggregated into per-condition CSV files plus a
//! summary table.
//!
//! Reproducibility contract: a run's RNG is the master seed on a stream
//! derived only from its condition and run index, so re-running any subset
//! of conditions with the same master seed reproduces the same worlds
//! byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::sim::{run_simulation, Scenario, SimConfig, SimError, Topology};

/// Full experiment description; the TOML file format mirrors the fields
/// one to one and every field is optional.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub runs: usize,
    pub steps: usize,
    pub interactions_per_step: usize,
    pub trust_delta: f64,
    pub miscategorisation: f64,
    pub growth_interval: usize,
    pub growth_min: usize,
    pub growth_max: usize,
    pub decay_factor: f64,
    pub zero_mode_probability: f64,
    pub eigentrust_epsilon: f64,
    pub eigentrust_max_iterations: usize,
    pub horizon: usize,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        let sim = SimConfig::default();
        ExperimentConfig {
            master_seed: 42,
            runs: 100,
            steps: sim.steps,
            interactions_per_step: sim.interactions_per_step,
            trust_delta: sim.trust_delta,
            miscategorisation: sim.miscategorisation,
            growth_interval: sim.growth_interval,
            growth_min: sim.growth_min,
            growth_max: sim.growth_max,
            decay_factor: sim.decay_factor,
            zero_mode_probability: sim.zero_mode_probability,
            eigentrust_epsilon: sim.eigentrust_epsilon,
            eigentrust_max_iterations: sim.eigentrust_max_iterations,
            horizon: sim.horizon,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            steps: self.steps,
            interactions_per_step: self.interactions_per_step,
            trust_delta: self.trust_delta,
            miscategorisation: self.miscategorisation,
            growth_interval: self.growth_interval,
            growth_min: self.growth_min,
            growth_max: self.growth_max,
            decay_factor: self.decay_factor,
            zero_mode_probability: self.zero_mode_probability,
            eigentrust_epsilon: self.eigentrust_epsilon,
            eigentrust_max_iterations: self.eigentrust_max_iterations,
            horizon: self.horizon,
        }
    }
}

/// Canonical condition order: scenarios outer, topologies inner.
pub fn conditions() -> Vec<(Scenario, Topology)> {
    let mut out = Vec::with_capacity(9);
    for scenario in Scenario::ALL {
        for topology in Topology::ALL {
            out.push((scenario, topology));
        }
    }
    out
}

fn topology_index(topology: Topology) -> u64 {
    match topology {
        Topology::Tree => 0,
        Topology::Torus => 1,
        Topology::Random => 2,
    }
}

/// Stream id for one run. Depends only on the condition and run index,
/// never on which other conditions are being run.
pub fn condition_stream(scenario: Scenario, topology: Topology, run: usize) -> u64 {
    let cond_id = scenario.number() as u64 * 4 + topology_index(topology);
    cond_id * 1_000_000 + run as u64
}

pub fn condition_file_name(scenario: Scenario, topology: Topology) -> String {
    format!("scenario{}_{}.csv", scenario.number(), topology.label())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgorithmStats {
    pub mean: f64,
    /// Sample standard deviation; zero with fewer than two samples.
    pub std: f64,
    pub lo95: f64,
    pub hi95: f64,
}

#[derive(Clone, Debug)]
pub struct ConditionSummary {
    pub scenario: Scenario,
    pub topology: Topology,
    pub eigentrust: AlgorithmStats,
    pub maxtrust: AlgorithmStats,
    /// Runs that completed; fewer than requested flags failures.
    pub runs_used: usize,
}

#[derive(Clone, Debug)]
pub struct RunFailure {
    pub scenario: Scenario,
    pub topology: Topology,
    pub run: usize,
    /// Replay with the same master seed on this stream.
    pub stream: u64,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub summaries: Vec<ConditionSummary>,
    /// (file name, contents) per condition, canonical order.
    pub condition_csvs: Vec<(String, String)>,
    pub summary_csv: String,
    pub failures: Vec<RunFailure>,
}

impl ExperimentOutput {
    pub fn write_to_dir(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, contents) in &self.condition_csvs {
            std::fs::write(dir.join(name), contents)?;
        }
        std::fs::write(dir.join("summary.csv"), &self.summary_csv)
    }
}

pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

pub fn sample_std(samples: &[f64]) -> f64 {
    if samples.len() < 2 {
        return 0.0;
    }
    let m = mean(samples);
    let ss: f64 = samples.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (samples.len() - 1) as f64).sqrt()
}

/// Percentile by linear interpolation between order statistics; `q` in
/// [0, 100], input need not be sorted.
pub fn percentile(samples: &[f64], q: f64) -> f64 {
    assert!(!samples.is_empty(), "percentile of an empty sample set");
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("distance samples are ordered"));
    let rank = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

fn stats(samples: &[f64]) -> AlgorithmStats {
    AlgorithmStats {
        mean: mean(samples),
        std: sample_std(samples),
        lo95: percentile(samples, 2.5),
        hi95: percentile(samples, 97.5),
    }
}

/// Runs the full grid in parallel. Failed runs are dropped from the
/// aggregates and reported with their replay stream; at least one run per
/// condition must survive.
pub fn run_experiment(cfg: &ExperimentConfig) -> ExperimentOutput {
    assert!(cfg.runs >= 1, "an experiment needs at least one run");
    let conds = conditions();
    let sim_cfg = cfg.sim_config();

    let jobs: Vec<(usize, usize)> = (0..conds.len())
        .flat_map(|c| (0..cfg.runs).map(move |r| (c, r)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(c, r)| {
            let (scenario, topology) = conds[c];
            let stream = condition_stream(scenario, topology, r);
            let mut rng = ChaCha12Rng::seed_from_u64(cfg.master_seed);
            rng.set_stream(stream);
            run_simulation(topology, scenario, &sim_cfg, &mut rng, stream)
        })
        .collect();

    let mut summaries = Vec::with_capacity(conds.len());
    let mut condition_csvs = Vec::with_capacity(conds.len());
    let mut failures = Vec::new();
    let mut summary_csv =
        String::from("scenario,topology,algorithm,mean,std,lo95,hi95,runs_used\n");

    for (c, &(scenario, topology)) in conds.iter().enumerate() {
        let mut csv = String::from("run_id,timestep,algorithm,distance\n");
        let mut et_samples = Vec::new();
        let mut mt_samples = Vec::new();
        let mut runs_used = 0;
        for r in 0..cfg.runs {
            match &results[c * cfg.runs + r] {
                Ok(rec) => {
                    runs_used += 1;
                    for t in 0..cfg.steps {
                        let et = rec.eigentrust_distances[t];
                        let mt = rec.maxtrust_distances[t];
                        writeln!(csv, "{r},{},eigentrust,{et}", t + 1).unwrap();
                        writeln!(csv, "{r},{},maxtrust,{mt}", t + 1).unwrap();
                    }
                    et_samples.extend_from_slice(&rec.eigentrust_distances);
                    mt_samples.extend_from_slice(&rec.maxtrust_distances);
                }
                Err(e) => failures.push(RunFailure {
                    scenario,
                    topology,
                    run: r,
                    stream: condition_stream(scenario, topology, r),
                    message: report(e),
                }),
            }
        }
        assert!(runs_used > 0, "every run of {scenario:?}/{topology:?} failed");
        let summary = ConditionSummary {
            scenario,
            topology,
            eigentrust: stats(&et_samples),
            maxtrust: stats(&mt_samples),
            runs_used,
        };
        for (alg, s) in
            [("eigentrust", &summary.eigentrust), ("maxtrust", &summary.maxtrust)]
        {
            writeln!(
                summary_csv,
                "{},{},{alg},{},{},{},{},{runs_used}",
                scenario.number(),
                topology.label(),
                s.mean,
                s.std,
                s.lo95,
                s.hi95
            )
            .unwrap();
        }
        summaries.push(summary);
        condition_csvs.push((condition_file_name(scenario, topology), csv));
    }

    ExperimentOutput { summaries, condition_csvs, summary_csv, failures }
}

fn report(e: &SimError) -> String {
    e.to_string()
}
