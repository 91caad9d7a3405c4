//! Seeded Monte Carlo campaigns over graphon models.
//!
//! Trial `i` of a campaign samples with key `(seed, i)`; trial indices run
//! consecutively across the configured `n` values. Trials share no state and
//! the report is a fold over records sorted by trial index, so output files
//! are byte-identical for any job count.

mod config;
mod presets;
mod stats;

pub use config::{ExperimentConfig, PeninsulaSpec, PosaSettings, Property};
pub use presets::{preset, preset_names};
pub use stats::{wilson, Frequency, Summary, Z95};

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::cutnorm::sample_distance;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fracmatch::fvcn_half;
use crate::graphon::{analyze, find_peninsula, Graphon, PeninsulaCertificate, Regime};
use crate::hamilton::{classify, ClassifyConfig, Method, Obstruction, PosaConfig, Status};
use crate::rational;
use crate::sampler::{self, sample_graph_with, sample_types, VertexType};

/// Environment variable holding the default worker count.
pub const JOBS_ENV: &str = "HAMGRAPH_JOBS";

/// First line of every trial CSV.
pub const CSV_SCHEMA: &str = "schema=1";

/// Stream id for the per-trial heuristic seed (disjoint from sampler ids).
const HEURISTIC_STREAM: u64 = 1 << 62;

pub fn default_jobs() -> Option<usize> {
    std::env::var(JOBS_ENV).ok()?.parse().ok()
}

/// Outcome of one trial. Unrequested properties stay empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub n: usize,
    pub seed: u64,
    pub error: Option<String>,
    pub connected: Option<bool>,
    pub min_degree_ge_2: Option<bool>,
    pub isolated_vertex: Option<bool>,
    pub hamiltonian: Option<Status>,
    pub hamilton_method: Option<Method>,
    pub obstruction: Option<Obstruction>,
    pub fvcn: Option<String>,
    pub fvcn_ge_half: Option<bool>,
    pub n_a: Option<usize>,
    pub n_b: Option<usize>,
    pub n_c: Option<usize>,
    /// `N_A > N_C + t`.
    pub a_exceeds_c: Option<bool>,
    pub degree_deviation: Option<f64>,
    pub cut_lower: Option<f64>,
    pub cut_upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub trial_index: u64,
    pub phase: String,
    pub micros: u128,
}

/// Splits a block's offsets into `A`, `B`, `C` sub-intervals by the
/// certificate fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeClassifier {
    /// Per block: offsets below `.0` are `A`, below `.1` are `B`, else `C`.
    cuts: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCounts {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl TypeClassifier {
    pub fn new(g: &Graphon, cert: &PeninsulaCertificate) -> Result<Self> {
        let step = g
            .as_step()
            .ok_or_else(|| Error::InvalidArgument("type counts need a step graphon".into()))?;
        cert.validate(step)?;
        let cuts = (0..step.blocks())
            .map(|i| {
                let m = step.mass(i);
                let a = &cert.a_fractions[i] / m;
                let ab = (&cert.a_fractions[i] + &cert.b_fractions[i]) / m;
                (rational::to_f64(&a), rational::to_f64(&ab))
            })
            .collect();
        Ok(TypeClassifier { cuts })
    }

    pub fn count(&self, types: &[VertexType]) -> Result<TypeCounts> {
        let mut c = TypeCounts { a: 0, b: 0, c: 0 };
        for t in types {
            let VertexType::Block { index, offset } = *t else {
                return Err(Error::TypesMissing);
            };
            let (a, ab) = self.cuts[index];
            if offset < a {
                c.a += 1;
            } else if offset < ab {
                c.b += 1;
            } else {
                c.c += 1;
            }
        }
        Ok(c)
    }
}

/// A validated config with its graphon and certificate resolved.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub graphon: Graphon,
    pub certificate: Option<PeninsulaCertificate>,
    classifier: Option<TypeClassifier>,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let graphon = config.resolve_graphon()?;
        let step_only = [Property::PeninsulaCounts, Property::CutDistance];
        for p in step_only {
            if config.wants(p) && graphon.as_step().is_none() {
                return Err(Error::config("properties", format!("{p:?} needs a step graphon")));
            }
        }
        let certificate = match &config.peninsula {
            None => None,
            Some(PeninsulaSpec::Explicit(c)) => Some(c.clone()),
            Some(PeninsulaSpec::Auto(_)) => match graphon.as_step() {
                Some(s) => Some(find_peninsula(s)?.ok_or(Error::NoCertificate)?),
                None => return Err(Error::NoCertificate),
            },
        };
        if config.wants(Property::PeninsulaCounts) && certificate.is_none() {
            return Err(Error::NoCertificate);
        }
        let classifier = match &certificate {
            Some(c) => Some(TypeClassifier::new(&graphon, c)?),
            None => None,
        };
        Ok(Experiment {
            config,
            graphon,
            certificate,
            classifier,
        })
    }

    pub fn trial_count(&self) -> usize {
        self.config.n_values.len() * self.config.trials
    }

    /// `n` of a global trial index.
    pub fn n_of(&self, trial_index: u64) -> usize {
        self.config.n_values[trial_index as usize / self.config.trials]
    }

    /// Runs one trial; errors and panics become an `error` outcome.
    pub fn run_trial(&self, trial_index: u64) -> (TrialRecord, Vec<TimingRecord>) {
        let n = self.n_of(trial_index);
        let mut record = TrialRecord {
            trial_index,
            n,
            seed: self.config.seed,
            ..TrialRecord::default()
        };
        let mut timings = Vec::new();
        let outcome = catch_unwind(AssertUnwindSafe(|| {
            self.fill(&mut record, &mut timings)
        }));
        let message = match outcome {
            Ok(Ok(())) => None,
            Ok(Err(e)) => Some(format!("{}: {e}", e.kind())),
            Err(panic) => Some(format!(
                "panic: {}",
                panic
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| panic.downcast_ref::<&str>().copied())
                    .unwrap_or("unknown")
            )),
        };
        if message.is_some() {
            record = TrialRecord {
                trial_index,
                n,
                seed: self.config.seed,
                error: message,
                ..TrialRecord::default()
            };
        }
        (record, timings)
    }

    fn fill(&self, r: &mut TrialRecord, timings: &mut Vec<TimingRecord>) -> Result<()> {
        let c = &self.config;
        let (seed, idx, n) = (c.seed, r.trial_index, r.n);
        let mut clock = Instant::now();
        let mut lap = |phase: &str, timings: &mut Vec<TimingRecord>| {
            timings.push(TimingRecord {
                trial_index: idx,
                phase: phase.to_string(),
                micros: clock.elapsed().as_micros(),
            });
            clock = Instant::now();
        };
        let needs_graph = c.properties.iter().any(|&p| p != Property::PeninsulaCounts);
        if let Some(classifier) = &self.classifier {
            let types = sample_types(&self.graphon, n, seed, idx)?;
            let counts = classifier.count(&types)?;
            r.n_a = Some(counts.a);
            r.n_b = Some(counts.b);
            r.n_c = Some(counts.c);
            r.a_exceeds_c = Some(counts.a > counts.c + c.t);
            lap("types", timings);
        }
        if !needs_graph {
            return Ok(());
        }
        let s = sample_graph_with(&self.graphon, n, seed, idx, Exec::Sequential)?;
        let g = &s.graph;
        lap("sample", timings);
        if c.wants(Property::Connected) {
            r.connected = Some(g.is_connected());
        }
        if c.wants(Property::MinDegreeGe2) {
            r.min_degree_ge_2 = Some(g.min_degree().unwrap_or(0) >= 2);
        }
        if c.wants(Property::IsolatedVertex) {
            r.isolated_vertex = Some((0..n).any(|v| g.degree(v) == 0));
        }
        lap("degrees", timings);
        if c.wants(Property::Hamiltonian) {
            let posa_seed = sampler::stream(seed, idx, HEURISTIC_STREAM).next_u64();
            let config = ClassifyConfig {
                budget: c.budget,
                posa: PosaConfig {
                    seed: posa_seed,
                    max_rotations: c.posa.max_rotations,
                    restarts: c.posa.restarts.unwrap_or(PosaConfig::default().restarts),
                },
            };
            let v = classify(g, &config)?;
            v.validate(g)?;
            r.hamiltonian = Some(v.status);
            r.hamilton_method = Some(v.method);
            r.obstruction = v.obstruction;
            lap("hamiltonian", timings);
        }
        if c.wants(Property::FvcnGeHalf) {
            let cover = fvcn_half(g);
            let twice = &cover.weight * rational::from_int(2);
            r.fvcn_ge_half = Some(twice + rational::from_int(c.t as i64) >= rational::from_int(n as i64));
            r.fvcn = Some(rational::format(&cover.weight));
            lap("fvcn", timings);
        }
        if c.wants(Property::DegreeConcentration) {
            r.degree_deviation =
                Some(sampler::degree_concentration_report(&s, &self.graphon)?.max_deviation);
            lap("degree_concentration", timings);
        }
        if c.wants(Property::CutDistance) {
            let step = self.graphon.as_step().expect("checked at construction");
            let d = sample_distance(&s, step, 8)?;
            r.cut_lower = Some(rational::to_f64(&d.lower.value));
            r.cut_upper = Some(rational::to_f64(&d.upper));
            lap("cut_distance", timings);
        }
        Ok(())
    }

    /// Runs every trial; records come back sorted by trial index.
    pub fn run(&self, exec: Exec, jobs: Option<usize>) -> ExperimentRun {
        let results = exec.with_jobs(jobs, || {
            exec.map_range(self.trial_count(), |i| self.run_trial(i as u64))
        });
        let (records, timings): (Vec<_>, Vec<_>) = results.into_iter().unzip();
        let report = ExperimentReport::build(self, &records);
        ExperimentRun {
            report,
            records,
            timings: timings.into_iter().flatten().collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub report: ExperimentReport,
    pub records: Vec<TrialRecord>,
    pub timings: Vec<TimingRecord>,
}

impl ExperimentRun {
    /// Writes `trials.csv`, `timings.csv` and `report.json` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("trials.csv"), trials_to_csv(&self.records)?)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        for t in &self.timings {
            w.serialize(t).map_err(csv_error)?;
        }
        std::fs::write(dir.join("timings.csv"), finish(w)?)?;
        std::fs::write(dir.join("report.json"), self.report.to_json())?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| Error::Parse(e.to_string()))
}

/// `schema=1`, a header row, then one row per record.
pub fn trials_to_csv(records: &[TrialRecord]) -> Result<Vec<u8>> {
    let mut out = format!("{CSV_SCHEMA}\n").into_bytes();
    let mut w = csv::Writer::from_writer(Vec::new());
    if records.is_empty() {
        w.serialize(TrialRecord::default()).map_err(csv_error)?;
        let body = finish(w)?;
        let header_end = body.iter().position(|&b| b == b'\n').map_or(body.len(), |i| i + 1);
        out.extend_from_slice(&body[..header_end]);
        return Ok(out);
    }
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    out.extend(finish(w)?);
    Ok(out)
}

pub fn trials_from_csv(text: &str) -> Result<Vec<TrialRecord>> {
    let body = text
        .strip_prefix(CSV_SCHEMA)
        .and_then(|rest| rest.strip_prefix('\n'))
        .ok_or_else(|| Error::Parse(format!("missing {CSV_SCHEMA} header")))?;
    csv::Reader::from_reader(body.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<TrialRecord>, _>>()
        .map_err(csv_error)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonSummary {
    pub found: Frequency,
    pub not_hamiltonian: Frequency,
    pub unknown: Frequency,
    /// `[found, 1 - not_hamiltonian]`: where the true frequency must lie.
    pub band: (f64, f64),
    pub obstructions: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerN {
    pub n: usize,
    pub trials: usize,
    pub errors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connected: Option<Frequency>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_degree_ge_2: Option<Frequency>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isolated_vertex: Option<Frequency>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fvcn_ge_half: Option<Frequency>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_exceeds_c: Option<Frequency>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_deviation: Option<Summary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_upper: Option<Summary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_lower: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub config: ExperimentConfig,
    pub graphon: Graphon,
    pub regime: Option<Regime>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<PeninsulaCertificate>,
    pub per_n: Vec<PerN>,
}

impl ExperimentReport {
    /// Aggregates records; depends only on the records, never on timing.
    pub fn build(experiment: &Experiment, records: &[TrialRecord]) -> Self {
        let c = &experiment.config;
        let per_n = c
            .n_values
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let lo = (k * c.trials) as u64;
                let rs: Vec<&TrialRecord> = records
                    .iter()
                    .filter(|r| (lo..lo + c.trials as u64).contains(&r.trial_index))
                    .collect();
                aggregate(c, n, &rs)
            })
            .collect();
        ExperimentReport {
            schema: 1,
            config: c.clone(),
            graphon: experiment.graphon.clone(),
            regime: analyze(&experiment.graphon).ok().map(|r| r.regime),
            certificate: experiment.certificate.clone(),
            per_n,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn aggregate(c: &ExperimentConfig, n: usize, rs: &[&TrialRecord]) -> PerN {
    let trials = rs.len();
    let freq = |p: Property, f: &dyn Fn(&TrialRecord) -> Option<bool>| {
        c.wants(p)
            .then(|| Frequency::new(rs.iter().filter(|r| f(r) == Some(true)).count(), trials))
    };
    let summary = |f: &dyn Fn(&TrialRecord) -> Option<f64>| Summary::of(rs.iter().filter_map(|r| f(r)));
    let hamiltonian = c.wants(Property::Hamiltonian).then(|| {
        let count = |s: Status| rs.iter().filter(|r| r.hamiltonian == Some(s)).count();
        let found = Frequency::new(count(Status::Hamiltonian), trials);
        let not_hamiltonian = Frequency::new(count(Status::NotHamiltonian), trials);
        let band = (found.frequency, 1.0 - not_hamiltonian.frequency);
        let mut obstructions = BTreeMap::new();
        for o in rs.iter().filter_map(|r| r.obstruction) {
            let key = serde_json::to_value(o).unwrap().as_str().unwrap().to_string();
            *obstructions.entry(key).or_insert(0) += 1;
        }
        HamiltonSummary {
            found,
            not_hamiltonian,
            unknown: Frequency::new(count(Status::Unknown), trials),
            band,
            obstructions,
        }
    });
    PerN {
        n,
        trials,
        errors: rs.iter().filter(|r| r.error.is_some()).count(),
        connected: freq(Property::Connected, &|r| r.connected),
        min_degree_ge_2: freq(Property::MinDegreeGe2, &|r| r.min_degree_ge_2),
        isolated_vertex: freq(Property::IsolatedVertex, &|r| r.isolated_vertex),
        hamiltonian,
        fvcn_ge_half: freq(Property::FvcnGeHalf, &|r| r.fvcn_ge_half),
        a_exceeds_c: freq(Property::PeninsulaCounts, &|r| r.a_exceeds_c),
        degree_deviation: c
            .wants(Property::DegreeConcentration)
            .then(|| summary(&|r| r.degree_deviation))
            .flatten(),
        cut_upper: c.wants(Property::CutDistance).then(|| summary(&|r| r.cut_upper)).flatten(),
        cut_lower: c.wants(Property::CutDistance).then(|| summary(&|r| r.cut_lower)).flatten(),
    }
}

/// Runs a campaign and, when `out_dir` is given, persists it.
pub fn run_experiment(
    config: ExperimentConfig,
    out_dir: Option<&Path>,
    jobs: Option<usize>,
) -> Result<ExperimentRun> {
    let experiment = Experiment::new(config)?;
    let run = experiment.run(Exec::default(), jobs.or_else(default_jobs));
    if let Some(dir) = out_dir {
        run.write(dir)?;
    }
    Ok(run)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationReport {
    pub n: usize,
    pub t: usize,
    pub event: Frequency,
    pub mean_a: f64,
    pub mean_c: f64,
}

/// Empirical `P[N_A > N_C + t]` over `trials` draws of the vertex types.
pub fn multinomial_fluctuation_report(
    g: &Graphon,
    certificate: Option<&PeninsulaCertificate>,
    n: usize,
    trials: usize,
    t: usize,
    seed: u64,
    exec: Exec,
) -> Result<FluctuationReport> {
    let cert = certificate.ok_or(Error::NoCertificate)?;
    let classifier = TypeClassifier::new(g, cert)?;
    let counts = exec.map_range(trials, |i| {
        sample_types(g, n, seed, i as u64).and_then(|types| classifier.count(&types))
    });
    let counts = counts.into_iter().collect::<Result<Vec<_>>>()?;
    let hits = counts.iter().filter(|c| c.a > c.c + t).count();
    let mean = |f: fn(&TypeCounts) -> usize| {
        counts.iter().map(|c| f(c) as f64).sum::<f64>() / trials.max(1) as f64
    };
    Ok(FluctuationReport {
        n,
        t,
        event: Frequency::new(hits, trials),
        mean_a: mean(|c| c.a),
        mean_c: mean(|c| c.c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml_str(text).unwrap()
    }

    #[test]
    fn small_campaign_is_deterministic_across_job_counts() {
        let c = config(
            "preset = \"constant-0.3\"\nn_values = [20, 30]\ntrials = 6\nseed = 9\nproperties = [\"connected\", \"hamiltonian\", \"fvcn_ge_half\", \"degree_concentration\"]\n",
        );
        let e = Experiment::new(c).unwrap();
        let a = e.run(Exec::Sequential, None);
        let b = e.run(Exec::Parallel, Some(3));
        assert_eq!(a.records, b.records);
        assert_eq!(a.report.to_json(), b.report.to_json());
        assert_eq!(a.records.len(), 12);
        assert_eq!(a.report.per_n[1].n, 30);
        let csv = trials_to_csv(&a.records).unwrap();
        assert!(csv.starts_with(b"schema=1\n"));
        assert_eq!(trials_from_csv(std::str::from_utf8(&csv).unwrap()).unwrap(), a.records);
    }

    #[test]
    fn replaying_one_trial_matches_the_campaign() {
        let c = config(
            "preset = \"fig2-u\"\nn_values = [24]\ntrials = 4\nseed = 3\nproperties = [\"hamiltonian\", \"peninsula_counts\"]\npeninsula = \"auto\"\nt = 1\n",
        );
        let e = Experiment::new(c).unwrap();
        let run = e.run(Exec::Parallel, None);
        assert_eq!(e.run_trial(2).0, run.records[2]);
        for r in &run.records {
            assert_eq!(r.n_a.unwrap() + r.n_b.unwrap() + r.n_c.unwrap(), 24);
        }
    }

    #[test]
    fn fluctuation_needs_certificate() {
        let g = preset("fig2-u").unwrap();
        let err = multinomial_fluctuation_report(&g, None, 11, 5, 0, 0, Exec::Sequential);
        assert!(matches!(err, Err(Error::NoCertificate)));
        let cert = find_peninsula(g.as_step().unwrap()).unwrap();
        let r = multinomial_fluctuation_report(&g, cert.as_ref(), 11, 50, 11, 0, Exec::Sequential)
            .unwrap();
        assert_eq!(r.event.count, 0);
    }

    #[test]
    fn auto_certificate_without_peninsula_is_rejected() {
        let c = config(
            "preset = \"constant-0.5\"\nn_values = [10]\ntrials = 1\nseed = 0\nproperties = [\"peninsula_counts\"]\npeninsula = \"auto\"\n",
        );
        assert!(matches!(Experiment::new(c), Err(Error::NoCertificate)));
    }
}
