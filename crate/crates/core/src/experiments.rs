//! Batch runners behind the command-line tool: exploration grids over
//! generated instances, adversary runs, and re-running stored runs.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversaries::{
    clique_confinement, kt0_time_lower, kt1_time_lower, window_lower_dense, window_lower_sparse,
    AdversaryError, AdversaryInstance, Verdict,
};
use crate::explorers::{redundant_move_count, GreedyExp0, GreedyExp1, LeftHandAgent};
use crate::generators::{gen_hard_instance, gen_instance, GenConfig, GenError};
use crate::graph::{tau, FixedSchedule, GraphError, NodeId, ScheduleDoc, WindowParams};
use crate::sim::{
    instrument_potential, run, Agent, Model, PotentialError, RunConfig, SimError, Trace,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error("potential replay: {0}")]
    Potential(#[from] PotentialError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Ge0,
    Ge1,
    LeftHand,
}

impl Algo {
    pub fn agent(self, c: u64) -> Box<dyn Agent> {
        match self {
            Algo::Ge0 => Box::new(GreedyExp0::new(c)),
            Algo::Ge1 => Box::new(GreedyExp1::new()),
            Algo::LeftHand => Box::new(LeftHandAgent),
        }
    }

    /// The model the agent is normally run under.
    pub fn default_model(self) -> Model {
        match self {
            Algo::Ge1 => Model::Kt1,
            Algo::Ge0 | Algo::LeftHand => Model::Kt0,
        }
    }

    pub fn check_model(self, model: Model) -> Result<(), ExperimentError> {
        if self == Algo::Ge1 && model == Model::Kt0 {
            return Err(ExperimentError::Usage("ge1 needs the kt1 model".into()));
        }
        Ok(())
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Ge0 => "ge0",
            Algo::Ge1 => "ge1",
            Algo::LeftHand => "left-hand",
        })
    }
}

/// One row of the summary CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub run: usize,
    pub n: usize,
    pub m: usize,
    pub c: u64,
    pub algo: String,
    pub model: String,
    pub steps: u64,
    pub terminated: bool,
    pub visited: usize,
    /// Only filled for `ge1`, whose decisions the potential replay follows.
    pub sum_iota_v: Option<i64>,
    pub sum_iota_e: Option<i64>,
    pub redundant_moves: u64,
    pub tau: u64,
    pub bound_ratio: f64,
}

/// Parameters of an exploration grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreSpec {
    pub n: usize,
    pub m: usize,
    /// Window of the generated instances; `tau(n, m, c)` when absent.
    pub t: Option<u64>,
    pub c: u64,
    pub seed: u64,
    pub reps: usize,
    pub algo: Algo,
    pub model: Model,
    /// Defaults to `4 * tau`.
    pub max_steps: Option<u64>,
    /// Defaults to `max_steps`.
    pub horizon: Option<u64>,
    pub churn: f64,
    /// Rotate the protected spanning tree every window.
    pub hard: bool,
}

impl ExploreSpec {
    pub fn new(n: usize, m: usize, algo: Algo) -> Self {
        ExploreSpec {
            n,
            m,
            t: None,
            c: 16,
            seed: 0,
            reps: 1,
            algo,
            model: algo.default_model(),
            max_steps: None,
            horizon: None,
            churn: 0.3,
            hard: false,
        }
    }

    pub fn tau(&self) -> Result<u64, ExperimentError> {
        Ok(tau(WindowParams::new(self.n, self.m, self.c)?)?)
    }

    pub fn window(&self) -> Result<u64, ExperimentError> {
        self.t.map_or_else(|| self.tau(), Ok)
    }

    pub fn max_steps(&self) -> Result<u64, ExperimentError> {
        self.max_steps.map_or_else(|| self.tau().map(|t| 4 * t), Ok)
    }

    pub fn horizon(&self) -> Result<u64, ExperimentError> {
        Ok(self.horizon.map_or_else(|| self.max_steps(), Ok)?.max(1))
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.algo.check_model(self.model)?;
        if self.reps == 0 {
            return Err(ExperimentError::Usage("--reps must be at least 1".into()));
        }
        self.tau()?;
        Ok(())
    }

    /// Generator config of run `index`; seeds are `seed + index`.
    pub fn gen_config(&self, index: usize) -> Result<GenConfig, ExperimentError> {
        let cfg = GenConfig {
            n: self.n,
            m: self.m,
            t: self.window()?,
            seed: self.seed.wrapping_add(index as u64),
            churn: self.churn,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn instance(&self, index: usize) -> Result<FixedSchedule, ExperimentError> {
        let cfg = self.gen_config(index)?;
        let horizon = self.horizon()?;
        Ok(if self.hard {
            gen_hard_instance(&cfg, horizon)?
        } else {
            gen_instance(&cfg, horizon)?
        })
    }
}

/// Outputs of one exploration run.
#[derive(Debug)]
pub struct RunArtifacts {
    pub row: RunRow,
    pub instance: ScheduleDoc,
    pub trace: Trace,
}

/// Runs the spec's agent on `schedule` from node 0.
pub fn explore_on(
    spec: &ExploreSpec,
    index: usize,
    schedule: &FixedSchedule,
) -> Result<RunArtifacts, ExperimentError> {
    spec.validate()?;
    let tau = spec.tau()?;
    let mut env = schedule.clone();
    let mut agent = spec.algo.agent(spec.c);
    let config = RunConfig::new(spec.model, spec.max_steps()?);
    let mut trace = run(&mut env, agent.as_mut(), NodeId(0), &config)?;
    if spec.algo == Algo::Ge1 {
        trace.instrumentation = Some(instrument_potential(&trace, schedule.graph())?);
    }
    let iota = trace.instrumentation.as_ref();
    let steps = trace.moves();
    let row = RunRow {
        run: index,
        n: spec.n,
        m: spec.m,
        c: spec.c,
        algo: spec.algo.to_string(),
        model: spec.model.to_string(),
        steps,
        terminated: trace.terminated(),
        visited: trace.visited.len(),
        sum_iota_v: iota.map(|i| i.sum_iota_v()),
        sum_iota_e: iota.map(|i| i.sum_iota_e()),
        redundant_moves: redundant_move_count(&trace),
        tau,
        bound_ratio: steps as f64 / tau as f64,
    };
    Ok(RunArtifacts {
        row,
        instance: ScheduleDoc::from_schedule(schedule),
        trace,
    })
}

/// Generates instance `index` and explores it.
pub fn explore_run(spec: &ExploreSpec, index: usize) -> Result<RunArtifacts, ExperimentError> {
    let schedule = spec.instance(index)?;
    explore_on(spec, index, &schedule)
}

/// Runs `spec.reps` independent runs on up to `jobs` threads, in run order.
pub fn explore_grid(spec: &ExploreSpec, jobs: usize) -> Result<Vec<RunArtifacts>, ExperimentError> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| ExperimentError::Usage(e.to_string()))?;
    pool.install(|| {
        (0..spec.reps)
            .into_par_iter()
            .map(|i| explore_run(spec, i))
            .collect()
    })
}

/// Whether a run explored everything and stopped.
pub fn run_succeeded(row: &RunRow) -> bool {
    row.terminated && row.visited == row.n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Attack {
    /// Gadget `K_n` alone; `n` is the gadget size.
    Clique,
    WindowDense,
    WindowSparse,
    Kt1Time,
    Kt0Time,
}

/// Parameters of an adversary run.
#[derive(Clone, Debug, PartialEq)]
pub struct AttackSpec {
    pub attack: Attack,
    pub n: usize,
    pub m: usize,
    pub c_prime: f64,
    pub algo: Algo,
    pub model: Model,
    pub c: u64,
    pub max_steps: u64,
}

impl AttackSpec {
    pub fn new(attack: Attack, n: usize, m: usize, algo: Algo) -> Self {
        AttackSpec {
            attack,
            n,
            m,
            c_prime: 1.0 / 32.0,
            algo,
            model: algo.default_model(),
            c: 16,
            max_steps: 50_000,
        }
    }

    pub fn build(&self) -> Result<AdversaryInstance, ExperimentError> {
        Ok(match self.attack {
            Attack::Clique => clique_confinement(self.n, NodeId(2))?,
            Attack::WindowDense => window_lower_dense(self.n, self.m, self.c_prime)?,
            Attack::WindowSparse => window_lower_sparse(self.n, self.m)?,
            Attack::Kt1Time => kt1_time_lower(self.n, self.m)?,
            Attack::Kt0Time => kt0_time_lower(self.n, self.m)?,
        })
    }
}

#[derive(Debug)]
pub struct AttackOutcome {
    pub instance: AdversaryInstance,
    pub trace: Trace,
    pub verdict: Verdict,
}

impl AttackOutcome {
    /// Realized schedule with the claim attached.
    pub fn dump(&self) -> ScheduleDoc {
        self.instance.dump(&self.trace)
    }
}

pub fn run_attack(spec: &AttackSpec) -> Result<AttackOutcome, ExperimentError> {
    spec.algo.check_model(spec.model)?;
    let mut instance = spec.build()?;
    let mut agent = spec.algo.agent(spec.c);
    let config = RunConfig::new(spec.model, spec.max_steps);
    let trace = run(
        instance.env.as_mut(),
        agent.as_mut(),
        instance.start,
        &config,
    )?;
    let verdict = instance.verdict(&trace)?;
    Ok(AttackOutcome {
        instance,
        trace,
        verdict,
    })
}

/// Writes `contents` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), ExperimentError> {
    let io = |source| ExperimentError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    let mut f = fs::File::create(tmp).map_err(io)?;
    f.write_all(contents).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(tmp, path).map_err(io)
}

pub fn read_text(path: &Path) -> Result<String, ExperimentError> {
    fs::read_to_string(path).map_err(|source| ExperimentError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn rows_to_csv(rows: &[RunRow]) -> Result<Vec<u8>, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| ExperimentError::Usage(e.to_string()))?;
    }
    w.into_inner()
        .map_err(|e| ExperimentError::Usage(e.to_string()))
}

pub fn rows_from_csv(path: &Path) -> Result<Vec<RunRow>, ExperimentError> {
    let text = read_text(path)?;
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| ExperimentError::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })
}

/// Layout of an output directory written by [`save_grid`].
pub mod layout {
    pub const SPEC: &str = "spec.json";
    pub const SUMMARY: &str = "summary.csv";

    pub fn instance(run: usize) -> String {
        format!("instances/run_{run}.json")
    }

    pub fn trace(run: usize) -> String {
        format!("traces/run_{run}.jsonl")
    }
}

/// Writes the spec, every instance and trace, and the summary CSV.
pub fn save_grid(
    dir: &Path,
    spec: &ExploreSpec,
    runs: &[RunArtifacts],
) -> Result<(), ExperimentError> {
    let spec_json = serde_json::to_string_pretty(spec).expect("serializable");
    write_atomic(&dir.join(layout::SPEC), spec_json.as_bytes())?;
    for r in runs {
        write_atomic(
            &dir.join(layout::instance(r.row.run)),
            r.instance.to_json().as_bytes(),
        )?;
        write_atomic(
            &dir.join(layout::trace(r.row.run)),
            r.trace.to_jsonl().as_bytes(),
        )?;
    }
    let rows: Vec<RunRow> = runs.iter().map(|r| r.row.clone()).collect();
    write_atomic(&dir.join(layout::SUMMARY), &rows_to_csv(&rows)?)
}

/// A stored run whose re-run differs from what was saved.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayMismatch {
    pub run: usize,
    pub what: String,
}

/// Re-runs every run of a saved grid on its stored instance and compares
/// the trace file and the summary row.
pub fn replay_dir(dir: &Path) -> Result<Vec<ReplayMismatch>, ExperimentError> {
    let spec_path = dir.join(layout::SPEC);
    let spec: ExploreSpec =
        serde_json::from_str(&read_text(&spec_path)?).map_err(|e| ExperimentError::Parse {
            path: spec_path.display().to_string(),
            message: e.to_string(),
        })?;
    let rows = rows_from_csv(&dir.join(layout::SUMMARY))?;
    let mut mismatches = Vec::new();
    for row in rows {
        let inst_path = dir.join(layout::instance(row.run));
        let doc = ScheduleDoc::from_json(&read_text(&inst_path)?).map_err(|e| {
            ExperimentError::Parse {
                path: inst_path.display().to_string(),
                message: e.to_string(),
            }
        })?;
        let redo = explore_on(&spec, row.run, &doc.to_schedule()?)?;
        let stored = read_text(&dir.join(layout::trace(row.run)))?;
        if stored != redo.trace.to_jsonl() {
            mismatches.push(ReplayMismatch {
                run: row.run,
                what: "trace".into(),
            });
        }
        if redo.row != row {
            mismatches.push(ReplayMismatch {
                run: row.run,
                what: format!("summary: stored {row:?}, recomputed {:?}", redo.row),
            });
        }
    }
    Ok(mismatches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PortGraph;

    #[test]
    fn static_path_row() {
        let g = PortGraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let s = FixedSchedule::static_graph(g, 100);
        let spec = ExploreSpec::new(3, 3, Algo::Ge1);
        let r = explore_on(&spec, 0, &s).unwrap();
        assert_eq!(r.row.steps, 2);
        assert_eq!(r.row.visited, 3);
        assert!(r.row.terminated);
    }

    #[test]
    fn ge1_under_kt0_is_a_usage_error() {
        let mut spec = ExploreSpec::new(10, 20, Algo::Ge1);
        spec.model = Model::Kt0;
        assert!(matches!(
            explore_run(&spec, 0),
            Err(ExperimentError::Usage(_))
        ));
    }

    #[test]
    fn grid_is_ordered_and_reproducible() {
        let mut spec = ExploreSpec::new(12, 30, Algo::Ge0);
        spec.reps = 6;
        let a = explore_grid(&spec, 3).unwrap();
        let b = explore_grid(&spec, 1).unwrap();
        assert_eq!(a.len(), 6);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.row, y.row);
            assert_eq!(x.trace.to_jsonl(), y.trace.to_jsonl());
        }
        assert!(a
            .iter()
            .enumerate()
            .all(|(i, r)| r.row.run == i && run_succeeded(&r.row)));
    }

    #[test]
    fn saved_grid_replays_cleanly() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = ExploreSpec::new(10, 20, Algo::Ge1);
        spec.reps = 3;
        let runs = explore_grid(&spec, 2).unwrap();
        save_grid(dir.path(), &spec, &runs).unwrap();
        assert!(replay_dir(dir.path()).unwrap().is_empty());
        let trace = dir.path().join(layout::trace(1));
        let mut text = read_text(&trace).unwrap();
        text.insert_str(
            0,
            "{\"t\":0,\"node\":9,\"port\":null,\"avail\":[],\"new_visit\":true}\n",
        );
        fs::write(&trace, text).unwrap();
        let bad = replay_dir(dir.path()).unwrap();
        assert_eq!(
            bad,
            vec![ReplayMismatch {
                run: 1,
                what: "trace".into()
            }]
        );
    }

    #[test]
    fn ge1_explores_rotating_instances() {
        let mut spec = ExploreSpec::new(20, 60, Algo::Ge1);
        spec.hard = true;
        spec.churn = 1.0;
        spec.reps = 5;
        for r in explore_grid(&spec, 2).unwrap() {
            assert!(run_succeeded(&r.row), "{:?}", r.row);
        }
    }

    #[test]
    fn kt0_attack_refuses_kt1() {
        let spec = AttackSpec::new(Attack::Kt0Time, 30, 100, Algo::Ge1);
        assert!(matches!(
            run_attack(&spec),
            Err(ExperimentError::Sim(SimError::UnsupportedModel(Model::Kt1)))
        ));
    }
}
