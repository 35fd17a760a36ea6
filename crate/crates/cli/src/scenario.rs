//! Scenario files: a ring, named filtrations and a list of tasks.
//!
//! ```json
//! {
//!   "ring": { "names": ["x", "y"] },
//!   "filtrations": {
//!     "pi": { "kind": "discrete_valued",
//!             "valuations": [ { "weights": [1, 0], "multiplier": "pi" },
//!                             { "weights": [1, 1], "multiplier": "2*pi" } ] },
//!     "tau": { "kind": "template", "generators": [["2", "0"], ["1", "n^2"]] }
//!   },
//!   "tasks": [ { "task": "epsilon", "filtration": "pi", "n_max": 200, "window": 50 } ],
//!   "output": { "dir": "out", "format": "csv" }
//! }
//! ```

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use emult::{ExactScalar, Filtration, MonomialValuation, RingContext};

use crate::error::{CliError, Result};
use crate::report::{emit_to_dir, run_task, Format, TaskReport};

pub const MAX_N: u64 = 100_000;
pub const MAX_R: u64 = 100_000;
pub const DEFAULT_WINDOW: usize = 10;

fn default_window() -> usize {
    DEFAULT_WINDOW
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub ring: RingBlock,
    pub filtrations: BTreeMap<String, FiltrationBlock>,
    pub tasks: Vec<TaskSpec>,
    #[serde(default)]
    pub output: OutputBlock,
}

/// Either `names` or `dimension` (default names `x, y, z, w`, or `x1, ..., xd`
/// beyond four variables).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingBlock {
    pub dimension: Option<usize>,
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiltrationBlock {
    Power { base: String },
    DiscreteValued { valuations: Vec<ValuationBlock> },
    Template { generators: Vec<Vec<String>> },
    Table { ideals: Vec<String> },
    Truncation { parent: String, level: u64 },
    Localized { parent: String, variables: Vec<String> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationBlock {
    pub weights: Vec<u64>,
    pub multiplier: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskSpec {
    Eval {
        name: Option<String>,
        filtration: String,
        n_max: u64,
    },
    Epsilon {
        name: Option<String>,
        filtration: String,
        n_max: u64,
        #[serde(default = "default_window")]
        window: usize,
    },
    Acheck {
        name: Option<String>,
        filtration: String,
        c: u64,
        n_max: u64,
    },
    Spread {
        name: Option<String>,
        filtration: String,
        n_max: u64,
        r_max: u64,
    },
    ClosureCompare {
        name: Option<String>,
        left: String,
        right: String,
        n_max: u64,
        r_max: u64,
    },
    Es {
        name: Option<String>,
        filtration: String,
        n_max: u64,
        #[serde(default = "default_window")]
        window: usize,
    },
    TruncationSweep {
        name: Option<String>,
        filtration: String,
        levels: u64,
        n_max: u64,
        #[serde(default = "default_window")]
        window: usize,
    },
    DifferenceCheck {
        name: Option<String>,
        larger: String,
        smaller: String,
        n_max: u64,
        #[serde(default = "default_window")]
        window: usize,
    },
}

impl TaskSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            TaskSpec::Eval { .. } => "eval",
            TaskSpec::Epsilon { .. } => "epsilon",
            TaskSpec::Acheck { .. } => "acheck",
            TaskSpec::Spread { .. } => "spread",
            TaskSpec::ClosureCompare { .. } => "closure-compare",
            TaskSpec::Es { .. } => "es",
            TaskSpec::TruncationSweep { .. } => "truncation-sweep",
            TaskSpec::DifferenceCheck { .. } => "difference-check",
        }
    }

    fn explicit_name(&self) -> Option<&str> {
        match self {
            TaskSpec::Eval { name, .. }
            | TaskSpec::Epsilon { name, .. }
            | TaskSpec::Acheck { name, .. }
            | TaskSpec::Spread { name, .. }
            | TaskSpec::ClosureCompare { name, .. }
            | TaskSpec::Es { name, .. }
            | TaskSpec::TruncationSweep { name, .. }
            | TaskSpec::DifferenceCheck { name, .. } => name.as_deref(),
        }
    }

    /// Explicit name, or `<position>-<kind>` counting from 1.
    pub fn name(&self, position: usize) -> String {
        self.explicit_name().map_or_else(|| format!("{position}-{}", self.kind()), str::to_string)
    }

    pub fn filtrations(&self) -> Vec<&str> {
        match self {
            TaskSpec::Eval { filtration, .. }
            | TaskSpec::Epsilon { filtration, .. }
            | TaskSpec::Acheck { filtration, .. }
            | TaskSpec::Spread { filtration, .. }
            | TaskSpec::Es { filtration, .. }
            | TaskSpec::TruncationSweep { filtration, .. } => vec![filtration],
            TaskSpec::ClosureCompare { left, right, .. } => vec![left, right],
            TaskSpec::DifferenceCheck { larger, smaller, .. } => vec![larger, smaller],
        }
    }

    /// Range checks shared by scenario files and the command line.
    pub fn check(&self, task: &str) -> Result<()> {
        let bad = |detail: String| Err(CliError::Parameter { task: task.to_string(), detail });
        let n_ok = |n: u64| (1..=MAX_N).contains(&n);
        let (n_max, window, r_max) = match self {
            TaskSpec::Eval { n_max, .. } | TaskSpec::Acheck { n_max, .. } => (*n_max, None, None),
            TaskSpec::Epsilon { n_max, window, .. }
            | TaskSpec::Es { n_max, window, .. }
            | TaskSpec::TruncationSweep { n_max, window, .. }
            | TaskSpec::DifferenceCheck { n_max, window, .. } => (*n_max, Some(*window), None),
            TaskSpec::Spread { n_max, r_max, .. } | TaskSpec::ClosureCompare { n_max, r_max, .. } => {
                (*n_max, None, Some(*r_max))
            }
        };
        if !n_ok(n_max) {
            return bad(format!("n_max must lie in 1..={MAX_N}, got {n_max}"));
        }
        if let Some(w) = window {
            if w < 2 || w as u64 > n_max {
                return bad(format!("window must lie in 2..=n_max, got {w}"));
            }
        }
        if let Some(r) = r_max {
            if !(1..=MAX_R).contains(&r) {
                return bad(format!("r_max must lie in 1..={MAX_R}, got {r}"));
            }
        }
        match self {
            TaskSpec::Acheck { c: 0, .. } => bad("c must be positive".into()),
            TaskSpec::TruncationSweep { levels: 0, .. } => bad("levels must be positive".into()),
            _ => Ok(()),
        }
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|error| CliError::Read { path: path.to_path_buf(), error })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn context(&self) -> Result<Arc<RingContext>> {
        let schema = |e: emult::Error| CliError::Schema(format!("ring: {e}"));
        match (&self.ring.names, self.ring.dimension) {
            (Some(names), dim) => {
                if dim.is_some_and(|d| d != names.len()) {
                    return Err(CliError::Schema("ring: dimension does not match the number of names".into()));
                }
                RingContext::new(names.clone()).map_err(schema)
            }
            (None, Some(d)) => RingContext::with_dimension(d).map_err(schema),
            (None, None) => Err(CliError::Schema("ring: give `names` or `dimension`".into())),
        }
    }

    /// Builds every named filtration, resolving parents in any order.
    pub fn build_filtrations(&self, ctx: &Arc<RingContext>) -> Result<HashMap<String, Filtration>> {
        let mut built = HashMap::new();
        for name in self.filtrations.keys() {
            self.build_one(ctx, name, &mut built, &mut Vec::new())?;
        }
        Ok(built)
    }

    fn build_one(
        &self,
        ctx: &Arc<RingContext>,
        name: &str,
        built: &mut HashMap<String, Filtration>,
        stack: &mut Vec<String>,
    ) -> Result<Filtration> {
        if let Some(f) = built.get(name) {
            return Ok(f.clone());
        }
        let block =
            self.filtrations.get(name).ok_or_else(|| CliError::Schema(format!("unknown filtration `{name}`")))?;
        if stack.iter().any(|s| s == name) {
            return Err(CliError::Schema(format!("filtration `{name}` refers to itself")));
        }
        stack.push(name.to_string());
        let wrap = |error| CliError::Filtration { name: name.to_string(), error };
        let f = match block {
            FiltrationBlock::Power { base } => Filtration::power(ctx.parse_ideal(base).map_err(wrap)?),
            FiltrationBlock::DiscreteValued { valuations } => {
                let v = valuations
                    .iter()
                    .map(|b| Ok((MonomialValuation::new(b.weights.clone())?, ExactScalar::parse(&b.multiplier)?)))
                    .collect::<emult::Result<Vec<_>>>()
                    .map_err(wrap)?;
                Filtration::discrete_valued(ctx, v).map_err(wrap)?
            }
            FiltrationBlock::Template { generators } => {
                let rows: Vec<Vec<&str>> = generators.iter().map(|g| g.iter().map(String::as_str).collect()).collect();
                let refs: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
                Filtration::template(ctx, &refs).map_err(wrap)?
            }
            FiltrationBlock::Table { ideals } => {
                let ideals =
                    ideals.iter().map(|s| ctx.parse_ideal(s)).collect::<emult::Result<Vec<_>>>().map_err(wrap)?;
                Filtration::table(ctx, ideals).map_err(wrap)?
            }
            FiltrationBlock::Truncation { parent, level } => {
                self.build_one(ctx, parent, built, stack)?.truncate(*level).map_err(wrap)?
            }
            FiltrationBlock::Localized { parent, variables } => {
                let p = self.build_one(ctx, parent, built, stack)?;
                let vars = p.context().variable_set(variables).map_err(wrap)?;
                p.localize(&vars).map_err(wrap)?
            }
        };
        stack.pop();
        built.insert(name.to_string(), f.clone());
        Ok(f)
    }

    /// Checks names and parameters of every task before anything runs.
    pub fn validate_tasks(&self) -> Result<()> {
        for (k, task) in self.tasks.iter().enumerate() {
            let name = task.name(k + 1);
            for f in task.filtrations() {
                if !self.filtrations.contains_key(f) {
                    return Err(CliError::Schema(format!("task `{name}` refers to unknown filtration `{f}`")));
                }
            }
            task.check(&name)?;
        }
        Ok(())
    }
}

/// Result of one scenario task and the files written for it.
#[derive(Debug)]
pub struct TaskOutput {
    pub name: String,
    pub report: TaskReport,
    pub files: Vec<PathBuf>,
}

/// Loads, validates and runs a scenario, writing one report per task into
/// `dir` (overriding the file's output block when given).
pub fn run_scenario(path: &Path, dir: Option<&Path>, format: Option<Format>) -> Result<Vec<TaskOutput>> {
    let scenario = Scenario::load(path)?;
    let ctx = scenario.context()?;
    let filtrations = scenario.build_filtrations(&ctx)?;
    scenario.validate_tasks()?;
    let base = path.parent().unwrap_or(Path::new("."));
    let out_dir = match dir {
        Some(d) => d.to_path_buf(),
        None => base.join(scenario.output.dir.clone().unwrap_or_else(|| PathBuf::from("out"))),
    };
    let format = format.or(scenario.output.format).unwrap_or(Format::Csv);
    std::fs::create_dir_all(&out_dir).map_err(|error| CliError::Write { path: out_dir.clone(), error })?;
    let mut outputs = Vec::new();
    for (k, task) in scenario.tasks.iter().enumerate() {
        let name = task.name(k + 1);
        let report = run_task(task, &name, &|n: &str| filtrations[n].clone())?;
        let files = emit_to_dir(&report, &out_dir, &name, format)?;
        outputs.push(TaskOutput { name, report, files });
    }
    Ok(outputs)
}
