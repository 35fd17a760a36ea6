//! Task execution and deterministic CSV/JSON rendering of the results.

use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use emult::asymptotics::{
    e_s_localized, epsilon_difference_check, epsilon_report, DifferenceReport, EpsilonReport, EsReport,
};
use emult::diagnostics::{
    check_Ac, spread_max_test, spread_zero_test, AcReport, AcVerdict, MaxStatus, SpreadMaxResult, SpreadZeroResult,
};
use emult::newton::{rees_closure_compare, ClosureVerdict, Side};
use emult::rational;
use emult::Filtration;

use crate::error::{CliError, Result};
use crate::scenario::TaskSpec;

/// Decimal digits in the `*_decimal` columns.
pub const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalRow {
    pub n: u64,
    pub ideal: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpreadReport {
    pub max: SpreadMaxResult,
    pub zero: SpreadZeroResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub level: u64,
    pub report: EpsilonReport,
    /// `|ε̂(I[level]) - ε̂(I)|` when both estimates exist.
    #[serde(with = "rational::serde_option_string")]
    pub difference: Option<BigRational>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub parent: EpsilonReport,
    pub levels: Vec<SweepRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "task", content = "report", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum TaskReport {
    Eval(Vec<EvalRow>),
    Epsilon(EpsilonReport),
    Acheck(AcReport),
    Spread(SpreadReport),
    ClosureCompare(ClosureVerdict),
    Es(EsReport),
    TruncationSweep(SweepReport),
    DifferenceCheck(DifferenceReport),
}

/// Runs one task; `lookup` resolves filtration names already validated.
pub fn run_task(task: &TaskSpec, name: &str, lookup: &dyn Fn(&str) -> Filtration) -> Result<TaskReport> {
    task.check(name)?;
    let wrap = |error| CliError::Task { task: name.to_string(), error };
    let report = match task {
        TaskSpec::Eval { filtration, n_max, .. } => {
            let ideals = lookup(filtration).ideals(*n_max).map_err(wrap)?;
            TaskReport::Eval(ideals.iter().zip(1..).map(|(i, n)| EvalRow { n, ideal: i.to_string() }).collect())
        }
        TaskSpec::Epsilon { filtration, n_max, window, .. } => {
            TaskReport::Epsilon(epsilon_report(&lookup(filtration), *n_max, *window).map_err(wrap)?)
        }
        TaskSpec::Acheck { filtration, c, n_max, .. } => {
            TaskReport::Acheck(check_Ac(&lookup(filtration), *c, *n_max).map_err(wrap)?)
        }
        TaskSpec::Spread { filtration, n_max, r_max, .. } => {
            let f = lookup(filtration);
            TaskReport::Spread(SpreadReport {
                max: spread_max_test(&f, *n_max).map_err(wrap)?,
                zero: spread_zero_test(&f, *n_max, *r_max).map_err(wrap)?,
            })
        }
        TaskSpec::ClosureCompare { left, right, n_max, r_max, .. } => TaskReport::ClosureCompare(
            rees_closure_compare(&lookup(left), &lookup(right), *n_max, *r_max).map_err(wrap)?,
        ),
        TaskSpec::Es { filtration, n_max, window, .. } => {
            TaskReport::Es(e_s_localized(&lookup(filtration), *n_max, *window).map_err(wrap)?)
        }
        TaskSpec::TruncationSweep { filtration, levels, n_max, window, .. } => {
            let f = lookup(filtration);
            TaskReport::TruncationSweep(truncation_sweep(&f, *levels, *n_max, *window).map_err(wrap)?)
        }
        TaskSpec::DifferenceCheck { larger, smaller, n_max, window, .. } => TaskReport::DifferenceCheck(
            epsilon_difference_check(&lookup(larger), &lookup(smaller), *n_max, *window).map_err(wrap)?,
        ),
    };
    Ok(report)
}

/// Epsilon estimates of the truncations `I[1], ..., I[levels]` against `I`.
pub fn truncation_sweep(f: &Filtration, levels: u64, n_max: u64, window: usize) -> emult::Result<SweepReport> {
    let parent = epsilon_report(f, n_max, window)?;
    let levels = (1..=levels)
        .map(|level| {
            let report = epsilon_report(&f.truncate(level)?, n_max, window)?;
            let difference = match (report.estimate(), parent.estimate()) {
                (Some(a), Some(b)) => Some((a - b).abs()),
                _ => None,
            };
            Ok(SweepRow { level, report, difference })
        })
        .collect::<emult::Result<Vec<_>>>()?;
    Ok(SweepReport { parent, levels })
}

fn exact(r: Option<&BigRational>) -> String {
    r.map(rational::to_string).unwrap_or_default()
}

fn decimal(r: Option<&BigRational>) -> String {
    r.map(|v| rational::to_decimal(v, DECIMAL_DIGITS)).unwrap_or_default()
}

fn side_name(s: &Side) -> String {
    serde_json::to_value(s).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

/// A header and rows of cells.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

fn epsilon_summary(label: &str, r: &EpsilonReport) -> Vec<String> {
    vec![label.to_string(), r.classification.name().to_string(), exact(r.estimate()), decimal(r.estimate())]
}

impl TaskReport {
    pub fn table(&self) -> Table {
        match self {
            TaskReport::Eval(rows) => Table {
                header: vec!["n", "ideal"],
                rows: rows.iter().map(|r| vec![r.n.to_string(), r.ideal.clone()]).collect(),
            },
            TaskReport::Epsilon(r) => Table {
                header: vec!["n", "length", "normalized", "normalized_decimal", "running_sup", "secant_estimate"],
                rows: r
                    .sequence
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(k, e)| {
                        vec![
                            e.n.to_string(),
                            e.length.to_string(),
                            exact(e.normalized.as_ref()),
                            decimal(e.normalized.as_ref()),
                            exact(r.running_sup[k].as_ref()),
                            exact(r.secant[k].as_ref()),
                        ]
                    })
                    .collect(),
            },
            TaskReport::Acheck(r) => {
                let (verdict, n, witness) = match &r.verdict {
                    AcVerdict::HoldsUpTo { n_max } => ("holds", n_max.to_string(), String::new()),
                    AcVerdict::Fails { n, witness_text, .. } => ("fails", n.to_string(), witness_text.clone()),
                };
                Table {
                    header: vec!["c", "n_max", "verdict", "n", "witness"],
                    rows: vec![vec![r.c.to_string(), r.n_max.to_string(), verdict.into(), n, witness]],
                }
            }
            TaskReport::Spread(s) => {
                let mut rows = Vec::new();
                match &s.max {
                    SpreadMaxResult::Maximal { n, witness_text, status, .. } => {
                        let status = match status {
                            MaxStatus::Asserted { ell, basis } => format!("asserted ell = {ell} ({basis})"),
                            MaxStatus::Inapplicable { reason } | MaxStatus::NotAsserted { reason } => reason.clone(),
                        };
                        rows.push(vec!["max".into(), n.to_string(), witness_text.clone(), String::new(), status]);
                    }
                    SpreadMaxResult::NotFound { n_max } => rows.push(vec![
                        "max".into(),
                        n_max.to_string(),
                        String::new(),
                        String::new(),
                        "not found".into(),
                    ]),
                }
                match &s.zero {
                    SpreadZeroResult::ZeroEvidence { certificates, .. } => {
                        for c in certificates {
                            rows.push(vec![
                                "zero".into(),
                                c.n.to_string(),
                                format!("{:?}", c.generator.coords()),
                                c.r.to_string(),
                                "certificate".into(),
                            ]);
                        }
                    }
                    SpreadZeroResult::NotFound { n, generator, r_bound } => rows.push(vec![
                        "zero".into(),
                        n.to_string(),
                        format!("{:?}", generator.coords()),
                        r_bound.to_string(),
                        "not found".into(),
                    ]),
                }
                Table { header: vec!["test", "n", "monomial", "r", "status"], rows }
            }
            TaskReport::ClosureCompare(v) => {
                let header =
                    vec!["outcome", "degree", "monomial", "side", "weight", "slope", "intercept", "max_r_used"];
                let rows = match v {
                    ClosureVerdict::EqualUpToBound { n_max, max_r_used, .. } => vec![vec![
                        "equal_up_to_bound".into(),
                        n_max.to_string(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        max_r_used.to_string(),
                    ]],
                    ClosureVerdict::ProvenDifferentAt { degree, monomial, side, certificate } => vec![vec![
                        "proven_different_at".into(),
                        degree.to_string(),
                        format!("{:?}", monomial.coords()),
                        side_name(side),
                        format!("{:?}", certificate.weight),
                        certificate.slope.to_string(),
                        rational::to_string(&certificate.intercept),
                        String::new(),
                    ]],
                    ClosureVerdict::Inconclusive { unresolved } => unresolved
                        .iter()
                        .map(|u| {
                            vec![
                                "inconclusive".into(),
                                u.degree.to_string(),
                                format!("{:?}", u.monomial.coords()),
                                side_name(&u.side),
                                String::new(),
                                String::new(),
                                String::new(),
                                String::new(),
                            ]
                        })
                        .collect(),
                };
                Table { header, rows }
            }
            TaskReport::Es(r) => {
                let mut rows: Vec<Vec<String>> = r
                    .contributions
                    .iter()
                    .map(|c| {
                        vec![
                            c.prime.join(" "),
                            rational::to_string(&c.value),
                            decimal(Some(&c.value)),
                            c.exact.to_string(),
                        ]
                    })
                    .collect();
                rows.push(vec![
                    "total".into(),
                    rational::to_string(&r.total),
                    decimal(Some(&r.total)),
                    r.exact.to_string(),
                ]);
                Table { header: vec!["prime", "value", "value_decimal", "exact"], rows }
            }
            TaskReport::TruncationSweep(s) => {
                let mut rows = vec![{
                    let mut row = epsilon_summary("parent", &s.parent);
                    row.extend([String::new(), String::new()]);
                    row
                }];
                for l in &s.levels {
                    let mut row = epsilon_summary(&l.level.to_string(), &l.report);
                    row.extend([exact(l.difference.as_ref()), decimal(l.difference.as_ref())]);
                    rows.push(row);
                }
                Table {
                    header: vec![
                        "level",
                        "classification",
                        "estimate",
                        "estimate_decimal",
                        "difference",
                        "difference_decimal",
                    ],
                    rows,
                }
            }
            TaskReport::DifferenceCheck(d) => {
                let rows = vec![
                    epsilon_summary("larger", &d.larger),
                    epsilon_summary("smaller", &d.smaller),
                    epsilon_summary("middle", &d.middle),
                    vec!["residual".into(), String::new(), exact(d.residual.as_ref()), decimal(d.residual.as_ref())],
                ];
                Table { header: vec!["quantity", "classification", "estimate", "estimate_decimal"], rows }
            }
        }
    }

    /// Report bytes in the requested format; identical inputs give identical bytes.
    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(self)?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let table = self.table();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.header)?;
                for row in &table.rows {
                    w.write_record(row)?;
                }
                w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))
            }
        }
    }
}

/// Writes `<dir>/<name>.<ext>` and returns its path.
pub fn emit_to_dir(report: &TaskReport, dir: &Path, name: &str, format: Format) -> Result<Vec<PathBuf>> {
    let path = dir.join(format!("{name}.{}", format.extension()));
    write_file(&path, &report.render(format)?)?;
    Ok(vec![path])
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|error| CliError::Write { path: path.to_path_buf(), error })
}
