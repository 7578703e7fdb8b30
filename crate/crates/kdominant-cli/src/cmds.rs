//! The single-purpose subcommands: sample, skyline, estimate, predict, and
//! threshold. Stdout carries the data (JSON unless the command is purely a
//! file writer); notes about written files go to stderr.

use std::path::PathBuf;

use clap::Args;
use kdominant::asym::{self, FormulaId, PredictParams};
use kdominant::mc::{self, CurveRow, Statistic};
use kdominant::{dominance, Dataset, Model, SamplerConfig};
use serde::Serialize;

use crate::out::{self, format_sig, CsvTable};
use crate::{CliError, CliResult, Ctx};

/// Shared sampling-model flags for the subcommands that draw datasets.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Data model: hypercube | simplex | categorical | line-a.
    #[arg(long)]
    pub model: String,
    /// Points per dataset.
    #[arg(long)]
    pub n: usize,
    /// Dimension (hypercube and simplex only; line-a is fixed at 4).
    #[arg(long)]
    pub d: Option<usize>,
    /// Per-dimension level counts for the categorical model, e.g. 2,2,3.
    #[arg(long)]
    pub levels: Option<String>,
}

impl ModelArgs {
    pub fn build(&self) -> CliResult<Model> {
        match self.model.as_str() {
            "hypercube" | "simplex" => {
                if self.levels.is_some() {
                    return Err(CliError::Usage(
                        "--levels only applies to the categorical model".into(),
                    ));
                }
                let d = self.d.ok_or_else(|| {
                    CliError::Usage(format!("--d is required for the {} model", self.model))
                })?;
                Ok(if self.model == "hypercube" {
                    Model::Hypercube { d }
                } else {
                    Model::Simplex { d }
                })
            }
            "categorical" => {
                if self.d.is_some() {
                    return Err(CliError::Usage(
                        "--d is implied by --levels for the categorical model".into(),
                    ));
                }
                let spec = self.levels.as_deref().ok_or_else(|| {
                    CliError::Usage("--levels is required for the categorical model".into())
                })?;
                Ok(Model::Categorical {
                    levels: parse_list(spec, "--levels")?,
                })
            }
            "line-a" => {
                if self.d.is_some() || self.levels.is_some() {
                    return Err(CliError::Usage(
                        "line-a takes no --d or --levels; it is fixed at d = 4".into(),
                    ));
                }
                Ok(Model::LineA)
            }
            other => Err(CliError::Usage(format!(
                "unknown model '{other}'; expected hypercube | simplex | categorical | line-a"
            ))),
        }
    }
}

/// Parse a comma-separated list of nonnegative integers for `flag`.
pub fn parse_list<T: std::str::FromStr>(s: &str, flag: &str) -> CliResult<Vec<T>> {
    let vals: Vec<T> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse().map_err(|_| {
                CliError::Usage(format!("{flag}: cannot parse '{t}' as an integer"))
            })
        })
        .collect::<CliResult<_>>()?;
    if vals.is_empty() {
        return Err(CliError::Usage(format!("{flag} needs at least one value")));
    }
    Ok(vals)
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Output CSV path (relative paths land in --out-dir).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn sample(ctx: &Ctx, args: &SampleArgs) -> CliResult<()> {
    let model = args.model.build()?;
    let config = SamplerConfig::new(model, args.model.n, ctx.seed)?;
    let ds = config.sample();
    let path = ctx.resolve(&args.out);
    ds.write_csv(&path)?;
    out::write_manifest(ctx, "sample", std::slice::from_ref(&path))?;
    println!(
        "wrote {} ({} points, d = {}, seed {})",
        path.display(),
        ds.n(),
        ds.dim(),
        ctx.seed
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct SkylineArgs {
    /// Input dataset CSV with header x1,...,xd.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Comma-separated k values, e.g. 3,4,5.
    #[arg(long)]
    pub k: String,
    /// Optional path for the JSON result (always printed to stdout too).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SkylineEntry {
    k: usize,
    count: usize,
    indices: Vec<usize>,
}

#[derive(Serialize)]
struct SkylineReport {
    input: String,
    n: usize,
    d: usize,
    skylines: Vec<SkylineEntry>,
}

pub fn skyline(ctx: &Ctx, args: &SkylineArgs) -> CliResult<()> {
    let ds = Dataset::read_csv(&args.input)?;
    let ks: Vec<usize> = parse_list(&args.k, "--k")?;
    let mut skylines = Vec::with_capacity(ks.len());
    for &k in &ks {
        let indices = dominance::k_dominant_skyline(&ds, k)?;
        skylines.push(SkylineEntry {
            k,
            count: indices.len(),
            indices,
        });
    }
    let report = SkylineReport {
        input: args.input.display().to_string(),
        n: ds.n(),
        d: ds.dim(),
        skylines,
    };
    let json = serde_json::to_string_pretty(&report)?;
    println!("{json}");
    if let Some(outp) = &args.out {
        let path = ctx.resolve(outp);
        std::fs::write(&path, json + "\n").map_err(|e| CliError::Write {
            path: path.clone(),
            source: e,
        })?;
        out::write_manifest(ctx, "skyline", std::slice::from_ref(&path))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Statistic: skyline-count | k-dominant-count | cloud-cell |
    /// cloud-cumulative | cycle-count.
    #[arg(long)]
    pub stat: String,
    /// Dominance strength k (every statistic except skyline-count).
    #[arg(long)]
    pub k: Option<usize>,
    /// Dominator-count cell or cutoff j (cloud statistics).
    #[arg(long)]
    pub j: Option<usize>,
    /// Cycle length (cycle-count).
    #[arg(long)]
    pub length: Option<usize>,
    /// Comma-separated cutoffs for a whole cumulative curve
    /// (cloud-cumulative; replaces --j).
    #[arg(long)]
    pub m_grid: Option<String>,
    /// Independent datasets to average over.
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    /// Optional CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What one estimate invocation runs: a scalar statistic or a cumulative
/// curve sharing one histogram pass per trial.
enum StatPlan {
    Scalar(Statistic),
    Curve { k: usize, m_grid: Vec<usize> },
}

fn stat_plan(args: &EstimateArgs) -> CliResult<StatPlan> {
    let stat = args.stat.as_str();
    let reject = |flag: &str, present: bool| -> CliResult<()> {
        if present {
            Err(CliError::Usage(format!("{flag} does not apply to {stat}")))
        } else {
            Ok(())
        }
    };
    let need = |flag: &str, v: Option<usize>| -> CliResult<usize> {
        v.ok_or_else(|| CliError::Usage(format!("{flag} is required for {stat}")))
    };
    match stat {
        "skyline-count" => {
            reject("--k", args.k.is_some())?;
            reject("--j", args.j.is_some())?;
            reject("--length", args.length.is_some())?;
            reject("--m-grid", args.m_grid.is_some())?;
            Ok(StatPlan::Scalar(Statistic::SkylineCount))
        }
        "k-dominant-count" => {
            reject("--j", args.j.is_some())?;
            reject("--length", args.length.is_some())?;
            reject("--m-grid", args.m_grid.is_some())?;
            Ok(StatPlan::Scalar(Statistic::KDominantCount {
                k: need("--k", args.k)?,
            }))
        }
        "cloud-cell" => {
            reject("--length", args.length.is_some())?;
            reject("--m-grid", args.m_grid.is_some())?;
            Ok(StatPlan::Scalar(Statistic::CloudCell {
                j: need("--j", args.j)?,
                k: need("--k", args.k)?,
            }))
        }
        "cloud-cumulative" => {
            reject("--length", args.length.is_some())?;
            let k = need("--k", args.k)?;
            match (&args.m_grid, args.j) {
                (Some(grid), None) => Ok(StatPlan::Curve {
                    k,
                    m_grid: parse_list(grid, "--m-grid")?,
                }),
                (None, Some(j)) => Ok(StatPlan::Scalar(Statistic::CloudCumulative { j, k })),
                (None, None) => Err(CliError::Usage(
                    "cloud-cumulative needs --j (one cutoff) or --m-grid (a curve)".into(),
                )),
                (Some(_), Some(_)) => Err(CliError::Usage(
                    "pass either --j or --m-grid, not both".into(),
                )),
            }
        }
        "cycle-count" => {
            reject("--j", args.j.is_some())?;
            reject("--m-grid", args.m_grid.is_some())?;
            Ok(StatPlan::Scalar(Statistic::CycleCount {
                length: need("--length", args.length)?,
                k: need("--k", args.k)?,
            }))
        }
        other => Err(CliError::Usage(format!(
            "unknown statistic '{other}'; expected skyline-count | k-dominant-count | \
             cloud-cell | cloud-cumulative | cycle-count"
        ))),
    }
}

#[derive(Serialize)]
struct CurveReport<'a> {
    statistic: &'static str,
    model: String,
    n: usize,
    d: usize,
    k: usize,
    trials: u64,
    seed: u64,
    rows: &'a [CurveRow],
}

fn opt_cell(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn estimate(ctx: &Ctx, args: &EstimateArgs) -> CliResult<()> {
    let plan = stat_plan(args)?;
    let model = args.model.build()?;
    let config = SamplerConfig::new(model, args.model.n, ctx.seed)?;
    match plan {
        StatPlan::Scalar(stat) => {
            let est = mc::estimate_with(stat, &config, args.trials, ctx.estimate_options())?;
            println!("{}", serde_json::to_string_pretty(&est)?);
            if let Some(outp) = &args.out {
                let path = ctx.resolve(outp);
                let mut t = CsvTable::new(vec![
                    "statistic",
                    "model",
                    "n",
                    "d",
                    "k",
                    "j",
                    "cycle_length",
                    "trials",
                    "mean",
                    "stderr",
                    "ci_low",
                    "ci_high",
                    "seed",
                ]);
                t.row(vec![
                    est.statistic.clone(),
                    est.model.clone(),
                    est.n.to_string(),
                    est.d.to_string(),
                    opt_cell(est.k),
                    opt_cell(est.j),
                    opt_cell(est.cycle_length),
                    est.trials.to_string(),
                    format_sig(est.mean, ctx.precision),
                    format_sig(est.stderr, ctx.precision),
                    format_sig(est.ci95.0, ctx.precision),
                    format_sig(est.ci95.1, ctx.precision),
                    est.seed.to_string(),
                ]);
                t.write(&path)?;
                out::write_manifest(ctx, "estimate", std::slice::from_ref(&path))?;
                eprintln!("wrote {}", path.display());
            }
        }
        StatPlan::Curve { k, m_grid } => {
            let rows =
                mc::cumulative_cloud_curve(&config, k, &m_grid, args.trials, ctx.estimate_options())?;
            let report = CurveReport {
                statistic: "cloud-cumulative",
                model: config.model().to_string(),
                n: config.n(),
                d: config.dim(),
                k,
                trials: args.trials,
                seed: ctx.seed,
                rows: &rows,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            if let Some(outp) = &args.out {
                let path = ctx.resolve(outp);
                let mut t = CsvTable::new(vec!["m", "mean", "stderr", "ci_low", "ci_high"]);
                for r in &rows {
                    t.row(vec![
                        r.m.to_string(),
                        format_sig(r.mean, ctx.precision),
                        format_sig(r.stderr, ctx.precision),
                        format_sig(r.ci95.0, ctx.precision),
                        format_sig(r.ci95.1, ctx.precision),
                    ]);
                }
                t.write(&path)?;
                out::write_manifest(ctx, "estimate", std::slice::from_ref(&path))?;
                eprintln!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Formula id: phi_d | g_d | phi_minus_g | critical_estimate | m_d1 |
    /// m_dk_upper | simplex_skyline | cloud_coeff | cycle_mean_asym |
    /// f_d_leading.
    #[arg(long)]
    pub formula: String,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub j: Option<u64>,
}

pub fn predict(args: &PredictArgs) -> CliResult<()> {
    let id: FormulaId = args.formula.parse().map_err(kdominant::Error::from)?;
    let report = asym::predict(
        id,
        PredictParams {
            n: args.n,
            d: args.d,
            k: args.k,
            j: args.j,
        },
    )?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Which threshold: d0 (skyline revival) | d1 (cycle saturation).
    #[arg(long)]
    pub kind: String,
    /// Evaluate the threshold at this n.
    #[arg(long)]
    pub n: Option<u64>,
    /// Print the exact boundary list instead of evaluating at one n.
    #[arg(long)]
    pub table: bool,
    /// Largest boundary index for --table (default: 6 for d0, 12 for d1).
    #[arg(long)]
    pub imax: Option<u32>,
}

/// The two threshold families exposed by the asymptotics module.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum ThresholdFamily {
    D0,
    D1,
}

impl ThresholdFamily {
    pub fn parse(kind: &str) -> CliResult<Self> {
        match kind {
            "d0" => Ok(ThresholdFamily::D0),
            "d1" => Ok(ThresholdFamily::D1),
            other => Err(CliError::Usage(format!(
                "unknown threshold kind '{other}'; expected d0 | d1"
            ))),
        }
    }

    /// Exact boundary as a decimal string; the values overflow u64 fast.
    pub fn boundary_string(self, i: u32) -> kdominant::Result<String> {
        Ok(match self {
            ThresholdFamily::D0 => asym::threshold_d0_boundary(i)?.to_string(),
            ThresholdFamily::D1 => asym::threshold_d1_boundary(i)?.to_string(),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ThresholdFamily::D0 => "d0",
            ThresholdFamily::D1 => "d1",
        }
    }
}

#[derive(Serialize)]
struct BoundaryRow {
    /// Boundary index: `smallest_n` is the least n whose threshold is
    /// `threshold`.
    i: u32,
    threshold: u32,
    smallest_n: String,
}

#[derive(Serialize)]
struct BoundaryReport {
    kind: &'static str,
    rows: Vec<BoundaryRow>,
}

pub fn threshold(args: &ThresholdArgs) -> CliResult<()> {
    let family = ThresholdFamily::parse(&args.kind)?;
    if args.table {
        if args.n.is_some() {
            return Err(CliError::Usage(
                "--n and --table are mutually exclusive".into(),
            ));
        }
        let imax = args.imax.unwrap_or(match family {
            ThresholdFamily::D0 => 6,
            ThresholdFamily::D1 => 12,
        });
        if imax == 0 {
            return Err(CliError::Usage("--imax must be at least 1".into()));
        }
        let mut rows = Vec::with_capacity(imax as usize);
        for i in 1..=imax {
            rows.push(BoundaryRow {
                i,
                threshold: i + 1,
                smallest_n: family.boundary_string(i)?,
            });
        }
        let report = BoundaryReport {
            kind: family.name(),
            rows,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(());
    }
    if args.imax.is_some() {
        return Err(CliError::Usage("--imax only applies with --table".into()));
    }
    let n = args.n.ok_or_else(|| {
        CliError::Usage("pass --n to evaluate the threshold, or --table for the boundary list".into())
    })?;
    let result = match family {
        ThresholdFamily::D0 => asym::threshold_d0(n)?,
        ThresholdFamily::D1 => asym::threshold_d1(n)?,
    };
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}
