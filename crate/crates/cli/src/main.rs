//! `revpref`: exact revealed-preference analysis from the command line.
//!
//! Exit status is 0 on success (or a passed test), 1 when a consistency test
//! fails, 2 on usage or input errors.

mod output;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use revpref::classes::{check_homothetic, check_oceu, ProbabilityVector};
use revpref::csvio::{parse_csv, serialize_csv};
use revpref::rational::{format_rational, parse_rational};
use revpref::relations::{check_e_garp_scalar, check_garp, check_sarp, classify_cycles, direct_relations, garp_witness};
use revpref::report::{index_report, spearman_matrix, IndexReport, IndexSelection};
use revpref::robust::{
    compensation_levels, compensation_regions, median_bundle, CompensationSpec, Loss, RobustRelation,
};
use revpref::synth::{synthesize, GeneratorSpec, UtilityFamily};
use revpref::{Bundle, Caps, EfficiencyVector, PurchaseDataset, Rational};

use output::*;

#[derive(Parser)]
#[command(name = "revpref", version, about = "Exact revealed-preference analysis")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for panel analysis (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for synthetic data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Garp,
    Sarp,
    Egarp,
    Homothetic,
    Oceu,
}

#[derive(Clone, Copy, ValueEnum)]
enum IndexKind {
    Afriat,
    Varian,
    Hm,
    Swaps,
    All,
}

impl From<IndexKind> for IndexSelection {
    fn from(k: IndexKind) -> Self {
        match k {
            IndexKind::Afriat => IndexSelection::Afriat,
            IndexKind::Varian => IndexSelection::Varian,
            IndexKind::Hm => IndexSelection::Hm,
            IndexKind::Swaps => IndexSelection::Swaps,
            IndexKind::All => IndexSelection::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LossArg {
    Afriat,
    Varian,
    Hm,
}

impl From<LossArg> for Loss {
    fn from(l: LossArg) -> Self {
        match l {
            LossArg::Afriat => Loss::Afriat,
            LossArg::Varian => Loss::Varian,
            LossArg::Hm => Loss::HoutmanMaks,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    CobbDouglas,
    Ces,
    Leontief,
}

impl From<FamilyArg> for UtilityFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::CobbDouglas => UtilityFamily::CobbDouglas,
            FamilyArg::Ces => UtilityFamily::Ces,
            FamilyArg::Leontief => UtilityFamily::Leontief,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a consistency test; exit 1 when it fails.
    Check {
        which: CheckKind,
        path: PathBuf,
        /// Efficiency level for `egarp`.
        #[arg(long, default_value = "1")]
        efficiency: String,
        /// State probabilities for `oceu`, comma separated (default uniform).
        #[arg(long)]
        probs: Option<String>,
    },
    /// Compute goodness-of-fit indices.
    Index { which: IndexKind, path: PathBuf },
    /// Query the robust preference relation between bundles `a` and `b`.
    Robust {
        path: PathBuf,
        /// Comma-separated quantities.
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = LossArg::Afriat)]
        loss: LossArg,
    },
    /// Weak and strong compensation levels for a cut in one good.
    Compensate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = LossArg::Afriat)]
        loss: LossArg,
        /// Zero-based index of the good that is cut.
        #[arg(long, default_value_t = 0)]
        good: usize,
        #[arg(long, default_value = "1/4")]
        reduction: String,
        #[arg(long, default_value = "1")]
        cap: String,
        /// Evenly spaced k values added to the CSV region scan.
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Index reports for every CSV file in a directory, with rank correlations.
    Panel {
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = IndexKind::All)]
        index: IndexKind,
    },
    /// Generate a synthetic dataset as CSV.
    Synth {
        #[arg(long, default_value_t = 10)]
        observations: usize,
        #[arg(long, default_value_t = 2)]
        goods: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::CobbDouglas)]
        family: FamilyArg,
        /// Utility weights (and CES exponent), comma separated.
        #[arg(long)]
        params: Option<String>,
        /// Efficiency noise bounds `lo,hi`.
        #[arg(long, default_value = "1,1")]
        noise: String,
        #[arg(long, default_value = "1,4")]
        prices: String,
        #[arg(long, default_value = "10,20")]
        income: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let caps = Caps::from_env()?;
    let format = cli.format;
    match cli.command {
        Command::Check {
            which,
            path,
            efficiency,
            probs,
        } => {
            json_only(format, "check")?;
            cmd_check(which, &path, &efficiency, probs.as_deref())
        }
        Command::Index { which, path } => cmd_index(format, which.into(), &path, &caps),
        Command::Robust { path, a, b, loss } => {
            json_only(format, "robust")?;
            cmd_robust(&path, &a, &b, loss.into(), &caps)
        }
        Command::Compensate {
            path,
            loss,
            good,
            reduction,
            cap,
            steps,
        } => {
            let spec = CompensationSpec {
                loss: loss.into(),
                good,
                reduction: rational_arg("reduction", &reduction)?,
                cap: rational_arg("cap", &cap)?,
            };
            cmd_compensate(format, &path, &spec, steps, &caps)
        }
        Command::Panel { dir, index } => cmd_panel(format, &dir, index.into(), cli.workers, &caps),
        Command::Synth {
            observations,
            goods,
            family,
            params,
            noise,
            prices,
            income,
            out,
        } => {
            let spec = GeneratorSpec {
                observations,
                goods,
                utility_family: family.into(),
                utility_params: match params {
                    Some(p) => rationals("params", &p)?,
                    None => Vec::new(),
                },
                efficiency_noise: interval("noise", &noise)?,
                price_range: interval("prices", &prices)?,
                income_range: interval("income", &income)?,
                seed: cli.seed,
            };
            let d = synthesize(&spec)?;
            match out {
                Some(path) => {
                    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    serialize_csv(&d, f)?;
                }
                None => serialize_csv(&d, io::stdout().lock())?,
            }
            Ok(Outcome::Pass)
        }
    }
}

fn json_only(format: Format, command: &str) -> Result<()> {
    if format == Format::Csv {
        bail!("--format csv is not available for `{command}`");
    }
    Ok(())
}

fn load(path: &Path) -> Result<PurchaseDataset> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_csv(f).with_context(|| format!("reading {}", path.display()))
}

fn rational_arg(name: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| anyhow!("--{name}: {e}"))
}

fn rationals(name: &str, text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(|x| rational_arg(name, x)).collect()
}

fn interval(name: &str, text: &str) -> Result<(Rational, Rational)> {
    match rationals(name, text)?.as_slice() {
        [lo, hi] => Ok((lo.clone(), hi.clone())),
        _ => bail!("--{name}: expected `lo,hi`"),
    }
}

fn parse_bundle(name: &str, text: &str) -> Result<Bundle> {
    let values = text
        .split(',')
        .map(|x| parse_rational(x).map_err(|e| anyhow!("bundle {name}: {e}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Bundle::new(values)?)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_check(which: CheckKind, path: &Path, efficiency: &str, probs: Option<&str>) -> Result<Outcome> {
    let d = load(path)?;
    let mut out = CheckOutput {
        schema: SCHEMA,
        command: "check",
        test: String::new(),
        dataset: path.display().to_string(),
        passed: false,
        efficiency: None,
        probabilities: None,
        cycle_class: None,
        witness: None,
    };
    match which {
        CheckKind::Garp => {
            let r = check_garp(&d);
            out.test = "garp".into();
            out.passed = r.satisfied;
            out.cycle_class = Some(classify_cycles(&d));
            out.witness = r.witness.as_ref().map(Witness::from);
        }
        CheckKind::Sarp => {
            out.test = "sarp".into();
            out.passed = check_sarp(&d);
        }
        CheckKind::Egarp => {
            let e = rational_arg("efficiency", efficiency)?;
            out.test = "egarp".into();
            out.passed = check_e_garp_scalar(&d, &e)?;
            if !out.passed {
                let rel = direct_relations(&d, &EfficiencyVector::uniform(d.len(), &e)?)?;
                out.witness = garp_witness(&rel).as_ref().map(Witness::from);
            }
            out.efficiency = Some(exact(&e));
        }
        CheckKind::Homothetic => {
            out.test = "homothetic".into();
            out.passed = check_homothetic(&d);
        }
        CheckKind::Oceu => {
            let pi = match probs {
                Some(p) => ProbabilityVector::new(rationals("probs", p)?)?,
                None => ProbabilityVector::uniform(d.goods())?,
            };
            out.test = "oceu".into();
            out.passed = check_oceu(&d, &pi)?;
            out.probabilities = Some(pi.values().iter().map(exact).collect());
        }
    }
    print_json(&out)?;
    Ok(if out.passed { Outcome::Pass } else { Outcome::Fail })
}

const REPORT_HEADER: [&str; 12] = [
    "dataset_id",
    "observations",
    "goods",
    "garp",
    "cycle_class",
    "afriat",
    "varian",
    "houtman_maks",
    "swaps",
    "money_pump",
    "homothetic",
    "error",
];

fn report_row(id: &str, report: Option<&IndexReport>, error: Option<&str>) -> Vec<String> {
    let opt = |x: &Option<revpref::report::ExactNumber>| x.as_ref().map(|v| v.exact.clone()).unwrap_or_default();
    match report {
        Some(r) => vec![
            r.dataset_id.clone(),
            r.observations.to_string(),
            r.goods.to_string(),
            r.garp.to_string(),
            serde_json::to_value(r.cycle_class)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            opt(&r.afriat),
            opt(&r.varian),
            r.houtman_maks.map(|h| h.to_string()).unwrap_or_default(),
            opt(&r.swaps),
            opt(&r.money_pump),
            r.homothetic.to_string(),
            String::new(),
        ],
        None => {
            let mut row = vec![String::new(); REPORT_HEADER.len()];
            row[0] = id.to_string();
            row[REPORT_HEADER.len() - 1] = error.unwrap_or_default().to_string();
            row
        }
    }
}

fn cmd_index(format: Format, which: IndexSelection, path: &Path, caps: &Caps) -> Result<Outcome> {
    let d = load(path)?;
    let report = index_report(&path.display().to_string(), &d, which, caps)?;
    match format {
        Format::Json => print_json(&IndexOutput {
            schema: SCHEMA,
            command: "index",
            report,
        })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(REPORT_HEADER)?;
            w.write_record(report_row(&report.dataset_id, Some(&report), None))?;
            w.flush()?;
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_robust(path: &Path, a: &str, b: &str, loss: Loss, caps: &Caps) -> Result<Outcome> {
    let d = load(path)?;
    let (a, b) = (parse_bundle("a", a)?, parse_bundle("b", b)?);
    let relation = RobustRelation::build(&d, loss, caps)?;
    let r = relation.query(&a, &b)?;
    print_json(&RobustOutput {
        schema: SCHEMA,
        command: "robust",
        dataset: path.display().to_string(),
        loss: loss.as_str(),
        a: bundle(&a),
        b: bundle(&b),
        forward: r.forward,
        backward: r.backward,
        verdict: r.verdict,
    })?;
    Ok(Outcome::Pass)
}

fn cmd_compensate(format: Format, path: &Path, spec: &CompensationSpec, steps: usize, caps: &Caps) -> Result<Outcome> {
    let d = load(path)?;
    match format {
        Format::Json => {
            let r = compensation_levels(&d, spec, caps)?;
            print_json(&CompensateOutput {
                schema: SCHEMA,
                command: "compensate",
                dataset: path.display().to_string(),
                loss: spec.loss.as_str(),
                good: spec.good,
                reduction: exact(&spec.reduction),
                cap: exact(&r.cap),
                median_bundle: bundle(&median_bundle(&d, spec.good)?),
                k_w: (&r.k_w).into(),
                k_s: (&r.k_s).into(),
            })?;
        }
        Format::Csv => {
            let rows = compensation_regions(&d, spec, caps, steps)?;
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["k", "k_decimal", "baseline_preferred", "counterfactual_preferred", "verdict"])?;
            for r in rows {
                let verdict = serde_json::to_value(r.verdict)?;
                w.write_record([
                    format_rational(&r.k),
                    revpref::rational::to_f64(&r.k).to_string(),
                    r.baseline_preferred.to_string(),
                    r.counterfactual_preferred.to_string(),
                    verdict.as_str().unwrap_or_default().to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_panel(format: Format, dir: &Path, which: IndexSelection, workers: Option<usize>, caps: &Caps) -> Result<Outcome> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")))
        .collect();
    files.sort();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            bail!("--workers must be at least 1");
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    let entries: Vec<PanelEntry> = pool.install(|| {
        files
            .par_iter()
            .map(|path| {
                let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                let result = load(path).and_then(|d| Ok(index_report(&name, &d, which, caps)?));
                match result {
                    Ok(report) => PanelEntry {
                        file: name,
                        report: Some(report),
                        error: None,
                    },
                    Err(e) => PanelEntry {
                        file: name,
                        report: None,
                        error: Some(format!("{e:#}")),
                    },
                }
            })
            .collect()
    });

    match format {
        Format::Json => {
            let reports: Vec<&IndexReport> = entries.iter().filter_map(|e| e.report.as_ref()).collect();
            let spearman = spearman_matrix(&reports)?;
            print_json(&PanelOutput {
                schema: SCHEMA,
                command: "panel",
                directory: dir.display().to_string(),
                files: entries,
                spearman,
            })?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(REPORT_HEADER)?;
            for e in &entries {
                w.write_record(report_row(&e.file, e.report.as_ref(), e.error.as_deref()))?;
            }
            w.flush()?;
        }
    }
    Ok(Outcome::Pass)
}
