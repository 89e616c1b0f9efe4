use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use charmorph::analysis::{analysis_report, Projection, ReportOptions};
use charmorph::config::{construct, JobConfig, OverrideSpec};
use charmorph::fixture::{replay, Fixture};
use charmorph::morphism::CharMorphismData;
use charmorph::poly::{norm_form_eval, norm_power_basis, parse_rational, synthesize, IntPoly};
use charmorph::search::DEFAULT_SEARCH_BOUND;
use charmorph::Error;

#[derive(Parser)]
#[command(name = "charmorph", version, about = "Abelian extensions with prescribed local norms")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the characteristic morphism from a job config and analyse it.
    Construct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        search_bound: Option<u64>,
        /// JSON object with v, w, b, b_prime, pi, w_pi lists (null = default).
        #[arg(long)]
        override_file: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Analyse a saved construction.
    Analyze {
        data: PathBuf,
        #[arg(long)]
        search_bound: Option<u64>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Defining polynomial of the fixed field of a projection (K = Q).
    Poly {
        data: PathBuf,
        #[arg(long, default_value = "full")]
        projection: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        search_bound: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Exact norm of an element given by coordinates.
    VerifyNorm {
        /// Radicands g_i of Q(√g_1, ..., √g_m); coordinates follow the basis
        /// ∏_{i∈A} √g_i ordered by the bitmask A.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "poly")]
        radicals: Option<Vec<i64>>,
        /// Monic defining polynomial, constant term first; coordinates are
        /// in the power basis.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        poly: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coords: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        json: bool,
    },
    /// Rebuild a reference fixture and compare every recorded value.
    ReplayFixture {
        fixture: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ReportArgs {
    /// `full`, a factor index (1-based), or a JSON {"matrix", "moduli"} map.
    #[arg(long)]
    projection: Vec<String>,
    #[arg(long, default_value_t = 20)]
    split_count: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(doc: &Value, out: Option<&Path>, json: bool, human: impl FnOnce() -> String) -> Result<()> {
    let text = canonical(doc);
    if let Some(path) = out {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    if json {
        print!("{text}");
    } else {
        print!("{}", human());
    }
    Ok(())
}

fn projections(data: &CharMorphismData, args: &ReportArgs) -> Result<Vec<Projection>> {
    let labels: Vec<String> = if args.projection.is_empty() {
        let k = data.group().factors.len();
        std::iter::once("full".to_string())
            .chain((1..=k).filter(|_| k > 1).map(|j| j.to_string()))
            .collect()
    } else {
        args.projection.clone()
    };
    labels
        .iter()
        .map(|s| Projection::parse(data.group(), s).with_context(|| format!("projection {s:?}")))
        .collect()
}

fn analysis(data: &CharMorphismData, args: &ReportArgs, bound: u64) -> Result<Value> {
    let projs = projections(data, args)?;
    let opts = ReportOptions {
        projections: &projs,
        split_count: args.split_count,
        search_bound: bound,
    };
    analysis_report(data, &opts).context("analysis")
}

fn summary(data: &CharMorphismData, report: &Value) -> String {
    let mut s = String::new();
    s += &format!("field      {}\n", data.field());
    s += &format!("group      {}\n", data.group());
    for (t, slot) in data.slots.iter().enumerate() {
        s += &format!("{:<10} {} (root {}, pi {})\n", data.slot_label(t), slot.place, slot.root, slot.pi);
    }
    s += "R\n";
    for row in data.r.to_rows() {
        s += &format!("  {row:?}\n");
    }
    s += &format!("ramified   {}\n", report["ramified"].as_str().unwrap_or(""));
    s += &format!("HNP        {}\n", report["hnp"]["verdict"]);
    let norms = report["local_norms"].as_array().map(|a| a.iter().all(|x| x["verdict"] == json!(true)));
    s += &format!("local norms {}\n", norms.unwrap_or(false));
    if let Some(projs) = report["projections"].as_object() {
        for (label, p) in projs {
            let split: Vec<&str> = p["split"]
                .as_array()
                .map(|a| a.iter().filter_map(|x| x["place"].as_str()).collect())
                .unwrap_or_default();
            s += &format!(
                "projection {label}: conductor {}\n  split {}\n",
                p["conductor_labels"].as_str().unwrap_or(""),
                split.join(" ")
            );
        }
    }
    s
}

/// Verdict of the two halves of the construction: exit 0 only if both hold.
fn verdict(report: &Value) -> Result<()> {
    let hnp = report["hnp"]["verdict"] == json!(true);
    let norms = report["local_norms"]
        .as_array()
        .is_some_and(|a| a.iter().all(|x| x["verdict"] == json!(true)));
    if !(hnp && norms) {
        return Err(Error::Invariant(format!(
            "Hasse norm principle {hnp}, local norms {norms}"
        )))
        .context("verdict");
    }
    Ok(())
}

fn load_data(path: &Path) -> Result<CharMorphismData> {
    let doc: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    // accept either a bare construction or the construct output
    let data = doc.get("data").unwrap_or(&doc);
    CharMorphismData::from_json(data).with_context(|| format!("loading {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Construct {
            config,
            search_bound,
            override_file,
            report,
        } => {
            let mut cfg = JobConfig::from_json(&read(&config)?).context("config")?;
            if let Some(b) = search_bound {
                cfg.search_bound = b;
            }
            if let Some(path) = override_file {
                cfg.overrides = serde_json::from_str::<OverrideSpec>(&read(&path)?)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            }
            let out = report.out.clone().or(cfg.out.clone().map(PathBuf::from));
            let data = construct(&cfg).context("construction")?;
            let analysis = analysis(&data, &report, cfg.search_bound)?;
            let doc = json!({"data": data.to_json(), "analysis": analysis});
            emit(&doc, out.as_deref(), report.json, || summary(&data, &analysis))?;
            verdict(&analysis)
        }
        Cmd::Analyze {
            data,
            search_bound,
            report,
        } => {
            let d = load_data(&data)?;
            let analysis = analysis(&d, &report, search_bound.unwrap_or(DEFAULT_SEARCH_BOUND))?;
            emit(&analysis, report.out.as_deref(), report.json, || summary(&d, &analysis))?;
            verdict(&analysis)
        }
        Cmd::Poly {
            data,
            projection,
            trials,
            search_bound,
            out,
            json,
        } => {
            let d = load_data(&data)?;
            let proj = Projection::parse(d.group(), &projection)?;
            let r = synthesize(&d, &proj, search_bound, trials).context("polynomial synthesis")?;
            let doc = serde_json::to_value(&r)?;
            emit(&doc, out.as_deref(), json, || {
                format!(
                    "{}\nconductor {}, degree {}, Frobenius check over {} primes: {}\n",
                    r.polynomial,
                    r.conductor,
                    r.degree,
                    r.frobenius.checks.len(),
                    if r.frobenius.passed { "ok" } else { "FAILED" }
                )
            })
        }
        Cmd::VerifyNorm {
            radicals,
            poly,
            coords,
            target,
            json,
        } => {
            let x = coords
                .iter()
                .map(|s| parse_rational(s))
                .collect::<charmorph::Result<Vec<_>>>()?;
            let target = parse_rational(&target)?;
            let norm = match (radicals, poly) {
                (Some(r), None) => norm_form_eval(&r, &x)?,
                (None, Some(p)) => norm_power_basis(&IntPoly::from_i64(&p), &x)?,
                _ => bail!(Error::Validation("give exactly one of --radicals, --poly".into())),
            };
            let ok = norm == target;
            let doc = json!({"norm": norm.to_string(), "target": target.to_string(), "equal": ok});
            emit(&doc, None, json, || format!("N = {norm}\n"))?;
            if !ok {
                return Err(Error::Validation(format!("norm {norm} differs from {target}")).into());
            }
            Ok(())
        }
        Cmd::ReplayFixture { fixture, json } => {
            let fx = Fixture::from_json(&read(&fixture)?)?;
            let (_, report) = replay(&fx).context("fixture replay")?;
            let doc = serde_json::to_value(&report)?;
            emit(&doc, None, json, || {
                let mut s = format!("{}\n", report.fixture);
                for c in &report.checks {
                    s += &format!("  {} {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name);
                }
                s
            })?;
            if !report.passed {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                return Err(Error::Validation(format!("mismatch in {}", failed.join(", "))).into());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .chain()
                .find_map(|c| c.downcast_ref::<Error>())
                .map_or(3, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
