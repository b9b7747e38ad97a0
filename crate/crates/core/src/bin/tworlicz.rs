use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use twisted_orlicz::cocycles::Cocycle;
use twisted_orlicz::groups::growth_degree_estimate;
use twisted_orlicz::orlicz::{luxemburg_norm, modular, orlicz_norm, parse_function_file, weighted_norm, SpaceContext};
use twisted_orlicz::suite::{self, CheckSpec, Format, Report};
use twisted_orlicz::twisted::twisted_convolve;
use twisted_orlicz::weights::analyze_p_function;
use twisted_orlicz::{Error, Group, Result, Weight, YoungPair};

/// Numerical checks for twisted Orlicz algebras on discrete groups.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on usage
/// errors, malformed input or exhausted budgets. Set TWORLICZ_THREADS to
/// bound the worker pool; it never changes results.
#[derive(Parser)]
#[command(name = "tworlicz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Modular, Luxemburg and Orlicz norms of a function file.
    Norm {
        #[arg(long, default_value = "Lp:2")]
        pair: String,
        #[arg(long)]
        weight: Option<String>,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Twisted convolution of two function files.
    Conv {
        #[arg(long)]
        cocycle: String,
        #[arg(long = "in", num_args = 2, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ball sizes and a polynomial growth fit.
    Growth {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
    },
    /// Analysis of p(x) = C x / ln(e + x)^β - γ ln(1 + x).
    Plemma {
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// One randomized or exhaustive check.
    Check {
        #[arg(value_enum)]
        name: CheckName,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// A preset suite or a JSON suite file.
    Suite {
        /// Preset name or path to a suite JSON file.
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-emit a saved JSON report.
    Report {
        path: PathBuf,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// List presets and checks.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckName {
    Algebra,
    Module,
    Differential,
    Assoc,
    Symmetry,
    Intertwining,
    Involution,
    Holder,
    Sandwich,
    Cocycle,
}

impl CheckName {
    fn registry_name(self) -> &'static str {
        match self {
            CheckName::Algebra => "algebra",
            CheckName::Module => "module",
            CheckName::Differential => "differential",
            CheckName::Assoc => "assoc",
            CheckName::Symmetry => "symmetry",
            CheckName::Intertwining => "intertwining",
            CheckName::Involution => "involution",
            CheckName::Holder => "holder",
            CheckName::Sandwich => "sandwich",
            CheckName::Cocycle => "cocycle",
        }
    }
}

#[derive(clap::Args)]
struct CheckOpts {
    #[arg(long, default_value = "Z^d:1")]
    group: String,
    #[arg(long, default_value = "Lp:2")]
    pair: String,
    #[arg(long)]
    weight: Option<String>,
    #[arg(long)]
    aux_weight: Option<String>,
    #[arg(long, default_value = "one")]
    cocycle: String,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 8)]
    radius: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extra numeric parameter, `key=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
}

fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    let v = v.parse::<f64>().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.to_string(), v))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn status(pass: bool) -> ExitCode {
    ExitCode::from(if pass { 0 } else { 1 })
}

fn load_suite(arg: &str) -> Result<CheckSpec> {
    let path = Path::new(arg);
    if !path.is_file() {
        return suite::preset(arg);
    }
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::spec(arg, e.to_string()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Norm { pair, weight, input } => {
            let f = parse_function_file(&input, None)?;
            let pair = YoungPair::parse(&pair)?;
            let weight = weight.map(|w| Weight::parse(f.group(), &w)).transpose()?;
            let mut out = json!({
                "group": f.group().spec(),
                "pair": pair.spec(),
                "modular": modular(&f, pair.phi()),
                "luxemburg": luxemburg_norm(&f, pair.phi()),
                "orlicz": orlicz_norm(&f, &pair),
            });
            if let Some(w) = weight {
                out["weight"] = json!(w.spec());
                out["weighted_orlicz"] = json!(weighted_norm(&f, &SpaceContext::new(pair, Some(w)))?);
            }
            print_json(&out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Conv { cocycle, input, out } => {
            let f = parse_function_file(&input[0], None)?;
            let g = parse_function_file(&input[1], Some(f.group()))?;
            let omega = Cocycle::parse(f.group(), &cocycle)?;
            let h = twisted_convolve(&f, &g, &omega)?;
            match out {
                Some(p) => std::fs::write(p, h.to_json())?,
                None => println!("{}", h.to_json()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Growth { group, n_max } => {
            let g = Group::parse(&group)?;
            let sizes = g.ball_sizes(n_max)?;
            let fit = growth_degree_estimate(&sizes)?;
            print_json(&json!({"group": g.spec(), "ball_sizes": sizes, "fit": fit}));
            Ok(ExitCode::SUCCESS)
        }
        Command::Plemma { beta, gamma, c } => {
            let r = analyze_p_function(beta, gamma, c)?;
            print_json(&serde_json::to_value(&r)?);
            Ok(status(r.pass))
        }
        Command::Check { name, opts } => {
            let spec = CheckSpec {
                name: format!("check-{}", name.registry_name()),
                group: opts.group,
                pair: opts.pair,
                weight: opts.weight,
                aux_weight: opts.aux_weight,
                cocycle: opts.cocycle,
                trials: opts.trials,
                radius: opts.radius,
                seed: opts.seed,
                params: opts.params.into_iter().collect(),
                ..CheckSpec::default()
            };
            let r = suite::run_check(name.registry_name(), &spec)?;
            print_json(&json!({
                "check": r.check,
                "trials": r.trials,
                "worst_margin": r.worst_margin,
                "constant": r.constant,
                "residual": r.residual,
                "witness": r.witness,
                "pass": r.pass,
            }));
            Ok(status(r.pass))
        }
        Command::Suite { suite: name, seed, format, out } => {
            let format: Format = format.parse()?;
            let mut spec = load_suite(&name)?;
            if let Some(s) = seed {
                spec.seed = s;
            }
            let report = suite::run_suite(&spec)?;
            let text = suite::emit_report(&report, format);
            match out {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(status(report.pass))
        }
        Command::Report { path, format } => {
            let format: Format = format.parse()?;
            let report: Report = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
            print!("{}", suite::emit_report(&report, format));
            Ok(status(report.pass))
        }
        Command::List => {
            println!("presets: {}", suite::preset_names().join(", "));
            println!("checks: {}", suite::check_names().join(", "));
            for (k, v) in suite::param_help() {
                println!("param {k}: {v}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("TWORLICZ_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tworlicz: {e}");
            ExitCode::from(2)
        }
    }
}
