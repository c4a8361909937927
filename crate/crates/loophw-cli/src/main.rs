//! Command line front end: builds modules from parameter specs, runs the
//! highest weight analysis and the submodule network, verifies the identity
//! suites, and replays the bundled example set. Emits text, JSON or DOT.

use std::collections::BTreeSet;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use loophw::analysis::analyze;
use loophw::network::{build_network_jobs, module_from_spec_json, NetLabel};
use loophw::verify::{builtin_zoo, run_suites, VerifyOptions, ZooEntry};
use loophw::{Error, HwParams, ModuleRep, Rat, DEFAULT_DIM_CAP};

#[derive(Parser)]
#[command(
    name = "loophw",
    about = "Exact highest weight analysis for the sl2 loop algebra",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Parameter spec `a:m,a:m,...` with rational `a` (integer or p/q)
    #[arg(long)]
    params: Option<String>,

    /// Path to a JSON file with `{"params":[{"a":"2","m":2},...]}`
    #[arg(long, value_name = "FILE", conflicts_with = "params")]
    params_file: Option<String>,

    /// Output format
    #[arg(long, default_value = "text")]
    format: String,

    /// Dimension cap (overrides LOOPHW_CAP)
    #[arg(long)]
    cap: Option<usize>,

    /// Extra margin for verification degree windows
    #[arg(long, default_value_t = 2)]
    window: i64,

    /// Seed for the randomized identity suites
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze the highest weight vector of a constructed module
    Analyze {
        #[command(flatten)]
        common: CommonOpts,

        /// Construction: `weyl`, `packed`, or `quotient:<w-spec>` where the
        /// w-spec is `+`-separated products of `j^k` tokens, e.g. `1^1+2^2`
        /// or `1^1*2^1`
        #[arg(long, default_value = "weyl")]
        construct: String,

        /// JSON module spec `{"factors":[...], "quotient_by":[...]}`
        #[arg(long, value_name = "FILE")]
        module_spec: Option<String>,
    },
    /// Build the submodule network and its quotient dimensions
    Network {
        #[command(flatten)]
        common: CommonOpts,

        /// Declare these labels' vectors zero and print the dimension of the
        /// resulting reducible module (comma-separated labels)
        #[arg(long)]
        cut: Option<String>,

        /// Parallel workers for per-vertex verification
        #[arg(long, default_value_t = 1)]
        jobs: usize,

        /// Skip the concrete module and report predicted dimensions only
        #[arg(long)]
        predicted: bool,
    },
    /// Run the exact identity and structure suites over the module zoo
    Verify {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Reproduce the bundled worked examples and compare dimensions
    Examples {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() {
    // die quietly when the consumer of a pipe goes away (e.g. `| head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            classify(&e)
        }
    };
    std::process::exit(code);
}

/// Exit codes: 0 success, 1 usage or configuration, 2 mathematical
/// discrepancy.
fn classify(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::Discrepancy(_)
            | Error::ParameterMismatch { .. }
            | Error::NotHighestWeight(_)
            | Error::NotCyclic
            | Error::NotInvariant,
        ) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Analyze {
            common,
            construct,
            module_spec,
        } => cmd_analyze(common, construct, module_spec),
        Command::Network {
            common,
            cut,
            jobs,
            predicted,
        } => cmd_network(common, cut, jobs, predicted),
        Command::Verify { common } => cmd_verify(common),
        Command::Examples { common } => cmd_examples(common),
    }
}

fn resolve_cap(common: &CommonOpts) -> anyhow::Result<usize> {
    if let Some(cap) = common.cap {
        return Ok(cap);
    }
    if let Ok(env) = std::env::var("LOOPHW_CAP") {
        return env
            .parse()
            .map_err(|_| anyhow!("LOOPHW_CAP must be an integer, got {env:?}"));
    }
    Ok(DEFAULT_DIM_CAP)
}

fn resolve_params(common: &CommonOpts) -> anyhow::Result<HwParams<Rat>> {
    if let Some(spec) = &common.params {
        return Ok(HwParams::parse_spec(spec)?);
    }
    if let Some(path) = &common.params_file {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading parameter file {path}"))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).context("parsing parameter file as JSON")?;
        return Ok(HwParams::from_json(&value)?);
    }
    Err(anyhow!("--params or --params-file is required"))
}

fn build_module(
    params: &HwParams<Rat>,
    construct: &str,
    cap: usize,
) -> anyhow::Result<ModuleRep<Rat>> {
    if construct == "weyl" {
        return Ok(ModuleRep::weyl(params, cap)?);
    }
    if construct == "packed" {
        return Ok(ModuleRep::packed(params, cap)?);
    }
    if let Some(spec) = construct.strip_prefix("quotient:") {
        let weyl = ModuleRep::weyl(params, cap)?;
        let omega = weyl.omega()?;
        let mut gens = Vec::new();
        for part in spec.split('+') {
            let label = NetLabel::parse(part, params.s())?;
            gens.push(label.omega_vector(&weyl, params, &omega)?);
        }
        let sub = weyl.submodule_closure(&gens);
        return Ok(weyl.quotient(&sub)?);
    }
    Err(anyhow!(
        "unknown construct {construct:?}: expected weyl, packed or quotient:<w-spec>"
    ))
}

fn cmd_analyze(
    common: CommonOpts,
    construct: String,
    module_spec: Option<String>,
) -> anyhow::Result<i32> {
    let cap = resolve_cap(&common)?;
    let (module, params) = if let Some(path) = module_spec {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading module spec {path}"))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).context("parsing module spec as JSON")?;
        module_from_spec_json::<Rat>(&value, cap)?
    } else {
        let params = resolve_params(&common)?;
        let module = build_module(&params, &construct, cap)?;
        (module, params)
    };
    let omega = module.omega()?;
    let report = analyze(&module, &omega, &params)?;

    match common.format.as_str() {
        "json" => println!("{}", report.to_json()),
        "text" => {
            println!("params:      {params}");
            println!("module dim:  {}", module.dim());
            println!("r:           {}", report.r);
            let d: Vec<String> = report
                .d
                .iter()
                .map(|(k, v)| format!("d_{k} = {v}"))
                .collect();
            println!("d:           {}", d.join(", "));
            let lam: Vec<String> = report.lambda.iter().map(|v| v.to_string()).collect();
            println!("lambda:      {}", lam.join(", "));
            println!("P(u):        {}", report.poly);
            println!(
                "criterion:   {}",
                if report.criterion_holds {
                    "holds (x_s^-(a) kills Omega)"
                } else {
                    "fails (x_s^-(a) Omega != 0)"
                }
            );
            println!(
                "oracle:      {}",
                if report.oracle_irreducible {
                    "irreducible"
                } else {
                    "reducible"
                }
            );
            println!("dim U(Omega): {}", report.actual_dim);
            println!("dim formula:  {}", report.dim_formula);
            println!(
                "verdict:     {}",
                if report.criterion_holds {
                    "IRREDUCIBLE"
                } else {
                    "REDUCIBLE"
                }
            );
        }
        other => return Err(anyhow!("analyze supports text or json, got {other:?}")),
    }

    let consistent = report.criterion_holds == report.oracle_irreducible
        && (!report.criterion_holds || report.actual_dim == report.dim_formula);
    Ok(if consistent { 0 } else { 2 })
}

fn cmd_network(
    common: CommonOpts,
    cut: Option<String>,
    jobs: usize,
    predicted: bool,
) -> anyhow::Result<i32> {
    let cap = resolve_cap(&common)?;
    let params = resolve_params(&common)?;
    let module = if predicted {
        None
    } else {
        Some(ModuleRep::weyl(&params, cap)?)
    };
    let graph = build_network_jobs(&params, module.as_ref(), jobs)?;

    let cut_dim = match &cut {
        Some(spec) => {
            let mut labels = BTreeSet::new();
            for part in spec.split(',') {
                labels.insert(NetLabel::parse(part, params.s())?);
            }
            Some(graph.reducible_dims(&labels)?)
        }
        None => None,
    };

    match common.format.as_str() {
        "dot" => print!("{}", graph.to_dot()),
        "json" => {
            let mut value = graph.to_json();
            if let Some(d) = cut_dim {
                value["cut_dim"] = json!(d);
            }
            println!("{value}");
        }
        "text" => {
            println!("params:  {params}");
            println!("source:  {}", graph.source());
            println!("vertices:");
            for v in graph.vertices.values() {
                let exact = match v.exact_dim {
                    Some(d) => d.to_string(),
                    None => "-".to_string(),
                };
                let mut flags = String::new();
                if v.vanished {
                    flags.push_str(" vanished");
                }
                if let Some((j, n)) = v.explained {
                    flags.push_str(&format!(" explained(j={j}, n={n})"));
                }
                println!(
                    "  {:<12} m' = {:?}  predicted = {:<3} exact = {}{}",
                    v.label.to_string(),
                    v.m_prime,
                    v.predicted_dim,
                    exact,
                    flags
                );
            }
            println!("edges:");
            for e in &graph.edges {
                println!("  {} -> {} [{} j={}]", e.parent, e.child, e.proc.tag(), e.j);
            }
            println!("total quotient dim: {}", graph.total_quotient_dim());
            if let Some(d) = cut_dim {
                println!("cut module dim: {d}");
            }
            if !graph.discrepancies.is_empty() {
                println!("discrepancies:");
                for d in &graph.discrepancies {
                    println!("  {d}");
                }
            }
        }
        other => return Err(anyhow!("network supports text, json or dot, got {other:?}")),
    }

    Ok(if graph.discrepancies.is_empty() { 0 } else { 2 })
}

fn cmd_verify(common: CommonOpts) -> anyhow::Result<i32> {
    let cap = resolve_cap(&common)?;
    let opts = VerifyOptions {
        window: common.window,
        seed: common.seed,
    };
    let mut zoo: Vec<ZooEntry<Rat>> = builtin_zoo(cap)?;
    if common.params.is_some() || common.params_file.is_some() {
        let params = resolve_params(&common)?;
        let weyl = ModuleRep::weyl(&params, cap)?;
        zoo.push(ZooEntry {
            name: format!("weyl {params}"),
            params: params.clone(),
            module: weyl,
        });
        let packed = ModuleRep::packed(&params, cap)?;
        zoo.push(ZooEntry {
            name: format!("packed {params}"),
            params,
            module: packed,
        });
    }
    let outcomes = run_suites(&zoo, &opts)?;
    let mut all_ok = true;
    match common.format.as_str() {
        "json" => {
            let arr: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "module": o.module,
                        "check": o.name,
                        "passed": o.passed,
                        "detail": o.detail,
                    })
                })
                .collect();
            println!("{}", serde_json::Value::Array(arr));
            all_ok = outcomes.iter().all(|o| o.passed);
        }
        "text" => {
            for o in &outcomes {
                if o.passed {
                    println!("PASS {:<16} [{}]", o.name, o.module);
                } else {
                    all_ok = false;
                    println!("FAIL {:<16} [{}] {}", o.name, o.module, o.detail);
                }
            }
            println!(
                "{} checks, {} failed",
                outcomes.len(),
                outcomes.iter().filter(|o| !o.passed).count()
            );
        }
        other => return Err(anyhow!("verify supports text or json, got {other:?}")),
    }
    Ok(if all_ok { 0 } else { 2 })
}

struct ExampleRow {
    case: String,
    expected: String,
    got: String,
    ok: bool,
}

fn cmd_examples(common: CommonOpts) -> anyhow::Result<i32> {
    let cap = resolve_cap(&common)?.max(64);
    let mut rows: Vec<ExampleRow> = Vec::new();

    // three parameters, one pair degenerate: dims 8 (Weyl) and 6 (packed)
    {
        let params = HwParams::<Rat>::parse_spec("2:2,3:1")?;
        let weyl = ModuleRep::weyl(&params, cap)?;
        let omega = weyl.omega()?;
        let report = analyze(&weyl, &omega, &params)?;
        rows.push(ExampleRow {
            case: "r=3 Weyl".into(),
            expected: "dim 8, reducible".into(),
            got: format!(
                "dim {}, {}",
                report.actual_dim,
                if report.criterion_holds {
                    "irreducible"
                } else {
                    "reducible"
                }
            ),
            ok: report.actual_dim == 8 && !report.criterion_holds && !report.oracle_irreducible,
        });
        let packed = ModuleRep::packed(&params, cap)?;
        let omega = packed.omega()?;
        let report = analyze(&packed, &omega, &params)?;
        rows.push(ExampleRow {
            case: "r=3 packed".into(),
            expected: "dim 6, irreducible".into(),
            got: format!(
                "dim {}, {}",
                report.actual_dim,
                if report.criterion_holds {
                    "irreducible"
                } else {
                    "reducible"
                }
            ),
            ok: report.actual_dim == 6 && report.criterion_holds && report.oracle_irreducible,
        });
    }

    // two double parameters: the five dimensions 16, 15, 12, 12, 9
    {
        let params = HwParams::<Rat>::parse_spec("2:2,3:2")?;
        let cases: &[(&str, Option<&str>, usize)] = &[
            ("r=4 Weyl", None, 16),
            ("r=4 Weyl/(w1 w2)", Some("1^1 2^1"), 15),
            ("r=4 Weyl/(w2)", Some("2^1"), 12),
            ("r=4 Weyl/(w1)", Some("1^1"), 12),
        ];
        for (name, quotient, expected) in cases {
            let weyl = ModuleRep::weyl(&params, cap)?;
            let module = match quotient {
                None => weyl,
                Some(spec) => {
                    let omega = weyl.omega()?;
                    let label = NetLabel::parse(spec, params.s())?;
                    let gen = label.omega_vector(&weyl, &params, &omega)?;
                    let sub = weyl.submodule_closure(&[gen]);
                    weyl.quotient(&sub)?
                }
            };
            let omega = module.omega()?;
            let report = analyze(&module, &omega, &params)?;
            rows.push(ExampleRow {
                case: (*name).into(),
                expected: format!("dim {expected}"),
                got: format!("dim {}", report.actual_dim),
                ok: report.actual_dim == *expected
                    && report.criterion_holds == report.oracle_irreducible,
            });
        }
        let packed = ModuleRep::packed(&params, cap)?;
        let omega = packed.omega()?;
        let report = analyze(&packed, &omega, &params)?;
        rows.push(ExampleRow {
            case: "r=4 packed".into(),
            expected: "dim 9, irreducible".into(),
            got: format!(
                "dim {}, {}",
                report.actual_dim,
                if report.criterion_holds {
                    "irreducible"
                } else {
                    "reducible"
                }
            ),
            ok: report.actual_dim == 9 && report.criterion_holds && report.oracle_irreducible,
        });
    }

    // the (3,3) network: quotient dims and the 24-dimensional cut
    {
        let params = HwParams::<Rat>::parse_spec("2:3,3:3")?;
        let weyl = ModuleRep::weyl(&params, cap)?;
        let graph = build_network_jobs(&params, Some(&weyl), 1)?;
        let mut dims: Vec<usize> = graph
            .vertices
            .values()
            .map(|v| v.exact_dim.unwrap_or(v.predicted_dim))
            .collect();
        dims.sort_unstable();
        let ok_dims = dims == vec![4, 4, 4, 4, 8, 8, 8, 8, 16] && graph.discrepancies.is_empty();
        rows.push(ExampleRow {
            case: "m=(3,3) network".into(),
            expected: "4+(4+4+4)+(8+8+8+8)+16 = 64".into(),
            got: format!("{dims:?} sum {}", dims.iter().sum::<usize>()),
            ok: ok_dims,
        });
        let mut cut = BTreeSet::new();
        for s in ["1^1", "1^2 2^2", "2^2"] {
            cut.insert(NetLabel::parse(s, params.s())?);
        }
        let cut_dim = graph.reducible_dims(&cut)?;
        rows.push(ExampleRow {
            case: "m=(3,3) cut".into(),
            expected: "16 + 8 = 24".into(),
            got: format!("{cut_dim}"),
            ok: cut_dim == 24,
        });
    }

    // the (5,1) network: two vanishing quotients, total 64
    {
        let params = HwParams::<Rat>::parse_spec("2:5,3:1")?;
        let weyl = ModuleRep::weyl(&params, cap)?;
        let graph = build_network_jobs(&params, Some(&weyl), 1)?;
        let vanished: Vec<String> = graph
            .vertices
            .values()
            .filter(|v| v.vanished)
            .map(|v| v.label.to_string())
            .collect();
        let explained = graph
            .vertices
            .values()
            .filter(|v| v.vanished)
            .all(|v| v.explained.is_some());
        let total: usize = graph
            .vertices
            .values()
            .map(|v| v.exact_dim.unwrap_or(v.predicted_dim))
            .sum();
        rows.push(ExampleRow {
            case: "m=(5,1) network".into(),
            expected: "vanishing at 1^2 1^3, 1^3 1^3; total 64".into(),
            got: format!("vanishing at {}; total {total}", vanished.join(", ")),
            ok: vanished == vec!["1^2 1^3".to_string(), "1^3 1^3".to_string()]
                && explained
                && total == 64
                && graph.discrepancies.is_empty(),
        });
    }

    let all_ok = rows.iter().all(|r| r.ok);
    match common.format.as_str() {
        "json" => {
            let arr: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "case": r.case,
                        "expected": r.expected,
                        "got": r.got,
                        "ok": r.ok,
                    })
                })
                .collect();
            println!("{}", serde_json::Value::Array(arr));
        }
        "text" => {
            for r in &rows {
                println!(
                    "{} {:<20} expected: {:<34} got: {}",
                    if r.ok { "PASS" } else { "FAIL" },
                    r.case,
                    r.expected,
                    r.got
                );
            }
        }
        other => return Err(anyhow!("examples supports text or json, got {other:?}")),
    }
    Ok(if all_ok { 0 } else { 2 })
}
