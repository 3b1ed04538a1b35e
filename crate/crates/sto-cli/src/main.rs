use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;
use sto_core::engine::{Engine, IntegralResult, SeriesOptions};
use sto_core::eta::{eta_integral, EtaIntegralRequest};
use sto_core::graphs::{self, DegreeComposition, SimpleGraph};
use sto_core::oracle::{eta_oracle, xi_oracle, IntegralOracle, OracleValue, QuadratureSpec};
use sto_core::xi::{xi_double_integral, XiIntegralRequest};

use sto_cli::job::{Job, JobSpec};
use sto_cli::parallel;
use sto_cli::CliError;
use sto_cli::report::{rel_diff, to_json, IntegralRecord, Num, OracleComparison, OracleRecord, PairRecord};

/// Exit status of a command that ran to completion.
enum Outcome {
    Ok,
    Disagree,
}

#[derive(Parser)]
#[command(name = "sto", version, about = "Two-electron integrals over Slater orbitals for diatomics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Machine-readable output (17 significant digits).
    #[arg(long, global = true)]
    json: bool,
    /// Print only the result value(s).
    #[arg(long, global = true)]
    quiet: bool,
    /// Include wall-clock time in `--json` output.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the integral described by a job file.
    Run {
        job: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long = "mu-max")]
        mu_max: Option<u32>,
        /// Also evaluate by quadrature and compare.
        #[arg(long)]
        oracle: bool,
        /// Relative disagreement above which the exit status is 4.
        #[arg(long = "oracle-tol", default_value_t = 1e-8)]
        oracle_tol: f64,
    },
    /// Evaluate a job by quadrature only.
    Oracle {
        job: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long = "mu-max")]
        mu_max: Option<u32>,
    },
    /// η integral: series and quadrature side by side.
    #[command(allow_negative_numbers = true)]
    Eta {
        mu: u32,
        sigma: u32,
        g: u32,
        beta: f64,
        #[arg(long = "oracle-tol", default_value_t = 1e-10)]
        oracle_tol: f64,
    },
    /// ξ double integral.
    #[command(allow_negative_numbers = true)]
    Xi {
        mu: u32,
        sigma: u32,
        r1: u32,
        r2: u32,
        alpha1: f64,
        alpha2: f64,
        #[arg(long)]
        oracle: bool,
        #[arg(long = "oracle-tol", default_value_t = 1e-7)]
        oracle_tol: f64,
    },
    /// Correlation-graph combinatorics.
    Graphs {
        #[command(subcommand)]
        verb: GraphVerb,
    },
}

#[derive(Subcommand)]
enum GraphVerb {
    /// Number of feasible (n, m) labels for connected graphs.
    Labels { n: u64 },
    /// C(n, m); all m when omitted.
    Count {
        n: u8,
        m: Option<u32>,
        /// List the representatives' edges.
        #[arg(long)]
        list: bool,
    },
    /// Whether a degree composition such as `3,3,1,1` is realizable.
    Graphical { degrees: String },
    /// Connected components of an edge list such as `1-2,2-3,4-5`.
    Components {
        edges: String,
        /// Point count; defaults to the largest point named.
        #[arg(long)]
        points: Option<u8>,
    },
    /// Labeled connected count against 2^{n(n-1)/2} and 2^{n(n-1)/2}/n!.
    Asymptotic { n: u32 },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Disagree) => ExitCode::from(4),
        Err(e) => {
            eprintln!("sto: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.cmd {
        Cmd::Run { job, tol, mu_max, oracle, oracle_tol } => {
            let mut j = load_job(job, *tol, *mu_max)?;
            j.oracle |= *oracle;
            run(cli, &j, *oracle_tol)
        }
        Cmd::Oracle { job, tol, mu_max } => oracle_only(cli, &load_job(job, *tol, *mu_max)?),
        Cmd::Eta { mu, sigma, g, beta, oracle_tol } => eta(cli, *mu, *sigma, *g, *beta, *oracle_tol),
        Cmd::Xi { mu, sigma, r1, r2, alpha1, alpha2, oracle, oracle_tol } => {
            let req = XiIntegralRequest::new(*mu, *sigma, *r1, *r2, *alpha1, *alpha2);
            xi(cli, req, *oracle, *oracle_tol)
        }
        Cmd::Graphs { verb } => graph_cmd(cli, verb),
    }
}

fn load_job(path: &Path, tol: Option<f64>, mu_max: Option<u32>) -> Result<Job, CliError> {
    let mut spec = JobSpec::load(path)?;
    if let Some(t) = tol {
        spec.tol = t;
    }
    if let Some(m) = mu_max {
        spec.mu_max = m;
    }
    spec.validate()
}

fn oracle_spec(tol: f64) -> QuadratureSpec {
    QuadratureSpec { rel_tol: tol.clamp(1e-13, 1e-9), ..QuadratureSpec::default() }
}

fn run(cli: &Cli, job: &Job, oracle_tol: f64) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let threads = parallel::thread_count();
    let spec = oracle_spec(job.tol);
    let (engine, oracle) = std::thread::scope(|sc| {
        let eh = sc.spawn(|| {
            let t = Instant::now();
            Engine::new()
                .integral(&job.orbitals, job.kind, job.r, SeriesOptions { tol: job.tol, mu_max: job.mu_max })
                .map(|mut r| {
                    r.elapsed = Some(t.elapsed());
                    r
                })
        });
        let oracle = job.oracle.then(|| {
            let o = IntegralOracle::new(&job.orbitals, job.kind, job.r, job.mu_max, &spec)?;
            parallel::oracle_series(&o, spec.rel_tol, job.mu_max, &spec, threads)
        });
        (eh.join().expect("engine thread panicked"), oracle)
    });
    let res: IntegralResult = engine?;
    let comparison = match oracle {
        None => None,
        Some(o) => {
            let (ov, mu) = o?;
            let d = rel_diff(res.value, ov.value);
            Some(OracleComparison {
                value: Num(ov.value),
                error_estimate: Num(ov.error),
                mu_used: mu,
                rel_diff: Num(d),
                tolerance: Num(oracle_tol),
                agree: d <= oracle_tol,
            })
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let rec = IntegralRecord {
        kind: job.kind.name().into(),
        r: Num(job.r),
        value: Num(res.value),
        mu_used: res.mu_used,
        tail_estimate: Num(res.tail_estimate),
        term_count: res.term_count,
        elapsed: cli.timing.then_some(Num(elapsed)),
        oracle: comparison.clone(),
    };
    if cli.json {
        println!("{}", to_json(&rec));
    } else if cli.quiet {
        println!("{}", rec.value.text());
    } else {
        println!("kind          {}", rec.kind);
        println!("R             {}", rec.r.text());
        println!("value         {}", rec.value.text());
        println!("muUsed        {}", rec.mu_used);
        println!("tailEstimate  {}", rec.tail_estimate.text());
        println!("termCount     {}", rec.term_count);
        println!("elapsed       {elapsed:.3} s");
        if let Some(c) = &comparison {
            println!("oracle        {} (error estimate {}, muUsed {})", c.value.text(), c.error_estimate.text(), c.mu_used);
            println!("relDiff       {} ({})", c.rel_diff.text(), if c.agree { "agree" } else { "DISAGREE" });
        }
    }
    Ok(match comparison {
        Some(c) if !c.agree => Outcome::Disagree,
        _ => Outcome::Ok,
    })
}

fn oracle_only(cli: &Cli, job: &Job) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let spec = oracle_spec(job.tol);
    let o = IntegralOracle::new(&job.orbitals, job.kind, job.r, job.mu_max, &spec)?;
    let (v, mu) = parallel::oracle_series(&o, spec.rel_tol, job.mu_max, &spec, parallel::thread_count())?;
    let elapsed = start.elapsed().as_secs_f64();
    let rec = OracleRecord {
        kind: job.kind.name().into(),
        r: Num(job.r),
        value: Num(v.value),
        error_estimate: Num(v.error),
        mu_used: mu,
        elapsed: cli.timing.then_some(Num(elapsed)),
    };
    if cli.json {
        println!("{}", to_json(&rec));
    } else if cli.quiet {
        println!("{}", rec.value.text());
    } else {
        println!("oracle        {}", rec.value.text());
        println!("errorEstimate {}", rec.error_estimate.text());
        println!("muUsed        {}", rec.mu_used);
        println!("elapsed       {elapsed:.3} s");
    }
    Ok(Outcome::Ok)
}

fn pair_output(cli: &Cli, rec: &PairRecord, agree: bool) -> Outcome {
    if cli.json {
        println!("{}", to_json(rec));
    } else if cli.quiet {
        println!("{}", rec.value.text());
    } else {
        println!("value    {}", rec.value.text());
        if let (Some(o), Some(e), Some(d)) = (rec.oracle, rec.oracle_error, rec.rel_diff) {
            println!("oracle   {} (error estimate {})", o.text(), e.text());
            println!("relDiff  {} ({})", d.text(), if agree { "agree" } else { "DISAGREE" });
        }
    }
    if agree {
        Outcome::Ok
    } else {
        Outcome::Disagree
    }
}

fn eta(cli: &Cli, mu: u32, sigma: u32, g: u32, beta: f64, tol: f64) -> Result<Outcome, CliError> {
    let v = eta_integral(EtaIntegralRequest::new(mu, sigma, g, beta))?;
    let o: OracleValue = eta_oracle(mu, sigma, g, beta, &QuadratureSpec::default())?;
    // Absolute floor for structural zeros.
    let agree = (v - o.value).abs() <= tol * o.value.abs() + 1e-14;
    let rec = PairRecord {
        args: vec![Num(mu as f64), Num(sigma as f64), Num(g as f64), Num(beta)],
        value: Num(v),
        oracle: Some(Num(o.value)),
        oracle_error: Some(Num(o.error)),
        rel_diff: Some(Num(rel_diff(v, o.value))),
    };
    Ok(pair_output(cli, &rec, agree))
}

fn xi(cli: &Cli, req: XiIntegralRequest, oracle: bool, tol: f64) -> Result<Outcome, CliError> {
    let v = xi_double_integral(req)?;
    let XiIntegralRequest { mu, sigma, r1, r2, alpha1, alpha2 } = req;
    let mut rec = PairRecord {
        args: [mu, sigma, r1, r2].iter().map(|&x| Num(x as f64)).chain([Num(alpha1), Num(alpha2)]).collect(),
        value: Num(v),
        oracle: None,
        oracle_error: None,
        rel_diff: None,
    };
    let mut agree = true;
    if oracle {
        let o = xi_oracle(mu, sigma, r1, r2, alpha1, alpha2, &QuadratureSpec::default())?;
        let d = rel_diff(v, o.value);
        agree = d <= tol;
        rec.oracle = Some(Num(o.value));
        rec.oracle_error = Some(Num(o.error));
        rec.rel_diff = Some(Num(d));
    }
    Ok(pair_output(cli, &rec, agree))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<T>().map_err(|_| CliError::Usage(format!("invalid {what} `{t}`"))))
        .collect()
}

fn graph_cmd(cli: &Cli, verb: &GraphVerb) -> Result<Outcome, CliError> {
    let out = |v: serde_json::Value, human: String| {
        if cli.json {
            println!("{}", serde_json::to_string_pretty(&v).expect("json value"));
        } else {
            println!("{human}");
        }
    };
    match verb {
        GraphVerb::Labels { n } => {
            let c = graphs::nm_label_count(*n)?;
            out(json!({ "n": n, "labels": c }), c.to_string());
        }
        GraphVerb::Count { n, m: Some(m), list } => {
            let gs = graphs::enumerate_connected(*n, *m)?;
            let edges: Vec<Vec<[u8; 2]>> =
                gs.iter().map(|g| g.edges().into_iter().map(|(a, b)| [a + 1, b + 1]).collect()).collect();
            let mut human = gs.len().to_string();
            if *list {
                for e in &edges {
                    let parts: Vec<String> = e.iter().map(|[a, b]| format!("{a}-{b}")).collect();
                    human.push_str(&format!("\n{}", parts.join(",")));
                }
            }
            let mut v = json!({ "n": n, "m": m, "count": gs.len() });
            if *list {
                v["graphs"] = json!(edges);
            }
            out(v, human);
        }
        GraphVerb::Count { n, m: None, .. } => {
            let counts = graphs::connected_counts(*n)?;
            let total: usize = counts.iter().map(|c| c.1).sum();
            let human = counts
                .iter()
                .map(|(m, c)| format!("C({n},{m}) = {c}"))
                .chain([format!("total = {total}")])
                .collect::<Vec<_>>()
                .join("\n");
            let by_m: Vec<_> = counts.iter().map(|(m, c)| json!({ "m": m, "count": c })).collect();
            out(json!({ "n": n, "counts": by_m, "total": total }), human);
        }
        GraphVerb::Graphical { degrees } => {
            let d = DegreeComposition::new(parse_list(degrees, "degree")?);
            let g = graphs::is_graphical(&d);
            out(json!({ "degrees": d.degrees, "graphical": g }), g.to_string());
        }
        GraphVerb::Components { edges, points } => {
            let mut pairs = Vec::new();
            for t in edges.split(',').filter(|t| !t.trim().is_empty()) {
                let (a, b) = t
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.trim().parse::<u8>().ok()?, b.trim().parse::<u8>().ok()?)))
                    .filter(|&(a, b)| a >= 1 && b >= 1)
                    .ok_or_else(|| CliError::Usage(format!("invalid edge `{t}` (expected i-j, 1-based)")))?;
                pairs.push((a - 1, b - 1));
            }
            let n = points.unwrap_or_else(|| pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(1));
            let g = SimpleGraph::from_edges(n, &pairs)?;
            let comps: Vec<Vec<u8>> =
                graphs::connected_components(&g).into_iter().map(|c| c.into_iter().map(|p| p + 1).collect()).collect();
            let human = comps
                .iter()
                .map(|c| format!("{{{}}}", c.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(" ");
            out(json!({ "points": n, "components": comps }), human);
        }
        GraphVerb::Asymptotic { n } => {
            let c = graphs::labeled_connected_count(*n)?;
            let frac = graphs::labeled_connected_fraction(*n)?;
            let est = graphs::asymptotic_connected_estimate(*n);
            let human = format!(
                "labeledConnected  {c}\nallLabeled        2^{}\nfraction          {}\nestimate          {}",
                graphs::max_correlation_terms(*n as u64),
                Num(frac).text(),
                Num(est).text()
            );
            #[derive(serde::Serialize)]
            struct Asymptotic {
                n: u32,
                #[serde(rename = "labeledConnected")]
                labeled_connected: String,
                fraction: Num,
                estimate: Num,
            }
            let rec = Asymptotic { n: *n, labeled_connected: c.to_string(), fraction: Num(frac), estimate: Num(est) };
            if cli.json {
                println!("{}", to_json(&rec));
            } else {
                println!("{human}");
            }
        }
    }
    Ok(Outcome::Ok)
}
