use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use groupgen::budget::Budget;
use groupgen::catalog::{self, Construction, GroupSpec};
use groupgen::corpus::{self, AnalysisConfig, Format, RowStatus};
use groupgen::dirichlet;
use groupgen::hypergraph::{self, HypergraphKind};
use groupgen::lattice;
use groupgen::mgse;
use groupgen::structure;
use groupgen::{Error, FiniteGroup};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "groupgen",
    version,
    about = "Generating hypergraphs and exchange properties of small permutation groups"
)]
struct Cli {
    /// Group definition file (TOML).
    #[arg(long, global = true, conflicts_with = "construct")]
    group: Option<PathBuf>,
    /// Construction such as `dihedral:6` or `cyclic:2*cyclic:6`.
    #[arg(long, global = true)]
    construct: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Accepted for compatibility; every computation is deterministic.
    #[arg(long, global = true)]
    seedless: bool,
    /// Wall-clock limit in seconds.
    #[arg(long, global = true)]
    timeout: Option<u64>,
    /// Analysis caps (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gamma,
    Delta,
}

#[derive(Subcommand)]
enum Command {
    /// Order, generators and basic structure.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Subgroup lattice with Möbius values.
    Lattice,
    /// Gamma or delta hypergraph.
    Hypergraph {
        #[arg(long, value_enum, default_value_t = Kind::Gamma)]
        kind: Kind,
        /// Print the generating graph in DOT format instead.
        #[arg(long)]
        dot: bool,
    },
    /// Coefficients a_n and P(t).
    Dirichlet {
        /// Comma-separated values of t.
        #[arg(long = "t", value_delimiter = ',', default_value = "1,2,3")]
        t: Vec<u32>,
        /// Also recover a_n from P(1..|G|) and compare.
        #[arg(long)]
        recover: bool,
    },
    /// Solvability detectors against the oracles.
    Solvable {
        #[arg(long)]
        p: Option<usize>,
    },
    /// MGSE and exchange verdicts.
    Mgse {
        /// Add the structural prediction.
        #[arg(long)]
        structure: bool,
    },
    /// Corpus runs.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum GroupAction {
    Info,
}

#[derive(Subcommand)]
enum CorpusAction {
    Run {
        /// Bundled suite name.
        #[arg(long, default_value = "default", conflicts_with = "file")]
        suite: String,
        /// Corpus file instead of a bundled suite.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

/// 1: a checked property failed.
struct Violation(String);

enum Failure {
    Input(Error),
    Budget(Error),
    Violation(Violation),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) => Failure::Budget(e),
            other => Failure::Input(other),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Violation(Violation(out))) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let mut config = match &cli.config {
        Some(path) => AnalysisConfig::load(path)?,
        None => AnalysisConfig::default(),
    };
    if let Some(t) = cli.timeout {
        config.timeout_secs = t;
    }
    if cli.jobs > 0 {
        // a second initialization only fails if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    if let Command::Corpus {
        action: CorpusAction::Run { suite, file },
    } = &cli.command
    {
        return run_corpus(cli, &config, suite, file.as_ref());
    }

    let spec = match (&cli.group, &cli.construct) {
        (Some(path), None) => catalog::load_group_file(path)?,
        (None, Some(text)) => GroupSpec::construction(Construction::parse(text)?),
        _ => {
            return Err(Failure::Input(Error::InvalidParams(
                "pass --group <file> or --construct <kind:params>".into(),
            )))
        }
    };
    let g = catalog::build(&spec, &config.group)?;
    let budget = match cli.timeout {
        Some(t) => Budget::with_timeout(Duration::from_secs(t)),
        None => Budget::unlimited(),
    };
    match &cli.command {
        Command::Group {
            action: GroupAction::Info,
        } => group_info(cli, &g),
        Command::Lattice => lattice_cmd(cli, &g, &config),
        Command::Hypergraph { kind, dot } => hypergraph_cmd(cli, &g, *kind, *dot, &config, &budget),
        Command::Dirichlet { t, recover } => dirichlet_cmd(cli, &g, t, *recover, &config),
        Command::Solvable { p } => solvable_cmd(cli, &g, *p, &config),
        Command::Mgse { structure } => mgse_cmd(cli, &g, *structure, &config, &budget),
        Command::Corpus { .. } => unreachable!("handled above"),
    }
}

fn json<T: Serialize>(value: &T) -> Outcome {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Input(Error::Io(e.to_string())))?;
    s.push('\n');
    Ok(s)
}

/// Key/value rows as text, csv or json.
fn records(cli: &Cli, rows: &[(&str, String)]) -> Outcome {
    Ok(match cli.format {
        OutputFormat::Text => rows.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
        OutputFormat::Csv => {
            let mut out = String::from("key,value\n");
            for (k, v) in rows {
                let v = if v.contains([',', '"', '\n']) {
                    format!("\"{}\"", v.replace('"', "\"\""))
                } else {
                    v.clone()
                };
                let _ = writeln!(out, "{k},{v}");
            }
            out
        }
        OutputFormat::Json => {
            let map: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                .collect();
            return json(&map);
        }
    })
}

fn group_info(cli: &Cli, g: &FiniteGroup) -> Outcome {
    let gens: Vec<String> = g.generators().iter().map(|&i| g.label(i)).collect();
    let exponent = (0..g.order()).map(|e| g.element_order(e)).fold(1, num_integer::lcm);
    records(
        cli,
        &[
            ("name", g.name().to_string()),
            ("degree", g.degree().to_string()),
            ("order", g.order().to_string()),
            ("generators", gens.join(" ")),
            ("exponent", exponent.to_string()),
            ("cyclic", g.is_cyclic().to_string()),
            ("abelian", g.is_abelian().to_string()),
            ("nilpotent", g.is_nilpotent().to_string()),
            ("solvable", g.is_solvable().to_string()),
            ("derived_length", (g.derived_series().len() - 1).to_string()),
            ("center_order", g.center().order().to_string()),
            ("fitting_order", g.fitting_subgroup().order().to_string()),
            ("rank", hypergraph::rank(g).to_string()),
        ],
    )
}

fn lattice_cmd(cli: &Cli, g: &FiniteGroup, config: &AnalysisConfig) -> Outcome {
    let mut lat = lattice::all_subgroups(g, &config.lattice)?;
    match cli.format {
        OutputFormat::Text => Ok(lat.export_text(g)),
        OutputFormat::Csv | OutputFormat::Json => {
            #[derive(Serialize)]
            struct Node {
                node: usize,
                order: usize,
                index: usize,
                mu: i64,
                maximal: bool,
                normal: bool,
            }
            let mu = lat.moebius_all().to_vec();
            let nodes: Vec<Node> = (0..lat.len())
                .map(|i| Node {
                    node: i,
                    order: lat.node(i).order(),
                    index: lat.index_of(i),
                    mu: mu[i],
                    maximal: lat.is_maximal(i),
                    normal: lat.is_normal(i),
                })
                .collect();
            if let OutputFormat::Json = cli.format {
                #[derive(Serialize)]
                struct Export {
                    group: String,
                    nodes: Vec<Node>,
                    covers: Vec<(usize, usize)>,
                }
                return json(&Export {
                    group: g.name().to_string(),
                    nodes,
                    covers: lat.covers(),
                });
            }
            let mut out = String::from("node,order,index,mu,maximal,normal\n");
            for n in nodes {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    n.node, n.order, n.index, n.mu, n.maximal, n.normal
                );
            }
            Ok(out)
        }
    }
}

fn hypergraph_cmd(
    cli: &Cli,
    g: &FiniteGroup,
    kind: Kind,
    dot: bool,
    config: &AnalysisConfig,
    budget: &Budget,
) -> Outcome {
    if dot {
        return Ok(hypergraph::generating_graph(g).to_dot(g));
    }
    let h = match kind {
        Kind::Gamma => hypergraph::gamma_with(g, &config.hypergraph, budget)?,
        Kind::Delta => hypergraph::delta_with(g, &config.hypergraph, budget)?,
    };
    let conn = hypergraph::is_connected_reduced(&h);
    match cli.format {
        OutputFormat::Text => {
            let mut out = h.export_text(g);
            let _ = writeln!(out, "connected {} components {}", conn.connected, conn.components);
            if h.cyclic_excluded {
                out.push_str("warning cyclic group: hyperedges are single generators\n");
            }
            Ok(out)
        }
        OutputFormat::Csv => {
            let mut out = String::from("edge,elements\n");
            for (i, e) in h.hyperedges.iter().enumerate() {
                let labels: Vec<String> = e.iter().map(|&v| g.label(v)).collect();
                let _ = writeln!(out, "{i},\"{}\"", labels.join(" "));
            }
            Ok(out)
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Export<'a> {
                group: &'a str,
                kind: HypergraphKind,
                rank: usize,
                labels: Vec<String>,
                hyperedges: &'a [Vec<usize>],
                isolated: &'a [usize],
                connected: bool,
                cyclic_excluded: bool,
            }
            json(&Export {
                group: g.name(),
                kind: h.kind,
                rank: h.rank,
                labels: (0..g.order()).map(|v| g.label(v)).collect(),
                hyperedges: &h.hyperedges,
                isolated: &h.isolated,
                connected: conn.connected,
                cyclic_excluded: h.cyclic_excluded,
            })
        }
    }
}

fn dirichlet_cmd(cli: &Cli, g: &FiniteGroup, ts: &[u32], recover: bool, config: &AnalysisConfig) -> Outcome {
    let seq = lattice::all_subgroups(g, &config.lattice)?.a_sequence();
    let mut rows: Vec<(String, String)> = seq.a.iter().map(|(n, a)| (format!("a_{n}"), a.to_string())).collect();
    for &t in ts {
        rows.push((format!("P({t})"), dirichlet::p_gen_exact(&seq, t).to_string()));
    }
    let mut mismatch = false;
    if recover {
        let n = g.order();
        let values: Vec<_> = (1..=n as u32).map(|t| dirichlet::p_gen_exact(&seq, t)).collect();
        let recovered = dirichlet::recover_a_from_p_with(&values, n, &config.dirichlet)?;
        mismatch = recovered != seq;
        rows.push(("recovered_matches".into(), (!mismatch).to_string()));
    }
    let rows: Vec<(&str, String)> = rows.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    let out = records(cli, &rows)?;
    if mismatch {
        return Err(Failure::Violation(Violation(out)));
    }
    Ok(out)
}

fn solvable_cmd(cli: &Cli, g: &FiniteGroup, p: Option<usize>, config: &AnalysisConfig) -> Outcome {
    let mut lat = lattice::all_subgroups(g, &config.lattice)?;
    let seq = lat.a_sequence();
    let mut rows = Vec::new();
    let mut mismatch;
    match p {
        Some(p) => {
            if !groupgen::group::is_prime(p) {
                return Err(Failure::Input(Error::InvalidParams(format!("{p} is not prime"))));
            }
            let (d, o) = (dirichlet::detect_p_solvable(&seq, p), lat.is_p_solvable(p));
            mismatch = d != o;
            rows.push(("p".to_string(), p.to_string()));
            rows.push(("detector".to_string(), d.to_string()));
            rows.push(("oracle".to_string(), o.to_string()));
            if let Some((q, d)) = dirichlet::p_solvability_violation(&seq, p) {
                rows.push(("violation".to_string(), format!("a_{} != a_{q} a_{d}", q * d)));
            }
        }
        None => {
            let (d, o) = (dirichlet::detect_solvable(&seq), g.is_solvable());
            mismatch = d != o;
            rows.push(("detector".to_string(), d.to_string()));
            rows.push(("oracle".to_string(), o.to_string()));
            if let Some((r, s)) = dirichlet::solvability_violation(&seq) {
                rows.push(("violation".to_string(), format!("a_{} != a_{r} a_{s}", r * s)));
            }
            for q in groupgen::group::prime_factors(g.order()) {
                let (d, o) = (dirichlet::detect_p_solvable(&seq, q), lat.is_p_solvable(q));
                mismatch |= d != o;
                rows.push((format!("{q}-solvable"), format!("detector {d} oracle {o}")));
            }
        }
    }
    let rows: Vec<(&str, String)> = rows.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    let out = records(cli, &rows)?;
    if mismatch {
        return Err(Failure::Violation(Violation(out)));
    }
    Ok(out)
}

fn mgse_cmd(cli: &Cli, g: &FiniteGroup, with_structure: bool, config: &AnalysisConfig, budget: &Budget) -> Outcome {
    let gamma = hypergraph::gamma_with(g, &config.hypergraph, budget)?;
    let delta = hypergraph::delta_with(g, &config.hypergraph, budget)?;
    let report = mgse::mgse_check_on(g, &gamma, &delta, &config.mgse, budget)?;
    let labels = |s: &[usize]| s.iter().map(|&e| g.label(e)).collect::<Vec<_>>().join(" ");
    let structure = if with_structure {
        Some(structure::predict_mgse_structurally(g)?)
    } else {
        None
    };
    let mismatch = report.holds != report.exchange_holds
        || structure
            .as_ref()
            .is_some_and(|s| s.applicable && s.predicted_mgse != report.holds);
    let out = if let OutputFormat::Json = cli.format {
        #[derive(Serialize)]
        struct Export<'a> {
            group: &'a str,
            report: &'a mgse::MgseReport,
            witness_labels: Option<[String; 2]>,
            structure: Option<structure::StructureReport>,
        }
        json(&Export {
            group: g.name(),
            report: &report,
            witness_labels: report.witness.as_ref().map(|w| [labels(&w.x), labels(&w.y)]),
            structure,
        })?
    } else {
        let mut rows = vec![
            ("mgse", report.holds.to_string()),
            ("uniform", report.uniform.to_string()),
            ("exchange", report.exchange_holds.to_string()),
            ("matroid", report.matroid.to_string()),
            ("gamma_edges", report.gamma_edges.to_string()),
            ("delta_edges", report.delta_edges.to_string()),
        ];
        if let Some(w) = &report.witness {
            rows.push(("witness_x", labels(&w.x)));
            rows.push(("witness_y", labels(&w.y)));
            rows.push(("witness_position", (w.position + 1).to_string()));
        }
        if let Some(w) = &report.exchange_witness {
            rows.push((
                "exchange_witness",
                format!("A={{{}}} B={{{}}} a={}", labels(&w.a), labels(&w.b), g.label(w.removed)),
            ));
        }
        if let Some(s) = &structure {
            rows.push(("structure_applicable", s.applicable.to_string()));
            rows.push(("structure_predicted", s.predicted_mgse.to_string()));
            if let Some(d) = &s.decomposition {
                rows.push((
                    "decomposition",
                    format!(
                        "N of order {} (q = {}), delta = {}, H of order {} generated by {}",
                        d.module_order, d.q, d.delta, d.p, d.generator
                    ),
                ));
            }
            rows.push(("structure_reasons", s.reasons.join("; ")));
        }
        records(cli, &rows)?
    };
    if mismatch {
        return Err(Failure::Violation(Violation(out)));
    }
    Ok(out)
}

fn run_corpus(cli: &Cli, config: &AnalysisConfig, suite: &str, file: Option<&PathBuf>) -> Outcome {
    let entries = match file {
        Some(path) => corpus::load_corpus(path)?,
        None if suite == "default" => corpus::default_corpus(),
        None => return Err(Failure::Input(Error::InvalidParams(format!("unknown suite {suite:?}")))),
    };
    let rows = corpus::run_corpus(&entries, config, cli.jobs)?;
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    let out = corpus::format_rows(&rows, format)?;
    if rows
        .iter()
        .any(|r| !r.violations.is_empty() || matches!(r.status, RowStatus::Error(_)))
    {
        return Err(Failure::Violation(Violation(out)));
    }
    if rows.iter().any(|r| matches!(r.status, RowStatus::Skipped(_))) {
        eprintln!("error: some rows were skipped on budget");
        print!("{out}");
        return Err(Failure::Budget(Error::Budget("corpus rows skipped".into())));
    }
    Ok(out)
}
