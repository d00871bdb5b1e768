//! Corpus runs: every analysis on a list of groups, with the theorem-level
//! properties checked on each row.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::catalog::{self, Construction, GroupSpec, Source};
use crate::dirichlet::{self, DirichletConfig};
use crate::error::{Error, Result};
use crate::group::{prime_factors, prime_power_base, FiniteGroup, GroupConfig};
use crate::hypergraph::{self, HypergraphConfig};
use crate::lattice::{self, LatticeConfig};
use crate::mgse::{self, MgseConfig, MgseWitness};
use crate::quotient::quotient_group;
use crate::structure;

pub const DEFAULT_CORPUS: &str = include_str!("../corpus/default.toml");
pub const DEFAULT_CONFIG: &str = include_str!("../corpus/config.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Analysis {
    /// Subgroup lattice, Möbius function and the solvability detectors.
    Lattice,
    /// Rank, `gamma`, `delta` and connectivity.
    Hypergraph,
    /// Hall identity and coefficient recovery.
    Dirichlet,
    /// MGSE, exchange axiom, structure and the quotient lemmas.
    Mgse,
}

impl Analysis {
    pub const ALL: [Analysis; 4] = [
        Analysis::Lattice,
        Analysis::Hypergraph,
        Analysis::Dirichlet,
        Analysis::Mgse,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisConfig {
    /// Per-row wall-clock limit in seconds; 0 disables it.
    pub timeout_secs: u64,
    pub hall_max_order: usize,
    pub hall_t: Vec<u32>,
    pub recover_max_order: usize,
    pub group: GroupConfig,
    pub lattice: LatticeConfig,
    pub hypergraph: HypergraphConfig,
    pub dirichlet: DirichletConfig,
    pub mgse: MgseConfig,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            timeout_secs: 1800,
            hall_max_order: 60,
            hall_t: vec![1, 2, 3],
            recover_max_order: 24,
            group: GroupConfig::default(),
            lattice: LatticeConfig::default(),
            hypergraph: HypergraphConfig::default(),
            dirichlet: DirichletConfig::default(),
            mgse: MgseConfig::default(),
        }
    }
}

impl AnalysisConfig {
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| toml_error(text, path, &e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn budget(&self) -> Budget {
        if self.timeout_secs == 0 {
            Budget::unlimited()
        } else {
            Budget::with_timeout(Duration::from_secs(self.timeout_secs))
        }
    }
}

fn toml_error(text: &str, path: &str, e: &toml::de::Error) -> Error {
    let offset = e.span().map_or(0, |s| s.start).min(text.len());
    let before = &text[..offset];
    Error::File {
        path: path.to_string(),
        line: before.matches('\n').count() + 1,
        column: before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1,
        message: e.message().to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub spec: GroupSpec,
    pub analyses: Vec<Analysis>,
}

impl CorpusEntry {
    pub fn all(spec: GroupSpec) -> Self {
        CorpusEntry {
            spec,
            analyses: Analysis::ALL.to_vec(),
        }
    }

    fn runs(&self, a: Analysis) -> bool {
        self.analyses.contains(&a)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    #[allow(dead_code)]
    version: Option<u32>,
    #[serde(default)]
    group: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    construct: Option<String>,
    degree: Option<usize>,
    generators: Option<Vec<String>>,
    analyses: Option<Vec<Analysis>>,
}

pub fn parse_corpus(text: &str, path: &str) -> Result<Vec<CorpusEntry>> {
    let raw: RawCorpus = toml::from_str(text).map_err(|e| toml_error(text, path, &e))?;
    raw.group
        .into_iter()
        .map(|e| {
            let source = match (e.construct, e.degree, e.generators) {
                (Some(c), None, None) => Source::Construction(Construction::parse(&c)?),
                (None, Some(degree), Some(generators)) => Source::Generators { degree, generators },
                _ => {
                    return Err(Error::InvalidParams(format!(
                        "{}: give either construct or degree and generators",
                        e.name
                    )))
                }
            };
            Ok(CorpusEntry {
                spec: GroupSpec { name: e.name, source },
                analyses: e.analyses.unwrap_or_else(|| Analysis::ALL.to_vec()),
            })
        })
        .collect()
}

pub fn default_corpus() -> Vec<CorpusEntry> {
    parse_corpus(DEFAULT_CORPUS, "default.toml").expect("bundled corpus parses")
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_corpus(&text, &path.display().to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    /// Budget or timeout exhausted; the row is incomplete.
    Skipped(String),
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusReportRow {
    pub name: String,
    pub order: usize,
    pub rank: Option<usize>,
    pub frattini_order: Option<usize>,
    pub subgroups: Option<usize>,
    pub cyclic: Option<bool>,
    pub nilpotent: Option<bool>,
    pub solvable_oracle: Option<bool>,
    pub solvable_detector: Option<bool>,
    pub delta_edges: Option<usize>,
    pub gamma_equals_delta: Option<bool>,
    pub isolated_is_frattini: Option<bool>,
    pub delta_connected: Option<bool>,
    /// Only for `d(G) >= 3`.
    pub gamma_connected: Option<bool>,
    pub hall_identity: Option<bool>,
    pub round_trip: Option<bool>,
    pub mgse: Option<bool>,
    pub matroid: Option<bool>,
    /// Only for non-cyclic solvable groups.
    pub structural: Option<bool>,
    pub witness: Option<String>,
    pub status: RowStatus,
    pub violations: Vec<String>,
}

impl CorpusReportRow {
    fn new(name: &str) -> Self {
        CorpusReportRow {
            name: name.to_string(),
            order: 0,
            rank: None,
            frattini_order: None,
            subgroups: None,
            cyclic: None,
            nilpotent: None,
            solvable_oracle: None,
            solvable_detector: None,
            delta_edges: None,
            gamma_equals_delta: None,
            isolated_is_frattini: None,
            delta_connected: None,
            gamma_connected: None,
            hall_identity: None,
            round_trip: None,
            mgse: None,
            matroid: None,
            structural: None,
            witness: None,
            status: RowStatus::Ok,
            violations: Vec::new(),
        }
    }
}

fn format_witness(g: &FiniteGroup, w: &MgseWitness) -> String {
    let set = |s: &[usize]| s.iter().map(|&e| g.label(e)).collect::<Vec<_>>().join(" ");
    format!("X={{{}}} Y={{{}}} i={}", set(&w.x), set(&w.y), w.position + 1)
}

/// Runs the analyses of one entry. Errors are recorded in the row.
pub fn analyze(entry: &CorpusEntry, config: &AnalysisConfig) -> CorpusReportRow {
    let mut row = CorpusReportRow::new(&entry.spec.name);
    let budget = config.budget();
    if let Err(e) = fill_row(&mut row, entry, config, &budget) {
        row.status = match e {
            Error::Budget(m) => RowStatus::Skipped(m),
            other => RowStatus::Error(other.to_string()),
        };
    }
    row
}

fn fill_row(row: &mut CorpusReportRow, entry: &CorpusEntry, config: &AnalysisConfig, budget: &Budget) -> Result<()> {
    let g = catalog::build(&entry.spec, &config.group)?;
    let n = g.order();
    row.order = n;
    let cyclic = g.is_cyclic();
    let solvable = g.is_solvable();
    row.cyclic = Some(cyclic);
    row.nilpotent = Some(g.is_nilpotent());
    row.solvable_oracle = Some(solvable);

    let mut frattini = None;
    let mut sequence = None;
    if entry.runs(Analysis::Lattice) {
        let mut lat = lattice::all_subgroups(&g, &config.lattice)?;
        row.subgroups = Some(lat.len());
        let phi = lat.frattini();
        row.frattini_order = Some(phi.order());
        frattini = Some(phi);
        let mu_sum: i64 = lat.moebius_all().iter().sum();
        if n > 1 && mu_sum != 0 {
            row.violations.push(format!("Möbius values sum to {mu_sum}"));
        }
        let seq = lat.a_sequence();
        let detector = dirichlet::detect_solvable(&seq);
        row.solvable_detector = Some(detector);
        if detector != solvable {
            row.violations.push(format!(
                "solvable detector {detector} disagrees with the derived series at {:?}",
                dirichlet::solvability_violation(&seq)
            ));
        }
        for p in prime_factors(n) {
            let (detected, oracle) = (dirichlet::detect_p_solvable(&seq, p), lat.is_p_solvable(p));
            if detected != oracle {
                row.violations.push(format!(
                    "{p}-solvable detector {detected} disagrees with the normal-series oracle {oracle}"
                ));
            }
        }
        sequence = Some(seq);
    }
    budget.check("lattice")?;

    if entry.runs(Analysis::Dirichlet) {
        let seq = match &sequence {
            Some(s) => s.clone(),
            None => lattice::all_subgroups(&g, &config.lattice)?.a_sequence(),
        };
        if n <= config.hall_max_order {
            let mut agree = true;
            for &t in &config.hall_t {
                let exact = dirichlet::p_gen_exact(&seq, t);
                let counted = dirichlet::p_gen_bruteforce_with(&g, t, &config.dirichlet, budget)?;
                if exact != counted {
                    agree = false;
                    row.violations
                        .push(format!("P({t}) is {exact} from the lattice but {counted} by counting"));
                }
            }
            row.hall_identity = Some(agree);
        }
        if n <= config.recover_max_order {
            let values: Vec<_> = (1..=n as u32).map(|t| dirichlet::p_gen_exact(&seq, t)).collect();
            let recovered = dirichlet::recover_a_from_p_with(&values, n, &config.dirichlet)?;
            let ok = recovered == seq;
            if !ok {
                row.violations
                    .push("coefficients recovered from P(1..|G|) differ".into());
            }
            row.round_trip = Some(ok);
        }
    }

    let needs_hypergraphs = entry.runs(Analysis::Hypergraph) || entry.runs(Analysis::Mgse);
    if !needs_hypergraphs {
        return Ok(());
    }
    let gamma = hypergraph::gamma_with(&g, &config.hypergraph, budget)?;
    let delta = hypergraph::delta_with(&g, &config.hypergraph, budget)?;
    row.rank = Some(gamma.rank);

    if entry.runs(Analysis::Hypergraph) {
        row.delta_edges = Some(delta.hyperedges.len());
        row.gamma_equals_delta = Some(gamma.hyperedges == delta.hyperedges);
        if gamma.hyperedges.iter().any(|e| !delta.contains_edge(e)) {
            row.violations.push("a gamma hyperedge is not minimal".into());
        }
        let phi = match frattini.take() {
            Some(phi) => phi,
            None => lattice::frattini(&g, &config.lattice)?,
        };
        if row.frattini_order.is_none() {
            row.frattini_order = Some(phi.order());
        }
        let delta_conn = hypergraph::is_connected_reduced(&delta).connected;
        row.delta_connected = Some(delta_conn);
        if !cyclic {
            let same = delta.isolated == phi.elements();
            row.isolated_is_frattini = Some(same);
            if !same {
                row.violations
                    .push("isolated vertices of delta differ from the Frattini subgroup".into());
            }
            if !delta_conn {
                row.violations.push("reduced delta is disconnected".into());
            }
        }
        if gamma.rank >= 3 {
            let conn = hypergraph::is_connected_reduced(&gamma).connected;
            row.gamma_connected = Some(conn);
            if !conn {
                row.violations
                    .push("reduced gamma is disconnected with d(G) >= 3".into());
            }
        }
    }
    budget.check("hypergraphs")?;

    if entry.runs(Analysis::Mgse) {
        let report = mgse::mgse_check_on(&g, &gamma, &delta, &config.mgse, budget)?;
        row.mgse = Some(report.holds);
        row.matroid = Some(report.matroid);
        row.witness = report.witness.as_ref().map(|w| format_witness(&g, w));
        if report.holds != report.exchange_holds {
            row.violations
                .push("MGSE and the exchange axiom on gamma disagree".into());
        }
        if mgse::basis_exchange_check(&delta).holds && gamma.hyperedges != delta.hyperedges {
            row.violations
                .push("delta satisfies the exchange axiom but differs from gamma".into());
        }
        if !cyclic && solvable {
            let s = structure::predict_mgse_structurally(&g)?;
            row.structural = Some(s.predicted_mgse);
            if s.predicted_mgse != report.holds {
                row.violations.push(format!(
                    "structural prediction {} disagrees with MGSE {}",
                    s.predicted_mgse, report.holds
                ));
            }
        }
        for v in quotient_lemma_violations(&g, report.holds, config, budget)? {
            row.violations.push(v);
        }
    }
    Ok(())
}

fn mgse_holds(g: &FiniteGroup, config: &AnalysisConfig, budget: &Budget) -> Result<bool> {
    let gamma = hypergraph::gamma_with(g, &config.hypergraph, budget)?;
    let delta = hypergraph::delta_with(g, &config.hypergraph, budget)?;
    Ok(mgse::mgse_check_on(g, &gamma, &delta, &config.mgse, budget)?.holds)
}

/// Frattini reduction, quotient closure, the abelianization condition and
/// the unique maximal normal subgroup condition.
pub fn quotient_lemma_violations(
    g: &FiniteGroup,
    holds: bool,
    config: &AnalysisConfig,
    budget: &Budget,
) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let lat = lattice::all_subgroups(g, &config.lattice)?;
    let phi = lat.frattini();
    let frattini_quotient = quotient_group(g, &phi)?.group;
    if mgse_holds(&frattini_quotient, config, budget)? != holds {
        out.push("MGSE differs between G and G/Phi(G)".into());
    }
    if !holds {
        return Ok(out);
    }
    for i in lat.normal_subgroups() {
        let q = quotient_group(g, lat.node(i))?.group;
        if !mgse_holds(&q, config, budget)? {
            out.push(format!(
                "quotient by a normal subgroup of order {} fails MGSE",
                lat.node(i).order()
            ));
        }
    }
    if !g.is_cyclic() {
        let ab = g.order() / g.derived_subgroup().order();
        if ab > 1 && prime_power_base(ab).is_none() {
            out.push(format!("G/G' has order {ab}, not a prime power"));
        }
    }
    if !g.is_nilpotent() {
        let m = structure::unique_maximal_normal_check(g)?;
        if !(m.unique && m.quotient_cyclic && m.quotient_prime) {
            out.push(format!(
                "maximal normal subgroups {:?} do not give a prime cyclic quotient",
                m.maximal_normal_orders
            ));
        }
    }
    Ok(out)
}

/// Rows in corpus order; `jobs` threads, or the rayon default for 0.
pub fn run_corpus(entries: &[CorpusEntry], config: &AnalysisConfig, jobs: usize) -> Result<Vec<CorpusReportRow>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    Ok(pool.install(|| entries.par_iter().map(|e| analyze(e, config)).collect()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParams(format!("unknown format {other:?}"))),
        }
    }
}

const COLUMNS: [&str; 21] = [
    "name",
    "order",
    "d",
    "frattini",
    "subgroups",
    "cyclic",
    "nilpotent",
    "solvable",
    "solvable_detector",
    "delta_edges",
    "gamma_eq_delta",
    "isolated_eq_frattini",
    "delta_connected",
    "gamma_connected",
    "hall",
    "round_trip",
    "mgse",
    "matroid",
    "structural",
    "status",
    "witness",
];

fn cells(row: &CorpusReportRow) -> Vec<String> {
    fn num(v: Option<usize>) -> String {
        v.map_or_else(|| "-".into(), |x| x.to_string())
    }
    fn flag(v: Option<bool>) -> String {
        match v {
            Some(true) => "yes".into(),
            Some(false) => "no".into(),
            None => "-".into(),
        }
    }
    let status = match &row.status {
        RowStatus::Ok if row.violations.is_empty() => "ok".to_string(),
        RowStatus::Ok => format!("violations:{}", row.violations.len()),
        RowStatus::Skipped(m) => format!("skipped: {m}"),
        RowStatus::Error(m) => format!("error: {m}"),
    };
    vec![
        row.name.clone(),
        row.order.to_string(),
        num(row.rank),
        num(row.frattini_order),
        num(row.subgroups),
        flag(row.cyclic),
        flag(row.nilpotent),
        flag(row.solvable_oracle),
        flag(row.solvable_detector),
        num(row.delta_edges),
        flag(row.gamma_equals_delta),
        flag(row.isolated_is_frattini),
        flag(row.delta_connected),
        flag(row.gamma_connected),
        flag(row.hall_identity),
        flag(row.round_trip),
        flag(row.mgse),
        flag(row.matroid),
        flag(row.structural),
        status,
        row.witness.clone().unwrap_or_default(),
    ]
}

pub fn format_rows(rows: &[CorpusReportRow], format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).map_err(|e| Error::Io(e.to_string())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(COLUMNS).map_err(io)?;
            for row in rows {
                w.write_record(cells(row)).map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
                .map_err(|e| Error::Io(e.to_string()))
        }
        Format::Text => {
            let table: Vec<Vec<String>> = rows.iter().map(cells).collect();
            // the witness column is printed last without padding
            let widths: Vec<usize> = (0..COLUMNS.len() - 1)
                .map(|c| {
                    table
                        .iter()
                        .map(|r| r[c].chars().count())
                        .chain([COLUMNS[c].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let mut out = String::new();
            let line = |cols: Vec<&str>, out: &mut String| {
                let mut parts: Vec<String> = cols[..cols.len() - 1]
                    .iter()
                    .zip(&widths)
                    .map(|(s, &w)| format!("{s:<w$}"))
                    .collect();
                parts.push(cols[cols.len() - 1].to_string());
                let _ = writeln!(out, "{}", parts.join("  ").trim_end());
            };
            line(COLUMNS.to_vec(), &mut out);
            for r in &table {
                line(r.iter().map(String::as_str).collect(), &mut out);
            }
            for row in rows {
                for v in &row.violations {
                    let _ = writeln!(out, "violation {}: {v}", row.name);
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_parse() {
        let corpus = default_corpus();
        assert_eq!(corpus.len(), 21);
        assert_eq!(corpus.last().unwrap().analyses, vec![Analysis::Lattice]);
        assert_eq!(
            AnalysisConfig::parse(DEFAULT_CONFIG, "config.toml").unwrap(),
            AnalysisConfig::default()
        );
    }

    #[test]
    fn config_errors_carry_positions() {
        let err = AnalysisConfig::parse("timeout_secs = 5\n[lattice]\nmax_order = \"x\"\n", "c.toml").unwrap_err();
        assert!(matches!(err, Error::File { line: 3, .. }), "{err}");
        assert!(parse_corpus("[[group]]\nname = \"x\"\n", "c.toml").is_err());
    }

    #[test]
    fn small_rows_are_clean() {
        let entries = parse_corpus(
            "[[group]]\nname = \"S3\"\nconstruct = \"symmetric:3\"\n[[group]]\nname = \"C4\"\nconstruct = \"cyclic:4\"\n",
            "t.toml",
        )
        .unwrap();
        let rows = run_corpus(&entries, &AnalysisConfig::default(), 2).unwrap();
        for r in &rows {
            assert_eq!(r.status, RowStatus::Ok);
            assert!(r.violations.is_empty(), "{:?}", r.violations);
        }
        assert_eq!(rows[0].mgse, Some(true));
        assert_eq!(rows[0].structural, Some(true));
        assert_eq!(rows[1].structural, None);
        let text = format_rows(&rows, Format::Text).unwrap();
        assert!(text.starts_with("name"));
        let csv = format_rows(&rows, Format::Csv).unwrap();
        assert_eq!(csv.lines().count(), 3);
        let json = format_rows(&rows, Format::Json).unwrap();
        assert!(json.contains("\"name\": \"S3\""));
    }

    #[test]
    fn zero_timeout_budget_is_unlimited() {
        let cfg = AnalysisConfig {
            timeout_secs: 0,
            ..AnalysisConfig::default()
        };
        assert!(cfg.budget().check("x").is_ok());
    }
}
