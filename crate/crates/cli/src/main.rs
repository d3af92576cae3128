use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hermitian_sd::codeops::{
    enumerate_exhaustive, info_set_distance, min_distance_packed, truncated_distribution_info_set, CodeError, PackedCode,
    DEFAULT_BUDGET, EXTENDED_BUDGET,
};
use hermitian_sd::constructions::{ConstructionError, ConstructionTag};
use hermitian_sd::fixtures::{self, FixtureError};
use hermitian_sd::ring::{format_vector, parse_vector, RingId};
use hermitian_sd::search::{
    fixture_row_params, load_or_build_unitary, run_search, write_records, CodeParams, CodeRecord, Extension,
    SearchConfig, SearchError, VerifyOptions,
};
use hermitian_sd::{gray_map, Method, F4U};

#[derive(Parser)]
#[command(name = "hsd", version, about = "Hermitian self-dual codes over GF(4) and GF(4)+uGF(4)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rebuild and verify the rows of a shipped parameter table.
    VerifyTable(VerifyTableArgs),
    /// Seeded random search for codes reaching a target distance.
    Search(SearchArgs),
    /// Weight distribution of the quaternary image.
    Wdist(WdistArgs),
    /// Minimum distance of the quaternary image.
    Mindist(MindistArgs),
    /// Gray image of a GF(4)+uGF(4) vector.
    Gray {
        #[arg(long = "in", value_name = "VECTOR")]
        input: String,
    },
    /// Number of unitary λ-circulant matrices of order n.
    UnitaryCount {
        #[arg(long)]
        ring: RingId,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Check the self-duality conditions of a parameter set.
    CheckParams(CodeArgs),
}

#[derive(Args)]
struct VerifyTableArgs {
    /// Table id such as 38-1; omit together with --all to verify everything.
    #[arg(long, required_unless_present = "all")]
    id: Option<String>,
    #[arg(long, conflicts_with = "id")]
    all: bool,
    /// Only these row ids.
    #[arg(long, value_delimiter = ',')]
    rows: Option<Vec<usize>>,
    #[arg(long)]
    no_alpha: bool,
    #[arg(long)]
    extended: bool,
    /// Write one record per verified row.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    construction: ConstructionTag,
    #[arg(long, default_value = "f4")]
    ring: RingId,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    target_d: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Restrict λ to these symbols.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<char>>,
    /// Restrict μ to these symbols.
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<char>>,
    /// Base code for building_up: a record line or TABLE:ROW.
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    max_records: Option<usize>,
    #[arg(long)]
    no_alpha: bool,
    #[arg(long)]
    extended: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

/// A code given by a record line, a table row, or explicit parameters.
#[derive(Args)]
struct CodeArgs {
    #[arg(long, conflicts_with_all = ["fixture", "construction"])]
    record: Option<String>,
    /// TABLE:ROW, for example 26-2:1.
    #[arg(long, conflicts_with = "construction")]
    fixture: Option<String>,
    #[arg(long, requires = "vectors")]
    construction: Option<ConstructionTag>,
    #[arg(long, default_value = "f4")]
    ring: RingId,
    #[arg(long, default_value_t = '1')]
    lambda: char,
    #[arg(long, default_value_t = '1')]
    mu: char,
    /// Semicolon-separated vectors, for example "(5B6);(B68);(5C4)".
    #[arg(long)]
    vectors: Option<String>,
    #[arg(long, requires = "delta")]
    eps: Option<char>,
    #[arg(long, requires = "eps")]
    delta: Option<String>,
}

#[derive(Args)]
struct WdistArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Only weights up to this value.
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long)]
    extended: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    InfoSet,
    Exhaustive,
}

#[derive(Args)]
struct MindistArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum, default_value = "info-set")]
    method: MethodArg,
    #[arg(long)]
    extended: bool,
}

enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Failed(String),
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        let msg = e.to_string();
        match e {
            SearchError::ConfigInvalid(_)
            | SearchError::Params(_)
            | SearchError::Record { .. }
            | SearchError::Ring(_)
            | SearchError::Fixture(FixtureError::UnknownFixture(_)) => Failure::Usage(msg),
            SearchError::Construction(c) => match c {
                ConstructionError::ConditionsNotMet | ConstructionError::InputNotSelfDual => Failure::Failed(msg),
                _ => Failure::Usage(msg),
            },
            _ => Failure::Failed(msg),
        }
    }
}

impl From<CodeError> for Failure {
    fn from(e: CodeError) -> Self {
        Failure::Failed(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn budget(extended: bool) -> u128 {
    if extended {
        EXTENDED_BUDGET
    } else {
        DEFAULT_BUDGET
    }
}

fn fixture_ref(s: &str) -> Result<CodeParams, Failure> {
    let (id, row) = s
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("expected TABLE:ROW, got '{s}'")))?;
    let row: usize = row.parse().map_err(|_| Failure::Usage(format!("bad row '{row}'")))?;
    let fixture = fixtures::load(id).map_err(SearchError::from)?;
    let r = fixture
        .row(row)
        .ok_or_else(|| Failure::Usage(format!("table {id} has no row {row}")))?;
    Ok(fixture_row_params(&fixture, r)?)
}

fn record_params(line: &str) -> Result<CodeParams, Failure> {
    line.parse::<CodeRecord>()
        .map(|r| r.params)
        .map_err(|e| Failure::Usage(format!("bad record: {e}")))
}

impl CodeArgs {
    fn params(&self) -> Result<CodeParams, Failure> {
        if let Some(line) = &self.record {
            return record_params(line);
        }
        if let Some(f) = &self.fixture {
            return fixture_ref(f);
        }
        let (Some(construction), Some(vectors)) = (self.construction, &self.vectors) else {
            return Err(Failure::Usage("give --record, --fixture, or --construction with --vectors".into()));
        };
        let vectors: Vec<String> = vectors.split(';').map(|v| v.trim().to_string()).collect();
        let k = match construction {
            ConstructionTag::Thm1 => 1,
            ConstructionTag::Thm2 => vectors.len(),
            ConstructionTag::Thm3 => vectors.len().saturating_sub(1),
            ConstructionTag::BuildingUp => {
                return Err(Failure::Usage("pass the base construction together with --eps and --delta".into()))
            }
        };
        let n = vectors
            .last()
            .map_or(0, |v| v.trim_matches(|c| c == '(' || c == ')').chars().count());
        let (lambda, mu) = if construction == ConstructionTag::Thm3 { ('1', '1') } else { (self.lambda, self.mu) };
        let extension = match (self.eps, &self.delta) {
            (Some(eps), Some(delta)) => Some(Extension { eps, delta: delta.clone() }),
            _ => None,
        };
        Ok(CodeParams {
            construction,
            ring: self.ring,
            n,
            k,
            lambda,
            mu,
            vectors,
            extension,
        })
    }

    fn packed_image(&self) -> Result<PackedCode, Failure> {
        let p = self.params()?;
        let built = p.build()?;
        Ok(PackedCode::image_of(&built.image())?)
    }
}

fn verify_table_cmd(a: &VerifyTableArgs) -> Outcome {
    let opts = VerifyOptions {
        alpha: !a.no_alpha,
        extended: a.extended,
    };
    let ids: Vec<String> = match &a.id {
        Some(id) => vec![id.clone()],
        None => fixtures::fixture_ids().map(str::to_string).collect(),
    };
    let mut ok = true;
    let mut records = Vec::new();
    for id in &ids {
        let report = hermitian_sd::search::verify_table(id, a.rows.as_deref(), opts)?;
        if report.rows.is_empty() {
            return Err(Failure::Usage(format!("table {id} has none of the requested rows")));
        }
        println!("{report}");
        ok &= report.all_passed();
        if a.out.is_some() {
            let fixture = fixtures::load(id).map_err(SearchError::from)?;
            for r in report.rows.iter().filter(|r| r.passed()) {
                let (Some(row), Some(d)) = (fixture.row(r.id), r.d) else { continue };
                let params = fixture_row_params(&fixture, row)?;
                records.push(CodeRecord {
                    length: params.length(),
                    params,
                    d,
                    alpha: r.alpha,
                    seed: None,
                    candidate: None,
                });
            }
        }
    }
    if let Some(path) = &a.out {
        write_records(path, &records)?;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Failed("verification failed".into()))
    }
}

fn search_cmd(a: &SearchArgs) -> Outcome {
    let mut cfg = SearchConfig::new(a.construction, a.ring, a.n);
    cfg.k = a.k;
    cfg.target_d = a.target_d;
    cfg.budget = a.budget;
    cfg.seed = a.seed;
    cfg.workers = a.workers;
    cfg.lambdas = a.lambda.clone();
    cfg.mus = a.mu.clone();
    cfg.max_records = a.max_records;
    cfg.alpha = !a.no_alpha;
    cfg.extended = a.extended;
    cfg.cache_dir = a.cache_dir.clone();
    cfg.base = match &a.base {
        None => None,
        Some(b) if b.contains('=') => Some(record_params(b)?),
        Some(b) => Some(fixture_ref(b)?),
    };
    let out = run_search(&cfg)?;
    println!(
        "length={} target_d={} candidates={} self_dual={} records={}",
        cfg.length(),
        cfg.target(),
        out.candidates,
        out.self_dual,
        out.records.len()
    );
    for r in &out.records {
        println!("{r}");
    }
    if let Some(path) = &a.out {
        write_records(path, &out.records)?;
    }
    Ok(())
}

fn wdist_cmd(a: &WdistArgs) -> Outcome {
    let code = a.code.packed_image()?;
    let dist = match enumerate_exhaustive(&code, a.cutoff, budget(a.extended), None) {
        Ok(d) => d,
        Err(CodeError::BudgetExceeded { .. }) if a.cutoff.is_some() => {
            truncated_distribution_info_set(&code, a.cutoff.unwrap())?
        }
        Err(e) => return Err(e.into()),
    };
    println!("{dist}");
    Ok(())
}

fn mindist_cmd(a: &MindistArgs) -> Outcome {
    let code = a.code.packed_image()?;
    let d = match a.method {
        MethodArg::InfoSet => info_set_distance(&code, None)?.upper,
        MethodArg::Exhaustive => min_distance_packed(&code, Method::Exhaustive, budget(a.extended))?,
    };
    println!("{d}");
    Ok(())
}

fn gray_cmd(input: &str) -> Outcome {
    let v: Vec<F4U> = parse_vector(input).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{}", format_vector(&gray_map(&v)));
    Ok(())
}

fn check_params_cmd(a: &CodeArgs) -> Outcome {
    let p = a.params()?;
    let conditions = p.conditions()?;
    println!("{p}");
    println!("length={} conditions={conditions}", p.length());
    if !conditions {
        return Err(Failure::Failed("self-duality conditions do not hold".into()));
    }
    let built = p.build()?;
    let self_dual = built.self_dual();
    println!("self_dual={self_dual}");
    if self_dual {
        Ok(())
    } else {
        Err(Failure::Failed("the generator is not self-dual".into()))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::VerifyTable(a) => verify_table_cmd(&a),
        Command::Search(a) => search_cmd(&a),
        Command::Wdist(a) => wdist_cmd(&a),
        Command::Mindist(a) => mindist_cmd(&a),
        Command::Gray { input } => gray_cmd(&input),
        Command::UnitaryCount { ring, n, cache_dir } => {
            let t = load_or_build_unitary(ring, n, cache_dir.as_deref())?;
            println!("{}", t.total());
            Ok(())
        }
        Command::CheckParams(a) => check_params_cmd(&a),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
