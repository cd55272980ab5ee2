//! `nhol`: counts `|T(G)|` for split metacyclic `p`-groups, sweeps parameter
//! ranges, lists admissible triplets and runs the verification battery.
//!
//! Exit codes: 0 success, 1 usage error, 2 disagreement or failed check,
//! 3 budget exceeded.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nhol_core::count::{self, Checker, CountReport, ParamsKey, SweepBound};
use nhol_core::gamma::{self, Lattice, RegularSubgroupReport};
use nhol_core::holomorph::{self, Method};
use nhol_core::oracle::OracleConfig;
use nhol_core::verify::{self, VerifyConfig, Violation};
use nhol_core::{AutStructure, Error, GroupParams, Regime};

const EXIT_USAGE: u8 = 1;
const EXIT_DISAGREE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "nhol",
    version,
    about = "Multiple holomorph quotients T(G) of split metacyclic p-groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Cap on candidate and filtered automorphism pairs (oracle) and on lattice size (enumeration)
    #[arg(long, default_value_t = 100_000_000, global = true)]
    budget: u64,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print progress to stderr
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// |T(G)| for one parameter set
    Count {
        #[command(flatten)]
        params: ParamArgs,
        /// formula, triplets, oracle or all; repeatable or comma-separated
        #[arg(long, value_delimiter = ',', default_values_t = vec![MethodArg::Formula, MethodArg::Triplets])]
        method: Vec<MethodArg>,
    },
    /// One row per (p,m,n,r) within the bounds
    Sweep {
        /// P:S includes every (p,m,n,r) with p = P and m + n <= S; repeatable
        #[arg(long = "bound", value_parser = parse_bound, default_values_t = vec![BoundArg(SweepBound { p: 3, max_m_plus_n: 5 })])]
        bounds: Vec<BoundArg>,
    },
    /// Admissible triplets with their invariants
    Triplets {
        #[command(flatten)]
        params: ParamArgs,
        /// Include triplets that are not admissible
        #[arg(long)]
        all: bool,
        /// Include the image table of pi_{a,b,d} for triplets with N_Gamma = G
        #[arg(long)]
        pi: bool,
    },
    /// Run the invariant battery and the oracle
    Verify {
        /// p,m,n,r; repeatable. Defaults to p = 3, m + n <= 5
        #[arg(long = "params", value_parser = parse_quadruple)]
        params: Vec<ParamsKey>,
        /// Skip the automorphism pair oracle
        #[arg(long)]
        no_oracle: bool,
        /// Also enumerate the open-regime cases up to 3^7 and 5^5
        #[arg(long)]
        open_regime: bool,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum MethodArg {
    Formula,
    Triplets,
    Oracle,
    All,
}

impl std::fmt::Display for MethodArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = self.to_possible_value().expect("no skipped variants");
        f.write_str(s.get_name())
    }
}

#[derive(Clone, Copy, Debug)]
struct BoundArg(SweepBound);

impl std::fmt::Display for BoundArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.0.p, self.0.max_m_plus_n)
    }
}

fn parse_bound(s: &str) -> Result<BoundArg, String> {
    let (p, mn) = s.split_once(':').ok_or("expected P:S")?;
    let p: u64 = p.parse().map_err(|e| format!("{e}"))?;
    if !nhol_core::arith::is_odd_prime(p) {
        return Err(format!("p must be an odd prime, got {p}"));
    }
    Ok(BoundArg(SweepBound {
        p,
        max_m_plus_n: mn.parse().map_err(|e| format!("{e}"))?,
    }))
}

fn parse_quadruple(s: &str) -> Result<ParamsKey, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [p, m, n, r] = parts.as_slice() else {
        return Err("expected p,m,n,r".into());
    };
    let key = ParamsKey {
        p: p.parse().map_err(|e| format!("{e}"))?,
        m: m.parse().map_err(|e| format!("{e}"))?,
        n: n.parse().map_err(|e| format!("{e}"))?,
        r: r.parse().map_err(|e| format!("{e}"))?,
    };
    GroupParams::new(key.p, key.m, key.n, key.r).map_err(|e| e.to_string())?;
    Ok(key)
}

#[derive(Serialize)]
struct Counts {
    preadmissible: Option<u64>,
    admissible: u64,
    admissible_iso: u64,
}

#[derive(Serialize)]
struct TripletRow {
    #[serde(flatten)]
    report: RegularSubgroupReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pi: Option<Vec<[u64; 2]>>,
}

#[derive(Serialize)]
struct Metadata {
    runtime_ms: u128,
    version: &'static str,
}

/// One parameter set; the unit of every JSON payload.
#[derive(Serialize)]
struct Record {
    params: ParamsKey,
    regime: Regime,
    counts: Counts,
    formula: Option<u64>,
    agreement: Option<bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    methods: BTreeMap<&'static str, u64>,
    triplets: Vec<TripletRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn metadata(start: Instant) -> Metadata {
    Metadata {
        runtime_ms: start.elapsed().as_millis(),
        version: env!("CARGO_PKG_VERSION"),
    }
}

fn record_from(rep: &CountReport) -> Record {
    Record {
        params: rep.params,
        regime: rep.regime,
        counts: Counts {
            preadmissible: Some(rep.n_preadmissible),
            admissible: rep.n_admissible,
            admissible_iso: rep.n_admissible_iso,
        },
        formula: rep.formula_value,
        agreement: rep.agreement,
        methods: BTreeMap::new(),
        triplets: Vec::new(),
        error: None,
    }
}

fn structure(p: ParamArgs) -> Result<AutStructure, Failure> {
    Ok(AutStructure::from_quadruple(p.p, p.m, p.n, p.r)?)
}

fn check_lattice_budget(aut: &AutStructure, budget: u64) -> Result<(), Failure> {
    let size = Lattice::of(&aut.params).size();
    if size > budget {
        return Err(Error::BudgetExceeded {
            what: "triplet lattice",
            needed: size as u128,
            budget: budget as u128,
        }
        .into());
    }
    Ok(())
}

fn oracle_config(budget: u64) -> OracleConfig {
    OracleConfig {
        max_aut_pairs: budget as u128,
        max_pair_ops: budget as u128,
    }
}

fn cmd_count(
    cli: &Cli,
    params: ParamArgs,
    methods: &[MethodArg],
) -> Result<(Vec<Record>, bool), Failure> {
    let aut = structure(params)?;
    check_lattice_budget(&aut, cli.budget)?;
    let all = methods.contains(&MethodArg::All);
    let wants = |m: MethodArg| all || methods.contains(&m);
    let rep = count::enumerate_counts(&aut, Checker::General)?;
    let mut rec = record_from(&rep);
    let cfg = oracle_config(cli.budget);
    if wants(MethodArg::Formula) {
        if let Some(f) = rep.formula_value {
            rec.methods.insert("formula", f);
        }
    }
    if wants(MethodArg::Triplets) {
        rec.methods.insert("triplets", rep.n_admissible_iso);
        if aut.params.regime() != Regime::Open {
            let fast = count::enumerate_counts(&aut, Checker::Fast)?;
            rec.methods.insert("triplets_fast", fast.n_admissible_iso);
        }
    }
    if wants(MethodArg::Oracle) {
        if cli.verbose > 0 {
            eprintln!("running automorphism pair oracle for {}", aut.params);
        }
        let order = holomorph::t_group_order(&aut, Method::Oracle, &cfg)?;
        rec.methods.insert("oracle", order);
    }
    let mut values = rec
        .methods
        .values()
        .copied()
        .chain(std::iter::once(rep.n_admissible_iso));
    let first = values.next();
    let agree = values.all(|v| Some(v) == first);
    rec.agreement = Some(agree);
    Ok((vec![rec], agree))
}

fn cmd_sweep(cli: &Cli, bounds: &[BoundArg]) -> (Vec<Record>, bool) {
    let bounds: Vec<SweepBound> = bounds.iter().map(|b| b.0).collect();
    let keys: Vec<ParamsKey> = count::sweep_params(&bounds)
        .into_iter()
        .filter(|k| {
            GroupParams::new(k.p, k.m, k.n, k.r)
                .map(|prm| Lattice::of(&prm).size() <= cli.budget)
                .unwrap_or(true)
        })
        .collect();
    let mut records = Vec::new();
    let mut agree = true;
    for item in count::sweep_keys(&keys) {
        match item.report {
            Ok(rep) => {
                agree &= rep.agreement != Some(false);
                records.push(record_from(&rep));
            }
            Err(e) => records.push(Record {
                params: item.params,
                regime: regime_of(item.params),
                counts: Counts {
                    preadmissible: None,
                    admissible: 0,
                    admissible_iso: 0,
                },
                formula: None,
                agreement: None,
                methods: BTreeMap::new(),
                triplets: Vec::new(),
                error: Some(e),
            }),
        }
    }
    (records, agree)
}

fn regime_of(k: ParamsKey) -> Regime {
    if k.m <= k.n {
        Regime::MLeN
    } else if k.n + k.r <= k.m {
        Regime::NLeMMinusR
    } else {
        Regime::Open
    }
}

fn cmd_triplets(cli: &Cli, params: ParamArgs, all: bool, pi: bool) -> Result<Vec<Record>, Failure> {
    let aut = structure(params)?;
    check_lattice_budget(&aut, cli.budget)?;
    let prm = &aut.params;
    if pi {
        prm.check_enumerable(nhol_core::group::DEFAULT_MAX_ELEMENTS)?;
    }
    let rep = count::enumerate_counts(&aut, Checker::General)?;
    let mut rec = record_from(&rep);
    for t in Lattice::of(prm).iter() {
        let report = gamma::report(&aut, t);
        if !all && !report.admissible {
            continue;
        }
        let pi_table = if pi && report.iso_to_g {
            let perm = holomorph::pi_map(&aut, t)?;
            Some(
                prm.elements()
                    .map(|g| {
                        let h = perm.image(prm, g);
                        [h.i, h.j]
                    })
                    .collect(),
            )
        } else {
            None
        };
        rec.triplets.push(TripletRow {
            report,
            pi: pi_table,
        });
    }
    Ok(vec![rec])
}

fn open_regime_cases() -> Vec<ParamsKey> {
    count::sweep_params(&[
        SweepBound {
            p: 3,
            max_m_plus_n: 7,
        },
        SweepBound {
            p: 5,
            max_m_plus_n: 5,
        },
    ])
    .into_iter()
    .filter(|k| regime_of(*k) == Regime::Open)
    .collect()
}

fn cmd_verify(
    cli: &Cli,
    params: &[ParamsKey],
    no_oracle: bool,
    open_regime: bool,
    inject_fault: bool,
) -> (Vec<Record>, Vec<Violation>) {
    let mut keys = if params.is_empty() {
        verify::default_suite()
    } else {
        params.to_vec()
    };
    if open_regime {
        keys.extend(open_regime_cases());
        keys.sort();
        keys.dedup();
    }
    let cfg = VerifyConfig {
        params: keys,
        oracle: !no_oracle,
        oracle_cfg: oracle_config(cli.budget),
        inject_fault,
    };
    if cli.verbose > 0 {
        eprintln!("verifying {} parameter sets", cfg.params.len());
    }
    let report = verify::run(&cfg);
    let records = report
        .cases
        .iter()
        .map(|c| {
            let mut methods = BTreeMap::new();
            methods.insert("triplets", c.n_admissible_iso);
            if let Some(f) = c.formula {
                methods.insert("formula", f);
            }
            if let Some(o) = c.oracle_iso {
                methods.insert("oracle", o);
            }
            let first = c.n_admissible_iso;
            Record {
                params: c.params,
                regime: c.regime,
                counts: Counts {
                    preadmissible: None,
                    admissible: c.n_admissible,
                    admissible_iso: c.n_admissible_iso,
                },
                formula: c.formula,
                agreement: Some(methods.values().all(|&v| v == first)),
                methods,
                triplets: Vec::new(),
                error: None,
            }
        })
        .collect();
    (records, report.violations)
}

fn fmt_opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "n/a".into())
}

fn write_csv(records: &[Record], w: impl Write) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "p",
        "m",
        "n",
        "r",
        "regime",
        "n_pre",
        "n_adm",
        "n_iso",
        "formula",
        "agreement",
    ])?;
    for rec in records {
        out.write_record([
            rec.params.p.to_string(),
            rec.params.m.to_string(),
            rec.params.n.to_string(),
            rec.params.r.to_string(),
            rec.regime.to_string(),
            fmt_opt(rec.counts.preadmissible),
            rec.counts.admissible.to_string(),
            rec.counts.admissible_iso.to_string(),
            fmt_opt(rec.formula),
            fmt_opt(rec.agreement),
        ])?;
    }
    out.flush()
}

fn write_table(records: &[Record], violations: &[Violation], mut w: impl Write) -> io::Result<()> {
    writeln!(
        w,
        "{:>3} {:>2} {:>2} {:>2}  {:<15} {:>7} {:>7} {:>7} {:>8}  {:<9} methods",
        "p", "m", "n", "r", "regime", "pre", "adm", "iso", "formula", "agreement"
    )?;
    for rec in records {
        let methods: Vec<String> = rec
            .methods
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        writeln!(
            w,
            "{:>3} {:>2} {:>2} {:>2}  {:<15} {:>7} {:>7} {:>7} {:>8}  {:<9} {}",
            rec.params.p,
            rec.params.m,
            rec.params.n,
            rec.params.r,
            rec.regime.to_string(),
            fmt_opt(rec.counts.preadmissible),
            rec.counts.admissible,
            rec.counts.admissible_iso,
            fmt_opt(rec.formula),
            fmt_opt(rec.agreement),
            rec.error.clone().unwrap_or_else(|| methods.join(" "))
        )?;
        if !rec.triplets.is_empty() {
            writeln!(
                w,
                "  {:<16} {:>3} {:>6} {:>5} {:>4}",
                "triplet", "adm", "s", "j", "iso"
            )?;
            for t in &rec.triplets {
                let r = &t.report;
                writeln!(
                    w,
                    "  {:<16} {:>3} {:>6} {:>5} {:>4}",
                    r.triplet.to_string(),
                    if r.admissible { "yes" } else { "no" },
                    fmt_opt(r.s),
                    fmt_opt(r.j),
                    if r.iso_to_g { "yes" } else { "no" }
                )?;
                if let Some(pi) = &t.pi {
                    let cells: Vec<String> = pi.iter().map(|[i, j]| format!("({i},{j})")).collect();
                    writeln!(w, "    pi: {}", cells.join(" "))?;
                }
            }
        }
    }
    for v in violations {
        let k = v.params;
        writeln!(
            w,
            "VIOLATION ({},{},{},{}) {}: {}",
            k.p, k.m, k.n, k.r, v.check, v.detail
        )?;
    }
    Ok(())
}

fn emit(
    cli: &Cli,
    payload: Payload,
    records: &[Record],
    violations: &[Violation],
) -> Result<(), Failure> {
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match cli.format {
        Format::Json => {
            let text = match payload {
                Payload::Single(s) => serde_json::to_string_pretty(&s),
                Payload::Sweep(s) => serde_json::to_string_pretty(&s),
                Payload::Verify(v) => serde_json::to_string_pretty(&v),
            }
            .map_err(|e| Failure {
                code: EXIT_USAGE,
                message: e.to_string(),
            })?;
            writeln!(sink, "{text}")?;
        }
        Format::Csv => write_csv(records, &mut sink)?,
        Format::Table => write_table(records, violations, &mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

enum Payload<'a> {
    Single(SingleOutputRef<'a>),
    Sweep(SweepOutputRef<'a>),
    Verify(VerifyOutputRef<'a>),
}

#[derive(Serialize)]
struct SingleOutputRef<'a> {
    #[serde(flatten)]
    record: &'a Record,
    metadata: Metadata,
}

#[derive(Serialize)]
struct SweepOutputRef<'a> {
    records: &'a [Record],
    metadata: Metadata,
}

#[derive(Serialize)]
struct VerifyOutputRef<'a> {
    records: &'a [Record],
    violations: &'a [Violation],
    metadata: Metadata,
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let start = Instant::now();
    match &cli.command {
        Command::Count { params, method } => {
            let (records, agree) = cmd_count(cli, *params, method)?;
            let payload = Payload::Single(SingleOutputRef {
                record: &records[0],
                metadata: metadata(start),
            });
            emit(cli, payload, &records, &[])?;
            Ok(if agree { 0 } else { EXIT_DISAGREE })
        }
        Command::Sweep { bounds } => {
            let (records, agree) = cmd_sweep(cli, bounds);
            let payload = Payload::Sweep(SweepOutputRef {
                records: &records,
                metadata: metadata(start),
            });
            emit(cli, payload, &records, &[])?;
            Ok(if agree { 0 } else { EXIT_DISAGREE })
        }
        Command::Triplets { params, all, pi } => {
            let records = cmd_triplets(cli, *params, *all, *pi)?;
            let payload = Payload::Single(SingleOutputRef {
                record: &records[0],
                metadata: metadata(start),
            });
            emit(cli, payload, &records, &[])?;
            Ok(0)
        }
        Command::Verify {
            params,
            no_oracle,
            open_regime,
            inject_fault,
        } => {
            let (records, violations) =
                cmd_verify(cli, params, *no_oracle, *open_regime, *inject_fault);
            let budget_hit = violations.iter().any(|v| v.detail.contains("budget is"));
            let payload = Payload::Verify(VerifyOutputRef {
                records: &records,
                violations: &violations,
                metadata: metadata(start),
            });
            emit(cli, payload, &records, &violations)?;
            Ok(if violations.is_empty() {
                0
            } else if budget_hit && violations.iter().all(|v| v.detail.contains("budget is")) {
                EXIT_BUDGET
            } else {
                EXIT_DISAGREE
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
