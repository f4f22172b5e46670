//! Command-line front end for `zskit`.
//!
//! [`parse_args`] turns an argument list into a validated [`Command`],
//! [`execute`] runs it against the library and [`emit_report`] renders the
//! outcome as JSON, CSV or text. [`run`] glues the three together and maps
//! every outcome onto the process exit code:
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | success                                   |
//! | 1    | no witness found, or verification failed  |
//! | 2    | usage error                               |
//! | 3    | budget exceeded                           |

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use zskit::central::CentralSurrogate;
use zskit::config::{
    build_configuration, panel_width, verify_certificate, BuildOptions, ChainSumReport,
    ConfigCertificate,
};
use zskit::domain::{parse_values, MAX_TERMS};
use zskit::sets::{
    pws_witness, syndetic_check, thick_witness, SetDescription, StructureKind, StructureWitness,
    SyndeticOutcome,
};
use zskit::zerosum::{
    davenport_constant, egz_compose, find_zero_sum_subset_bruteforce, find_zero_sum_subset_dp,
    partition_zero_sum, PartitionResult, Threshold,
};
use zskit::{Budget, Coloring, Error, InputSequence, Modulus, ZeroSumWitness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable that replaces the default enumeration budget.
pub const BUDGET_ENV: &str = "ZS_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError {
    pub message: String,
    /// Set for `--help` and `--version`, which print and exit 0.
    pub informational: bool,
}

impl UsageError {
    fn new(message: impl Into<String>) -> Self {
        UsageError {
            message: message.into(),
            informational: false,
        }
    }
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Dynamic program over (position, count, residue).
    Dp,
    /// Lexicographic enumeration of n-subsets.
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThresholdArg {
    Linear,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Thick,
    Syndetic,
    Pws,
}

/// Where a single list of values comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueSource {
    Inline(Vec<u64>),
    File(PathBuf),
}

/// Where the sequences of a configuration come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceSource {
    Inline(Vec<Vec<u64>>),
    Files(Vec<PathBuf>),
    /// `m` sequences `x_{i,j} = j i + (j - 1)`, `i >= 1`. Without a length
    /// the builder takes exactly what it needs and the verifier takes the
    /// lengths recorded in the certificate.
    Arith { m: usize, length: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColorSpec {
    Explicit { colors: Vec<usize>, r: Option<usize> },
    RoundRobin(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    EgzSolve {
        n: Modulus,
        values: ValueSource,
        method: Method,
        compose: Option<Modulus>,
    },
    EgzPartition {
        n: Modulus,
        values: ValueSource,
        coloring: ColorSpec,
        threshold: Threshold,
    },
    Davenport {
        n: Modulus,
    },
    SetsCheck {
        set: SetDescription,
        property: StructureKind,
        g: BTreeSet<u64>,
        f: BTreeSet<u64>,
        window: u64,
    },
    ConfigBuild {
        n: Modulus,
        surrogate: CentralSurrogate,
        levels: usize,
        sequences: SequenceSource,
        translation_bound: u64,
        out: Option<PathBuf>,
    },
    ConfigVerify {
        cert: PathBuf,
        sequences: SequenceSource,
        desc: Option<SetDescription>,
    },
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub action: Action,
    pub format: Option<Format>,
    pub budget: Budget,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self.action {
            Action::EgzSolve { .. } => "egz-solve",
            Action::EgzPartition { .. } => "egz-partition",
            Action::Davenport { .. } => "davenport",
            Action::SetsCheck { .. } => "sets-check",
            Action::ConfigBuild { .. } => "config-build",
            Action::ConfigVerify { .. } => "config-verify",
        }
    }
}

#[derive(Debug, Clone)]
struct List(Vec<u64>);

fn list(s: &str) -> Result<List, String> {
    parse_values(s).map(List).map_err(|e| e.to_string())
}

fn modulus(s: &str) -> Result<Modulus, String> {
    let n: u64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    Modulus::new(n).map_err(|_| "modulus must be at least 1".to_string())
}

fn surrogate(s: &str) -> Result<CentralSurrogate, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn set_desc(s: &str) -> Result<SetDescription, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn positive(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "zskit",
    version,
    about = "Zero-sum subsets, set structure and block configurations over the naturals"
)]
struct Cli {
    /// Output format [default: json for config-build, text otherwise]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Enumeration budget; overrides ZS_BUDGET
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    sub: Sub,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("input").required(true).args(["values", "file"])))]
struct ValueArgs {
    /// Comma or whitespace separated nonnegative integers
    #[arg(long, value_parser = list)]
    values: Option<List>,
    /// File of whitespace separated nonnegative integers
    #[arg(long)]
    file: Option<PathBuf>,
}

impl ValueArgs {
    fn source(self) -> ValueSource {
        match (self.values, self.file) {
            (Some(List(v)), _) => ValueSource::Inline(v),
            (None, Some(p)) => ValueSource::File(p),
            (None, None) => unreachable!("clap enforces the input group"),
        }
    }
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("sequences").required(true).multiple(false).args(["values", "file", "arith"])))]
struct SequenceArgs {
    /// One sequence per occurrence, in order j = 1, 2, ...
    #[arg(long, value_parser = list)]
    values: Vec<List>,
    /// One sequence file per occurrence, in order j = 1, 2, ...
    #[arg(long)]
    file: Vec<PathBuf>,
    /// Use m sequences x_{i,j} = j*i + (j - 1)
    #[arg(long, value_name = "M", value_parser = positive)]
    arith: Option<usize>,
    /// Terms per generated sequence (with --arith)
    #[arg(long, requires = "arith", value_parser = positive)]
    length: Option<usize>,
}

impl SequenceArgs {
    fn source(self) -> SequenceSource {
        if let Some(m) = self.arith {
            SequenceSource::Arith {
                m,
                length: self.length,
            }
        } else if !self.file.is_empty() {
            SequenceSource::Files(self.file)
        } else {
            SequenceSource::Inline(self.values.into_iter().map(|List(v)| v).collect())
        }
    }
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Lexicographically least n-subset summing to 0 mod n
    EgzSolve {
        #[arg(long, short = 'n', value_parser = modulus)]
        modulus: Modulus,
        #[command(flatten)]
        input: ValueArgs,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
        /// Solve mod m*n by composing mod m and mod n solutions
        #[arg(long, value_name = "M", value_parser = modulus, conflicts_with = "method")]
        compose: Option<Modulus>,
    },
    /// Monochromatic zero-sum n-subset of a colored list
    EgzPartition {
        #[arg(long, short = 'n', value_parser = modulus)]
        modulus: Modulus,
        #[command(flatten)]
        input: ValueArgs,
        /// Color of each value, in 1..=r
        #[arg(long, value_parser = list, conflicts_with = "round_robin")]
        colors: Option<List>,
        /// Number of colors r (defaults to the largest color used)
        #[arg(long, short = 'r', value_parser = positive)]
        r: Option<usize>,
        /// Color position p with (p mod r) + 1
        #[arg(long, value_name = "R", value_parser = positive)]
        round_robin: Option<usize>,
        #[arg(long, value_enum, default_value_t = ThresholdArg::Linear)]
        threshold: ThresholdArg,
    },
    /// Davenport constant of Z_n by exhaustive search
    Davenport {
        #[arg(long, short = 'n', value_parser = modulus)]
        modulus: Modulus,
    },
    /// Bounded thick / syndetic / piecewise syndetic check of a set
    SetsCheck {
        /// Set expression, e.g. "2N+0", "I2", "{1,2,3}", "2N+0 & I2"
        #[arg(long, value_parser = set_desc)]
        desc: SetDescription,
        #[arg(long, value_enum)]
        property: Property,
        /// Translation set G
        #[arg(long, value_parser = list)]
        g: Option<List>,
        /// Finite set F
        #[arg(long, value_parser = list)]
        f: Option<List>,
        /// Search bound for x, or covered window for syndetic
        #[arg(long, alias = "bound", default_value_t = 1000)]
        window: u64,
    },
    /// Build a block configuration and print or write its certificate
    ConfigBuild {
        #[arg(long, short = 'n', value_parser = modulus)]
        modulus: Modulus,
        /// "mod:d" or "ip:a1,a2,...[;g=span]"
        #[arg(long, value_parser = surrogate)]
        surrogate: CentralSurrogate,
        #[arg(long, short = 'L', value_parser = positive)]
        levels: usize,
        #[command(flatten)]
        input: SequenceArgs,
        /// Largest shift tried per level
        #[arg(long, default_value_t = 1 << 20)]
        translation_bound: u64,
        /// Write the certificate here instead of stdout
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Check a certificate against its sequences
    ConfigVerify {
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        input: SequenceArgs,
        /// Check chain sums against this set instead of the certificate's surrogate
        #[arg(long, value_parser = set_desc)]
        desc: Option<SetDescription>,
    },
}

/// Parses arguments (without the program name) using `ZS_BUDGET` from the
/// environment as the fallback budget.
pub fn parse_args<I, T>(argv: I) -> Result<Command, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var(BUDGET_ENV).ok();
    parse_args_with(argv, env.as_deref())
}

/// [`parse_args`] with an explicit value standing in for `ZS_BUDGET`.
pub fn parse_args_with<I, T>(argv: I, env_budget: Option<&str>) -> Result<Command, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("zskit")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| {
        use clap::error::ErrorKind;
        let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
        UsageError {
            message: e.render().to_string(),
            informational,
        }
    })?;

    let budget = match (cli.budget, env_budget) {
        (Some(b), _) => Budget(b),
        (None, Some(s)) => Budget(s.trim().parse().map_err(|_| {
            UsageError::new(format!("{BUDGET_ENV}: expected a nonnegative integer, got {s:?}"))
        })?),
        (None, None) => Budget::DEFAULT,
    };

    let action = match cli.sub {
        Sub::EgzSolve {
            modulus,
            input,
            method,
            compose,
        } => Action::EgzSolve {
            n: modulus,
            values: input.source(),
            method,
            compose,
        },
        Sub::EgzPartition {
            modulus,
            input,
            colors,
            r,
            round_robin,
            threshold,
        } => {
            let coloring = match (colors, round_robin) {
                (Some(List(c)), None) => ColorSpec::Explicit {
                    colors: c
                        .into_iter()
                        .map(|c| usize::try_from(c).unwrap_or(usize::MAX))
                        .collect(),
                    r,
                },
                (None, Some(r)) => ColorSpec::RoundRobin(r),
                _ => return Err(UsageError::new("egz-partition: give --colors or --round-robin")),
            };
            Action::EgzPartition {
                n: modulus,
                values: input.source(),
                coloring,
                threshold: match threshold {
                    ThresholdArg::Linear => Threshold::Linear,
                    ThresholdArg::Quadratic => Threshold::Quadratic,
                },
            }
        }
        Sub::Davenport { modulus } => Action::Davenport { n: modulus },
        Sub::SetsCheck {
            desc,
            property,
            g,
            f,
            window,
        } => {
            let g: BTreeSet<u64> = g.map(|List(v)| v.into_iter().collect()).unwrap_or_default();
            let f: BTreeSet<u64> = f.map(|List(v)| v.into_iter().collect()).unwrap_or_default();
            let (kind, need_g, need_f) = match property {
                Property::Thick => (StructureKind::Thick, false, true),
                Property::Syndetic => (StructureKind::Syndetic, true, false),
                Property::Pws => (StructureKind::PiecewiseSyndetic, true, true),
            };
            if need_g && g.is_empty() {
                return Err(UsageError::new(format!("--g: required and nonempty for --property {}", kind.as_str())));
            }
            if need_f && f.is_empty() {
                return Err(UsageError::new(format!("--f: required and nonempty for --property {}", kind.as_str())));
            }
            Action::SetsCheck {
                set: desc,
                property: kind,
                g,
                f,
                window,
            }
        }
        Sub::ConfigBuild {
            modulus,
            surrogate,
            levels,
            input,
            translation_bound,
            out,
        } => {
            let sequences = input.source();
            if let SequenceSource::Inline(v) = &sequences {
                if v.is_empty() {
                    return Err(UsageError::new("--values: at least one sequence required"));
                }
            }
            Action::ConfigBuild {
                n: modulus,
                surrogate,
                levels,
                sequences,
                translation_bound,
                out,
            }
        }
        Sub::ConfigVerify { cert, input, desc } => Action::ConfigVerify {
            cert,
            sequences: input.source(),
            desc,
        },
    };
    Ok(Command {
        action,
        format: cli.format,
        budget,
    })
}

/// Outcome of one subcommand, ready to render.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Report {
    Witness {
        n: Modulus,
        values: Vec<u64>,
        witness: Option<ZeroSumWitness>,
    },
    Partition {
        n: Modulus,
        values: Vec<u64>,
        result: PartitionResult,
    },
    Davenport {
        n: Modulus,
        d: u64,
    },
    Structure {
        kind: StructureKind,
        bound: u64,
        witness: Option<StructureWitness>,
        uncovered: Option<u64>,
    },
    Certificate(ConfigCertificate),
    Verification(ChainSumReport),
}

impl Report {
    /// Whether the outcome is positive: a witness exists or a check passed.
    pub fn is_success(&self) -> bool {
        match self {
            Report::Witness { witness, .. } => witness.is_some(),
            Report::Structure { witness, .. } => witness.is_some(),
            Report::Verification(r) => r.is_valid(),
            Report::Partition { .. } | Report::Davenport { .. } | Report::Certificate(_) => true,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Report::Certificate(_) => Format::Json,
            _ => Format::Text,
        }
    }
}

/// Failure while executing a command.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Library(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Library(e) if e.is_budget() => EXIT_BUDGET,
            Failure::Library(
                Error::PoolTooSmall { .. }
                | Error::ShiftOutsideStar { .. }
                | Error::Overflow(_)
                | Error::FingerprintMismatch { .. }
                | Error::Certificate(_),
            ) => EXIT_NEGATIVE,
            Failure::Library(_) => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

fn read_values(path: &PathBuf) -> Result<Vec<u64>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("--file {}: {e}", path.display())))?;
    parse_values(&text).map_err(|e| Failure::Usage(format!("--file {}: {e}", path.display())))
}

fn load(source: &ValueSource) -> Result<Vec<u64>, Failure> {
    match source {
        ValueSource::Inline(v) => Ok(v.clone()),
        ValueSource::File(p) => read_values(p),
    }
}

fn arithmetic(j: usize, len: usize) -> Vec<u64> {
    let j = j as u64;
    (1..=len as u64).map(|i| j * i + (j - 1)).collect()
}

fn load_sequences(
    source: &SequenceSource,
    default_len: impl Fn(usize) -> Result<usize, Failure>,
) -> Result<Vec<InputSequence>, Failure> {
    let raw: Vec<Vec<u64>> = match source {
        SequenceSource::Inline(v) => v.clone(),
        SequenceSource::Files(paths) => paths.iter().map(read_values).collect::<Result<_, _>>()?,
        SequenceSource::Arith { m, length } => (1..=*m)
            .map(|j| {
                let len = match length {
                    Some(l) => *l,
                    None => default_len(j)?,
                };
                if len > MAX_TERMS {
                    return Err(Failure::Usage(format!(
                        "--arith: {len} terms exceeds the limit of {MAX_TERMS}"
                    )));
                }
                Ok(arithmetic(j, len))
            })
            .collect::<Result<_, _>>()?,
    };
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(k, terms)| InputSequence::new(k + 1, terms))
        .collect())
}

/// Runs a command against the library. Side effects are limited to reading
/// input files and, for `config-build --out`, writing the certificate.
pub fn execute(cmd: &Command) -> Result<Report, Failure> {
    let budget = cmd.budget;
    match &cmd.action {
        Action::EgzSolve {
            n,
            values,
            method,
            compose,
        } => {
            let values = load(values)?;
            let (n, witness) = match compose {
                Some(m) => {
                    let w = egz_compose(&values, *m, *n, budget)?;
                    (w.modulus, Some(w))
                }
                None => {
                    let w = match method {
                        Method::Dp => find_zero_sum_subset_dp(&values, *n, budget)?,
                        Method::Brute => find_zero_sum_subset_bruteforce(&values, *n, budget)?,
                    };
                    (*n, w)
                }
            };
            Ok(Report::Witness { n, values, witness })
        }
        Action::EgzPartition {
            n,
            values,
            coloring,
            threshold,
        } => {
            let values = load(values)?;
            let coloring = match coloring {
                ColorSpec::Explicit { colors, r } => {
                    let r = r.unwrap_or_else(|| colors.iter().copied().max().unwrap_or(1).max(1));
                    Coloring::new(colors.clone(), r)?
                }
                ColorSpec::RoundRobin(r) => Coloring::round_robin(values.len(), *r)?,
            };
            let result = partition_zero_sum(&values, &coloring, *n, *threshold, budget)?;
            Ok(Report::Partition {
                n: *n,
                values,
                result,
            })
        }
        Action::Davenport { n } => Ok(Report::Davenport {
            n: *n,
            d: davenport_constant(*n, budget)?,
        }),
        Action::SetsCheck {
            set,
            property,
            g,
            f,
            window,
        } => {
            let (witness, uncovered) = match property {
                StructureKind::Thick => (thick_witness(set, f, *window)?, None),
                StructureKind::PiecewiseSyndetic => (pws_witness(set, g, f, *window)?, None),
                StructureKind::Syndetic => match syndetic_check(set, g, *window)? {
                    SyndeticOutcome::Covered(w) => (Some(w), None),
                    SyndeticOutcome::Uncovered { y } => (None, Some(y)),
                },
            };
            Ok(Report::Structure {
                kind: *property,
                bound: *window,
                witness,
                uncovered,
            })
        }
        Action::ConfigBuild {
            n,
            surrogate,
            levels,
            sequences,
            translation_bound,
            out,
        } => {
            let needed = panel_width(*n, surrogate)
                .and_then(|w| w.checked_mul(*levels))
                .ok_or(Error::Overflow("panel width times levels"))?;
            let seqs = load_sequences(sequences, |_| Ok(needed))?;
            let options = BuildOptions {
                translation_bound: *translation_bound,
                budget,
            };
            let cert = build_configuration(&seqs, *n, surrogate, *levels, options)?;
            if let Some(path) = out {
                std::fs::write(path, cert.to_json())
                    .map_err(|e| Failure::Usage(format!("--out {}: {e}", path.display())))?;
            }
            Ok(Report::Certificate(cert))
        }
        Action::ConfigVerify {
            cert,
            sequences,
            desc,
        } => {
            let text = std::fs::read_to_string(cert)
                .map_err(|e| Failure::Usage(format!("--cert {}: {e}", cert.display())))?;
            let cert = ConfigCertificate::from_json(&text)?;
            let seqs = load_sequences(sequences, |j| {
                cert.sequences
                    .get(j - 1)
                    .map(|s| s.length)
                    .ok_or_else(|| Failure::Library(Error::FingerprintMismatch {
                        seq: j,
                        detail: "certificate records fewer sequences".into(),
                    }))
            })?;
            let report = match desc {
                Some(set) => verify_certificate(&seqs, &cert, |x| set.contains(x), budget)?,
                None => {
                    let s = &cert.surrogate;
                    verify_certificate(&seqs, &cert, |x| s.base_contains(x), budget)?
                }
            };
            Ok(Report::Verification(report))
        }
    }
}

fn dec(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn dec_list<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(items.into_iter().map(dec).collect())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(out: &mut String, fields: &[&str]) {
    let row: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

fn joined<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn structure_json(kind: StructureKind, bound: u64, w: &Option<StructureWitness>, uncovered: Option<u64>) -> Value {
    let mut v = json!({
        "bound": dec(bound),
        "holds": w.is_some(),
        "kind": kind.as_str(),
    });
    if let Some(w) = w {
        v["finite"] = dec_list(&w.finite);
        v["translates"] = dec_list(&w.translates);
        v["translation"] = w.translation.map(dec).unwrap_or(Value::Null);
    }
    if let Some(y) = uncovered {
        v["uncovered"] = dec(y);
    }
    v
}

fn report_json(report: &ChainSumReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({"clause": v.clause(), "detail": v.to_string()}))
        .collect();
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| {
            json!({
                "chain": f.chain.iter().map(|(i, j)| dec_list([i, j])).collect::<Vec<_>>(),
                "sum": dec(f.sum),
            })
        })
        .collect();
    json!({
        "chains_expected": dec(report.chains_expected),
        "chains_visited": dec(report.chains_visited),
        "failures": failures,
        "valid": report.is_valid(),
        "violations": violations,
    })
}

/// Renders a report. JSON is canonical (sorted keys, integers as decimal
/// strings, one trailing newline); CSV starts with a header row; text is a
/// short human-readable summary.
pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    let mut out = String::new();
    match (report, format) {
        (Report::Certificate(cert), Format::Json) => return cert.to_json().into_bytes(),
        (_, Format::Json) => {
            let value = match report {
                Report::Witness { n, witness, .. } => json!({
                    "indices": witness.as_ref().map(|w| dec_list(&w.indices)).unwrap_or(Value::Null),
                    "modulus": dec(n.get()),
                }),
                Report::Partition { n, result, .. } => json!({
                    "color": dec(result.color),
                    "indices": dec_list(&result.witness.indices),
                    "modulus": dec(n.get()),
                }),
                Report::Davenport { n, d } => json!({
                    "davenport": dec(d),
                    "modulus": dec(n.get()),
                }),
                Report::Structure {
                    kind,
                    bound,
                    witness,
                    uncovered,
                } => structure_json(*kind, *bound, witness, *uncovered),
                Report::Verification(r) => report_json(r),
                Report::Certificate(_) => unreachable!(),
            };
            out = serde_json::to_string(&value).expect("json values serialize");
            out.push('\n');
        }
        (Report::Witness { n, values, witness }, Format::Csv) => {
            csv_row(&mut out, &["index", "value", "modulus"]);
            for &i in witness.iter().flat_map(|w| &w.indices) {
                csv_row(&mut out, &[&i.to_string(), &values[i].to_string(), &n.get().to_string()]);
            }
        }
        (Report::Witness { n, values, witness }, Format::Text) => match witness {
            Some(w) => {
                let _ = writeln!(
                    out,
                    "zero-sum subset mod {}: indices {}; values {}",
                    n.get(),
                    joined(&w.indices),
                    joined(&w.values(values))
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "no zero-sum subset of size n exists (n = {}, {} values)",
                    n.get(),
                    values.len()
                );
            }
        },
        (Report::Partition { n, values, result }, Format::Csv) => {
            csv_row(&mut out, &["color", "index", "value", "modulus"]);
            for &i in &result.witness.indices {
                csv_row(
                    &mut out,
                    &[&result.color.to_string(), &i.to_string(), &values[i].to_string(), &n.get().to_string()],
                );
            }
        }
        (Report::Partition { n, values, result }, Format::Text) => {
            let _ = writeln!(
                out,
                "color {} holds a zero-sum subset mod {}: indices {}; values {}",
                result.color,
                n.get(),
                joined(&result.witness.indices),
                joined(&result.witness.values(values))
            );
        }
        (Report::Davenport { n, d }, Format::Csv) => {
            csv_row(&mut out, &["modulus", "davenport"]);
            csv_row(&mut out, &[&n.get().to_string(), &d.to_string()]);
        }
        (Report::Davenport { n, d }, Format::Text) => {
            let _ = writeln!(out, "D(Z_{}) = {d}", n.get());
        }
        (
            Report::Structure {
                kind,
                bound,
                witness,
                uncovered,
            },
            Format::Csv,
        ) => {
            csv_row(&mut out, &["kind", "holds", "translation", "uncovered", "bound"]);
            let translation = witness
                .as_ref()
                .and_then(|w| w.translation)
                .map(|x| x.to_string())
                .unwrap_or_default();
            let uncovered = uncovered.map(|y| y.to_string()).unwrap_or_default();
            csv_row(
                &mut out,
                &[kind.as_str(), &witness.is_some().to_string(), &translation, &uncovered, &bound.to_string()],
            );
        }
        (
            Report::Structure {
                kind,
                bound,
                witness,
                uncovered,
            },
            Format::Text,
        ) => {
            let _ = match (kind, witness, uncovered) {
                (StructureKind::Syndetic, Some(w), _) => writeln!(
                    out,
                    "syndetic: every y in [1, {bound}] has y + t in the set for some t in {{{}}}",
                    joined(&w.translates)
                ),
                (StructureKind::Syndetic, None, Some(y)) => writeln!(
                    out,
                    "not syndetic within [1, {bound}]: y = {y} has no translate in the set"
                ),
                (_, Some(w), _) => writeln!(
                    out,
                    "{}: x = {} works for F = {{{}}}",
                    kind.as_str(),
                    w.translation.unwrap_or(0),
                    joined(&w.finite)
                ),
                (_, None, _) => writeln!(out, "{}: no x in [1, {bound}] works", kind.as_str()),
            };
        }
        (Report::Certificate(cert), Format::Csv) => {
            csv_row(&mut out, &["level", "seq", "index", "value", "z"]);
            for b in &cert.blocks {
                for (i, v) in b.indices.iter().zip(&b.values) {
                    csv_row(
                        &mut out,
                        &[&b.level.to_string(), &b.seq.to_string(), &i.to_string(), &v.to_string(), &b.z.to_string()],
                    );
                }
            }
        }
        (Report::Certificate(cert), Format::Text) => {
            let _ = writeln!(
                out,
                "configuration: m = {}, n = {}, L = {}, surrogate {}",
                cert.m,
                cert.n.get(),
                cert.levels,
                cert.surrogate
            );
            for b in &cert.blocks {
                let _ = writeln!(
                    out,
                    "level {} seq {}: indices {}; values {}; z = {}",
                    b.level,
                    b.seq,
                    joined(&b.indices),
                    joined(&b.values),
                    b.z
                );
            }
        }
        (Report::Verification(r), Format::Csv) => {
            csv_row(&mut out, &["kind", "clause", "detail"]);
            csv_row(
                &mut out,
                &["chains", "visited", &format!("{} / {}", r.chains_visited, r.chains_expected)],
            );
            for v in &r.violations {
                csv_row(&mut out, &["violation", v.clause(), &v.to_string()]);
            }
            for f in &r.failures {
                let detail = f.to_string();
                let detail = detail.trim_start_matches("chain-sum membership: ");
                csv_row(&mut out, &["failure", "chain-sum membership", detail]);
            }
        }
        (Report::Verification(r), Format::Text) => {
            let _ = writeln!(out, "chains visited: {} / {}", r.chains_visited, r.chains_expected);
            for v in &r.violations {
                let _ = writeln!(out, "{v}");
            }
            for f in &r.failures {
                let _ = writeln!(out, "{f}");
            }
            let verdict = if r.is_valid() { "valid" } else { "invalid" };
            let _ = writeln!(out, "certificate {verdict}");
        }
    }
    out.into_bytes()
}

/// Parses, executes and reports. Returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cmd = match parse_args(argv) {
        Ok(cmd) => cmd,
        Err(e) if e.informational => {
            let _ = stdout.write_all(e.message.as_bytes());
            return EXIT_OK;
        }
        Err(e) => {
            let _ = stderr.write_all(e.message.as_bytes());
            if !e.message.ends_with('\n') {
                let _ = writeln!(stderr);
            }
            return EXIT_USAGE;
        }
    };
    let report = match execute(&cmd) {
        Ok(r) => r,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}: {f}", cmd.name());
            return f.exit_code();
        }
    };
    let format = match (&report, &cmd.action, cmd.format) {
        (_, _, Some(f)) => f,
        (Report::Certificate(_), Action::ConfigBuild { out: Some(_), .. }, None) => Format::Text,
        (r, _, None) => r.default_format(),
    };
    if stdout.write_all(&emit_report(&report, format)).is_err() {
        return EXIT_USAGE;
    }
    if report.is_success() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}
