//! `algmat`: construct, validate and inspect the matroids of the library, and
//! run the verification pipeline.
//!
//! Exit codes: 0 success, 1 a property was verified false (a witness was
//! printed), 2 usage or parse error.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use algmat::constructions::{
    counterexample_rep, dowling_q3, dowling_rep_matrix, fano_nonfano, qnf_rep_matrix,
    reid_rep_matrix, FanoKind, GroupRep, GroupTable,
};
use algmat::derivation::{
    bounded_dependence, derivation_matroid, frobenius_shift, gradient_matrix, PolyAssignment,
};
use algmat::field::parse_field;
use algmat::matroid::{is_isomorphic, line_saturate, LineFamily, MatroidFile};
use algmat::multilinear::{matroid_from_klinear, search_rank3_rep, validate_klinear, Validity};
use algmat::verify::{verify_paper, VerifyOptions, DEFAULT_SEED};
use algmat::{FieldSpec, KLinearRep, Matroid, MultilinearError};

#[derive(Parser)]
#[command(
    name = "algmat",
    version,
    about = "Exact matroid constructions over finite fields"
)]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Dowling,
    Reid,
    Qnf,
    Fano,
    Nonfano,
    Counterexample,
}

#[derive(Subcommand)]
enum Command {
    /// Build a matroid and write its exchange and representation files.
    Construct {
        #[arg(value_enum)]
        target: Target,
        /// trivial, c<m>, cyclic(<m>), q8, or file:<path> (Dowling only).
        #[arg(long)]
        group: Option<String>,
        /// Characteristic of the Reid geometry.
        #[arg(long, default_value_t = 7)]
        p: u32,
        /// Block size of the Reid representation.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Field literal such as `GF(49)` or `GF(7^2; t^2+1)`.
        #[arg(long)]
        field: Option<String>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Check that a k-linear representation has integral rank everywhere.
    Validate {
        file: PathBuf,
        /// Override the block size in the file.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Rank of a set of labels (all elements if none are given).
    Rank {
        file: PathBuf,
        /// Labels, separately or comma-separated.
        #[arg(allow_hyphen_values = true)]
        labels: Vec<String>,
    },
    /// List the dependent triples.
    Triples { file: PathBuf },
    /// Decide isomorphism and print a bijection.
    Iso { first: PathBuf, second: PathBuf },
    /// Gradients and derivation matroid of a polynomial assignment.
    Derive {
        file: PathBuf,
        /// Frobenius shifts, one per element, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
        /// Search for an annihilating polynomial of at most this degree.
        #[arg(long)]
        annihilate: Option<u32>,
    },
    /// Saturate a line family, optionally merging points first.
    Saturate {
        file: PathBuf,
        /// Pair of labels `a,b` to identify; repeatable.
        #[arg(long = "merge")]
        merges: Vec<String>,
    },
    /// Exhaustive search for a rank-3 linear representation.
    SearchRep {
        file: PathBuf,
        #[arg(long)]
        field: String,
    },
    /// Run the fixed, numbered verification pipeline.
    VerifyPaper {
        /// Run only this check.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=11))]
        only: Option<u8>,
        /// Field for the 2-linearity check instead of GF(49).
        #[arg(long)]
        field: Option<String>,
        /// Include per-check timings.
        #[arg(long)]
        timings: bool,
    },
}

/// Failure before any property could be decided.
#[derive(Debug)]
struct UsageError(String);

impl<E: Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<bool, UsageError>;

/// Key-value report printed either as aligned text or as `key=value` lines.
struct Report {
    format: Format,
    out: String,
}

impl Report {
    fn new(format: Format) -> Self {
        Self {
            format,
            out: String::new(),
        }
    }

    fn kv(&mut self, key: &str, value: impl Display) {
        match self.format {
            Format::Text => self.out.push_str(&format!("{key}: {value}\n")),
            Format::Machine => self.out.push_str(&format!("{key}={value}\n")),
        }
    }

    /// Free text in text mode; skipped in machine mode.
    fn text(&mut self, s: &str) {
        if self.format == Format::Text {
            self.out.push_str(s);
            if !s.ends_with('\n') {
                self.out.push('\n');
            }
        }
    }

    fn print(&self) {
        print!("{}", self.out);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut report = Report::new(cli.format);
    let result = run(cli.command, cli.seed, &mut report);
    report.print();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, seed: u64, r: &mut Report) -> CmdResult {
    match command {
        Command::Construct {
            target,
            group,
            p,
            k,
            field,
            out,
        } => construct(target, group.as_deref(), p, k, field.as_deref(), &out, r),
        Command::Validate { file, k } => validate(&file, k, r),
        Command::Rank { file, labels } => {
            let m = load_matroid(&file)?;
            let labels: Vec<String> = labels
                .iter()
                .flat_map(|l| l.split(','))
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect();
            let rank = if labels.is_empty() {
                m.full_rank()
            } else {
                m.rank_of(&labels)?
            };
            r.kv("rank", rank);
            Ok(true)
        }
        Command::Triples { file } => {
            let m = load_matroid(&file)?;
            let triples = m.dependent_triple_labels();
            r.kv("count", triples.len());
            for t in &triples {
                r.kv("triple", t.join(","));
            }
            Ok(true)
        }
        Command::Iso { first, second } => {
            let (a, b) = (load_matroid(&first)?, load_matroid(&second)?);
            match is_isomorphic(&a, &b) {
                Some(bij) => {
                    r.kv("isomorphic", true);
                    let pairs: Vec<String> = bij
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| format!("{}->{}", a.ground().name(i), b.ground().name(j)))
                        .collect();
                    r.kv("bijection", pairs.join(","));
                    Ok(true)
                }
                None => {
                    r.kv("isomorphic", false);
                    Ok(false)
                }
            }
        }
        Command::Derive {
            file,
            shift,
            annihilate,
        } => derive(&file, shift.as_deref(), annihilate, r),
        Command::Saturate { file, merges } => saturate(&file, &merges, r),
        Command::SearchRep { file, field } => {
            let m = load_matroid(&file)?;
            let f = field_option(&field)?;
            match search_rank3_rep(&m, &f)? {
                Some(mat) => {
                    r.kv("representation", "found");
                    r.text(&mat.to_text());
                    if r.format == Format::Machine {
                        let rows: Vec<String> = (0..mat.rows())
                            .map(|i| {
                                (0..mat.cols())
                                    .map(|j| mat.get(i, j).to_string())
                                    .collect::<Vec<_>>()
                                    .join(",")
                            })
                            .collect();
                        r.kv("matrix", rows.join(";"));
                    }
                    Ok(true)
                }
                None => {
                    r.kv("representation", "none");
                    Ok(false)
                }
            }
        }
        Command::VerifyPaper {
            only,
            field,
            timings,
        } => {
            let field = field.as_deref().map(field_option).transpose()?;
            let report = verify_paper(&VerifyOptions {
                only: only.map(usize::from),
                field,
                seed,
            });
            r.out.push_str(&match r.format {
                Format::Text => report.to_text(timings),
                Format::Machine => report.to_machine(timings),
            });
            Ok(report.passed())
        }
    }
}

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

/// Parse errors are reported as `<path>:<line>:<column>: <message>`.
fn parsed<T>(path: &Path, r: Result<T, algmat::ParseError>) -> Result<T, UsageError> {
    r.map_err(|e| {
        UsageError(format!(
            "{}:{}:{}: {}",
            path.display(),
            e.line,
            e.column,
            e.kind
        ))
    })
}

/// Matroid from an exchange file, a k-linear representation or a polynomial
/// assignment, chosen by the first word of the file.
fn load_matroid(path: &Path) -> Result<Matroid, UsageError> {
    let text = read(path)?;
    match text.split_whitespace().next() {
        Some("matroid") => Ok(parsed(path, MatroidFile::parse(&text))?.to_matroid()?),
        Some("klinear") => {
            let rep = parsed(path, KLinearRep::parse(&text))?;
            Ok(matroid_from_klinear(rep)?)
        }
        Some("assignment") => Ok(derivation_matroid(&parsed(
            path,
            PolyAssignment::parse(&text),
        )?)),
        _ => Err(UsageError(format!(
            "{}:1:1: expected a `matroid`, `klinear` or `assignment` file",
            path.display()
        ))),
    }
}

fn write(dir: &Path, name: &str, text: &str, r: &mut Report) -> Result<(), UsageError> {
    fs::create_dir_all(dir).map_err(|e| UsageError(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    r.kv("wrote", path.display());
    Ok(())
}

fn summary(r: &mut Report, name: &str, elements: usize, rank: usize) {
    match r.format {
        Format::Text => r.text(&format!("{name}: {elements} elements, rank {rank}")),
        Format::Machine => {
            r.kv("name", name);
            r.kv("elements", elements);
            r.kv("rank", rank);
        }
    }
}

/// Field literal given on the command line.
fn field_option(text: &str) -> Result<FieldSpec, UsageError> {
    parse_field(text)
        .map_err(|e| UsageError(format!("--field `{text}`: column {}: {}", e.column, e.kind)))
}

fn group_option(spec: &str) -> Result<GroupTable, UsageError> {
    if let Some(path) = spec.strip_prefix("file:") {
        let path = Path::new(path);
        return parsed(path, GroupTable::parse(&read(path)?));
    }
    GroupTable::builtin(spec).ok_or_else(|| {
        UsageError(format!(
            "unknown group `{spec}` (expected trivial, c<m>, cyclic(<m>), q8 or file:<path>)"
        ))
    })
}

/// Smallest prime `p` with `m | p - 1`, so `GF(p)` has a primitive `m`-th root of unity.
fn prime_with_roots(m: u64) -> FieldSpec {
    (2..)
        .filter(|&p| (p - 1) % m == 0)
        .find_map(|p| FieldSpec::prime(p).ok())
        .expect("infinitely many primes are 1 mod m")
}

/// Fixed-point free representation of a builtin group: the quaternion
/// representation for `Q_8`, `g^a -> ζ^a` for cyclic groups.
fn builtin_rep(g: &GroupTable, field: Option<&FieldSpec>) -> Result<Option<GroupRep>, UsageError> {
    if *g == GroupTable::quaternion() {
        let f = field.cloned().unwrap_or_else(FieldSpec::gf49);
        return Ok(Some(GroupRep::quaternion(&f)?));
    }
    if *g == GroupTable::cyclic(g.len()) {
        let m = g.len() as u64;
        let f = field.cloned().unwrap_or_else(|| prime_with_roots(m));
        let zeta = f.root_of_unity(m)?;
        return Ok(Some(GroupRep::cyclic_diagonal(g.len(), &zeta, &[1])?));
    }
    Ok(None)
}

fn write_rep_outcome(
    name: &str,
    rep: KLinearRep,
    out: &Path,
    r: &mut Report,
) -> Result<Option<Matroid>, UsageError> {
    write(out, &format!("{name}.rep"), &rep.to_text(), r)?;
    match matroid_from_klinear(rep) {
        Ok(m) => Ok(Some(m)),
        Err(MultilinearError::InvalidRepresentation { k, subset, rank }) => {
            r.kv("valid", false);
            r.kv("witness", subset.join(","));
            r.kv("witness_rank", rank);
            r.kv("k", k);
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn write_matroid(name: &str, m: &Matroid, out: &Path, r: &mut Report) -> Result<(), UsageError> {
    write(
        out,
        &format!("{name}.matroid"),
        &MatroidFile::from_matroid(m).to_text(),
        r,
    )
}

fn construct(
    target: Target,
    group: Option<&str>,
    p: u32,
    k: usize,
    field: Option<&str>,
    out: &Path,
    r: &mut Report,
) -> CmdResult {
    let field = field.map(field_option).transpose()?;
    if group.is_some() && !matches!(target, Target::Dowling | Target::Qnf) {
        return Err(UsageError("--group applies to dowling and qnf only".into()));
    }
    let (name, m) = match target {
        Target::Dowling => {
            let g = group_option(group.unwrap_or("q8"))?;
            let m = dowling_q3(&g);
            write_matroid("dowling", &m, out, r)?;
            if let Some(rep) = builtin_rep(&g, field.as_ref())? {
                write(out, "dowling.rep", &dowling_rep_matrix(&rep)?.to_text(), r)?;
            } else if field.is_some() {
                return Err(UsageError("--field needs a builtin group".into()));
            }
            ("dowling", m)
        }
        Target::Qnf => {
            let g = group_option(group.unwrap_or("q8"))?;
            if g != GroupTable::quaternion() {
                return Err(UsageError("qnf is defined for the quaternion group".into()));
            }
            let f = field.unwrap_or_else(FieldSpec::gf49);
            let rep = qnf_rep_matrix(&GroupRep::quaternion(&f)?)?;
            match write_rep_outcome("qnf", rep, out, r)? {
                Some(m) => {
                    write_matroid("qnf", &m, out, r)?;
                    ("qnf", m)
                }
                None => return Ok(false),
            }
        }
        Target::Reid => {
            let f = match field {
                Some(f) => f,
                None => FieldSpec::prime(p as u64)?,
            };
            let rep = reid_rep_matrix(p, k, &f)?;
            match write_rep_outcome("reid", rep, out, r)? {
                Some(m) => {
                    write_matroid("reid", &m, out, r)?;
                    ("reid", m)
                }
                None => return Ok(false),
            }
        }
        Target::Fano | Target::Nonfano => {
            if field.is_some() {
                return Err(UsageError(
                    "--field does not apply to fano or nonfano".into(),
                ));
            }
            let (name, kind) = match target {
                Target::Fano => ("fano", FanoKind::Fano),
                _ => ("nonfano", FanoKind::NonFano),
            };
            let m = fano_nonfano(kind);
            write_matroid(name, &m, out, r)?;
            (name, m)
        }
        Target::Counterexample => {
            if field.is_some() {
                return Err(UsageError(
                    "--field does not apply to counterexample".into(),
                ));
            }
            // rank 6 exceeds the exchange format, so only the representation is written
            let rep = counterexample_rep();
            match write_rep_outcome("counterexample", rep, out, r)? {
                Some(m) => ("counterexample", m),
                None => return Ok(false),
            }
        }
    };
    summary(r, name, m.len(), m.full_rank());
    Ok(true)
}

fn validate(path: &Path, k: Option<usize>, r: &mut Report) -> CmdResult {
    let mut rep = parsed(path, KLinearRep::parse(&read(path)?))?;
    if let Some(k) = k.filter(|&k| k != rep.k()) {
        if k == 0 || rep.matrix().cols() % k != 0 {
            return Err(UsageError(format!(
                "--k {k} does not divide the {} columns",
                rep.matrix().cols()
            )));
        }
        let labels = algmat::GroundSet::numbered(rep.matrix().cols() / k);
        rep = KLinearRep::new(rep.matrix().clone(), k, labels)?;
    }
    match validate_klinear(&rep) {
        Validity::Valid => {
            r.kv("valid", true);
            Ok(true)
        }
        Validity::Invalid(w) => {
            r.kv("valid", false);
            r.kv("witness", rep.labels().labels_of(&w.subset).join(","));
            r.kv("witness_rank", w.rank);
            Ok(false)
        }
    }
}

fn derive(path: &Path, shift: Option<&str>, annihilate: Option<u32>, r: &mut Report) -> CmdResult {
    let mut a = parsed(path, PolyAssignment::parse(&read(path)?))?;
    if let Some(s) = shift {
        let shifts = s
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| {
                UsageError(format!(
                    "--shift expects comma-separated integers, got `{s}`"
                ))
            })?;
        a = frobenius_shift(&a, &shifts)?;
        for (name, f) in a.ground().names().iter().zip(a.images()) {
            r.kv(&format!("image.{name}"), f);
        }
    }
    let g = gradient_matrix(&a);
    let m = derivation_matroid(&a);
    r.kv("gradients", &g);
    r.kv("rank", m.full_rank());
    let s = m.simplification_data();
    r.kv("loops", a.ground().labels_of(&s.loops).join(","));
    let parallel: Vec<String> = s
        .nontrivial_classes()
        .map(|c| a.ground().labels_of(c).join(","))
        .collect();
    r.kv("parallel", parallel.join(";"));
    let triples: Vec<String> = m
        .dependent_triple_labels()
        .iter()
        .map(|t| t.join(","))
        .collect();
    r.kv("triples", triples.join(";"));
    if let Some(d) = annihilate {
        match bounded_dependence(a.images(), d)? {
            Some(p) => r.kv("annihilator", p.display_with("Y")),
            None => r.kv("annihilator", "none"),
        }
    }
    Ok(true)
}

fn saturate(path: &Path, merges: &[String], r: &mut Report) -> CmdResult {
    let fam = parsed(path, LineFamily::parse(&read(path)?))?;
    let pairs = merges
        .iter()
        .map(|m| {
            let (a, b) = m
                .split_once(',')
                .ok_or_else(|| UsageError(format!("--merge expects `a,b`, got `{m}`")))?;
            Ok((
                fam.points.index_of(a.trim())?,
                fam.points.index_of(b.trim())?,
            ))
        })
        .collect::<Result<Vec<_>, UsageError>>()?;
    let sat = line_saturate(&fam, &pairs);
    let classes: Vec<String> = sat
        .partition
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| fam.points.labels_of(c).join(","))
        .collect();
    r.kv("merged", classes.join(";"));
    r.kv("lines", sat.family.lines.len());
    for l in sat.family.line_labels() {
        r.kv("line", l.join(","));
    }
    Ok(true)
}
