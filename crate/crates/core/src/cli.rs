//! The `sdcode` command line.
//!
//! Exit codes: 0 results, 1 valid run without results (or a failed check),
//! 2 usage or validation error, 3 runtime, I/O or malformed-file error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::code::{CodeType, LinearCode};
use crate::equivalence::{self, Deduper};
use crate::error::Error;
use crate::gamma::{build_tree, fmt_set};
use crate::gf2::BitMatrix;
use crate::mutable::MuTable;
use crate::neighbors::neighbors_through_kernel;
use crate::oracle;
use crate::persist::codefile::{self, CodeFileBlock, Saver};
use crate::persist::config::parse_config_unvalidated;
use crate::persist::logger::{ConsoleLogger, Level, Logger};
use crate::search::{self, Order, Search, SearchConfig, Target};

/// Environment variable naming the default directory for `search --save`.
pub const SAVE_DIR_ENV: &str = "SDCODE_SAVE_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_EMPTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sdcode", version, about = "Search and inspect binary self-dual codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for (n, k, d) codes of a given type.
    Search(SearchArgs),
    /// Print the table of admissible mu values.
    Mutable(TargetArgs),
    /// Print the partition tree of a matrix.
    Tree {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Build the two neighbors through the maximal doubly-even subcode.
    Neighbors {
        #[arg(long)]
        code: PathBuf,
        /// Also write the neighbors to DIR/neighbors.codes.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck self-duality, type and minimum distance against each header.
    Check {
        #[arg(long)]
        code: PathBuf,
    },
    /// Keep one representative per equivalence class of the codes in DIR.
    Dedupe {
        #[arg(long)]
        dir: PathBuf,
        /// Write representatives here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate ground-truth classes for small lengths.
    #[command(hide = true)]
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long = "type", value_parser = parse_type)]
        ty: Option<CodeType>,
        /// Cache directory for class representatives.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct TargetArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[arg(long = "type", value_parser = parse_type)]
    ty: CodeType,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long = "type", value_parser = parse_type)]
    ty: Option<CodeType>,
    /// JSON configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Stop after this many codes.
    #[arg(long)]
    limit: Option<u64>,
    /// Directory receiving found codes (default: $SDCODE_SAVE_DIR).
    #[arg(long)]
    save: Option<PathBuf>,
    #[arg(long, value_parser = parse_order)]
    order: Option<Order>,
    /// Largest weight of a full generator row.
    #[arg(long)]
    max_row_weight: Option<usize>,
    /// Only log errors.
    #[arg(long)]
    silent: bool,
    /// Also log every node and prune.
    #[arg(long, conflicts_with = "silent")]
    verbose: bool,
    /// Print one representative per equivalence class.
    #[arg(long)]
    dedupe: bool,
    /// Search starter subtrees in parallel.
    #[arg(long)]
    parallel: bool,
}

fn parse_type(s: &str) -> Result<CodeType, String> {
    s.parse::<CodeType>().map_err(|e| e.to_string())
}

fn parse_order(s: &str) -> Result<Order, String> {
    s.parse::<Order>().map_err(|e| e.to_string())
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Config { .. }
            | Error::InvalidParameters(_)
            | Error::Precondition(_)
            | Error::LengthMismatch { .. }
            | Error::DimensionGuard { .. } => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_RUNTIME,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        Command::Search(a) => cmd_search(a, out),
        Command::Mutable(t) => cmd_mutable(t, out),
        Command::Tree { matrix } => cmd_tree(&matrix, out),
        Command::Neighbors { code, out: dir } => cmd_neighbors(&code, dir.as_deref(), out),
        Command::Check { code } => cmd_check(&code, out),
        Command::Dedupe { dir, out: file } => cmd_dedupe(&dir, file.as_deref(), out),
        Command::Oracle { n, d, ty, cache } => cmd_oracle(n, d, ty, cache.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Merges the config file (if any) with flags; flags win.
fn effective_config(a: &SearchArgs) -> Result<SearchConfig, Failure> {
    let mut config = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::from(e).with_context(&path.display().to_string()))?;
            parse_config_unvalidated(&text)?
        }
        None => {
            let missing: Vec<&str> = [
                ("--n", a.n.is_none()),
                ("--k", a.k.is_none()),
                ("--d", a.d.is_none()),
                ("--type", a.ty.is_none()),
            ]
            .into_iter()
            .filter(|(_, m)| *m)
            .map(|(f, _)| f)
            .collect();
            if !missing.is_empty() {
                return Err(usage(format!(
                    "missing {} (or give --config)",
                    missing.join(", ")
                )));
            }
            SearchConfig::new(0, 0, 0, CodeType::TypeI)
        }
    };
    let t: &mut Target = &mut config.target;
    if let Some(n) = a.n {
        t.n = n;
    }
    if let Some(k) = a.k {
        t.k = k;
    }
    if let Some(d) = a.d {
        t.d = d;
    }
    if let Some(ty) = a.ty {
        t.ty = ty;
    }
    let s = &mut config.strategy;
    if let Some(m) = a.limit {
        s.limits.max_solutions = Some(m);
    }
    if let Some(o) = a.order {
        s.order = o;
    }
    if let Some(w) = a.max_row_weight {
        s.max_row_weight = Some(w);
    }
    if a.parallel {
        s.parallel = true;
    }
    if let Some(dir) = &a.save {
        config.sink.path = Some(dir.clone());
    } else if config.sink.path.is_none() {
        if let Some(dir) = std::env::var_os(SAVE_DIR_ENV).filter(|v| !v.is_empty()) {
            config.sink.path = Some(PathBuf::from(dir));
        }
    }
    if a.silent {
        config.sink.silent = true;
    }
    config.validate()?;
    Ok(config)
}

impl Failure {
    fn with_context(mut self, context: &str) -> Self {
        self.message = format!("{context}: {}", self.message);
        self
    }
}

fn summary(index: usize, code: &LinearCode) -> String {
    let rows: Vec<String> = code.generator().rows().iter().map(|r| r.to_string()).collect();
    format!(
        "code index={index} n={} k={} d={} type={} rows={}",
        code.n(),
        code.k(),
        code.min_distance().map_or("?".to_string(), |d| d.to_string()),
        code.classify_type().tag(),
        rows.join(",")
    )
}

fn cmd_search(a: SearchArgs, out: &mut dyn Write) -> Outcome {
    let config = effective_config(&a)?;
    let level = if config.sink.silent {
        Level::Error
    } else if a.verbose {
        Level::Debug
    } else {
        Level::Info
    };
    let logger: Arc<dyn Logger> = Arc::new(ConsoleLogger::new(level));
    let t = config.target;
    let mut saver = match &config.sink.path {
        Some(dir) => Some(Saver::create(dir, &Saver::file_name(t.n, t.k, t.d, t.ty))?),
        None => None,
    };

    let mut printed = 0usize;
    let report;
    if a.dedupe || config.strategy.parallel {
        let outcome = search::run_search_with_logger(&config, Arc::clone(&logger))?;
        report = outcome.report;
        let codes = if a.dedupe {
            equivalence::dedupe(outcome.codes)?
        } else {
            outcome.codes
        };
        for code in &codes {
            printed += 1;
            writeln!(out, "{}", summary(printed, code))?;
            if let Some(s) = saver.as_mut() {
                s.save(code)?;
            }
        }
    } else {
        let mut s = Search::with_logger(&config, Arc::clone(&logger))?;
        for code in s.by_ref() {
            printed += 1;
            writeln!(out, "{}", summary(printed, &code))?;
            if let Some(sv) = saver.as_mut() {
                sv.save(&code)?;
            }
        }
        if let Some(e) = s.take_error() {
            return Err(e.into());
        }
        report = s.report();
    }
    if a.dedupe {
        writeln!(out, "classes={printed}")?;
    }
    writeln!(out, "report {report}")?;
    Ok(if printed > 0 { EXIT_OK } else { EXIT_EMPTY })
}

fn cmd_mutable(t: TargetArgs, out: &mut dyn Write) -> Outcome {
    let table = MuTable::build(t.n, t.k, t.d, t.ty)?;
    write!(out, "{}", table.render())?;
    Ok(EXIT_OK)
}

fn malformed(path: &Path, line: usize, column: usize, message: String) -> Failure {
    Error::Parse {
        file: path.to_path_buf(),
        line,
        column,
        message,
    }
    .into()
}

/// Reads a bare 0/1 matrix; `#` comments and blank lines are skipped. A
/// code-file header line is skipped too.
fn read_matrix(path: &Path) -> Result<BitMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::from(e).with_context(&path.display().to_string()))?;
    let mut rows = Vec::new();
    let mut width = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("n=") {
            continue;
        }
        if let Some((pos, ch)) = line.char_indices().find(|&(_, c)| c != '0' && c != '1') {
            return Err(malformed(path, i + 1, pos + 1, format!("expected 0 or 1, found {ch:?}")));
        }
        if *width.get_or_insert(line.len()) != line.len() {
            return Err(malformed(
                path,
                i + 1,
                1,
                format!("row has length {}, expected {}", line.len(), width.unwrap()),
            ));
        }
        rows.push(line.parse().expect("validated row"));
    }
    let Some(width) = width else {
        return Err(malformed(path, 1, 1, "no matrix rows".into()));
    };
    Ok(BitMatrix::new(rows, width)?)
}

fn cmd_tree(path: &Path, out: &mut dyn Write) -> Outcome {
    let a = read_matrix(path)?;
    let tree = build_tree(&a)?;
    write!(out, "{tree}")?;
    let leaves: Vec<String> = tree.leaves().iter().map(|l| fmt_set(l)).collect();
    writeln!(out, "leaves: {}", leaves.join(" "))?;
    Ok(EXIT_OK)
}

fn first_block(path: &Path) -> Result<CodeFileBlock, Failure> {
    let mut blocks = codefile::load_blocks(path)?;
    if blocks.is_empty() {
        return Err(malformed(path, 1, 1, "no code block".into()));
    }
    Ok(blocks.swap_remove(0))
}

fn cmd_neighbors(path: &Path, dir: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let block = first_block(path)?;
    let pair = neighbors_through_kernel(&block.code)?;
    let verdict = if pair.parity_agrees() {
        match pair.neighbor_type() {
            CodeType::TypeII => "both neighbors are doubly-even",
            _ => "both neighbors are singly-even",
        }
    } else {
        "neighbors differ in parity"
    };
    let mut text = String::new();
    for (i, nb) in [&pair.n1, &pair.n2].into_iter().enumerate() {
        let mut b = CodeFileBlock::describe(nb);
        b.comments.push(format!("neighbor {}", i + 1));
        if i > 0 {
            text.push('\n');
        }
        text.push_str(&b.render());
    }
    write!(out, "{text}")?;
    writeln!(out, "# parity: {verdict}")?;
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("neighbors.codes"), &text)?;
    }
    Ok(if pair.parity_agrees() { EXIT_OK } else { EXIT_EMPTY })
}

fn cmd_check(path: &Path, out: &mut dyn Write) -> Outcome {
    let blocks = codefile::load_blocks(path)?;
    if blocks.is_empty() {
        return Err(malformed(path, 1, 1, "no code block".into()));
    }
    let mut all_ok = true;
    for b in &blocks {
        let c = &b.code;
        let d = c
            .min_distance()
            .ok_or(Error::DimensionGuard {
                k: c.k(),
                limit: crate::code::ENUMERATION_GUARD,
            })?;
        let actual = c.classify_type();
        let mut problems = Vec::new();
        if b.ty != CodeType::NotSelfDual && !c.is_self_dual() {
            problems.push("not self-dual".to_string());
        } else if actual != b.ty {
            problems.push(format!("type is {}", actual));
        }
        if d != b.d_claimed {
            problems.push(format!("d is {d}, header claims {}", b.d_claimed));
        }
        let what = match b.ty {
            CodeType::NotSelfDual => "linear".to_string(),
            ty => format!("self-dual, {ty}"),
        };
        if problems.is_empty() {
            writeln!(out, "{what}, d={}: OK", b.d_claimed)?;
        } else {
            all_ok = false;
            writeln!(out, "{what}, d={}: FAILED ({})", b.d_claimed, problems.join("; "))?;
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_EMPTY })
}

fn cmd_dedupe(dir: &Path, file: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Failure::from(e).with_context(&dir.display().to_string()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "codes"))
        .collect();
    paths.sort();
    let mut groups: Vec<((usize, usize), Deduper, Vec<LinearCode>)> = Vec::new();
    let mut total = 0usize;
    for p in &paths {
        for code in codefile::load_codes(p)? {
            total += 1;
            let shape = (code.n(), code.k());
            let idx = match groups.iter().position(|g| g.0 == shape) {
                Some(i) => i,
                None => {
                    groups.push((shape, Deduper::new(), Vec::new()));
                    groups.len() - 1
                }
            };
            let g = &mut groups[idx];
            if g.1.insert(&code)? {
                g.2.push(code);
            }
        }
    }
    let reps: Vec<LinearCode> = groups.into_iter().flat_map(|g| g.2).collect();
    match file {
        Some(f) => codefile::write_codes(f, &reps)?,
        None => {
            for (i, c) in reps.iter().enumerate() {
                codefile::save_code(c, &mut &mut *out, i == 0)?;
            }
        }
    }
    writeln!(out, "# codes={total} classes={}", reps.len())?;
    Ok(if reps.is_empty() { EXIT_EMPTY } else { EXIT_OK })
}

fn cmd_oracle(
    n: usize,
    d: Option<usize>,
    ty: Option<CodeType>,
    cache: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let classes = if n <= oracle::DIRECT_LIMIT {
        oracle::enumerate_all_self_dual(n)?.classes
    } else {
        oracle::neighbor_closure(n)?
    };
    if let Some(dir) = cache {
        oracle::save_classes(dir, n, &classes)?;
    }
    let total = classes.len();
    let kept: Vec<_> = classes
        .into_iter()
        .filter(|c| d.is_none_or(|d| c.min_distance >= d) && ty.is_none_or(|t| c.ty == t))
        .collect();
    for (i, c) in kept.iter().enumerate() {
        let mut b = CodeFileBlock::describe(&c.representative);
        b.comments.push(format!("class {} size={}", i + 1, c.size));
        if i > 0 {
            writeln!(out)?;
        }
        write!(out, "{}", b.render())?;
    }
    writeln!(
        out,
        "# n={n} classes={total} selected={} self_dual_codes={}",
        kept.len(),
        oracle::mass_formula(n)
    )?;
    Ok(if kept.is_empty() { EXIT_EMPTY } else { EXIT_OK })
}
