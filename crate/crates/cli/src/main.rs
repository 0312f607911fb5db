//! `flpc`: compile layout specifications, check them, and query the
//! layout model.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flp_core::arith::ArchConfig;
use flp_core::diag::{Diagnostic, Severity};
use flp_core::model::{count_layouts, enumerate_layer, DeadBranchOptions, LayerQuery};
use flp_core::pipeline::{run, Goal, Outcome, PipelineOptions};

const EXIT_ERRORS: u8 = 1;
const EXIT_STRICT: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "flpc", version, about = "Compiler for .flp memory-layout specifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate the Rust interface and the interface dump.
    Compile(CompileArgs),
    /// Run every check, including dead-branch analysis, and print diagnostics.
    Check(Common),
    /// Print every layout of a layer at a size, one per line: the tree,
    /// followed by the union branches taken when there are any.
    Enumerate(QueryArgs),
    /// Print the number of layouts of a layer at a size.
    Count(QueryArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Input specification.
    input: PathBuf,
    /// Bytes per machine word.
    #[arg(long, default_value_t = 8)]
    word_bytes: u64,
    /// Bytes per page.
    #[arg(long, default_value_t = 4096)]
    page_bytes: u64,
    /// Treat warnings as failures (exit status 2).
    #[arg(long)]
    strict: bool,
    /// Largest layer size, in bytes, that dead-branch analysis explores exactly.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// Rust source and JSON dump.
    All,
    /// Rust source only.
    #[value(alias = "backend")]
    Rust,
    /// JSON dump only.
    Dump,
}

#[derive(Args, Debug)]
struct CompileArgs {
    #[command(flatten)]
    common: Common,
    /// Output path. Defaults to the input path with a `.rs` extension (or
    /// `.json` for `--emit dump`); with `--emit all` the dump goes next to
    /// it with a `.json` extension.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Emit::All)]
    emit: Emit,
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[command(flatten)]
    common: Common,
    /// Layer to query; nested layers are found by name.
    #[arg(long)]
    layer: String,
    /// Size in bytes.
    #[arg(long)]
    size: u64,
    /// Start address.
    #[arg(long, default_value_t = 0)]
    addr: u64,
    /// Fix a formal of the layer, as `name=value`. Repeatable.
    #[arg(long = "bind", value_parser = parse_binding)]
    bindings: Vec<(String, u64)>,
}

fn parse_binding(s: &str) -> Result<(String, u64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.trim().parse::<u64>().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Per-invocation state: the input name for diagnostics.
struct Session<'a> {
    common: &'a Common,
    file: String,
}

impl<'a> Session<'a> {
    fn new(common: &'a Common) -> Self {
        Session { common, file: common.input.display().to_string() }
    }

    fn report(&self, diags: &[Diagnostic]) {
        let mut err = io::stderr().lock();
        for d in diags {
            let _ = writeln!(err, "{}", d.render(&self.file));
        }
    }

    fn fail(&self, msg: impl std::fmt::Display, code: u8) -> ExitCode {
        eprintln!("{}: error: {msg}", self.file);
        ExitCode::from(code)
    }

    fn options(&self) -> Result<PipelineOptions, String> {
        let arch = ArchConfig::from_bytes(self.common.word_bytes, self.common.page_bytes).map_err(|e| e.to_string())?;
        let mut dead = DeadBranchOptions::default();
        if let Some(b) = self.common.budget {
            dead.cap = b;
        }
        Ok(PipelineOptions { arch, dead })
    }

    /// Reads the input and runs the pipeline. `Err` carries the exit status.
    fn pipeline(&self, goal: Goal) -> Result<(Outcome, PipelineOptions), ExitCode> {
        let opts = self.options().map_err(|e| self.fail(e, EXIT_ERRORS))?;
        let src = fs::read_to_string(&self.common.input).map_err(|e| self.fail(e, EXIT_IO))?;
        let out = run(&src, goal, &opts);
        self.report(&out.diagnostics);
        if out.has_errors() {
            return Err(ExitCode::from(EXIT_ERRORS));
        }
        if self.common.strict && out.diagnostics.iter().any(|d| d.severity == Severity::Warning) {
            return Err(ExitCode::from(EXIT_STRICT));
        }
        Ok((out, opts))
    }
}

fn compile(a: &CompileArgs) -> ExitCode {
    let s = Session::new(&a.common);
    let (out, _) = match s.pipeline(Goal::Compile) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let (Some(rust), Some(iface)) = (out.rust, out.interface) else {
        return s.fail("code generation produced no output", EXIT_ERRORS);
    };
    let mut writes: Vec<(PathBuf, String)> = Vec::new();
    match a.emit {
        Emit::All | Emit::Rust => {
            let path = a.output.clone().unwrap_or_else(|| a.common.input.with_extension("rs"));
            if a.emit == Emit::All {
                writes.push((path.with_extension("json"), iface.to_json()));
            }
            writes.insert(0, (path, rust));
        }
        Emit::Dump => {
            let path = a.output.clone().unwrap_or_else(|| a.common.input.with_extension("json"));
            writes.push((path, iface.to_json()));
        }
    }
    for (path, text) in writes {
        if let Err(e) = fs::write(&path, text) {
            return s.fail(format_args!("cannot write {}: {e}", path.display()), EXIT_IO);
        }
    }
    ExitCode::SUCCESS
}

fn check(c: &Common) -> ExitCode {
    match Session::new(c).pipeline(Goal::Check) {
        Ok(_) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn query(a: &QueryArgs, enumerate: bool) -> ExitCode {
    let s = Session::new(&a.common);
    let (out, opts) = match s.pipeline(Goal::Frontend) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let Some(spec) = out.spec else {
        return s.fail("no specification", EXIT_ERRORS);
    };
    let q = a.bindings.iter().fold(LayerQuery::new(&a.layer, a.size).at(a.addr), |q, (k, v)| q.bind(k.clone(), *v));
    let mut stdout = io::stdout().lock();
    let written = if enumerate {
        match enumerate_layer(&spec, &q, &opts.arch) {
            Ok(set) => set.iter().try_for_each(|l| writeln!(stdout, "{l}")),
            Err(e) => return s.fail(e, EXIT_ERRORS),
        }
    } else {
        match count_layouts(&spec, &q, &opts.arch) {
            Ok(n) => writeln!(stdout, "{n}"),
            Err(e) => return s.fail(e, EXIT_ERRORS),
        }
    };
    match written.and_then(|()| stdout.flush()) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed pipe downstream is not a failure of the query.
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => s.fail(e, EXIT_IO),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERRORS } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match &cli.command {
        Command::Compile(a) => compile(a),
        Command::Check(c) => check(c),
        Command::Enumerate(a) => query(a, true),
        Command::Count(a) => query(a, false),
    }
}
