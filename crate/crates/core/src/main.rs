use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use daqforge::checker::{load_table, run_suite, TableFormat};
use daqforge::codegen::{generate_all, CodegenError, TemplateSet};
use daqforge::diag::{has_errors, sort_diagnostics, Diagnostic};
use daqforge::diagram::to_dot;
use daqforge::dsl::{export_xmi, import_xmi, parse_model_with_spans, pretty_print, SourceMap};
use daqforge::mapper::{collect_suites, mapper_table, SuiteBundle};
use daqforge::model::{ArchitectureModel, Level};
use daqforge::validate::validate_with_spans;

const OK: u8 = 0;
const CHECK_FAILED: u8 = 1;
const INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "daqforge", version, about = "Data-architecture models to data-quality checks")]
struct Cli {
    /// Print diagnostics as JSON lines
    #[arg(long, global = true)]
    json: bool,
    /// Suppress warnings and status messages
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model
    Check { file: PathBuf },
    /// Generate check scripts and a manifest
    Gen {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Directory whose templates override the built-in ones
        #[arg(long, env = "DAQFORGE_TEMPLATES")]
        templates: Option<PathBuf>,
    },
    /// Run a source's checks natively against a CSV or JSON file
    Run {
        file: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        data: PathBuf,
    },
    /// Render a DOT diagram
    Dot {
        file: PathBuf,
        /// Defaults to the model's declared level
        #[arg(long, value_enum)]
        level: Option<LevelArg>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Convert an XMI document to model text
    ImportXmi {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Convert model text to an XMI document
    ExportXmi {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the dimension to expectation table
    Mapper,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Hla,
    Lla,
}

struct Ui {
    json: bool,
    quiet: bool,
}

impl Ui {
    fn diagnostics(&self, file: &Path, diags: &[Diagnostic]) {
        let name = file.display().to_string();
        let mut err = std::io::stderr().lock();
        for d in diags {
            if self.quiet && !d.is_error() {
                continue;
            }
            let line = if self.json {
                d.to_json(&name).to_string()
            } else {
                d.render(&name)
            };
            let _ = writeln!(err, "{line}");
        }
    }

    fn status(&self, msg: impl std::fmt::Display) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }

    fn fail(&self, file: &Path, d: Diagnostic) -> u8 {
        self.diagnostics(file, &[d]);
        INVALID
    }
}

/// Writes `contents` to `out`, or to stdout when no path is given.
fn emit(out: Option<&Path>, contents: &str) -> Result<(), Diagnostic> {
    match out {
        Some(p) => fs::write(p, contents)
            .map_err(|e| Diagnostic::error("E001", format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Diagnostic::error("E001", format!("cannot write to stdout: {e}")))
        }
    }
}

fn read(file: &Path) -> Result<String, Diagnostic> {
    fs::read_to_string(file).map_err(|e| Diagnostic::error("E001", format!("cannot read {}: {e}", file.display())))
}

fn is_xmi(file: &Path) -> bool {
    file.extension().is_some_and(|e| e.eq_ignore_ascii_case("xmi"))
}

/// Reads a model from `.daml` text or XMI. Warnings are printed; errors
/// end the command.
fn load(ui: &Ui, file: &Path, xmi: bool) -> Result<(ArchitectureModel, SourceMap), u8> {
    let text = read(file).map_err(|d| ui.fail(file, d))?;
    let loaded = if xmi {
        import_xmi(&text).map(|(m, warnings)| {
            ui.diagnostics(file, &warnings);
            (m, SourceMap::default())
        })
    } else {
        parse_model_with_spans(&text)
    };
    loaded.map_err(|diags| {
        ui.diagnostics(file, &diags);
        INVALID
    })
}

/// Loads and validates; exits with status 2 when the model has errors.
fn load_valid(ui: &Ui, file: &Path) -> Result<ArchitectureModel, u8> {
    let (model, spans) = load(ui, file, is_xmi(file))?;
    let diags = validate_with_spans(&model, &spans);
    ui.diagnostics(file, &diags);
    if has_errors(&diags) {
        return Err(INVALID);
    }
    Ok(model)
}

fn check(ui: &Ui, file: &Path) -> Result<u8, u8> {
    let model = load_valid(ui, file)?;
    ui.status(format!("{}: {} model {} is valid", file.display(), model.level, model.name));
    Ok(OK)
}

fn gen(ui: &Ui, file: &Path, out: &Path, templates: Option<&Path>) -> Result<u8, u8> {
    let model = load_valid(ui, file)?;
    let set = match templates {
        Some(dir) => TemplateSet::load(dir),
        None => Ok(TemplateSet::builtin()),
    };
    let report = set.and_then(|set| generate_all(&model, out, &set)).map_err(|e| match e {
        CodegenError::Invalid(diags) => {
            ui.diagnostics(file, &diags);
            INVALID
        }
        other => ui.fail(file, Diagnostic::error("G001", other.to_string())),
    })?;
    for path in &report.written {
        ui.status(format!("wrote {}", path.display()));
    }
    ui.status(format!(
        "{} script(s), {} file(s) changed",
        report.manifest.files.len(),
        report.written.len()
    ));
    Ok(OK)
}

fn run(ui: &Ui, file: &Path, source: &str, data: &Path) -> Result<u8, u8> {
    let model = load_valid(ui, file)?;
    let Some(binding) = model.source(source) else {
        return Err(ui.fail(file, Diagnostic::error("M004", format!("no source named {source}"))));
    };
    let bundles = collect_suites(&model).map_err(|diags| {
        ui.diagnostics(file, &diags);
        INVALID
    })?;
    let bundle = bundles
        .into_iter()
        .find(|b| b.source.name == source)
        .unwrap_or_else(|| SuiteBundle::empty(binding.clone()));
    let format = TableFormat::from_source_kind(binding.kind)
        .or_else(|| TableFormat::from_extension(data))
        .ok_or_else(|| {
            ui.fail(
                data,
                Diagnostic::error(
                    "C002",
                    format!("source {source} is {}; data file needs a .csv or .json extension", binding.kind),
                ),
            )
        })?;
    let dataset = load_table(data, format, &binding.columns).map_err(|d| ui.fail(data, d))?;
    ui.diagnostics(data, &dataset.warnings());
    let report = run_suite(&bundle, &dataset).map_err(|mut diags| {
        sort_diagnostics(&mut diags);
        ui.diagnostics(file, &diags);
        INVALID
    })?;
    emit(None, &report.to_json()).map_err(|d| ui.fail(file, d))?;
    ui.status(format!(
        "{} of {} expectation(s) failed",
        report.failures(),
        report.results.len()
    ));
    Ok(if report.success { OK } else { CHECK_FAILED })
}

fn dot(ui: &Ui, file: &Path, level: Option<LevelArg>, out: Option<&Path>) -> Result<u8, u8> {
    let model = load_valid(ui, file)?;
    let level = match level {
        Some(LevelArg::Hla) => Level::Hla,
        Some(LevelArg::Lla) => Level::Lla,
        None => model.level,
    };
    let text = to_dot(&model, level).map_err(|d| ui.fail(file, d))?;
    emit(out, &text).map_err(|d| ui.fail(file, d))?;
    Ok(OK)
}

fn convert(ui: &Ui, file: &Path, out: Option<&Path>, to_xmi: bool) -> Result<u8, u8> {
    let (model, _) = load(ui, file, !to_xmi)?;
    let text = if to_xmi { export_xmi(&model) } else { pretty_print(&model) };
    emit(out, &text).map_err(|d| ui.fail(file, d))?;
    Ok(OK)
}

fn mapper(ui: &Ui) -> Result<u8, u8> {
    let text: String = if ui.json {
        let rows: Vec<_> = mapper_table()
            .iter()
            .map(|(d, e)| serde_json::json!({ "dimension": d.label(), "expectation": e }))
            .collect();
        format!("{}\n", serde_json::Value::from(rows))
    } else {
        mapper_table()
            .iter()
            .map(|(d, e)| format!("{}\t{e}\n", d.label()))
            .collect()
    };
    emit(None, &text).map_err(|d| ui.fail(Path::new("-"), d))?;
    Ok(OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ui = Ui {
        json: cli.json,
        quiet: cli.quiet,
    };
    let status = match &cli.command {
        Command::Check { file } => check(&ui, file),
        Command::Gen { file, out, templates } => gen(&ui, file, out, templates.as_deref()),
        Command::Run { file, source, data } => run(&ui, file, source, data),
        Command::Dot { file, level, out } => dot(&ui, file, *level, out.as_deref()),
        Command::ImportXmi { file, out } => convert(&ui, file, out.as_deref(), false),
        Command::ExportXmi { file, out } => convert(&ui, file, out.as_deref(), true),
        Command::Mapper => mapper(&ui),
    };
    ExitCode::from(status.unwrap_or_else(|code| code))
}
