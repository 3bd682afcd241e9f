//! The `ndpolar` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 invalid model or reference, 3 I/O.

use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use ndpolar_core::aggregation::{walk_with, WalkOptions};
use ndpolar_core::render::render;
use ndpolar_core::report::{aggregate_report, slice_csv_rows, slice_report};
use ndpolar_core::rules::{lint_with, LintOptions, Severity};
use ndpolar_core::{fixtures, load_model, save_model, Error, PartialSlice, RenderSpec, RiskModel, RiskPosition, View};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ndpolar", version, about = "Multidimensional polar risk heatmaps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CsvOrJson {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ViewArg {
    Matrix,
    Polar,
}

#[derive(Debug, clap::Args)]
struct Selection {
    /// Fix a context axis, `axis=level` (label or index). Repeatable.
    #[arg(long = "set", value_name = "AXIS=LEVEL")]
    set: Vec<String>,
}

#[derive(Debug, clap::Args)]
struct RiskArg {
    /// Risk cell `likelihood,impact` (labels or indices); defaults to the
    /// model's own.
    #[arg(long, value_name = "L,I")]
    risk: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and check a model; lint findings go to standard error.
    Validate {
        /// Model file, or a built-in name: cooling, stylised, classic2d.
        model: String,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
        /// Also report rules that break monotonicity.
        #[arg(long)]
        monotonicity: bool,
    },
    /// Print the grade grid of one slice (CSV rows: impact, highest first).
    Slice {
        model: String,
        #[command(flatten)]
        selection: Selection,
        #[arg(long, value_enum, default_value = "csv")]
        format: CsvOrJson,
    },
    /// Per-level aggregated grades of both primary axes.
    Aggregate {
        model: String,
        #[command(flatten)]
        selection: Selection,
        #[command(flatten)]
        risk: RiskArg,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
    /// Step one context axis through its levels.
    Walk {
        model: String,
        /// Context axis to vary.
        #[arg(long)]
        vary: String,
        #[command(flatten)]
        selection: Selection,
        #[command(flatten)]
        risk: RiskArg,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
    /// Threshold violations of a full state.
    Violations {
        model: String,
        /// `l1,l2,...`, one level per axis.
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
    /// Write an SVG of the matrix or polar view.
    Render {
        model: String,
        #[arg(long, value_enum, default_value = "polar")]
        view: ViewArg,
        #[command(flatten)]
        selection: Selection,
        #[command(flatten)]
        risk: RiskArg,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        width: Option<u32>,
        #[arg(long)]
        height: Option<u32>,
        /// Polar rotation in degrees.
        #[arg(long, allow_negative_numbers = true)]
        theta0_deg: Option<f64>,
        #[arg(long)]
        no_labels: bool,
        #[arg(long)]
        no_thresholds: bool,
        /// Override a grade color, `grade=#rrggbb`. Repeatable.
        #[arg(long, value_name = "GRADE=#RRGGBB")]
        theme: Vec<String>,
    },
    /// Print the model in canonical form.
    Fmt { model: String },
    /// Serve the HTTP API (and optionally a static UI).
    Serve {
        model: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Model(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(m) => Failure::Io(m),
            other => Failure::Model(other),
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Io(e.to_string())
}

type Outcome = Result<(), Failure>;

/// Runs the command line with `args` (including the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Model(e)) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            EXIT_INVALID
        }
        Err(Failure::Io(m)) => {
            let _ = writeln!(err, "error[E_IO]: {m}");
            EXIT_IO
        }
    }
}

/// Reads a model from a path, falling back to the built-in fixtures by name.
pub fn open_model(arg: &str) -> Result<RiskModel, Error> {
    let path = Path::new(arg);
    if path.exists() {
        return ndpolar_core::load_model_path(path);
    }
    match fixtures::by_name(arg) {
        Some(doc) => load_model(doc),
        None => Err(Error::Io(format!(
            "{arg}: no such file (built-in models: cooling, stylised, classic2d)"
        ))),
    }
}

fn partial(model: &RiskModel, selection: &Selection) -> Result<PartialSlice, Failure> {
    let mut p = PartialSlice::default();
    for s in &selection.set {
        let (axis, level) = s
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects AXIS=LEVEL, got `{s}`")))?;
        p.set_text(model.space(), axis.trim(), level.trim())?;
    }
    Ok(p)
}

fn risk(model: &RiskModel, arg: &RiskArg) -> Result<RiskPosition, Failure> {
    match &arg.risk {
        Some(text) => Ok(RiskPosition::parse(model.space(), text)?),
        None => model
            .risk()
            .ok_or_else(|| Failure::Usage("--risk L,I is required: the model has no default risk position".into())),
    }
}

fn json_line(out: &mut dyn Write, value: &impl serde::Serialize) -> Outcome {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    writeln!(out, "{text}").map_err(io)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { model, format, monotonicity } => validate(&model, format, monotonicity, out, err),
        Command::Slice { model, selection, format } => {
            let m = open_model(&model)?;
            let sigma = partial(&m, &selection)?.complete(m.space(), m.default_slice())?;
            let report = slice_report(&m, &sigma)?;
            match format {
                CsvOrJson::Json => json_line(out, &report),
                CsvOrJson::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    for row in slice_csv_rows(&m, &report) {
                        w.write_record(&row).map_err(|e| Failure::Io(e.to_string()))?;
                    }
                    w.flush().map_err(io)
                }
            }
        }
        Command::Aggregate { model, selection, risk: r, format } => {
            let m = open_model(&model)?;
            let sigma = partial(&m, &selection)?.complete(m.space(), m.default_slice())?;
            let report = aggregate_report(&m, &sigma, risk(&m, &r)?)?;
            match format {
                TextOrJson::Json => json_line(out, &report),
                TextOrJson::Text => {
                    writeln!(out, "risk grade: {}", report.risk_grade).map_err(io)?;
                    writeln!(out, "{}: {}", m.space().likelihood().id(), report.likelihood.join(",")).map_err(io)?;
                    writeln!(out, "{}: {}", m.space().impact().id(), report.impact.join(",")).map_err(io)
                }
            }
        }
        Command::Walk { model, vary, selection, risk: r, format } => {
            let m = open_model(&model)?;
            let fixed = partial(&m, &selection)?;
            let result = walk_with(&m, &vary, &fixed, risk(&m, &r)?, WalkOptions::default())?;
            let report = result.report(&m);
            match format {
                TextOrJson::Json => json_line(out, &report),
                TextOrJson::Text => {
                    let mut w = csv::Writer::from_writer(out);
                    let csv_err = |e: csv::Error| Failure::Io(e.to_string());
                    w.write_record(["level", "label", "risk_grade", "V"]).map_err(csv_err)?;
                    for s in &report.steps {
                        w.write_record([
                            s.level.to_string(),
                            s.label.clone(),
                            s.risk_grade.clone(),
                            s.violations.to_string(),
                        ])
                        .map_err(csv_err)?;
                    }
                    w.flush().map_err(io)
                }
            }
        }
        Command::Violations { model, state, format } => {
            let m = open_model(&model)?;
            let v = m.violations(&m.parse_state(&state)?)?;
            match format {
                TextOrJson::Json => json_line(out, &v),
                TextOrJson::Text => writeln!(out, "{v}").map_err(io),
            }
        }
        Command::Render {
            model,
            view,
            selection,
            risk: r,
            output,
            width,
            height,
            theta0_deg,
            no_labels,
            no_thresholds,
            theme,
        } => {
            let m = open_model(&model)?;
            let sigma = partial(&m, &selection)?.complete(m.space(), m.default_slice())?;
            let mut spec = RenderSpec::for_view(match view {
                ViewArg::Matrix => View::Matrix,
                ViewArg::Polar => View::Polar,
            });
            if let Some(w) = width {
                spec.width = w;
            }
            if let Some(h) = height {
                spec.height = h;
            }
            spec.theta0 = theta0_deg.map(f64::to_radians);
            spec.show_labels = !no_labels;
            spec.show_thresholds = !no_thresholds;
            for t in &theme {
                let (g, c) = t
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("--theme expects GRADE=#RRGGBB, got `{t}`")))?;
                spec.theme.insert(g.to_string(), c.to_string());
            }
            let svg = render(&m, &sigma, risk(&m, &r)?, &spec)?;
            match output {
                Some(path) => {
                    std::fs::write(&path, svg).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    writeln!(err, "wrote {}", path.display()).map_err(io)
                }
                None => out.write_all(svg.as_bytes()).map_err(io),
            }
        }
        Command::Fmt { model } => {
            let m = open_model(&model)?;
            out.write_all(save_model(&m).as_bytes()).map_err(io)
        }
        Command::Serve { model, port, host, ui_dir } => {
            let m = open_model(&model)?;
            if let Some(dir) = &ui_dir {
                if !dir.is_dir() {
                    return Err(Failure::Io(format!("{}: not a directory", dir.display())));
                }
            }
            let runtime = tokio::runtime::Runtime::new().map_err(io)?;
            runtime
                .block_on(ndpolar_service::serve(m, SocketAddr::new(host, port), ui_dir))
                .map_err(io)
        }
    }
}

fn validate(model: &str, format: TextOrJson, monotonicity: bool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let loaded = open_model(model);
    let m = match (loaded, format) {
        (Ok(m), _) => m,
        (Err(Error::Io(msg)), _) => return Err(Failure::Io(msg)),
        (Err(e), TextOrJson::Text) => return Err(Failure::Model(e)),
        (Err(e), TextOrJson::Json) => {
            let mut d = serde_json::json!({ "severity": "error", "code": e.code(), "message": e.to_string() });
            if let Error::NonTotal { examples, count } = &e {
                d["uncovered"] = serde_json::json!(examples);
                d["uncovered_count"] = serde_json::json!(count);
            }
            json_line(err, &serde_json::json!({ "valid": false, "diagnostics": [d] }))?;
            return Err(Failure::Model(e));
        }
    };
    let options = LintOptions {
        monotonicity,
        ..LintOptions::default()
    };
    let diagnostics = lint_with(m.assignment().assignment(), m.space(), m.scale(), options);
    let has_errors = diagnostics.iter().any(|d| d.severity == Severity::Error);
    match format {
        TextOrJson::Json => json_line(err, &serde_json::json!({ "valid": !has_errors, "diagnostics": diagnostics }))?,
        TextOrJson::Text => {
            for d in &diagnostics {
                writeln!(err, "{d}").map_err(io)?;
            }
        }
    }
    if has_errors {
        return Err(Failure::Model(Error::Invalid(format!("{} lint error(s)", diagnostics.len()))));
    }
    let dims: Vec<String> = m.space().level_counts().iter().map(|n| n.to_string()).collect();
    writeln!(
        out,
        "ok: {} (d={}, levels {}, {} states)",
        m.name(),
        m.space().dims(),
        dims.join("x"),
        m.space().size()
    )
    .map_err(io)
}
