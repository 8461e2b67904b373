//! `symspec`: spectral sequence tables, cohomology and verification suites
//! for symplectic Chevalley–Eilenberg models.
//!
//! Exit codes: 0 all checks pass, 1 a verification finding, 2 usage or
//! parse error, 3 internal invariant violation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symspec_core::cohomology::harmonic_verdict;
use symspec_core::model::BUILTIN_NAMES;
use symspec_core::report::Verdict;
use symspec_core::spectral::SpectralSequence;
use symspec_core::suites::{Analysis, Suite, SuiteOptions};
use symspec_core::{builtin, parse_model, Error, Model};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "symspec", version)]
#[command(about = "Exact symplectic spectral sequences of Chevalley–Eilenberg models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Builtin model library
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Betti numbers and the closedness profile of Ω
    Cohomology {
        #[arg(long)]
        model: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Dimension tables of E_r^{p,q}
    Pages {
        #[arg(long)]
        model: String,
        /// Last page to print (default n + 1)
        #[arg(long)]
        max_page: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run verification suites
    Verify {
        #[arg(long)]
        model: String,
        /// Comma-separated: eq1, hodge-lepage, props, thm1, stab, harmonic, symmetry
        #[arg(long, value_delimiter = ',', required = true)]
        suites: Vec<Suite>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Seed for the randomized checks
        #[arg(long, default_value_t = SuiteOptions::default().seed)]
        seed: u64,
    },
    /// Decide harmonicity by three independent oracles
    Harmonic {
        #[arg(long)]
        model: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModelsAction {
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String, verdicts: &[Verdict]) -> Self {
        let code = if verdicts.iter().all(|v| v.pass) {
            EXIT_OK
        } else {
            EXIT_FINDING
        };
        Outcome {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn error(code: i32, message: impl Into<String>) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {}\n", message.into()),
            code,
        }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Outcome::error(EXIT_INTERNAL, format!("internal invariant violated: {e}"))
        } else {
            Outcome::error(EXIT_USAGE, e.to_string())
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_USAGE,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: EXIT_OK,
                }
            };
        }
    };
    execute(cli.command).unwrap_or_else(Outcome::from)
}

fn execute(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Models {
            action: ModelsAction::List,
        } => {
            let mut out = String::new();
            for name in BUILTIN_NAMES {
                let model = builtin(name)?;
                writeln!(
                    out,
                    "{name:<8} dim {:<2} n = {}",
                    model.dim(),
                    model.half_dim()
                )
                .unwrap();
            }
            Ok(Outcome::ok(out, &[]))
        }
        Command::Cohomology { model, format } => {
            let model = match load_model(&model) {
                Ok(m) => m,
                Err(o) => return Ok(o),
            };
            cohomology(model, format)
        }
        Command::Pages {
            model,
            max_page,
            format,
        } => {
            let model = match load_model(&model) {
                Ok(m) => m,
                Err(o) => return Ok(o),
            };
            pages(model, max_page, format)
        }
        Command::Verify {
            model,
            suites,
            format,
            seed,
        } => {
            let model = match load_model(&model) {
                Ok(m) => m,
                Err(o) => return Ok(o),
            };
            let options = SuiteOptions {
                seed,
                ..SuiteOptions::default()
            };
            verify(model, &suites, &options, format)
        }
        Command::Harmonic { model, format } => {
            let model = match load_model(&model) {
                Ok(m) => m,
                Err(o) => return Ok(o),
            };
            harmonic(model, format)
        }
    }
}

/// A builtin name, or else a path to a JSON model file.
pub fn load_model(source: &str) -> Result<Model, Outcome> {
    if BUILTIN_NAMES.contains(&source) {
        return builtin(source).map_err(Outcome::from);
    }
    let path = Path::new(source);
    if !path.is_file() {
        return Err(Outcome::error(
            EXIT_USAGE,
            format!(
                "'{source}' is neither a builtin model ({}) nor a readable file",
                BUILTIN_NAMES.join(", ")
            ),
        ));
    }
    let bytes = std::fs::read(path)
        .map_err(|e| Outcome::error(EXIT_USAGE, format!("cannot read {source}: {e}")))?;
    parse_model(&bytes).map_err(|e| Outcome::error(EXIT_USAGE, format!("{source}: {e}")))
}

fn model_json(model: &Model) -> Value {
    let profile = model.closedness_profile();
    json!({
        "name": model.name(),
        "generators": model.generator_names(),
        "dim": model.dim(),
        "n": model.half_dim(),
        "t_min": profile.t_min,
        "closed_type": profile.is_closed_type(),
    })
}

/// `{"r": {"p,q": dim}}` for pages `0..=last`, zeros omitted.
pub fn pages_json(ss: &SpectralSequence<'_>, last: usize) -> Value {
    let pages: BTreeMap<String, BTreeMap<String, usize>> = ss
        .pages()
        .iter()
        .take(last + 1)
        .map(|page| {
            let dims = page
                .dims()
                .into_iter()
                .map(|((p, q), d)| (format!("{p},{q}"), d))
                .collect();
            (page.r.to_string(), dims)
        })
        .collect();
    json!(pages)
}

fn report(
    model: &Model,
    ss: &SpectralSequence<'_>,
    last: usize,
    verdicts: &[Verdict],
    extra: Option<(&str, Value)>,
) -> String {
    let mut doc = json!({
        "model": model_json(model),
        "pages": pages_json(ss, last),
        "stabilization_page": ss.stabilization().page,
        "verdicts": verdicts,
    });
    if let Some((key, value)) = extra {
        doc[key] = value;
    }
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}

fn header(model: &Model) -> String {
    format!(
        "model {} (dim {}, n = {})\n",
        model.name(),
        model.dim(),
        model.half_dim()
    )
}

fn render_page_table(out: &mut String, ss: &SpectralSequence<'_>, last: usize) {
    let n = ss.ops().model().half_dim() as isize;
    for page in ss.pages().iter().take(last + 1) {
        let width = page
            .dims()
            .values()
            .map(|d| d.to_string().len())
            .max()
            .unwrap_or(1)
            .max((n + 1).to_string().len())
            + 2;
        writeln!(out, "\nE_{}", page.r).unwrap();
        for q in (0..=n).rev() {
            write!(out, "{q:>4} |").unwrap();
            for p in 0..=n {
                let d = page.dim(p, q);
                let cell = if d == 0 {
                    "·".to_string()
                } else {
                    d.to_string()
                };
                write!(out, "{cell:>width$}").unwrap();
            }
            out.push('\n');
        }
        write!(out, "     +").unwrap();
        out.push_str(&"-".repeat(width * (n as usize + 1)));
        out.push('\n');
        write!(out, "   q/p").unwrap();
        for p in 0..=n {
            write!(out, "{p:>width$}").unwrap();
        }
        out.push('\n');
    }
}

fn render_verdicts(out: &mut String, verdicts: &[Verdict]) {
    for v in verdicts {
        let status = if v.pass { "PASS" } else { "FAIL" };
        match &v.witness {
            Some(w) => writeln!(out, "{status}  {}  [{w}]", v.name).unwrap(),
            None => writeln!(out, "{status}  {}", v.name).unwrap(),
        }
    }
    let failed = verdicts.iter().filter(|v| !v.pass).count();
    writeln!(out, "{} passed, {failed} failed", verdicts.len() - failed).unwrap();
}

fn cohomology(model: Model, format: Format) -> Result<Outcome, Error> {
    let analysis = Analysis::new(model)?;
    let ss = analysis.spectral(0)?;
    let betti = analysis.de_rham.betti();
    let profile = analysis.model.closedness_profile();
    let stdout = match format {
        Format::Json => report(
            &analysis.model,
            &ss,
            0,
            &[],
            Some((
                "cohomology",
                json!({ "betti": betti, "omega_powers_nonzero": profile.classes_nonzero }),
            )),
        ),
        Format::Table => {
            let mut out = header(&analysis.model);
            for (k, b) in betti.iter().enumerate() {
                writeln!(out, "dim H^{k} = {b}").unwrap();
            }
            for (t, nonzero) in profile.classes_nonzero.iter().enumerate() {
                let state = if *nonzero { "≠ 0" } else { "= 0" };
                writeln!(out, "[Ω^{}] {state}", t + 1).unwrap();
            }
            match profile.t_min {
                Some(t) => writeln!(out, "t_min = {t}").unwrap(),
                None => writeln!(out, "closed-type (t_min infinite)").unwrap(),
            }
            out
        }
    };
    Ok(Outcome::ok(stdout, &[]))
}

fn pages(model: Model, max_page: Option<usize>, format: Format) -> Result<Outcome, Error> {
    let last = max_page.unwrap_or(model.half_dim() + 1);
    let analysis = Analysis::new(model)?;
    let ss = analysis.spectral(last)?;
    let stdout = match format {
        Format::Json => report(&analysis.model, &ss, last, &[], None),
        Format::Table => {
            let mut out = header(&analysis.model);
            render_page_table(&mut out, &ss, last);
            writeln!(out, "\nstabilization page: {}", ss.stabilization().page).unwrap();
            out
        }
    };
    Ok(Outcome::ok(stdout, &[]))
}

fn verify(
    model: Model,
    suites: &[Suite],
    options: &SuiteOptions,
    format: Format,
) -> Result<Outcome, Error> {
    let analysis = Analysis::new(model)?;
    let verdicts = analysis.run(suites, options)?;
    let last = analysis.model.half_dim() + 1;
    let ss = analysis.spectral(last)?;
    let stdout = match format {
        Format::Json => report(&analysis.model, &ss, last, &verdicts, None),
        Format::Table => {
            let mut out = header(&analysis.model);
            let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
            writeln!(out, "suites: {}\n", names.join(", ")).unwrap();
            render_verdicts(&mut out, &verdicts);
            out
        }
    };
    Ok(Outcome::ok(stdout, &verdicts))
}

fn harmonic(model: Model, format: Format) -> Result<Outcome, Error> {
    let analysis = Analysis::new(model)?;
    let last = analysis.model.half_dim() + 1;
    let ss = analysis.spectral(last)?;
    let hv = harmonic_verdict(&analysis.ops, &analysis.de_rham, &ss)?;
    let verdicts = analysis.run(&[Suite::Harmonic], &SuiteOptions::default())?;
    let label = match (hv.applicable, hv.is_harmonic()) {
        (false, _) => "not applicable (model is not closed-type)",
        (true, Some(true)) => "harmonic",
        (true, Some(false)) => "not harmonic",
        (true, None) => "undecided (oracles disagree)",
    };
    let stdout = match format {
        Format::Json => {
            let oracles: Vec<Value> = hv
                .oracles()
                .iter()
                .map(|o| {
                    json!({
                        "name": o.name,
                        "harmonic": o.harmonic,
                        "witness_degree": o.witness_degree,
                        "witness": o.witness,
                    })
                })
                .collect();
            report(
                &analysis.model,
                &ss,
                last,
                &verdicts,
                Some((
                    "harmonic",
                    json!({
                        "applicable": hv.applicable,
                        "nilpotent": hv.nilpotent,
                        "agree": hv.agree(),
                        "verdict": label,
                        "oracles": oracles,
                    }),
                )),
            )
        }
        Format::Table => {
            let mut out = header(&analysis.model);
            for o in hv.oracles() {
                let state = if o.harmonic {
                    "harmonic"
                } else {
                    "not harmonic"
                };
                match &o.witness {
                    Some(w) => writeln!(out, "{:<58} {state}  [{w}]", o.name).unwrap(),
                    None => writeln!(out, "{:<58} {state}", o.name).unwrap(),
                }
            }
            writeln!(out, "verdict: {label}\n").unwrap();
            render_verdicts(&mut out, &verdicts);
            out
        }
    };
    Ok(Outcome::ok(stdout, &verdicts))
}
