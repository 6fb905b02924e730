//! The `dolkit` command line: analysis, combination, development graphs and
//! proof attempts for DOL documents stored in a directory repository.
//!
//! [`run`] executes one invocation against arbitrary output streams and
//! returns the process exit code.

mod error;
mod report;

pub use error::CliError;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dolkit::dolparse::{parse_document, DolDocument, RepoConfig};
use dolkit::exec::Schedule;
use dolkit::logics::print_theory;
use dolkit::mappings::{Category, Registry};
use dolkit::prove::{prove_all, AttemptConfig, ProofStatus, ProverSpec, SelectionStrategy};
use dolkit::select::SineParams;
use dolkit::structure::{analyze, Env};
use dolkit::{NameContext, ParseError, Pos};

/// Exit code for command-line usage errors.
pub const EXIT_USAGE: u8 = 64;
/// Exit code when analysis or configuration fails.
pub const EXIT_ERROR: u8 = 1;
/// Exit code when some proof attempt did not end in THM.
pub const EXIT_UNPROVED: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "dolkit", version, about = "Structure, combine and prove DOL ontologies")]
struct Cli {
    /// Repository root holding `repo.json` (defaults to the document's directory).
    #[arg(long, global = true, env = "DOLKIT_REPO")]
    repo: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the analysis report as JSON.
    Analyze { file: PathBuf },
    /// Run proof attempts on the document's proof obligations.
    Prove(ProveArgs),
    /// Print the flattened theory of a combination.
    Combine {
        file: PathBuf,
        #[arg(long)]
        ontology: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the development graph.
    Graph {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// List the registry of languages, logics, serializations and mappings.
    Logics {
        #[arg(long, value_parser = parse_category)]
        category: Option<Category>,
    },
}

#[derive(Debug, Args)]
struct ProveArgs {
    file: PathBuf,
    /// `internal-fol`, `internal-prop` or `ext:<command>`; repeatable.
    #[arg(long = "prover", value_parser = parse_prover)]
    provers: Vec<ProverSpec>,
    /// Seconds per attempt.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    timeout: u64,
    /// Only these obligations (or definitions); repeatable.
    #[arg(long = "theorem")]
    theorems: Vec<String>,
    /// Comma-separated axiom labels.
    #[arg(long, value_delimiter = ',', conflicts_with = "sine")]
    axioms: Option<Vec<String>>,
    /// SInE parameters `TOLERANCE,DEPTH,GENERALITY`.
    #[arg(long, value_parser = parse_sine)]
    sine: Option<SineParams>,
    /// Keep external problem files, in DIR or a fresh directory.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    keep_temp: Option<PathBuf>,
    /// Maximum number of concurrent attempts.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

fn parse_category(s: &str) -> Result<Category, String> {
    Category::ALL.into_iter().find(|c| c.as_str().eq_ignore_ascii_case(s)).ok_or_else(|| {
        let names: Vec<&str> = Category::ALL.iter().map(|c| c.as_str()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn parse_prover(s: &str) -> Result<ProverSpec, String> {
    s.parse().map_err(|e: dolkit::prove::ProveError| e.to_string())
}

fn parse_sine(s: &str) -> Result<SineParams, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [t, d, g] = parts[..] else { return Err("expected TOLERANCE,DEPTH,GENERALITY".into()) };
    let tolerance: f64 = t.parse().map_err(|_| format!("invalid tolerance `{t}`"))?;
    let depth: usize = d.parse().map_err(|_| format!("invalid depth `{d}`"))?;
    let generality: usize = g.parse().map_err(|_| format!("invalid generality threshold `{g}`"))?;
    SineParams::new(tolerance, depth, generality).map_err(|e| e.to_string())
}

struct Loaded {
    doc: DolDocument,
    repo: RepoConfig,
    origin: String,
}

fn load(file: &Path, repo: Option<&Path>) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(file).map_err(|e| CliError::io(file, e))?;
    let doc = parse_document(&text)?;
    if doc.items.is_empty() {
        let err = ParseError::syntax(Pos::START, "empty document");
        return Err(err.into());
    }
    let root = match repo {
        Some(r) => r.to_path_buf(),
        None => file.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let repo = RepoConfig::load(&root)?;
    let stem = file.file_stem().and_then(|s| s.to_str()).unwrap_or("document");
    Ok(Loaded { doc, repo, origin: format!("{stem}#") })
}

fn name_context(l: &Loaded) -> NameContext {
    let mut ctx = NameContext::new(l.origin.clone());
    ctx.prefixes = l.doc.prefixes.clone();
    ctx
}

fn write_json(out: &mut dyn Write, v: &serde_json::Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<u8, CliError> {
    let registry = Registry::builtin();
    let repo = cli.repo.as_deref();
    match cli.command {
        Command::Analyze { file } => {
            let l = load(&file, repo)?;
            let env = Env::new(&l.doc, &l.repo, &registry, l.origin.clone());
            let analysis = analyze(&env)?;
            write_json(out, &report::analysis(&file, &l.doc, &analysis, &name_context(&l)))?;
            Ok(0)
        }
        Command::Prove(args) => prove(args, repo, &registry, out, diag),
        Command::Combine { file, ontology, out: target } => {
            let l = load(&file, repo)?;
            let env = Env::new(&l.doc, &l.repo, &registry, l.origin.clone());
            let combined = env.combination(&ontology)?;
            let ctx = name_context(&l).covering(combined.theory.signature().iter());
            let text = print_theory(&combined.theory, &ctx);
            match target {
                Some(path) => fs::write(&path, &text).map_err(|e| CliError::io(&path, e))?,
                None => out.write_all(text.as_bytes())?,
            }
            diag.write_all(report::class_table(&combined.colimit, &ctx).as_bytes())?;
            Ok(0)
        }
        Command::Graph { file, format } => {
            let l = load(&file, repo)?;
            let env = Env::new(&l.doc, &l.repo, &registry, l.origin.clone());
            let analysis = analyze(&env)?;
            match format {
                GraphFormat::Dot => out.write_all(analysis.graph.to_dot().as_bytes())?,
                GraphFormat::Json => write_json(out, &analysis.graph.to_json())?,
            }
            Ok(0)
        }
        Command::Logics { category } => {
            let categories = match category {
                Some(c) => vec![c],
                None => Category::ALL.to_vec(),
            };
            for c in categories {
                for e in registry.list(c) {
                    writeln!(out, "{e}")?;
                }
            }
            Ok(0)
        }
    }
}

fn prove(
    args: ProveArgs,
    repo: Option<&Path>,
    registry: &Registry,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<u8, CliError> {
    let l = load(&args.file, repo)?;
    let env = Env::new(&l.doc, &l.repo, registry, l.origin.clone());
    let analysis = analyze(&env)?;
    let mut obligations = analysis.obligations;
    if !args.theorems.is_empty() {
        if let Some(missing) =
            args.theorems.iter().find(|t| !obligations.iter().any(|o| &o.name == *t || &o.definition == *t))
        {
            return Err(CliError::UnknownTheorem(missing.clone()));
        }
        obligations.retain(|o| args.theorems.iter().any(|t| *t == o.name || *t == o.definition));
    }
    let selection = match (args.axioms, args.sine) {
        (Some(axioms), _) => SelectionStrategy::Manual { axioms },
        (None, Some(p)) => SelectionStrategy::Sine(p),
        (None, None) => SelectionStrategy::Full,
    };
    let mut config = AttemptConfig::new(args.provers, args.timeout)?
        .with_selection(selection)
        .with_schedule(Schedule::with_jobs(args.jobs));
    if let Some(dir) = args.keep_temp {
        let dir = if dir.as_os_str().is_empty() {
            std::env::temp_dir().join(format!("dolkit-{}", std::process::id()))
        } else {
            dir
        };
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        writeln!(diag, "keeping problem files in {}", dir.display())?;
        config.keep_temp = Some(dir);
    }
    let attempts = prove_all(&obligations, &config, registry);
    for a in &attempts {
        writeln!(diag, "{} {} {} ({:.3}s)", a.obligation, a.prover, a.status, a.wall_time.as_secs_f64())?;
    }
    write_json(out, &serde_json::json!({ "attempts": attempts }))?;
    Ok(if attempts.iter().all(|a| a.status == ProofStatus::Thm) { 0 } else { EXIT_UNPROVED })
}

/// Runs one invocation. `args` includes the program name. JSON results and
/// error reports go to `out`; progress lines, usage text and the merged
/// symbol table go to `diag`.
pub fn run<I, T>(args: I, out: &mut dyn Write, diag: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(diag, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(cli, out, diag) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            let _ = write_json(out, &e.to_json());
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (u8, String, String) {
        let (mut out, mut diag) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("dolkit").chain(args.iter().copied()), &mut out, &mut diag);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(diag).unwrap())
    }

    #[test]
    fn sine_triples() {
        let p = parse_sine("1.5, 2,0").unwrap();
        assert_eq!((p.tolerance, p.depth, p.generality_threshold), (1.5, 2, 0));
        assert!(parse_sine("1,2").is_err());
        assert!(parse_sine("0.5,1,0").is_err());
        assert!(parse_sine("x,1,0").is_err());
    }

    #[test]
    fn categories_ignore_case() {
        assert_eq!(parse_category("mapping").unwrap(), Category::Mapping);
        assert!(parse_category("Planet").is_err());
    }

    #[test]
    fn usage_errors_and_help() {
        assert_eq!(run_args(&["prove", "f.dol", "--axioms", "a", "--sine", "1,1,0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["prove", "f.dol", "--timeout", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["prove", "f.dol", "--prover", "nonsense"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("Usage"));
    }

    #[test]
    fn missing_file_is_a_json_error() {
        let (code, out, diag) = run_args(&["analyze", "/nonexistent/doc.dol"]);
        assert_eq!(code, EXIT_ERROR);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["kind"], "IoError");
        assert!(diag.starts_with("error:"));
    }

    #[test]
    fn logics_filter() {
        let (code, out, _) = run_args(&["logics", "--category", "Mapping"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
        assert!(out.lines().all(|l| l.starts_with("Mapping ")));
    }
}
