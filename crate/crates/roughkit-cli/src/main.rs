use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use roughkit_cli::{describe, fixtures, ingest, parse_json, parse_table, parse_target_spec, run, CliError, Ingested};
use serde_json::{Map, Value};

#[derive(Parser)]
#[command(name = "roughkit", version, about = "Rough approximation models over finite universes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    Approx(RunArgs),
    Decision(RunArgs),
    Multiview(RunArgs),
    Hyper(RunArgs),
    Valued(RunArgs),
    Structures(RunArgs),
    /// Replay the bundled fixture corpus.
    Verify {
        #[arg(long)]
        section: Option<String>,
        /// Read fixtures from a directory instead of the bundled set.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Load a CSV table or JSON descriptor and print its shape.
    Ingest {
        path: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// `a,b,c` or `attr=value`; overrides the config's target.
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(v: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).expect("reports serialize") + "\n";
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_family(family: &str, a: &RunArgs) -> Result<(), CliError> {
    let table = a.table.as_deref().map(|p| read(p).and_then(|t| parse_table(&t))).transpose()?;
    let mut cfg = match &a.config {
        Some(p) => parse_json(&read(p)?)?,
        None => Value::Object(Map::new()),
    };
    if let Some(t) = &a.target {
        let obj = cfg.as_object_mut().ok_or_else(|| CliError::Config("config must be a JSON object".into()))?;
        obj.insert("target".into(), parse_target_spec(t));
    }
    emit(&run(family, &a.model, &cfg, table.as_ref())?, a.out.as_deref())
}

fn verify(section: Option<&str>, dir: Option<&Path>) -> Result<bool, CliError> {
    let all = match dir {
        Some(d) => fixtures::load_dir(d)?,
        None => fixtures::bundled()?,
    };
    let s = fixtures::verify(&all, section);
    for id in &s.passed {
        println!("pass {id}");
    }
    for (id, why) in &s.failed {
        println!("FAIL {id}: {why}");
    }
    println!("{} fixtures, {} passed, {} failed", s.total(), s.passed.len(), s.failed.len());
    Ok(s.ok() && s.total() > 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Approx(a) => run_family("approx", a),
        Cmd::Decision(a) => run_family("decision", a),
        Cmd::Multiview(a) => run_family("multiview", a),
        Cmd::Hyper(a) => run_family("hyper", a),
        Cmd::Valued(a) => run_family("valued", a),
        Cmd::Structures(a) => run_family("structures", a),
        Cmd::Verify { section, dir } => match verify(section.as_deref(), dir.as_deref()) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(3),
            Err(e) => Err(e),
        },
        Cmd::Ingest { path, format } => ingest(path, format).and_then(|i: Ingested| describe(&i)).and_then(|v| emit(&v, None)),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("roughkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
