//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use wavelab_core::experiments::Scenario;

use crate::commands::{exit_code, run_command, Command};
use crate::config::{Config, ConfigError, ParseError, ValidationError};
use crate::manifest::{InputDigest, RunManifest};
use crate::output::{json_text, sha256_hex};

/// Exit status for errors (bad input, failed IO, solver errors).
pub const EXIT_ERROR: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "wavelab", version, about = "Numerical laboratory for the 1D semilinear wave equation")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Configuration file (`key = value` lines); omitted keys keep their defaults.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory receiving the outputs and manifest.json.
    #[arg(long, value_name = "DIR", default_value = "wavelab-out")]
    out_dir: PathBuf,
    /// Set one key after the file is read; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Print nothing on success.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Evolve the configured data and dump states and conserved quantities.
    Simulate(RunArgs),
    /// Closed-curve energy flux integral around a lattice polygon.
    FluxCheck(RunArgs),
    /// Energy balance across a shifted light ray.
    Trapezoid(RunArgs),
    /// Long-time decay of one-sided and central energies and of the norms.
    Decay(RunArgs),
    /// Energy beyond the light cone of the initial support.
    Tail(RunArgs),
    /// Monotone energy inside the shifted forward cone.
    Retraction(RunArgs),
    /// Right-going energy past a ray and probes of the left-going field.
    Conjecture(RunArgs),
    /// Blow-up of negative-energy focusing data.
    Focusing(RunArgs),
    /// Interaction functional for even data.
    Concentration(RunArgs),
    /// Self-similar profile, its semi-energy and ray-energy decay.
    Selfsimilar(RunArgs),
    /// Table of C_p for the configured exponents.
    CpTable(RunArgs),
    /// Re-run from a manifest and compare output digests.
    Replay {
        manifest: PathBuf,
        /// Where the re-run writes; defaults to `replay/` next to the manifest.
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Print the resolved configuration of a command.
    Defaults {
        command: String,
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

/// Runs the tool on `args` (program name first) and returns the exit status.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprint!("{}", json_text(&error_json(&e)));
            EXIT_ERROR
        }
    }
}

/// Machine-readable description of an error.
pub fn error_json(e: &anyhow::Error) -> Value {
    let parse = e
        .downcast_ref::<ParseError>()
        .or_else(|| match e.downcast_ref::<ConfigError>() {
            Some(ConfigError::Parse(p)) => Some(p),
            _ => None,
        });
    let validation = e
        .downcast_ref::<ValidationError>()
        .or_else(|| match e.downcast_ref::<ConfigError>() {
            Some(ConfigError::Validation(v)) => Some(v),
            _ => None,
        });
    let body = if let Some(p) = parse {
        json!({ "kind": "parse", "origin": p.origin, "line": p.line, "col": p.col, "message": p.message })
    } else if let Some(v) = validation {
        json!({ "kind": "validation", "field": v.field, "reason": v.reason, "message": v.to_string() })
    } else {
        json!({ "kind": "runtime", "message": format!("{e:#}") })
    };
    json!({ "error": body })
}

fn dispatch(sub: Sub) -> anyhow::Result<i32> {
    let (command, args) = match sub {
        Sub::Simulate(a) => (Command::Simulate, a),
        Sub::FluxCheck(a) => (Command::FluxCheck, a),
        Sub::Trapezoid(a) => (Command::Trapezoid, a),
        Sub::Decay(a) => (Command::Scenario(Scenario::Decay), a),
        Sub::Tail(a) => (Command::Scenario(Scenario::Tail), a),
        Sub::Retraction(a) => (Command::Scenario(Scenario::Retraction), a),
        Sub::Conjecture(a) => (Command::Scenario(Scenario::Conjecture), a),
        Sub::Focusing(a) => (Command::Scenario(Scenario::Focusing), a),
        Sub::Concentration(a) => (Command::Scenario(Scenario::Concentration), a),
        Sub::Selfsimilar(a) => (Command::SelfSimilar, a),
        Sub::CpTable(a) => (Command::CpTable, a),
        Sub::Replay {
            manifest,
            out_dir,
            quiet,
        } => return replay(&manifest, out_dir, quiet),
        Sub::Defaults {
            command,
            config,
            overrides,
        } => {
            let command = Command::from_name(&command).ok_or_else(|| anyhow!("unknown command `{command}`"))?;
            let (cfg, _) = resolve(command, config.as_deref(), &overrides)?;
            print!("{}", cfg.emit());
            return Ok(0);
        }
    };
    let (cfg, inputs) = resolve(command, args.config.as_deref(), &args.overrides)?;
    let (verdict, _) = run_command(command, &cfg, &args.out_dir, inputs)?;
    if !args.quiet {
        println!("{} {} -> {}", command.name(), verdict.name(), args.out_dir.display());
    }
    Ok(exit_code(verdict))
}

/// Defaults of `command`, then the file, then the overrides in order.
pub fn resolve(
    command: Command,
    file: Option<&Path>,
    overrides: &[String],
) -> anyhow::Result<(Config, Vec<InputDigest>)> {
    let mut cfg = command.defaults();
    let mut inputs = Vec::new();
    if let Some(path) = file {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.apply_text(&text, &path.display().to_string())?;
        inputs.push(InputDigest {
            file: path.display().to_string(),
            sha256: sha256_hex(text.as_bytes()),
        });
    }
    for (k, entry) in overrides.iter().enumerate() {
        cfg.apply_override(entry, k)?;
    }
    cfg.validate()?;
    Ok((cfg, inputs))
}

fn replay(path: &Path, out_dir: Option<PathBuf>, quiet: bool) -> anyhow::Result<i32> {
    let original = RunManifest::read(path)?;
    let command = Command::from_name(&original.command)
        .ok_or_else(|| anyhow!("manifest names unknown command `{}`", original.command))?;
    let mut cfg = command.defaults();
    cfg.apply_text(&original.config, "manifest config")?;
    let out_dir = out_dir.unwrap_or_else(|| path.parent().unwrap_or(Path::new(".")).join("replay"));
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let inputs = vec![InputDigest {
        file: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    }];
    let (_, rerun) = run_command(command, &cfg, &out_dir, inputs)?;

    let mut mismatches = Vec::new();
    for want in &original.outputs {
        match rerun.outputs.iter().find(|o| o.file == want.file) {
            None => mismatches.push(json!({ "file": want.file, "problem": "missing" })),
            Some(got) if got.sha256 != want.sha256 => mismatches.push(json!({
                "file": want.file,
                "problem": "digest differs",
                "expected": want.sha256,
                "found": got.sha256,
            })),
            Some(_) => {}
        }
    }
    for got in &rerun.outputs {
        if !original.outputs.iter().any(|o| o.file == got.file) {
            mismatches.push(json!({ "file": got.file, "problem": "unexpected" }));
        }
    }
    let identical = mismatches.is_empty();
    if !quiet {
        let summary = json!({
            "replay": original.command,
            "files": original.outputs.len(),
            "identical": identical,
            "mismatches": mismatches,
            "out_dir": out_dir.display().to_string(),
        });
        print!("{}", json_text(&summary));
    }
    Ok(if identical { 0 } else { 2 })
}
