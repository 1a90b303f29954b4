use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use salab::fuzz::{run_fuzz, FuzzConfig, Property};
use salab::gen::GenConfig;
use salab::mutation::Mutation;
use salab::scenario::{run_text, InputError, Report};

#[derive(Parser)]
#[command(name = "salab", version, about = "Exact checks for holomorphic string algebroids")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a JSON scenario file.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Stop after the first command that does not pass.
        #[arg(long)]
        stop_on_fail: bool,
        /// Include wall-clock time per command (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Random property checks on generated data.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        deg: u32,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Size of the matrix Lie algebra.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Run against a deliberately broken implementation.
        #[arg(long)]
        mutation: Option<String>,
        /// Comma-separated subset of properties.
        #[arg(long)]
        properties: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        timing: bool,
    },
}

fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn emit_report(r: &Report, format: Format) {
    match format {
        Format::Json => emit(&(serde_json::to_string_pretty(r).expect("report serializes") + "\n")),
        Format::Text => emit(&r.to_text()),
    }
}

fn input_failure(msg: String, format: Format) -> ExitCode {
    let r = Report::input_failure(&InputError { line: None, column: None, message: msg });
    match format {
        Format::Json => emit_report(&r, format),
        Format::Text => eprint!("{}", r.to_text()),
    }
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run { file, format, stop_on_fail, timing } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return input_failure(format!("{}: {e}", file.display()), format),
            };
            let r = run_text(&text, stop_on_fail, timing);
            emit_report(&r, format);
            ExitCode::from(r.exit_code() as u8)
        }
        Cmd::Fuzz { seed, n, deg, cases, k, mutation, properties, format, timing } => {
            let mutation = match mutation.as_deref().map(str::parse::<Mutation>) {
                None => Mutation::None,
                Some(Ok(m)) => m,
                Some(Err(e)) => return input_failure(e, format),
            };
            let mut cfg = FuzzConfig {
                seed,
                cases,
                gen: GenConfig { n, deg, ..GenConfig::default() },
                k,
                mutation,
                ..FuzzConfig::default()
            };
            if let Some(p) = properties {
                match p.split(',').map(|s| s.trim().parse::<Property>()).collect() {
                    Ok(ps) => cfg.properties = ps,
                    Err(e) => return input_failure(e, format),
                }
            }
            let t = Instant::now();
            let r = match run_fuzz(&cfg) {
                Ok(r) => r,
                Err(e) => return input_failure(e.to_string(), format),
            };
            match format {
                Format::Json => {
                    let mut v = serde_json::to_value(&r).expect("report serializes");
                    if timing {
                        v["time_ms"] = serde_json::json!(t.elapsed().as_secs_f64() * 1e3);
                    }
                    emit(&(serde_json::to_string_pretty(&v).expect("report serializes") + "\n"));
                }
                Format::Text => {
                    let mut o = String::new();
                    let _ = writeln!(o, "seed {} mutation {} cases {}", r.seed, r.mutation, r.cases_run);
                    for (p, c) in &r.per_property {
                        let _ = writeln!(o, "  {p}: {c}");
                    }
                    match &r.counterexample {
                        None => o.push_str("PASS\n"),
                        Some(ce) => {
                            let _ =
                                writeln!(o, "FAIL {} at case {} (case seed {})", ce.property, ce.case, ce.case_seed);
                            let _ = writeln!(o, "  failing: {}", ce.failing.join(", "));
                            let _ = writeln!(
                                o,
                                "  shrunk: {} of {} atoms nonzero, failing {}",
                                ce.witness.len(),
                                ce.nonzero_atoms_before,
                                ce.shrunk_failing.join(", ")
                            );
                            for (i, f) in &ce.witness {
                                let _ = writeln!(o, "    atom {i}: {f}");
                            }
                        }
                    }
                    if timing {
                        let _ = writeln!(o, "time {:.1} ms", t.elapsed().as_secs_f64() * 1e3);
                    }
                    emit(&o);
                }
            }
            ExitCode::from(if r.passed() { 0 } else { 1 })
        }
    }
}
