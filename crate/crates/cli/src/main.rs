//! `dicke`: command-line harness for the Dicke-state simulator.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dicke_core::checks::{run_checks, Fixtures};
use dicke_core::dicke::{
    decompose_source, decompose_target, dicke, max_success_probability, BipartitionParams,
    DickeDecomposition,
};
use dicke_core::noise::{fidelity_sweep, theta_grid, FidelityMode};
use dicke_core::protocols::text::to_text;
use dicke_core::protocols::{
    build_d4_preparation_circuit, build_d4_to_d5_circuit, build_w3_circuit, run_protocol_stats,
};
use dicke_core::report::{format_sig, statevector_to_csv, sweep_to_csv, Histogram};
use dicke_core::sim::{Circuit, StateVector};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_USAGE: u8 = 2;
const EXIT_CHECK: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "dicke",
    version,
    about = "Dicke-state preparation and restricted-access expansion simulator"
)]
struct Cli {
    /// Seed for shot sampling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the primary output here (atomically) instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for the primary output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    W3,
    D4,
    D5Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Statevector,
    Circuit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    PreMeasurement,
    PostSelectedSuccess,
}

impl From<Mode> for FidelityMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::PreMeasurement => FidelityMode::PreMeasurement,
            Mode::PostSelectedSuccess => FidelityMode::PostSelectedSuccess,
        }
    }
}

#[derive(Debug, Clone, Copy, clap::Args)]
struct Bipartition {
    /// Qubits in the source Dicke state.
    #[arg(long = "N", default_value_t = 4)]
    total: usize,
    /// Excitations in the source state.
    #[arg(long = "M1", default_value_t = 2)]
    excitations: usize,
    /// Accessible qubits.
    #[arg(long = "k", default_value_t = 3)]
    accessible: usize,
    /// Qubits added by the expansion.
    #[arg(long = "n", default_value_t = 1)]
    added: usize,
    /// Excitations added by the expansion.
    #[arg(long = "m1", default_value_t = 1)]
    added_excitations: usize,
}

impl Bipartition {
    fn params(&self) -> dicke_core::Result<BipartitionParams> {
        BipartitionParams::expansion(
            self.total,
            self.excitations,
            self.accessible,
            self.added,
            self.added_excitations,
        )
    }

    fn to_json(self) -> Value {
        json!({
            "N": self.total,
            "M1": self.excitations,
            "k": self.accessible,
            "n": self.added,
            "m1": self.added_excitations,
        })
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a prepared state or the circuit that prepares it.
    Prepare {
        #[arg(value_enum)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Emit::Statevector)]
        emit: Emit,
    },
    /// Sample the D4 to D5 expansion and write the outcome histogram.
    Sample {
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
    },
    /// Maximum success probability of a restricted-access expansion.
    Pmax {
        #[command(flatten)]
        bipartition: Bipartition,
    },
    /// Bipartite decompositions of the source and target Dicke states.
    Decompose {
        #[command(flatten)]
        bipartition: Bipartition,
    },
    /// Fidelity of the expansion under coherent over-rotation.
    Sweep {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta_min: f64,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        theta_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Mode::PostSelectedSuccess)]
        mode: Mode,
    },
    /// Run the analytic checks and print a JSON summary.
    Verify {
        /// JSON file overriding expected values.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

#[derive(Debug, Serialize)]
struct RunReport {
    command: String,
    seed: u64,
    parameters: Value,
    outputs: Value,
    tool_version: &'static str,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Check(String),
    Io(String),
}

impl From<dicke_core::Error> for Failure {
    fn from(e: dicke_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Check(_) => EXIT_CHECK,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Check(m) | Failure::Io(m) => m,
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Writes `contents` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)?;
    Ok(())
}

struct Context {
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
}

impl Context {
    /// Emits the primary output: `csv` in CSV mode, a [`RunReport`] in JSON mode.
    fn emit(
        &self,
        command: &str,
        parameters: Value,
        outputs: Value,
        csv: impl FnOnce() -> String,
    ) -> CmdResult {
        let text = match self.format {
            Format::Csv => csv(),
            Format::Json => {
                let report = RunReport {
                    command: command.to_owned(),
                    seed: self.seed,
                    parameters,
                    outputs,
                    tool_version: env!("CARGO_PKG_VERSION"),
                };
                let mut s = serde_json::to_string_pretty(&report)
                    .map_err(|e| Failure::Io(e.to_string()))?;
                s.push('\n');
                s
            }
        };
        self.write(&text)
    }

    fn write(&self, text: &str) -> CmdResult {
        match &self.out {
            Some(path) => write_atomic(path, text)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e:#}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| Failure::Io(e.to_string()))
            }
        }
    }

    /// Human-readable notes go to stdout when the primary output is a file.
    fn note(&self, line: &str) {
        if self.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

fn amplitudes_json(state: &StateVector) -> Value {
    let rows: Vec<Value> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(
            |(i, a)| json!({ "index": i, "bitstring": state.bitstring(i), "re": a.re, "im": a.im }),
        )
        .collect();
    Value::Array(rows)
}

fn prepare(ctx: &Context, target: Target, emit: Emit) -> CmdResult {
    let name = target
        .to_possible_value()
        .map(|v| v.get_name().to_owned())
        .unwrap_or_default();
    let params = json!({ "target": name, "emit": format!("{emit:?}").to_lowercase() });
    let circuit: Circuit = match target {
        Target::W3 => build_w3_circuit(),
        Target::D4 => build_d4_preparation_circuit(),
        Target::D5Analytic => build_d4_to_d5_circuit(),
    };
    match emit {
        Emit::Circuit => {
            let text = to_text(&circuit)?;
            ctx.emit("prepare", params, json!({ "circuit": text }), || {
                text.clone()
            })
        }
        Emit::Statevector => {
            let state = match target {
                Target::D5Analytic => dicke(5, 3)?,
                _ => circuit.run(&StateVector::zeros(circuit.n_qubits())?)?,
            };
            ctx.emit("prepare", params, amplitudes_json(&state), || {
                statevector_to_csv(&state)
            })
        }
    }
}

fn sample(ctx: &Context, shots: u64) -> CmdResult {
    let stats = run_protocol_stats(shots, ctx.seed)?;
    let histogram = Histogram::from_stats(&stats);
    let outputs = json!({
        "histogram": histogram,
        "successes": stats.successes,
        "estimated_p_s": stats.estimated_p_s,
    });
    ctx.emit("sample", json!({ "shots": shots }), outputs, || {
        histogram.to_csv()
    })?;
    ctx.note(&format!(
        "shots={shots} seed={} estimated_p_s={} reference=5/6 ({})",
        ctx.seed,
        format_sig(stats.estimated_p_s, 12),
        format_sig(5.0 / 6.0, 12)
    ));
    Ok(())
}

fn pmax(ctx: &Context, b: Bipartition) -> CmdResult {
    let bound = max_success_probability(&b.params()?)?;
    let decimal = bound.p_max.to_f64().unwrap_or(f64::NAN);
    let fraction = format!("{}/{}", bound.p_max.numer(), bound.p_max.denom());
    let q: Vec<Value> = bound
        .q
        .iter()
        .map(|(j, r)| json!({ "j": j, "q": format!("{}/{}", r.numer(), r.denom()) }))
        .collect();
    let outputs = json!({ "p_max": fraction, "decimal": decimal, "q": q });
    ctx.emit("pmax", b.to_json(), outputs, || {
        format!("{fraction} ≈ {decimal:.6}\n")
    })
}

fn decomposition_rows(
    part: &str,
    d: &DickeDecomposition,
    csv: &mut String,
    json_rows: &mut Vec<Value>,
) {
    for t in &d.terms {
        let weight = format!("{}/{}", t.weight.numer(), t.weight.denom());
        csv.push_str(&format!(
            "{part},{},{},{},{},{weight},{}\n",
            d.a_qubits,
            d.b_qubits,
            d.excitations - t.j,
            t.j,
            format_sig(t.coefficient, 12)
        ));
        json_rows.push(json!({
            "part": part,
            "a_qubits": d.a_qubits,
            "b_qubits": d.b_qubits,
            "a_excitations": d.excitations - t.j,
            "b_excitations": t.j,
            "weight": weight,
            "coefficient": t.coefficient,
        }));
    }
}

fn decompose(ctx: &Context, b: Bipartition) -> CmdResult {
    let params = b.params()?;
    let (src, tgt) = (decompose_source(&params)?, decompose_target(&params)?);
    let mut csv =
        String::from("part,a_qubits,b_qubits,a_excitations,b_excitations,weight,coefficient\n");
    let mut rows = Vec::new();
    decomposition_rows("source", &src, &mut csv, &mut rows);
    decomposition_rows("target", &tgt, &mut csv, &mut rows);
    ctx.emit("decompose", b.to_json(), Value::Array(rows), || csv)
}

fn sweep(ctx: &Context, min: f64, max: f64, steps: usize, mode: Mode) -> CmdResult {
    let grid = theta_grid(min, max, steps)?;
    let rows = fidelity_sweep(&grid, mode.into())?;
    let mode_name = mode
        .to_possible_value()
        .map(|v| v.get_name().to_owned())
        .unwrap_or_default();
    let params = json!({ "theta_min": min, "theta_max": max, "steps": steps, "mode": mode_name });
    let outputs = serde_json::to_value(&rows).map_err(|e| Failure::Io(e.to_string()))?;
    ctx.emit("sweep", params, outputs, || sweep_to_csv(&rows))
}

fn verify(ctx: &Context, fixture: Option<&Path>) -> CmdResult {
    let fixtures = match fixture {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<Fixtures>(&text)
                .map_err(|e| Failure::Usage(format!("invalid fixture {}: {e}", path.display())))?
        }
        None => Fixtures::default(),
    };
    let checks = run_checks(&fixtures)?;
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    let summary = json!({
        "passed": failed.is_empty(),
        "total": checks.len(),
        "failed": failed.len(),
        "checks": checks,
        "tool_version": env!("CARGO_PKG_VERSION"),
    });
    let mut text =
        serde_json::to_string_pretty(&summary).map_err(|e| Failure::Io(e.to_string()))?;
    text.push('\n');
    ctx.write(&text)?;
    if failed.is_empty() {
        return Ok(());
    }
    let names: Vec<String> = failed
        .iter()
        .map(|c| format!("{} (expected {}, actual {})", c.name, c.expected, c.actual))
        .collect();
    Err(Failure::Check(format!(
        "failed checks: {}",
        names.join(", ")
    )))
}

fn run(cli: Cli) -> CmdResult {
    let ctx = Context {
        seed: cli.seed,
        out: cli.out,
        format: cli.format,
    };
    match cli.command {
        Command::Prepare { target, emit } => prepare(&ctx, target, emit),
        Command::Sample { shots } => sample(&ctx, shots),
        Command::Pmax { bipartition } => pmax(&ctx, bipartition),
        Command::Decompose { bipartition } => decompose(&ctx, bipartition),
        Command::Sweep {
            theta_min,
            theta_max,
            steps,
            mode,
        } => sweep(&ctx, theta_min, theta_max, steps, mode),
        Command::Verify { fixture } => verify(&ctx, fixture.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_expansion_parameters() {
        let cli = Cli::try_parse_from([
            "dicke", "pmax", "--N", "5", "--M1", "3", "--k", "4", "--n", "1", "--m1", "0",
        ])
        .unwrap();
        let Command::Pmax { bipartition } = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(
            (
                bipartition.total,
                bipartition.excitations,
                bipartition.accessible,
                bipartition.added,
                bipartition.added_excitations
            ),
            (5, 3, 4, 1, 0)
        );
    }

    #[test]
    fn unknown_target_is_rejected() {
        assert!(Cli::try_parse_from(["dicke", "prepare", "d7"]).is_err());
    }
}
