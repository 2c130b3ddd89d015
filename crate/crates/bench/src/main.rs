use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pvn_bench::report::{output_path, write_json};
use pvn_bench::runner::write_phase_mask;
use pvn_bench::sweep::write_sweep;
use pvn_bench::{find_ecut, load_config, run_experiment, sweep_hbar, BenchError, RunOptions};

/// pvN/bvN/FGH eigensolver experiments.
///
/// CONFIG is an INI file or the name of a built-in preset. Exit status: 0 ok,
/// 2 config error, 3 numerical failure, 4 accuracy gate failure.
#[derive(Parser)]
#[command(name = "pvn-bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for result files.
    #[arg(long, global = true, default_value = "pvn-out")]
    out_dir: PathBuf,
    /// Digits required by the accuracy gate (overrides the config).
    #[arg(long, global = true)]
    tolerance_digits: Option<u32>,
    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration and compare with the analytic levels.
    Solve { config: String },
    /// Find the cut energy that keeps a given number of lattice cells.
    FindEcut {
        config: String,
        #[arg(long)]
        target: usize,
    },
    /// Basis-efficiency sweep over the ħ values of the config's [sweep] section.
    SweepHbar { config: String },
    /// Write the kept/dropped state of every lattice cell.
    PhaseMask { config: String },
}

fn run(cli: &Cli) -> Result<(), BenchError> {
    let say = |line: String| {
        if !cli.quiet {
            println!("{line}");
        }
    };
    match &cli.command {
        Command::Solve { config } => {
            let config = load_config(config)?;
            let options = RunOptions {
                out_dir: Some(cli.out_dir.clone()),
                tolerance_digits: cli.tolerance_digits,
            };
            let doc = run_experiment(&config, &options)?;
            say(format!(
                "{} [{}]: basis {}, residual {:.2e}, {:.2} s",
                doc.label,
                doc.method,
                doc.basis_size,
                doc.residual_max.unwrap_or(f64::NAN),
                doc.elapsed_seconds
            ));
            for row in &doc.levels {
                say(format!(
                    "  n={:<3} computed {:>22.15} oracle {:>22.15} error {:>10.3e}",
                    row.quantum_number, row.computed, row.oracle, row.error
                ));
            }
            for w in &doc.warnings {
                say(format!("warning: {w}"));
            }
            if let Some(passed) = doc.gate_passed {
                say(format!("gate: {}", if passed { "pass" } else { "FAIL" }));
            }
            say(format!(
                "wrote {}",
                cli.out_dir.join(&config.report.result_file).display()
            ));
            doc.gate_result()
        }
        Command::FindEcut { config, target } => {
            let config = load_config(config)?;
            let selection = find_ecut(&config, *target)?;
            let path = output_path(&cli.out_dir, "ecut.json")?;
            write_json(&path, &selection)?;
            say(format!(
                "target {} -> e_cut {} keeps {} cells",
                selection.target_count, selection.e_cut, selection.achieved_count
            ));
            if let Some(w) = &selection.warning {
                say(format!("warning: {w}"));
            }
            Ok(())
        }
        Command::SweepHbar { config } => {
            let config = load_config(config)?;
            let report = sweep_hbar(&config, cli.tolerance_digits)?;
            let paths = write_sweep(&report, &cli.out_dir)?;
            say(format!(
                "shell E = {}: rectangle/shell area = {:.4}, gate {:e}",
                report.e_shell, report.shell.area_ratio, report.tolerance.value
            ));
            for p in &report.points {
                let bvn = p.bvn.as_ref().map_or("failed".to_string(), |b| {
                    format!("eta {:.4} ({} cells)", b.eta, b.basis_size)
                });
                say(format!(
                    "  hbar {:<8} N {:<5} states {:<4} bvn {bvn}, rectangle eta {:.4}",
                    p.hbar, p.grid_points, p.states_below_cut, p.rectangle.eta
                ));
            }
            for path in paths {
                say(format!("wrote {}", path.display()));
            }
            let failures = report.failures();
            if failures.is_empty() {
                Ok(())
            } else {
                let text: Vec<String> = failures
                    .iter()
                    .map(|(h, f)| format!("hbar {h}: {f}"))
                    .collect();
                Err(BenchError::AccuracyGate(text.join("; ")))
            }
        }
        Command::PhaseMask { config } => {
            let config = load_config(config)?;
            let (path, rows) = write_phase_mask(&config, &cli.out_dir)?;
            let kept = rows.iter().filter(|r| r.kept == 1).count();
            say(format!(
                "{} of {} cells kept, wrote {}",
                kept,
                rows.len(),
                path.display()
            ));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
