mod grid;
mod inputs;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use qbcap::battery::capacity;
use qbcap::experiments::sweep::{run_sweep, write_csv, Example};
use qbcap::experiments::{format_sig, Suite};
use qbcap::linalg::{partial_trace, DensityMatrix, HermitianOperator, Spectrum};
use qbcap::measure::{select_optimal, Scheme};
use qbcap::model::{Couplings, Energies};

use inputs::{ModelParams, SubHamiltonian};

#[derive(Parser)]
#[command(
    name = "qbcap",
    version,
    about = "Quantum battery capacity under local projective measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity of a state for a total and/or subsystem Hamiltonian.
    Capacity(StateArgs),
    /// Measure C and keep AB; print every outcome.
    Scheme1(StateArgs),
    /// Measure BC and keep A; print every outcome.
    Scheme2(StateArgs),
    /// Noise/coupling sweep over one of the two examples, written as CSV.
    Sweep(SweepArgs),
    /// Randomized verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Copy)]
struct ModelFlags {
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    ea: f64,
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    eb: f64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    ec: f64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    jab: f64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    jac: f64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    jbc: f64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    jabc: f64,
}

impl ModelFlags {
    fn params(&self) -> ModelParams {
        ModelParams {
            energies: Energies {
                a: self.ea,
                b: self.eb,
                c: self.ec,
            },
            couplings: Couplings {
                ab: self.jab,
                ac: self.jac,
                bc: self.jbc,
            },
            triple: self.jabc,
        }
    }
}

#[derive(Args)]
struct StateArgs {
    /// preset:W, preset:GHZ, preset:mixed8, or a JSON state file.
    #[arg(long)]
    state: String,
    /// White-noise strength mixed into the state.
    #[arg(long, default_value_t = 0.0)]
    white: f64,
    /// preset:ex1, preset:ex2, or a JSON Hamiltonian file (default preset:ex1).
    #[arg(long)]
    ham: Option<String>,
    /// A, AB, or a JSON Hamiltonian on the leading subsystems.
    #[arg(long = "ham-sub")]
    ham_sub: Option<String>,
    #[command(flatten)]
    model: ModelFlags,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
    example: u32,
    #[arg(long)]
    out: String,
    /// key=v1,v2,... or key=start:stop:step; keys a|b|noise, J_AB, J_AC, J_BC, J_ABC.
    #[arg(long)]
    grid: Vec<String>,
    #[command(flatten)]
    model: ModelFlags,
}

#[derive(Args)]
struct VerifyArgs {
    /// thm3, thm4, lemma1, closed, or rank.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Report file; the report goes to stdout when absent.
    #[arg(long)]
    out: Option<String>,
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("QBCAP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("QBCAP_THREADS='{raw}' is not a thread count"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn spectrum_line(s: &Spectrum) -> String {
    s.values()
        .iter()
        .map(|&v| format_sig(v))
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_capacity(scope: &str, rho: &DensityMatrix, h: &HermitianOperator) -> Result<()> {
    let report = capacity(rho, h)?;
    println!("{scope} capacity: {}", format_sig(report.capacity));
    println!(
        "  state spectrum:  {}",
        spectrum_line(&report.state_spectrum)
    );
    println!(
        "  energy spectrum: {}",
        spectrum_line(&report.energy_spectrum)
    );
    Ok(())
}

fn cmd_capacity(args: &StateArgs) -> Result<()> {
    let p = args.model.params();
    let rho = inputs::load_state(&args.state, args.white)?;
    if args.ham.is_some() || args.ham_sub.is_none() {
        let h = inputs::load_hamiltonian(args.ham.as_deref(), &p)?;
        print_capacity("total", &rho, &h)?;
    }
    if let Some(sub) = &args.ham_sub {
        let sub = inputs::load_sub_hamiltonian(sub, inputs::preset_of(args.ham.as_deref()), &p)?;
        let reduced = partial_trace(&rho, &sub.keep)?;
        print_capacity(
            &format!("subsystem {}", inputs::subsystem_name(&sub.keep)),
            &reduced,
            &sub.op,
        )?;
    }
    Ok(())
}

fn cmd_scheme(args: &StateArgs, scheme: Scheme) -> Result<()> {
    let p = args.model.params();
    let rho = inputs::load_state(&args.state, args.white)?;
    let h = inputs::load_hamiltonian(args.ham.as_deref(), &p)?;
    let default_sub = match scheme {
        Scheme::One => "AB",
        Scheme::Two => "A",
    };
    let sub: SubHamiltonian = inputs::load_sub_hamiltonian(
        args.ham_sub.as_deref().unwrap_or(default_sub),
        inputs::preset_of(args.ham.as_deref()),
        &p,
    )?;
    if sub.keep != scheme.keep() {
        bail!(
            "--ham-sub {} acts on {}, but this scheme keeps {}",
            sub.label,
            inputs::subsystem_name(&sub.keep),
            inputs::subsystem_name(scheme.keep())
        );
    }
    let ens = scheme.run(&rho)?;
    let selection = select_optimal(&ens, scheme.keep(), &sub.op)?;
    let energy = h.spectrum()?;
    let kept = inputs::subsystem_name(scheme.keep());

    let (measured, scheme_no) = match scheme {
        Scheme::One => ("C", 1),
        Scheme::Two => ("BC", 2),
    };
    println!("scheme {scheme_no}: measure {measured}, keep {kept}");
    println!(
        "{:<6}{:<20}{:<20}{:<20}",
        "label",
        "probability",
        format!("capacity_{kept}"),
        "capacity_total"
    );
    for (label, prob) in ens.probabilities() {
        let Ok(outcome) = ens.outcome(label) else {
            println!(
                "{label:<6}{:<20}{:<20}{:<20}SKIPPED",
                format_sig(prob),
                "-",
                "-"
            );
            continue;
        };
        let reduced = selection
            .reduced_capacities
            .iter()
            .find(|(l, _)| *l == label)
            .map(|c| c.1)
            .expect("retained outcomes have reduced capacities");
        let total = qbcap::battery::capacity_with_energies(&outcome.state, &energy)?;
        let mut marks = String::new();
        if label == selection.label {
            marks.push_str("OPTIMAL");
            if selection.certified {
                marks.push_str(" CERTIFIED");
            }
        }
        println!(
            "{label:<6}{:<20}{:<20}{:<20}{marks}",
            format_sig(prob),
            format_sig(reduced),
            format_sig(total)
        );
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let example = Example::from_number(args.example)?;
    let p = args.model.params();
    let cfg = grid::build_config(example, &args.grid, p.energies, p.couplings)?;
    let records = run_sweep(&cfg)?;
    let file = File::create(&args.out).with_context(|| format!("cannot create '{}'", args.out))?;
    let mut out = BufWriter::new(file);
    write_csv(example, &records, &mut out)?;
    out.flush()?;
    let uncertified = records
        .iter()
        .filter(|r| !(r.certified_s1 && r.certified_s2))
        .count();
    eprintln!(
        "wrote {} rows to {} ({uncertified} rows with an uncertified selection)",
        records.len(),
        args.out
    );
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let suite: Suite = args.suite.parse()?;
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let report = suite.run(args.trials, args.seed);
    match &args.out {
        Some(path) => {
            std::fs::write(path, report.render())
                .with_context(|| format!("cannot write '{path}'"))?;
            println!("{}", report.summary());
        }
        None => print!("{}", report.render()),
    }
    Ok(report.is_success())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match &cli.command {
        Command::Capacity(a) => cmd_capacity(a)?,
        Command::Scheme1(a) => cmd_scheme(a, Scheme::One)?,
        Command::Scheme2(a) => cmd_scheme(a, Scheme::Two)?,
        Command::Sweep(a) => cmd_sweep(a)?,
        Command::Verify(a) => return cmd_verify(a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
