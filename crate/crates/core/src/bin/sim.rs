use clap::{Args, Parser, Subcommand};
use dmofdm::analysis;
use dmofdm::constellation::ConstellationPair;
use dmofdm::harness::{self, verify, SchemeId, SimulationPlan};
use dmofdm::index_codebook::IndexCodebook;
use std::path::PathBuf;
use std::process::ExitCode;

/// DM-OFDM-IM link simulator.
#[derive(Parser)]
#[command(name = "sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo BER sweep for one scheme, written as CSV.
    Ber(BerArgs),
    /// Distance / energy report for the four shipped constellation pairs.
    Analyze {
        /// Also write the report as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in verification suite.
    Verify {
        /// Detector-equivalence trials per scheme.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print the constellation and index-codebook tables.
    Tables,
}

#[derive(Args)]
struct BerArgs {
    /// Key = value file with the same keys as these flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<SchemeId>,
    /// Eb/N0 grid in dB: start:step:stop, a single value, or a list.
    #[arg(long)]
    ebn0: Option<String>,
    #[arg(long)]
    max_groups: Option<u64>,
    /// Stop a point after this many bit errors (0 = never).
    #[arg(long)]
    target_errors: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Transmit without noise.
    #[arg(long)]
    noiseless: bool,
    /// Write elapsed_s as 0 so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

impl BerArgs {
    fn plan(self) -> dmofdm::Result<SimulationPlan> {
        let mut plan = match &self.config {
            Some(path) => harness::load_config(path)?,
            None => SimulationPlan::default(),
        };
        if let Some(v) = self.scheme {
            plan.scheme = v;
        }
        if let Some(v) = &self.ebn0 {
            plan.ebn0_db = harness::parse_grid(v)?;
        }
        if let Some(v) = self.max_groups {
            plan.max_groups = v;
        }
        if let Some(v) = self.target_errors {
            plan.target_errors = v;
        }
        if let Some(v) = self.seed {
            plan.seed = v;
        }
        if let Some(v) = self.workers {
            plan.workers = v;
        }
        if self.out.is_some() {
            plan.out = self.out;
        }
        plan.noiseless |= self.noiseless;
        plan.timing &= !self.no_timing;
        Ok(plan)
    }
}

fn ber(args: BerArgs) -> dmofdm::Result<()> {
    let plan = args.plan()?;
    let records = harness::run_sweep(&plan)?;
    for r in &records {
        let note = if r.censored() { "  (no errors: censored)" } else { "" };
        eprintln!(
            "{} {:>6.2} dB  ber {:.3e}  errors {}  groups {}{note}",
            r.scheme, r.ebn0_db, r.ber, r.errors, r.groups
        );
    }
    match &plan.out {
        Some(path) => harness::write_csv(&records, path)?,
        None => print!("{}", harness::to_csv(&records)),
    }
    Ok(())
}

fn analyze(out: Option<PathBuf>) -> dmofdm::Result<()> {
    print!("{}", analysis::report_text()?);
    if let Some(path) = out {
        std::fs::write(path, analysis::report_csv()?)?;
    }
    Ok(())
}

fn run_verify(trials: usize, seed: u64) -> dmofdm::Result<bool> {
    let checks = verify::run_all(trials, seed)?;
    for c in &checks {
        println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn tables() -> dmofdm::Result<()> {
    for order in [4, 16] {
        for (name, pair) in [
            ("conventional", ConstellationPair::conventional(order)?),
            ("proposed", ConstellationPair::proposed(order)?),
        ] {
            println!("# {name} pair, M = {order}, mode A");
            print!("{}", pair.a.to_table());
            println!("# {name} pair, M = {order}, mode B");
            print!("{}", pair.b.to_table());
            println!();
        }
    }
    println!("# index codebook, n = 4, k = 2");
    print!("{}", IndexCodebook::n4_k2().to_table());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ber(args) => ber(args).map(|_| true),
        Command::Analyze { out } => analyze(out).map(|_| true),
        Command::Verify { trials, seed } => run_verify(trials, seed),
        Command::Tables => tables().map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
