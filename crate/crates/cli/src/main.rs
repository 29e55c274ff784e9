use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lyapabs::error::InputCode;
use lyapabs::lyapunov::{slice_descent_check, verify_contraction};
use lyapabs::pipeline::{run_abstraction, run_pipeline, PipelineOptions, PipelineReport};
use lyapabs::problem::{load_problem, Problem};
use lyapabs::rational::{format_pq, parse_rational, to_f64};
use lyapabs::simulate::simulate_abstraction;
use lyapabs::{Error, Point, Result};

/// Bisimulation quotients of stable linear systems and LTL verification.
#[derive(Parser)]
#[command(name = "lyapabs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and audit the quotient, export it.
    Abstract(Common),
    /// Full run: quotient, model checking, cross-validation, exports.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Replace the formula given in the problem file.
        #[arg(long)]
        formula: Option<String>,
    },
    /// Certify the contraction rate of the Lyapunov function.
    CheckLf { problem: PathBuf },
    /// Simulate one trajectory and compare it with the quotient word.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Initial state, comma-separated decimals or fractions.
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
    },
}

#[derive(Args)]
struct Common {
    /// Problem file (JSON).
    problem: PathBuf,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Number of cross-validation samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Write SVG plots (planar problems only).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    svg: Option<bool>,
    /// Seed for sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Skip the exact partition audit.
    #[arg(long)]
    no_audit: bool,
}

impl Common {
    fn load(&self) -> Result<(Problem, PipelineOptions)> {
        let problem = load_problem(&self.problem)?;
        let mut opts = PipelineOptions::from_problem(&problem);
        if self.out_dir.is_some() {
            opts.out_dir = self.out_dir.clone();
        }
        opts.sample_count = self.samples.unwrap_or(opts.sample_count);
        opts.svg = self.svg.unwrap_or(opts.svg);
        opts.seed = self.seed.unwrap_or(opts.seed);
        opts.audit = !self.no_audit;
        Ok((problem, opts))
    }
}

fn finish(report: &PipelineReport) -> Result<()> {
    print!("{}", report.text());
    report.check()
}

fn check_lf(path: &PathBuf) -> Result<()> {
    let problem = load_problem(path)?;
    let rho_star = verify_contraction(&problem.lf, &problem.system)?;
    println!(
        "certified contraction rate: {} ~ {:.6}",
        format_pq(&rho_star),
        to_f64(&rho_star)
    );
    println!("declared rho: {}", format_pq(problem.lf.rho()));
    println!("levels: N={}", problem.levels.n());
    for (i, g) in problem.levels.gammas().iter().enumerate() {
        println!("  gamma_{i} = {} ~ {:.6}", format_pq(g), to_f64(g));
    }
    let descent = slice_descent_check(&problem.lf, &problem.system, &problem.levels)?;
    println!("slice descent: {}", if descent { "holds" } else { "fails" });
    if !descent {
        return Err(Error::input(
            InputCode::Contraction,
            "sublevel sets are not mapped inward",
        ));
    }
    Ok(())
}

fn simulate(common: &Common, x0: &str) -> Result<()> {
    let (problem, mut opts) = common.load()?;
    opts.out_dir = None;
    let coords = x0
        .split(',')
        .map(|t| parse_rational(t.trim()))
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            found: coords.len(),
        });
    }
    let x = Point::new(coords);
    let report = run_abstraction(&problem, &opts)?;
    let abs = &report.abstraction;
    if !abs.x_cell.contains_point(&x)? {
        return Err(Error::input(InputCode::Malformed, format!("x0 = {x} lies outside X")));
    }
    let traj = simulate_abstraction(abs, &x)?;
    for (k, (p, o)) in traj.points.iter().zip(&traj.observations).enumerate() {
        let approx: Vec<String> = p.coords().iter().map(|v| format!("{:.6}", to_f64(v))).collect();
        println!("x{k} = ({}) obs={o}", approx.join(", "));
    }
    let block = abs.cell_of(&x)?;
    let abstract_word = abs.word(block)?;
    println!("concrete word: {}", traj.word());
    println!("quotient word: {abstract_word} (state {block})");
    if abstract_word != traj.word() {
        return Err(Error::invariant("concrete and quotient words differ"));
    }
    report.check()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Abstract(common) => {
            let (problem, opts) = common.load()?;
            finish(&run_abstraction(&problem, &opts)?)
        }
        Command::Verify { common, formula } => {
            let (mut problem, opts) = common.load()?;
            if let Some(text) = formula {
                problem = problem.with_formula(&text)?;
            }
            finish(&run_pipeline(&problem, &opts)?)
        }
        Command::CheckLf { problem } => check_lf(&problem),
        Command::Simulate { common, x0 } => simulate(&common, &x0),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
