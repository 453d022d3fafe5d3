//! `lotdp`: solve, verify, generate and benchmark lot-sizing instances.
//!
//! Exit codes: 0 success, 1 input or resource error, 2 infeasible demand,
//! 3 solver disagreement.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use lotdp_core::dp::{solve_multi_with, MultiStrategy};
use lotdp_core::gen::{generate, sized_instance, GenConfig};
use lotdp_core::io::{instance_to_json, parse_instance, report_to_value, solution_to_value};
use lotdp_core::oracle::{
    grid_oracle_with_budget, structural_oracle, GRID_DEFAULT_BUDGET, STRUCTURAL_MAX_SUPPLIERS,
};
use lotdp_core::schedule::{build_schedule, timeline_csv};
use lotdp_core::{
    solution_cost, solve_instance, validate_instance, Error, Instance, Mode, Solution, SolveOptions,
};

#[derive(Parser)]
#[command(
    name = "lotdp",
    version,
    about = "Exact lot sizing over suppliers with volume limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Single,
    Multi,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Single => Mode::Single,
            ModeArg::Multi => Mode::Multi,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Sweep {
    #[value(name = "P")]
    Demand,
    #[value(name = "n")]
    Suppliers,
    #[value(name = "c")]
    HoldingRate,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance exactly and print the solution and solve report.
    Solve {
        file: PathBuf,
        /// Override the instance's delivery mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Write the JSON result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the per-H trace as CSV to stderr.
        #[arg(long)]
        trace: bool,
        /// Pretty-print and add decimal approximations.
        #[arg(long)]
        pretty: bool,
        /// Write the delivery timeline as CSV.
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Cross-check the dynamic program against both reference solvers.
    Verify {
        /// Instance file; omit when using --seed-batch.
        file: Option<PathBuf>,
        /// Verify this many generated instances instead of a file.
        #[arg(long)]
        seed_batch: Option<usize>,
        /// First seed of the generated batch.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest number of grid-oracle combinations to enumerate.
        #[arg(long, default_value_t = GRID_DEFAULT_BUDGET / 10)]
        grid_budget: u128,
    },
    /// Generate a random valid instance.
    Gen {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        pmax: i64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        cmax: i64,
        /// Smallest minimum batch drawn.
        #[arg(long, default_value_t = 1)]
        mmin: i64,
        /// Largest cap drawn.
        #[arg(long, default_value_t = 12)]
        mmax: i64,
        #[arg(long, default_value_t = 10)]
        alpha_max: i64,
        #[arg(long, default_value_t = 10)]
        beta_max: i64,
        #[arg(long, default_value_t = 1)]
        lambda_max: i64,
        #[arg(long, value_enum, default_value = "single")]
        mode: ModeArg,
        /// Make the demand exceed total capacity.
        #[arg(long)]
        infeasible: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure table sizes and wall time over a parameter sweep.
    Bench {
        #[arg(long, value_enum)]
        sweep: Sweep,
        /// Comma-separated sweep values.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<i64>>,
        /// Fixed supplier count for P and c sweeps.
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Fixed demand for n and c sweeps.
        #[arg(long, default_value_t = 50)]
        p: i64,
        /// Fixed holding rate for P and n sweeps.
        #[arg(long, default_value_t = 1)]
        c: i64,
        #[arg(long, value_enum, default_value = "single")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Infeasible(String),
    Disagreement(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Infeasible(_) => 2,
            Failure::Disagreement(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Infeasible(m) | Failure::Disagreement(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Infeasible => Failure::Infeasible(e.to_string()),
            Error::InvalidInstance(report) if only_capacity(report) => {
                Failure::Infeasible(report.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn only_capacity(report: &lotdp_core::ValidationReport) -> bool {
    report.is_infeasible_demand() && report.violations.len() == 1
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve {
            file,
            mode,
            out,
            trace,
            pretty,
            schedule,
        } => cmd_solve(
            &file,
            mode,
            out.as_deref(),
            trace,
            pretty,
            schedule.as_deref(),
        ),
        Command::Verify {
            file,
            seed_batch,
            seed,
            grid_budget,
        } => cmd_verify(file.as_deref(), seed_batch, seed, grid_budget),
        Command::Gen {
            n,
            pmax,
            seed,
            cmax,
            mmin,
            mmax,
            alpha_max,
            beta_max,
            lambda_max,
            mode,
            infeasible,
            out,
        } => {
            let cfg = GenConfig {
                n,
                p_max: pmax,
                c_max: cmax,
                m_min: mmin,
                bound_max: mmax,
                alpha_max,
                beta_max,
                lambda_max,
                mode: mode.into(),
                infeasible,
            };
            cmd_gen(&cfg, seed, out.as_deref())
        }
        Command::Bench {
            sweep,
            values,
            n,
            p,
            c,
            mode,
            seed,
            out,
        } => cmd_bench(sweep, values, (n, p, c), mode.into(), seed, out.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn check_instance(inst: &Instance) -> Outcome {
    let report = validate_instance(inst);
    if report.is_ok() {
        Ok(())
    } else if only_capacity(&report) {
        Err(Failure::Infeasible(report.to_string()))
    } else {
        Err(Failure::Input(format!("invalid instance: {report}")))
    }
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(
    file: &Path,
    mode: Option<ModeArg>,
    out: Option<&Path>,
    trace: bool,
    pretty: bool,
    schedule: Option<&Path>,
) -> Outcome {
    let mut inst = read_instance(file)?;
    if let Some(m) = mode {
        inst = inst.with_mode(m.into());
    }
    check_instance(&inst)?;
    let report = solve_instance(&inst, &SolveOptions::from_env())?;

    let audited = solution_cost(&inst, &report.solution)?;
    if audited != report.solution.objective {
        return Err(Failure::Input(format!(
            "internal error: objective {} differs from audited cost {audited}",
            report.solution.objective
        )));
    }

    if trace {
        eprint!("{}", report.trace_csv());
    }
    if let Some(path) = schedule {
        let tl = build_schedule(&report.solution, inst.lambda);
        emit(&timeline_csv(&tl), Some(path))?;
    }
    let value = json!({
        "solution": solution_to_value(&report.solution, pretty),
        "report": report_to_value(&report),
    });
    let mut text = if pretty {
        serde_json::to_string_pretty(&value)
    } else {
        serde_json::to_string(&value)
    }
    .expect("JSON values serialize");
    text.push('\n');
    emit(&text, out)
}

struct Verdict {
    agree: bool,
    grid_skipped: bool,
    text: String,
}

fn describe(sol: &Solution) -> String {
    solution_to_value(sol, false).to_string()
}

fn verify_one(inst: &Instance, grid_budget: u128, strict: bool) -> Result<Verdict, Failure> {
    check_instance(inst)?;
    if inst.mode == Mode::Multi {
        let opts = SolveOptions::from_env();
        let a = solve_multi_with(inst, MultiStrategy::Aggregated, &opts)?.solution;
        let d = solve_multi_with(inst, MultiStrategy::Duplication, &opts)?.solution;
        let agree = a.objective == d.objective;
        let mut text = format!("aggregated  {}\nduplication {}\n", a.objective, d.objective);
        if !agree {
            let _ = writeln!(
                text,
                "aggregated solution:  {}\nduplication solution: {}",
                describe(&a),
                describe(&d)
            );
        }
        return Ok(Verdict {
            agree,
            grid_skipped: false,
            text,
        });
    }
    if inst.n() > STRUCTURAL_MAX_SUPPLIERS {
        return Err(Failure::Input(format!(
            "size guard: {} suppliers, the structural oracle accepts at most {STRUCTURAL_MAX_SUPPLIERS}",
            inst.n()
        )));
    }
    let dp = solve_instance(inst, &SolveOptions::from_env())?.solution;
    let structural = structural_oracle(inst)?;
    let grid = match grid_oracle_with_budget(inst, inst.n(), grid_budget) {
        Ok(sol) => Some(sol),
        Err(Error::ResourceLimit { needed, limit, .. }) if strict => {
            return Err(Failure::Input(format!(
                "size guard: grid oracle needs {needed} combinations, budget is {limit}"
            )));
        }
        Err(Error::ResourceLimit { .. }) => None,
        Err(e) => return Err(e.into()),
    };

    let mut agree = dp.objective == structural.objective;
    let mut text = format!(
        "dp          {}\nstructural  {}\n",
        dp.objective, structural.objective
    );
    match &grid {
        Some(g) => {
            agree &= g.objective == dp.objective;
            let _ = writeln!(text, "grid        {}", g.objective);
        }
        None => text.push_str("grid        skipped (over budget)\n"),
    }
    if !agree {
        let _ = writeln!(text, "dp solution:         {}", describe(&dp));
        let _ = writeln!(text, "structural solution: {}", describe(&structural));
        if let Some(g) = &grid {
            let _ = writeln!(text, "grid solution:       {}", describe(g));
        }
    }
    Ok(Verdict {
        agree,
        grid_skipped: grid.is_none(),
        text,
    })
}

fn cmd_verify(file: Option<&Path>, batch: Option<usize>, seed: u64, grid_budget: u128) -> Outcome {
    match (file, batch) {
        (Some(path), None) => {
            let inst = read_instance(path)?;
            let v = verify_one(&inst, grid_budget, true)?;
            print!("{}", v.text);
            if v.agree {
                println!("agree");
                Ok(())
            } else {
                Err(Failure::Disagreement("solvers disagree".into()))
            }
        }
        (None, Some(count)) => {
            let mut agreed = 0;
            let mut skipped = 0;
            let mut diffs = String::new();
            for i in 0..count as u64 {
                let s = seed.wrapping_add(i);
                let cfg = GenConfig {
                    n: 1 + (s % 4) as usize,
                    lambda_max: 3,
                    ..GenConfig::default()
                };
                let inst = generate(&cfg, s).map_err(|e| Failure::Input(e.to_string()))?;
                let v = verify_one(&inst, grid_budget, false)?;
                skipped += usize::from(v.grid_skipped);
                if v.agree {
                    agreed += 1;
                } else {
                    let _ = write!(diffs, "seed {s}:\n{}{}\n", instance_to_json(&inst), v.text);
                }
            }
            print!("{diffs}");
            println!("{agreed}/{count} agree (grid oracle skipped on {skipped} over budget)");
            if agreed == count {
                Ok(())
            } else {
                Err(Failure::Disagreement(format!(
                    "{} disagreements",
                    count - agreed
                )))
            }
        }
        _ => Err(Failure::Input(
            "give either an instance file or --seed-batch".into(),
        )),
    }
}

fn cmd_gen(cfg: &GenConfig, seed: u64, out: Option<&Path>) -> Outcome {
    let inst = generate(cfg, seed).map_err(|e| Failure::Input(e.to_string()))?;
    let mut text = instance_to_json(&inst);
    text.push('\n');
    emit(&text, out)
}

fn cmd_bench(
    sweep: Sweep,
    values: Option<Vec<i64>>,
    (n, p, c): (usize, i64, i64),
    mode: Mode,
    seed: u64,
    out: Option<&Path>,
) -> Outcome {
    let values = values.unwrap_or_else(|| match sweep {
        Sweep::Demand => vec![50, 100, 200],
        Sweep::Suppliers => vec![2, 4, 8],
        Sweep::HoldingRate => vec![1, 2, 3],
    });
    let mut csv = String::from("n,P,c_hold,cells,wall_micros,objective_num,objective_den\n");
    for v in values {
        let (n, p, c) = match sweep {
            Sweep::Demand => (n, v, c),
            Sweep::Suppliers => (usize::try_from(v).unwrap_or(0), p, c),
            Sweep::HoldingRate => (n, p, v),
        };
        let inst =
            sized_instance(n, p, c, mode, seed).map_err(|e| Failure::Input(e.to_string()))?;
        let started = Instant::now();
        let report = solve_instance(&inst, &SolveOptions::from_env())?;
        let micros = started.elapsed().as_micros();
        let obj = report.solution.objective;
        let _ = writeln!(
            csv,
            "{n},{p},{c},{},{micros},{},{}",
            report.table_cells_filled,
            obj.num(),
            obj.den()
        );
    }
    emit(&csv, out)
}
