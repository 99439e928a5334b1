use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dampsym::cli::{exit_code, run, Command, RunConfig, SpectrumMode, EXIT_CONFIG};
use dampsym::error::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "dampsym", version, about = "Symmetry and evolution checks for the damped harmonic oscillator")]
struct Cli {
    /// JSON run configuration; the subcommand may be omitted when given
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Args, Debug)]
struct Overrides {
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    omega: Option<f64>,
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// branch constant of the reduction
    #[arg(long = "A", global = true, allow_negative_numbers = true)]
    a: Option<f64>,
    /// truncation level of the damped-particle algebra
    #[arg(long = "N", global = true)]
    n: Option<usize>,
    /// output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Time evolution runs
    Simulate {
        #[arg(value_enum)]
        target: SimTarget,
    },
    /// Algebra and consistency checks
    Verify {
        #[arg(value_enum)]
        what: VerifyTarget,
        /// reduction time window as `t_min:t_max`
        #[arg(long, value_parser = parse_window)]
        t_window: Option<(f64, f64)>,
    },
    /// Single-valued spectrum of the mixed representation
    Spectrum {
        #[arg(long, allow_negative_numbers = true)]
        n_min: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        n_max: Option<i64>,
        /// comma-separated lambda values
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambdas: Option<Vec<f64>>,
        /// scan an energy window instead of enumerating labels
        #[arg(long)]
        scan: bool,
    },
    /// Arnold transformation roundtrip and solution transport
    QatRoundtrip,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SimTarget {
    Ck,
    Bateman,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyTarget {
    CkAlgebra,
    BatemanAlgebra,
    Group,
    Reduction,
    Dp,
}

fn parse_window(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected t_min:t_max")?;
    let a = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn build(cli: Cli) -> Result<RunConfig> {
    let command = cli.command.as_ref().map(|c| match c {
        Cmd::Simulate { target: SimTarget::Ck } => Command::SimulateCk,
        Cmd::Simulate { target: SimTarget::Bateman } => Command::SimulateBateman,
        Cmd::Verify { what, .. } => match what {
            VerifyTarget::CkAlgebra => Command::VerifyCkAlgebra,
            VerifyTarget::BatemanAlgebra => Command::VerifyBatemanAlgebra,
            VerifyTarget::Group => Command::VerifyGroup,
            VerifyTarget::Reduction => Command::VerifyReduction,
            VerifyTarget::Dp => Command::VerifyDp,
        },
        Cmd::Spectrum { .. } => Command::Spectrum,
        Cmd::QatRoundtrip => Command::QatRoundtrip,
    });
    let mut cfg = match (&cli.config, command) {
        (Some(path), cmd) => {
            let mut c = RunConfig::load(path)?;
            if let Some(cmd) = cmd {
                c.command = cmd;
            }
            c
        }
        (None, Some(cmd)) => RunConfig::new(cmd),
        (None, None) => return Err(Error::config("command", "give a subcommand or --config")),
    };

    let o = &cli.overrides;
    if let Some(g) = o.gamma {
        cfg.params.gamma = g;
    }
    if let Some(w) = o.omega {
        cfg.params.omega = w;
    }
    if let Some(dt) = o.dt {
        cfg.evolve.dt = dt;
        cfg.bateman.dt = dt;
    }
    if let Some(a) = o.a {
        cfg.reduction.a = a;
    }
    if let Some(n) = o.n {
        cfg.dp.n = n;
    }
    if let Some(out) = &o.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = o.seed {
        cfg.seed = seed;
    }
    match cli.command {
        Some(Cmd::Verify { t_window: Some(w), .. }) => cfg.reduction.t_window = w,
        Some(Cmd::Spectrum { n_min, n_max, lambdas, scan }) => {
            if let Some(v) = n_min {
                cfg.spectrum.n_min = v;
            }
            if let Some(v) = n_max {
                cfg.spectrum.n_max = v;
            }
            if let Some(v) = lambdas {
                cfg.spectrum.lambdas = v;
            }
            if scan {
                cfg.spectrum.mode = SpectrumMode::Scan;
            }
        }
        _ => {}
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let start = std::time::Instant::now();
    let result = run(&cfg);
    let code = exit_code(&result);
    match &result {
        Ok(o) => {
            let status = if o.passed { "PASS" } else { "FAIL" };
            println!("{status} {} ({:.2} s)", o.command, start.elapsed().as_secs_f64());
            for a in &o.artifacts {
                println!("  wrote {}", a.display());
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(code as u8)
}
