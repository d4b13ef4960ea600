use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kahlerq::checks::{self, Context, GeometrySpec, Setup};
use kahlerq::fedosov::{classical_flat_section, quantum_flat_section, star_product};
use kahlerq::fock::module_action;
use kahlerq::toeplitz::toeplitz_at_basepoint;
use kahlerq::{HalfInt, WeylForm};
use kahlerq_cli::config::{parse_alpha, ConfigError, Report};
use kahlerq_cli::{expr, run_suite, Config};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "kahlerq", version, about = "Exact jet-level checks for Wick-type quantization on Kähler manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks listed in a JSON config and write a JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "kahlerq-report.json")]
        out: PathBuf,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long, env = "KAHLERQ_JOBS")]
        jobs: Option<usize>,
    },
    /// Print the symbol of f ⋆ g.
    Star {
        #[arg(short)]
        f: String,
        #[arg(short)]
        g: String,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Print the flat section of f (quantum by default).
    FlatSection {
        #[arg(short)]
        f: String,
        /// Print the classical flat section instead.
        #[arg(long)]
        classical: bool,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Apply the basepoint Toeplitz operator of f to the holomorphic section s.
    Toeplitz {
        #[arg(short)]
        f: String,
        #[arg(short)]
        s: String,
        /// Also compute the module action and fail if the two disagree.
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Print a check's identity and its residual in a saved report.
    Report {
        #[arg(long)]
        check: String,
        #[arg(long, default_value = "kahlerq-report.json")]
        report: PathBuf,
    },
    /// List the check catalog.
    List,
}

#[derive(Args, Clone)]
struct EngineArgs {
    /// flat | fs | hyp
    #[arg(long, default_value = "flat")]
    geometry: String,
    #[arg(short, long, default_value_t = 1)]
    n: usize,
    /// zero | minus-hbar-ricci
    #[arg(long, default_value = "zero")]
    alpha: String,
    #[arg(long, default_value_t = 6)]
    weight: i32,
    #[arg(long, default_value_t = 8)]
    jet: i32,
    #[arg(long, default_value_t = 3)]
    hbar: i32,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Expr(#[from] expr::ExprError),
    #[error("{0}")]
    Engine(#[from] kahlerq::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(_) => 1,
            CliError::Usage(_) | CliError::Config(_) | CliError::Expr(_) | CliError::Io { .. } => 2,
        }
    }
}

impl EngineArgs {
    fn context(&self) -> Result<Context, CliError> {
        if self.weight <= 0 || self.jet <= 0 || self.hbar <= 0 {
            return Err(CliError::Usage("caps must be positive".into()));
        }
        if self.n == 0 || self.n > kahlerq::algebra::MAX_DIM {
            return Err(CliError::Usage(format!("n must be between 1 and {}", kahlerq::algebra::MAX_DIM)));
        }
        let kind = self.geometry.parse().map_err(|e: kahlerq::Error| CliError::Usage(e.to_string()))?;
        let mut setup = Setup::new(GeometrySpec::Builtin { kind, n: self.n }, parse_alpha(&self.alpha)?, self.weight, self.jet);
        setup.hbar_order = self.hbar;
        Ok(Context::new(&setup)?)
    }

    fn parse(&self, text: &str) -> Result<WeylForm, CliError> {
        Ok(expr::parse(text, self.n)?)
    }

    fn truncate(&self, w: &WeylForm) -> WeylForm {
        let h = HalfInt::from_int(self.hbar);
        w.filter(|k| k.hbar <= h)
    }
}

fn caps_note(w: &WeylForm) {
    let show = |c: i32| if c >= kahlerq::EXACT { "exact".to_string() } else { c.to_string() };
    eprintln!("[weight cap {}, jet cap {}]", show(w.weight_cap()), show(w.jet_cap()));
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Verify { config, out, jobs } => {
            let cfg = Config::from_json(&read(&config)?)?;
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
            let report = run_suite(&cfg, jobs)?;
            for r in &report.checks {
                let residual = r.residual_max_abs.as_deref().unwrap_or("none");
                println!(
                    "{} {:40} residual {:>6} ({} terms) {:.2}s",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    residual,
                    r.residual_terms,
                    r.wall_seconds
                );
                for n in &r.notes {
                    println!("     {n}");
                }
            }
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            std::fs::write(&out, text + "\n").map_err(|source| CliError::Io { path: out.clone(), source })?;
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Star { f, g, engine } => {
            let (f, g) = (engine.parse(&f)?, engine.parse(&g)?);
            let ctx = engine.context()?;
            let p = engine.truncate(&star_product(&f, &g, &ctx.connection)?);
            println!("{}", expr::print(&p));
            caps_note(&p);
            Ok(ExitCode::SUCCESS)
        }
        Command::FlatSection { f, classical, engine } => {
            let f = engine.parse(&f)?;
            let ctx = engine.context()?;
            let o =
                if classical { classical_flat_section(&f, &ctx.connection)? } else { quantum_flat_section(&f, &ctx.connection)? };
            let o = engine.truncate(&o);
            println!("{}", expr::print(&o));
            caps_note(&o);
            Ok(ExitCode::SUCCESS)
        }
        Command::Toeplitz { f, s, compare, engine } => {
            let f = engine.parse(&f)?;
            let s = engine.parse(&s)?;
            let s_jet = expr::to_jet(&s)
                .filter(|j| j.is_holomorphic())
                .ok_or_else(|| CliError::Usage("s must be holomorphic and free of h".into()))?;
            let ctx = engine.context()?;
            let t = toeplitz_at_basepoint(&f, &s, &ctx.connection)?.to_weyl();
            println!("{}", expr::print(&engine.truncate(&t)));
            caps_note(&t);
            if compare {
                let m = module_action(&f, &s_jet.with_order(engine.jet), &ctx.connection)?.amplitude.eval_at_zero();
                let diff = engine.truncate(&m.sub(&t));
                println!("{}", expr::print(&engine.truncate(&m)));
                caps_note(&m);
                if !diff.is_zero() {
                    eprintln!("module action and Toeplitz operator differ by {}", expr::print(&diff));
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { check, report } => {
            let anchor = checks::anchor(&check).ok_or_else(|| CliError::Usage(format!("unknown check `{check}`")))?;
            println!("{check}: {anchor}");
            if !report.exists() {
                println!("no saved report at {}", report.display());
                return Ok(ExitCode::SUCCESS);
            }
            let saved: Report = serde_json::from_str(&read(&report)?).map_err(ConfigError::from)?;
            let Some(r) = saved.checks.iter().find(|r| r.id == check) else {
                println!("not run in {}", report.display());
                return Ok(ExitCode::SUCCESS);
            };
            println!(
                "residual {} ({} terms), {}",
                r.residual_max_abs.as_deref().unwrap_or("none"),
                r.residual_terms,
                if r.pass { "pass" } else { "fail" }
            );
            for n in &r.notes {
                println!("  {n}");
            }
            Ok(if r.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::List => {
            for c in checks::CATALOG {
                println!("{:32} {}", c.id, c.anchor);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
