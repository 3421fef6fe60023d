use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use ncy_core::action::CyclicAction;
use ncy_core::cohomology::h1;
use ncy_core::pipeline::{h1_section, run, RunOptions};
use ncy_core::report::{pretty_labels, Report, SnfReport};
use ncy_core::scenario::{builtin, Scenario, ScenarioError};
use ncy_core::serde_ext::JsonInt;
use ncy_core::IntMatrix;

// Output errors such as a closed pipe are not worth a panic.
macro_rules! say {
    () => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock());
    }};
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

macro_rules! say_raw {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser, Debug)]
#[command(name = "ncy", version, about = "Lattice certificates for numerically Calabi-Yau orders on K3 double covers")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of order classes listed explicitly.
    #[arg(long, global = true, default_value_t = 256, value_name = "K")]
    list_cap: usize,
    /// Print only the verdict line.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full pipeline on a built-in scenario or a scenario file.
    Verify {
        #[command(subcommand)]
        target: Target,
    },
    /// Smith normal form of an integer matrix given as a JSON list of rows.
    Snf { matrix_file: PathBuf },
    /// H¹ of the involution in a scenario file.
    H1 { scenario_file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Target {
    /// Double plane branched over a sextic with n tritangent-type classes.
    #[command(name = "p2-sextic")]
    P2Sextic(SexticArgs),
    /// Double quadric, rank 4 Picard lattice.
    Quadric,
    /// Double cover of the second Hirzebruch surface.
    Hirzebruch2,
    /// A scenario read from a JSON file.
    File { path: PathBuf },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SexticArgs {
    /// Rank of the Picard lattice, 3 to 18.
    #[arg(long)]
    n: Option<usize>,
    /// Every n from 3 to 18.
    #[arg(long)]
    all: bool,
}

/// Input or usage problems, exit status 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    Ok(std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?)
}

fn emit(cli: &Cli, report: &Report) {
    if cli.json {
        say!("{}", report.to_json());
    } else if cli.quiet {
        say!("scenario {}: {}", report.scenario, if report.passed { "PASS" } else { "FAIL" });
    } else {
        say_raw!("{}", report.render_text());
    }
}

fn verify(cli: &Cli, target: &Target) -> Result<bool, InputError> {
    let opts = RunOptions { list_cap: cli.list_cap };
    let scenarios: Vec<Scenario> = match target {
        Target::P2Sextic(SexticArgs { all: true, .. }) => (3..=18).map(|n| builtin("p2-sextic", Some(n))).collect::<Result<_, _>>()?,
        Target::P2Sextic(SexticArgs { n, .. }) => vec![builtin("p2-sextic", *n)?],
        Target::Quadric => vec![builtin("quadric", None)?],
        Target::Hirzebruch2 => vec![builtin("hirzebruch2", None)?],
        Target::File { path } => vec![Scenario::from_json(&read(path)?)?],
    };
    let reports: Vec<Report> = scenarios.par_iter().map(|s| run(s, &opts)).collect::<Result<_, ScenarioError>>()?;
    if cli.json && reports.len() > 1 {
        let all = serde_json::to_string_pretty(&reports).expect("reports serialize");
        say!("{all}");
    } else {
        for (i, r) in reports.iter().enumerate() {
            if i > 0 && !cli.quiet && !cli.json {
                say!();
            }
            emit(cli, r);
        }
    }
    Ok(reports.iter().all(|r| r.passed))
}

fn snf(cli: &Cli, path: &Path) -> Result<bool, InputError> {
    let rows: Vec<Vec<JsonInt>> = serde_json::from_str(&read(path)?).context("expected a JSON list of integer rows")?;
    let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
    let m = IntMatrix::from_rows(rows).map_err(|e| anyhow!("{e}"))?;
    let rep = SnfReport::new(&m);
    if cli.json {
        say!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
    } else {
        let d: Vec<String> = rep.diagonal.iter().map(ToString::to_string).collect();
        say!("diagonal ({}), rank {}", d.join(", "), rep.rank);
        if !cli.quiet {
            say!("U =\n{}\nV =\n{}", rep.u, rep.v);
            say!("U*M*V = D re-checked: {}", if rep.verified { "yes" } else { "NO" });
        }
    }
    Ok(rep.verified)
}

fn h1_command(cli: &Cli, path: &Path) -> Result<bool, InputError> {
    let s = Scenario::from_json(&read(path)?)?;
    let sub = match s.sublattice.labels() {
        Some(_) => s.sublattice.clone(),
        None => s.sublattice.clone().with_default_labels("s"),
    };
    let action = match CyclicAction::new(sub.clone(), s.involution.matrix.clone(), s.involution.order) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("action: {e}");
            return Ok(false);
        }
    };
    let h = h1(&action);
    let sec = h1_section(&h, &sub, s.h1_generators.as_deref());
    if cli.json {
        say!("{}", serde_json::to_string_pretty(&sec).expect("section serializes"));
    } else {
        say!("H1 = {}", sec.description);
        if !cli.quiet {
            say!("generators: {}", pretty_labels(&sec.generators_text.join(", ")));
            let kn: Vec<String> = sec.norm_kernel.iter().map(|v| sub.format_vector(v)).collect();
            let im: Vec<String> = sec.coboundary_image.iter().map(|v| sub.format_vector(v)).collect();
            say!("ker N: <{}>", pretty_labels(&kn.join(", ")));
            say!("im(1-sigma): <{}>", pretty_labels(&im.join(", ")));
            if let (Some(names), Some(cover)) = (&sec.named_generators, sec.named_generators_cover) {
                say!("{} {} every class", pretty_labels(&names.join(", ")), if cover { "reach" } else { "do not reach" });
            }
        }
    }
    Ok(sec.named_generators_cover.unwrap_or(true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { target } => verify(&cli, target),
        Command::Snf { matrix_file } => snf(&cli, matrix_file),
        Command::H1 { scenario_file } => h1_command(&cli, scenario_file),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
