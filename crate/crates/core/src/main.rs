use std::io::{Read, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use legendrian::augment::DEFAULT_MAX_ELIGIBLE;
use legendrian::dga::{verify_degree_drop, DEFAULT_DISK_BUDGET};
use legendrian::diagram::{check_rho, crossing_gradings};
use legendrian::harness::sweep::sweep_diagram;
use legendrian::harness::verify::admissible;
use legendrian::harness::{
    atlas, lookup, random_plats, sweep_verify, verify_diagram, SweepBounds, VerifyOptions,
};
use legendrian::prelude::*;

#[derive(Parser)]
#[command(name = "legendrian", version, about = "Augmentations and rulings of Legendrian plat fronts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args)]
struct Opts {
    /// Grading modulus; repeat for several. Defaults to every admissible value in {0, 1}.
    #[arg(long)]
    rho: Vec<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_MAX_ELIGIBLE)]
    max_eligible: usize,
    #[arg(long, default_value_t = DEFAULT_DISK_BUDGET)]
    disk_budget: u64,
}

impl Opts {
    fn verify(&self) -> VerifyOptions {
        VerifyOptions {
            disk_budget: self.disk_budget,
            max_eligible: self.max_eligible,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classical invariants, gradings and degree distributions.
    Info {
        /// A .plat or .json file, an atlas name, or `-` for stdin.
        input: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// The Chekanov DGA.
    Dga {
        input: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Graded augmentations.
    Augs {
        input: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Graded normal rulings and the ruling polynomial.
    Rulings {
        input: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Sorts augmentations into fibers over rulings and checks fiber sizes.
    Correspond {
        input: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Verifies one diagram, the atlas (`--atlas`), or a random sweep.
    Verify {
        input: Option<String>,
        #[arg(long, conflicts_with = "input")]
        atlas: bool,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_cusps: usize,
        #[arg(long, default_value_t = 12)]
        max_crossings: usize,
        #[command(flatten)]
        opts: Opts,
    },
    /// Random single-component plats.
    Random {
        #[arg(long, requires = "crossings")]
        cusps: Option<usize>,
        #[arg(long, requires = "cusps")]
        crossings: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Info { .. } => "info",
            Command::Dga { .. } => "dga",
            Command::Augs { .. } => "augs",
            Command::Rulings { .. } => "rulings",
            Command::Correspond { .. } => "correspond",
            Command::Verify { .. } => "verify",
            Command::Random { .. } => "random",
        }
    }
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Lib(Error::ResourceLimit(_)) => 3,
            Failure::Lib(Error::ReportFailure(_)) => 2,
            Failure::Lib(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(s) => s.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type Outcome = std::result::Result<(Value, bool), Failure>;

fn load(input: &str) -> std::result::Result<PlatDiagram, Failure> {
    let text = if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else if Path::new(input).exists() {
        std::fs::read_to_string(input).map_err(|e| Failure::Input(format!("{input}: {e}")))?
    } else if let Some(entry) = lookup(input) {
        return Ok(entry.diagram());
    } else {
        return Err(Failure::Input(format!("{input}: no such file or atlas entry")));
    };
    Ok(parse_plat(&text)?)
}

/// Explicit rhos must divide 2r; without any, every admissible value in {0, 1}.
fn rhos_for(opts: &Opts, m: &MaslovData) -> Result<Vec<u64>> {
    if opts.rho.is_empty() {
        return Ok([0, 1].into_iter().filter(|&r| admissible(r, m)).collect());
    }
    for &r in &opts.rho {
        check_rho(r, m.modulus)?;
    }
    Ok(opts.rho.clone())
}

fn is_even_nonzero(rho: u64) -> bool {
    rho != 0 && rho % 2 == 0
}

fn halfpow(h: HalfPow) -> Value {
    json!({ "exact": h.to_string(), "approx": h.approx() })
}

fn setup(input: &str, opts: &Opts) -> std::result::Result<(PlatDiagram, MaslovData, Dga), Failure> {
    let d = load(input)?;
    let m = maslov(&d, Orientation::Forward);
    let g = build_dga_with_budget(&d, &m, opts.disk_budget)?;
    Ok((d, m, g))
}

fn info(input: &str, opts: &Opts) -> Outcome {
    let (d, m, g) = setup(input, opts)?;
    let gradings: Vec<Value> = g
        .generators()
        .iter()
        .map(|gen| json!({ "name": gen.name(), "degree": gen.grading.value() }))
        .collect();
    let mut per_rho = Vec::new();
    for rho in rhos_for(opts, &m)? {
        let chi = if is_even_nonzero(rho) { None } else { Some(chi_star(&g, rho)?) };
        per_rho.push(json!({
            "rho": rho,
            "degree_distribution": degree_distribution(&g, rho)?,
            "chi_star": chi,
        }));
    }
    Ok((
        json!({
            "diagram": d,
            "text": d.to_text(),
            "crossings": d.crossing_count(),
            "tb": m.tb,
            "rotation": m.rotation,
            "modulus": m.modulus,
            "maslov_potential": m.potential,
            "gradings": gradings,
            "rhos": per_rho,
        }),
        true,
    ))
}

fn dga(input: &str, opts: &Opts) -> Outcome {
    let (d, _, g) = setup(input, opts)?;
    let sq = verify_d_squared(&g);
    let drop = verify_degree_drop(&g);
    Ok((
        json!({
            "diagram": d,
            "dga": g.to_json(),
            "d_squared_zero": sq,
            "degree_drop": drop,
        }),
        sq && drop,
    ))
}

fn augs(input: &str, opts: &Opts) -> Outcome {
    let (d, m, g) = setup(input, opts)?;
    let n = d.crossing_count();
    let mut per_rho = Vec::new();
    for rho in rhos_for(opts, &m)? {
        let all = enumerate_augmentations_bounded(&g, rho, opts.max_eligible)?;
        let (chi, aug) = if is_even_nonzero(rho) {
            (None, None)
        } else {
            let chi = chi_star(&g, rho)?;
            (Some(chi), Some(halfpow(HalfPow::new(all.len() as u128, -chi))))
        };
        per_rho.push(json!({
            "rho": rho,
            "count": all.len(),
            "chi_star": chi,
            "aug_number": aug,
            "patterns": all.iter().map(|a| a.pattern(n)).collect::<Vec<_>>(),
            "augmentations": all.iter().map(|a| a.to_json(&g)).collect::<Vec<_>>(),
        }));
    }
    Ok((json!({ "diagram": d, "rhos": per_rho }), true))
}

fn rulings(input: &str, opts: &Opts) -> Outcome {
    let (d, m, _) = setup(input, opts)?;
    let mut per_rho = Vec::new();
    for rho in rhos_for(opts, &m)? {
        let rs = enumerate_rulings(&d, &m, rho)?;
        let poly = ruling_polynomial(&d, &m, rho)?;
        let list: Vec<Value> = rs
            .iter()
            .map(|r| {
                let mut v = r.to_json();
                let trace = interlacing_trace(&d, &m, r, rho).ok();
                v["interlacing_trace"] = json!(trace);
                v
            })
            .collect();
        per_rho.push(json!({
            "rho": rho,
            "count": rs.len(),
            "theta": theta_multiset(&rs).values(),
            "polynomial": poly.to_string(),
            "polynomial_terms": poly,
            "rulings": list,
        }));
    }
    Ok((json!({ "diagram": d, "rhos": per_rho }), true))
}

fn correspond(input: &str, opts: &Opts) -> Outcome {
    let (d, m, g) = setup(input, opts)?;
    let mut per_rho = Vec::new();
    let mut ok = true;
    for rho in rhos_for(opts, &m)? {
        let (report, table) = verify_correspondence(&d, &m, &g, rho, opts.max_eligible)?;
        ok &= report.passed();
        per_rho.push(json!({
            "rho": rho,
            "report": report,
            "fibers": table.to_json(&g),
        }));
    }
    Ok((json!({ "diagram": d, "rhos": per_rho }), ok))
}

fn default_rhos(opts: &Opts) -> Vec<u64> {
    if opts.rho.is_empty() {
        vec![0, 1]
    } else {
        opts.rho.clone()
    }
}

fn verify(
    input: Option<&str>,
    use_atlas: bool,
    count: usize,
    seed: u64,
    bounds: SweepBounds,
    opts: &Opts,
) -> Outcome {
    if let Some(input) = input {
        let d = load(input)?;
        let rep = verify_diagram(&d, &default_rhos(opts), opts.verify())?;
        let ok = rep.passed();
        return Ok((json!(rep), ok));
    }
    if use_atlas {
        let mut entries = Vec::new();
        let mut ok = true;
        for e in atlas() {
            let checks = e.check(opts.verify())?;
            let passed = checks.iter().all(|c| c.passed);
            ok &= passed;
            entries.push(json!({
                "name": e.name,
                "diagram": e.diagram().to_text(),
                "provenance": e.provenance,
                "passed": passed,
                "checks": checks,
            }));
        }
        return Ok((json!({ "passed": ok, "entries": entries }), ok));
    }
    let rep = sweep_verify(count, opts.verify(), &default_rhos(opts), seed, bounds)?;
    let ok = rep.passed;
    Ok((json!(rep), ok))
}

fn random(cusps: Option<usize>, crossings: Option<usize>, seed: u64, count: usize) -> Outcome {
    let diagrams = match (cusps, crossings) {
        (Some(n), Some(m)) => random_plats(n, m, seed, count)?,
        _ => (0..count)
            .map(|i| sweep_diagram(seed, i, SweepBounds::default()))
            .collect::<Result<_>>()?,
    };
    let list: Vec<Value> = diagrams
        .iter()
        .map(|d| {
            let m = maslov(d, Orientation::Forward);
            json!({
                "cusps": d.cusps(),
                "word": d.word(),
                "text": d.to_text(),
                "tb": m.tb,
                "rotation": m.rotation,
                "gradings": crossing_gradings(d, &m).iter().map(|g| g.value()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok((json!({ "seed": seed, "diagrams": list }), true))
}

fn run(command: &Command) -> Outcome {
    match command {
        Command::Info { input, opts } => info(input, opts),
        Command::Dga { input, opts } => dga(input, opts),
        Command::Augs { input, opts } => augs(input, opts),
        Command::Rulings { input, opts } => rulings(input, opts),
        Command::Correspond { input, opts } => correspond(input, opts),
        Command::Verify {
            input,
            atlas,
            count,
            seed,
            max_cusps,
            max_crossings,
            opts,
        } => verify(
            input.as_deref(),
            *atlas,
            *count,
            *seed,
            SweepBounds {
                max_cusps: *max_cusps,
                max_crossings: *max_crossings,
            },
            opts,
        ),
        Command::Random {
            cusps,
            crossings,
            seed,
            count,
            format: _,
        } => random(*cusps, *crossings, *seed, *count),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match run(&cli.command) {
        Ok((result, passed)) => {
            let doc = json!({
                "tool": "legendrian",
                "version": env!("CARGO_PKG_VERSION"),
                "command": cli.command.name(),
                "elapsed_ms": start.elapsed().as_secs_f64() * 1000.0,
                "passed": passed,
                "result": result,
            });
            let text = serde_json::to_string_pretty(&doc).expect("json values serialize");
            // A closed pipe downstream is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(2)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
