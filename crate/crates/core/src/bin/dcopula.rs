use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dcopula::census::{composition_check, gf_check, run_census, table1, write_csv};
use dcopula::copula_ops::{checkerboard_eval, spearman_rho, verify_extension_quasi, verify_extension_ultramodular, ExtensionQuery};
use dcopula::exact::Rational;
use dcopula::families::{Family, FamilySpec, Space};
use dcopula::maxent::{solve_maxent, MaxEntProblem};
use dcopula::polytope::io::{hrep_from_json, hrep_to_json, parse_hrep_cdd, vrep_to_json, write_hrep_cdd, write_vrep_cdd_to};
use dcopula::polytope::{certify_minimal, contains, enumerate_vertices, is_vertex, HRep};
use dcopula::transforms::{tau_det, GridMatrix};

#[derive(Parser)]
#[command(name = "dcopula", version, about = "Exact polytopes of discrete copulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Cdd,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Write the H-representation of a family
    Family {
        spec: String,
        #[arg(long, value_enum, default_value = "cdd")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate vertices of a family or an .ine/.json file
    Vertices {
        source: String,
        #[arg(long, value_enum, default_value = "cdd")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduce a system to one inequality per facet
    Minimal {
        source: String,
        #[arg(long, value_enum, default_value = "cdd")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Test membership of a point
    Member {
        source: String,
        /// Coordinates, inline or a file path
        #[arg(long)]
        point: String,
    },
    /// Test whether a point is a vertex
    IsVertex {
        source: String,
        #[arg(long)]
        point: String,
    },
    /// Evaluate the checkerboard extension, or verify its properties over vertices
    Extend {
        /// Grid family (udc or cdq) when verifying, size `PxQ` otherwise
        target: String,
        #[arg(long)]
        point: Option<String>,
        /// Query `u,v`
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 2)]
        refinement: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 20240101)]
        seed: u64,
    },
    /// Spearman's rho of a grid point
    Rho {
        /// Size `PxQ`
        size: String,
        #[arg(long)]
        point: String,
    },
    /// Maximum-entropy density of a density-space family
    Maxent {
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iterations: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decomposable/indecomposable vertex counts as CSV
    Census {
        #[arg(default_value = "udc")]
        family: String,
        #[arg(default_value_t = 4)]
        p_max: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recompute the reference vertex-count table and compare
    Table1,
    /// Determinant of the tau map
    TauDet { p: usize, q: usize },
}

fn sink(output: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match output {
        Some(path) => Box::new(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_system(source: &str) -> Result<(HRep, Option<FamilySpec>)> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let h = if source.ends_with(".json") { hrep_from_json(&text)? } else { parse_hrep_cdd(&text)? };
        return Ok((h, None));
    }
    let spec: FamilySpec = source.parse()?;
    Ok((spec.build()?, Some(spec)))
}

fn parse_point(arg: &str) -> Result<Vec<Rational>> {
    let text = if Path::new(arg).is_file() { std::fs::read_to_string(arg)? } else { arg.to_string() };
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let v: Vec<Rational> = serde_json::from_str(trimmed)?;
        return Ok(v);
    }
    trimmed
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Rational>().with_context(|| format!("bad coordinate '{t}'")))
        .collect()
}

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once('x').unwrap_or((s, s));
    Ok((a.parse().context("bad size")?, b.parse().context("bad size")?))
}

fn write_system(h: &HRep, format: Format, output: &Option<PathBuf>) -> Result<()> {
    let mut w = sink(output)?;
    match format {
        Format::Cdd => w.write_all(write_hrep_cdd(h).as_bytes())?,
        Format::Json => writeln!(w, "{}", hrep_to_json(h))?,
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Family { spec, format, output } => {
            let spec: FamilySpec = spec.parse()?;
            write_system(&spec.build()?, format, &output)?;
        }
        Command::Vertices { source, format, output } => {
            let (h, _) = load_system(&source)?;
            let v = enumerate_vertices(&h)?;
            let mut w = sink(&output)?;
            match format {
                Format::Cdd => write_vrep_cdd_to(&v, &mut w)?,
                Format::Json => writeln!(w, "{}", vrep_to_json(&v))?,
            }
            w.flush()?;
            drop(w);
            if output.is_some() {
                println!("{}", v.len());
            } else {
                eprintln!("{}", v.len());
            }
        }
        Command::Minimal { source, format, output } => {
            let (h, _) = load_system(&source)?;
            let cert = certify_minimal(&h)?;
            if output.is_some() {
                write_system(&cert.minimal, format, &output)?;
            }
            println!("{} facets", cert.facet_count());
        }
        Command::Member { source, point } => {
            let (h, _) = load_system(&source)?;
            let m = contains(&h, &parse_point(&point)?)?;
            if !m.inside {
                eprintln!("violated: {}", m.violated.join(" "));
            }
            println!("{}", m.inside);
            return Ok(m.inside);
        }
        Command::IsVertex { source, point } => {
            let (h, _) = load_system(&source)?;
            let x = parse_point(&point)?;
            let m = contains(&h, &x)?;
            if !m.inside {
                eprintln!("violated: {}", m.violated.join(" "));
                println!("false");
                return Ok(false);
            }
            let ok = is_vertex(&h, &x)?;
            println!("{ok}");
            return Ok(ok);
        }
        Command::Extend { target, point, at, verify, refinement, samples, seed } => {
            if verify {
                return verify_extensions(&target, refinement, samples, seed);
            }
            let (p, q) = parse_size(&target)?;
            let g = GridMatrix::from_point(p, q, &parse_point(point.as_deref().context("--point is required")?)?)?;
            let uv = parse_point(at.as_deref().context("--at is required")?)?;
            if uv.len() != 2 {
                bail!("--at takes two coordinates");
            }
            let query = ExtensionQuery::new(uv[0].clone(), uv[1].clone())?;
            println!("{}", checkerboard_eval(&g, &query));
        }
        Command::Rho { size, point } => {
            let (p, q) = parse_size(&size)?;
            let g = GridMatrix::from_point(p, q, &parse_point(&point)?)?;
            println!("{}", spearman_rho(&g)?);
        }
        Command::Maxent { spec, rho, tolerance, max_iterations, output } => {
            let mut spec: FamilySpec = spec.parse()?;
            spec.space = Space::Density;
            let mut problem = MaxEntProblem::new(spec);
            problem.tolerance = tolerance;
            problem.max_iterations = max_iterations;
            if let Some(t) = rho {
                problem = problem.with_rho_target(t);
            }
            let sol = solve_maxent(&problem)?;
            let mut w = sink(&output)?;
            writeln!(w, "{}", serde_json::to_string_pretty(&sol)?)?;
            w.flush()?;
        }
        Command::Census { family, p_max, output } => {
            let family = match family.as_str() {
                "udc" => Family::Udc,
                "cdq" => Family::Cdq,
                other => bail!("census supports udc and cdq, not {other}"),
            };
            let census = run_census(family, p_max)?;
            write_csv(&census, sink(&output)?)?;
            let composed = composition_check(&census, p_max)?;
            let gf = gf_check(&census, p_max)?;
            eprintln!("composition identity: {composed}; generating-function identity: {gf}");
        }
        Command::Table1 => {
            let cells = table1()?;
            let mut ok = true;
            println!("family,p,q,computed,expected");
            for c in &cells {
                println!("{},{},{},{},{}", c.family, c.p, c.q, c.computed, c.expected);
                if !c.matches() {
                    eprintln!("mismatch {}:{}x{}: computed {} expected {}", c.family, c.p, c.q, c.computed, c.expected);
                    ok = false;
                }
            }
            return Ok(ok);
        }
        Command::TauDet { p, q } => {
            if p < 2 || q < 2 {
                bail!("tau is defined for p, q >= 2");
            }
            println!("{}", tau_det(p, q));
        }
    }
    Ok(true)
}

fn verify_extensions(target: &str, refinement: usize, samples: usize, seed: u64) -> Result<bool> {
    let mut spec: FamilySpec = target.parse()?;
    spec.space = Space::Grid;
    let quasi = match spec.family {
        Family::Udc => false,
        Family::Cdq => true,
        _ => bail!("--verify applies to udc and cdq"),
    };
    let v = enumerate_vertices(&spec.build()?)?;
    let grids: Vec<GridMatrix> =
        v.vertices().iter().map(|x| GridMatrix::from_point(spec.p, spec.q, x)).collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = grids.clone();
    for _ in 0..samples {
        let a = &grids[rng.gen_range(0..grids.len())];
        let b = &grids[rng.gen_range(0..grids.len())];
        let alpha = Rational::frac(rng.gen_range(0..=1000), 1000);
        points.push(a.mix(b, &alpha)?);
    }
    let mut failures = 0;
    for (k, g) in points.iter().enumerate() {
        let ok = if quasi { verify_extension_quasi(g, refinement)? } else { verify_extension_ultramodular(g, refinement)? };
        if !ok {
            eprintln!("extension check failed at point {k}");
            failures += 1;
        }
    }
    println!("{} points checked, {failures} failures", points.len());
    Ok(failures == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
