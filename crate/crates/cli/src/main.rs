use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fractal_bem::cache::Cache;
use fractal_bem::config::{Geometry, MeshSpec, QuadSpec, RunConfig, WaveNumberSpec};
use fractal_bem::error::CliError;
use fractal_bem::{io, output, study};
use fractal_bem_core::postprocess::{
    far_field, far_field_directions, near_field, near_field_samples, total_field,
};
use fractal_bem_core::trace_index;

/// Thread count override for the parallel assembly and field evaluation.
const THREADS_ENV: &str = "FRACTAL_BEM_THREADS";

#[derive(Parser)]
#[command(
    name = "fractal-bem",
    version,
    about = "Hausdorff-measure BEM for scattering by fractal screens"
)]
struct Cli {
    /// Log progress (assembly times, residuals).
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, trace index and disjointness certificates.
    Dim(Common),
    /// List the elements of the mesh.
    Mesh {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble and solve; writes a solution file.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Near field of a stored solution.
    Field {
        #[arg(long)]
        solution: PathBuf,
        /// Add the incident wave.
        #[arg(long)]
        total: bool,
        /// Quadrature width; defaults to the one used for the system.
        #[arg(long)]
        hq: Option<f64>,
        /// Box `xmin,xmax,ymin,ymax`; without it the standard sample set is used.
        #[arg(long = "box", value_delimiter = ',', allow_hyphen_values = true)]
        bbox: Option<Vec<f64>>,
        /// Grid resolution `nx,ny` for `--box`.
        #[arg(long, value_delimiter = ',', default_values_t = [41usize, 41])]
        res: Vec<usize>,
        /// Height of the grid plane for three-dimensional problems.
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        z: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Far-field pattern of a stored solution.
    Farfield {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        hq: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refinement studies.
    Study {
        #[arg(value_enum)]
        kind: StudyKind,
        #[command(flatten)]
        common: Common,
        /// Level range `a..b`.
        #[arg(long, default_value = "1..5")]
        levels: String,
        /// Wavenumbers for the condition study, e.g. `0.1,5,screened`.
        #[arg(long, value_delimiter = ',')]
        ks: Option<Vec<String>>,
        /// Reference level for the error study.
        #[arg(long)]
        reference: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StudyKind {
    Convergence,
    Errors,
    Condition,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    CantorSet,
    CantorDust,
    Sierpinski,
    NonhomogeneousDust,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; the flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long)]
    rho: Option<f64>,
    /// Wavenumber, or `screened` for `k = i`.
    #[arg(long)]
    k: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta: Option<Vec<f64>>,
    #[arg(long, conflicts_with = "h")]
    level: Option<usize>,
    #[arg(long)]
    h: Option<f64>,
    /// `h_Q = c_q h`.
    #[arg(long, conflicts_with = "hq")]
    cq: Option<f64>,
    /// Absolute quadrature width.
    #[arg(long)]
    hq: Option<f64>,
    /// Use the full quadrature width for every pair.
    #[arg(long)]
    no_reduced: bool,
    #[arg(long)]
    measure_scale: Option<f64>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::preset(Geometry::CantorSet { rho: 1.0 / 3.0 }, 0.1, 3),
        };
        if self.preset.is_some() || self.rho.is_some() {
            let rho = self.rho.or(match cfg.geometry {
                Geometry::CantorSet { rho } | Geometry::CantorDust { rho } => Some(rho),
                _ => None,
            });
            let rho = rho.unwrap_or(1.0 / 3.0);
            cfg.geometry = match self.preset {
                Some(Preset::CantorSet) => Geometry::CantorSet { rho },
                Some(Preset::CantorDust) => Geometry::CantorDust { rho },
                Some(Preset::Sierpinski) => Geometry::Sierpinski,
                Some(Preset::NonhomogeneousDust) => Geometry::NonhomogeneousDust,
                None => match cfg.geometry {
                    Geometry::CantorSet { .. } => Geometry::CantorSet { rho },
                    Geometry::CantorDust { .. } => Geometry::CantorDust { rho },
                    _ => {
                        return Err(CliError::Config(
                            "--rho applies to Cantor presets only".into(),
                        ))
                    }
                },
            };
            if cfg
                .theta
                .as_ref()
                .is_some_and(|t| t.len() != cfg.geometry.n() + 1)
            {
                cfg.theta = None;
            }
        }
        if let Some(k) = &self.k {
            cfg.k = WaveNumberSpec::parse(k)?;
        }
        if let Some(t) = &self.theta {
            cfg.theta = Some(t.clone());
        }
        if let Some(l) = self.level {
            cfg.mesh = MeshSpec::Level(l);
        }
        if let Some(h) = self.h {
            cfg.mesh = MeshSpec::H(h);
        }
        if self.cq.is_some() || self.hq.is_some() {
            cfg.quadrature = QuadSpec {
                c_q: self.cq,
                h_q: self.hq,
                reduced: cfg.quadrature.reduced,
            };
        }
        if self.no_reduced {
            cfg.quadrature.reduced = false;
        }
        if let Some(g) = self.measure_scale {
            cfg.measure_scale = g;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_levels(s: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || CliError::Config(format!("level range {s:?} is not of the form a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b
        .trim_start_matches('=')
        .trim()
        .parse()
        .map_err(|_| bad())?;
    if b < a {
        return Err(bad());
    }
    Ok(a..=b)
}

fn grid(bbox: &[f64], res: &[usize], n: usize, z: f64) -> Result<Vec<[f64; 3]>, CliError> {
    let (&[x0, x1, y0, y1], &[nx, ny]) = (bbox, res) else {
        return Err(CliError::Config(
            "--box takes four values and --res two".into(),
        ));
    };
    if nx < 2 || ny < 2 || !(x1 > x0 && y1 > y0) {
        return Err(CliError::Config(
            "grid needs xmin < xmax, ymin < ymax and at least 2×2 points".into(),
        ));
    }
    let mut pts = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let y = y0 + (y1 - y0) * j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            let x = x0 + (x1 - x0) * i as f64 / (nx - 1) as f64;
            pts.push(if n == 1 { [x, y, 0.0] } else { [x, y, z] });
        }
    }
    Ok(pts)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Dim(common) => {
            let cfg = common.resolve()?;
            let a = cfg.attractor()?;
            let t = trace_index(a.n(), a.d());
            println!("n = {}", a.n());
            println!("maps = {}", a.num_maps());
            println!("d = {:.10}", a.d());
            println!("t_d = {:.10}", t);
            println!("2t_d = {:.10}", 2.0 * t);
            println!("-2t_d = {:.10}", -2.0 * t);
            println!("diam = {:.10}", a.diam());
            println!("disjoint = {}", a.disjoint().as_str());
            println!("hull_disjoint = {}", a.hull_disjoint().as_str());
        }
        Command::Mesh { common, out } => {
            let cfg = common.resolve()?;
            let mesh = cfg.mesh.build(&cfg.attractor()?)?;
            log::info!("{} elements, h = {}", mesh.len(), mesh.h());
            output::write_mesh(output::sink(out.as_deref())?, &mesh)?;
        }
        Command::Solve { common, out, cache } => {
            let cfg = common.resolve()?;
            let cache = cache.map(Cache::new).transpose()?;
            let sol = study::solve(&cfg, cache.as_ref())?;
            io::write_solution(&out, &cfg, &sol)?;
            println!("N = {}", sol.mesh.len());
            println!("h_Q = {:e}", sol.h_q);
            println!("residual = {:e}", sol.residual);
        }
        Command::Field {
            solution,
            total,
            hq,
            bbox,
            res,
            z,
            out,
        } => {
            let (_, sol) = io::read_solution(&solution)?;
            let n = sol.mesh.attractor().n();
            let points = match bbox {
                Some(b) => grid(&b, &res, n, z)?,
                None => near_field_samples(n, sol.k),
            };
            let u = if total {
                total_field(&sol, &points, hq)?
            } else {
                near_field(&sol, &points, hq)?
            };
            output::write_near_field(output::sink(out.as_deref())?, n, &points, &u)?;
        }
        Command::Farfield { solution, hq, out } => {
            let (_, sol) = io::read_solution(&solution)?;
            let n = sol.mesh.attractor().n();
            let dirs = far_field_directions(n, sol.k);
            let u = far_field(&sol, &dirs, hq)?;
            output::write_far_field(output::sink(out.as_deref())?, n, &dirs, &u)?;
        }
        Command::Study {
            kind,
            common,
            levels,
            ks,
            reference,
            cache,
            out,
        } => {
            let cfg = common.resolve()?;
            let levels = parse_levels(&levels)?;
            let cache = cache.map(Cache::new).transpose()?;
            match kind {
                StudyKind::Convergence => {
                    let s = study::convergence(&cfg, levels, cache.as_ref())?;
                    output::write_convergence(output::sink(out.as_deref())?, &s)?;
                    let show = |r: Option<f64>| r.map_or("n/a".into(), |v| format!("{v:.4}"));
                    eprintln!("fitted increment ratio = {}", show(s.ratio));
                    eprintln!("fitted near-field ratio = {}", show(s.nearfield_ratio));
                    eprintln!("fitted far-field ratio = {}", show(s.farfield_ratio));
                }
                StudyKind::Errors => {
                    let r = reference.unwrap_or(*levels.end() + 2);
                    let rows = study::reference_errors(&cfg, levels, r, cache.as_ref())?;
                    output::write_errors(output::sink(out.as_deref())?, &rows)?;
                }
                StudyKind::Condition => {
                    let ks = match ks {
                        Some(v) => v
                            .iter()
                            .map(|s| WaveNumberSpec::parse(s))
                            .collect::<Result<Vec<_>, _>>()?,
                        None => vec![cfg.k],
                    };
                    let rows = study::condition(&cfg, &ks, levels)?;
                    output::write_condition(output::sink(out.as_deref())?, &rows)?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    log::warn!("{THREADS_ENV}: {e}");
                }
            }
            _ => {
                eprintln!("error: {THREADS_ENV}={v:?} is not a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
