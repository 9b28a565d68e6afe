//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dmin_core::{Complex64, Rect};

#[derive(Debug, Parser)]
#[command(name = "dmin", version, about = "Build, analyze and verify d-minimal surfaces in R^{0,2,1}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mesh of the surface generated by Weierstrass data (F, G).
    Gen(GenArgs),
    /// Forms, mean curvature and relative Gauss curvature on a grid.
    Analyze(AnalyzeArgs),
    /// Zeros of F with multiplicity and Jacobian rank.
    Singular(SingularArgs),
    /// Graph with prescribed second fundamental form and flat metric.
    Reconstruct(ReconstructArgs),
    /// Flat zero-mean-curvature check in Minkowski 4-space.
    Embed(EmbedArgs),
    /// The built-in surfaces.
    Catalog(CatalogArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Obj,
    Csv,
    Json,
}

/// Weierstrass data.
#[derive(Debug, Clone, Args)]
pub struct Data {
    #[arg(long = "F", allow_hyphen_values = true, value_name = "EXPR")]
    pub f: Option<String>,
    #[arg(long = "G", allow_hyphen_values = true, value_name = "EXPR")]
    pub g: Option<String>,
    /// Associated-family angle.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Base point of the integrals; defaults to the domain center.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, value_name = "RE,IM")]
    pub base: Option<Complex64>,
}

/// Parameter rectangle and sample counts.
#[derive(Debug, Clone, Args)]
pub struct Region {
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true, value_name = "U0,U1,V0,V1")]
    pub domain: Option<Rect>,
    #[arg(long, value_parser = parse_grid, value_name = "N,M")]
    pub grid: Option<(usize, usize)>,
}

/// Where a surface in R^{0,2,1} comes from.
#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Built-in surface, see `dmin catalog`.
    #[arg(long, value_name = "NAME")]
    pub catalog: Option<String>,
    /// Height function F(u, v) of the graph (u, v, F).
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    pub graph: Option<String>,
    #[command(flatten)]
    pub data: Data,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub data: Data,
    #[command(flatten)]
    pub region: Region,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Obj)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub region: Region,
    /// Verdict tolerance on |H| and on the parabolic band of K.
    #[arg(long, value_parser = parse_tol, default_value_t = 1e-6)]
    pub tol: f64,
    /// Number of metric-degenerate samples tolerated before failing.
    #[arg(long, default_value_t = 0)]
    pub singular_budget: usize,
    /// Per-sample table; the JSON summary always goes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SingularArgs {
    #[command(flatten)]
    pub data: Data,
    #[command(flatten)]
    pub region: Region,
    #[arg(long, value_parser = parse_tol, default_value_t = dmin_core::singular::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    pub h11: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    pub h12: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    pub h22: Option<String>,
    /// Sampled forms: CSV with columns u, v, h11, h12, h22 on a full grid.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["h11", "h12", "h22"])]
    pub forms: Option<PathBuf>,
    #[command(flatten)]
    pub region: Region,
    /// Integration base; defaults to the domain center.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, value_name = "U,V")]
    pub base: Option<Complex64>,
    /// Value and gradient of the graph at the base.
    #[arg(long, value_parser = parse_seed, allow_hyphen_values = true, value_name = "F0,FU0,FV0")]
    pub seed: Option<[f64; 3]>,
    #[arg(long, value_parser = parse_tol, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Obj)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    pub x1: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    pub x2: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    pub x3: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    pub x4: Option<String>,
    #[command(flatten)]
    pub region: Region,
    #[arg(long, value_parser = parse_tol, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Measure every entry and compare with its expected flags.
    #[arg(long)]
    pub check: bool,
}

fn numbers<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {}", parts.len()));
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
    }
    Ok(out)
}

pub fn parse_rect(s: &str) -> Result<Rect, String> {
    let [u0, u1, v0, v1] = numbers::<4>(s)?;
    Rect::new(u0, u1, v0, v1).map_err(|e| e.to_string())
}

pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, m] = parts[..] else {
        return Err("expected N,M".into());
    };
    let n: usize = n.parse().map_err(|e| format!("`{n}`: {e}"))?;
    let m: usize = m.parse().map_err(|e| format!("`{m}`: {e}"))?;
    if n < 2 || m < 2 {
        return Err("grid must be at least 2,2".into());
    }
    Ok((n, m))
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let [re, im] = numbers::<2>(s)?;
    Ok(Complex64::new(re, im))
}

fn parse_seed(s: &str) -> Result<[f64; 3], String> {
    numbers::<3>(s)
}

pub fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("`{s}`: {e}"))?;
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err("tolerance must be positive".into())
    }
}
