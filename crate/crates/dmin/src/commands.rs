//! The subcommands.
//!
//! Exit codes: 0 success (a failing verdict is still a successful run),
//! 1 IO or other failure, 2 bad input, 3 numerical failure while integrating
//! or scanning, 4 degenerate or non-spacelike samples, 5 Codazzi failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use dmin_core::catalog::{self, CatalogEntry};
use dmin_core::geom021::{
    classify_point, codazzi_residual, fundamental_forms, mean_curvature, relative_gauss_curvature, ExprGraph,
    FundamentalForms, Patch, PatchKind,
};
use dmin_core::mink4::{embed, verify_flat_zmc, vanishing_h_locus, ELocus, ExprMinkSurface, FlatZmcReport, MinkPatch};
use dmin_core::reconstruct::{codazzi_check, surface_from_forms, PrescribedForms, Seed};
use dmin_core::singular::{singular_report_with, ScanConfig};
use dmin_core::weier::{surface_from_data, validate_data, FamilyAngle, HolomorphicSurface, WeierstrassData};
use dmin_core::{Error, Rect, Sampling};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    AnalyzeArgs, CatalogArgs, Command, Data, EmbedArgs, Format, GenArgs, ReconstructArgs, Region, SingularArgs, Source,
};
use crate::formats::{self, num, SCHEMA};

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_DEGENERATE: u8 = 4;
pub const EXIT_CODAZZI: u8 = 5;

/// A failed run: exit code and the message for standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure::new(EXIT_INPUT, message)
    }
}

/// Exit code for a kernel error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax(_)
        | Error::UnknownIdentifier { .. }
        | Error::UnknownCatalogEntry(_)
        | Error::InvalidArgument(_)
        | Error::InvalidIsometry(_)
        | Error::RangeCrossesZero(..)
        | Error::Data2Violation { .. } => EXIT_INPUT,
        Error::DegenerateMetric { .. } | Error::SingularForms { .. } | Error::NonSpacelike { .. } => EXIT_DEGENERATE,
        Error::CodazziFailure { .. } => EXIT_CODAZZI,
        _ => EXIT_NUMERIC,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(exit_code(&e), e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(EXIT_OTHER, format!("io: {e}"))
    }
}

type Outcome = Result<(), Failure>;

pub fn run(command: &Command) -> Outcome {
    match command {
        Command::Gen(a) => gen(a),
        Command::Analyze(a) => analyze(a),
        Command::Singular(a) => singular(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Embed(a) => embed_cmd(a),
        Command::Catalog(a) => catalog_cmd(a),
    }
}

const DEFAULT_GEN_GRID: (usize, usize) = (64, 64);
const DEFAULT_ANALYSIS_GRID: (usize, usize) = (32, 32);
const DEFAULT_RECONSTRUCT_GRID: (usize, usize) = (33, 33);

// Output goes to `path` when given, else to standard output. The file is
// created only after everything it will contain has been computed.
fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Outcome {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Failure::new(EXIT_OTHER, format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            match write(&mut w) {
                // A closed reader (`| head`) is not a failure of the run.
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn domain_or_square(region: &Region) -> Rect {
    region.domain.unwrap_or(Rect::unit_square())
}

fn weierstrass(data: &Data, domain: Rect) -> Result<Option<WeierstrassData>, Failure> {
    match (&data.f, &data.g) {
        (Some(f), Some(g)) => Ok(Some(WeierstrassData::parse(f, g, data.base, domain)?)),
        (None, None) => Ok(None),
        _ => Err(Failure::input("Weierstrass data needs both --F and --G")),
    }
}

fn require_weierstrass(data: &Data, domain: Rect) -> Result<WeierstrassData, Failure> {
    weierstrass(data, domain)?.ok_or_else(|| Failure::input("--F and --G are required"))
}

fn warn_about_data(data: &WeierstrassData, grid: &Sampling) {
    let report = validate_data(data, grid, dmin_core::weier::NEAR_ZERO_F);
    for w in report.cut_suspects.iter().take(3) {
        eprintln!("warning: F or G jumps near {w}; a branch cut may cross the domain");
    }
    for w in report.eval_failures.iter().take(3) {
        eprintln!("warning: F or G cannot be evaluated at {w}");
    }
}

fn gen(a: &GenArgs) -> Outcome {
    let domain = domain_or_square(&a.region);
    let data = require_weierstrass(&a.data, domain)?;
    let (nu, nv) = a.region.grid.unwrap_or(DEFAULT_GEN_GRID);
    let grid = Sampling::nodes(domain, nu, nv)?;
    warn_about_data(&data, &grid);
    let s = surface_from_data(&data, FamilyAngle::new(a.data.theta));
    let rows: Vec<Vec<_>> = (0..nv).into_par_iter().map(|j| s.sample_row(&grid, j)).collect::<Result<_, _>>()?;
    let vertices: Vec<[f64; 3]> = rows.into_iter().flatten().map(|p| p.to_array()).collect();
    write_mesh(a.out.as_deref(), a.format, "gen", &grid, &vertices, &["x", "y", "z"])
}

fn write_mesh(path: Option<&Path>, format: Format, command: &str, grid: &Sampling, vertices: &[[f64; 3]], cols: &[&str]) -> Outcome {
    match format {
        Format::Obj => emit(path, |w| formats::write_obj(w, grid.nu, grid.nv, vertices)),
        Format::Csv => {
            let header: Vec<&str> = ["u", "v"].iter().chain(cols).copied().collect();
            let rows = grid.points().zip(vertices).map(|((u, v), p)| {
                [u, v].iter().chain(p.iter().skip(3 - (cols.len()))).map(|x| num(*x)).collect()
            });
            emit(path, |w| formats::write_csv(w, &header, rows))
        }
        Format::Json => {
            let r = grid.rect;
            let doc = json!({
                "schema": SCHEMA,
                "command": command,
                "domain": [r.u0, r.u1, r.v0, r.v1],
                "grid": [grid.nu, grid.nv],
                "vertices": vertices,
            });
            emit(path, |w| formats::write_json(w, &doc))
        }
    }
}

/// A surface in R^{0,2,1} resolved from the source flags.
struct Resolved {
    patch: Box<dyn Patch>,
    grid: Sampling,
    label: String,
    data: Option<WeierstrassData>,
}

fn resolve(source: &Source, region: &Region) -> Result<Option<Resolved>, Failure> {
    let given = [source.catalog.is_some(), source.graph.is_some(), source.data.f.is_some() || source.data.g.is_some()];
    if given.iter().filter(|x| **x).count() > 1 {
        return Err(Failure::input("give only one of --catalog, --graph, or --F/--G"));
    }
    let cells = |domain: Rect, default: (usize, usize)| {
        let (nu, nv) = region.grid.unwrap_or(default);
        Sampling::cells(domain, nu, nv)
    };
    if let Some(name) = &source.catalog {
        let CatalogEntry { patch, sampling, name, .. } = catalog::get(name)?;
        let grid = match (region.domain, region.grid) {
            (None, None) => sampling,
            (d, _) => cells(d.unwrap_or(sampling.rect), (sampling.nu, sampling.nv))?,
        };
        let patch = Box::new(restrict(patch, grid.rect));
        return Ok(Some(Resolved { patch, grid, label: format!("catalog:{name}"), data: None }));
    }
    let domain = domain_or_square(region);
    if let Some(src) = &source.graph {
        let g = ExprGraph::parse(src, domain)?;
        return Ok(Some(Resolved {
            patch: Box::new(g),
            grid: cells(domain, DEFAULT_ANALYSIS_GRID)?,
            label: format!("graph:{src}"),
            data: None,
        }));
    }
    let Some(data) = weierstrass(&source.data, domain)? else {
        return Ok(None);
    };
    let s: HolomorphicSurface = surface_from_data(&data, FamilyAngle::new(source.data.theta));
    let label = format!("weierstrass:F={},G={},theta={}", source.data.f.as_deref().unwrap_or(""), source.data.g.as_deref().unwrap_or(""), source.data.theta);
    Ok(Some(Resolved { patch: Box::new(s), grid: cells(domain, DEFAULT_ANALYSIS_GRID)?, label, data: Some(data) }))
}

// A catalog patch viewed on a caller-chosen domain.
struct Restricted<P> {
    inner: P,
    domain: Rect,
}

fn restrict<P: Patch>(inner: P, domain: Rect) -> Restricted<P> {
    Restricted { inner, domain }
}

impl<P: Patch> Patch for Restricted<P> {
    fn domain(&self) -> Rect {
        self.domain
    }
    fn kind(&self) -> PatchKind {
        self.inner.kind()
    }
    fn point(&self, u: f64, v: f64) -> dmin_core::Result<dmin_core::geom021::Vec021> {
        self.inner.point(u, v)
    }
}

struct Sample {
    u: f64,
    v: f64,
    forms: Option<FundamentalForms>,
    mean: f64,
    gauss: f64,
    codazzi: Option<f64>,
}

// Outer step of the Codazzi stencil relative to the domain extent. It nests
// second derivatives inside first ones, so it needs to be coarser than the
// form step to keep roundoff below the truncation error.
const CODAZZI_STEP: f64 = 5e-3;

fn sample(patch: &dyn Patch, u: f64, v: f64, step: f64) -> Result<Sample, Error> {
    let forms = match fundamental_forms(patch, u, v, step) {
        Ok(f) => f,
        Err(Error::DegenerateMetric { .. }) => {
            return Ok(Sample { u, v, forms: None, mean: f64::NAN, gauss: f64::NAN, codazzi: None });
        }
        Err(e) => return Err(e),
    };
    let codazzi = match patch.kind() {
        PatchKind::Graph => Some(codazzi_residual(patch, u, v, CODAZZI_STEP * patch.domain().extent())?),
        _ => None,
    };
    Ok(Sample { u, v, forms: Some(forms), mean: mean_curvature(&forms)?, gauss: relative_gauss_curvature(&forms)?, codazzi })
}

// Extremum and its location, reduced in index order.
fn extremum(samples: &[Sample], value: impl Fn(&Sample) -> f64, better: impl Fn(f64, f64) -> bool) -> Value {
    let mut best: Option<(f64, f64, f64)> = None;
    for s in samples {
        let x = value(s);
        if x.is_nan() {
            continue;
        }
        if best.is_none_or(|b| better(x, b.0)) {
            best = Some((x, s.u, s.v));
        }
    }
    match best {
        Some((x, u, v)) => json!({ "value": x, "at": [u, v] }),
        None => Value::Null,
    }
}

fn analyze(a: &AnalyzeArgs) -> Outcome {
    let r = resolve(&a.source, &a.region)?
        .ok_or_else(|| Failure::input("analyze needs --catalog, --graph, or --F/--G"))?;
    let step = r.grid.rect.default_step();
    let points = r.grid.to_vec();
    let patch = r.patch.as_ref();
    let samples: Vec<Sample> =
        points.par_iter().map(|&(u, v)| sample(patch, u, v, step)).collect::<Result<_, _>>()?;

    let singular: Vec<&Sample> = samples.iter().filter(|s| s.forms.is_none()).collect();
    if singular.len() > a.singular_budget {
        let s = singular[0];
        return Err(Failure::new(
            EXIT_DEGENERATE,
            format!(
                "{} metric-degenerate samples exceed the budget of {} (first at ({}, {}))",
                singular.len(),
                a.singular_budget,
                s.u,
                s.v
            ),
        ));
    }

    let class = |s: &Sample| s.forms.map(|_| classify_point(s.gauss, a.tol).name()).unwrap_or("singular");
    let mut counts = [0usize; 4];
    for s in &samples {
        let k = ["elliptic", "hyperbolic", "parabolic", "singular"].iter().position(|c| *c == class(s)).unwrap();
        counts[k] += 1;
    }
    let max_abs_h = samples.iter().map(|s| s.mean.abs()).filter(|x| !x.is_nan()).fold(0.0, f64::max);
    let codazzi_max = match patch.kind() {
        PatchKind::Graph => json!(samples.iter().filter_map(|s| s.codazzi).fold(0.0, f64::max)),
        _ => Value::Null,
    };
    let rect = r.grid.rect;
    let summary = json!({
        "schema": SCHEMA,
        "command": "analyze",
        "source": r.label,
        "domain": [rect.u0, rect.u1, rect.v0, rect.v1],
        "grid": [r.grid.nu, r.grid.nv],
        "samples": samples.len(),
        "tol": a.tol,
        "extrema": {
            "H_min": extremum(&samples, |s| s.mean, |x, b| x < b),
            "H_max": extremum(&samples, |s| s.mean, |x, b| x > b),
            "K_min": extremum(&samples, |s| s.gauss, |x, b| x < b),
            "K_max": extremum(&samples, |s| s.gauss, |x, b| x > b),
        },
        "max_abs_H": max_abs_h,
        "codazzi_residual_max": codazzi_max,
        "classes": {
            "elliptic": counts[0],
            "hyperbolic": counts[1],
            "parabolic": counts[2],
            "singular": counts[3],
        },
        "d_minimal": max_abs_h <= a.tol,
    });

    if let Some(path) = a.out.as_deref() {
        match a.format {
            Format::Json => emit(Some(path), |w| formats::write_json(w, &summary))?,
            Format::Csv => {
                let header = ["u", "v", "g11", "g12", "g22", "h11", "h12", "h22", "H", "K", "class"];
                let rows = samples.iter().map(|s| {
                    let f = s.forms.unwrap_or(FundamentalForms {
                        g11: f64::NAN,
                        g12: f64::NAN,
                        g22: f64::NAN,
                        h11: f64::NAN,
                        h12: f64::NAN,
                        h22: f64::NAN,
                    });
                    let mut row: Vec<String> =
                        [s.u, s.v, f.g11, f.g12, f.g22, f.h11, f.h12, f.h22, s.mean, s.gauss].map(num).into();
                    row.push(class(s).to_string());
                    row
                });
                emit(Some(path), |w| formats::write_csv(w, &header, rows))?
            }
            Format::Obj => return Err(Failure::input("analyze writes csv or json")),
        }
    }
    emit(None, |w| formats::write_json(w, &summary))
}

fn singular(a: &SingularArgs) -> Outcome {
    let domain = domain_or_square(&a.region);
    let data = require_weierstrass(&a.data, domain)?;
    let (nu, nv) = a.region.grid.unwrap_or((64, 64));
    let cfg = ScanConfig { nu, nv, tol: a.tol, ..ScanConfig::default() };
    let report = singular_report_with(&data, domain, &cfg)?;
    let doc: Value = report
        .iter()
        .map(|p| {
            json!({
                "re": p.w.re,
                "im": p.w.im,
                "multiplicity": p.multiplicity,
                "rank": p.rank,
                "g_vanishes": p.g_vanishes,
                "refined": p.refined,
            })
        })
        .collect();
    if let Some(path) = a.out.as_deref() {
        emit(Some(path), |w| formats::write_json(w, &doc))?;
    }
    emit(None, |w| formats::write_json(w, &doc))
}

fn forms_input(a: &ReconstructArgs) -> Result<(PrescribedForms, Sampling), Failure> {
    if let Some(path) = &a.forms {
        if a.region.domain.is_some() || a.region.grid.is_some() {
            return Err(Failure::input("--forms fixes the grid; drop --domain and --grid"));
        }
        let file = File::open(path).map_err(|e| Failure::new(EXIT_OTHER, format!("{}: {e}", path.display())))?;
        let t = formats::read_forms_csv(file).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        if !formats::uniform(&t.us) || !formats::uniform(&t.vs) {
            return Err(Failure::input(format!("{}: grid is not uniformly spaced", path.display())));
        }
        let rect = Rect::new(t.us[0], t.us[t.us.len() - 1], t.vs[0], t.vs[t.vs.len() - 1])?;
        let grid = Sampling::nodes(rect, t.us.len(), t.vs.len())?;
        let [h11, h12, h22] = t.h;
        return Ok((PrescribedForms::from_grid(grid, h11, h12, h22)?, grid));
    }
    let (Some(h11), Some(h12), Some(h22)) = (&a.h11, &a.h12, &a.h22) else {
        return Err(Failure::input("reconstruct needs --h11, --h12 and --h22, or --forms"));
    };
    let domain = domain_or_square(&a.region);
    let (nu, nv) = a.region.grid.unwrap_or(DEFAULT_RECONSTRUCT_GRID);
    Ok((PrescribedForms::parse(h11, h12, h22, domain)?, Sampling::nodes(domain, nu, nv)?))
}

fn reconstruct(a: &ReconstructArgs) -> Outcome {
    let (forms, grid) = forms_input(a)?;
    let report = codazzi_check(&forms, &grid, a.tol)?;
    let verdict = format!(
        "codazzi residual {:e} (tol {:e}): {}",
        report.max_residual(),
        a.tol,
        if report.pass { "pass" } else { "fail" }
    );
    // Keep standard output clean for the mesh when it is the destination.
    if a.out.is_some() {
        println!("{verdict}");
    } else {
        eprintln!("{verdict}");
    }
    if !report.pass {
        let (u, v) = report.worst_at;
        return Err(Failure::new(EXIT_CODAZZI, format!("Codazzi equations fail near ({u}, {v}); no output written")));
    }
    let (cu, cv) = grid.rect.center();
    let base = a.base.map(|b| (b.re, b.im)).unwrap_or((cu, cv));
    let seed = a.seed.map(|[f0, fu0, fv0]| Seed { f0, fu0, fv0 }).unwrap_or_default();
    let s = surface_from_forms(&forms, base, seed, &grid, a.tol)?;
    let points = grid.to_vec();
    let vertices: Vec<[f64; 3]> =
        points.par_iter().map(|&(u, v)| s.height(u, v).map(|z| [u, v, z])).collect::<Result<_, _>>()?;
    write_mesh(a.out.as_deref(), a.format, "reconstruct", &grid, &vertices, &["f"])
}

fn locus_json(l: &ELocus) -> Value {
    json!({
        "discrete": l.is_discrete(),
        "clusters": l.clusters.iter().map(|c| json!({
            "center": [c.center.0, c.center.1],
            "samples": c.nodes.len(),
            "refined": c.refined,
            "isolated": c.isolated,
        })).collect::<Vec<_>>(),
    })
}

fn zmc_json(r: &FlatZmcReport) -> Value {
    json!({
        "pass": r.pass,
        "zmc": r.is_zmc(),
        "flat": r.is_flat(),
        "max_mean_curvature": r.max_mean_curvature,
        "max_mean_curvature_at": [r.max_mean_curvature_at.0, r.max_mean_curvature_at.1],
        "max_gauss_curvature": r.max_gauss_curvature,
        "max_gauss_curvature_at": [r.max_gauss_curvature_at.0, r.max_gauss_curvature_at.1],
        "non_spacelike": r.non_spacelike.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>(),
        "samples": r.samples,
        "tol": r.tol,
    })
}

fn embed_cmd(a: &EmbedArgs) -> Outcome {
    let xs = [&a.x1, &a.x2, &a.x3, &a.x4];
    let given = xs.iter().filter(|x| x.is_some()).count();
    let resolved = resolve(&a.source, &a.region)?;
    let (report, locus, label, grid) = match (given, resolved) {
        (4, None) => {
            let domain = domain_or_square(&a.region);
            let [x1, x2, x3, x4] = xs.map(|x| x.as_deref().unwrap());
            let m = ExprMinkSurface::parse(x1, x2, x3, x4, domain)?;
            let (nu, nv) = a.region.grid.unwrap_or(DEFAULT_ANALYSIS_GRID);
            let grid = Sampling::cells(domain, nu, nv)?;
            (check(&m, &grid, a.tol), None, format!("mink:{x1},{x2},{x3},{x4}"), grid)
        }
        (0, Some(r)) => {
            if let Some(data) = &r.data {
                warn_about_data(data, &r.grid);
            }
            let report = check(&embed(r.patch.as_ref()), &r.grid, a.tol);
            let locus = vanishing_h_locus(r.patch.as_ref(), &r.grid, a.tol)?;
            (report, Some(locus), r.label, r.grid)
        }
        (0, None) => return Err(Failure::input("embed needs --x1..--x4, --catalog, --graph, or --F/--G")),
        (4, Some(_)) => return Err(Failure::input("give either --x1..--x4 or a surface in R^{0,2,1}, not both")),
        _ => return Err(Failure::input("--x1, --x2, --x3 and --x4 go together")),
    };
    let rect = grid.rect;
    let doc = json!({
        "schema": SCHEMA,
        "command": "embed",
        "source": label,
        "domain": [rect.u0, rect.u1, rect.v0, rect.v1],
        "grid": [grid.nu, grid.nv],
        "report": zmc_json(&report),
        "e_locus": locus.as_ref().map(locus_json),
    });
    if let Some(path) = a.out.as_deref() {
        emit(Some(path), |w| formats::write_json(w, &doc))?;
    }
    emit(None, |w| formats::write_json(w, &doc))?;
    if let Some((u, v)) = report.non_spacelike.first() {
        return Err(Failure::new(
            EXIT_DEGENERATE,
            format!("{} samples are not spacelike (first at ({u}, {v}))", report.non_spacelike.len()),
        ));
    }
    Ok(())
}

fn check<M: MinkPatch + ?Sized>(m: &M, grid: &Sampling, tol: f64) -> FlatZmcReport {
    verify_flat_zmc(m, grid, tol)
}

fn catalog_cmd(a: &CatalogArgs) -> Outcome {
    let mut entries = Vec::new();
    let mut mismatches = Vec::new();
    for name in catalog::names() {
        let e = catalog::get(name)?;
        let r = e.domain();
        let mut item = json!({
            "name": e.name,
            "kind": format!("{:?}", e.patch.kind()).to_lowercase(),
            "domain": [r.u0, r.u1, r.v0, r.v1],
            "grid": [e.sampling.nu, e.sampling.nv],
            "expected": {
                "d_minimal": e.expected.is_d_minimal,
                "umbilical": e.expected.is_umbilical,
                "k_sign": e.expected.k_sign,
            },
        });
        if a.check {
            let m = catalog::measure(&e, &e.sampling)?;
            let ok = m.matches(&e.expected);
            if !ok {
                mismatches.push(e.name.clone());
            }
            item["measured"] = json!({
                "max_abs_H": m.max_abs_mean_curvature,
                "K_min": m.min_k,
                "K_max": m.max_k,
                "umbilic_defect": m.umbilic_defect,
                "matches": ok,
            });
        }
        entries.push(item);
    }
    let doc = json!({ "schema": SCHEMA, "command": "catalog", "entries": entries });
    emit(None, |w| formats::write_json(w, &doc))?;
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_OTHER, format!("measured flags differ from expected for: {}", mismatches.join(", "))))
    }
}
