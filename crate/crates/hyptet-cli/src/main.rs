//! Command-line front end: constants, geodesic construction with JSON/SVG
//! export, length counting tables, the shooting-oracle cross-check, and the
//! ambient tetrahedron export.
//!
//! Exit codes: 0 success, 2 input validation error, 3 invariant failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hyptet::count::{self, count_rows, max_pq_bound, rows_to_csv};
use hyptet::develop::develop;
use hyptet::error::Error;
use hyptet::exec::Mode;
use hyptet::geodesic::{build_geodesic, symmetry_orbit, GeodesicPath, GeodesicType};
use hyptet::hyp::HIsometry;
use hyptet::render::{development_svg, DiskProjection};
use hyptet::shoot::{find_closed, identify_against, OracleConfig};
use hyptet::tetra::{klein_embedding, Surface, TetraParams};

#[derive(Parser)]
#[command(
    name = "hyptet",
    about = "Simple closed geodesics on regular tetrahedra in hyperbolic space",
    version
)]
struct Cli {
    /// Worker threads for the batch drivers (also honors RAYON_NUM_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Projection {
    Poincare,
    Klein,
}

impl From<Projection> for DiskProjection {
    fn from(p: Projection) -> Self {
        match p {
            Projection::Poincare => DiskProjection::Poincare,
            Projection::Klein => DiskProjection::Klein,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the tetrahedron's basic constants for a face angle.
    Info {
        /// Face angle in radians, or a fraction like "pi/6".
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Construct the simple closed geodesic of type (p, q); writes path
    /// JSON and a development SVG.
    Build {
        #[arg(long)]
        alpha: String,
        #[arg(short, long)]
        p: u32,
        #[arg(short, long)]
        q: u32,
        /// Output path for the crossing JSON (default geodesic_p{p}_q{q}.json).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Output path for the development SVG (default development_p{p}_q{q}.svg).
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "poincare")]
        projection: Projection,
    },
    /// Count geodesics of length at most L for a list of thresholds.
    Count {
        #[arg(long)]
        alpha: String,
        /// Comma-separated length thresholds, e.g. "5,10,20".
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for closed geodesics by shooting and cross-identify them
    /// against constructed ones.
    Oracle {
        #[arg(long)]
        alpha: String,
        /// Length budget of the search.
        #[arg(long)]
        l_max: f64,
        /// Grid parameter g: the scan samples g*g launch angles per start
        /// edge. Coarse grids may miss geodesics (reported, exit 0).
        #[arg(long, default_value = "200")]
        grid: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Export the Klein-ball embedding of the tetrahedron as JSON.
    ExportTetra {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_alpha(s: &str) -> Result<f64, Error> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("pi/") {
        let d: f64 = rest
            .parse()
            .map_err(|_| Error::BadInput(format!("cannot parse angle '{s}'")))?;
        if d <= 0.0 {
            return Err(Error::BadInput(format!("bad denominator in '{s}'")));
        }
        return Ok(std::f64::consts::PI / d);
    }
    t.parse::<f64>()
        .map_err(|_| Error::BadInput(format!("cannot parse angle '{s}'")))
}

fn surface_for(alpha_str: &str) -> Result<Surface, Error> {
    Surface::build(TetraParams::new(parse_alpha(alpha_str)?)?)
}

fn cmd_info(alpha: &str, format: TextFormat) -> Result<String, Error> {
    let alpha = parse_alpha(alpha)?;
    let params = TetraParams::new(alpha)?;
    let b = hyptet::tetra::distance_bounds(&params)?;
    let r = klein_embedding(&params)?.circumradius;
    Ok(match format {
        TextFormat::Json => format!(
            "{{\"alpha\":{},\"edge_length\":{},\"altitude\":{},\"d_trig\":{},\"d_log\":{},\"circumradius\":{}}}",
            alpha, b.a, b.h, b.d_trig, b.d_log, r
        ),
        TextFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "alpha        = {alpha}");
            let _ = writeln!(out, "edge length  = {}", b.a);
            let _ = writeln!(out, "altitude     = {}", b.h);
            let _ = writeln!(out, "d_trig bound = {}", b.d_trig);
            let _ = writeln!(out, "d_log bound  = {}", b.d_log);
            let _ = writeln!(out, "circumradius = {r}");
            out
        }
    })
}

fn cmd_build(
    alpha: &str,
    p: u32,
    q: u32,
    json: Option<PathBuf>,
    svg: Option<PathBuf>,
    projection: Projection,
) -> Result<String, Error> {
    let surface = surface_for(alpha)?;
    let ty = GeodesicType::new(p, q)?;
    let path = build_geodesic(&surface, ty)?;

    // develop the first half (2(p+q) copies) and overlay the chord X1 X2
    let faces = path.seq().face_sequence()?;
    let half = 2 * ty.weight() as usize;
    let dev = develop(&surface, &faces[..half], &HIsometry::identity())?;
    let (f0, g0) = dev.placements[0];
    let x1 = g0.apply(&surface.chart_edge_midpoint(f0, path.crossings()[0].edge)?);
    let (fl, gl) = dev.placements[half - 1];
    let x2 = gl.apply(&surface.chart_edge_midpoint(fl, path.crossings()[half].edge)?);
    let svg_text = development_svg(&surface, &dev, &[x1, x2], projection.into())?;
    let json_text = path.to_json_string();

    let json_path = json.unwrap_or_else(|| PathBuf::from(format!("geodesic_p{p}_q{q}.json")));
    let svg_path = svg.unwrap_or_else(|| PathBuf::from(format!("development_p{p}_q{q}.svg")));
    std::fs::write(&json_path, &json_text)
        .map_err(|e| Error::BadInput(format!("cannot write {}: {e}", json_path.display())))?;
    std::fs::write(&svg_path, &svg_text)
        .map_err(|e| Error::BadInput(format!("cannot write {}: {e}", svg_path.display())))?;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "type ({p}, {q}): length {}, {} crossings, closure ({:.2e}, {:.2e})",
        path.length(),
        path.crossings().len(),
        path.closure_pos(),
        path.closure_ang()
    );
    let _ = writeln!(out, "wrote {}", json_path.display());
    let _ = writeln!(out, "wrote {}", svg_path.display());
    Ok(out)
}

fn cmd_count(
    alpha: &str,
    lengths: &[f64],
    format: TableFormat,
    out: Option<PathBuf>,
) -> Result<String, Error> {
    let surface = surface_for(alpha)?;
    for &l in lengths {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::BadInput(format!("length threshold {l} must be positive")));
        }
    }
    let rows = count_rows(&surface, lengths, Mode::Auto)?;
    let text = match format {
        TableFormat::Csv => rows_to_csv(&rows),
        TableFormat::Json => serde_json::to_string_pretty(&rows)
            .map_err(|e| Error::BadInput(e.to_string()))?,
    };
    match out {
        Some(path) => {
            std::fs::write(&path, &text)
                .map_err(|e| Error::BadInput(format!("cannot write {}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(text),
    }
}

fn cmd_oracle(alpha: &str, l_max: f64, grid: usize, format: TextFormat) -> Result<String, Error> {
    let surface = surface_for(alpha)?;
    if !(l_max > 0.0) || !l_max.is_finite() {
        return Err(Error::BadInput(format!("l_max {l_max} must be positive")));
    }
    if grid < 2 {
        return Err(Error::BadInput("grid must be at least 2".into()));
    }
    let cfg = OracleConfig {
        l_max,
        grid,
        refine_tol: 1e-9,
        mode: Mode::Auto,
    };
    let found = find_closed(&surface, &cfg)?;

    // reference set: full symmetry orbits of every canonical type in reach,
    // plus the exceptional (1,1) square, which lies outside the canonical
    // family but is a genuine simple closed geodesic
    let bound = max_pq_bound(l_max, surface.alpha())?.max(0) as u32;
    let mut built: Vec<GeodesicPath> = Vec::new();
    let mut expected = 0usize;
    for ty in count::canonical_types(bound) {
        if hyptet::geodesic::geodesic_length(&surface, ty)? <= l_max {
            let orbit = symmetry_orbit(&surface, &build_geodesic(&surface, ty)?)?;
            expected += orbit.len();
            built.extend(orbit);
        }
    }
    let square = hyptet::geodesic::build_exceptional_square(&surface)?;
    if square.length() <= l_max {
        let orbit = symmetry_orbit(&surface, &square)?;
        expected += orbit.len();
        built.extend(orbit);
    }

    let mut identified = 0usize;
    let mut unidentified = 0usize;
    let mut lines = Vec::new();
    let mut json_items = Vec::new();
    for f in &found {
        let id = identify_against(f, &built, 1e-8);
        match id {
            Some(_) => identified += 1,
            None => unidentified += 1,
        }
        let label = match id {
            Some(t) if t.p() == t.q() => "(1, 1) exceptional square".to_string(),
            Some(t) => t.to_string(),
            None => "unidentified".to_string(),
        };
        lines.push(format!(
            "  {label}: length {:.12}, closure defect ({:.2e}, {:.2e})",
            f.length, f.defect_pos, f.defect_ang
        ));
        json_items.push(format!(
            "{{\"type\":\"{label}\",\"length\":{},\"defect_pos\":{},\"defect_ang\":{}}}",
            f.length, f.defect_pos, f.defect_ang
        ));
    }

    let complete = found.len() >= expected;
    let mut out = String::new();
    match format {
        TextFormat::Json => {
            let _ = write!(
                out,
                "{{\"found\":{},\"identified\":{},\"unidentified\":{},\"expected\":{},\"complete\":{},\"geodesics\":[{}]}}",
                found.len(),
                identified,
                unidentified,
                expected,
                complete,
                json_items.join(",")
            );
            let _ = writeln!(out);
        }
        TextFormat::Text => {
            let _ = writeln!(out, "{} found / {} identified (expected {expected})", found.len(), identified);
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
            if !complete {
                let _ = writeln!(out, "search incomplete: grid too coarse for the length budget");
            }
        }
    }
    if unidentified > 0 {
        return Err(Error::InvariantViolation(format!(
            "{unidentified} closed geodesics could not be identified with constructed ones\n{out}"
        )));
    }
    Ok(out)
}

fn cmd_export_tetra(alpha: &str, out: Option<PathBuf>) -> Result<String, Error> {
    let params = TetraParams::new(parse_alpha(alpha)?)?;
    let text = klein_embedding(&params)?.to_json_string();
    match out {
        Some(path) => {
            std::fs::write(&path, &text)
                .map_err(|e| Error::BadInput(format!("cannot write {}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(text + "\n"),
    }
}

fn run(cli: Cli) -> Result<String, Error> {
    if let Some(n) = cli.threads {
        hyptet::exec::configure_threads(n);
    }
    match cli.command {
        Command::Info { alpha, format } => cmd_info(&alpha, format),
        Command::Build {
            alpha,
            p,
            q,
            json,
            svg,
            projection,
        } => cmd_build(&alpha, p, q, json, svg, projection),
        Command::Count {
            alpha,
            lengths,
            format,
            out,
        } => cmd_count(&alpha, &lengths, format, out),
        Command::Oracle {
            alpha,
            l_max,
            grid,
            format,
        } => cmd_oracle(&alpha, l_max, grid, format),
        Command::ExportTetra { alpha, out } => cmd_export_tetra(&alpha, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
