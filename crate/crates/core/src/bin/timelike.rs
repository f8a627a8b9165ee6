//! Command-line interface: every subcommand prints a JSON summary to stdout
//! and writes its data files into the output directory.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use timelike::curves::{find_vertices, maslov_index, strain_profile, Domain};
use timelike::frames::{canonical_frame_at, curvature_profile};
use timelike::geometry::{toroidal_projection, EinsteinPoint};
use timelike::homogeneous::{classify, curvatures_from_params, parametrize, HomogeneousClass, HomogeneousParams, Rational};
use timelike::knots::{
    bennequin, directrix_invariants, linking_number, self_linking, torus_knot, writhe, DirectrixOptions, Stereographic,
    TorusKind,
};
use timelike::variational::{
    closed_critical_curve, critical_path, curvature_solution, in_d_star, period_map, CriticalParams, CriticalPath, PERIOD_TOL,
};
use timelike::{io, verify, Error, Result};

#[derive(Parser)]
#[command(name = "timelike", version, about = "Conformal geometry of timelike curves in the Einstein universe")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Integration tolerance (defaults per command)
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Number of output samples
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Seed for randomized projection directions and poles
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Output directory for data files
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Homogeneous curve of a class: samples, invariants, toroidal projection
    Homogeneous {
        /// Class C1, C2i, C2ii, C3, ..., C9
        #[arg(long)]
        class: HomogeneousClass,
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        /// Real or rational (m/n); a rational b closes C2 curves
        #[arg(long, default_value = "0")]
        b: String,
    },
    /// Strain and curvature profile of a sampled curve (CSV t,x0..x4)
    Invariants {
        #[arg(long)]
        input: PathBuf,
        /// Treat the samples as one period of a closed curve
        #[arg(long)]
        periodic: bool,
    },
    /// Critical curve of the strain functional with first integrals (e1, e2)
    Critical {
        #[arg(long, allow_hyphen_values = true)]
        e1: f64,
        #[arg(long, allow_hyphen_values = true)]
        e2: f64,
        /// Length in the conformal parameter (default: one curvature period, 20 for type 3)
        #[arg(long)]
        length: Option<f64>,
    },
    /// Closed critical curve with period-map value (q1, q2)
    Closed {
        #[arg(long, num_args = 2, value_names = ["Q1", "Q2"])]
        psi: Vec<Rational>,
    },
    /// Directrices of the closed C2i curve (a, m/n) with their invariants
    Directrix {
        #[arg(long)]
        a: f64,
        /// Rational m/n with 0 < m < n
        #[arg(long)]
        b: Rational,
    },
    /// Invariants of knots and links given as CSV t,x,y,z
    Knot {
        #[command(subcommand)]
        op: KnotOp,
    },
    /// Full acceptance suite
    Verify {
        /// Run a single criterion
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Subcommand)]
enum KnotOp {
    /// Linking number of two knots
    Link {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Self-linking number (principal-normal push-off)
    SelfLinking {
        #[arg(long)]
        input: PathBuf,
    },
    /// Writhe along a projection direction
    Writhe {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, num_args = 3, allow_hyphen_values = true, default_values_t = [0.0, 0.0, 1.0])]
        direction: Vec<f64>,
    },
    /// Bennequin number of a closed path on S³ (CSV u,y1..y4)
    Bennequin {
        #[arg(long)]
        input: PathBuf,
    },
    /// Write a torus knot as CSV
    Torus {
        /// standard, starred or check
        #[arg(long, default_value = "standard")]
        kind: TorusKind,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
}

struct Summary {
    command: String,
    params: Value,
    results: Value,
    tolerances: Value,
    warnings: Vec<String>,
}

impl Summary {
    fn new(command: &str, params: Value) -> Self {
        Summary { command: command.into(), params, results: json!({}), tolerances: json!({}), warnings: vec![] }
    }

    fn json(&self) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "tolerances": self.tolerances,
            "warnings": self.warnings,
        })
    }
}

fn out_file(dir: &Path, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Usage(format!("{}: {e}", dir.display())))?;
    Ok(dir.join(name))
}

fn toroidal_json(points: &[EinsteinPoint]) -> Value {
    let poly: Vec<[f64; 3]> = points.iter().map(|p| toroidal_projection(p).into()).collect();
    json!({ "polyline": poly })
}

fn write_curve_files(dir: &Path, ts: &[f64], points: &[EinsteinPoint], files: &mut Vec<String>) -> Result<()> {
    let samples: Vec<(f64, EinsteinPoint)> = ts.iter().copied().zip(points.iter().copied()).collect();
    let p = out_file(dir, "curve.csv")?;
    io::write_curve_csv(&p, &samples)?;
    files.push(p.display().to_string());
    let p = out_file(dir, "toroidal.json")?;
    io::write_json(&p, &toroidal_json(points))?;
    files.push(p.display().to_string());
    Ok(())
}

fn write_path_files(dir: &Path, path: &CriticalPath, files: &mut Vec<String>) -> Result<()> {
    write_curve_files(dir, &path.u, &path.curve_points(), files)?;
    let p = out_file(dir, "phase.csv")?;
    io::write_phase_csv(&p, &path.u, &path.k, &path.kdot)?;
    files.push(p.display().to_string());
    let p = out_file(dir, "frames.csv")?;
    io::write_frame_csv(&p, &path.u, &path.frames, &path.k, &path.h)?;
    files.push(p.display().to_string());
    Ok(())
}

fn parse_b(s: &str) -> Result<HomogeneousParams> {
    if s.contains('/') {
        Ok(HomogeneousParams::with_rational(0.0, s.parse()?))
    } else {
        let b: f64 = s.trim().parse().map_err(|_| Error::Usage(format!("b must be a number or m/n, got {s}")))?;
        Ok(HomogeneousParams::new(0.0, b))
    }
}

fn homogeneous(c: &Common, class: HomogeneousClass, a: f64, b: &str) -> Result<Summary> {
    let mut params = parse_b(b)?;
    params.a = a;
    let mut s = Summary::new("homogeneous", json!({ "class": class.to_string(), "a": a, "b": b }));
    let curve = parametrize(class, &params)?;
    s.warnings.extend(curve.warnings.iter().cloned());
    let (k, h) = curvatures_from_params(class, &params)?;
    let (t0, t1) = (curve.domain.start(), curve.domain.end());
    let n = c.samples.unwrap_or(400);
    let prof = curvature_profile(&curve, t0, t1, 32)?;
    let frame = canonical_frame_at(&curve, t0)?;
    let spread = prof.k.iter().map(|x| (x - k).abs()).chain(prof.h.iter().map(|x| (x - h).abs())).fold(0.0, f64::max);
    let maslov = match curve.domain {
        Domain::Periodic { .. } => Some(maslov_index(&curve)?),
        _ => None,
    };
    let samples = curve.sample(n);
    let (ts, pts): (Vec<f64>, Vec<EinsteinPoint>) = samples.into_iter().unzip();
    let mut files = vec![];
    write_curve_files(&c.out, &ts, &pts, &mut files)?;
    let p = out_file(&c.out, "profile.csv")?;
    io::write_profile_csv(&p, &prof.u, &prof.t, &prof.k, &prof.h)?;
    files.push(p.display().to_string());
    s.results = json!({
        "k": k,
        "h": h,
        "frame_k": frame.k,
        "frame_h": frame.h,
        "strain_density": frame.strain_density,
        "classified": classify(k, h).map(|c| c.to_string()).ok(),
        "profile_deviation": spread,
        "domain": [t0, t1],
        "maslov": maslov,
        "files": files,
    });
    Ok(s)
}

fn invariants(c: &Common, input: &Path, periodic: bool) -> Result<Summary> {
    let mut s = Summary::new("invariants", json!({ "input": input.display().to_string(), "periodic": periodic }));
    let curve = io::load_curve(input, periodic)?;
    s.warnings.extend(curve.warnings.iter().cloned());
    let (t0, t1) = (curve.domain.start(), curve.domain.end());
    let n = c.samples.unwrap_or(200);
    let strain = strain_profile(&curve, t0, t1, n)?;
    let vertices = find_vertices(&curve, t0, t1, n)?;
    let mut files = vec![];
    let p = out_file(&c.out, "strain.csv")?;
    io::write_strain_csv(&p, &strain.t, &strain.density, &strain.strain)?;
    files.push(p.display().to_string());
    let profile = match curvature_profile(&curve, t0, t1, n) {
        Ok(prof) => {
            let p = out_file(&c.out, "profile.csv")?;
            io::write_profile_csv(&p, &prof.u, &prof.t, &prof.k, &prof.h)?;
            files.push(p.display().to_string());
            true
        }
        Err(e) => {
            s.warnings.push(format!("no curvature profile: {e}"));
            false
        }
    };
    let maslov = if periodic { Some(maslov_index(&curve)?) } else { None };
    s.results = json!({
        "conformal_length": strain.strain.last(),
        "vertices": vertices,
        "maslov": maslov,
        "profile": profile,
        "files": files,
    });
    Ok(s)
}

fn critical(c: &Common, e1: f64, e2: f64, length: Option<f64>) -> Result<Summary> {
    let tol = c.tol.unwrap_or(PERIOD_TOL);
    let mut s = Summary::new("critical", json!({ "e1": e1, "e2": e2, "length": length }));
    let params = CriticalParams::new(e1, e2)?;
    let sol = curvature_solution(&params);
    s.warnings.extend(sol.warnings.iter().cloned());
    let len = match (length, params.curvature_period()) {
        (Some(l), _) => l,
        (None, Some(w)) => w,
        (None, None) => 20.0,
    };
    if !(len > 0.0) {
        return Err(Error::Usage("length must be positive".into()));
    }
    let path = critical_path(&params, &timelike::frames::MobiusFrame::identity(), 0.0, len, tol)?;
    let lax = path.u.iter().map(|&u| sol.lax_residual(u)).fold(0.0, f64::max);
    let psi = if in_d_star(e1, e2) { Some(period_map(e1, e2)?) } else { None };
    let mut files = vec![];
    write_path_files(&c.out, &path, &mut files)?;
    s.tolerances = json!({ "integration": tol });
    s.results = json!({
        "phase_type": params.phase_type,
        "m": params.m,
        "p": params.p,
        "curvature_period": params.curvature_period(),
        "length": len,
        "momentum_drift": path.momentum_drift(),
        "first_integral_residual": path.first_integral_residual(),
        "lax_residual": lax,
        "period_map": psi,
        "files": files,
    });
    Ok(s)
}

fn closed(c: &Common, psi: &[Rational]) -> Result<Summary> {
    let (q1, q2) = (psi[0], psi[1]);
    let mut s = Summary::new("closed", json!({ "psi": [q1.to_string(), q2.to_string()] }));
    let cc = closed_critical_curve(q1, q2)?;
    let mut files = vec![];
    write_path_files(&c.out, &cc.path, &mut files)?;
    s.tolerances = json!({ "closure": timelike::variational::CLOSURE_TOL, "integration": PERIOD_TOL });
    s.results = json!({
        "e1": cc.inversion.e1,
        "e2": cc.inversion.e2,
        "psi": cc.inversion.psi,
        "inversion_residual": cc.inversion.residual,
        "curvature_period": cc.omega,
        "periods": cc.periods,
        "length": cc.length,
        "frame_gap": cc.frame_gap,
        "curve_gap": cc.curve_gap,
        "files": files,
    });
    Ok(s)
}

fn directrix(c: &Common, a: f64, b: Rational) -> Result<Summary> {
    let mut s = Summary::new("directrix", json!({ "a": a, "b": b.to_string() }));
    let mut opts = DirectrixOptions { seed: c.seed, ..DirectrixOptions::default() };
    if let Some(n) = c.samples {
        opts.samples = n;
    }
    if let Some(t) = c.tol {
        opts.tol = t;
    }
    let rep = directrix_invariants(a, b.num, b.den, &opts)?;
    let st = Stereographic::new(rep.pole)?;
    let mut files = vec![];
    for (name, path) in [("gamma", &rep.gamma), ("gamma_star", &rep.gamma_star)] {
        let p = out_file(&c.out, &format!("{name}.csv"))?;
        io::write_directrix_csv(&p, path)?;
        files.push(p.display().to_string());
        let image = path.points.iter().map(|x| st.map(x)).collect::<Result<Vec<_>>>()?;
        let p = out_file(&c.out, &format!("st_{name}.csv"))?;
        io::write_stereo_csv(&p, &path.u, &image)?;
        files.push(p.display().to_string());
    }
    let p = out_file(&c.out, "link.json")?;
    io::write_json(&p, &rep.link.diagram)?;
    files.push(p.display().to_string());
    if !rep.agree {
        s.warnings.push("computed invariants differ from the predicted values".into());
    }
    s.tolerances = json!({ "integration": opts.tol, "closure": 1e-6, "rounding_guard": timelike::knots::ROUND_GUARD });
    s.results = serde_json::to_value(&rep).map_err(|e| Error::Numeric(e.to_string()))?;
    s.results["files"] = json!(files);
    Ok(s)
}

fn knot(c: &Common, op: &KnotOp) -> Result<Summary> {
    let guard = json!({ "rounding_guard": timelike::knots::ROUND_GUARD, "simplicity": timelike::knots::SIMPLE_TOL });
    let mut s = match op {
        KnotOp::Link { a, b } => {
            let mut s = Summary::new("knot link", json!({ "a": a.display().to_string(), "b": b.display().to_string() }));
            let rep = linking_number(&io::read_knot_csv(a)?, &io::read_knot_csv(b)?, c.seed)?;
            let p = out_file(&c.out, "link.json")?;
            io::write_json(&p, &rep.diagram)?;
            eprintln!("{}", rep.linking);
            s.results = json!({ "linking": rep.linking, "gauss": rep.gauss, "crossings": rep.diagram.crossings.len(), "files": [p.display().to_string()] });
            s
        }
        KnotOp::SelfLinking { input } => {
            let mut s = Summary::new("knot self-linking", json!({ "input": input.display().to_string() }));
            s.results = json!({ "self_linking": self_linking(&io::read_knot_csv(input)?, c.seed)? });
            s
        }
        KnotOp::Writhe { input, direction } => {
            let mut s = Summary::new("knot writhe", json!({ "input": input.display().to_string(), "direction": direction }));
            let v = [direction[0], direction[1], direction[2]];
            s.results = json!({ "writhe": writhe(&io::read_knot_csv(input)?, &v, c.seed)? });
            s
        }
        KnotOp::Bennequin { input } => {
            let mut s = Summary::new("knot bennequin", json!({ "input": input.display().to_string() }));
            let (path, period) = io::read_directrix_csv(input)?;
            let st = Stereographic::avoiding(&[&path], c.seed)?;
            let rep = bennequin(&path, period, &st, c.seed)?;
            s.results = json!({ "bennequin": rep.value, "e1": rep.e1, "e2": rep.e2, "pole": st.pole.as_slice() });
            s
        }
        KnotOp::Torus { kind, p, q } => {
            let mut s = Summary::new("knot torus", json!({ "kind": kind, "p": p, "q": q }));
            let k = torus_knot(*kind, *p, *q, c.samples.unwrap_or(2048))?;
            let f = out_file(&c.out, &format!("{}_{p}_{q}.csv", format!("{kind:?}").to_lowercase()))?;
            io::write_knot_csv(&f, &k)?;
            s.results = json!({ "samples": k.len(), "files": [f.display().to_string()] });
            s
        }
    };
    s.tolerances = guard;
    Ok(s)
}

fn verify_cmd(c: &Common, criterion: Option<usize>) -> Result<(Summary, bool)> {
    let mut s = Summary::new("verify", json!({ "seed": c.seed, "criterion": criterion }));
    let checks = match criterion {
        Some(id) => vec![verify::criterion(id, c.seed)?],
        None => verify::run_all(c.seed),
    };
    for ch in &checks {
        eprintln!("{}", ch.line());
    }
    let ok = checks.iter().all(|ch| ch.passed);
    s.results = json!({ "passed": ok, "criteria": checks });
    Ok((s, ok))
}

fn run(cli: &Cli) -> Result<(Summary, bool)> {
    let c = &cli.common;
    if c.tol.is_some_and(|t| !(t > 0.0)) {
        return Err(Error::Usage("--tol must be positive".into()));
    }
    if c.samples.is_some_and(|n| n < 8) {
        return Err(Error::Usage("--samples must be at least 8".into()));
    }
    let s = match &cli.command {
        Command::Homogeneous { class, a, b } => homogeneous(c, *class, *a, b)?,
        Command::Invariants { input, periodic } => invariants(c, input, *periodic)?,
        Command::Critical { e1, e2, length } => critical(c, *e1, *e2, *length)?,
        Command::Closed { psi } => closed(c, psi)?,
        Command::Directrix { a, b } => directrix(c, *a, *b)?,
        Command::Knot { op } => knot(c, op)?,
        Command::Verify { criterion } => return verify_cmd(c, *criterion),
    };
    Ok((s, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((s, ok)) => {
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&s.json()).unwrap_or_default());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
