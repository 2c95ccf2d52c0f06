//! Command-line front end. Every output carries a header with the library version and a hash
//! of the computation-relevant configuration.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::density::{self, DensityReport};
use crate::error::{Error, Result};
use crate::gaps;
use crate::geometry::{self, make_octagon_ab, Window};
use crate::qfield::{QuadInt, RingId};
use crate::quasicrystal::{
    self, count_visible, epsilon_from_gamma, gamma0, generate, make_octagon_w_prime, validate_penrose_translate, w_prime_m,
    FamilySpec, OcclusionSet,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "quasigap", version, about = "Visible points and directional gaps in planar quasicrystals")]
pub struct Cli {
    /// Worker threads; falls back to QUASIGAP_THREADS, then all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum Command {
    /// Point sample CSV with visibility flags.
    Generate(SampleArgs),
    /// Closed-form visible density as JSON.
    Density(DensityArgs),
    /// Closed-form minimal gap as JSON.
    Mingap(FamilyArgs),
    /// Normalized gaps of the visible points in B_T.
    Gaps(SampleArgs),
    /// δ_T for a list of radii, as CSV and optionally SVG.
    Series(SeriesArgs),
    /// Gap histogram as CSV and optionally SVG.
    Hist(HistArgs),
    /// Visible counts for the Ammann–Beenker set and its translated-window variant.
    Table1(TableArgs),
    /// Visible counts for the Penrose set with γ = (2, 1, −2, −2, 1)/101.
    Table2(TableArgs),
    /// Visible fraction of Z^d against 1/ζ(d).
    Zd(ZdArgs),
    /// Check a rational translate γ for the Penrose construction.
    ValidateGamma(GammaArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum FamilyArg {
    A,
    T,
    P,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum OcclusionArg {
    /// Closed-form predicate of the family.
    Default,
    /// (ℙ ∖ {√2}) ∪ M for the window translated by 457 − 323√2.
    WPrime,
}

#[derive(Args, Debug, Serialize)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value = "a")]
    pub family: FamilyArg,
    /// Window name (octagon_ab, octagon_w_prime, decagon_t, pentagon_w1) or a JSON file.
    #[arg(long)]
    pub window: Option<String>,
    /// Penrose translate as five comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Occlusion rule for visibility.
    #[arg(long, value_enum)]
    pub occlusion: Option<OcclusionArg>,
    /// Visible density to use where no closed form applies.
    #[arg(long)]
    pub theta_hat: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long = "T", allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct DensityArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Also count points in B_T for an empirical estimate.
    #[arg(long = "empirical-T")]
    pub empirical_t: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Radii as `start:stop:step` or a comma list.
    #[arg(long = "Ts")]
    pub ts: String,
    /// SVG scatter plot path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct HistArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    #[arg(long, default_value_t = 0.02)]
    pub bin_width: f64,
    /// SVG bar chart path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Overlay the limiting density of Z² on the SVG.
    #[arg(long)]
    pub overlay_z2: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct TableArgs {
    /// Radii as `start:stop:step` or a comma list; the reference radii when omitted.
    #[arg(long = "Ts")]
    pub ts: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct ZdArgs {
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long = "T")]
    pub t: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct GammaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
}

/// Runs the CLI on `args`, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let threads = cli.threads.or_else(|| std::env::var("QUASIGAP_THREADS").ok().and_then(|v| v.parse().ok()));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return 2;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Precondition(_) | Error::Json(_) => 2,
                _ => 1,
            }
        }
    }
}

/// Hex SHA-256 of the command's JSON form.
pub fn config_hash(cmd: &Command) -> String {
    let v = serde_json::to_vec(cmd).expect("serializable config");
    Sha256::digest(&v).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn header(cmd: &Command) -> String {
    format!("quasigap {VERSION} config={}", config_hash(cmd))
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn csv_with_header(cmd: &Command, body: &str) -> String {
    format!("# {}\n{body}", header(cmd))
}

fn json_with_meta(cmd: &Command, mut v: serde_json::Value) -> String {
    v["meta"] = json!({ "version": VERSION, "config_hash": config_hash(cmd) });
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

fn svg_with_header(cmd: &Command, svg: &str) -> String {
    format!("<!-- {} -->\n{svg}", header(cmd))
}

fn parse_t(t: f64) -> Result<f64> {
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(Error::Config(format!("T must be positive, got {t}")))
    }
}

/// `start:stop:step` (inclusive) or `a,b,c`.
pub fn parse_radii(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("bad radius list '{s}'"));
    let v: Vec<f64> = if s.contains(':') {
        let p: Vec<f64> = s.split(':').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        if p.len() != 3 || !(p[2] > 0.0) || p[1] < p[0] {
            return Err(bad());
        }
        let n = ((p[1] - p[0]) / p[2] + 1e-9).floor() as usize;
        (0..=n).map(|i| p[0] + i as f64 * p[2]).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    for &t in &v {
        parse_t(t)?;
    }
    if v.is_empty() {
        return Err(bad());
    }
    Ok(v)
}

fn load_window(name: &str) -> Result<Window> {
    let path = Path::new(name);
    if path.extension().is_some_and(|e| e == "json") || path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read window file {name}: {e}")))?;
        let v: serde_json::Value = serde_json::from_str(&text)?;
        let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("window");
        return Window::from_json(&v, label);
    }
    geometry::by_name(name)
}

fn parse_gamma_arg(g: &Option<String>) -> Result<Vec<BigRational>> {
    match g {
        Some(s) => quasicrystal::parse_gamma(s),
        None => Ok(gamma0().to_vec()),
    }
}

fn build_spec(f: &FamilyArgs) -> Result<FamilySpec> {
    let spec = match f.family {
        FamilyArg::A => FamilySpec::a(load_window(f.window.as_deref().unwrap_or("octagon_ab"))?)?,
        FamilyArg::T => FamilySpec::t(load_window(f.window.as_deref().unwrap_or("decagon_t"))?)?,
        FamilyArg::P => {
            if f.window.is_some() {
                return Err(Error::Config("P-sets take --gamma, not --window".into()));
            }
            FamilySpec::p_gamma(&parse_gamma_arg(&f.gamma)?)?
        }
    };
    let occ = f.occlusion.unwrap_or(if spec.label == "octagon_w_prime" { OcclusionArg::WPrime } else { OcclusionArg::Default });
    match occ {
        OcclusionArg::Default => {
            spec.check_hypothesis()?;
            Ok(spec)
        }
        OcclusionArg::WPrime => {
            if f.family != FamilyArg::A {
                return Err(Error::Config("the w-prime occlusion set applies to A-sets".into()));
            }
            Ok(spec.with_occlusion(OcclusionSet::w_prime()))
        }
    }
}

fn density_report(f: &FamilyArgs, spec: &FamilySpec) -> Result<DensityReport> {
    if spec.occlusion() == Some(&OcclusionSet::w_prime()) {
        return density::density_visible_a_extended(spec.window(), &w_prime_m(), &[QuadInt::new(RingId::Zsqrt2, 0, 1)]);
    }
    let _ = f;
    density::density_visible(spec)
}

fn family_name(f: FamilyArg) -> &'static str {
    match f {
        FamilyArg::A => "A",
        FamilyArg::T => "T",
        FamilyArg::P => "P",
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let cmd = &cli.cmd;
    let out = &cli.out;
    match cmd {
        Command::Generate(a) => {
            let t = parse_t(a.t)?;
            let spec = build_spec(&a.family)?;
            let mut s = generate(&spec, t)?;
            s.compute_visibility()?;
            if s.boundary_hits > 0 {
                eprintln!("warning: {} points on the window boundary", s.boundary_hits);
            }
            let mut body = String::from("a,b,c,d,re,im,visible\n");
            let vis = s.visible.as_ref().expect("computed");
            for (x, v) in s.points.iter().zip(vis) {
                let [a, b, c, d] = x.coeffs();
                let (re, im) = x.phys_f64();
                let _ = writeln!(body, "{a},{b},{c},{d},{re:.12},{im:.12},{}", u8::from(*v));
            }
            emit(out, &csv_with_header(cmd, &body))?;
        }
        Command::Density(a) => {
            let spec = build_spec(&a.family)?;
            let rep = density_report(&a.family, &spec)?;
            let mut v = json!({
                "family": family_name(a.family.family),
                "window": spec.label,
                "method": rep.method,
                "theta_total": rep.theta_total,
                "theta_visible": rep.theta_visible,
                "fraction": rep.relative_visible_fraction,
                "subset_sum": rep.subset_sum,
                "terms": rep.terms,
            });
            if let Some(t) = a.empirical_t {
                let t = parse_t(t)?;
                eprintln!("counting points in B_{t}");
                let c = count_visible(&spec, &[t])?;
                let e = density::empirical_from_counts(c.total[0], c.visible[0], t);
                v["empirical"] = json!({ "T": t, "N": c.total[0], "N_hat": c.visible[0],
                    "theta_total": e.theta_total, "theta_visible": e.theta_visible });
            }
            emit(out, &json_with_meta(cmd, v))?;
        }
        Command::Mingap(f) => {
            let spec = build_spec(f)?;
            let r = match f.family {
                FamilyArg::A => {
                    let theta = match f.theta_hat {
                        Some(t) => Some(t),
                        None if spec.occlusion().is_some() => Some(density_report(f, &spec)?.theta_visible),
                        None => None,
                    };
                    gaps::min_gap_a(spec.window(), theta)?
                }
                FamilyArg::P => gaps::min_gap_p(spec.epsilon().expect("P spec"))?,
                FamilyArg::T => return Err(Error::Config("no closed-form minimal gap for T-sets".into())),
            };
            let v = json!({ "family": family_name(f.family), "window": spec.label, "result": r });
            emit(out, &json_with_meta(cmd, v))?;
        }
        Command::Gaps(a) => {
            let t = parse_t(a.t)?;
            let spec = build_spec(&a.family)?;
            let mut s = generate(&spec, t)?;
            s.compute_visibility()?;
            let g = gaps::gap_series(&s)?;
            let mut body = format!("# N_hat={} delta_T={:.12}\ni,xi,d\n", g.n_hat, g.delta_t);
            for (i, (xi, d)) in g.xi.iter().zip(&g.d).enumerate() {
                let _ = writeln!(body, "{},{xi:.15},{d:.12}", i + 1);
            }
            emit(out, &csv_with_header(cmd, &body))?;
        }
        Command::Series(a) => {
            let ts = parse_radii(&a.ts)?;
            let spec = build_spec(&a.family)?;
            eprintln!("generating up to T={}", ts.iter().copied().fold(0.0, f64::max));
            let ser = gaps::delta_series(&spec, &ts)?;
            emit(out, &csv_with_header(cmd, &gaps::series_csv(&ser)))?;
            if let Some(p) = &a.svg {
                let lines = reference_lines(&a.family, &spec);
                let svg = gaps::series_svg(&ser, &format!("delta_T for {}", spec.label), &lines);
                std::fs::write(p, svg_with_header(cmd, &svg))?;
            }
        }
        Command::Hist(a) => {
            let t = parse_t(a.sample.t)?;
            let spec = build_spec(&a.sample.family)?;
            let mut s = generate(&spec, t)?;
            s.compute_visibility()?;
            let g = gaps::gap_series(&s)?;
            let h = gaps::histogram(&g, a.bin_width)?;
            emit(out, &csv_with_header(cmd, &h.to_csv()))?;
            if let Some(p) = &a.svg {
                let f: &dyn Fn(f64) -> f64 = &gaps::z2_limit_density;
                let svg = gaps::histogram_svg(&h, &format!("gaps of {} in B_{t}", spec.label), a.overlay_z2.then_some(f));
                std::fs::write(p, svg_with_header(cmd, &svg))?;
            }
        }
        Command::Table1(a) => {
            let ts = match &a.ts {
                Some(s) => parse_radii(s)?,
                None => vec![1000.0, 2500.0, 3500.0],
            };
            let ab = FamilySpec::a(make_octagon_ab())?;
            let wp = FamilySpec::a(make_octagon_w_prime())?.with_occlusion(OcclusionSet::w_prime());
            eprintln!("counting A_W");
            let c1 = count_visible(&ab, &ts)?;
            eprintln!("counting A_W'");
            let c2 = count_visible(&wp, &ts)?;
            let mut body = String::from("T,N_hat,N_hat_prime,density,density_prime\n");
            for (i, t) in ts.iter().enumerate() {
                let area = std::f64::consts::PI * t * t;
                let _ = writeln!(
                    body,
                    "{t},{},{},{:.6},{:.6}",
                    c1.visible[i],
                    c2.visible[i],
                    c1.visible[i] as f64 / area,
                    c2.visible[i] as f64 / area
                );
            }
            emit(out, &csv_with_header(cmd, &body))?;
        }
        Command::Table2(a) => {
            let ts = match &a.ts {
                Some(s) => parse_radii(s)?,
                None => vec![1500.0, 1800.0, 2000.0],
            };
            let spec = FamilySpec::p_gamma(&gamma0())?;
            eprintln!("counting P_eps0");
            let c = count_visible(&spec, &ts)?;
            let mut body = String::from("T,N_hat,density\n");
            for (i, t) in ts.iter().enumerate() {
                let area = std::f64::consts::PI * t * t;
                let _ = writeln!(body, "{t},{},{:.6}", c.visible[i], c.visible[i] as f64 / area);
            }
            emit(out, &csv_with_header(cmd, &body))?;
        }
        Command::Zd(a) => {
            let t = parse_t(a.t)?;
            let (emp, lim) = density::zd_visible(a.d, t)?;
            let v = json!({ "d": a.d, "T": t, "empirical": emp, "limit": lim, "relative_error": emp / lim - 1.0 });
            emit(out, &json_with_meta(cmd, v))?;
        }
        Command::ValidateGamma(a) => {
            let g = quasicrystal::parse_gamma(&a.gamma)?;
            let valid = validate_penrose_translate(&g);
            let mut v = json!({ "gamma": g.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "valid": valid });
            if g.len() == 5 {
                let (x, y) = epsilon_from_gamma(&g)?;
                v["epsilon"] = json!([x.to_f64(), y.to_f64()]);
                v["abs_epsilon_below_0.1"] = json!((x.to_f64().powi(2) + y.to_f64().powi(2)).sqrt() < 0.1);
            }
            emit(out, &json_with_meta(cmd, v))?;
            return Ok(if valid { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Dashed lines `y = m` and `y = u·m` when the minimal gap is known.
fn reference_lines(f: &FamilyArgs, spec: &FamilySpec) -> Vec<f64> {
    let r = match f.family {
        FamilyArg::A => gaps::min_gap_a(spec.window(), None).ok(),
        FamilyArg::P => spec.epsilon().and_then(|e| gaps::min_gap_p(e).ok()),
        FamilyArg::T => None,
    };
    match r {
        Some(r) => {
            let u = spec.id().ring().fundamental_unit().to_f64();
            vec![r.m_hat, u * r.m_hat]
        }
        None => Vec::new(),
    }
}
