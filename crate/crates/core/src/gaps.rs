//! Angular gap statistics of visible points and closed-form minimal gaps.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::{cmp_angle, CycloId, CycloPoint, TowerReal};
use crate::density::{density_visible_a, density_visible_p};
use crate::error::{Error, Result};
use crate::geometry::{sup_triangle_area, TPoint, Window};
use crate::qfield::RingId;
use crate::quasicrystal::{generate, penrose_windows, FamilySpec, PointSample, Radius};

#[derive(Clone, Debug, Serialize)]
pub struct GapSeries {
    pub t: f64,
    pub n_hat: usize,
    /// `α(x)/2π` in increasing order, in `(−1/2, 1/2]`.
    pub xi: Vec<f64>,
    /// `d_i = N̂(ξ_i − ξ_{i−1})` with `ξ_0 = ξ_N̂ − 1`.
    pub d: Vec<f64>,
    pub delta_t: f64,
}

/// Sorts nonzero points by argument, breaking near-ties exactly.
pub fn sort_by_angle(points: &mut [CycloPoint]) -> Vec<f64> {
    let mut keyed: Vec<(f64, CycloPoint)> = points.iter().map(|x| (x.angle_f64(), *x)).collect();
    keyed.par_sort_unstable_by(|a, b| {
        if (a.0 - b.0).abs() > 1e-12 {
            a.0.total_cmp(&b.0)
        } else {
            cmp_angle(&a.1, &b.1).then_with(|| a.1.coeffs().cmp(&b.1.coeffs()))
        }
    });
    for (slot, (_, x)) in points.iter_mut().zip(&keyed) {
        *slot = *x;
    }
    keyed.into_iter().map(|(a, _)| a).collect()
}

/// Gap series from angles in `(−π, π]`, already sorted.
pub fn gap_series_from_angles(t: f64, sorted_angles: &[f64]) -> Result<GapSeries> {
    let n = sorted_angles.len();
    if n < 2 {
        return Err(Error::Precondition(format!("need at least 2 visible points, got {n}")));
    }
    let xi: Vec<f64> = sorted_angles.iter().map(|a| a / TAU).collect();
    let nf = n as f64;
    let mut d = Vec::with_capacity(n);
    d.push(nf * (xi[0] - (xi[n - 1] - 1.0)));
    d.extend(xi.windows(2).map(|w| nf * (w[1] - w[0])));
    let delta_t = d.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GapSeries { t, n_hat: n, xi, d, delta_t })
}

/// Gaps between the visible points of a sample.
pub fn gap_series(sample: &PointSample) -> Result<GapSeries> {
    if sample.visible.is_none() {
        return Err(Error::Precondition("sample has no visibility flags".into()));
    }
    let mut pts = sample.visible_points();
    let angles = sort_by_angle(&mut pts);
    gap_series_from_angles(sample.radius, &angles)
}

/// `(T, δ_T)` for each `T`, from one generation at the largest radius.
pub fn delta_series(spec: &FamilySpec, ts: &[f64]) -> Result<Vec<(f64, f64)>> {
    let tmax = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if ts.is_empty() || !(tmax > 0.0) {
        return Err(Error::Config("empty radius list".into()));
    }
    let mut sample = generate(spec, tmax)?;
    sample.compute_visibility()?;
    let mut pts = sample.visible_points();
    let angles = sort_by_angle(&mut pts);
    let moduli: Vec<_> = pts.iter().map(|x| x.modulus_sq_int()).collect();
    ts.par_iter()
        .map(|&t| {
            let r = Radius::new(t)?;
            let a: Vec<f64> = angles.iter().zip(&moduli).filter(|(_, m)| r.contains_sq(**m)).map(|(a, _)| *a).collect();
            Ok((t, gap_series_from_angles(t, &a)?.delta_t))
        })
        .collect()
}

/// Visible points of an eightfold sample in the closed octant `0 ≤ y ≤ x`.
pub fn octant_visible_count(sample: &PointSample) -> Result<usize> {
    if sample.spec.id() != CycloId::N8 {
        return Err(Error::Config("octant count needs a Z[ζ8] sample".into()));
    }
    if sample.visible.is_none() {
        return Err(Error::Precondition("sample has no visibility flags".into()));
    }
    // y = x2·sin45 and x − y = x1.
    Ok(sample.visible_points().iter().filter(|x| x.x2.signum() >= 0 && x.x1.signum() >= 0).count())
}

#[derive(Clone, Debug, Serialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub lo: f64,
    /// Probability mass per bin.
    pub mass: Vec<f64>,
}

impl Histogram {
    pub fn bin_left(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.bin_width
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin_left,mass\n");
        for (i, m) in self.mass.iter().enumerate() {
            let _ = writeln!(s, "{:.6},{:.12}", self.bin_left(i), m);
        }
        s
    }
}

/// Probability histogram of the gaps over `[0, 3]`, widened to cover the largest gap.
pub fn histogram(g: &GapSeries, bin_width: f64) -> Result<Histogram> {
    let hi = g.d.iter().copied().fold(3.0, f64::max);
    histogram_range(g, bin_width, 0.0, hi)
}

pub fn histogram_range(g: &GapSeries, bin_width: f64, lo: f64, hi: f64) -> Result<Histogram> {
    if !(bin_width > 0.0) || !(hi > lo) {
        return Err(Error::Config(format!("bad histogram bins: width {bin_width}, range [{lo}, {hi}]")));
    }
    let nbins = ((hi - lo) / bin_width).floor() as usize + 1;
    let mut counts = vec![0u64; nbins];
    for &d in &g.d {
        let i = ((d - lo) / bin_width).floor();
        if i >= 0.0 {
            counts[(i as usize).min(nbins - 1)] += 1;
        }
    }
    let n = g.d.len() as f64;
    Ok(Histogram { bin_width, lo, mass: counts.iter().map(|&c| c as f64 / n).collect() })
}

/// `−F′(s)` for the limiting gap distribution of the visible points of Z².
pub fn z2_limit_density(s: f64) -> f64 {
    let pi2 = PI * PI;
    let [b0, b1, b2] = z2_branches(s);
    if s <= 3.0 / pi2 {
        b0
    } else if s <= 12.0 / pi2 {
        b1
    } else {
        b2
    }
}

/// The three closed-form pieces of [`z2_limit_density`], each evaluated at `s`.
/// The third is only real for `s ≥ 12/π²`.
pub fn z2_branches(s: f64) -> [f64; 3] {
    let pi2 = PI * PI;
    let mid = 6.0 / (pi2 * s * s) * (pi2 * s / 3.0).ln();
    let hi = 12.0 / (pi2 * s * s) * (2.0 / (1.0 + (1.0 - 12.0 / (pi2 * s)).max(0.0).sqrt())).ln();
    [0.0, mid, hi]
}

/// Mass of [`z2_limit_density`] on `[0, upper]`, by a piecewise Simpson rule on a geometric grid.
pub fn z2_limit_mass(upper: f64) -> f64 {
    let pi2 = PI * PI;
    let simpson = |a: f64, b: f64, n: usize| {
        let h = (b - a) / n as f64;
        let mut s = z2_limit_density(a) + z2_limit_density(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * z2_limit_density(a + k as f64 * h);
        }
        s * h / 3.0
    };
    let mut total = simpson(3.0 / pi2, 12.0 / pi2, 20_000);
    let mut a = 12.0 / pi2;
    while a < upper {
        let b = (a * 1.1).min(upper);
        total += simpson(a, b, 2_000);
        a = b;
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct MinGapResult {
    pub m_hat: f64,
    pub exponent_m: i32,
    /// `T_W` for A-sets, `max T_{j1,j2}` for P-sets.
    pub t_functional: f64,
    /// The quantity the unit power is compared with.
    pub bound: f64,
    pub theta_visible_used: f64,
}

/// Largest `m` with `u^m < bound`, certified by exact comparison: `u^m < bound ≤ u^{m+1}`.
pub fn max_unit_exponent(ring: RingId, bound: &TowerReal) -> Result<i32> {
    if bound.signum() <= 0 {
        return Err(Error::Precondition("bound must be positive".into()));
    }
    let pow = |m: i32| TowerReal::from_quad(ring.unit_pow(m));
    let mut m = (bound.to_f64().ln() / ring.fundamental_unit().to_f64().ln()).floor() as i32;
    while pow(m) >= *bound {
        m -= 1;
    }
    while pow(m + 1) < *bound {
        m += 1;
    }
    Ok(m)
}

/// `m = λ^{−m} θ̂ / (2√2)` with `m` maximal such that `λ^m < 2√2 T_W`.
pub fn min_gap_a(w: &Window, theta_hat: Option<f64>) -> Result<MinGapResult> {
    let r = RingId::Zsqrt2;
    if w.ring() != r {
        return Err(Error::RingMismatch);
    }
    if !w.contains_origin() {
        return Err(Error::Precondition(format!("window {} must contain the origin", w.label)));
    }
    let theta = match theta_hat {
        Some(t) => t,
        None => density_visible_a(w)
            .map_err(|e| Error::Precondition(format!("{e}; supply the visible density explicitly")))?
            .theta_visible,
    };
    let tw = sup_triangle_area(w, w);
    let bound = &TowerReal::from_ints(r, 0, 2, 0, 0, 1) * &tw;
    let m = max_unit_exponent(r, &bound)?;
    let lam = r.fundamental_unit().to_f64();
    Ok(MinGapResult {
        m_hat: lam.powi(-m) * theta / (2.0 * 2f64.sqrt()),
        exponent_m: m,
        t_functional: tw.to_f64(),
        bound: bound.to_f64(),
        theta_visible_used: theta,
    })
}

/// `m = τ^{−m} √(τ+2) θ̂ / 4` with `m` maximal such that `τ^m < 4τ/√(τ+2) · max T_{j1,j2}`.
pub fn min_gap_p(eps: &TPoint) -> Result<MinGapResult> {
    let theta = density_visible_p(eps)?.theta_visible;
    let r = RingId::Ztau;
    let ws = penrose_windows(eps);
    let mut tmax = TowerReal::zero(r);
    for j1 in [1, 2] {
        for j2 in [1, 2] {
            tmax = tmax.max(sup_triangle_area(&ws[j1], &ws[j2]));
        }
    }
    let rho = TowerReal::rho(r);
    let bound = &(&TowerReal::from_ints(r, 0, 4, 0, 0, 1) * &tmax) / &rho;
    let m = max_unit_exponent(r, &bound)?;
    let tau = r.omega_f64();
    Ok(MinGapResult {
        m_hat: tau.powi(-m) * rho.to_f64() * theta / 4.0,
        exponent_m: m,
        t_functional: tmax.to_f64(),
        bound: bound.to_f64(),
        theta_visible_used: theta,
    })
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn svg_frame(title: &str, x0: f64, x1: f64, y0: f64, y1: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" font-size="14" text-anchor="middle">{}</text>"#, SVG_W / 2.0, xml_escape(title));
    let (l, b, r, t) = (MARGIN, SVG_H - MARGIN, SVG_W - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<path d="M{l},{t} L{l},{b} L{r},{b}" stroke="black" fill="none"/>"#);
    for (v, anchor, x, y) in [
        (x0, "start", l, b + 16.0),
        (x1, "end", r, b + 16.0),
        (y0, "end", l - 4.0, b),
        (y1, "end", l - 4.0, t + 4.0),
    ] {
        let _ = writeln!(s, r#"<text x="{x}" y="{y}" font-size="11" text-anchor="{anchor}">{}</text>"#, fmt_tick(v));
    }
    s
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Axes {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Axes {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (SVG_W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        SVG_H - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (SVG_H - 2.0 * MARGIN)
    }
}

/// Bar chart of a histogram as a density, with an optional overlay curve.
pub fn histogram_svg(h: &Histogram, title: &str, overlay: Option<&dyn Fn(f64) -> f64>) -> String {
    let x1 = h.bin_left(h.mass.len());
    let dens: Vec<f64> = h.mass.iter().map(|m| m / h.bin_width).collect();
    let ymax = dens.iter().copied().fold(0.0, f64::max).max(1e-12) * 1.05;
    let ax = Axes { x0: h.lo, x1, y0: 0.0, y1: ymax };
    let mut s = svg_frame(title, h.lo, x1, 0.0, ymax);
    for (i, d) in dens.iter().enumerate() {
        if *d <= 0.0 {
            continue;
        }
        let (xa, xb) = (ax.px(h.bin_left(i)), ax.px(h.bin_left(i + 1)));
        let (ya, yb) = (ax.py(*d), ax.py(0.0));
        let _ = writeln!(
            s,
            r##"<rect x="{xa:.2}" y="{ya:.2}" width="{:.2}" height="{:.2}" fill="#7a9cc6"/>"##,
            xb - xa,
            yb - ya
        );
    }
    if let Some(f) = overlay {
        let n = 400;
        let pts: Vec<String> = (0..=n)
            .map(|k| {
                let x = h.lo + (x1 - h.lo) * k as f64 / n as f64;
                format!("{:.2},{:.2}", ax.px(x), ax.py(f(x).min(ymax)))
            })
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" stroke="crimson" fill="none"/>"#, pts.join(" "));
    }
    s.push_str("</svg>\n");
    s
}

/// Scatter plot of `(T, δ_T)` with dashed horizontal reference lines.
pub fn series_svg(points: &[(f64, f64)], title: &str, hlines: &[f64]) -> String {
    let xs = points.iter().map(|p| p.0);
    let x0 = xs.clone().fold(f64::INFINITY, f64::min);
    let x1 = xs.fold(f64::NEG_INFINITY, f64::max);
    let ys = points.iter().map(|p| p.1).chain(hlines.iter().copied());
    let y1 = ys.fold(0.0, f64::max) * 1.1;
    let (x0, x1) = if x1 > x0 { (x0, x1) } else { (x0 - 1.0, x0 + 1.0) };
    let y1 = if y1 > 0.0 { y1 } else { 1.0 };
    let ax = Axes { x0, x1, y0: 0.0, y1 };
    let mut s = svg_frame(title, x0, x1, 0.0, y1);
    for &(x, y) in points {
        let _ = writeln!(s, r##"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="#1f4e8c"/>"##, ax.px(x), ax.py(y));
    }
    for &y in hlines {
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-dasharray="6,4"/>"#,
            ax.px(x0),
            ax.py(y),
            ax.px(x1),
            ax.py(y)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// `T,delta_T` rows.
pub fn series_csv(points: &[(f64, f64)]) -> String {
    let mut s = String::from("T,delta_T\n");
    for (t, d) in points {
        let _ = writeln!(s, "{t},{d:.12}");
    }
    s
}
