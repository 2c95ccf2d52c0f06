//! Exact convex polygon windows in the internal plane.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cyclo::{CycloId, CycloPoint, Rho, TowerReal};
use crate::error::{Error, Result};
use crate::qfield::{QuadInt, RingId};

pub type TPoint = (TowerReal, TowerReal);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Closed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

impl Location {
    /// Membership under the given boundary convention.
    pub fn is_member(self, boundary: Boundary) -> bool {
        match self {
            Location::Inside => true,
            Location::Boundary => boundary == Boundary::Closed,
            Location::Outside => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    ring: RingId,
    vertices: Vec<TPoint>,
    pub boundary: Boundary,
    pub label: String,
    pub history: Vec<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarCheckReport {
    pub is_star_shaped_origin: bool,
    pub satisfies_minus_w_in_cw: bool,
}

impl StarCheckReport {
    pub fn passes(&self) -> bool {
        self.is_star_shaped_origin && self.satisfies_minus_w_in_cw
    }
}

fn cross3(o: &TPoint, a: &TPoint, b: &TPoint) -> TowerReal {
    let (ax, ay) = (&a.0 - &o.0, &a.1 - &o.1);
    let (bx, by) = (&b.0 - &o.0, &b.1 - &o.1);
    &(&ax * &by) - &(&ay * &bx)
}

fn cross2(a: &TPoint, b: &TPoint) -> TowerReal {
    &(&a.0 * &b.1) - &(&a.1 * &b.0)
}

/// Drop repeated and collinear vertices of a closed polygon.
fn simplify(mut v: Vec<TPoint>) -> Vec<TPoint> {
    v.dedup();
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    let mut changed = true;
    while changed && v.len() >= 3 {
        changed = false;
        let n = v.len();
        for i in 0..n {
            let (p, c, nx) = (&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]);
            if cross3(p, c, nx).is_zero() {
                v.remove(i);
                changed = true;
                break;
            }
        }
    }
    v
}

impl Window {
    /// Validates convexity and reorders to counter-clockwise.
    pub fn new(vertices: Vec<TPoint>, boundary: Boundary, label: impl Into<String>) -> Result<Self> {
        let ring = vertices.first().ok_or(Error::Degenerate)?.0.ring();
        let mut v = simplify(vertices);
        if v.len() < 3 {
            return Err(Error::Degenerate);
        }
        let n = v.len();
        let signs: Vec<i32> = (0..n).map(|i| cross3(&v[i], &v[(i + 1) % n], &v[(i + 2) % n]).signum()).collect();
        if signs.iter().all(|&s| s < 0) {
            v.reverse();
        } else if !signs.iter().all(|&s| s > 0) {
            return Err(Error::Precondition("window is not a convex polygon".into()));
        }
        let w = Window { ring, vertices: v, boundary, label: label.into(), history: Vec::new() };
        // A simple polygon has winding number one; reject self-overlapping stars.
        let total: f64 = (0..n)
            .map(|i| {
                let (a, b) = (w.vertex_f64(i), w.vertex_f64((i + 1) % n));
                let c = w.vertex_f64((i + 2) % n);
                let (u, v) = ((b.0 - a.0, b.1 - a.1), (c.0 - b.0, c.1 - b.1));
                (u.0 * v.1 - u.1 * v.0).atan2(u.0 * v.0 + u.1 * v.1)
            })
            .sum();
        if (total - 2.0 * std::f64::consts::PI).abs() > 1e-6 {
            return Err(Error::Precondition("window is not a convex polygon".into()));
        }
        Ok(w)
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn vertices(&self) -> &[TPoint] {
        &self.vertices
    }

    pub fn vertex_f64(&self, i: usize) -> (f64, f64) {
        let v = &self.vertices[i];
        (v.0.to_f64(), v.1.to_f64())
    }

    pub fn vertices_f64(&self) -> Vec<(f64, f64)> {
        (0..self.vertices.len()).map(|i| self.vertex_f64(i)).collect()
    }

    pub fn with_boundary(mut self, b: Boundary) -> Self {
        self.boundary = b;
        self
    }

    pub fn contains(&self, p: &TPoint) -> Location {
        let n = self.vertices.len();
        let mut on_edge = false;
        for i in 0..n {
            match cross3(&self.vertices[i], &self.vertices[(i + 1) % n], p).signum() {
                -1 => return Location::Outside,
                0 => on_edge = true,
                _ => {}
            }
        }
        if on_edge {
            Location::Boundary
        } else {
            Location::Inside
        }
    }

    pub fn contains_origin(&self) -> bool {
        let z = TowerReal::zero(self.ring);
        self.contains(&(z.clone(), z)) == Location::Inside
    }

    pub fn area(&self) -> TowerReal {
        let n = self.vertices.len();
        let mut acc = TowerReal::zero(self.ring);
        for i in 0..n {
            acc = &acc + &cross2(&self.vertices[i], &self.vertices[(i + 1) % n]);
        }
        &acc * &TowerReal::from_ratio(self.ring, 1, 2)
    }

    pub fn outer_radius_sq(&self) -> TowerReal {
        self.vertices
            .iter()
            .map(|(x, y)| &(x * x) + &(y * y))
            .max()
            .expect("non-empty")
    }

    /// `scale·(±w) + translate`.
    pub fn transform(&self, scale: &TowerReal, rotate180: bool, translate: &TPoint) -> Result<Window> {
        if scale.is_zero() {
            return Err(Error::Precondition("zero scale".into()));
        }
        let s = if rotate180 { -scale } else { scale.clone() };
        let verts = self
            .vertices
            .iter()
            .map(|(x, y)| (&(&s * x) + &translate.0, &(&s * y) + &translate.1))
            .collect();
        let mut w = Window::new(verts, self.boundary, self.label.clone())?;
        w.history = self.history.clone();
        w.history.push(format!(
            "scale {:.6}{} translate ({:.6}, {:.6})",
            scale.to_f64(),
            if rotate180 { " rot180" } else { "" },
            translate.0.to_f64(),
            translate.1.to_f64()
        ));
        Ok(w)
    }

    pub fn scaled(&self, scale: &TowerReal) -> Result<Window> {
        let z = TowerReal::zero(self.ring);
        self.transform(scale, false, &(z.clone(), z))
    }

    pub fn translated(&self, t: &TPoint) -> Result<Window> {
        self.transform(&TowerReal::one(self.ring), false, t)
    }

    /// `(min_x, max_x, min_y, max_y)` in floating point.
    pub fn bbox_f64(&self) -> (f64, f64, f64, f64) {
        let v = self.vertices_f64();
        let fold = |f: fn(f64, f64) -> f64, init: f64, sel: fn(&(f64, f64)) -> f64| v.iter().map(sel).fold(init, f);
        (
            fold(f64::min, f64::INFINITY, |p| p.0),
            fold(f64::max, f64::NEG_INFINITY, |p| p.0),
            fold(f64::min, f64::INFINITY, |p| p.1),
            fold(f64::max, f64::NEG_INFINITY, |p| p.1),
        )
    }

    /// Approximate x-extent of the horizontal chord at height `y`.
    pub fn chord_f64(&self, y: f64) -> Option<(f64, f64)> {
        chord_f64(&self.vertices_f64(), y)
    }

    pub fn to_json(&self) -> Value {
        let rho = if self.vertices.iter().all(|(x, y)| x.rho_kind() == Rho::One && y.rho_kind() == Rho::One) {
            "1"
        } else {
            "sqrt(tau+2)"
        };
        let verts: Vec<Value> = self
            .vertices
            .iter()
            .map(|(x, y)| serde_json::json!([x.to_strings(), y.to_strings()]))
            .collect();
        serde_json::json!({
            "ring": self.ring.name(),
            "rho": rho,
            "vertices": verts,
            "boundary": match self.boundary { Boundary::Open => "open", Boundary::Closed => "closed" },
        })
    }

    pub fn from_json(v: &Value, label: &str) -> Result<Window> {
        let bad = |m: &str| Error::Config(format!("window JSON: {m}"));
        let ring = match v.get("ring").and_then(Value::as_str) {
            Some("Zsqrt2") => RingId::Zsqrt2,
            Some("Ztau") => RingId::Ztau,
            _ => return Err(bad("ring must be \"Zsqrt2\" or \"Ztau\"")),
        };
        let rho = match v.get("rho").and_then(Value::as_str).unwrap_or("1") {
            "1" => Rho::One,
            "sqrt(tau+2)" => Rho::SqrtTauPlus2,
            _ => return Err(bad("rho must be \"1\" or \"sqrt(tau+2)\"")),
        };
        let boundary = match v.get("boundary").and_then(Value::as_str).unwrap_or("open") {
            "open" => Boundary::Open,
            "closed" => Boundary::Closed,
            _ => return Err(bad("boundary must be \"open\" or \"closed\"")),
        };
        let verts = v.get("vertices").and_then(Value::as_array).ok_or_else(|| bad("missing vertices"))?;
        let coord = |c: &Value| -> Result<TowerReal> {
            let parts = c.as_array().ok_or_else(|| bad("coordinate must be a 4-array"))?;
            let strs: Vec<String> = parts
                .iter()
                .map(|p| match p {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) if n.is_i64() => Ok(n.to_string()),
                    _ => Err(bad("coefficients must be integers or \"n/d\" strings")),
                })
                .collect::<Result<_>>()?;
            TowerReal::parse(ring, rho, &strs)
        };
        let mut pts = Vec::with_capacity(verts.len());
        for p in verts {
            let xy = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("vertex must be [x, y]"))?;
            pts.push((coord(&xy[0])?, coord(&xy[1])?));
        }
        Window::new(pts, boundary, label)
    }

    /// Exact classifier for internal embeddings of lattice points.
    pub fn classifier(&self, id: CycloId) -> Classifier {
        Classifier::new(self, id)
    }
}

/// x-extent of the chord of a convex polygon at height `y`, or `None` if the line misses.
pub fn chord_f64(v: &[(f64, f64)], y: f64) -> Option<(f64, f64)> {
    let n = v.len();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        if y < a.1.min(b.1) || y > a.1.max(b.1) {
            continue;
        }
        if a.1 == b.1 {
            lo = lo.min(a.0.min(b.0));
            hi = hi.max(a.0.max(b.0));
        } else {
            let x = a.0 + (y - a.1) * (b.0 - a.0) / (b.1 - a.1);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

pub fn make_octagon_ab() -> Window {
    let r2 = RingId::Zsqrt2;
    let r = TowerReal::from_ints(r2, 1, 1, 0, 0, 2);
    let h = TowerReal::from_ratio(r2, 1, 2);
    let (nr, nh) = (-&r, -&h);
    let v = vec![
        (r.clone(), nh.clone()),
        (r.clone(), h.clone()),
        (h.clone(), r.clone()),
        (nh.clone(), r.clone()),
        (nr.clone(), h.clone()),
        (nr.clone(), nh.clone()),
        (nh.clone(), nr.clone()),
        (h, nr),
    ];
    Window::new(v, Boundary::Open, "octagon_ab").expect("valid octagon")
}

/// `(cos 36k°, sin 36k°)` exactly.
fn cos_sin_36(k: u32) -> (TowerReal, TowerReal) {
    let rt = RingId::Ztau;
    let t = |p, q, r, s| TowerReal::from_ints(rt, p, q, r, s, 2);
    let (c, s) = match k % 10 {
        0 => (t(2, 0, 0, 0), t(0, 0, 0, 0)),
        1 => (t(0, 1, 0, 0), t(0, 0, -1, 1)),
        2 => (t(-1, 1, 0, 0), t(0, 0, 1, 0)),
        3 => (t(1, -1, 0, 0), t(0, 0, 1, 0)),
        4 => (t(0, -1, 0, 0), t(0, 0, -1, 1)),
        5 => (t(-2, 0, 0, 0), t(0, 0, 0, 0)),
        6 => (t(0, -1, 0, 0), t(0, 0, 1, -1)),
        7 => (t(1, -1, 0, 0), t(0, 0, -1, 0)),
        8 => (t(-1, 1, 0, 0), t(0, 0, -1, 0)),
        _ => (t(0, 1, 0, 0), t(0, 0, 1, -1)),
    };
    (c, s)
}

/// Closed regular decagon with side `√((τ+2)/5)` and two vertices on the y-axis.
pub fn make_decagon_t() -> Window {
    let rt = RingId::Ztau;
    // Circumradius ρ(τ+2)/5.
    let big_r = TowerReal::from_ints(rt, 0, 0, 2, 1, 5);
    let v = (0..10)
        .map(|k| {
            let (c, s) = cos_sin_36(k);
            (-&(&big_r * &s), &big_r * &c)
        })
        .collect();
    Window::new(v, Boundary::Closed, "decagon_t").expect("valid decagon")
}

/// Open pentagon with vertices `1, ζ, …, ζ⁴`, ζ = e^{2πi/5}.
pub fn make_pentagon_w1() -> Window {
    let v = (0..5).map(|j| CycloPoint::zeta_pow(CycloId::N5, j).embed_physical()).collect();
    Window::new(v, Boundary::Open, "pentagon_w1").expect("valid pentagon")
}

/// ε = 457 − 323√2, the translate defining `W′ = W + ε`.
pub fn w_prime_translate() -> QuadInt {
    QuadInt::new(RingId::Zsqrt2, 457, -323)
}

pub fn make_octagon_w_prime() -> Window {
    let e = TowerReal::from_quad(w_prime_translate());
    let mut w = make_octagon_ab()
        .translated(&(e, TowerReal::zero(RingId::Zsqrt2)))
        .expect("translate of a valid window");
    w.label = "octagon_w_prime".into();
    w
}

pub fn by_name(name: &str) -> Result<Window> {
    match name {
        "octagon_ab" => Ok(make_octagon_ab()),
        "decagon_t" => Ok(make_decagon_t()),
        "pentagon_w1" => Ok(make_pentagon_w1()),
        "octagon_w_prime" => Ok(make_octagon_w_prime()),
        _ => Err(Error::Config(format!("unknown window '{name}'"))),
    }
}

/// Convex intersection by half-plane clipping; `None` when empty or degenerate.
pub fn intersect_convex(w1: &Window, w2: &Window) -> Option<Window> {
    let mut poly: Vec<TPoint> = w1.vertices.clone();
    let n = w2.vertices.len();
    for i in 0..n {
        if poly.is_empty() {
            return None;
        }
        let (a, b) = (&w2.vertices[i], &w2.vertices[(i + 1) % n]);
        let side: Vec<TowerReal> = poly.iter().map(|p| cross3(a, b, p)).collect();
        let m = poly.len();
        let mut out = Vec::with_capacity(m + 1);
        for j in 0..m {
            let (p, q) = (&poly[j], &poly[(j + 1) % m]);
            let (sp, sq) = (side[j].signum(), side[(j + 1) % m].signum());
            if sp >= 0 {
                out.push(p.clone());
            }
            if (sp > 0 && sq < 0) || (sp < 0 && sq > 0) {
                let t = &side[j] / &(&side[j] - &side[(j + 1) % m]);
                let x = &p.0 + &(&t * &(&q.0 - &p.0));
                let y = &p.1 + &(&t * &(&q.1 - &p.1));
                out.push((x, y));
            }
        }
        poly = out;
    }
    let poly = simplify(poly);
    if poly.len() < 3 {
        return None;
    }
    let boundary = if w1.boundary == Boundary::Closed && w2.boundary == Boundary::Closed {
        Boundary::Closed
    } else {
        Boundary::Open
    };
    Window::new(poly, boundary, format!("{}∩{}", w1.label, w2.label)).ok()
}

/// Area of the intersection, zero when empty.
pub fn intersection_area(w1: &Window, w2: &Window) -> TowerReal {
    intersect_convex(w1, w2).map_or_else(|| TowerReal::zero(w1.ring), |w| w.area())
}

/// `sup ½|x × y|` over `x ∈ w1`, `y ∈ w2`, attained at vertex pairs.
pub fn sup_triangle_area(w1: &Window, w2: &Window) -> TowerReal {
    let mut best = TowerReal::zero(w1.ring);
    for a in &w1.vertices {
        for b in &w2.vertices {
            best = best.max(cross2(a, b).abs());
        }
    }
    &best * &TowerReal::from_ratio(w1.ring, 1, 2)
}

/// Checks `0 ∈ W` and `−W ⊂ cW` by vertex containment in the closure of `cW`.
pub fn star_check(w: &Window, c: &TowerReal) -> StarCheckReport {
    let is_star = w.contains_origin();
    let cw = match w.scaled(c) {
        Ok(cw) => cw,
        Err(_) => return StarCheckReport { is_star_shaped_origin: is_star, satisfies_minus_w_in_cw: false },
    };
    let ok = w.vertices.iter().all(|(x, y)| cw.contains(&(-x, -y)) != Location::Outside);
    StarCheckReport { is_star_shaped_origin: is_star, satisfies_minus_w_in_cw: ok }
}

/// One edge as a linear form in `(a, b, c, d)`: inside iff `Σ L_k·c_k − h > 0`.
#[derive(Clone, Debug)]
struct EdgeForm {
    lf: [f64; 4],
    hf: f64,
    lx: [TowerReal; 4],
    hx: TowerReal,
}

/// Membership of `σ(x)` in a window: floating-point filter with an exact fallback.
#[derive(Clone, Debug)]
pub struct Classifier {
    id: CycloId,
    edges: Vec<EdgeForm>,
    pub boundary: Boundary,
}

impl Classifier {
    fn new(w: &Window, id: CycloId) -> Self {
        assert_eq!(w.ring, id.ring(), "window ring does not match lattice");
        let [alpha, beta] = id.internal_forms();
        let n = w.vertices.len();
        let edges = (0..n)
            .map(|i| {
                let (v, nv) = (&w.vertices[i], &w.vertices[(i + 1) % n]);
                let (ex, ey) = (&nv.0 - &v.0, &nv.1 - &v.1);
                let lx: [TowerReal; 4] =
                    std::array::from_fn(|k| &(&ex * &beta[k]) - &(&ey * &alpha[k]));
                let hx = &(&ex * &v.1) - &(&ey * &v.0);
                EdgeForm { lf: lx.clone().map(|t| t.to_f64()), hf: hx.to_f64(), lx, hx }
            })
            .collect();
        Classifier { id, edges, boundary: w.boundary }
    }

    fn edge_sign(e: &EdgeForm, c: [i64; 4]) -> i32 {
        let mut v = -e.hf;
        let mut mag = e.hf.abs();
        for k in 0..4 {
            let t = e.lf[k] * c[k] as f64;
            v += t;
            mag += t.abs();
        }
        let err = 1e-12 * (mag + 1.0);
        if v > err {
            1
        } else if v < -err {
            -1
        } else {
            let mut acc = -&e.hx;
            for k in 0..4 {
                if c[k] != 0 {
                    acc = &acc + &e.lx[k].scale_int(c[k]);
                }
            }
            acc.signum()
        }
    }

    pub fn locate(&self, x: &CycloPoint) -> Location {
        debug_assert_eq!(x.id, self.id);
        let c = x.coeffs();
        let mut on_edge = false;
        for e in &self.edges {
            match Self::edge_sign(e, c) {
                -1 => return Location::Outside,
                0 => on_edge = true,
                _ => {}
            }
        }
        if on_edge {
            Location::Boundary
        } else {
            Location::Inside
        }
    }

    pub fn contains(&self, x: &CycloPoint) -> bool {
        self.locate(x).is_member(self.boundary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const R2: RingId = RingId::Zsqrt2;
    const RT: RingId = RingId::Ztau;

    fn pt(ring: RingId, x: (i64, i64), y: (i64, i64)) -> TPoint {
        (TowerReal::from_ratio(ring, x.0, x.1), TowerReal::from_ratio(ring, y.0, y.1))
    }

    fn unit_square() -> Window {
        let v = vec![pt(R2, (0, 1), (0, 1)), pt(R2, (1, 1), (0, 1)), pt(R2, (1, 1), (1, 1)), pt(R2, (0, 1), (1, 1))];
        Window::new(v, Boundary::Open, "square").unwrap()
    }

    /// Float ray-casting oracle; `None` within `tol` of an edge.
    fn ray_cast(poly: &[(f64, f64)], p: (f64, f64), tol: f64) -> Option<bool> {
        let n = poly.len();
        for i in 0..n {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len = (dx * dx + dy * dy).sqrt();
            let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / (len * len)).clamp(0.0, 1.0);
            let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
            if (qx * qx + qy * qy).sqrt() < tol {
                return None;
            }
        }
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            if (a.1 > p.1) != (b.1 > p.1) && p.0 < a.0 + (p.1 - a.1) * (b.0 - a.0) / (b.1 - a.1) {
                inside = !inside;
            }
        }
        Some(inside)
    }

    #[test]
    fn octagon_examples() {
        let w = make_octagon_ab();
        assert_eq!(w.area(), TowerReal::from_ints(R2, 2, 2, 0, 0, 1));
        assert_eq!(w.outer_radius_sq(), TowerReal::from_ints(R2, 2, 1, 0, 0, 2));
        assert!(w.contains_origin());
        // Shoelace oracle in floating point.
        let v = w.vertices_f64();
        let a: f64 = (0..8).map(|i| v[i].0 * v[(i + 1) % 8].1 - v[(i + 1) % 8].0 * v[i].1).sum::<f64>() / 2.0;
        assert!((a - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-12);
        // Side length 1.
        for i in 0..8 {
            let (p, q) = (v[i], v[(i + 1) % 8]);
            assert!(((p.0 - q.0).hypot(p.1 - q.1) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn decagon_examples() {
        let w = make_decagon_t();
        assert_eq!(w.vertices().len(), 10);
        assert_eq!(w.vertices().iter().filter(|(x, _)| x.is_zero()).count(), 2);
        let tau2 = TowerReal::from_ints(RT, 0, 2, 0, 0, 1);
        let r = star_check(&w, &tau2);
        assert!(r.passes());
        let side = ((5f64.sqrt() * 0.5 + 2.5) / 5.0).sqrt();
        let v = w.vertices_f64();
        for i in 0..10 {
            let (p, q) = (v[i], v[(i + 1) % 10]);
            assert!(((p.0 - q.0).hypot(p.1 - q.1) - side).abs() < 1e-12);
        }
    }

    #[test]
    fn pentagon_examples() {
        let w = make_pentagon_w1();
        let v = w.vertices_f64();
        let shoelace: f64 = (0..5).map(|i| v[i].0 * v[(i + 1) % 5].1 - v[(i + 1) % 5].0 * v[i].1).sum::<f64>() / 2.0;
        assert!((w.area().to_f64() - shoelace).abs() < 1e-12);
        assert!((w.area().to_f64() - 2.5 * (72f64.to_radians()).sin()).abs() < 1e-12);
        assert!((w.area().to_f64() - 2.377_641_290_737_884).abs() < 1e-12);
        assert!(w.contains_origin());
        assert_eq!(w.vertices()[0], pt(RT, (1, 1), (0, 1)));
    }

    #[test]
    fn transform_examples() {
        let w = make_pentagon_w1();
        let z = TowerReal::zero(RT);
        let id = w.transform(&TowerReal::one(RT), false, &(z.clone(), z.clone())).unwrap();
        assert_eq!(id.vertices(), w.vertices());
        let tau = TowerReal::omega(RT);
        let a = w.transform(&-&tau, false, &(z.clone(), z.clone())).unwrap();
        let b = w.transform(&tau, true, &(z.clone(), z.clone())).unwrap();
        assert_eq!(a.area(), b.area());
        assert!(b.vertices().iter().all(|p| a.contains(p) == Location::Boundary));
        let eps = pt(RT, (1, 50), (-3, 70));
        let back = w.translated(&eps).unwrap().translated(&(-&eps.0, -&eps.1)).unwrap();
        assert_eq!(back.vertices(), w.vertices());
        assert!(w.scaled(&z).is_err());
        let s = TowerReal::from_ints(RT, 1, 1, 0, 0, 3);
        assert_eq!(w.scaled(&s).unwrap().area(), &w.area() * &s.square());
    }

    #[test]
    fn contains_examples() {
        let w = make_octagon_ab();
        let z = TowerReal::zero(R2);
        assert_eq!(w.contains(&(z.clone(), z)), Location::Inside);
        assert_eq!(w.contains(&w.vertices()[3]), Location::Boundary);
        assert_eq!(w.contains(&pt(R2, (14, 10), (1, 10))), Location::Outside);
    }

    #[test]
    fn intersect_examples() {
        let w = make_octagon_ab();
        let ww = intersect_convex(&w, &w).unwrap();
        assert_eq!(ww.area(), w.area());
        let far = w.translated(&pt(R2, (5, 1), (0, 1))).unwrap();
        assert!(intersect_convex(&w, &far).is_none());
        let p = make_pentagon_w1();
        let q = p.translated(&pt(RT, (1, 3), (1, 7))).unwrap();
        let pq = intersect_convex(&p, &q).unwrap();
        let qp = intersect_convex(&q, &p).unwrap();
        assert_eq!(pq.area(), qp.area());
        assert!(pq.area() <= p.area());
        let mut a: Vec<_> = pq.vertices().to_vec();
        let mut b: Vec<_> = qp.vertices().to_vec();
        let key = |t: &TPoint| (t.0.to_f64().to_bits(), t.1.to_f64().to_bits());
        a.sort_by_key(key);
        b.sort_by_key(key);
        assert_eq!(a, b);
        let again = intersect_convex(&pq, &pq).unwrap();
        assert_eq!(again.area(), pq.area());
    }

    #[test]
    fn area_examples() {
        assert_eq!(unit_square().area(), TowerReal::one(R2));
    }

    #[test]
    fn area_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            // Random convex polygon: sorted angles on a jittered circle.
            let k = rng.gen_range(3..9);
            let mut angs: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
            angs.sort_by(f64::total_cmp);
            let verts: Vec<TPoint> = angs
                .iter()
                .map(|a| pt(R2, ((a.cos() * 1000.0) as i64, 1000), ((a.sin() * 1000.0) as i64, 1000)))
                .collect();
            let Ok(w) = Window::new(verts, Boundary::Open, "rand") else { continue };
            let poly = w.vertices_f64();
            let n = 200_000;
            let hits = (0..n)
                .filter(|_| {
                    let p = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    ray_cast(&poly, p, 0.0).unwrap_or(false)
                })
                .count();
            let frac = hits as f64 / n as f64;
            let sigma = (frac * (1.0 - frac) / n as f64).sqrt() * 4.0;
            assert!((w.area().to_f64() - 4.0 * frac).abs() <= 3.0 * sigma + 1e-9, "{} vs {}", w.area().to_f64(), 4.0 * frac);
        }
    }

    #[test]
    fn contains_matches_ray_casting() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let eps = pt(RT, (1, 31), (-1, 43));
        let windows = [make_octagon_ab(), make_decagon_t(), make_pentagon_w1(), make_pentagon_w1().translated(&eps).unwrap()];
        for w in windows {
            let poly = w.vertices_f64();
            for _ in 0..10_000 {
                let (x, y) = (rng.gen_range(-2000i64..2000), rng.gen_range(-2000i64..2000));
                let p = pt(w.ring(), (x, 1000), (y, 1000));
                let loc = w.contains(&p);
                let f = ray_cast(&poly, (x as f64 / 1000.0, y as f64 / 1000.0), 1e-9);
                match f {
                    Some(true) => assert_eq!(loc, Location::Inside),
                    Some(false) => assert_eq!(loc, Location::Outside),
                    None => {}
                }
            }
        }
    }

    #[test]
    fn sup_triangle_examples() {
        let w = make_octagon_ab();
        assert_eq!(sup_triangle_area(&w, &w), TowerReal::from_ints(R2, 2, 1, 0, 0, 4));
        let p = make_pentagon_w1();
        // Symmetry and dense-boundary oracle.
        let r = p.scaled(&TowerReal::from_ints(RT, 1, 1, 0, 0, 2)).unwrap();
        assert_eq!(sup_triangle_area(&p, &r), sup_triangle_area(&r, &p));
        let sample = |w: &Window| -> Vec<(f64, f64)> {
            let v = w.vertices_f64();
            let n = v.len();
            (0..n)
                .flat_map(|i| {
                    let (a, b) = (v[i], v[(i + 1) % n]);
                    (0..200).map(move |k| {
                        let t = k as f64 / 200.0;
                        (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
                    })
                })
                .collect()
        };
        let (sp, sr) = (sample(&p), sample(&r));
        let brute = sp
            .iter()
            .flat_map(|a| sr.iter().map(move |b| 0.5 * (a.0 * b.1 - a.1 * b.0).abs()))
            .fold(0.0, f64::max);
        assert!((brute - sup_triangle_area(&p, &r).to_f64()).abs() < 1e-9);
    }

    #[test]
    fn star_check_examples() {
        let w = make_octagon_ab();
        let s2 = TowerReal::omega(R2);
        assert!(star_check(&w, &s2).passes());
        let shifted = w.translated(&(TowerReal::from_ints(R2, 457, -323, 0, 0, 1), TowerReal::zero(R2))).unwrap();
        let r = star_check(&shifted, &s2);
        assert!(r.is_star_shaped_origin);
        assert!(!r.satisfies_minus_w_in_cw);
        let p = make_pentagon_w1();
        let two_tau = TowerReal::from_ints(RT, 0, 2, 0, 0, 1);
        for e in [pt(RT, (9, 100), (0, 1)), pt(RT, (-6, 100), (7, 100)), pt(RT, (0, 1), (-99, 1000))] {
            assert!(star_check(&p.translated(&e).unwrap(), &two_tau).passes());
        }
    }

    #[test]
    fn json_roundtrip() {
        for w in [make_octagon_ab(), make_decagon_t(), make_pentagon_w1()] {
            let j = w.to_json();
            let back = Window::from_json(&j, &w.label).unwrap();
            assert_eq!(back.vertices(), w.vertices());
            assert_eq!(back.boundary, w.boundary);
        }
        let bad = serde_json::json!({"ring": "Zfoo", "vertices": []});
        assert!(Window::from_json(&bad, "x").is_err());
        let concave = serde_json::json!({
            "ring": "Zsqrt2", "rho": "1", "boundary": "open",
            "vertices": [[[0,0,0,0],[0,0,0,0]], [[2,0,0,0],[0,0,0,0]], [["1/2",0,0,0],["1/2",0,0,0]], [[0,0,0,0],[2,0,0,0]]]
        });
        assert!(Window::from_json(&concave, "x").is_err());
    }

    #[test]
    fn classifier_matches_exact_contains() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cases = [(make_octagon_ab(), CycloId::N8), (make_decagon_t(), CycloId::N5), (make_pentagon_w1(), CycloId::N5)];
        for (w, id) in cases {
            let cl = w.classifier(id);
            for _ in 0..3000 {
                let c: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-4..=4));
                let x = CycloPoint::from_coeffs(id, c[0], c[1], c[2], c[3]);
                assert_eq!(cl.locate(&x), w.contains(&x.embed_internal()));
            }
            // Vertices of the pentagon are lattice images: σ(ζ^{3j}) = ζ^j.
            if w.label == "pentagon_w1" {
                for j in 0..5 {
                    let x = CycloPoint::zeta_pow(id, 3 * j);
                    assert_eq!(cl.locate(&x), Location::Boundary);
                }
            }
        }
    }
}
