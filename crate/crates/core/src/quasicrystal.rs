//! Ammann–Beenker A-sets, Tübingen T-sets and rhombic-Penrose P-sets by cut-and-project,
//! with exact visibility classification.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{cross_int, CycloId, CycloPoint, TowerReal};
use crate::error::{Error, Result};
use crate::geometry::{chord_f64, make_pentagon_w1, star_check, Classifier, Location, TPoint, Window};
pub use crate::geometry::{make_octagon_w_prime, w_prime_translate};
use crate::qfield::{self, FieldFraction, QuadInt, RingId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    T,
    P,
}

impl Family {
    pub fn id(self) -> CycloId {
        match self {
            Family::A => CycloId::N8,
            Family::T | Family::P => CycloId::N5,
        }
    }
}

/// Quotients `c > 1` such that every invisible `x` has `x/c` in the set for some `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct OcclusionSet {
    pub ring: RingId,
    /// Include every prime of ℙ except `excluded`.
    pub primes: bool,
    pub excluded: Vec<QuadInt>,
    pub extra: Vec<FieldFraction>,
}

impl OcclusionSet {
    /// ℙ ∪ {λ}.
    pub fn for_a() -> Self {
        let r = RingId::Zsqrt2;
        OcclusionSet { ring: r, primes: true, excluded: vec![], extra: vec![FieldFraction::integral(r.fundamental_unit())] }
    }

    /// ℙ ∪ {τ}.
    pub fn for_t() -> Self {
        let r = RingId::Ztau;
        OcclusionSet { ring: r, primes: true, excluded: vec![], extra: vec![FieldFraction::integral(r.fundamental_unit())] }
    }

    /// (ℙ ∖ {3−τ}) ∪ {τ, τ²}.
    pub fn for_p() -> Self {
        let r = RingId::Ztau;
        OcclusionSet {
            ring: r,
            primes: true,
            excluded: vec![QuadInt::new(r, 3, -1)],
            extra: vec![FieldFraction::integral(r.unit_pow(1)), FieldFraction::integral(r.unit_pow(2))],
        }
    }

    /// (ℙ ∖ P) ∪ M.
    pub fn extended(excluded: Vec<QuadInt>, m: Vec<FieldFraction>) -> Self {
        let ring = m.first().map(|f| f.ring()).or(excluded.first().map(|p| p.ring)).unwrap_or(RingId::Zsqrt2);
        OcclusionSet { ring, primes: true, excluded, extra: m }
    }

    /// The set used for the translated octagon `W + 457 − 323√2`: P = {√2} and M as in [`w_prime_m`].
    pub fn w_prime() -> Self {
        Self::extended(vec![QuadInt::new(RingId::Zsqrt2, 0, 1)], w_prime_m())
    }

    /// The primes of the set with norm at most `bound`, followed by the extra quotients.
    pub fn quotients(&self, prime_bound: u64) -> Vec<FieldFraction> {
        let mut out = Vec::new();
        if self.primes {
            for p in qfield::enum_primes(self.ring, prime_bound.max(2)) {
                if !self.excluded.contains(&p) {
                    out.push(FieldFraction::integral(p));
                }
            }
        }
        out.extend(self.extra.iter().copied());
        out
    }
}

/// M = {2, λ, λ², √2, √2λ, √2λ², λ/√2, λ²/√2}.
pub fn w_prime_m() -> Vec<FieldFraction> {
    let r = RingId::Zsqrt2;
    let s2 = QuadInt::new(r, 0, 1);
    let (l, l2) = (r.unit_pow(1), r.unit_pow(2));
    let f = |n: QuadInt, d: QuadInt| qfield::reduce_fraction(n, d).expect("nonzero denominator");
    let one = r.one();
    vec![
        f(QuadInt::from_int(r, 2), one),
        f(l, one),
        f(l2, one),
        f(s2, one),
        f(s2 * l, one),
        f(s2 * l2, one),
        f(l, s2),
        f(l2, s2),
    ]
}

/// γ = (2, 1, −2, −2, 1)/101.
pub fn gamma0() -> [BigRational; 5] {
    [2, 1, -2, -2, 1].map(|n| BigRational::new(BigInt::from(n), BigInt::from(101)))
}

/// True iff every `γ_j ∈ Q ∖ Z` and `Σγ_j = 0`.
pub fn validate_penrose_translate(gamma: &[BigRational]) -> bool {
    gamma.len() == 5 && gamma.iter().all(|g| !g.is_integer()) && gamma.iter().sum::<BigRational>().is_zero()
}

/// `ε = Σ γ_j ζ^{2j}` as an exact point of the plane.
pub fn epsilon_from_gamma(gamma: &[BigRational]) -> Result<TPoint> {
    if gamma.len() != 5 {
        return Err(Error::Config(format!("gamma needs 5 entries, got {}", gamma.len())));
    }
    let r = RingId::Ztau;
    let (mut x, mut y) = (TowerReal::zero(r), TowerReal::zero(r));
    for (j, g) in gamma.iter().enumerate() {
        let (zx, zy) = CycloPoint::zeta_pow(CycloId::N5, 2 * j as u32).embed_physical();
        let g = TowerReal::from_rational(r, g.clone());
        x = &x + &(&g * &zx);
        y = &y + &(&g * &zy);
    }
    Ok((x, y))
}

/// `W_{k,ε}` for `k = 1..4`: `W1+ε`, `−τW1+ε`, `τW1+ε`, `−W1+ε`.
pub fn penrose_windows(eps: &TPoint) -> Vec<Window> {
    let w1 = make_pentagon_w1();
    let r = RingId::Ztau;
    let tau = TowerReal::omega(r);
    let one = TowerReal::one(r);
    let specs = [(one.clone(), false), (tau.clone(), true), (tau, false), (one, true)];
    specs
        .iter()
        .enumerate()
        .map(|(k, (s, rot))| {
            let mut w = w1.transform(s, *rot, eps).expect("nonzero scale");
            w.label = format!("W{}", k + 1);
            w
        })
        .collect()
}

/// Family, windows and the visibility rule in force.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub family: Family,
    pub label: String,
    windows: Vec<Window>,
    classifiers: Vec<Classifier>,
    epsilon: Option<TPoint>,
    occlusion: Option<OcclusionSet>,
    hypothesis: std::result::Result<(), String>,
}

impl FamilySpec {
    fn build(family: Family, label: String, windows: Vec<Window>, epsilon: Option<TPoint>, hypothesis: std::result::Result<(), String>) -> Self {
        let classifiers = windows.iter().map(|w| w.classifier(family.id())).collect();
        FamilySpec { family, label, windows, classifiers, epsilon, occlusion: None, hypothesis }
    }

    /// A-set `{x ∈ Z[ζ8] : σ(x) ∈ W}`.
    pub fn a(w: Window) -> Result<Self> {
        if w.ring() != RingId::Zsqrt2 {
            return Err(Error::Config("A-set windows live over Zsqrt2".into()));
        }
        let report = star_check(&w, &TowerReal::omega(RingId::Zsqrt2));
        let hyp = if report.passes() { Ok(()) } else { Err(format!("window {} fails 0 ∈ W, −W ⊂ √2W", w.label)) };
        Ok(Self::build(Family::A, w.label.clone(), vec![w], None, hyp))
    }

    /// T-set `{x ∈ Z[ζ5] : σ(x) ∈ W}`.
    pub fn t(w: Window) -> Result<Self> {
        if w.ring() != RingId::Ztau {
            return Err(Error::Config("T-set windows live over Ztau".into()));
        }
        let two_tau = TowerReal::from_ints(RingId::Ztau, 0, 2, 0, 0, 1);
        let report = star_check(&w, &two_tau);
        let hyp = if report.passes() { Ok(()) } else { Err(format!("window {} fails 0 ∈ W, −W ⊂ 2τW", w.label)) };
        Ok(Self::build(Family::T, w.label.clone(), vec![w], None, hyp))
    }

    /// P-set `⋃_k {x : κ(x) = k, σ(x) ∈ W_{k,ε}}`.
    pub fn p(eps: TPoint) -> Result<Self> {
        if eps.0.ring() != RingId::Ztau {
            return Err(Error::Config("epsilon must be a Ztau tower point".into()));
        }
        let windows = penrose_windows(&eps);
        let m2 = &eps.0.square() + &eps.1.square();
        let hyp = if m2 < TowerReal::from_ratio(RingId::Ztau, 1, 100) {
            Ok(())
        } else {
            Err("|ε| < 0.1 is required".to_string())
        };
        let label = format!("P_eps({:.6},{:.6})", eps.0.to_f64(), eps.1.to_f64());
        Ok(Self::build(Family::P, label, windows, Some(eps), hyp))
    }

    pub fn p_gamma(gamma: &[BigRational]) -> Result<Self> {
        if !validate_penrose_translate(gamma) {
            return Err(Error::Config("gamma must have 5 non-integral rational entries summing to 0".into()));
        }
        let mut s = Self::p(epsilon_from_gamma(gamma)?)?;
        let g: Vec<String> = gamma.iter().map(|g| g.to_string()).collect();
        s.label = format!("P_gamma({})", g.join(","));
        Ok(s)
    }

    /// Use the generic occlusion-set rule instead of the closed-form predicate.
    pub fn with_occlusion(mut self, c: OcclusionSet) -> Self {
        self.occlusion = Some(c);
        self
    }

    pub fn occlusion(&self) -> Option<&OcclusionSet> {
        self.occlusion.as_ref()
    }

    pub fn id(&self) -> CycloId {
        self.family.id()
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }

    pub fn window(&self) -> &Window {
        &self.windows[0]
    }

    pub fn epsilon(&self) -> Option<&TPoint> {
        self.epsilon.as_ref()
    }

    /// Ok when the closed-form visibility predicate applies.
    pub fn check_hypothesis(&self) -> Result<()> {
        self.hypothesis.clone().map_err(Error::Precondition)
    }

    pub fn locate(&self, x: &CycloPoint) -> Location {
        match self.family {
            Family::A | Family::T => self.classifiers[0].locate(x),
            Family::P => match x.kappa_unchecked() {
                0 => Location::Outside,
                k => self.classifiers[k as usize - 1].locate(x),
            },
        }
    }

    pub fn contains(&self, x: &CycloPoint) -> bool {
        match self.family {
            Family::A | Family::T => self.classifiers[0].contains(x),
            Family::P => match x.kappa_unchecked() {
                0 => false,
                k => self.classifiers[k as usize - 1].contains(x),
            },
        }
    }

    /// Visibility of a point `x` of the set, by the rule in force.
    pub fn visible_predicate(&self, x: &CycloPoint) -> Result<bool> {
        if let Some(c) = &self.occlusion {
            return Ok(self.visible_by_occlusion(c, x));
        }
        self.check_hypothesis()?;
        Ok(self.visible_closed_form(x))
    }

    /// `visible_predicate` without the hypothesis check; callers check once up front.
    pub fn visible_fast(&self, x: &CycloPoint) -> bool {
        match &self.occlusion {
            Some(c) => self.visible_by_occlusion(c, x),
            None => self.visible_closed_form(x),
        }
    }

    fn visible_closed_form(&self, x: &CycloPoint) -> bool {
        if x.is_zero() || !qfield::coprime(x.x1, x.x2) {
            return false;
        }
        match self.family {
            Family::A | Family::T => !self.contains(&x.unit_divide(1)),
            Family::P => !self.contains(&x.unit_divide(1)) && !self.contains(&x.unit_divide(2)),
        }
    }

    fn visible_by_occlusion(&self, c: &OcclusionSet, x: &CycloPoint) -> bool {
        if x.is_zero() {
            return false;
        }
        if c.primes && !qfield::coprime(x.x1, x.x2) {
            let g = qfield::gcd(x.x1, x.x2).expect("nonzero point");
            for pi in prime_factors(g) {
                if c.excluded.contains(&pi) {
                    continue;
                }
                if let Some(y) = x.try_divide(pi) {
                    if self.contains(&y) {
                        return false;
                    }
                }
            }
        }
        c.extra.iter().all(|q| match x.divide_fraction(q) {
            Some(y) => y.is_zero() || !self.contains(&y),
            None => true,
        })
    }
}

fn small_primes() -> &'static [u64] {
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| qfield::rational_primes(1 << 20))
}

fn factor_u128(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    for &p in small_primes() {
        let pp = p as u128;
        if pp * pp > n {
            break;
        }
        if n % pp == 0 {
            out.push(p);
            while n % pp == 0 {
                n /= pp;
            }
        }
    }
    if n > 1 {
        out.push(u64::try_from(n).expect("prime factor fits in u64"));
    }
    out
}

thread_local! {
    static ABOVE: RefCell<HashMap<(RingId, u64), Vec<QuadInt>>> = RefCell::new(HashMap::new());
}

fn primes_above_cached(ring: RingId, p: u64) -> Vec<QuadInt> {
    ABOVE.with(|m| m.borrow_mut().entry((ring, p)).or_insert_with(|| qfield::primes_above(ring, p)).clone())
}

/// Distinct primes of ℙ dividing `g`.
pub fn prime_factors(g: QuadInt) -> Vec<QuadInt> {
    let mut out = Vec::new();
    for p in factor_u128(g.norm().unsigned_abs()) {
        for pi in primes_above_cached(g.ring, p) {
            if pi.divides(g) {
                out.push(pi);
            }
        }
    }
    out
}

/// Exact test `|x|² ≤ T²` with a floating-point filter.
#[derive(Clone, Debug)]
pub struct Radius {
    pub t: f64,
    t2: f64,
    exact: BigRational,
}

impl Radius {
    pub fn new(t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Config(format!("radius must be positive, got {t}")));
        }
        let e = BigRational::from_float(t).expect("finite");
        Ok(Radius { t, t2: t * t, exact: &e * &e })
    }

    pub fn contains_sq(&self, m: QuadInt) -> bool {
        let f = m.to_f64();
        let tol = 1e-9 * (1.0 + self.t2);
        if f < self.t2 - tol {
            true
        } else if f > self.t2 + tol {
            false
        } else {
            TowerReal::from_quad(m) <= TowerReal::from_rational(m.ring, self.exact.clone())
        }
    }
}

struct Component {
    verts: Vec<(f64, f64)>,
    ymin: f64,
    ymax: f64,
    kappa: Option<u8>,
    index: usize,
}

/// Trigonometric data `(cos, sin)` of ζ in the physical and internal planes.
fn trig(id: CycloId) -> ((f64, f64), (f64, f64)) {
    let n = id.n() as f64;
    let k = id.sigma_exponent() as f64;
    let a = std::f64::consts::TAU / n;
    ((a.cos(), a.sin()), ((k * a).cos(), (k * a).sin()))
}

const MARGIN: f64 = 1e-6;

/// Calls `f(c, d)` for every `y = c + dω` with `y ∈ [lo1, hi1]` and `σ(y) ∈ [lo2, hi2]`.
fn enum_1d(ring: RingId, lo1: f64, hi1: f64, lo2: f64, hi2: f64, mut f: impl FnMut(QuadInt)) {
    if lo1 > hi1 || lo2 > hi2 {
        return;
    }
    let (w, wc) = (ring.omega_f64(), ring.conj_omega_f64());
    let delta = w - wc;
    let dmin = ((lo1 - hi2) / delta).ceil() as i64;
    let dmax = ((hi1 - lo2) / delta).floor() as i64;
    for d in dmin..=dmax {
        let df = d as f64;
        let cmin = (lo1 - df * w).max(lo2 - df * wc).ceil() as i64;
        let cmax = (hi1 - df * w).min(hi2 - df * wc).floor() as i64;
        for c in cmin..=cmax {
            f(QuadInt::new(ring, c, d));
        }
    }
}

/// Row-wise enumeration of a family inside the closed ball `B_T(0)`.
pub struct Enumerator<'a> {
    spec: &'a FamilySpec,
    radius: Radius,
    comps: Vec<Component>,
    rows: Vec<(usize, QuadInt)>,
}

impl<'a> Enumerator<'a> {
    pub fn new(spec: &'a FamilySpec, t: f64) -> Result<Self> {
        let radius = Radius::new(t)?;
        let id = spec.id();
        let ring = id.ring();
        let ((_, sp), (_, si)) = trig(id);
        let comps: Vec<Component> = spec
            .windows
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let (_, _, ymin, ymax) = w.bbox_f64();
                Component {
                    verts: w.vertices_f64(),
                    ymin,
                    ymax,
                    kappa: (spec.family == Family::P).then_some(i as u8 + 1),
                    index: i,
                }
            })
            .collect();
        let mut rows = Vec::new();
        let bound = t / sp + MARGIN;
        for (ci, c) in comps.iter().enumerate() {
            enum_1d(ring, -bound, bound, c.ymin / si - MARGIN, c.ymax / si + MARGIN, |x2| rows.push((ci, x2)));
        }
        Ok(Enumerator { spec, radius, comps, rows })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Emits every set point of row `i` with its location; returns boundary hits.
    pub fn scan_row(&self, i: usize, mut f: impl FnMut(CycloPoint)) -> u64 {
        let (ci, x2) = self.rows[i];
        let comp = &self.comps[ci];
        let id = self.spec.id();
        let ring = id.ring();
        let ((cp, sp), (cint, sint)) = trig(id);
        let (x2f, sx2) = (x2.to_f64(), x2.conj_f64());
        let im = x2f * sp;
        let h2 = self.radius.t2 - im * im;
        if h2 < -MARGIN * (1.0 + self.radius.t2) {
            return 0;
        }
        let h = h2.max(0.0).sqrt() + MARGIN;
        let im_int = sx2 * sint;
        if im_int < comp.ymin - MARGIN || im_int > comp.ymax + MARGIN {
            return 0;
        }
        let Some((cl, cr)) = chord_f64(&comp.verts, im_int.clamp(comp.ymin, comp.ymax)) else {
            return 0;
        };
        let (lo1, hi1) = (-h - x2f * cp, h - x2f * cp);
        let (lo2, hi2) = (cl - sx2 * cint - MARGIN, cr - sx2 * cint + MARGIN);
        let classifier = &self.spec.classifiers[comp.index];
        let mut hits = 0;
        enum_1d(ring, lo1, hi1, lo2, hi2, |x1| {
            let x = CycloPoint { id, x1, x2 };
            if let Some(k) = comp.kappa {
                if x.kappa_unchecked() != k {
                    return;
                }
            }
            let loc = classifier.locate(&x);
            if loc == Location::Outside || !self.radius.contains_sq(x.modulus_sq_int()) {
                return;
            }
            if loc == Location::Boundary {
                hits += 1;
            }
            if loc.is_member(classifier.boundary) {
                f(x);
            }
        });
        hits
    }

    /// Parallel fold over rows with an order-independent merge.
    pub fn par_fold<R, F, M>(&self, init: impl Fn() -> R + Sync + Send, fold: F, merge: M) -> (R, u64)
    where
        R: Send,
        F: Fn(&mut R, CycloPoint) + Sync + Send,
        M: Fn(R, R) -> R + Sync + Send,
    {
        (0..self.rows.len())
            .into_par_iter()
            .fold(
                || (init(), 0u64),
                |(mut acc, hits), i| {
                    let h = self.scan_row(i, |x| fold(&mut acc, x));
                    (acc, hits + h)
                },
            )
            .reduce(|| (init(), 0), |(a, ha), (b, hb)| (merge(a, b), ha + hb))
    }
}

/// A generated sample `P ∩ B_T(0)` in lexicographic coefficient order.
#[derive(Clone, Debug)]
pub struct PointSample {
    pub spec: FamilySpec,
    pub radius: f64,
    pub points: Vec<CycloPoint>,
    pub visible: Option<Vec<bool>>,
    pub boundary_hits: u64,
}

pub fn generate(spec: &FamilySpec, t: f64) -> Result<PointSample> {
    let en = Enumerator::new(spec, t)?;
    let (mut points, hits) = en.par_fold(Vec::new, |v, x| v.push(x), |mut a, mut b| {
        a.append(&mut b);
        a
    });
    points.par_sort_unstable_by_key(|x| x.coeffs());
    Ok(PointSample { spec: spec.clone(), radius: t, points, visible: None, boundary_hits: hits })
}

impl PointSample {
    /// Fills `visible` with the predicate in force for the spec.
    pub fn compute_visibility(&mut self) -> Result<()> {
        if self.spec.occlusion.is_none() {
            self.spec.check_hypothesis()?;
        }
        let spec = &self.spec;
        self.visible = Some(self.points.par_iter().map(|x| spec.visible_fast(x)).collect());
        Ok(())
    }

    pub fn visible_count(&self) -> Option<usize> {
        self.visible.as_ref().map(|v| v.iter().filter(|&&b| b).count())
    }

    pub fn visible_points(&self) -> Vec<CycloPoint> {
        match &self.visible {
            Some(v) => self.points.iter().zip(v).filter(|(_, &b)| b).map(|(x, _)| *x).collect(),
            None => Vec::new(),
        }
    }

    /// Restriction to `|x| ≤ t` for `t ≤ radius`, keeping visibility flags.
    pub fn restrict(&self, t: f64) -> Result<PointSample> {
        let r = Radius::new(t)?;
        let keep: Vec<usize> = (0..self.points.len()).filter(|&i| r.contains_sq(self.points[i].modulus_sq_int())).collect();
        Ok(PointSample {
            spec: self.spec.clone(),
            radius: t,
            points: keep.iter().map(|&i| self.points[i]).collect(),
            visible: self.visible.as_ref().map(|v| keep.iter().map(|&i| v[i]).collect()),
            boundary_hits: self.boundary_hits,
        })
    }
}

/// Points visible from the origin, by exact grouping into rays.
pub fn oracle_visible(sample: &PointSample) -> Vec<bool> {
    oracle_visible_points(&sample.points)
}

pub fn oracle_visible_points(points: &[CycloPoint]) -> Vec<bool> {
    let mut idx: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (x.angle_f64(), i))
        .collect();
    idx.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut visible = vec![false; points.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && idx[end].0 - idx[end - 1].0 <= 1e-9 {
            end += 1;
        }
        // Exact rays inside a run of nearly equal angles: (representative, nearest point).
        let mut rays: Vec<(usize, usize)> = Vec::new();
        for &(_, i) in &idx[start..end] {
            let x = &points[i];
            let (xr, xi) = x.phys_f64();
            let ray = rays.iter_mut().find(|(r, _)| {
                let y = &points[*r];
                let (yr, yi) = y.phys_f64();
                cross_int(x, y).is_zero() && xr * yr + xi * yi > 0.0
            });
            match ray {
                Some((_, best)) => {
                    if x.modulus_sq_int().cmp_real(points[*best].modulus_sq_int()) == Ordering::Less {
                        *best = i;
                    }
                }
                None => rays.push((i, i)),
            }
        }
        for (_, best) in rays {
            visible[best] = true;
        }
        start = end;
    }
    visible
}

/// Streaming counts of set points and visible points for several radii in one pass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counts {
    pub radii: Vec<f64>,
    pub total: Vec<u64>,
    pub visible: Vec<u64>,
    pub boundary_hits: u64,
}

pub fn count_visible(spec: &FamilySpec, radii: &[f64]) -> Result<Counts> {
    if radii.is_empty() {
        return Err(Error::Config("no radii".into()));
    }
    if spec.occlusion.is_none() {
        spec.check_hypothesis()?;
    }
    let tmax = radii.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rs: Vec<Radius> = radii.iter().map(|&t| Radius::new(t)).collect::<Result<_>>()?;
    let en = Enumerator::new(spec, tmax)?;
    let n = radii.len();
    let ((total, visible), hits) = en.par_fold(
        || (vec![0u64; n], vec![0u64; n]),
        |(tot, vis), x| {
            let m = x.modulus_sq_int();
            let inside: Vec<bool> = rs.iter().map(|r| r.contains_sq(m)).collect();
            if !inside.iter().any(|&b| b) {
                return;
            }
            let v = spec.visible_fast(&x);
            for k in 0..n {
                if inside[k] {
                    tot[k] += 1;
                    if v {
                        vis[k] += 1;
                    }
                }
            }
        },
        |(mut ta, mut va), (tb, vb)| {
            for k in 0..n {
                ta[k] += tb[k];
                va[k] += vb[k];
            }
            (ta, va)
        },
    );
    Ok(Counts { radii: radii.to_vec(), total, visible, boundary_hits: hits })
}

/// Result of the finite-T inclusion–exclusion sum.
#[derive(Clone, Debug, Serialize)]
pub struct InclusionExclusion {
    /// `Σ_F (−1)^{#F} #(P_* ∩ ⋂_{c∈F} cP_* ∩ B_T)`.
    pub count: i64,
    /// Number of subsets `F` with a nonempty intersection.
    pub nonempty_terms: usize,
    pub prime_norm_bound: u64,
    pub terms: Vec<(Vec<String>, u64)>,
}

/// Evaluates the alternating sum over finite `F ⊂ C`, counting `P_* ∩ ⋂ cP_*` for each `F`.
pub fn count_inclusion_exclusion(spec: &FamilySpec, t: f64, c: &OcclusionSet) -> Result<InclusionExclusion> {
    let sample = generate(spec, t)?;
    let pts: Vec<CycloPoint> = sample.points.iter().copied().filter(|x| !x.is_zero()).collect();
    // A prime π can divide x only if N(π) divides the norm of each nonzero coordinate.
    let bound = pts
        .iter()
        .map(|x| {
            let n: Vec<u128> = [x.x1, x.x2].iter().filter(|q| !q.is_zero()).map(|q| q.norm().unsigned_abs()).collect();
            n.into_iter().min().unwrap_or(0)
        })
        .max()
        .unwrap_or(2)
        .max(2) as u64;
    let quotients = c.quotients(bound);
    let n_primes = quotients.len() - c.extra.len();
    let prime_index: HashMap<QuadInt, usize> = quotients[..n_primes].iter().enumerate().map(|(i, q)| (q.num, i)).collect();
    let extras: Vec<(usize, FieldFraction)> = quotients.iter().copied().enumerate().skip(n_primes).collect();

    let subsets: BTreeMap<Vec<usize>, u64> = pts
        .par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<Vec<usize>, u64>, x| {
            let mut cx: Vec<usize> = Vec::new();
            if c.primes && !qfield::coprime(x.x1, x.x2) {
                let g = qfield::gcd(x.x1, x.x2).expect("nonzero");
                for pi in prime_factors(g) {
                    if let Some(&i) = prime_index.get(&pi) {
                        if x.try_divide(pi).is_some_and(|y| spec.contains(&y)) {
                            cx.push(i);
                        }
                    }
                }
            }
            for (i, q) in &extras {
                if x.divide_fraction(q).is_some_and(|y| !y.is_zero() && spec.contains(&y)) {
                    cx.push(*i);
                }
            }
            cx.sort_unstable();
            for mask in 0u64..(1u64 << cx.len()) {
                let f: Vec<usize> = (0..cx.len()).filter(|b| mask >> b & 1 == 1).map(|b| cx[b]).collect();
                *acc.entry(f).or_insert(0) += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let count = subsets.iter().map(|(f, &n)| if f.len() % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
    let terms = subsets
        .iter()
        .map(|(f, &n)| (f.iter().map(|&i| quotients[i].to_string()).collect(), n))
        .collect();
    Ok(InclusionExclusion { count, nonempty_terms: subsets.len(), prime_norm_bound: bound, terms })
}

/// Rational `p/q` from a decimal or fraction string.
pub fn parse_gamma(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(crate::cyclo::parse_rational).collect()
}

pub fn gamma_to_f64(g: &[BigRational]) -> Vec<f64> {
    g.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}
