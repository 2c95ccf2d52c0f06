//! Densities of point sets and of their visible points: closed forms, empirical estimates and
//! the Z^d baseline.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::{CycloId, CycloPoint, TowerReal};
use crate::error::{Error, Result};
use crate::geometry::{intersect_convex, make_pentagon_w1, star_check, TPoint, Window};
use crate::qfield::{self, FieldFraction, QuadInt, RingId};
use crate::quasicrystal::{Family, PointSample};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    ClosedForm,
    ExtendedSum,
    Empirical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub theta_total: f64,
    pub theta_visible: f64,
    pub relative_visible_fraction: f64,
    pub method: Method,
    /// Signed subset-sum `Σ (−1)^{#M0} vol(W_{M0}) / N(Π_{M0})²` for the extended formula.
    pub subset_sum: Option<f64>,
    pub terms: Vec<Term>,
}

impl DensityReport {
    fn new(theta_total: f64, theta_visible: f64, method: Method) -> Self {
        let relative_visible_fraction = if theta_total > 0.0 { theta_visible / theta_total } else { 0.0 };
        DensityReport { theta_total, theta_visible, relative_visible_fraction, method, subset_sum: None, terms: Vec::new() }
    }
}

/// `ζ_K(2)` for `K = Q(√2)` or `Q(√5)`.
pub fn zeta_k(ring: RingId) -> f64 {
    let pi4 = PI.powi(4);
    match ring {
        RingId::Zsqrt2 => pi4 / (48.0 * 2f64.sqrt()),
        RingId::Ztau => 2.0 * 5f64.sqrt() * pi4 / 375.0,
    }
}

/// Truncated Euler product `∏_{N(π) ≤ bound} (1 − N(π)^{−2})^{−1}`.
pub fn zeta_k_euler(ring: RingId, norm_bound: u64) -> f64 {
    qfield::enum_primes(ring, norm_bound)
        .iter()
        .map(|p| {
            let n = p.norm().unsigned_abs() as f64;
            1.0 / (1.0 - 1.0 / (n * n))
        })
        .product()
}

/// Riemann `ζ(d)` for `d ≥ 2`, by direct summation with an Euler–Maclaurin tail.
pub fn zeta(d: u32) -> f64 {
    assert!(d >= 2, "zeta(d) needs d >= 2");
    if d == 2 {
        return PI * PI / 6.0;
    }
    let n = 10_000u32;
    let s: f64 = (1..=n).rev().map(|k| (k as f64).powi(-(d as i32))).sum();
    let nf = n as f64;
    let df = d as f64;
    s + nf.powf(1.0 - df) / (df - 1.0) - nf.powf(-df) / 2.0 + df * nf.powf(-df - 1.0) / 12.0
}

/// Covolume of the Minkowski embedding `x ↦ (x, σ(x))` of `Z[ζ]` in R⁴.
pub fn covolume(id: CycloId) -> f64 {
    let ring = id.ring();
    let basis = [
        CycloPoint::new(id, ring.one(), ring.zero()),
        CycloPoint::new(id, ring.omega(), ring.zero()),
        CycloPoint::new(id, ring.zero(), ring.one()),
        CycloPoint::new(id, ring.zero(), ring.omega()),
    ];
    let m: Vec<[f64; 4]> = basis
        .iter()
        .map(|x| {
            let (a, b) = x.phys_f64();
            let (c, d) = x.internal_f64();
            [a, b, c, d]
        })
        .collect();
    det4(&m).abs()
}

fn det4(m: &[[f64; 4]]) -> f64 {
    let mut a: Vec<[f64; 4]> = m.to_vec();
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).expect("nonempty");
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// `θ(A_W) = vol(W)/4`.
pub fn density_a(w: &Window) -> f64 {
    w.area().to_f64() / covolume(CycloId::N8)
}

/// `θ(T_W) = vol(W)/covol(Z[ζ5])`.
pub fn density_t(w: &Window) -> f64 {
    w.area().to_f64() / covolume(CycloId::N5)
}

fn unit_conj_abs(ring: RingId) -> f64 {
    ring.fundamental_unit().conj_f64().abs()
}

pub fn density_visible_a(w: &Window) -> Result<DensityReport> {
    let r = RingId::Zsqrt2;
    if w.ring() != r {
        return Err(Error::RingMismatch);
    }
    if !star_check(w, &TowerReal::omega(r)).passes() {
        return Err(Error::Precondition(format!(
            "window {} fails 0 ∈ W, −W ⊂ √2W; use the extended formula",
            w.label
        )));
    }
    let theta = density_a(w);
    let vis = 2.0 * unit_conj_abs(r) * theta / zeta_k(r);
    Ok(DensityReport::new(theta, vis, Method::ClosedForm))
}

/// `σ(c)·W`.
fn conj_scaled(w: &Window, c: &FieldFraction) -> Result<Window> {
    let s = &TowerReal::from_quad(c.num.conj()) / &TowerReal::from_quad(c.den.conj());
    let zero = TowerReal::zero(w.ring());
    w.transform(&s, false, &(zero.clone(), zero))
}

/// Extended visible density for `A_W` with occlusion data `M` and small-conjugate primes `P`.
pub fn density_visible_a_extended(w: &Window, m: &[FieldFraction], p: &[QuadInt]) -> Result<DensityReport> {
    let r = RingId::Zsqrt2;
    if w.ring() != r || m.iter().any(|c| c.ring() != r) || p.iter().any(|q| q.ring != r) {
        return Err(Error::RingMismatch);
    }
    if m.len() > 20 {
        return Err(Error::Config(format!("|M| = {} exceeds the limit of 20", m.len())));
    }
    if !w.contains_origin() {
        return Err(Error::Precondition(format!("window {} must contain the origin in its interior", w.label)));
    }
    let scaled: Vec<Window> = m.iter().map(|c| conj_scaled(w, c)).collect::<Result<_>>()?;
    let n = m.len();
    let terms: Vec<(u32, TowerReal, i128)> = (0u32..(1u32 << n))
        .into_par_iter()
        .map(|mask| {
            let mut acc = Some(w.clone());
            let mut pi = r.one();
            for (i, s) in scaled.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = acc.and_then(|a| intersect_convex(&a, s));
                    pi = qfield::lcm(pi, m[i].num).expect("nonzero numerators");
                }
            }
            let vol = acc.map_or_else(|| TowerReal::zero(r), |a| a.area());
            (mask, vol, pi.norm())
        })
        .collect();
    let mut sum = TowerReal::zero(r);
    let mut out_terms = Vec::with_capacity(terms.len());
    for (mask, vol, norm) in &terms {
        let n2 = BigInt::from(*norm) * BigInt::from(*norm);
        let t = &vol.clone() * &TowerReal::from_rational(r, BigRational::new(BigInt::from(1), n2));
        let t = if mask.count_ones() % 2 == 0 { t } else { -t };
        out_terms.push(Term { label: format!("M0={mask:#0w$b}", w = n + 2), value: t.to_f64() });
        sum = &sum + &t;
    }
    let euler: f64 = p.iter().map(|q| 1.0 - 1.0 / (q.norm() as f64).powi(2)).product();
    let s = sum.to_f64();
    let theta = density_a(w);
    let vis = s / (4.0 * zeta_k(r) * euler);
    let mut rep = DensityReport::new(theta, vis, Method::ExtendedSum);
    rep.subset_sum = Some(s);
    rep.terms = out_terms;
    Ok(rep)
}

pub fn density_visible_t(w: &Window) -> Result<DensityReport> {
    let r = RingId::Ztau;
    if w.ring() != r {
        return Err(Error::RingMismatch);
    }
    if !star_check(w, &TowerReal::from_ints(r, 0, 2, 0, 0, 1)).passes() {
        return Err(Error::Precondition(format!("window {} fails 0 ∈ W, −W ⊂ 2τW", w.label)));
    }
    let theta = density_t(w);
    let vis = unit_conj_abs(r) * theta / zeta_k(r);
    Ok(DensityReport::new(theta, vis, Method::ClosedForm))
}

fn tau() -> f64 {
    RingId::Ztau.omega_f64()
}

/// `θ(P_ε) = 8(1+τ²)vol(W1)/(25(2τ−1))`, independent of ε.
pub fn density_p() -> f64 {
    let t = tau();
    8.0 * (1.0 + t * t) * make_pentagon_w1().area().to_f64() / (25.0 * (2.0 * t - 1.0))
}

fn check_eps(eps: &TPoint) -> Result<()> {
    if eps.0.ring() != RingId::Ztau {
        return Err(Error::RingMismatch);
    }
    let m2 = &eps.0.square() + &eps.1.square();
    if m2 >= TowerReal::from_ratio(RingId::Ztau, 1, 100) {
        return Err(Error::Precondition("|ε| < 0.1 is required".into()));
    }
    Ok(())
}

pub fn density_visible_p(eps: &TPoint) -> Result<DensityReport> {
    check_eps(eps)?;
    let r = RingId::Ztau;
    let w1 = make_pentagon_w1();
    let tau = TowerReal::omega(r);
    let shifted = w1.translated(&(&tau * &eps.0, &tau * &eps.1))?;
    let inter = intersect_convex(&w1, &shifted).map_or_else(|| TowerReal::zero(r), |w| w.area());
    let vol = w1.area();
    let num = &(&TowerReal::from_ints(r, 3, 1, 0, 0, 1) * &vol) - &inter;
    let t = tau.to_f64();
    let vis = num.to_f64() / (3.0 * (t + 2.0) * zeta_k(r));
    let mut rep = DensityReport::new(density_p(), vis, Method::ClosedForm);
    rep.terms = vec![
        Term { label: "vol(W1)".into(), value: vol.to_f64() },
        Term { label: "vol(W1 ∩ (W1+τε))".into(), value: inter.to_f64() },
    ];
    Ok(rep)
}

/// Closed-form report for a family spec, when a theorem applies.
pub fn density_visible(spec: &crate::quasicrystal::FamilySpec) -> Result<DensityReport> {
    match spec.family {
        Family::A => density_visible_a(spec.window()),
        Family::T => density_visible_t(spec.window()),
        Family::P => density_visible_p(spec.epsilon().expect("P spec carries ε")),
    }
}

/// Counts over `πT²`.
pub fn empirical_density(sample: &PointSample) -> DensityReport {
    let area = PI * sample.radius * sample.radius;
    let total = sample.points.len() as f64 / area;
    let vis = sample.visible_count().unwrap_or(0) as f64 / area;
    DensityReport::new(total, vis, Method::Empirical)
}

pub fn empirical_from_counts(total: u64, visible: u64, t: f64) -> DensityReport {
    let area = PI * t * t;
    DensityReport::new(total as f64 / area, visible as f64 / area, Method::Empirical)
}

/// Visible fraction of `Z^d ∩ B_T ∖ {0}` by direct gcd test, and its limit `1/ζ(d)`.
pub fn zd_visible(d: u32, t: f64) -> Result<(f64, f64)> {
    let (total, visible) = zd_counts(d, t)?;
    Ok((visible as f64 / total as f64, 1.0 / zeta(d)))
}

/// `(#nonzero, #primitive)` lattice points of `Z^d` with `|x| ≤ T`, for `d ∈ {2, 3}`.
pub fn zd_counts(d: u32, t: f64) -> Result<(u64, u64)> {
    if !(t.is_finite() && t >= 1.0) {
        return Err(Error::Config(format!("T must be at least 1, got {t}")));
    }
    let r = t.floor() as i64;
    let t2 = (t * t).floor() as i64;
    let row = |x: i64, rest: i64| -> (u64, u64) {
        let mut tot = 0;
        let mut vis = 0;
        let h = isqrt(t2 - x * x - rest * rest);
        let g0 = x.gcd(&rest);
        for y in -h..=h {
            if x == 0 && rest == 0 && y == 0 {
                continue;
            }
            tot += 1;
            if g0.gcd(&y) == 1 {
                vis += 1;
            }
        }
        (tot, vis)
    };
    let (tot, vis) = match d {
        2 => (-r..=r).into_par_iter().map(|x| row(x, 0)).reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1)),
        3 => (-r..=r)
            .into_par_iter()
            .map(|x| {
                let h = isqrt(t2 - x * x);
                (-h..=h).map(|z| row(x, z)).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1)),
        _ => return Err(Error::Config(format!("d must be 2 or 3, got {d}"))),
    };
    Ok((tot, vis))
}

/// `#{x ∈ Z^d : gcd = 1, |x|² ≤ k}` via `Σ_m μ(m) N(k/m²)`.
pub fn zd_visible_mobius(d: u32, k: i64) -> Result<u64> {
    if d != 2 && d != 3 {
        return Err(Error::Config(format!("d must be 2 or 3, got {d}")));
    }
    let mmax = isqrt(k);
    let mu = mobius_table(mmax.max(1) as usize);
    let mut acc: i64 = 0;
    for m in 1..=mmax {
        let u = mu[m as usize];
        if u != 0 {
            acc += u as i64 * lattice_count(d, k / (m * m)) as i64;
        }
    }
    Ok(acc as u64)
}

/// `#{x ∈ Z^d : 0 < |x|² ≤ k}`.
fn lattice_count(d: u32, k: i64) -> u64 {
    let r = isqrt(k);
    let mut n: u64 = 0;
    for x in -r..=r {
        match d {
            2 => n += (2 * isqrt(k - x * x) + 1) as u64,
            _ => {
                let h = isqrt(k - x * x);
                for y in -h..=h {
                    n += (2 * isqrt(k - x * x - y * y) + 1) as u64;
                }
            }
        }
    }
    n - 1
}

fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut is_comp = vec![false; n + 1];
    for p in 2..=n {
        if !is_comp[p] {
            for k in (p..=n).step_by(p) {
                if k > p {
                    is_comp[k] = true;
                }
                mu[k] = -mu[k];
            }
            let pp = p * p;
            for k in (pp..=n).step_by(pp) {
                mu[k] = 0;
            }
        }
    }
    mu
}

fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_decagon_t, make_octagon_ab, Boundary};
    use crate::quasicrystal::{epsilon_from_gamma, gamma0, make_octagon_w_prime, w_prime_m};

    #[test]
    fn zeta_constants() {
        assert!((zeta_k(RingId::Zsqrt2) - 1.434_971_433_736_684).abs() < 1e-14);
        assert!((zeta_k(RingId::Ztau) - 1.161_671_195_618_638).abs() < 1e-14);
        assert!((zeta(3) - 1.202_056_903_159_594).abs() < 1e-14);
        assert!((1.0 / zeta(2) - 0.607_927).abs() < 1e-6);
    }

    #[test]
    fn euler_product_oracle() {
        for r in [RingId::Zsqrt2, RingId::Ztau] {
            let e = zeta_k_euler(r, 1_000_000);
            assert!((e - zeta_k(r)).abs() < 1e-6, "{r:?} {e}");
        }
    }

    #[test]
    fn covolumes() {
        assert!((covolume(CycloId::N8) - 4.0).abs() < 1e-12);
        // sqrt(|disc Q(ζ5)|)/4 = 5√5/4.
        assert!((covolume(CycloId::N5) - 5.0 * 5f64.sqrt() / 4.0).abs() < 1e-12);
        // Penrose total density is the κ-weighted T-density.
        let w1 = make_pentagon_w1().area().to_f64();
        let t = tau();
        let from_t = w1 * (2.0 + 2.0 * t * t) / (5.0 * covolume(CycloId::N5));
        assert!((from_t - density_p()).abs() < 1e-12);
    }

    #[test]
    fn octagon_densities() {
        let w = make_octagon_ab();
        assert!((density_a(&w) - 2.0 * (1.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
        let rep = density_visible_a(&w).unwrap();
        assert!((rep.theta_visible - 1.0 / zeta_k(RingId::Zsqrt2)).abs() < 1e-12);
        assert!((rep.relative_visible_fraction - 0.5773).abs() < 1e-4);
    }

    #[test]
    fn scaling_law() {
        let w = make_octagon_ab();
        let s = TowerReal::from_ratio(RingId::Zsqrt2, 3, 2);
        let ws = w.scaled(&s).unwrap();
        assert!((density_a(&ws) - 2.25 * density_a(&w)).abs() < 1e-12);
    }

    #[test]
    fn extended_sum_reduces_to_simple_formula() {
        let w = make_octagon_ab();
        let lam = FieldFraction::integral(RingId::Zsqrt2.fundamental_unit());
        let ext = density_visible_a_extended(&w, &[lam], &[]).unwrap();
        let simple = density_visible_a(&w).unwrap();
        assert!((ext.theta_visible - simple.theta_visible).abs() < 1e-12);
    }

    #[test]
    fn extended_w_prime() {
        let w = make_octagon_w_prime();
        assert!(density_visible_a(&w).is_err());
        let p = [QuadInt::new(RingId::Zsqrt2, 0, 1)];
        let rep = density_visible_a_extended(&w, &w_prime_m(), &p).unwrap();
        assert_eq!(rep.terms.len(), 256);
        let c = rep.subset_sum.unwrap();
        assert!((c - 3.000_57).abs() < 1e-4, "c = {c}");
        assert!((rep.theta_visible - 0.697_010).abs() < 1e-5, "{}", rep.theta_visible);
    }

    #[test]
    fn extended_rejects_large_m() {
        let m = vec![FieldFraction::integral(RingId::Zsqrt2.fundamental_unit()); 21];
        assert!(density_visible_a_extended(&make_octagon_ab(), &m, &[]).is_err());
    }

    #[test]
    fn decagon_fraction() {
        let rep = density_visible_t(&make_decagon_t()).unwrap();
        assert!((rep.relative_visible_fraction - 0.532_021_445_552_643).abs() < 1e-12);
    }

    #[test]
    fn penrose_densities() {
        let eps = epsilon_from_gamma(&gamma0()).unwrap();
        let rep = density_visible_p(&eps).unwrap();
        assert!((rep.theta_visible - 0.684_307).abs() < 1e-6, "{}", rep.theta_visible);
        let z = TowerReal::zero(RingId::Ztau);
        let rep0 = density_visible_p(&(z.clone(), z)).unwrap();
        let expect = make_pentagon_w1().area().to_f64() / (3.0 * zeta_k(RingId::Ztau));
        assert!((rep0.theta_visible - expect).abs() < 1e-12);
        let big = (TowerReal::from_ratio(RingId::Ztau, 1, 10), TowerReal::zero(RingId::Ztau));
        assert!(density_visible_p(&big).is_err());
    }

    #[test]
    fn zd_baseline() {
        let (e, l) = zd_visible(2, 300.0).unwrap();
        assert!((e / l - 1.0).abs() < 0.01);
        let (tot, vis) = zd_counts(2, 300.0).unwrap();
        assert_eq!(vis, zd_visible_mobius(2, 90_000).unwrap());
        assert_eq!(tot, lattice_count(2, 90_000));
        let (_, vis3) = zd_counts(3, 40.0).unwrap();
        assert_eq!(vis3, zd_visible_mobius(3, 1600).unwrap());
        assert!((1.0 / zeta(3) - 0.831_90).abs() < 1e-5);
    }

    #[test]
    fn closure_has_same_closed_form() {
        let w = make_octagon_ab().with_boundary(Boundary::Closed);
        assert_eq!(density_visible_a(&w).unwrap(), density_visible_a(&make_octagon_ab()).unwrap());
    }
}
