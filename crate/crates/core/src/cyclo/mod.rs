//! Points `x = x1 + x2ζ` of Z[ζ8] and Z[ζ5] over the real subrings.

mod tower;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfield::{FieldFraction, QuadInt, RingId};

pub use tower::{parse_rational, rho_f64, Rho, TowerReal};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycloId {
    N8,
    N5,
}

/// A linear form in the coefficients `(a, b, c, d)` of `x1 = a+bω`, `x2 = c+dω`.
pub type Form4 = [f64; 4];

impl CycloId {
    pub fn n(self) -> u32 {
        match self {
            CycloId::N8 => 8,
            CycloId::N5 => 5,
        }
    }

    /// σ(ζ) = ζ^k.
    pub fn sigma_exponent(self) -> u32 {
        match self {
            CycloId::N8 => 3,
            CycloId::N5 => 2,
        }
    }

    pub fn ring(self) -> RingId {
        match self {
            CycloId::N8 => RingId::Zsqrt2,
            CycloId::N5 => RingId::Ztau,
        }
    }

    /// `2cos(2π/n)` as an element of the ring; ζ² = tζ − 1.
    fn trace_zeta(self) -> QuadInt {
        match self {
            CycloId::N8 => QuadInt::new(RingId::Zsqrt2, 0, 1),
            CycloId::N5 => QuadInt::new(RingId::Ztau, -1, 1),
        }
    }

    /// Exact `(Re, Im)` forms of the physical embedding.
    pub fn phys_forms(self) -> [[TowerReal; 4]; 2] {
        let r = self.ring();
        let t = |p, q, rr, s, den| TowerReal::from_ints(r, p, q, rr, s, den);
        match self {
            CycloId::N8 => [
                [t(1, 0, 0, 0, 1), t(0, 1, 0, 0, 1), t(0, 1, 0, 0, 2), t(1, 0, 0, 0, 1)],
                [t(0, 0, 0, 0, 1), t(0, 0, 0, 0, 1), t(0, 1, 0, 0, 2), t(1, 0, 0, 0, 1)],
            ],
            CycloId::N5 => [
                [t(1, 0, 0, 0, 1), t(0, 1, 0, 0, 1), t(-1, 1, 0, 0, 2), t(1, 0, 0, 0, 2)],
                [t(0, 0, 0, 0, 1), t(0, 0, 0, 0, 1), t(0, 0, 1, 0, 2), t(0, 0, 0, 1, 2)],
            ],
        }
    }

    /// Exact `(Re, Im)` forms of the internal embedding `σ(x1) + σ(x2)ζ^k`.
    pub fn internal_forms(self) -> [[TowerReal; 4]; 2] {
        let r = self.ring();
        let t = |p, q, rr, s, den| TowerReal::from_ints(r, p, q, rr, s, den);
        match self {
            CycloId::N8 => [
                [t(1, 0, 0, 0, 1), t(0, -1, 0, 0, 1), t(0, -1, 0, 0, 2), t(1, 0, 0, 0, 1)],
                [t(0, 0, 0, 0, 1), t(0, 0, 0, 0, 1), t(0, 1, 0, 0, 2), t(-1, 0, 0, 0, 1)],
            ],
            CycloId::N5 => [
                [t(1, 0, 0, 0, 1), t(1, -1, 0, 0, 1), t(0, -1, 0, 0, 2), t(1, 0, 0, 0, 2)],
                [t(0, 0, 0, 0, 1), t(0, 0, 0, 0, 1), t(0, 0, -1, 1, 2), t(0, 0, -2, 1, 2)],
            ],
        }
    }

    pub fn phys_forms_f64(self) -> [Form4; 2] {
        self.phys_forms().map(|row| row.map(|c| c.to_f64()))
    }

    pub fn internal_forms_f64(self) -> [Form4; 2] {
        self.internal_forms().map(|row| row.map(|c| c.to_f64()))
    }

    /// `sin(2π/n)/2`: area factor of the triangle `(0, x, y)` per unit of `x1y2 − x2y1`.
    pub fn area_factor(self) -> TowerReal {
        match self {
            CycloId::N8 => TowerReal::from_ints(RingId::Zsqrt2, 0, 1, 0, 0, 4),
            CycloId::N5 => TowerReal::from_ints(RingId::Ztau, 0, 0, 1, 0, 4),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloPoint {
    pub id: CycloId,
    pub x1: QuadInt,
    pub x2: QuadInt,
}

fn eval(form: &Form4, c: [i64; 4]) -> f64 {
    form[0] * c[0] as f64 + form[1] * c[1] as f64 + form[2] * c[2] as f64 + form[3] * c[3] as f64
}

fn eval_exact(form: &[TowerReal; 4], c: [i64; 4]) -> TowerReal {
    let mut acc = TowerReal::zero(form[0].ring());
    for (f, &k) in form.iter().zip(c.iter()) {
        if k != 0 {
            acc = &acc + &f.scale_int(k);
        }
    }
    acc
}

impl CycloPoint {
    pub fn new(id: CycloId, x1: QuadInt, x2: QuadInt) -> Self {
        assert!(x1.ring == id.ring() && x2.ring == id.ring(), "CycloPoint ring mismatch");
        CycloPoint { id, x1, x2 }
    }

    pub fn from_coeffs(id: CycloId, a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = id.ring();
        CycloPoint { id, x1: QuadInt::new(r, a, b), x2: QuadInt::new(r, c, d) }
    }

    pub fn zero(id: CycloId) -> Self {
        Self::from_coeffs(id, 0, 0, 0, 0)
    }

    pub fn one(id: CycloId) -> Self {
        Self::from_coeffs(id, 1, 0, 0, 0)
    }

    pub fn zeta(id: CycloId) -> Self {
        Self::from_coeffs(id, 0, 0, 1, 0)
    }

    pub fn from_real(id: CycloId, x: QuadInt) -> Self {
        Self::new(id, x, id.ring().zero())
    }

    /// `ζ^k` for `k ≥ 0`.
    pub fn zeta_pow(id: CycloId, k: u32) -> Self {
        let mut acc = Self::one(id);
        for _ in 0..k {
            acc = acc * Self::zeta(id);
        }
        acc
    }

    pub fn coeffs(&self) -> [i64; 4] {
        [self.x1.a, self.x1.b, self.x2.a, self.x2.b]
    }

    pub fn is_zero(&self) -> bool {
        self.x1.is_zero() && self.x2.is_zero()
    }

    pub fn embed_physical(&self) -> (TowerReal, TowerReal) {
        let [re, im] = self.id.phys_forms();
        (eval_exact(&re, self.coeffs()), eval_exact(&im, self.coeffs()))
    }

    pub fn embed_internal(&self) -> (TowerReal, TowerReal) {
        let [re, im] = self.id.internal_forms();
        (eval_exact(&re, self.coeffs()), eval_exact(&im, self.coeffs()))
    }

    pub fn phys_f64(&self) -> (f64, f64) {
        let [re, im] = self.id.phys_forms_f64();
        (eval(&re, self.coeffs()), eval(&im, self.coeffs()))
    }

    pub fn internal_f64(&self) -> (f64, f64) {
        let [re, im] = self.id.internal_forms_f64();
        (eval(&re, self.coeffs()), eval(&im, self.coeffs()))
    }

    /// `|x|²` as an element of the real subring.
    pub fn modulus_sq_int(&self) -> QuadInt {
        let t = self.id.trace_zeta();
        self.x1 * self.x1 + self.x2 * self.x2 + t * self.x1 * self.x2
    }

    pub fn modulus_sq(&self) -> TowerReal {
        TowerReal::from_quad(self.modulus_sq_int())
    }

    /// `|σ(x)|² = σ(|x|²)`.
    pub fn internal_modulus_sq_int(&self) -> QuadInt {
        self.modulus_sq_int().conj()
    }

    /// `κ(x) = a + 3b + c + 3d mod 5`, using κ(ζ) = 1 and κ(τ) = 3.
    pub fn kappa(&self) -> Result<u8> {
        if self.id != CycloId::N5 {
            return Err(Error::Precondition("kappa is defined on Z[ζ5] only".into()));
        }
        Ok(self.kappa_unchecked())
    }

    #[inline]
    pub(crate) fn kappa_unchecked(&self) -> u8 {
        let k = self.x1.a as i128 + 3 * self.x1.b as i128 + self.x2.a as i128 + 3 * self.x2.b as i128;
        k.rem_euclid(5) as u8
    }

    pub fn scale(&self, k: QuadInt) -> Self {
        CycloPoint { id: self.id, x1: self.x1 * k, x2: self.x2 * k }
    }

    /// `x / u^k` for the fundamental unit `u`.
    pub fn unit_divide(&self, k: i32) -> Self {
        if k == 0 {
            return *self;
        }
        self.scale(self.id.ring().unit_pow(-k))
    }

    pub fn try_divide(&self, d: QuadInt) -> Option<Self> {
        Some(CycloPoint { id: self.id, x1: self.x1.try_div(d)?, x2: self.x2.try_div(d)? })
    }

    /// `x / c`, if it lies in Z[ζ].
    pub fn divide_fraction(&self, c: &FieldFraction) -> Option<Self> {
        self.scale(c.den).try_divide(c.num)
    }

    /// Argument in `(−π, π]`; exact on the real axis.
    pub fn angle_f64(&self) -> f64 {
        if self.x2.is_zero() {
            return if self.x1.signum() < 0 { std::f64::consts::PI } else { 0.0 };
        }
        let (x, y) = self.phys_f64();
        y.atan2(x)
    }
}

/// `x1y2 − x2y1`; the signed area of `(0, x, y)` is this times `area_factor`.
pub fn cross_int(x: &CycloPoint, y: &CycloPoint) -> QuadInt {
    x.x1 * y.x2 - x.x2 * y.x1
}

pub fn cross_area(x: &CycloPoint, y: &CycloPoint) -> TowerReal {
    assert_eq!(x.id, y.id);
    let c = cross_int(x, y).abs();
    &TowerReal::from_quad(c) * &x.id.area_factor()
}

/// 0: lower half, 1: positive real axis, 2: upper half, 3: negative real axis.
fn half_plane_class(x: &CycloPoint) -> u8 {
    match x.x2.signum() {
        -1 => 0,
        1 => 2,
        _ => {
            if x.x1.signum() > 0 {
                1
            } else {
                3
            }
        }
    }
}

/// Exact order of the physical arguments in `(−π, π]`; `x`, `y` nonzero.
pub fn cmp_angle(x: &CycloPoint, y: &CycloPoint) -> Ordering {
    let (cx, cy) = (half_plane_class(x), half_plane_class(y));
    if cx != cy {
        return cx.cmp(&cy);
    }
    if cx == 1 || cx == 3 {
        return Ordering::Equal;
    }
    0.cmp(&cross_int(x, y).signum())
}

impl Add for CycloPoint {
    type Output = CycloPoint;
    fn add(self, o: Self) -> Self {
        CycloPoint { id: self.id, x1: self.x1 + o.x1, x2: self.x2 + o.x2 }
    }
}

impl Sub for CycloPoint {
    type Output = CycloPoint;
    fn sub(self, o: Self) -> Self {
        CycloPoint { id: self.id, x1: self.x1 - o.x1, x2: self.x2 - o.x2 }
    }
}

impl Neg for CycloPoint {
    type Output = CycloPoint;
    fn neg(self) -> Self {
        CycloPoint { id: self.id, x1: -self.x1, x2: -self.x2 }
    }
}

impl Mul for CycloPoint {
    type Output = CycloPoint;
    fn mul(self, o: Self) -> Self {
        assert_eq!(self.id, o.id);
        let t = self.id.trace_zeta();
        let x2y2 = self.x2 * o.x2;
        CycloPoint {
            id: self.id,
            x1: self.x1 * o.x1 - x2y2,
            x2: self.x1 * o.x2 + self.x2 * o.x1 + t * x2y2,
        }
    }
}

impl fmt::Display for CycloPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})ζ", self.x1, self.x2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn tau() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    /// Float oracle: embed via complex arithmetic with ζ = e^{2πi/n}.
    fn complex_embed(x: &CycloPoint, internal: bool) -> (f64, f64) {
        let n = x.id.n() as f64;
        let (k, x1, x2) = if internal {
            (x.id.sigma_exponent() as f64, x.x1.conj_f64(), x.x2.conj_f64())
        } else {
            (1.0, x.x1.to_f64(), x.x2.to_f64())
        };
        let ang = 2.0 * PI * k / n;
        (x1 + x2 * ang.cos(), x2 * ang.sin())
    }

    #[test]
    fn physical_examples() {
        let one = CycloPoint::one(CycloId::N8);
        let (x, y) = one.embed_physical();
        assert_eq!((x.to_f64(), y.to_f64()), (1.0, 0.0));
        let (x, y) = CycloPoint::zeta(CycloId::N8).embed_physical();
        let half_w = TowerReal::from_ints(RingId::Zsqrt2, 0, 1, 0, 0, 2);
        assert_eq!((x, y), (half_w.clone(), half_w));
        let (x, y) = CycloPoint::zeta(CycloId::N5).embed_physical();
        assert!((x.to_f64() - (tau() - 1.0) / 2.0).abs() < 1e-12);
        assert!((y.to_f64() - rho_f64() / 2.0).abs() < 1e-12);
        assert!((x.to_f64() - (2.0 * PI / 5.0).cos()).abs() < 1e-12);
        assert!((y.to_f64() - (2.0 * PI / 5.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn internal_examples() {
        let (x, y) = CycloPoint::one(CycloId::N5).embed_internal();
        assert_eq!((x.to_f64(), y.to_f64()), (1.0, 0.0));
        let (x, y) = CycloPoint::zeta(CycloId::N8).embed_internal();
        let w = std::f64::consts::FRAC_1_SQRT_2;
        assert!((x.to_f64() + w).abs() < 1e-15 && (y.to_f64() - w).abs() < 1e-15);
        let t = CycloPoint::from_coeffs(CycloId::N5, 0, 1, 0, 0);
        let (x, y) = t.embed_internal();
        assert_eq!(x, TowerReal::from_ints(RingId::Ztau, 1, -1, 0, 0, 1));
        assert!(y.is_zero());
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(CycloPoint::zero(CycloId::N5).kappa().unwrap(), 0);
        assert_eq!(CycloPoint::from_coeffs(CycloId::N5, 0, 1, 0, 0).kappa().unwrap(), 3);
        let s = (0..5).fold(CycloPoint::zero(CycloId::N5), |acc, k| acc + CycloPoint::zeta_pow(CycloId::N5, k));
        assert!(s.is_zero());
        assert_eq!(s.kappa().unwrap(), 0);
        // τ = 1 + ζ + ζ⁴.
        let t = CycloPoint::one(CycloId::N5) + CycloPoint::zeta(CycloId::N5) + CycloPoint::zeta_pow(CycloId::N5, 4);
        assert_eq!(t, CycloPoint::from_coeffs(CycloId::N5, 0, 1, 0, 0));
        assert!(CycloPoint::one(CycloId::N8).kappa().is_err());
    }

    #[test]
    fn cross_area_examples() {
        for id in [CycloId::N8, CycloId::N5] {
            let x = CycloPoint::from_coeffs(id, 2, -1, 3, 1);
            assert!(cross_area(&x, &x).is_zero());
        }
        let a = cross_area(&CycloPoint::one(CycloId::N8), &CycloPoint::zeta(CycloId::N8));
        assert!((a.to_f64() - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        let a = cross_area(&CycloPoint::one(CycloId::N5), &CycloPoint::zeta(CycloId::N5));
        assert_eq!(a, TowerReal::from_ints(RingId::Ztau, 0, 0, 1, 0, 4));
    }

    #[test]
    fn modulus_examples() {
        assert!(CycloPoint::zero(CycloId::N8).modulus_sq().is_zero());
        assert_eq!(CycloPoint::zeta(CycloId::N8).modulus_sq_int(), RingId::Zsqrt2.one());
        let x = CycloPoint::one(CycloId::N5) + CycloPoint::zeta(CycloId::N5);
        assert_eq!(x.modulus_sq_int(), QuadInt::new(RingId::Ztau, 1, 1));
        let (re, im) = x.phys_f64();
        assert!((re * re + im * im - (1.0 + tau())).abs() < 1e-12);
    }

    #[test]
    fn division_examples() {
        let tz = CycloPoint::zeta(CycloId::N5).scale(QuadInt::new(RingId::Ztau, 0, 1));
        assert_eq!(tz.unit_divide(1), CycloPoint::zeta(CycloId::N5));
        let x = CycloPoint::from_coeffs(CycloId::N8, 3, 1, -2, 5);
        assert_eq!(x.unit_divide(0), x);
        let l2 = CycloPoint::from_real(CycloId::N8, RingId::Zsqrt2.unit_pow(2));
        assert_eq!(l2.unit_divide(2), CycloPoint::one(CycloId::N8));
        let two = QuadInt::from_int(RingId::Zsqrt2, 2);
        assert_eq!(CycloPoint::from_coeffs(CycloId::N8, 2, 0, 2, 0).try_divide(two), Some(CycloPoint::from_coeffs(CycloId::N8, 1, 0, 1, 0)));
        assert_eq!(CycloPoint::from_coeffs(CycloId::N8, 1, 0, 1, 0).try_divide(two), None);
    }

    #[test]
    fn zeta_has_order_n() {
        for id in [CycloId::N8, CycloId::N5] {
            assert_eq!(CycloPoint::zeta_pow(id, id.n()), CycloPoint::one(id));
        }
    }

    #[test]
    fn angle_order_examples() {
        let id = CycloId::N8;
        let pts: Vec<CycloPoint> = (0..8).map(|k| CycloPoint::zeta_pow(id, k)).collect();
        // ζ⁴ = −1 has argument π, the largest.
        let mut sorted = pts.clone();
        sorted.sort_by(cmp_angle);
        let angles: Vec<f64> = sorted.iter().map(|p| p.angle_f64()).collect();
        assert!(angles.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sorted[7], pts[4]);
    }

    fn arb_point(id: CycloId) -> impl Strategy<Value = CycloPoint> {
        prop::array::uniform4(-60i64..60).prop_map(move |c| CycloPoint::from_coeffs(id, c[0], c[1], c[2], c[3]))
    }

    fn arb_any() -> impl Strategy<Value = CycloPoint> {
        prop_oneof![arb_point(CycloId::N8), arb_point(CycloId::N5)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn embeddings_match_complex_oracle(x in arb_any()) {
            for internal in [false, true] {
                let (ex, ey) = if internal { x.embed_internal() } else { x.embed_physical() };
                let (fx, fy) = complex_embed(&x, internal);
                let scale = 1.0 + fx.abs() + fy.abs();
                prop_assert!((ex.to_f64() - fx).abs() < 1e-9 * scale);
                prop_assert!((ey.to_f64() - fy).abs() < 1e-9 * scale);
                let (gx, gy) = if internal { x.internal_f64() } else { x.phys_f64() };
                prop_assert!((gx - fx).abs() < 1e-9 * scale && (gy - fy).abs() < 1e-9 * scale);
            }
        }

        #[test]
        fn sigma_is_a_ring_homomorphism(x in arb_point(CycloId::N8), y in arb_point(CycloId::N8)) {
            // σ(xy) = σ(x)σ(y), checked on internal embeddings as complex numbers.
            let (ax, ay) = x.internal_f64();
            let (bx, by) = y.internal_f64();
            let (cx, cy) = (x * y).internal_f64();
            let scale = 1.0 + cx.abs() + cy.abs();
            prop_assert!((ax * bx - ay * by - cx).abs() < 1e-9 * scale);
            prop_assert!((ax * by + ay * bx - cy).abs() < 1e-9 * scale);
        }

        #[test]
        fn modulus_matches_float(x in arb_any()) {
            let (re, im) = x.phys_f64();
            let f = re * re + im * im;
            let m = x.modulus_sq_int().to_f64();
            prop_assert!((m - f).abs() <= 1e-12 * f.max(1.0));
            let (re, im) = x.internal_f64();
            let g = re * re + im * im;
            let mi = x.internal_modulus_sq_int().to_f64();
            prop_assert!((mi - g).abs() <= 1e-9 * g.max(1.0));
        }

        #[test]
        fn cross_sign_matches_float(x in arb_any(), k in prop::array::uniform4(-60i64..60)) {
            let y = CycloPoint::from_coeffs(x.id, k[0], k[1], k[2], k[3]);
            let (ax, ay) = x.phys_f64();
            let (bx, by) = y.phys_f64();
            let f = ax * by - ay * bx;
            let s = cross_int(&x, &y).signum();
            if f.abs() > 1e-6 {
                prop_assert_eq!(s, if f > 0.0 { 1 } else { -1 });
            }
            prop_assert_eq!(cross_area(&x, &y).is_zero(), s == 0);
            let area = cross_area(&x, &y).to_f64();
            prop_assert!((area - f.abs() / 2.0).abs() < 1e-9 * (1.0 + f.abs()));
        }

        #[test]
        fn kappa_is_additive(x in arb_point(CycloId::N5), y in arb_point(CycloId::N5)) {
            let s = (x.kappa().unwrap() + y.kappa().unwrap()) % 5;
            prop_assert_eq!((x + y).kappa().unwrap(), s);
            let p = (x.kappa().unwrap() * y.kappa().unwrap()) % 5;
            prop_assert_eq!((x * y).kappa().unwrap(), p);
        }

        #[test]
        fn scaling_divides_back(x in arb_any(), a in -20i64..20, b in -20i64..20) {
            let d = QuadInt::new(x.id.ring(), a, b);
            prop_assume!(!d.is_zero());
            prop_assert_eq!(x.scale(d).try_divide(d), Some(x));
        }
    }
}
