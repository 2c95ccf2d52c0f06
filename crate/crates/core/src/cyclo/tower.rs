//! Exact reals `(p + qω) + (r + sω)ρ` with rational coefficients.
//!
//! For `Zsqrt2` the ρ-part is always zero. For `Ztau`, ρ = √(τ+2) and the
//! tower Q(τ, ρ) is a field, so division is exact as well.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfield::{sign_sqrt_big, QuadInt, RingId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rho {
    One,
    SqrtTauPlus2,
}

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Element `x + yω` of Q(ω).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct QOmega {
    x: Q,
    y: Q,
}

impl QOmega {
    fn zero() -> Self {
        QOmega { x: Q::zero(), y: Q::zero() }
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        QOmega { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    fn sub(&self, o: &Self) -> Self {
        QOmega { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    fn neg(&self) -> Self {
        QOmega { x: -&self.x, y: -&self.y }
    }

    fn mul(&self, o: &Self, ring: RingId) -> Self {
        let (c0, c1) = ring.min_poly();
        let yy = &self.y * &o.y;
        QOmega {
            x: &self.x * &o.x + &yy * q(c0),
            y: &self.x * &o.y + &self.y * &o.x + &yy * q(c1),
        }
    }

    fn conj(&self, ring: RingId) -> Self {
        match ring {
            RingId::Zsqrt2 => QOmega { x: self.x.clone(), y: -&self.y },
            RingId::Ztau => QOmega { x: &self.x + &self.y, y: -&self.y },
        }
    }

    fn norm(&self, ring: RingId) -> Q {
        self.mul(&self.conj(ring), ring).x
    }

    fn inv(&self, ring: RingId) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm(ring);
        let c = self.conj(ring);
        Some(QOmega { x: &c.x / &n, y: &c.y / &n })
    }

    fn sign(&self, ring: RingId) -> i32 {
        // x + y√2, or x + yτ = ((2x + y) + y√5)/2.
        let (a, b, d) = match ring {
            RingId::Zsqrt2 => (self.x.clone(), self.y.clone(), 2u32),
            RingId::Ztau => (&self.x * q(2) + &self.y, self.y.clone(), 5u32),
        };
        let den = a.denom() * b.denom();
        let an = a.numer() * (&den / a.denom());
        let bn = b.numer() * (&den / b.denom());
        sign_sqrt_big(&an, &bn, d)
    }

    fn to_f64(&self, ring: RingId) -> f64 {
        self.x.to_f64().unwrap_or(f64::NAN) + self.y.to_f64().unwrap_or(f64::NAN) * ring.omega_f64()
    }
}

/// `ρ² = τ + 2` as an element of Q(τ).
fn rho_sq() -> QOmega {
    QOmega { x: q(2), y: q(1) }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerReal {
    ring: RingId,
    a: QOmega,
    b: QOmega,
}

impl TowerReal {
    pub fn zero(ring: RingId) -> Self {
        TowerReal { ring, a: QOmega::zero(), b: QOmega::zero() }
    }

    pub fn one(ring: RingId) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: RingId, n: i64) -> Self {
        Self::new(ring, q(n), Q::zero(), Q::zero(), Q::zero())
    }

    pub fn from_ratio(ring: RingId, n: i64, d: i64) -> Self {
        Self::new(ring, q_frac(n, d), Q::zero(), Q::zero(), Q::zero())
    }

    pub fn from_rational(ring: RingId, x: Q) -> Self {
        Self::new(ring, x, Q::zero(), Q::zero(), Q::zero())
    }

    pub fn from_quad(x: QuadInt) -> Self {
        Self::new(x.ring, q(x.a), q(x.b), Q::zero(), Q::zero())
    }

    /// `(p + qω) + (r + sω)ρ`. For `Zsqrt2`, ρ = 1 and the parts are folded.
    pub fn new(ring: RingId, p: Q, qq: Q, r: Q, s: Q) -> Self {
        match ring {
            RingId::Zsqrt2 => TowerReal {
                ring,
                a: QOmega { x: p + r, y: qq + s },
                b: QOmega::zero(),
            },
            RingId::Ztau => TowerReal { ring, a: QOmega { x: p, y: qq }, b: QOmega { x: r, y: s } },
        }
    }

    /// Small-integer constructor: `(p + qω)/den + (r + sω)ρ/den`.
    pub fn from_ints(ring: RingId, p: i64, qq: i64, r: i64, s: i64, den: i64) -> Self {
        Self::new(ring, q_frac(p, den), q_frac(qq, den), q_frac(r, den), q_frac(s, den))
    }

    pub fn omega(ring: RingId) -> Self {
        Self::new(ring, Q::zero(), q(1), Q::zero(), Q::zero())
    }

    /// ρ = √(τ+2); only in `Ztau`.
    pub fn rho(ring: RingId) -> Self {
        assert_eq!(ring, RingId::Ztau, "rho is only defined over Ztau");
        Self::new(ring, Q::zero(), Q::zero(), q(1), Q::zero())
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn rho_kind(&self) -> Rho {
        if self.b.is_zero() {
            Rho::One
        } else {
            Rho::SqrtTauPlus2
        }
    }

    /// `[p, q, r, s]`.
    pub fn coeffs(&self) -> [Q; 4] {
        [self.a.x.clone(), self.a.y.clone(), self.b.x.clone(), self.b.y.clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign, always −1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = self.a.sign(self.ring);
        let sb = self.b.sign(self.ring);
        if sb == 0 || sa == sb {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // Signs differ: compare A² with B²ρ².
        let aa = self.a.mul(&self.a, self.ring);
        let bb = self.b.mul(&self.b, self.ring).mul(&rho_sq(), self.ring);
        if aa.sub(&bb).sign(self.ring) > 0 {
            sa
        } else {
            sb
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let base = self.a.to_f64(self.ring);
        if self.b.is_zero() {
            base
        } else {
            base + self.b.to_f64(self.ring) * rho_f64()
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            let i = self.a.inv(self.ring).expect("nonzero");
            return Ok(TowerReal { ring: self.ring, a: i, b: QOmega::zero() });
        }
        // (A + Bρ)⁻¹ = (A − Bρ)/(A² − B²ρ²)
        let ring = self.ring;
        let d = self.a.mul(&self.a, ring).sub(&self.b.mul(&self.b, ring).mul(&rho_sq(), ring));
        let di = d.inv(ring).expect("tower basis is independent");
        Ok(TowerReal { ring, a: self.a.mul(&di, ring), b: self.b.neg().mul(&di, ring) })
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let kk = q(k);
        TowerReal {
            ring: self.ring,
            a: QOmega { x: &self.a.x * &kk, y: &self.a.y * &kk },
            b: QOmega { x: &self.b.x * &kk, y: &self.b.y * &kk },
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.ring, o.ring, "TowerReal ring mismatch");
    }

    pub fn max(self, o: Self) -> Self {
        if o > self {
            o
        } else {
            self
        }
    }

    /// Strings `"n"` or `"n/d"` for `[p, q, r, s]`.
    pub fn to_strings(&self) -> [String; 4] {
        self.coeffs().map(|c| c.to_string())
    }

    pub fn parse(ring: RingId, rho: Rho, parts: &[String]) -> Result<Self> {
        if parts.len() != 4 {
            return Err(Error::Config(format!("expected 4 coefficients, got {}", parts.len())));
        }
        let mut v = Vec::with_capacity(4);
        for s in parts {
            v.push(parse_rational(s)?);
        }
        let [p, qq, r, s]: [Q; 4] = v.try_into().expect("length checked");
        match rho {
            Rho::One => Ok(Self::new(ring, p + r, qq + s, Q::zero(), Q::zero())),
            Rho::SqrtTauPlus2 => {
                if ring != RingId::Ztau {
                    return Err(Error::Config("rho sqrt(tau+2) requires ring Ztau".into()));
                }
                Ok(Self::new(ring, p, qq, r, s))
            }
        }
    }
}

pub fn rho_f64() -> f64 {
    (2.0 + (1.0 + 5f64.sqrt()) / 2.0).sqrt()
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Config(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

impl PartialOrd for TowerReal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for TowerReal {
    fn cmp(&self, o: &Self) -> Ordering {
        (self - o).signum().cmp(&0)
    }
}

impl<'a> Add<&'a TowerReal> for &'a TowerReal {
    type Output = TowerReal;
    fn add(self, o: &TowerReal) -> TowerReal {
        self.check(o);
        TowerReal { ring: self.ring, a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }
}

impl<'a> Sub<&'a TowerReal> for &'a TowerReal {
    type Output = TowerReal;
    fn sub(self, o: &TowerReal) -> TowerReal {
        self.check(o);
        TowerReal { ring: self.ring, a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }
}

impl<'a> Mul<&'a TowerReal> for &'a TowerReal {
    type Output = TowerReal;
    fn mul(self, o: &TowerReal) -> TowerReal {
        self.check(o);
        let ring = self.ring;
        if self.b.is_zero() && o.b.is_zero() {
            return TowerReal { ring, a: self.a.mul(&o.a, ring), b: QOmega::zero() };
        }
        let a = self.a.mul(&o.a, ring).add(&self.b.mul(&o.b, ring).mul(&rho_sq(), ring));
        let b = self.a.mul(&o.b, ring).add(&self.b.mul(&o.a, ring));
        TowerReal { ring, a, b }
    }
}

impl<'a> Div<&'a TowerReal> for &'a TowerReal {
    type Output = TowerReal;
    fn div(self, o: &TowerReal) -> TowerReal {
        self * &o.inv().expect("TowerReal division by zero")
    }
}

impl Neg for &TowerReal {
    type Output = TowerReal;
    fn neg(self) -> TowerReal {
        TowerReal { ring: self.ring, a: self.a.neg(), b: self.b.neg() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<TowerReal> for TowerReal {
            type Output = TowerReal;
            fn $m(self, o: TowerReal) -> TowerReal {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for TowerReal {
    type Output = TowerReal;
    fn neg(self) -> TowerReal {
        -&self
    }
}

impl fmt::Display for TowerReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, qq, r, s] = self.to_strings();
        write!(f, "[{p}, {qq}, {r}, {s}]≈{:.12}", self.to_f64())
    }
}
