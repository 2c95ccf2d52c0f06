//! Exact arithmetic in the norm-Euclidean rings Z[√2] and Z[τ], τ = (1+√5)/2.
//!
//! Elements are `a + bω` with `i64` coefficients. Products are formed in
//! `i128` and narrowed with a checked conversion, so overflow panics instead
//! of wrapping. The `checked_*` methods return `None` instead.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingId {
    Zsqrt2,
    Ztau,
}

impl RingId {
    /// `(c0, c1)` with ω² = c0 + c1·ω.
    pub const fn min_poly(self) -> (i64, i64) {
        match self {
            RingId::Zsqrt2 => (2, 0),
            RingId::Ztau => (1, 1),
        }
    }

    pub fn omega_f64(self) -> f64 {
        match self {
            RingId::Zsqrt2 => std::f64::consts::SQRT_2,
            RingId::Ztau => (1.0 + 5f64.sqrt()) / 2.0,
        }
    }

    pub fn conj_omega_f64(self) -> f64 {
        match self {
            RingId::Zsqrt2 => -std::f64::consts::SQRT_2,
            RingId::Ztau => (1.0 - 5f64.sqrt()) / 2.0,
        }
    }

    /// λ = 1+√2 or τ.
    pub const fn fundamental_unit(self) -> QuadInt {
        match self {
            RingId::Zsqrt2 => QuadInt::new(self, 1, 1),
            RingId::Ztau => QuadInt::new(self, 0, 1),
        }
    }

    pub const fn omega(self) -> QuadInt {
        QuadInt::new(self, 0, 1)
    }

    pub const fn one(self) -> QuadInt {
        QuadInt::new(self, 1, 0)
    }

    pub const fn zero(self) -> QuadInt {
        QuadInt::new(self, 0, 0)
    }

    /// `u^k` for any integer `k`; `u⁻¹ = −σ(u)` since `N(u) = −1`.
    pub fn unit_pow(self, k: i32) -> QuadInt {
        let u = self.fundamental_unit();
        let base = if k >= 0 { u } else { -u.conj() };
        let mut acc = self.one();
        for _ in 0..k.unsigned_abs() {
            acc = acc * base;
        }
        acc
    }

    pub fn name(self) -> &'static str {
        match self {
            RingId::Zsqrt2 => "Zsqrt2",
            RingId::Ztau => "Ztau",
        }
    }
}

/// `a + bω` in the ring `ring`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub ring: RingId,
    pub a: i64,
    pub b: i64,
}

fn narrow(v: i128) -> i64 {
    i64::try_from(v).expect("QuadInt coefficient overflow")
}

/// Nearest integer to `n/d`, ties toward zero.
fn round_div(n: i128, d: i128) -> i128 {
    let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
    let q = n.div_euclid(d);
    let r = n - q * d;
    match (2 * r).cmp(&d) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q >= 0 {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Sign of `A + B√d` for a non-square `d > 0`.
pub(crate) fn sign_sqrt(a: i128, b: i128, d: i128) -> i32 {
    let sa = a.signum() as i32;
    let sb = b.signum() as i32;
    if sb == 0 || sa == sb {
        return sa;
    }
    if sa == 0 {
        return sb;
    }
    let cmp = match (a.checked_mul(a), b.checked_mul(b).and_then(|bb| bb.checked_mul(d))) {
        (Some(aa), Some(dbb)) => aa.cmp(&dbb),
        _ => {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            (&a * &a).cmp(&(&b * &b * d))
        }
    };
    if cmp == Ordering::Greater {
        sa
    } else {
        sb
    }
}

/// Sign of `A + B√d` for big integers.
pub(crate) fn sign_sqrt_big(a: &BigInt, b: &BigInt, d: u32) -> i32 {
    let sign = |x: &BigInt| {
        if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            0
        }
    };
    let (sa, sb) = (sign(a), sign(b));
    if sb == 0 || sa == sb {
        return sa;
    }
    if sa == 0 {
        return sb;
    }
    if a * a > b * b * d {
        sa
    } else {
        sb
    }
}

impl QuadInt {
    pub const fn new(ring: RingId, a: i64, b: i64) -> Self {
        QuadInt { ring, a, b }
    }

    pub const fn from_int(ring: RingId, a: i64) -> Self {
        QuadInt { ring, a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.ring, other.ring, "QuadInt ring mismatch");
    }

    pub fn checked_add(self, o: Self) -> Option<Self> {
        self.check_ring(&o);
        Some(Self::new(self.ring, self.a.checked_add(o.a)?, self.b.checked_add(o.b)?))
    }

    pub fn checked_sub(self, o: Self) -> Option<Self> {
        self.check_ring(&o);
        Some(Self::new(self.ring, self.a.checked_sub(o.a)?, self.b.checked_sub(o.b)?))
    }

    pub fn checked_mul(self, o: Self) -> Option<Self> {
        self.check_ring(&o);
        let (a, b, c, d) = (self.a as i128, self.b as i128, o.a as i128, o.b as i128);
        let (c0, c1) = self.ring.min_poly();
        let bd = b.checked_mul(d)?;
        let x = a.checked_mul(c)?.checked_add(bd.checked_mul(c0 as i128)?)?;
        let y = a
            .checked_mul(d)?
            .checked_add(b.checked_mul(c)?)?
            .checked_add(bd.checked_mul(c1 as i128)?)?;
        Some(Self::new(self.ring, i64::try_from(x).ok()?, i64::try_from(y).ok()?))
    }

    pub fn scale(self, k: i64) -> Self {
        Self::new(
            self.ring,
            narrow(self.a as i128 * k as i128),
            narrow(self.b as i128 * k as i128),
        )
    }

    /// Galois conjugate: √2 ↦ −√2, τ ↦ 1−τ.
    pub fn conj(self) -> Self {
        match self.ring {
            RingId::Zsqrt2 => Self::new(self.ring, self.a, narrow(-(self.b as i128))),
            RingId::Ztau => Self::new(
                self.ring,
                narrow(self.a as i128 + self.b as i128),
                narrow(-(self.b as i128)),
            ),
        }
    }

    pub fn norm(self) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        match self.ring {
            RingId::Zsqrt2 => a * a - 2 * b * b,
            RingId::Ztau => a * a + a * b - b * b,
        }
    }

    pub fn is_unit(self) -> bool {
        self.norm().abs() == 1
    }

    /// Exact sign of the real embedding.
    pub fn signum(self) -> i32 {
        let (a, b) = (self.a as i128, self.b as i128);
        match self.ring {
            RingId::Zsqrt2 => sign_sqrt(a, b, 2),
            RingId::Ztau => sign_sqrt(2 * a + b, b, 5),
        }
    }

    pub fn abs(self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self
        }
    }

    pub fn to_f64(self) -> f64 {
        self.a as f64 + self.b as f64 * self.ring.omega_f64()
    }

    pub fn conj_f64(self) -> f64 {
        self.a as f64 + self.b as f64 * self.ring.conj_omega_f64()
    }

    /// `ln|x|` accurate even when the coefficients nearly cancel.
    fn ln_abs(self) -> f64 {
        let (x, s) = (self.to_f64().abs(), self.conj_f64().abs());
        if x >= s {
            x.ln()
        } else {
            (self.norm().unsigned_abs() as f64).ln() - s.ln()
        }
    }

    /// `ln|σ(x)|`, accurate under cancellation.
    fn ln_abs_conj(self) -> f64 {
        self.conj().ln_abs()
    }

    /// Exact quotient `self / d`, if `d` divides `self`.
    pub fn try_div(self, d: Self) -> Option<Self> {
        self.check_ring(&d);
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let (num_a, num_b) = mul_wide(self, d.conj());
        if num_a % n != 0 || num_b % n != 0 {
            return None;
        }
        Some(Self::new(self.ring, i64::try_from(num_a / n).ok()?, i64::try_from(num_b / n).ok()?))
    }

    pub fn divides(self, x: Self) -> bool {
        x.try_div(self).is_some()
    }

    pub fn cmp_real(self, o: Self) -> Ordering {
        (self - o).signum().cmp(&0)
    }
}

fn mul_wide(x: QuadInt, y: QuadInt) -> (i128, i128) {
    let (a, b, c, d) = (x.a as i128, x.b as i128, y.a as i128, y.b as i128);
    let (c0, c1) = x.ring.min_poly();
    let bd = b * d;
    (a * c + bd * c0 as i128, a * d + b * c + bd * c1 as i128)
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: Self) -> Self {
        self.check_ring(&o);
        Self::new(self.ring, narrow(self.a as i128 + o.a as i128), narrow(self.b as i128 + o.b as i128))
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: Self) -> Self {
        self.check_ring(&o);
        Self::new(self.ring, narrow(self.a as i128 - o.a as i128), narrow(self.b as i128 - o.b as i128))
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, o: Self) -> Self {
        self.check_ring(&o);
        let (x, y) = mul_wide(self, o);
        Self::new(self.ring, narrow(x), narrow(y))
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> Self {
        Self::new(self.ring, narrow(-(self.a as i128)), narrow(-(self.b as i128)))
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.ring {
            RingId::Zsqrt2 => "√2",
            RingId::Ztau => "τ",
        };
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}{w}"),
            (a, b) if b < 0 => write!(f, "{a}{b}{w}"),
            (a, b) => write!(f, "{a}+{b}{w}"),
        }
    }
}

/// Norm-Euclidean division: `x = q·y + r` with `|N(r)| < |N(y)|`.
pub fn euclid_divmod(x: QuadInt, y: QuadInt) -> Result<(QuadInt, QuadInt)> {
    if x.ring != y.ring {
        return Err(Error::RingMismatch);
    }
    let n = y.norm();
    if n == 0 {
        return Err(Error::DivisionByZero);
    }
    let (na, nb) = mul_wide(x, y.conj());
    let q0 = QuadInt::new(x.ring, narrow(round_div(na, n)), narrow(round_div(nb, n)));
    let r0 = x - q0 * y;
    if r0.norm().abs() < n.abs() {
        return Ok((q0, r0));
    }
    let mut best: Option<(i128, QuadInt, QuadInt)> = None;
    for da in -1..=1 {
        for db in -1..=1 {
            let q = QuadInt::new(x.ring, q0.a + da, q0.b + db);
            let r = x - q * y;
            let rn = r.norm().abs();
            if best.as_ref().map_or(true, |(bn, _, _)| rn < *bn) {
                best = Some((rn, q, r));
            }
        }
    }
    let (rn, q, r) = best.expect("non-empty neighbourhood");
    assert!(rn < n.abs(), "Euclidean remainder contract failed for {x} / {y}");
    Ok((q, r))
}

/// Canonical generator of the ideal `(x, y)`.
pub fn gcd(x: QuadInt, y: QuadInt) -> Result<QuadInt> {
    if x.ring != y.ring {
        return Err(Error::RingMismatch);
    }
    if x.is_zero() && y.is_zero() {
        return Err(Error::ZeroInput("gcd"));
    }
    let (mut x, mut y) = (x, y);
    while !y.is_zero() {
        let (_, r) = euclid_divmod(x, y)?;
        debug_assert!(r.norm().abs() < y.norm().abs());
        x = y;
        y = r;
    }
    canonical_associate(x)
}

/// True when `x` and `y` generate the unit ideal.
pub fn coprime(x: QuadInt, y: QuadInt) -> bool {
    let (nx, ny) = (x.norm().unsigned_abs(), y.norm().unsigned_abs());
    if num_integer::gcd(nx, ny) == 1 {
        return true;
    }
    match gcd(x, y) {
        Ok(g) => g.is_unit(),
        Err(_) => false,
    }
}

pub fn lcm(x: QuadInt, y: QuadInt) -> Result<QuadInt> {
    if x.is_zero() || y.is_zero() {
        return Ok(x.ring.zero());
    }
    let g = gcd(x, y)?;
    let xg = x.try_div(g).expect("gcd divides its argument");
    canonical_associate(xg * y)
}

/// `y ≥ |σ(y)|`, for `y > 0`.
fn ratio_at_least_one(y: QuadInt) -> bool {
    let s = y.conj();
    let s_abs = if s.signum() < 0 { -s } else { s };
    (y - s_abs).signum() >= 0
}

/// The associate `y = ±u^k·x` with `y > 0` and `y/|σ(y)| ∈ [1, u²)`.
pub fn canonical_associate(x: QuadInt) -> Result<QuadInt> {
    if x.is_zero() {
        return Err(Error::ZeroInput("canonical_associate"));
    }
    let ring = x.ring;
    let mut y = x.abs();
    let ln_u = ring.fundamental_unit().to_f64().ln();
    let log_ratio = y.ln_abs() - y.ln_abs_conj();
    let k = (log_ratio / (2.0 * ln_u)).floor() as i32;
    if k != 0 {
        y = y * ring.unit_pow(-k);
    }
    let u = ring.fundamental_unit();
    let u_inv = ring.unit_pow(-1);
    while !ratio_at_least_one(y) {
        y = y * u;
    }
    while ratio_at_least_one(y * u_inv) {
        y = y * u_inv;
    }
    Ok(y)
}

/// The associate of `x` in the fundamental domain `[1, u)`.
pub fn fundamental_rep(x: QuadInt) -> Result<QuadInt> {
    if x.is_zero() {
        return Err(Error::ZeroInput("fundamental_rep"));
    }
    let ring = x.ring;
    let u = ring.fundamental_unit();
    let u_inv = ring.unit_pow(-1);
    let mut y = x.abs();
    let k = (y.ln_abs() / u.to_f64().ln()).floor() as i32;
    if k != 0 {
        y = y * ring.unit_pow(-k);
    }
    let one = ring.one();
    while y.cmp_real(one) == Ordering::Less {
        y = y * u;
    }
    while y.cmp_real(u) != Ordering::Less {
        y = y * u_inv;
    }
    Ok(y)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Tonelli–Shanks square root of `n` modulo an odd prime `p`.
pub(crate) fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(n, q, p), pow_mod(n, (q + 1) / 2, p));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

pub(crate) fn rational_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| i as u64).collect()
}

/// Primes of `ring` above the rational prime `p`, as elements of `(1, u)`.
pub fn primes_above(ring: RingId, p: u64) -> Vec<QuadInt> {
    let pi = p as i64;
    let split = |g: QuadInt| -> Vec<QuadInt> {
        let a = fundamental_rep(g).expect("nonzero");
        let b = fundamental_rep(g.conj()).expect("nonzero");
        let mut v = vec![a, b];
        v.sort_by(|x, y| x.cmp_real(*y));
        v
    };
    match ring {
        RingId::Zsqrt2 => match p {
            2 => vec![ring.omega()],
            _ if p % 8 == 1 || p % 8 == 7 => {
                let r = sqrt_mod(2, p).expect("2 is a square mod p") as i64;
                let g = gcd(QuadInt::from_int(ring, pi), QuadInt::new(ring, r, 1)).expect("nonzero");
                split(g)
            }
            _ => vec![fundamental_rep(QuadInt::from_int(ring, pi)).expect("nonzero")],
        },
        RingId::Ztau => match p {
            5 => vec![fundamental_rep(QuadInt::new(ring, -1, 2)).expect("nonzero")],
            _ if p % 5 == 1 || p % 5 == 4 => {
                let s = sqrt_mod(5, p).expect("5 is a square mod p");
                let t = mul_mod(1 + s, (p + 1) / 2, p) as i64;
                let g = gcd(QuadInt::from_int(ring, pi), QuadInt::new(ring, -t, 1)).expect("nonzero");
                split(g)
            }
            _ => vec![fundamental_rep(QuadInt::from_int(ring, pi)).expect("nonzero")],
        },
    }
}

/// All primes `π` with `1 < π < u` and `|N(π)| ≤ norm_bound`, sorted by `|N|` then value.
pub fn enum_primes(ring: RingId, norm_bound: u64) -> Vec<QuadInt> {
    let mut out = Vec::new();
    for p in rational_primes(norm_bound) {
        for pi in primes_above(ring, p) {
            if pi.norm().unsigned_abs() <= norm_bound as u128 {
                out.push(pi);
            }
        }
    }
    out.sort_by(|x, y| {
        x.norm()
            .unsigned_abs()
            .cmp(&y.norm().unsigned_abs())
            .then_with(|| x.cmp_real(*y))
    });
    out
}

/// `num/den` in lowest terms with a canonical denominator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldFraction {
    pub num: QuadInt,
    pub den: QuadInt,
}

impl FieldFraction {
    pub fn integral(x: QuadInt) -> Self {
        FieldFraction { num: x, den: x.ring.one() }
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den.to_f64()
    }

    pub fn conj_f64(&self) -> f64 {
        self.num.conj_f64() / self.den.conj_f64()
    }

    pub fn ring(&self) -> RingId {
        self.num.ring
    }
}

impl fmt::Display for FieldFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == self.den.ring.one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

pub fn reduce_fraction(num: QuadInt, den: QuadInt) -> Result<FieldFraction> {
    if num.ring != den.ring {
        return Err(Error::RingMismatch);
    }
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(FieldFraction { num, den: den.ring.one() });
    }
    let g = gcd(num, den)?;
    let (n, d) = (num.try_div(g).expect("gcd divides"), den.try_div(g).expect("gcd divides"));
    let dc = canonical_associate(d)?;
    let unit = dc.try_div(d).expect("associates");
    Ok(FieldFraction { num: n * unit, den: dc })
}
