//! Exact arithmetic in SL(2,Z) and PSL(2,Z).
//!
//! Matrices carry arbitrary-precision entries; floating point only appears in
//! [`HalfPlanePoint`] and the operations acting on it.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default tolerance for floating comparisons on the upper half-plane.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// A 2×2 integer matrix `(a b; c d)` with `ad - bc = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl UnimodularMatrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::NotUnimodular {
                entries: [a, b, c, d].map(|e| e.to_string()),
                det: det.to_string(),
            });
        }
        Ok(Self { a, b, c, d })
    }

    /// Builds from machine integers; panics if the determinant is not 1.
    ///
    /// Intended for literals in code and tests.
    pub fn from_i64(e: [i64; 4]) -> Self {
        Self::new(e[0], e[1], e[2], e[3]).expect("literal matrix must have determinant 1")
    }

    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        debug_assert!((&a * &d - &b * &c).is_one());
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::from_i64([1, 0, 0, 1])
    }

    /// The order-two generator `(0 -1; 1 0)`.
    pub fn s() -> Self {
        Self::from_i64([0, -1, 1, 0])
    }

    /// The translation `(1 1; 0 1)`.
    pub fn t() -> Self {
        Self::from_i64([1, 1, 0, 1])
    }

    pub fn t_pow(n: impl Into<BigInt>) -> Self {
        Self::raw(BigInt::one(), n.into(), BigInt::zero(), BigInt::one())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn to_i64_array(&self) -> Option<[i64; 4]> {
        Some([
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ])
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::raw(
            &self.a * &other.a + &self.b * &other.c,
            &self.a * &other.b + &self.b * &other.d,
            &self.c * &other.a + &self.d * &other.c,
            &self.c * &other.b + &self.d * &other.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn negate(&self) -> Self {
        Self::raw(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    /// True for `±identity`.
    pub fn is_central(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// The real-structure involution `(a b; c d) ↦ (a -b; -c d)`.
    ///
    /// It is conjugation by `diag(1, -1)`, hence an automorphism, and it is
    /// compatible with `z ↦ -z̄` on the half-plane.
    pub fn s_involution(&self) -> Self {
        Self::raw(self.a.clone(), -&self.b, -&self.c, self.d.clone())
    }

    pub fn is_parabolic(&self) -> bool {
        self.trace().abs() == BigInt::from(2) && !self.is_central()
    }

    /// Fixed point on `P¹(Q)` of a parabolic matrix.
    fn parabolic_fixed_point(&self) -> ExtendedRational {
        // (a - d) x + b = c x² has the double root x = (a - d) / 2c, or ∞ when c = 0.
        if self.c.is_zero() {
            ExtendedRational::Infinity
        } else {
            ExtendedRational::from_bigints(&self.a - &self.d, BigInt::from(2) * &self.c)
                .expect("nonzero denominator")
        }
    }

    /// Conjugation-invariant `(sign, shift)` with `self ~ sign·(1 shift; 0 1)` in SL(2,Z).
    pub fn parabolic_normal_form(&self) -> Result<ParabolicNormalForm> {
        if !self.is_parabolic() {
            return Err(Error::NotParabolic(self.to_string()));
        }
        let u = completion(&self.parabolic_fixed_point());
        let conj = u.inverse().compose(self).compose(&u);
        debug_assert!(conj.c.is_zero() && conj.a == conj.d);
        let sign = if conj.a.is_positive() { 1 } else { -1 };
        let shift = if sign == 1 { conj.b.clone() } else { -conj.b };
        Ok(ParabolicNormalForm { sign, shift })
    }
}

impl Mul for &UnimodularMatrix {
    type Output = UnimodularMatrix;
    fn mul(self, rhs: &UnimodularMatrix) -> UnimodularMatrix {
        self.compose(rhs)
    }
}

impl Mul for UnimodularMatrix {
    type Output = UnimodularMatrix;
    fn mul(self, rhs: UnimodularMatrix) -> UnimodularMatrix {
        self.compose(&rhs)
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for UnimodularMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let arr = self
            .to_i64_array()
            .ok_or_else(|| serde::ser::Error::custom("matrix entry exceeds 64 bits"))?;
        arr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnimodularMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c, d] = <[i64; 4]>::deserialize(deserializer)?;
        Self::new(a, b, c, d).map_err(serde::de::Error::custom)
    }
}

/// Result of [`UnimodularMatrix::parabolic_normal_form`].
///
/// `sign = +1` is a fiber of type `I`, `sign = -1` of type `I*`; the
/// multiplicity is `|shift|`. Flipping the loop orientation negates `shift`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParabolicNormalForm {
    pub sign: i8,
    pub shift: BigInt,
}

/// Completes `(p, q)` to a matrix of SL(2,Z) with first column `(p, q)`.
///
/// Among all completions `(p r; q s)` the one with `s` in `(-|q|/2, |q|/2]`
/// is returned, which minimizes `|s|` and makes the choice deterministic.
pub fn complete_column(p: &BigInt, q: &BigInt) -> Result<UnimodularMatrix> {
    let g = p.extended_gcd(q);
    if !g.gcd.is_one() {
        return Err(Error::NotCoprime(p.to_string(), q.to_string()));
    }
    // p·x + q·y = 1  =>  (p, -y; q, x) has determinant 1.
    let (mut r, mut s) = (-g.y, g.x);
    if q.is_zero() {
        // p = ±1 and r is free.
        r = BigInt::zero();
        s = p.clone();
    } else {
        // Solutions are (r + n·p, s + n·q); take s in (-|q|/2, |q|/2].
        let qa = q.abs();
        let mut target = s.mod_floor(&qa);
        if BigInt::from(2) * &target > qa {
            target -= &qa;
        }
        let n = (&target - &s) / q;
        r += &n * p;
        s = target;
    }
    UnimodularMatrix::new(p.clone(), r, q.clone(), s)
}

/// `round(x / m)` for `m > 0`, ties toward +∞.
fn floor_div_round(x: &BigInt, m: &BigInt) -> BigInt {
    (BigInt::from(2) * x + m).div_floor(&(BigInt::from(2) * m))
}

fn completion(z: &ExtendedRational) -> UnimodularMatrix {
    match z {
        ExtendedRational::Infinity => UnimodularMatrix::identity(),
        ExtendedRational::Finite { num, den } => {
            complete_column(num, den).expect("reduced fraction is coprime")
        }
    }
}

/// A class `±M` in PSL(2,Z), stored by its canonical representative whose
/// first nonzero entry is positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectiveClass(UnimodularMatrix);

impl ProjectiveClass {
    pub fn new(m: UnimodularMatrix) -> Self {
        let first = m.entries().into_iter().find(|e| !e.is_zero()).cloned();
        match first {
            Some(e) if e.is_negative() => Self(m.negate()),
            _ => Self(m),
        }
    }

    pub fn identity() -> Self {
        Self(UnimodularMatrix::identity())
    }

    pub fn representative(&self) -> &UnimodularMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> UnimodularMatrix {
        self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.0.compose(&other.0))
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.0.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn act(&self, z: &ExtendedRational) -> ExtendedRational {
        z.transform(&self.0)
    }

    pub fn act_point(&self, z: HalfPlanePoint) -> HalfPlanePoint {
        z.transform(&self.0)
    }

    /// Rewrites the class as a word in `S`, `T`, `T⁻¹`.
    ///
    /// Uses nearest-integer Euclidean steps `M = T^n S M'` where `M'` has a
    /// lower-left entry at most half of the previous one, so the number of
    /// `S` letters is `O(log max|entry|)`.
    pub fn to_word(&self) -> GeneratorWord {
        let mut letters = Vec::new();
        let mut m = self.0.clone();
        while !m.c.is_zero() {
            let n = floor_div_round(&(&m.a * m.c.signum()), &m.c.abs());
            push_t_power(&mut letters, &n);
            letters.push(Letter::S);
            // M' = S⁻¹ T⁻ⁿ M ; S⁻¹ = -S, sign ignored in PSL.
            let a = &m.a - &n * &m.c;
            let b = &m.b - &n * &m.d;
            m = UnimodularMatrix::raw(-&m.c, -&m.d, a, b);
        }
        // m = ±(1 b; 0 1)
        let shift = &m.b * &m.a;
        push_t_power(&mut letters, &shift);
        GeneratorWord(letters)
    }
}

fn push_t_power(letters: &mut Vec<Letter>, n: &BigInt) {
    let count = n.abs().to_usize().expect("T-run length fits in usize");
    let letter = if n.is_negative() { Letter::TInv } else { Letter::T };
    letters.extend(std::iter::repeat(letter).take(count));
}

impl fmt::Display for ProjectiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±{}", self.0)
    }
}

impl fmt::Debug for ProjectiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<UnimodularMatrix> for ProjectiveClass {
    fn from(m: UnimodularMatrix) -> Self {
        Self::new(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    S,
    T,
    TInv,
}

impl Letter {
    pub fn matrix(self) -> UnimodularMatrix {
        match self {
            Letter::S => UnimodularMatrix::s(),
            Letter::T => UnimodularMatrix::t(),
            Letter::TInv => UnimodularMatrix::from_i64([1, -1, 0, 1]),
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            Letter::S => Letter::S,
            Letter::T => Letter::TInv,
            Letter::TInv => Letter::T,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::S => "S",
            Letter::T => "T",
            Letter::TInv => "T⁻¹",
        })
    }
}

/// A word in the generators `S`, `T`, `T⁻¹` of PSL(2,Z).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GeneratorWord(pub Vec<Letter>);

impl GeneratorWord {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn evaluate(&self) -> UnimodularMatrix {
        self.0
            .iter()
            .fold(UnimodularMatrix::identity(), |acc, l| acc.compose(&l.matrix()))
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A point of `P¹(Q) = Q ∪ {∞}`; finite values are reduced with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedRational {
    Finite { num: BigInt, den: BigInt },
    Infinity,
}

impl ExtendedRational {
    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::Finite {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::from_bigints(num.into(), den.into()).unwrap_or(Self::Infinity)
    }

    /// `None` exactly when `num = den = 0`; a zero denominator yields `∞`.
    fn from_bigints(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            return if num.is_zero() { None } else { Some(Self::Infinity) };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Some(Self::Finite { num, den })
    }

    /// Homogeneous coordinates `(p, q)` with `q ≥ 0` (`(1, 0)` for `∞`).
    pub fn homogeneous(&self) -> (BigInt, BigInt) {
        match self {
            Self::Infinity => (BigInt::one(), BigInt::zero()),
            Self::Finite { num, den } => (num.clone(), den.clone()),
        }
    }

    pub fn negate(&self) -> Self {
        match self {
            Self::Infinity => Self::Infinity,
            Self::Finite { num, den } => Self::Finite {
                num: -num,
                den: den.clone(),
            },
        }
    }

    pub fn transform(&self, m: &UnimodularMatrix) -> Self {
        let (p, q) = self.homogeneous();
        let num = &m.a * &p + &m.b * &q;
        let den = &m.c * &p + &m.d * &q;
        Self::from_bigints(num, den).expect("unimodular image of a primitive vector is nonzero")
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Infinity => f64::INFINITY,
            Self::Finite { num, den } => {
                num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN)
            }
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => f.write_str("inf"),
            Self::Finite { num, den } if den.is_one() => write!(f, "{num}"),
            Self::Finite { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl fmt::Debug for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A point `x + iy` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint {
    x: f64,
    y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::NotInUpperHalfPlane { x, y });
        }
        Ok(Self { x, y })
    }

    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    fn from_complex(z: Complex64) -> Self {
        // Möbius images of half-plane points stay in the half-plane; clamp
        // only against rounding to exactly zero.
        Self {
            x: z.re,
            y: z.im.max(f64::MIN_POSITIVE),
        }
    }

    /// The reflection `z ↦ -z̄`.
    pub fn reflect(&self) -> Self {
        Self {
            x: -self.x,
            y: self.y,
        }
    }

    pub fn transform(&self, m: &UnimodularMatrix) -> Self {
        let [a, b, c, d] = m.entries().map(|e| e.to_f64().unwrap_or(f64::NAN));
        let z = self.to_complex();
        Self::from_complex((z * a + b) / (z * c + d))
    }

    pub fn distance_to(&self, other: &Self) -> f64 {
        (self.to_complex() - other.to_complex()).norm()
    }
}

impl fmt::Display for HalfPlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.x, self.y)
    }
}

/// Checks `σ(A·σ(z)) = S(A)·z` numerically, where `σ(z) = -z̄`.
pub fn semilinear_identity_check(a: &ProjectiveClass, z: HalfPlanePoint, tol: f64) -> bool {
    let lhs = a.act_point(z.reflect()).reflect();
    let rhs = ProjectiveClass::new(a.representative().s_involution()).act_point(z);
    let scale = 1.0_f64.max(lhs.to_complex().norm());
    lhs.distance_to(&rhs) <= tol * scale
}

/// Result of reducing a point into the standard fundamental domain.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub point: HalfPlanePoint,
    /// Maps the input point to `point`.
    pub transform: ProjectiveClass,
}

/// Reduces `τ` into `{|Re z| ≤ 1/2, |z| ≥ 1}`.
pub fn reduce_to_fundamental_domain(tau: HalfPlanePoint) -> Reduction {
    const EPS: f64 = 1e-14;
    let mut acc = UnimodularMatrix::identity();
    let mut z = tau;
    // Each inversion strictly increases Im z by a factor bounded away from 1
    // except on a measure-zero set; the iteration cap guards against NaN input.
    for _ in 0..10_000 {
        let n = z.x.round();
        if n != 0.0 {
            let shift = UnimodularMatrix::t_pow(BigInt::from(-(n as i64)));
            z = HalfPlanePoint::from_complex(Complex64::new(z.x - n, z.y));
            acc = shift.compose(&acc);
        }
        if z.x * z.x + z.y * z.y < 1.0 - EPS {
            let w = -z.to_complex().inv();
            z = HalfPlanePoint::from_complex(w);
            acc = UnimodularMatrix::s().compose(&acc);
        } else {
            break;
        }
    }
    // x.round() sends ±0.5 away from zero; keep the boundary value.
    Reduction {
        point: z,
        transform: ProjectiveClass::new(acc),
    }
}
