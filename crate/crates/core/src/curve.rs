//! The modular j-function and real forms of genus-one curves `C(τ) = C/(Z + τZ)`.
//!
//! j is normalized by `1/1728`, so that `j(i) = 1` and `j(e^{iπ/3}) = 0`; the
//! classical value is available through [`NormalizedJValue::classical`].
//! Whether the real locus of `C(τ)` has one or two components is decided by
//! the shape of the lattice (`Re τ ∈ Z` rectangular, `2 Re τ` odd rhombic),
//! a standard fact used here as the converse of the j-threshold bounds.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::psl2::{reduce_to_fundamental_domain, HalfPlanePoint};

/// Tolerance for "j is real" and for the `j ≥ 1` / `j ≤ 1` thresholds.
pub const DEFAULT_J_TOLERANCE: f64 = 1e-8;

/// Number of q-expansion coefficients kept (exponents -1..=COEFFS-2).
const COEFFS: usize = 48;

/// `j(τ)/1728`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedJValue(pub Complex64);

impl NormalizedJValue {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn classical(&self) -> Complex64 {
        self.0 * 1728.0
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.0.im.abs() <= tol * self.0.norm().max(1.0)
    }
}

/// Coefficients `c(n)`, `n = -1, 0, 1, …`, of `j = Σ c(n) qⁿ`, computed
/// exactly from `j = E₄³ / (q ∏(1-qⁿ)²⁴)`.
fn j_coefficients() -> &'static [f64] {
    static COEFFS_CELL: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS_CELL.get_or_init(|| {
        let n = COEFFS;
        let mut e4 = vec![BigInt::zero(); n];
        e4[0] = BigInt::from(1);
        for (m, c) in e4.iter_mut().enumerate().skip(1) {
            let sigma3: u64 = (1..=m as u64).filter(|d| m as u64 % d == 0).map(|d| d * d * d).sum();
            *c = BigInt::from(240) * sigma3;
        }
        let e4_cubed = mul_series(&mul_series(&e4, &e4), &e4);

        // ∏ (1 - qᵐ)²⁴
        let mut eta24 = vec![BigInt::zero(); n];
        eta24[0] = BigInt::from(1);
        for m in 1..n {
            for _ in 0..24 {
                for i in (m..n).rev() {
                    let sub = eta24[i - m].clone();
                    eta24[i] -= sub;
                }
            }
        }
        // quotient E₄³ / ∏(1-qᵐ)²⁴; leading term 1 so division is exact
        let mut quot = vec![BigInt::zero(); n];
        for i in 0..n {
            let mut acc = e4_cubed[i].clone();
            for k in 1..=i {
                acc -= &eta24[k] * &quot[i - k];
            }
            quot[i] = acc;
        }
        quot.iter().map(|c| c.to_f64().expect("finite")).collect()
    })
}

fn mul_series(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

/// Integer coefficients of the q-expansion, for inspection and tests.
pub fn j_coefficient(n: i32) -> Option<f64> {
    j_coefficients().get(usize::try_from(n + 1).ok()?).copied()
}

/// Classical `j(τ)` through the q-expansion at the reduced point.
pub fn j_classical(tau: HalfPlanePoint) -> Complex64 {
    let reduced = reduce_to_fundamental_domain(tau).point;
    let q = (Complex64::i() * 2.0 * std::f64::consts::PI * reduced.to_complex()).exp();
    let coeffs = j_coefficients();
    let mut sum = q.inv() * coeffs[0];
    let mut power = Complex64::new(1.0, 0.0);
    for &c in &coeffs[1..] {
        let term = power * c;
        sum += term;
        if term.norm() < 1e-15 * sum.norm() {
            break;
        }
        power *= q;
    }
    sum
}

pub fn j_normalized(tau: HalfPlanePoint) -> NormalizedJValue {
    NormalizedJValue(j_classical(tau) / 1728.0)
}

/// Reduced point with the boundary identifications `x = -1/2 ~ x = 1/2` and
/// `z ~ -z̄` on the unit circle resolved toward `Re z ≥ 0`.
fn canonical_point(tau: HalfPlanePoint, tol: f64) -> HalfPlanePoint {
    let z = reduce_to_fundamental_domain(tau).point;
    let (mut x, y) = (z.x(), z.y());
    if (x + 0.5).abs() <= tol {
        x = 0.5;
    }
    if (x * x + y * y - 1.0).abs() <= tol && x < 0.0 {
        x = -x;
    }
    HalfPlanePoint::new(x, y).expect("reduced point is in the half-plane")
}

/// Whether `τ` and `τ'` lie in the same PSL(2,Z)-orbit.
///
/// Decided by comparing reduced points and cross-checked against the j-values;
/// disagreement between the two routes is reported as an error.
pub fn equivalent(tau: HalfPlanePoint, other: HalfPlanePoint, tol: f64) -> Result<bool> {
    let (a, b) = (canonical_point(tau, tol), canonical_point(other, tol));
    let geometric = a.distance_to(&b) <= tol * a.to_complex().norm().max(1.0);
    let (ja, jb) = (j_normalized(tau).0, j_normalized(other).0);
    let numeric = (ja - jb).norm() <= tol * ja.norm().max(1.0);
    if geometric != numeric {
        return Err(Error::Inconsistent(format!(
            "reduction says {geometric} but j-values {ja} and {jb} say {numeric}"
        )));
    }
    Ok(geometric)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Definability {
    pub definable: bool,
    /// An equivalent point with `2 Re τ' ∈ Z`, when one was found.
    pub witness: Option<HalfPlanePoint>,
}

/// Whether `C(τ)` admits a real structure, i.e. whether j(τ) is real.
pub fn is_definable_over_r(tau: HalfPlanePoint, tol: f64) -> Definability {
    let definable = j_normalized(tau).is_real(tol);
    let z = canonical_point(tau, tol);
    let (x, y) = (z.x(), z.y());
    let witness = if x.abs() <= tol {
        HalfPlanePoint::new(0.0, y).ok()
    } else if (x - 0.5).abs() <= tol {
        HalfPlanePoint::new(0.5, y).ok()
    } else if (x * x + y * y - 1.0).abs() <= tol {
        // (0 1; -1 1) maps the unit arc onto the line Re = 1/2
        let w = (Complex64::new(1.0, 0.0) - z.to_complex()).inv();
        HalfPlanePoint::new(0.5, w.im).ok()
    } else {
        None
    };
    Definability {
        definable,
        witness: if definable { witness } else { None },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentCount {
    One,
    Two,
}

impl ComponentCount {
    pub fn get(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RealCurveClass {
    pub definable_over_r: bool,
    /// Components of `C(τ)(R)` for the real structure from complex conjugation.
    pub components: ComponentCount,
    /// Set when `j = 1`: both real forms (one and two components) exist for
    /// this complex curve, and `components` reports the one given by the
    /// lattice shape of the input.
    pub ambiguous_at_j_equals_one: bool,
    pub j: f64,
}

/// Real components of `C(τ)` for `τ = re + i·im` with `2·re ∈ Z`.
pub fn real_component_count(re: Rational64, im: f64, tol: f64) -> Result<RealCurveClass> {
    let twice = re * 2;
    if !twice.is_integer() {
        return Err(Error::Precondition(format!("2·Re τ = {twice} is not an integer")));
    }
    let x = re.to_f64().expect("finite rational");
    let tau = HalfPlanePoint::new(x, im)?;
    let j = j_normalized(tau);
    if !j.is_real(tol) {
        return Err(Error::Inconsistent(format!("j({tau}) = {} is not real", j.0)));
    }
    let j = j.0.re;
    let components = if re.is_integer() {
        ComponentCount::Two
    } else {
        ComponentCount::One
    };
    let scale = j.abs().max(1.0);
    let consistent = match components {
        ComponentCount::Two => j >= 1.0 - tol * scale,
        ComponentCount::One => j <= 1.0 + tol * scale,
    };
    if !consistent {
        return Err(Error::Inconsistent(format!(
            "{} components with normalized j = {j}",
            components.get()
        )));
    }
    Ok(RealCurveClass {
        definable_over_r: true,
        components,
        ambiguous_at_j_equals_one: (j - 1.0).abs() <= tol,
        j,
    })
}
