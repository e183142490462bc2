//! Kodaira fibers `I_m` / `I*_m` over the cusps, their real forms, and the
//! enumeration of SL(2,Z) lifts of the monodromy.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::psl2::UnimodularMatrix;
use crate::subgroup::ParabolicGenerator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberKind {
    I,
    IStar,
}

/// A singular fiber at a pole of the functional invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberType {
    pub kind: FiberKind,
    pub m: u32,
}

impl FiberType {
    pub fn new(kind: FiberKind, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("fiber multiplicity must be at least 1".into()));
        }
        Ok(Self { kind, m })
    }

    pub fn i(m: u32) -> Self {
        Self::new(FiberKind::I, m).expect("m ≥ 1")
    }

    pub fn i_star(m: u32) -> Self {
        Self::new(FiberKind::IStar, m).expect("m ≥ 1")
    }

    pub fn is_star(&self) -> bool {
        self.kind == FiberKind::IStar
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FiberKind::I => write!(f, "I{}", self.m),
            FiberKind::IStar => write!(f, "I*{}", self.m),
        }
    }
}

impl FromStr for FiberType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("unrecognized fiber type {s:?}"));
        let (kind, rest) = match s.strip_prefix("I*") {
            Some(rest) => (FiberKind::IStar, rest),
            None => (FiberKind::I, s.strip_prefix('I').ok_or_else(bad)?),
        };
        Self::new(kind, rest.parse().map_err(|_| bad())?)
    }
}

impl Serialize for FiberType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FiberType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Topological Euler characteristic of the complex fiber.
pub fn chi_complex(f: FiberType) -> i64 {
    match f.kind {
        FiberKind::I => i64::from(f.m),
        FiberKind::IStar => i64::from(f.m) + 6,
    }
}

/// Irreducible components of the fiber not meeting the zero section.
pub fn components_off_section(f: FiberType) -> i64 {
    match f.kind {
        FiberKind::I => i64::from(f.m) - 1,
        FiberKind::IStar => i64::from(f.m) + 4,
    }
}

/// Components of the real part of nearby smooth real fibers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NearbyComponents {
    One,
    Two,
    /// The count changes when crossing the singular fiber.
    Varies,
}

/// One possible real form of a real singular fiber, with a real section.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RealFiberForm {
    pub fiber: FiberType,
    pub nearby: NearbyComponents,
    /// Euler characteristic of the real part of the singular fiber.
    pub chi_real: i64,
}

/// All real forms for a fiber type, following the classification of real
/// singular fibers of types `I_m` and `I*_m`.
pub fn real_forms(f: FiberType) -> Vec<RealFiberForm> {
    use NearbyComponents::*;
    let m = i64::from(f.m);
    let even = f.m % 2 == 0;
    let rows: Vec<(NearbyComponents, i64)> = match (f.kind, even) {
        (FiberKind::IStar, true) => vec![(Two, -m - 4), (One, -m - 2)],
        (FiberKind::IStar, false) => vec![(Varies, -m - 4), (Varies, -m - 2)],
        (FiberKind::I, true) => vec![(Two, -m), (Two, 0), (One, -m), (One, 0)],
        (FiberKind::I, false) => vec![(Varies, -m), (Varies, 1)],
    };
    rows.into_iter()
        .map(|(nearby, chi_real)| RealFiberForm {
            fiber: f,
            nearby,
            chi_real,
        })
        .collect()
}

/// Singular fibers of an elliptic surface, indexed by cusp.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiberConfiguration {
    fibers: Vec<FiberType>,
}

impl FiberConfiguration {
    pub fn new(fibers: Vec<FiberType>) -> Self {
        Self { fibers }
    }

    pub fn fibers(&self) -> &[FiberType] {
        &self.fibers
    }

    pub fn len(&self) -> usize {
        self.fibers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    /// Number of fibers of type `I*`.
    pub fn star_count(&self) -> usize {
        self.fibers.iter().filter(|f| f.is_star()).count()
    }

    /// `Σ m_l`, the degree of the functional invariant.
    pub fn degree(&self) -> i64 {
        self.fibers.iter().map(|f| i64::from(f.m)).sum()
    }

    pub fn euler_sum(&self) -> i64 {
        self.fibers.iter().map(|&f| chi_complex(f)).sum()
    }

    /// Fiber types as a sorted multiset.
    pub fn multiset(&self) -> Vec<FiberType> {
        let mut v = self.fibers.clone();
        v.sort();
        v
    }

    pub fn all_star(&self) -> bool {
        self.fibers.iter().all(FiberType::is_star)
    }
}

impl fmt::Display for FiberConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fibers.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `χ(O_X) = (μ + 6ν(I*)) / 12`, cross-checked against `Σ χ(C_u) / 12`.
pub fn chi_identity(config: &FiberConfiguration) -> Result<i64> {
    let twelve_chi = config.degree() + 6 * config.star_count() as i64;
    if twelve_chi % 12 != 0 {
        return Err(Error::NonIntegralChi(twelve_chi));
    }
    if config.euler_sum() != twelve_chi {
        return Err(Error::Inconsistent(format!(
            "Euler sum {} ≠ μ + 6ν = {twelve_chi}",
            config.euler_sum()
        )));
    }
    Ok(twelve_chi / 12)
}

/// Signs `ε_l` multiplying the trace-`+2` representatives of the parabolic
/// generators, in the order of the generator system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LiftAssignment {
    signs: Vec<i8>,
}

impl LiftAssignment {
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }
}

/// One lift `ρ'` of the monodromy to SL(2,Z).
#[derive(Clone, Debug)]
pub struct Lift {
    pub assignment: LiftAssignment,
    /// Lifted local monodromies `ε_l·M_l`, in generator-system order.
    pub monodromies: Vec<UnimodularMatrix>,
    /// Fibers indexed by cusp.
    pub configuration: FiberConfiguration,
}

#[derive(Clone, Debug)]
pub struct LiftEnumeration {
    pub lifts: Vec<Lift>,
    /// `2^{t-1}` sign choices on the free generators.
    pub raw_count: usize,
    /// Distinct sorted fiber-type multisets among the lifts.
    pub distinct_fiber_multisets: usize,
    /// `t - 1`, the classical count of lifts trivial on the loops around
    /// `J = 0, 1`.
    pub classical_count: usize,
    /// Present when `raw_count ≠ classical_count`.
    pub note: Option<String>,
}

/// Every lift of an ordered parabolic generator system with `P₁···P_t = ±1`.
///
/// The first `t - 1` signs are free; the last lifted monodromy is forced to be
/// the inverse of the product of the others, so the lifted product is exactly
/// the identity. The lift is a homomorphism from a free group that sections
/// the projection to PSL(2,Z), hence `-1` is never in its image.
pub fn enumerate_lifts(system: &[ParabolicGenerator]) -> Result<LiftEnumeration> {
    let t = system.len();
    if t == 0 {
        return Err(Error::Precondition("empty generator system".into()));
    }
    if let Some(p) = system.iter().find(|p| !p.matrix.is_parabolic()) {
        return Err(Error::Precondition(format!("{} is not parabolic", p.matrix)));
    }
    let base: Vec<UnimodularMatrix> = system
        .iter()
        .map(|p| {
            if p.matrix.trace() > 0.into() {
                p.matrix.clone()
            } else {
                p.matrix.negate()
            }
        })
        .collect();
    let total = base.iter().fold(UnimodularMatrix::identity(), |acc, m| acc.compose(m));
    if !total.is_central() {
        return Err(Error::Precondition(
            "generator product is not the identity in PSL(2,Z)".into(),
        ));
    }
    let cusp_count = system.iter().map(|p| p.cusp).max().unwrap_or(0) + 1;

    let free = t - 1;
    let raw_count = 1usize << free;
    let mut lifts = Vec::with_capacity(raw_count);
    for bits in 0..raw_count {
        let mut signs: Vec<i8> = (0..free)
            .map(|l| if bits >> l & 1 == 1 { -1 } else { 1 })
            .collect();
        let mut monodromies: Vec<UnimodularMatrix> = base[..free]
            .iter()
            .zip(&signs)
            .map(|(m, &e)| if e < 0 { m.negate() } else { m.clone() })
            .collect();
        let partial = monodromies
            .iter()
            .fold(UnimodularMatrix::identity(), |acc, m| acc.compose(m));
        let last = partial.inverse();
        let last_sign = if last == base[free] {
            1
        } else if last == base[free].negate() {
            -1
        } else {
            return Err(Error::Inconsistent("forced lift is not ±M_t".into()));
        };
        signs.push(last_sign);
        monodromies.push(last);

        let product = monodromies
            .iter()
            .fold(UnimodularMatrix::identity(), |acc, m| acc.compose(m));
        assert!(product.is_identity(), "lifted monodromy product must be 1");
        debug_assert!(monodromies.iter().all(|m| !m.is_central()));

        let mut fibers = vec![None; cusp_count];
        for (p, m) in system.iter().zip(&monodromies) {
            let nf = m.parabolic_normal_form()?;
            let kind = if nf.sign > 0 { FiberKind::I } else { FiberKind::IStar };
            let mult = nf.shift.magnitude().to_u32().expect("multiplicity fits in u32");
            fibers[p.cusp] = Some(FiberType::new(kind, mult)?);
        }
        let fibers = fibers
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Precondition("generator system misses a cusp".into()))?;
        lifts.push(Lift {
            assignment: LiftAssignment { signs },
            monodromies,
            configuration: FiberConfiguration::new(fibers),
        });
    }

    let distinct: BTreeSet<Vec<FiberType>> =
        lifts.iter().map(|l| l.configuration.multiset()).collect();
    let classical_count = t - 1;
    let note = (raw_count != classical_count).then(|| {
        format!(
            "raw sign-lift count {raw_count} = 2^(t-1) differs from the classical count t-1 = {classical_count}; \
             distinct fiber multisets: {}",
            distinct.len()
        )
    });
    Ok(LiftEnumeration {
        lifts,
        raw_count,
        distinct_fiber_multisets: distinct.len(),
        classical_count,
        note,
    })
}
