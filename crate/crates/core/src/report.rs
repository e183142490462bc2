//! Serializable reports shared by the command-line tool and the tests.
//!
//! Field order is fixed by the struct definitions and every list is built in
//! a deterministic order, so equal inputs give byte-identical JSON.

use std::fmt;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::curve::{is_definable_over_r, j_normalized, real_component_count};
use crate::error::Result;
use crate::fibers::{chi_identity, enumerate_lifts, FiberConfiguration};
use crate::psl2::HalfPlanePoint;
use crate::subgroup::{CosetRepresentation, SubgroupInvariants};
use crate::surface::{ExtremalModel, TopologyType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspSummary {
    pub representative: String,
    pub width: usize,
    pub real: bool,
}

/// Invariants of one extremal model `X_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaKReport {
    pub k: u32,
    pub mu: usize,
    pub cusps: Vec<CuspSummary>,
    pub fibers: FiberConfiguration,
    #[serde(rename = "chi_O")]
    pub chi_o: i64,
    pub h11: i64,
    pub h1: i64,
    pub h1_alg: i64,
    pub orientable: bool,
    pub components: i64,
    #[serde(rename = "type")]
    pub type_tag: TopologyType,
}

impl GammaKReport {
    pub fn new(x: &ExtremalModel) -> Self {
        Self {
            k: x.group.k(),
            mu: x.group.representation().size(),
            cusps: x
                .model
                .cusps()
                .iter()
                .map(|c| CuspSummary {
                    representative: c.representative.to_string(),
                    width: c.width,
                    real: c.is_real,
                })
                .collect(),
            fibers: x.model.config().clone(),
            chi_o: x.hodge.chi_o,
            h11: x.hodge.h11.expect("extremal models are regular"),
            h1: x.topology.h1,
            h1_alg: x.topology.h1_alg,
            orientable: x.topology.orientable,
            components: x.topology.connected_components,
            type_tag: x.topology.type_tag,
        }
    }

    /// Checks every claimed property of `X_k`; returns the failures.
    pub fn failures(&self) -> Vec<String> {
        let k = i64::from(self.k);
        let mut out = Vec::new();
        let mut expect = |what: &str, got: i64, want: i64| {
            if got != want {
                out.push(format!("k={k}: {what} = {got}, expected {want}"));
            }
        };
        expect("mu", self.mu as i64, 6 * (k - 1));
        expect("cusps", self.cusps.len() as i64, k + 1);
        expect("chi_O", self.chi_o, k);
        expect("h11", self.h11, 10 * k);
        expect("h1", self.h1, 10 * k);
        expect("h1_alg", self.h1_alg, 10 * k);
        expect("components", self.components, 1);
        let want = if k % 2 == 0 {
            TopologyType::S(5 * k)
        } else {
            TopologyType::V(10 * k)
        };
        if self.type_tag != want {
            out.push(format!("k={k}: type {} expected {want}", self.type_tag));
        }
        if !self.fibers.all_star() {
            out.push(format!("k={k}: fibers {} are not all I*", self.fibers));
        }
        if self.cusps.iter().any(|c| c.width % 2 != 0) {
            out.push(format!("k={k}: odd cusp width"));
        }
        out
    }
}

impl fmt::Display for GammaKReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gamma_{}: index {}, {} cusps", self.k, self.mu, self.cusps.len())?;
        for c in &self.cusps {
            writeln!(
                f,
                "  cusp {:>6}  width {:>3}{}",
                c.representative,
                c.width,
                if c.real { "  real" } else { "" }
            )?;
        }
        writeln!(f, "fibers   {}", self.fibers)?;
        writeln!(f, "chi(O)   {}", self.chi_o)?;
        writeln!(f, "h11      {}", self.h11)?;
        writeln!(f, "h1       {}", self.h1)?;
        writeln!(f, "h1_alg   {}", self.h1_alg)?;
        writeln!(f, "real part: {} component(s), {}", self.components, self.type_tag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftRow {
    pub signs: Vec<i8>,
    pub fibers: FiberConfiguration,
    pub nu_star: usize,
    /// `None` when `μ + 6ν` is not divisible by 12.
    #[serde(rename = "chi_O")]
    pub chi_o: Option<i64>,
    pub h11: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftTable {
    pub raw_count: usize,
    pub distinct_fiber_multisets: usize,
    pub classical_count: usize,
    pub note: Option<String>,
    pub lifts: Vec<LiftRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub invariants: SubgroupInvariants,
    pub cusps: Vec<CuspSummary>,
    /// Present for torsion-free subgroups of genus zero.
    pub lifts: Option<LiftTable>,
    pub notes: Vec<String>,
}

pub fn analyze(rep: &CosetRepresentation) -> Result<AnalysisReport> {
    let invariants = rep.invariants();
    let cusps = rep
        .cusps()
        .into_iter()
        .map(|c| CuspSummary {
            representative: c.representative.to_string(),
            width: c.width,
            real: c.is_real,
        })
        .collect();
    let mut notes = Vec::new();
    let lifts = if !invariants.torsion_free {
        notes.push("subgroup has torsion; no elliptic modular surface".to_string());
        None
    } else if invariants.genus != 0 {
        notes.push(format!(
            "base curve has genus {}; lift enumeration needs genus 0",
            invariants.genus
        ));
        None
    } else {
        let system = rep.parabolic_generator_system()?;
        let e = enumerate_lifts(&system)?;
        let q0 = invariants.genus == 0;
        let lifts = e
            .lifts
            .iter()
            .map(|l| {
                let chi = chi_identity(&l.configuration).ok();
                LiftRow {
                    signs: l.assignment.signs().to_vec(),
                    fibers: l.configuration.clone(),
                    nu_star: l.configuration.star_count(),
                    chi_o: chi,
                    h11: chi.filter(|_| q0).map(|c| 10 * c),
                }
            })
            .collect();
        if let Some(n) = &e.note {
            notes.push(n.clone());
        }
        Some(LiftTable {
            raw_count: e.raw_count,
            distinct_fiber_multisets: e.distinct_fiber_multisets,
            classical_count: e.classical_count,
            note: e.note,
            lifts,
        })
    };
    Ok(AnalysisReport {
        invariants,
        cusps,
        lifts,
        notes,
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = &self.invariants;
        writeln!(
            f,
            "index {}, genus {}, {} cusps, e2 = {}, e3 = {}",
            inv.index, inv.genus, inv.cusps, inv.e2, inv.e3
        )?;
        writeln!(
            f,
            "torsion-free: {}, stable under the real structure: {}",
            inv.torsion_free, inv.s_stable
        )?;
        for c in &self.cusps {
            writeln!(
                f,
                "  cusp {:>6}  width {:>3}{}",
                c.representative,
                c.width,
                if c.real { "  real" } else { "" }
            )?;
        }
        if let Some(t) = &self.lifts {
            writeln!(
                f,
                "lifts: {} raw, {} distinct fiber multisets",
                t.raw_count, t.distinct_fiber_multisets
            )?;
            for row in &t.lifts {
                let signs: String = row.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
                let fmt_opt = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
                writeln!(
                    f,
                    "  {signs}  {}  nu(I*) = {}  chi(O) = {}  h11 = {}",
                    row.fibers,
                    row.nu_star,
                    fmt_opt(row.chi_o),
                    fmt_opt(row.h11)
                )?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveReport {
    pub tau: [f64; 2],
    pub j_normalized: [f64; 2],
    pub definable_over_r: bool,
    pub witness: Option<[f64; 2]>,
    /// Components of the real part, when `2·Re τ` is an integer.
    pub components: Option<u8>,
    pub ambiguous_at_j_equals_one: bool,
}

pub fn curve_report(re: Rational64, im: f64, tol: f64) -> Result<CurveReport> {
    let x = re.to_f64().expect("finite rational");
    let tau = HalfPlanePoint::new(x, im)?;
    let j = j_normalized(tau).value();
    let def = is_definable_over_r(tau, tol);
    let class = if (re * 2).is_integer() {
        Some(real_component_count(re, im, tol)?)
    } else {
        None
    };
    Ok(CurveReport {
        tau: [x, im],
        j_normalized: [j.re, j.im],
        definable_over_r: def.definable,
        witness: def.witness.map(|w| [w.x(), w.y()]),
        components: class.map(|c| c.components.get()),
        ambiguous_at_j_equals_one: class.is_some_and(|c| c.ambiguous_at_j_equals_one),
    })
}

impl fmt::Display for CurveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y] = self.tau;
        let [jr, ji] = self.j_normalized;
        writeln!(f, "tau = {x} + {y}i")?;
        if ji < 0.0 {
            writeln!(f, "j/1728 = {jr} - {}i", -ji)?;
        } else {
            writeln!(f, "j/1728 = {jr} + {ji}i")?;
        }
        writeln!(f, "definable over R: {}", self.definable_over_r)?;
        if let Some([x, y]) = self.witness {
            writeln!(f, "real witness: {x} + {y}i")?;
        }
        if let Some(n) = self.components {
            writeln!(f, "real components: {n}")?;
        }
        if self.ambiguous_at_j_equals_one {
            writeln!(f, "j = 1728: both real forms occur")?;
        }
        Ok(())
    }
}
