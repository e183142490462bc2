//! Numerical invariants of the real elliptic modular surface attached to a
//! subgroup and a lift of its monodromy.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fibers::{
    chi_complex, chi_identity, components_off_section, enumerate_lifts, real_forms,
    FiberConfiguration, FiberKind, Lift, LiftAssignment, NearbyComponents, RealFiberForm,
};
use crate::gamma::GammaK;
use crate::subgroup::{CosetRepresentation, CuspClass};

/// The elliptic modular surface `X → H/Γ` over a genus-`g` base, described
/// by its singular fibers and real-structure data.
#[derive(Clone, Debug)]
pub struct SurfaceModel {
    base: CosetRepresentation,
    cusps: Vec<CuspClass>,
    genus: usize,
    lift: LiftAssignment,
    config: FiberConfiguration,
    cusps_all_real: bool,
    has_real_section: bool,
    real_part_nonempty: bool,
    multiple_fiber: bool,
}

impl SurfaceModel {
    /// Assembles the model of the modular construction, which always carries
    /// a real zero section.
    pub fn new(base: &CosetRepresentation, lift: &Lift) -> Result<Self> {
        let inv = base.invariants();
        let cusps = base.cusps();
        let config = lift.configuration.clone();
        if config.len() != cusps.len() {
            return Err(Error::Precondition(format!(
                "{} fibers for {} cusps",
                config.len(),
                cusps.len()
            )));
        }
        for (f, c) in config.fibers().iter().zip(&cusps) {
            if f.m as usize != c.width {
                return Err(Error::Precondition(format!(
                    "fiber {f} over a cusp of width {}",
                    c.width
                )));
            }
        }
        if config.degree() != inv.index as i64 {
            return Err(Error::Inconsistent(format!(
                "Σm = {} ≠ μ = {}",
                config.degree(),
                inv.index
            )));
        }
        let cusps_all_real = inv.s_stable && cusps.iter().all(|c| c.is_real);
        Ok(Self {
            base: base.clone(),
            genus: inv.genus,
            cusps,
            lift: lift.assignment.clone(),
            config,
            cusps_all_real,
            has_real_section: inv.s_stable,
            // a real section meets every real fiber
            real_part_nonempty: inv.s_stable,
            multiple_fiber: false,
        })
    }

    pub fn base(&self) -> &CosetRepresentation {
        &self.base
    }

    pub fn cusps(&self) -> &[CuspClass] {
        &self.cusps
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn lift(&self) -> &LiftAssignment {
        &self.lift
    }

    pub fn config(&self) -> &FiberConfiguration {
        &self.config
    }

    pub fn cusps_all_real(&self) -> bool {
        self.cusps_all_real
    }

    pub fn has_real_section(&self) -> bool {
        self.has_real_section
    }

    pub fn real_part_nonempty(&self) -> bool {
        self.real_part_nonempty
    }

    pub fn with_real_section(mut self, yes: bool) -> Self {
        self.has_real_section = yes;
        self
    }

    pub fn with_real_part_nonempty(mut self, yes: bool) -> Self {
        self.real_part_nonempty = yes;
        self
    }

    /// Marks the model as carrying a multiple fiber (only for synthetic input;
    /// the modular construction never produces one).
    pub fn with_multiple_fiber(mut self, yes: bool) -> Self {
        self.multiple_fiber = yes;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeInvariants {
    pub q: i64,
    pub chi_o: i64,
    /// `None` for irregular surfaces.
    pub h11: Option<i64>,
    pub e_topological: i64,
}

impl HodgeInvariants {
    pub fn is_regular(&self) -> bool {
        self.q == 0
    }
}

pub fn hodge_invariants(model: &SurfaceModel) -> Result<HodgeInvariants> {
    let chi_o = chi_identity(&model.config)?;
    let q = model.genus as i64;
    let e_topological: i64 = model.config.fibers().iter().map(|&f| chi_complex(f)).sum();
    if e_topological != 12 * chi_o {
        return Err(Error::Inconsistent(format!("e = {e_topological} ≠ 12χ = {}", 12 * chi_o)));
    }
    Ok(HodgeInvariants {
        q,
        chi_o,
        h11: (q == 0).then_some(10 * chi_o),
        e_topological,
    })
}

/// Relatively minimal with no multiple fibers. Fibers of type `I`/`I*` on a
/// surface with a section satisfy this, so only the synthetic flag matters.
pub fn is_normalized(model: &SurfaceModel) -> bool {
    !model.multiple_fiber
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientability {
    Orientable,
    NonOrientableNonempty,
    Undetermined,
}

/// Parity rule from `K_X = (χ - 2)F`: the real part is orientable when `χ`
/// is even, and a real section forces non-orientability when `χ` is odd.
pub fn orientability(model: &SurfaceModel) -> Orientability {
    if model.genus != 0 || !is_normalized(model) {
        return Orientability::Undetermined;
    }
    let Ok(chi) = chi_identity(&model.config) else {
        return Orientability::Undetermined;
    };
    if chi % 2 == 0 && model.real_part_nonempty {
        Orientability::Orientable
    } else if chi % 2 != 0 && model.has_real_section {
        Orientability::NonOrientableNonempty
    } else {
        Orientability::Undetermined
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Connectedness {
    Connected,
    Inconclusive { bound: i64 },
}

/// Comessatti: `2·#X(R) - h₁ ≤ h¹¹ - 2(r - 1)`, with `r ≥ r_lower`.
pub fn comessatti_connectedness(
    h1: i64,
    h11: i64,
    r_lower: i64,
    real_part_nonempty: bool,
) -> Result<Connectedness> {
    if r_lower > h11 {
        return Err(Error::Precondition(format!("r_lower = {r_lower} exceeds h11 = {h11}")));
    }
    let bound = (h1 + h11 - 2 * (r_lower - 1)).div_euclid(2);
    Ok(if bound < 2 && real_part_nonempty {
        Connectedness::Connected
    } else {
        Connectedness::Inconclusive { bound }
    })
}

/// Closed surface type: orientable of genus `g` or a sum of `q` projective planes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopologyType {
    S(i64),
    V(i64),
}

impl fmt::Display for TopologyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::S(g) => write!(f, "S_{g}"),
            Self::V(q) => write!(f, "V_{q}"),
        }
    }
}

impl Serialize for TopologyType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RealTopologyReport {
    pub connected_components: i64,
    pub h1: i64,
    pub h1_alg: i64,
    pub orientable: bool,
    pub type_tag: TopologyType,
}

/// Real topology when every fiber is `I*_m` with `m` even, all cusps are real
/// and the zero section is real.
///
/// Smooth real fibers then all have two components, so each singular fiber
/// takes the real form with `χ(C(R)) = -m - 4`. The algebraic part counts the
/// off-section components of every fiber plus the section and a generic fiber.
pub fn real_topology_extremal(model: &SurfaceModel) -> Result<RealTopologyReport> {
    let mut violations = Vec::new();
    if let Some(f) = model
        .config
        .fibers()
        .iter()
        .find(|f| f.kind != FiberKind::IStar || f.m % 2 != 0)
    {
        violations.push(format!("fiber {f} is not of type I*_even"));
    }
    if !model.cusps_all_real {
        violations.push("not every cusp is real".to_string());
    }
    if !model.has_real_section {
        violations.push("no real section".to_string());
    }
    if model.genus != 0 {
        violations.push(format!("base has genus {}", model.genus));
    }
    if !violations.is_empty() {
        return Err(Error::Precondition(violations.join("; ")));
    }

    let forms: Vec<RealFiberForm> = model
        .config
        .fibers()
        .iter()
        .map(|&f| {
            real_forms(f)
                .into_iter()
                .find(|r| r.nearby == NearbyComponents::Two)
                .expect("I*_even has a two-component row")
        })
        .collect();
    let h1 = 2 - forms.iter().map(|r| r.chi_real).sum::<i64>();
    let t = model.config.len() as i64;
    if h1 != 2 + model.config.degree() + 4 * t {
        return Err(Error::Inconsistent(format!("h1 = {h1} disagrees with 2 + Σm + 4t")));
    }

    let section_class = 1;
    let fiber_class = 1;
    let h1_alg = section_class
        + fiber_class
        + model
            .config
            .fibers()
            .iter()
            .map(|&f| components_off_section(f))
            .sum::<i64>();
    if h1_alg != h1 {
        return Err(Error::Inconsistent(format!("h1_alg = {h1_alg} ≠ h1 = {h1}")));
    }

    let orientable = match orientability(model) {
        Orientability::Orientable => true,
        Orientability::NonOrientableNonempty => false,
        Orientability::Undetermined => {
            return Err(Error::Precondition("orientability undetermined".into()))
        }
    };
    let hodge = hodge_invariants(model)?;
    let h11 = hodge.h11.expect("genus-zero base gives a regular surface");
    let connected_components = match comessatti_connectedness(h1, h11, h1_alg, model.real_part_nonempty)? {
        Connectedness::Connected => 1,
        Connectedness::Inconclusive { bound } => {
            return Err(Error::Inconsistent(format!(
                "Comessatti bound {bound} does not certify connectedness"
            )))
        }
    };
    let type_tag = if orientable {
        TopologyType::S(h1 / 2)
    } else {
        TopologyType::V(h1)
    };
    Ok(RealTopologyReport {
        connected_components,
        h1,
        h1_alg,
        orientable,
        type_tag,
    })
}

/// Possible real forms of every fiber, for models outside the extremal case.
pub fn real_fiber_possibilities(model: &SurfaceModel) -> Vec<Vec<RealFiberForm>> {
    model.config.fibers().iter().map(|&f| real_forms(f)).collect()
}

/// Checks `h1_alg ≤ h1 ≤ h11` and returns whether `h1 = h11`.
pub fn ragsdale_viro_check(report: &RealTopologyReport, hodge: &HodgeInvariants) -> Result<bool> {
    let h11 = hodge
        .h11
        .ok_or_else(|| Error::Precondition("surface is not regular".into()))?;
    if report.h1_alg > report.h1 {
        return Err(Error::InequalityViolated(format!(
            "h1_alg = {} > h1 = {}",
            report.h1_alg, report.h1
        )));
    }
    if report.h1 > h11 {
        return Err(Error::InequalityViolated(format!("h1 = {} > h11 = {h11}", report.h1)));
    }
    Ok(report.h1 == h11)
}

/// Normalized regular elliptic surfaces deform into each other exactly when
/// their `χ(O)` agree.
pub fn same_deformation_class(chi: i64, chi_other: i64) -> bool {
    chi == chi_other
}

/// `Γ_k` with its all-`I*` lift.
#[derive(Clone, Debug)]
pub struct ExtremalModel {
    pub group: GammaK,
    pub model: SurfaceModel,
    pub hodge: HodgeInvariants,
    pub topology: RealTopologyReport,
}

pub fn extremal_model(group: GammaK) -> Result<ExtremalModel> {
    let rep = group.representation();
    let system = rep.parabolic_generator_system()?;
    let lifts = enumerate_lifts(&system)?;
    let lift = lifts
        .lifts
        .iter()
        .find(|l| l.configuration.all_star())
        .ok_or_else(|| Error::Inconsistent(format!("Γ_{} has no all-I* lift", group.k())))?;
    let model = SurfaceModel::new(rep, lift)?;
    let hodge = hodge_invariants(&model)?;
    let topology = real_topology_extremal(&model)?;
    ragsdale_viro_check(&topology, &hodge)?;
    Ok(ExtremalModel {
        group,
        model,
        hodge,
        topology,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibers::FiberType;
    use crate::gamma::{build_gamma_k, gamma2};

    fn gamma2_models() -> Vec<SurfaceModel> {
        let g = gamma2();
        let rep = g.representation();
        let lifts = enumerate_lifts(&rep.parabolic_generator_system().unwrap()).unwrap();
        lifts
            .lifts
            .iter()
            .map(|l| SurfaceModel::new(rep, l).unwrap())
            .collect()
    }

    #[test]
    fn gamma2_hodge_examples() {
        let mut seen: Vec<(usize, HodgeInvariants)> = gamma2_models()
            .iter()
            .map(|m| (m.config().star_count(), hodge_invariants(m).unwrap()))
            .collect();
        seen.sort_by_key(|(n, _)| *n);
        seen.dedup();
        assert_eq!(seen.len(), 2);
        assert_eq!(seen[0].0, 1);
        assert_eq!((seen[0].1.q, seen[0].1.chi_o, seen[0].1.h11), (0, 1, Some(10)));
        assert_eq!(seen[1].0, 3);
        assert_eq!((seen[1].1.q, seen[1].1.chi_o, seen[1].1.h11), (0, 2, Some(20)));
    }

    #[test]
    fn gamma5_hodge() {
        let x = extremal_model(build_gamma_k(5).unwrap()).unwrap();
        assert_eq!((x.hodge.q, x.hodge.chi_o, x.hodge.h11), (0, 5, Some(50)));
        assert_eq!(x.hodge.e_topological, 60);
    }

    #[test]
    fn normalization() {
        for m in gamma2_models() {
            assert!(is_normalized(&m));
            assert!(!is_normalized(&m.with_multiple_fiber(true)));
        }
    }

    #[test]
    fn extremal_examples() {
        let x2 = extremal_model(gamma2()).unwrap();
        assert_eq!((x2.topology.h1, x2.topology.h1_alg), (20, 20));
        assert_eq!(x2.topology.type_tag.to_string(), "S_10");
        let x3 = extremal_model(build_gamma_k(3).unwrap()).unwrap();
        assert_eq!((x3.topology.h1, x3.topology.h1_alg), (30, 30));
        assert_eq!(x3.topology.type_tag.to_string(), "V_30");
        assert!(!x3.topology.orientable);
    }

    #[test]
    fn extremal_rejects_mixed_fibers() {
        let mixed = gamma2_models()
            .into_iter()
            .find(|m| m.config().star_count() == 1)
            .unwrap();
        let err = real_topology_extremal(&mixed).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref s) if s.contains("I*_even")));
        let no_section = mixed.with_real_section(false);
        let Error::Precondition(msg) = real_topology_extremal(&no_section).unwrap_err() else {
            panic!("expected a precondition error");
        };
        assert!(msg.contains("I*_even") && msg.contains("real section"));
    }

    #[test]
    fn orientability_examples() {
        let k3 = gamma2_models()
            .into_iter()
            .find(|m| m.config().star_count() == 3)
            .unwrap();
        assert_eq!(orientability(&k3), Orientability::Orientable);
        let x3 = extremal_model(build_gamma_k(3).unwrap()).unwrap();
        assert_eq!(orientability(&x3.model), Orientability::NonOrientableNonempty);
        let x4 = extremal_model(build_gamma_k(4).unwrap()).unwrap();
        assert_eq!(
            orientability(&x4.model.with_real_part_nonempty(false)),
            Orientability::Undetermined
        );
        assert_eq!(orientability(&k3.with_multiple_fiber(true)), Orientability::Undetermined);
    }

    #[test]
    fn comessatti_examples() {
        assert_eq!(comessatti_connectedness(20, 20, 20, true).unwrap(), Connectedness::Connected);
        assert_eq!(comessatti_connectedness(30, 30, 30, true).unwrap(), Connectedness::Connected);
        assert_eq!(
            comessatti_connectedness(10, 20, 1, true).unwrap(),
            Connectedness::Inconclusive { bound: 15 }
        );
        assert_eq!(
            comessatti_connectedness(20, 20, 20, false).unwrap(),
            Connectedness::Inconclusive { bound: 1 }
        );
        assert!(comessatti_connectedness(20, 20, 21, true).is_err());
    }

    #[test]
    fn ragsdale_viro_examples() {
        let x2 = extremal_model(gamma2()).unwrap();
        assert!(ragsdale_viro_check(&x2.topology, &x2.hodge).unwrap());

        // rational model: h1_alg = h1 = h11 = 10
        let rational = gamma2_models()
            .into_iter()
            .find(|m| m.config().star_count() == 1)
            .unwrap();
        let hodge = hodge_invariants(&rational).unwrap();
        let report = RealTopologyReport {
            connected_components: 1,
            h1: 10,
            h1_alg: 10,
            orientable: false,
            type_tag: TopologyType::V(10),
        };
        assert!(ragsdale_viro_check(&report, &hodge).unwrap());

        let too_big = RealTopologyReport { h1: 21, ..x2.topology };
        assert!(matches!(
            ragsdale_viro_check(&too_big, &x2.hodge),
            Err(Error::InequalityViolated(_))
        ));
    }

    #[test]
    fn deformation_classes() {
        assert!(same_deformation_class(2, 2));
        assert!(!same_deformation_class(1, 2));
        for k in 2..=6 {
            let x = extremal_model(build_gamma_k(k).unwrap()).unwrap();
            assert!(same_deformation_class(i64::from(k), x.hodge.chi_o));
        }
    }

    #[test]
    fn model_rejects_mismatched_fibers() {
        let g = gamma2();
        let rep = g.representation();
        let lifts = enumerate_lifts(&rep.parabolic_generator_system().unwrap()).unwrap();
        let mut lift = lifts.lifts[0].clone();
        lift.configuration = FiberConfiguration::new(vec![FiberType::i(2); 2]);
        assert!(SurfaceModel::new(rep, &lift).is_err());
    }
}
